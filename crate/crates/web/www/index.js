import init, { fixture, check, resonances, verify_covering } from "./pkg/defcohom_web.js";

const $ = (id) => document.getElementById(id);

function show(json, passKey) {
  const r = JSON.parse(json);
  const verdict = $("verdict");
  if (!r.ok) {
    verdict.textContent = "input error";
    verdict.className = "fail";
    $("output").textContent = r.error;
    return;
  }
  if (passKey in r) {
    verdict.textContent = r[passKey] ? "PASS" : "FAIL";
    verdict.className = r[passKey] ? "pass" : "fail";
  } else {
    verdict.textContent = "";
  }
  $("output").textContent = JSON.stringify(r, null, 2);
}

await init();
$("load").onclick = () => { $("input").value = fixture($("fixture").value); };
$("check").onclick = () => show(check($("input").value), "pass");
$("resonances").onclick = () =>
  show(resonances($("input").value, Number($("degree").value), $("restrict").checked, Number($("seed").value)), "none");
$("covering").onclick = () => show(verify_covering($("input").value), "pass");
$("input").value = fixture("h.alg");
