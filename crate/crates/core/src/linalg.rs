//! Sparse exact elimination over ℚ and over ℚ[λ].

use std::collections::BTreeMap;

use crate::scalars::{LambdaPoly, Rational, Scalar};

pub type SparseVec<S> = BTreeMap<usize, S>;

pub fn axpy<S: Scalar>(y: &mut SparseVec<S>, a: &S, x: &SparseVec<S>) {
    for (k, v) in x {
        let delta = a.mul(v);
        match y.get_mut(k) {
            Some(cur) => {
                let next = cur.add(&delta);
                if next.is_zero() {
                    y.remove(k);
                } else {
                    *cur = next;
                }
            }
            None => {
                if !delta.is_zero() {
                    y.insert(*k, delta);
                }
            }
        }
    }
}

pub fn scale_vec<S: Scalar>(x: &SparseVec<S>, a: &S) -> SparseVec<S> {
    x.iter()
        .map(|(k, v)| (*k, a.mul(v)))
        .filter(|(_, v)| !v.is_zero())
        .collect()
}

#[derive(Clone, Debug)]
struct EchelonRow {
    vec: SparseVec<Rational>,
    tag: SparseVec<Rational>,
}

/// Incremental row-echelon basis over ℚ. Every stored row has a leading 1
/// at its pivot key, which is its smallest key. Rows optionally carry a
/// tag recording which inserted vectors they combine.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, EchelonRow>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    fn reduce_tagged(&self, mut v: SparseVec<Rational>, mut tag: SparseVec<Rational>) -> (SparseVec<Rational>, SparseVec<Rational>) {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).map(|(k, _)| *k).find(|k| self.rows.contains_key(k));
            let Some(k) = next else { break };
            let c = v[&k].clone();
            let row = &self.rows[&k];
            let neg = -c;
            axpy(&mut v, &neg, &row.vec);
            axpy(&mut tag, &neg, &row.tag);
            cursor = k + 1;
        }
        (v, tag)
    }

    /// Remainder of `v` modulo the span; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &SparseVec<Rational>) -> SparseVec<Rational> {
        self.reduce_tagged(v.clone(), SparseVec::new()).0
    }

    pub fn contains(&self, v: &SparseVec<Rational>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts the next vector (tagged with its insertion index). Returns
    /// `Some(relation)` when it is dependent: the relation is a combination
    /// of inserted vectors that sums to zero.
    pub fn insert(&mut self, v: &SparseVec<Rational>) -> Option<SparseVec<Rational>> {
        let idx = self.inserted;
        self.inserted += 1;
        let mut tag = SparseVec::new();
        tag.insert(idx, <Rational as Scalar>::one());
        let (mut r, mut t) = self.reduce_tagged(v.clone(), tag);
        match r.keys().next().copied() {
            None => Some(t),
            Some(p) => {
                let inv = r[&p].recip();
                if inv != Scalar::one() {
                    r = scale_vec(&r, &inv);
                    t = scale_vec(&t, &inv);
                }
                self.rows.insert(p, EchelonRow { vec: r, tag: t });
                None
            }
        }
    }

    /// Coefficients `x` with `Σ x_i · inserted_i = target`, if solvable.
    pub fn solve(&self, target: &SparseVec<Rational>) -> Option<SparseVec<Rational>> {
        let (r, t) = self.reduce_tagged(target.clone(), SparseVec::new());
        r.is_empty().then(|| scale_vec(&t, &<Rational as Scalar>::one().neg()))
    }
}

/// Kernel basis of the linear map sending basis vector `j` to `columns[j]`.
pub fn kernel(columns: &[SparseVec<Rational>]) -> Vec<SparseVec<Rational>> {
    let mut ech = Echelon::new();
    columns.iter().filter_map(|c| ech.insert(c)).collect()
}

pub fn rank(columns: &[SparseVec<Rational>]) -> usize {
    let mut ech = Echelon::new();
    for c in columns {
        ech.insert(c);
    }
    ech.rank()
}

pub fn specialize(v: &SparseVec<LambdaPoly>, at: &Rational) -> SparseVec<Rational> {
    v.iter()
        .map(|(k, p)| (*k, p.eval(at)))
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

/// Generic rank over ℚ(λ) together with every non-constant pivot met
/// during elimination (as monic polynomials). Off the roots of those
/// pivots the specialized rank equals the generic rank.
#[derive(Clone, Debug, PartialEq)]
pub struct RankProfile {
    pub generic_rank: usize,
    pub pivot_polys: Vec<LambdaPoly>,
}

/// Fraction-free elimination over ℚ[λ]. Pivot choice is deterministic:
/// lowest λ-degree first, then smallest position, then earliest vector.
pub fn rank_profile(columns: &[SparseVec<LambdaPoly>]) -> RankProfile {
    let mut active: Vec<SparseVec<LambdaPoly>> = columns.iter().filter(|c| !c.is_empty()).cloned().collect();
    let mut pivots: Vec<LambdaPoly> = Vec::new();
    let mut rank = 0;
    while !active.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None;
        for (vi, v) in active.iter().enumerate() {
            for (k, p) in v {
                let d = p.degree().unwrap_or(0);
                let cand = (d, *k, vi);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
                if d == 0 {
                    break;
                }
            }
        }
        let Some((deg, key, vi)) = best else { break };
        let mut pv = active.swap_remove(vi);
        let piv = pv[&key].clone();
        rank += 1;
        if deg == 0 {
            let inv = LambdaPoly::constant(piv.coeff(0).recip());
            pv = scale_vec(&pv, &inv);
            for w in active.iter_mut() {
                if let Some(c) = w.get(&key).cloned() {
                    axpy(w, &c.neg(), &pv);
                }
            }
        } else {
            let monic = piv.monic();
            if !pivots.contains(&monic) {
                pivots.push(monic);
            }
            for w in active.iter_mut() {
                if let Some(c) = w.get(&key).cloned() {
                    let mut next = scale_vec(w, &piv);
                    axpy(&mut next, &c.neg(), &pv);
                    normalize_content(&mut next);
                    *w = next;
                }
            }
        }
        active.retain(|w| !w.is_empty());
    }
    pivots.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| format!("{a}").cmp(&format!("{b}"))));
    RankProfile { generic_rank: rank, pivot_polys: pivots }
}

// Rescale by a rational constant so the first entry's leading coefficient is 1.
fn normalize_content(v: &mut SparseVec<LambdaPoly>) {
    let lead = v.values().next().and_then(|p| p.leading().cloned());
    if let Some(l) = lead {
        if l != Scalar::one() && !Scalar::is_zero(&l) {
            let inv = LambdaPoly::constant(l.recip());
            *v = scale_vec(v, &inv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rat};

    fn rv(entries: &[(usize, i64)]) -> SparseVec<Rational> {
        entries.iter().map(|&(k, v)| (k, int(v))).collect()
    }

    fn pv(entries: &[(usize, &[i64])]) -> SparseVec<LambdaPoly> {
        entries.iter().map(|&(k, c)| (k, LambdaPoly::from_ints(c))).collect()
    }

    #[test]
    fn kernel_and_solve() {
        let cols = vec![rv(&[(0, 1), (1, 2)]), rv(&[(0, 2), (1, 4)]), rv(&[(1, 1)])];
        let ker = kernel(&cols);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], rv(&[(0, -2), (1, 1)]));
        let mut e = Echelon::new();
        for c in &cols {
            e.insert(c);
        }
        let x = e.solve(&rv(&[(0, 3), (1, 7)])).unwrap();
        // 3*col0 + 1*col2
        assert_eq!(x, rv(&[(0, 3), (2, 1)]));
        assert!(e.solve(&rv(&[(2, 1)])).is_none());
    }

    #[test]
    fn rank_profile_examples() {
        let one_by_one = rank_profile(&[pv(&[(0, &[3, 1])])]);
        assert_eq!(one_by_one.generic_rank, 1);
        assert_eq!(one_by_one.pivot_polys, vec![LambdaPoly::from_ints(&[3, 1])]);

        let id = rank_profile(&[pv(&[(0, &[1])]), pv(&[(1, &[1])])]);
        assert_eq!(id.generic_rank, 2);
        assert!(id.pivot_polys.is_empty());

        // [[λ, 1], [λ², λ]]: columns (λ, λ²) and (1, λ)
        let m = rank_profile(&[pv(&[(0, &[0, 1]), (1, &[0, 0, 1])]), pv(&[(0, &[1]), (1, &[0, 1])])]);
        assert_eq!(m.generic_rank, 1);
    }

    #[test]
    fn rank_profile_pivots_cover_drops() {
        // [[λ, 1], [1, λ]] has rank 1 exactly at λ = ±1
        let cols = [pv(&[(0, &[0, 1]), (1, &[1])]), pv(&[(0, &[1]), (1, &[0, 1])])];
        let prof = rank_profile(&cols);
        assert_eq!(prof.generic_rank, 2);
        let roots: Vec<_> = prof
            .pivot_polys
            .iter()
            .flat_map(|p| crate::scalars::rational_roots(p).unwrap())
            .collect();
        assert!(roots.contains(&int(1)) && roots.contains(&int(-1)));
        for x in [int(1), int(-1)] {
            let spec: Vec<_> = cols.iter().map(|c| specialize(c, &x)).collect();
            assert_eq!(rank(&spec), 1);
        }
        let spec: Vec<_> = cols.iter().map(|c| specialize(c, &rat(1, 3))).collect();
        assert_eq!(rank(&spec), 2);
    }
}
