//! Deformed cochain complexes d_{λζ}θ = dθ + λ ζ∧θ over a presentation.
//!
//! Cochains live on the generators with known differential (optionally
//! intersected with the declared ideal generators). Differentials land in
//! forms over all generators, so a cochain is closed only if the
//! components involving prolongation generators vanish too. The image
//! in degree k is d(Z) where Z is the set of (k−1)-cochains whose
//! differential stays inside the selected generators; this gives
//!
//!   dim H^k = dim ker d_k − (rank d_{k−1} − rank Outside_{k−1}),
//!
//! with `Outside` the rows of d_{k−1} indexed by tuples that touch an
//! unselected generator. For k = 1 there is no image term.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CohomologyError;
use crate::exterior::{ensure_closed_one_form, exterior_derivative, KForm};
use crate::linalg::{axpy, kernel, rank_profile, Echelon, RankProfile, SparseVec};
use crate::presentation::AlgebraPresentation;
use crate::scalars::{rat, rational_roots, LambdaPoly, Rational, Scalar};

/// All strictly increasing k-tuples over `symbols` (ascending), in lexicographic order.
pub fn tuples(symbols: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(symbols: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..symbols.len() {
            if symbols.len() - i < k - cur.len() {
                break;
            }
            cur.push(symbols[i]);
            rec(symbols, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(symbols, k, 0, &mut Vec::new(), &mut out);
    out
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Position of a strictly increasing tuple among all tuples of the same
/// length (combinatorial number system). Used as the row index.
pub fn tuple_rank(tuple: &[usize]) -> usize {
    tuple.iter().enumerate().map(|(i, &s)| binom(s, i + 1)).sum()
}

/// Symbols whose tuples form the cochain basis: known-differential
/// symbols, intersected with the ideal generators when `restrict_ideal`
/// is set and an ideal is declared.
pub fn selected_symbols(p: &AlgebraPresentation, restrict_ideal: bool) -> Vec<usize> {
    let known = p.coframe().known_indices();
    if restrict_ideal && !p.ideal().is_empty() {
        known.into_iter().filter(|i| p.ideal().contains(i)).collect()
    } else {
        known
    }
}

/// Ordered degree-k basis: lexicographic tuples over the selected symbols
/// (or over every symbol when `restrict_to_known` is false).
pub fn cochain_basis(p: &AlgebraPresentation, k: usize, restrict_to_known: bool) -> Vec<Vec<usize>> {
    let symbols: Vec<usize> = if restrict_to_known {
        selected_symbols(p, false)
    } else {
        (0..p.coframe().len()).collect()
    };
    tuples(&symbols, k)
}

/// Matrix of d_{λζ} on degree-k cochains, split as `d + λ·z`.
#[derive(Clone, Debug)]
pub struct DifferentialMatrix {
    pub degree: usize,
    /// Column basis (degree-k tuples).
    pub basis: Vec<Vec<usize>>,
    /// Constant part: coordinates of dθ, rows indexed by [`tuple_rank`].
    pub d: Vec<SparseVec<Rational>>,
    /// λ-linear part: coordinates of ζ∧θ.
    pub z: Vec<SparseVec<Rational>>,
    /// Row tuple for every row index that occurs.
    pub rows: BTreeMap<usize, Vec<usize>>,
}

impl DifferentialMatrix {
    pub fn poly_columns(&self) -> Vec<SparseVec<LambdaPoly>> {
        self.d
            .iter()
            .zip(&self.z)
            .map(|(d, z)| {
                let mut keys: BTreeSet<usize> = d.keys().copied().collect();
                keys.extend(z.keys().copied());
                keys.into_iter()
                    .map(|k| {
                        let c0 = d.get(&k).cloned().unwrap_or_else(Scalar::zero);
                        let c1 = z.get(&k).cloned().unwrap_or_else(Scalar::zero);
                        (k, LambdaPoly::new(vec![c0, c1]))
                    })
                    .filter(|(_, p)| !Scalar::is_zero(p))
                    .collect()
            })
            .collect()
    }

    pub fn at(&self, lambda: &Rational) -> Vec<SparseVec<Rational>> {
        self.d
            .iter()
            .zip(&self.z)
            .map(|(d, z)| {
                let mut v = d.clone();
                axpy(&mut v, lambda, z);
                v
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct DeformedComplex {
    presentation: AlgebraPresentation,
    zeta: KForm<Rational>,
    selected: Vec<usize>,
    restrict_ideal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport {
    pub degree: usize,
    pub lambda: Rational,
    pub dimension: usize,
    pub kernel_dimension: usize,
    pub image_dimension: usize,
    pub cochain_dimension: usize,
    /// Cocycles whose classes form a basis, reduced modulo the image.
    pub representatives: Vec<KForm<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport {
    pub degree: usize,
    pub generic_dimension: usize,
    /// Generic dimension computed from the ranks over ℚ(λ).
    pub generic_dimension_from_ranks: usize,
    pub probe: Rational,
    pub candidates: Vec<Rational>,
    pub resonances: BTreeMap<Rational, usize>,
    /// Candidates where the dimension fell below the generic value.
    pub drops: BTreeMap<Rational, usize>,
    pub pivot_polynomials: Vec<LambdaPoly>,
    /// Pivot factors without rational roots.
    pub irrational_witness: Vec<LambdaPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassMembership {
    NotCocycle { residual: KForm<Rational> },
    /// `primitive` satisfies d_{λζ}(primitive) = candidate.
    Exact { primitive: KForm<Rational> },
    /// Coordinates against [`CohomologyReport::representatives`].
    NontrivialClass { coordinates: Vec<Rational> },
}

impl DeformedComplex {
    pub fn new(p: &AlgebraPresentation, zeta: KForm<Rational>, restrict_ideal: bool) -> Result<Self, CohomologyError> {
        ensure_closed_one_form(&zeta, p.table())?;
        Ok(DeformedComplex { presentation: p.clone(), selected: selected_symbols(p, restrict_ideal), zeta, restrict_ideal })
    }

    /// Uses the closed mark `name` as ζ.
    pub fn with_mark(p: &AlgebraPresentation, name: &str, restrict_ideal: bool) -> Result<Self, CohomologyError> {
        let zeta = p.closed_mark(name).ok_or_else(|| CohomologyError::UnknownZeta(name.to_string()))?.clone();
        Self::new(p, zeta, restrict_ideal)
    }

    /// Uses the first closed mark as ζ.
    pub fn with_default_mark(p: &AlgebraPresentation, restrict_ideal: bool) -> Result<Self, CohomologyError> {
        let mark = p.closed_marks().first().ok_or_else(|| CohomologyError::UnknownZeta("(none declared)".into()))?;
        Self::new(p, mark.form.clone(), restrict_ideal)
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.presentation
    }

    pub fn zeta(&self) -> &KForm<Rational> {
        &self.zeta
    }

    pub fn restrict_ideal(&self) -> bool {
        self.restrict_ideal
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn basis(&self, k: usize) -> Vec<Vec<usize>> {
        tuples(&self.selected, k)
    }

    pub fn differential_matrix(&self, k: usize) -> Result<DifferentialMatrix, CohomologyError> {
        if k == 0 {
            return Err(CohomologyError::DegreeOutOfRange(k));
        }
        let frame = self.presentation.coframe();
        let basis = self.basis(k);
        let mut rows = BTreeMap::new();
        let mut d = Vec::with_capacity(basis.len());
        let mut z = Vec::with_capacity(basis.len());
        let mut encode = |f: &KForm<Rational>| -> SparseVec<Rational> {
            f.terms()
                .iter()
                .map(|(t, c)| {
                    let r = tuple_rank(t);
                    rows.entry(r).or_insert_with(|| t.clone());
                    (r, c.clone())
                })
                .collect()
        };
        for b in &basis {
            let form = KForm::from_terms(frame, k, [(b.clone(), <Rational as Scalar>::one())]);
            d.push(encode(&exterior_derivative(&form, self.presentation.table())?));
            z.push(encode(&self.zeta.wedge(&form)?));
        }
        Ok(DifferentialMatrix { degree: k, basis, d, z, rows })
    }

    fn inside(&self, tuple: &[usize]) -> bool {
        tuple.iter().all(|s| self.selected.binary_search(s).is_ok())
    }

    fn outside_part(&self, m: &DifferentialMatrix, cols: &[SparseVec<Rational>]) -> Vec<SparseVec<Rational>> {
        cols.iter()
            .map(|c| c.iter().filter(|(r, _)| !self.inside(&m.rows[r])).map(|(r, v)| (*r, v.clone())).collect())
            .collect()
    }

    fn to_form(&self, basis: &[Vec<usize>], v: &SparseVec<Rational>, k: usize) -> KForm<Rational> {
        KForm::from_terms(self.presentation.coframe(), k, v.iter().map(|(i, c)| (basis[*i].clone(), c.clone())))
    }

    /// Image of the previous differential restricted to cochains mapping
    /// inside, expressed in degree-k basis coordinates, with the
    /// corresponding preimages in degree-(k−1) basis coordinates.
    fn image(&self, k: usize, lambda: &Rational) -> Result<(Vec<SparseVec<Rational>>, Vec<SparseVec<Rational>>), CohomologyError> {
        if k < 2 {
            return Ok((Vec::new(), Vec::new()));
        }
        let prev = self.differential_matrix(k - 1)?;
        let cols = prev.at(lambda);
        let outside = self.outside_part(&prev, &cols);
        let preimages = kernel(&outside);
        let basis_k = self.basis(k);
        let index: HashMap<usize, usize> = basis_k.iter().enumerate().map(|(i, t)| (tuple_rank(t), i)).collect();
        let images = preimages
            .iter()
            .map(|z| {
                let mut v = SparseVec::new();
                for (j, c) in z {
                    axpy(&mut v, c, &cols[*j]);
                }
                v.into_iter().map(|(r, c)| (index[&r], c)).collect()
            })
            .collect();
        Ok((images, preimages))
    }

    pub fn cohomology_dimension(&self, k: usize, lambda: &Rational) -> Result<CohomologyReport, CohomologyError> {
        let m = self.differential_matrix(k)?;
        let ker = kernel(&m.at(lambda));
        let (images, _) = self.image(k, lambda)?;
        let mut ech = Echelon::new();
        for v in &images {
            ech.insert(v);
        }
        let image_dimension = ech.rank();
        let mut representatives = Vec::new();
        for v in &ker {
            let r = ech.reduce(v);
            if !r.is_empty() {
                ech.insert(&r);
                representatives.push(self.to_form(&m.basis, &r, k));
            }
        }
        Ok(CohomologyReport {
            degree: k,
            lambda: lambda.clone(),
            dimension: ker.len() - image_dimension,
            kernel_dimension: ker.len(),
            image_dimension,
            cochain_dimension: m.basis.len(),
            representatives,
        })
    }

    /// Rank data over ℚ[λ] for d_k, d_{k−1} and the outside rows of d_{k−1}.
    pub fn rank_profiles(&self, k: usize) -> Result<Vec<RankProfile>, CohomologyError> {
        let m = self.differential_matrix(k)?;
        let mut out = vec![rank_profile(&m.poly_columns())];
        if k >= 2 {
            let prev = self.differential_matrix(k - 1)?;
            let cols = prev.poly_columns();
            let outside: Vec<SparseVec<LambdaPoly>> = cols
                .iter()
                .map(|c| c.iter().filter(|(r, _)| !self.inside(&prev.rows[r])).map(|(r, v)| (*r, v.clone())).collect())
                .collect();
            out.push(rank_profile(&cols));
            out.push(rank_profile(&outside));
        }
        Ok(out)
    }

    pub fn resonance_scan(&self, k: usize, seed: u64) -> Result<ResonanceReport, CohomologyError> {
        let profiles = self.rank_profiles(k)?;
        let n = self.basis(k).len();
        let generic_dimension_from_ranks = match profiles.as_slice() {
            [dk] => n - dk.generic_rank,
            [dk, dp, out] => n - dk.generic_rank - (dp.generic_rank - out.generic_rank),
            _ => unreachable!(),
        };
        let mut pivots: Vec<LambdaPoly> = Vec::new();
        for p in profiles.iter().flat_map(|p| p.pivot_polys.iter()) {
            if !pivots.contains(p) {
                pivots.push(p.clone());
            }
        }
        let mut candidates = BTreeSet::new();
        let mut irrational_witness = Vec::new();
        for p in &pivots {
            let roots = rational_roots(p)?;
            let mut rest = p.clone();
            for r in &roots {
                let lin = LambdaPoly::new(vec![-r.clone(), Scalar::one()]);
                while let Some(q) = rest.div_exact(&lin) {
                    rest = q;
                }
            }
            if rest.degree().unwrap_or(0) > 0 && !irrational_witness.contains(&rest.monic()) {
                irrational_witness.push(rest.monic());
            }
            candidates.extend(roots);
        }
        let probe = random_probe(seed, &candidates);
        let generic_dimension = self.cohomology_dimension(k, &probe)?.dimension;
        let mut resonances = BTreeMap::new();
        let mut drops = BTreeMap::new();
        for c in &candidates {
            let dim = self.cohomology_dimension(k, c)?.dimension;
            if dim > generic_dimension {
                resonances.insert(c.clone(), dim);
            } else if dim < generic_dimension {
                drops.insert(c.clone(), dim);
            }
        }
        Ok(ResonanceReport {
            degree: k,
            generic_dimension,
            generic_dimension_from_ranks,
            probe,
            candidates: candidates.into_iter().collect(),
            resonances,
            drops,
            pivot_polynomials: pivots,
            irrational_witness,
        })
    }

    /// Decides whether `candidate` is a d_{λζ}-cocycle and, if so, whether
    /// it is exact or which combination of representatives it equals.
    pub fn class_membership(
        &self,
        k: usize,
        lambda: &Rational,
        candidate: &KForm<Rational>,
    ) -> Result<ClassMembership, CohomologyError> {
        if candidate.degree() != k {
            return Err(CohomologyError::DegreeMismatch { expected: k, found: candidate.degree() });
        }
        let basis = self.basis(k);
        let index: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut v = SparseVec::new();
        for (t, c) in candidate.terms() {
            let names: Vec<&str> = t.iter().map(|&s| self.presentation.coframe().name(s)).collect();
            let i = index.get(t).ok_or_else(|| CohomologyError::OutsideCochainSpace(names.join("^")))?;
            v.insert(*i, c.clone());
        }
        let residual = crate::exterior::deformed_derivative_unchecked(candidate, lambda, &self.zeta, self.presentation.table())?;
        if !residual.is_zero() {
            return Ok(ClassMembership::NotCocycle { residual });
        }
        let report = self.cohomology_dimension(k, lambda)?;
        let (images, preimages) = self.image(k, lambda)?;
        let mut ech = Echelon::new();
        for im in &images {
            ech.insert(im);
        }
        let reps: Vec<SparseVec<Rational>> = report
            .representatives
            .iter()
            .map(|r| r.terms().iter().map(|(t, c)| (index[t], c.clone())).collect())
            .collect();
        for r in &reps {
            ech.insert(r);
        }
        let x = ech.solve(&v).expect("every cocycle lies in image + representatives");
        let n_img = images.len();
        let coordinates: Vec<Rational> = (0..reps.len()).map(|i| x.get(&(n_img + i)).cloned().unwrap_or_else(Scalar::zero)).collect();
        if coordinates.iter().all(Scalar::is_zero) {
            let prev_basis = self.basis(k - 1);
            let mut pre = SparseVec::new();
            for (j, c) in x.iter().filter(|(j, _)| **j < n_img) {
                axpy(&mut pre, c, &preimages[*j]);
            }
            Ok(ClassMembership::Exact { primitive: self.to_form(&prev_basis, &pre, k - 1) })
        } else {
            Ok(ClassMembership::NontrivialClass { coordinates })
        }
    }
}

/// Seeded rational probe avoiding the given values.
pub fn random_probe(seed: u64, avoid: &BTreeSet<Rational>) -> Rational {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n: i64 = rng.gen_range(-997..=997);
        let d: i64 = rng.gen_range(1..=97);
        let r = rat(n, d);
        if !avoid.contains(&r) {
            return r;
        }
    }
}
