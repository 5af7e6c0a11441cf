//! Reference computation of deformed Lie algebra cohomology by the
//! Chevalley–Eilenberg formula on dense matrices over ℚ.
//!
//! Shares no code with `defcohom`: cochains are evaluated on basis vectors
//! of the Lie algebra, the bracket comes straight from structure constants,
//! and ranks come from plain dense Gauss–Jordan elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Structure constants of a Lie algebra given through its coframe:
/// dθ^i = Σ_{j<k} a[i][j][k] θ^j∧θ^k, stored antisymmetrically in (j, k).
/// The dual basis then satisfies [X_j, X_k] = −Σ_i a[i][j][k] X_i.
#[derive(Clone, Debug)]
pub struct LieStructure {
    pub n: usize,
    pub a: Vec<Vec<Vec<BigRational>>>,
}

impl LieStructure {
    pub fn zero(n: usize) -> Self {
        LieStructure { n, a: vec![vec![vec![BigRational::zero(); n]; n]; n] }
    }

    /// Sets the θ^j∧θ^k coefficient of dθ^i (j ≠ k), keeping antisymmetry.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: BigRational) {
        assert_ne!(j, k);
        self.a[i][k][j] = -c.clone();
        self.a[i][j][k] = c;
    }

    /// [X_j, X_k] as a coefficient vector.
    pub fn bracket(&self, j: usize, k: usize) -> Vec<BigRational> {
        (0..self.n).map(|i| -self.a[i][j][k].clone()).collect()
    }

    /// Jacobi identity on all basis triples.
    pub fn is_lie(&self) -> bool {
        let n = self.n;
        let br = |u: &[BigRational], v: &[BigRational]| -> Vec<BigRational> {
            let mut out = vec![BigRational::zero(); n];
            for j in 0..n {
                if u[j].is_zero() {
                    continue;
                }
                for k in 0..n {
                    if v[k].is_zero() {
                        continue;
                    }
                    let c = &u[j] * &v[k];
                    for (o, b) in out.iter_mut().zip(self.bracket(j, k)) {
                        *o += &c * b;
                    }
                }
            }
            out
        };
        let unit = |i: usize| -> Vec<BigRational> {
            (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect()
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (ux, uy, uz) = (unit(x), unit(y), unit(z));
                    let s1 = br(&ux, &br(&uy, &uz));
                    let s2 = br(&uy, &br(&uz, &ux));
                    let s3 = br(&uz, &br(&ux, &uy));
                    if (0..n).any(|i| !(&s1[i] + &s2[i] + &s3[i]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|i| mask & (1 << i) != 0).collect());
        }
    }
    out.sort();
    out
}

/// Value of the cochain (coefficients on sorted subsets) on the ordered
/// argument list `args`.
fn evaluate(cochain: &[BigRational], index: &dyn Fn(&[usize]) -> usize, args: &[usize]) -> BigRational {
    let mut sorted = args.to_vec();
    let mut sign = 1i32;
    for i in 0..sorted.len() {
        for j in 0..sorted.len() - 1 - i {
            if sorted[j] == sorted[j + 1] {
                return BigRational::zero();
            }
            if sorted[j] > sorted[j + 1] {
                sorted.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return BigRational::zero();
    }
    let v = cochain[index(&sorted)].clone();
    if sign < 0 {
        -v
    } else {
        v
    }
}

/// Dense matrix (rows = (k+1)-subsets) of d_ρ on k-cochains, where the
/// one-dimensional representation is ρ(X) = λ·ζ(X).
pub fn differential(s: &LieStructure, zeta: &[BigRational], lambda: &BigRational, k: usize) -> Vec<Vec<BigRational>> {
    let n = s.n;
    let cols = subsets(n, k);
    let rows = subsets(n, k + 1);
    let col_index = |t: &[usize]| cols.binary_search_by(|c| c.as_slice().cmp(t)).expect("sorted subset");
    let rho: Vec<BigRational> = zeta.iter().map(|z| z * lambda).collect();
    let mut m = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
    for (c, _) in cols.iter().enumerate() {
        let mut omega = vec![BigRational::zero(); cols.len()];
        omega[c] = BigRational::one();
        for (r, args) in rows.iter().enumerate() {
            let mut acc = BigRational::zero();
            for i in 0..=k {
                let rest: Vec<usize> = args.iter().enumerate().filter(|(p, _)| *p != i).map(|(_, &x)| x).collect();
                let term = &rho[args[i]] * evaluate(&omega, &col_index, &rest);
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            for i in 0..=k {
                for j in i + 1..=k {
                    let bracket = s.bracket(args[i], args[j]);
                    let rest: Vec<usize> = args.iter().enumerate().filter(|(p, _)| *p != i && *p != j).map(|(_, &x)| x).collect();
                    let mut val = BigRational::zero();
                    for (l, b) in bracket.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let mut full = vec![l];
                        full.extend_from_slice(&rest);
                        val += b * evaluate(&omega, &col_index, &full);
                    }
                    if (i + j) % 2 == 0 {
                        acc += val;
                    } else {
                        acc -= val;
                    }
                }
            }
            m[r][c] = acc;
        }
    }
    m
}

/// Rank by dense Gauss–Jordan elimination.
pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// dim H^k of the deformed complex C¹ → C² → …, which starts in degree 1
/// (so H¹ is the kernel of d on 1-cochains).
pub fn deformed_cohomology_dimension(s: &LieStructure, zeta: &[BigRational], lambda: &BigRational, k: usize) -> usize {
    assert!(k >= 1 && k <= s.n);
    let dk = differential(s, zeta, lambda, k);
    let cochains = dk.first().map_or(subsets(s.n, k).len(), |r| r.len());
    let kernel = cochains - dense_rank(dk);
    if k == 1 {
        kernel
    } else {
        kernel - dense_rank(differential(s, zeta, lambda, k - 1))
    }
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// dθ1 = 0, dθ2 = −θ1∧θ2, dθ3 = θ1∧θ3, dθ4 = 2θ1∧θ4, dθ5 = θ2∧θ3.
    fn five_dim() -> LieStructure {
        let mut s = LieStructure::zero(5);
        s.set(1, 0, 1, ratio(-1, 1));
        s.set(2, 0, 2, ratio(1, 1));
        s.set(3, 0, 3, ratio(2, 1));
        s.set(4, 1, 2, ratio(1, 1));
        s
    }

    #[test]
    fn jacobi() {
        assert!(five_dim().is_lie());
        let mut bad = LieStructure::zero(3);
        bad.set(0, 1, 2, ratio(1, 1));
        bad.set(1, 0, 1, ratio(1, 1));
        assert!(!bad.is_lie());
    }

    #[test]
    fn squares_to_zero() {
        let s = five_dim();
        let zeta = [ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)];
        let lam = ratio(-7, 3);
        let d1 = differential(&s, &zeta, &lam, 1);
        let d2 = differential(&s, &zeta, &lam, 2);
        for (r, row) in d2.iter().enumerate() {
            for c in 0..d1[0].len() {
                let v: BigRational = row.iter().zip(&d1).map(|(a, d1r)| a * &d1r[c]).sum();
                assert!(v.is_zero(), "row {r} col {c}");
            }
        }
    }

    #[test]
    fn five_dim_table() {
        let s = five_dim();
        let zeta = [ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)];
        assert_eq!(deformed_cohomology_dimension(&s, &zeta, &ratio(0, 1), 1), 1);
        for (lam, dim) in [(-3, 1), (-2, 1), (-1, 3), (1, 2), (0, 0), (5, 0)] {
            assert_eq!(deformed_cohomology_dimension(&s, &zeta, &ratio(lam, 1), 2), dim, "λ = {lam}");
        }
    }

    #[test]
    fn abelian_is_exterior_algebra() {
        let s = LieStructure::zero(4);
        let zeta = vec![BigRational::zero(); 4];
        assert_eq!(deformed_cohomology_dimension(&s, &zeta, &ratio(3, 1), 2), 6);
    }
}
