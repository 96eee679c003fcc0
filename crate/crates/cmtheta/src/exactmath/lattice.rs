//! Exact enumeration of vectors of prescribed norm in a positive definite
//! rational quadratic lattice. The basis is first LLL reduced (exact
//! rational arithmetic, delta = 3/4), then the search is Fincke-Pohst: an
//! LDL decomposition of the reduced Gram matrix turns the form into a sum
//! of weighted complete squps, and a depth-first scan bounds one
//! coordinate at a time. Floating point is used only to propose candidate
//! windows (padded by one on each side); membership is always decided in
//! exact rational arithmetic. Reported coordinates are always relative to
//! the basis the lattice was constructed with.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct PosDefLattice {
    n: usize,
    gram: Vec<Vec<BigRational>>,
    /// Unimodular rows: reduced basis vector i is sum_j trans[i][j] b_j.
    trans: Vec<Vec<BigInt>>,
    /// Diagonal weights of the LDL decomposition of the reduced Gram
    /// matrix, all positive.
    d: Vec<BigRational>,
    /// u[i][j] for j > i: the unit upper triangular factor, so that
    /// Q(x) = sum_i d[i] * (x_i + sum_{j>i} u[i][j] x_j)^2 in reduced
    /// coordinates.
    u: Vec<Vec<BigRational>>,
}

/// LDL decomposition of a symmetric positive definite matrix: returns the
/// diagonal d and the strictly lower triangular multipliers l with
/// g = L diag(d) L^T, L unit lower triangular.
fn ldl(gram: &[Vec<BigRational>]) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = gram.len();
    let zero = BigRational::zero();
    let mut l = vec![vec![zero.clone(); n]; n];
    let mut d = vec![zero; n];
    for i in 0..n {
        let mut di = gram[i][i].clone();
        for k in 0..i {
            di -= &l[i][k] * &l[i][k] * &d[k];
        }
        if !di.is_positive() {
            return Err(Error::arithmetic("gram matrix is not positive definite"));
        }
        d[i] = di;
        for j in (i + 1)..n {
            let mut s = gram[j][i].clone();
            for k in 0..i {
                s -= &l[j][k] * &l[i][k] * &d[k];
            }
            l[j][i] = s / &d[i];
        }
    }
    Ok((d, l))
}

/// Gram matrix of the transformed basis, (t g t^T)[i][j].
fn transformed_gram(gram: &[Vec<BigRational>], trans: &[Vec<BigInt>]) -> Vec<Vec<BigRational>> {
    let n = gram.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for a in 0..n {
                        if trans[i][a].is_zero() {
                            continue;
                        }
                        for b in 0..n {
                            if trans[j][b].is_zero() {
                                continue;
                            }
                            acc += &gram[a][b] * BigRational::from(&trans[i][a] * &trans[j][b]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Exact LLL on a positive definite Gram matrix, delta = 3/4. Returns the
/// unimodular transform whose rows express the reduced basis in the
/// original one. The caller guarantees positive definiteness.
fn lll_transform(gram: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    let n = gram.len();
    let mut trans: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    if n < 2 {
        return trans;
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let reduce = |trans: &mut Vec<Vec<BigInt>>, k: usize, j: usize, mu: &BigRational| {
        if mu.abs() <= half {
            return false;
        }
        let r = mu.round().to_integer();
        for t in 0..n {
            let adj = &r * &trans[j][t];
            trans[k][t] -= adj;
        }
        true
    };
    let mut k = 1;
    while k < n {
        let g = transformed_gram(gram, &trans);
        let (d, l) = ldl(&g).expect("unimodular change keeps definiteness");
        if reduce(&mut trans, k, k - 1, &l[k][k - 1]) {
            continue;
        }
        let mu = &l[k][k - 1];
        if d[k] >= (&delta - mu * mu) * &d[k - 1] {
            for j in (0..k.saturating_sub(1)).rev() {
                if reduce(&mut trans, k, j, &l[k][j]) {
                    break;
                }
            }
            // Only advance once b_k is fully size reduced.
            let g = transformed_gram(gram, &trans);
            let (_, l) = ldl(&g).expect("unimodular change keeps definiteness");
            if (0..k).all(|j| l[k][j].abs() <= half) {
                k += 1;
            }
        } else {
            trans.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    trans
}

impl PosDefLattice {
    /// Builds the lattice from a symmetric Gram matrix; fails if the matrix
    /// is not symmetric positive definite.
    pub fn new(gram: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::arithmetic("gram matrix is not square"));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::arithmetic("gram matrix is not symmetric"));
                }
            }
        }
        ldl(&gram)?;
        let trans = lll_transform(&gram);
        let reduced = transformed_gram(&gram, &trans);
        let (d, l) = ldl(&reduced)?;
        let mut u = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                u[i][j] = l[j][i].clone();
            }
        }
        Ok(PosDefLattice {
            n,
            gram,
            trans,
            d,
            u,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    /// Exact value of the quadratic form at an integer vector.
    pub fn quad(&self, x: &[BigInt]) -> BigRational {
        assert_eq!(x.len(), self.n);
        let mut acc = BigRational::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                acc += &self.gram[i][j] * BigRational::from(&x[i] * &x[j]);
            }
        }
        acc
    }

    /// All integer vectors x with Q(x) equal to the target, sorted
    /// lexicographically. The zero vector is never reported, so a target of
    /// zero yields an empty list.
    pub fn enumerate_by_norm(&self, target: &BigRational) -> Vec<Vec<BigInt>> {
        let mut out: Vec<Vec<BigInt>> = self
            .scan(target)
            .into_iter()
            .filter(|(norm, _)| norm == target)
            .map(|(_, x)| x)
            .collect();
        out.sort();
        out
    }

    /// All nonzero integer vectors with 0 < Q(x) <= bound, each paired
    /// with its exact norm and sorted by norm then coordinates.
    pub fn enumerate_up_to(&self, bound: &BigRational) -> Vec<(BigRational, Vec<BigInt>)> {
        let mut out = self.scan(bound);
        out.sort();
        out
    }

    /// Number of integer vectors of the given norm.
    pub fn count_by_norm(&self, target: &BigRational) -> usize {
        self.scan(target)
            .iter()
            .filter(|(norm, _)| norm == target)
            .count()
    }

    fn scan(&self, bound: &BigRational) -> Vec<(BigRational, Vec<BigInt>)> {
        let mut out = Vec::new();
        if bound.is_negative() || bound.is_zero() {
            return out;
        }
        let mut x = vec![BigInt::zero(); self.n];
        self.walk(self.n - 1, &BigRational::zero(), bound, &mut x, &mut out);
        out
    }

    /// Coordinates in the construction basis of the reduced-coordinate
    /// vector y: x_j = sum_i y_i trans[i][j].
    fn to_original(&self, y: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| &y[i] * &self.trans[i][j]).sum())
            .collect()
    }

    fn walk(
        &self,
        level: usize,
        partial: &BigRational,
        bound: &BigRational,
        x: &mut Vec<BigInt>,
        out: &mut Vec<(BigRational, Vec<BigInt>)>,
    ) {
        // Center of the complete square at this level, from the already
        // fixed coordinates above it.
        let mut c = BigRational::zero();
        for j in (level + 1)..self.n {
            c += &self.u[level][j] * BigRational::from(x[j].clone());
        }
        let rem = bound - partial;
        let ratio = (&rem / &self.d[level]).to_f64().unwrap_or(0.0).max(0.0);
        let radius = ratio.sqrt();
        let cf = c.to_f64().unwrap_or(0.0);
        let lo = (-cf - radius - 1.0).floor() as i64;
        let hi = (-cf + radius + 1.0).ceil() as i64;
        for xi in lo..=hi {
            let shifted = BigRational::from(BigInt::from(xi)) + &c;
            let term = &self.d[level] * &shifted * &shifted;
            let next = partial + &term;
            if &next > bound {
                continue;
            }
            x[level] = BigInt::from(xi);
            if level == 0 {
                if !next.is_zero() {
                    out.push((next, self.to_original(x)));
                }
            } else {
                self.walk(level - 1, &next, bound, x, out);
            }
        }
        x[level] = BigInt::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn gram_int(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect()
    }

    #[test]
    fn sum_of_two_squares() {
        let l = PosDefLattice::new(gram_int(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(l.count_by_norm(&rat(25)), 12);
        assert_eq!(l.count_by_norm(&rat(3)), 0);
        assert_eq!(l.count_by_norm(&rat(0)), 0);
        let v = l.enumerate_by_norm(&rat(1));
        assert_eq!(v.len(), 4);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sum_of_four_squares_counts() {
        let l = PosDefLattice::new(gram_int(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]))
        .unwrap();
        // r4(n) = 8 * sum of divisors of n not divisible by 4.
        assert_eq!(l.count_by_norm(&rat(1)), 8);
        assert_eq!(l.count_by_norm(&rat(2)), 24);
        assert_eq!(l.count_by_norm(&rat(3)), 32);
        assert_eq!(l.count_by_norm(&rat(4)), 24);
        assert_eq!(l.count_by_norm(&rat(12)), 96);
    }

    #[test]
    fn matches_boxed_bruteforce() {
        let gram = gram_int(&[&[2, 1], &[1, 3]]);
        let l = PosDefLattice::new(gram).unwrap();
        for t in 1..=40i64 {
            let target = rat(t);
            let fast = l.enumerate_by_norm(&target);
            let mut slow = Vec::new();
            for a in -12i64..=12 {
                for b in -12i64..=12 {
                    let x = vec![BigInt::from(a), BigInt::from(b)];
                    if l.quad(&x) == target {
                        slow.push(x);
                    }
                }
            }
            slow.sort();
            assert_eq!(fast, slow, "target {}", t);
        }
    }

    #[test]
    fn skew_basis_reduces() {
        // Basis (1, 0), (100, 1) of Z^2: the raw Fincke-Pohst windows are
        // hopeless without reduction, the answers must be unchanged.
        let l = PosDefLattice::new(gram_int(&[&[1, 100], &[100, 10001]])).unwrap();
        assert_eq!(l.count_by_norm(&rat(1)), 4);
        assert_eq!(l.count_by_norm(&rat(25)), 12);
        let hits = l.enumerate_by_norm(&rat(1));
        for x in &hits {
            assert_eq!(l.quad(x), rat(1));
        }
    }

    #[test]
    fn bounded_scan_agrees_with_exact_queries() {
        let l = PosDefLattice::new(gram_int(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 4]])).unwrap();
        let all = l.enumerate_up_to(&rat(20));
        assert!(all.windows(2).all(|w| w[0] <= w[1]));
        for t in 1..=20i64 {
            let expect = l.count_by_norm(&rat(t));
            let got = all.iter().filter(|(n, _)| *n == rat(t)).count();
            assert_eq!(expect, got, "target {}", t);
        }
        for (norm, x) in &all {
            assert_eq!(&l.quad(x), norm);
        }
    }

    #[test]
    fn fractional_gram() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        let l = PosDefLattice::new(vec![
            vec![half.clone(), quarter.clone()],
            vec![quarter, half.clone()],
        ])
        .unwrap();
        // Q(x, y) = (x^2 + xy + y^2)/2, the hexagonal lattice: six minimal
        // vectors of norm 1/2.
        let hits = l.enumerate_by_norm(&half);
        assert_eq!(hits.len(), 6);
    }

    #[test]
    fn rejects_indefinite() {
        assert!(PosDefLattice::new(gram_int(&[&[1, 2], &[2, 1]])).is_err());
        assert!(PosDefLattice::new(gram_int(&[&[0, 0], &[0, 1]])).is_err());
    }
}
