//! Arithmetic in Z/m and exact linear algebra over Z/m via integer
//! diagonalization (Smith style row and column reduction). Z/ell^t is not a
//! field for t > 1, so Gaussian elimination with unit pivots alone is not
//! enough; diagonalizing the lifted integer matrix handles all cases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// The ring Z/m with m < 2^63, operations on canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    pub m: u64,
}

impl ResidueRing {
    pub fn new(m: u64) -> Self {
        assert!(m >= 2 && m < (1u64 << 63));
        ResidueRing { m }
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.m as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.m
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.m - b % self.m) % self.m
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.m as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        num_integer::gcd(a % self.m, self.m) == 1
    }

    /// Modular inverse when a is a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = BigInt::from(a % self.m);
        let m = BigInt::from(self.m);
        let eg = a.extended_gcd(&m);
        if !eg.gcd.is_one() {
            return None;
        }
        let r = eg.x.mod_floor(&m);
        r.to_u64()
    }
}

/// Result of solving `A x = b (mod m)`: one particular solution plus
/// generators of the solution kernel mod m.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Vec<u64>,
    pub kernel: Vec<Vec<u64>>,
}

/// Diagonalize an integer matrix: returns (u, d, v) with `u * a * v = d`,
/// d diagonal (not necessarily with the divisibility chain, which solving
/// does not need). u is rows x rows, v is cols x cols, both unimodular.
fn diagonalize(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut s: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // Find the entry of smallest nonzero magnitude in the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !s[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| s[i][j].abs() < s[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            s.swap(t, pi);
            u.swap(t, pi);
            if pj != t {
                for row in s.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut clean = true;
            for i in t + 1..rows {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = rounded_div(&s[i][t], &s[t][t]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let x = &s[t][j] * &q;
                        s[i][j] -= x;
                    }
                    for j in 0..rows {
                        let x = &u[t][j] * &q;
                        u[i][j] -= x;
                    }
                }
                if !s[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&s[t][j], &s[t][t]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let x = &s[i][t] * &q;
                        s[i][j] -= x;
                        let y = &v[i][t] * &q;
                        v[i][j] -= y;
                    }
                }
                if !s[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    (u, s, v)
}

fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    // Round a/b to the nearest integer so remainders shrink quickly.
    let (q, r) = a.div_mod_floor(b);
    if r.abs() * 2 > b.abs() {
        if b.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Solve `A x = b (mod m)` over Z/m for an integer matrix A (entries given
/// as i64). Returns a particular solution and kernel generators, or an
/// error if the system is inconsistent.
pub fn solve_mod(a: &[Vec<i64>], b: &[u64], m: u64) -> Result<LinearSolution> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let abig: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let (u, d, v) = diagonalize(&abig);
    let mbig = BigInt::from(m);

    // c = u * b mod m
    let mut c = vec![0u64; rows];
    for i in 0..rows {
        let mut acc = BigInt::zero();
        for j in 0..rows {
            acc += &u[i][j] * BigInt::from(b[j]);
        }
        c[i] = acc.mod_floor(&mbig).to_u64().unwrap();
    }

    // Solve d_ii * y_i = c_i (mod m).
    let mut y = vec![0u64; cols];
    let mut kernel_mult = vec![0u64; cols];
    for i in 0..cols.max(rows) {
        let dii = if i < rows && i < cols {
            d[i][i].mod_floor(&mbig).to_u64().unwrap()
        } else {
            0
        };
        let ci = if i < rows { c[i] } else { 0 };
        if i >= cols {
            // No variable available; require c_i = 0.
            if ci != 0 {
                return Err(Error::arithmetic("inconsistent linear system mod m"));
            }
            continue;
        }
        let g = num_integer::gcd(dii, m);
        if ci % g != 0 {
            return Err(Error::arithmetic("inconsistent linear system mod m"));
        }
        if g == m {
            // d_ii = 0 mod m: free variable.
            y[i] = 0;
            kernel_mult[i] = 1;
        } else {
            let m_g = m / g;
            let inv = ResidueRing::new(m_g).inv(dii / g % m_g).unwrap();
            y[i] = ResidueRing::new(m_g).mul(ci / g % m_g, inv);
            kernel_mult[i] = m_g;
        }
    }

    // x = v * y mod m; kernel generators are v * (kernel_mult_i e_i).
    let to_x = |yv: &[u64]| -> Vec<u64> {
        (0..cols)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..cols {
                    acc += &v[i][j] * BigInt::from(yv[j]);
                }
                acc.mod_floor(&mbig).to_u64().unwrap()
            })
            .collect()
    };
    let particular = to_x(&y);
    let mut kernel = Vec::new();
    for i in 0..cols {
        if kernel_mult[i] != 0 {
            let mut e = vec![0u64; cols];
            e[i] = kernel_mult[i];
            let g = to_x(&e);
            if g.iter().any(|&x| x != 0) {
                kernel.push(g);
            }
        }
    }

    // Exactness check on the particular solution.
    for i in 0..rows {
        let mut acc: i128 = 0;
        for j in 0..cols {
            acc += a[i][j] as i128 * particular[j] as i128;
        }
        let lhs = acc.rem_euclid(m as i128) as u64;
        if lhs != b[i] % m {
            return Err(Error::arithmetic("linear solver produced invalid solution"));
        }
    }
    Ok(LinearSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime_power() {
        let r = ResidueRing::new(125);
        for a in 1..125 {
            if a % 5 != 0 {
                let inv = r.inv(a).unwrap();
                assert_eq!(r.mul(a, inv), 1);
            } else {
                assert!(r.inv(a).is_none());
            }
        }
    }

    #[test]
    fn solve_simple_system() {
        // x + 2y = 5, 3y = 6 mod 25.
        let a = vec![vec![1, 2], vec![0, 3]];
        let b = vec![5, 6];
        let sol = solve_mod(&a, &b, 25).unwrap();
        let x = sol.particular;
        assert_eq!((x[0] + 2 * x[1]) % 25, 5);
        assert_eq!(3 * x[1] % 25, 6);
    }

    #[test]
    fn solve_rank_deficient() {
        // 5x = 10 mod 25 has solutions x = 2 + 5k.
        let a = vec![vec![5]];
        let b = vec![10];
        let sol = solve_mod(&a, &b, 25).unwrap();
        assert_eq!(5 * sol.particular[0] % 25, 10);
        assert_eq!(sol.kernel.len(), 1);
        assert_eq!(sol.kernel[0][0] % 5, 0);
        assert_ne!(sol.kernel[0][0], 0);
    }

    #[test]
    fn inconsistent_system_detected() {
        let a = vec![vec![5]];
        let b = vec![7];
        assert!(solve_mod(&a, &b, 25).is_err());
    }

    #[test]
    fn singular_matrix_kernel() {
        // The all-ones kernel of [[3,2],[3,2]] mod 5 is spanned by (1,1).
        let a = vec![vec![3, 2], vec![3, 2]];
        let b = vec![1, 1];
        let sol = solve_mod(&a, &b, 5).unwrap();
        assert_eq!((3 * sol.particular[0] + 2 * sol.particular[1]) % 5, 1);
        assert_eq!(sol.kernel.len(), 1);
        let k = &sol.kernel[0];
        assert_eq!(k[0], k[1]);
        assert_ne!(k[0], 0);
    }
}
