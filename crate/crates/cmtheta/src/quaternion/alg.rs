//! Definite rational quaternion algebras (a, b | Q) with basis 1, i, j, k,
//! i^2 = a, j^2 = b, k = ij = -ji. The algebra ramified exactly at p and
//! infinity is constructed from the residue of p mod 8; ramification is
//! certified independently through Hilbert symbols.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactmath::ff::{factorize_u64, is_prime_u64, legendre};
use crate::{Error, Result};

/// Element coordinates over the basis (1, i, j, k).
pub type Q4 = [BigRational; 4];

pub fn q4_zero() -> Q4 {
    [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ]
}

pub fn q4_from_ints(v: [i64; 4]) -> Q4 {
    v.map(|x| BigRational::from(BigInt::from(x)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuatAlg {
    pub p: u64,
    pub a: i64,
    pub b: i64,
}

impl QuatAlg {
    /// The quaternion algebra over Q ramified exactly at p and infinity.
    pub fn new(p: u64) -> Result<QuatAlg> {
        if !is_prime_u64(p) {
            return Err(Error::config(format!("{} is not prime", p)));
        }
        let (a, b) = if p == 2 {
            (-1, -1)
        } else if p % 4 == 3 {
            (-1, -(p as i64))
        } else if p % 8 == 5 {
            (-2, -(p as i64))
        } else {
            // p = 1 mod 8: the smallest prime q = 3 mod 4 that is a
            // nonresidue mod p.
            let mut q = 3u64;
            loop {
                if q % 4 == 3 && is_prime_u64(q) && legendre(q as i64, p) == -1 {
                    break;
                }
                q += 2;
            }
            (-(q as i64), -(p as i64))
        };
        let alg = QuatAlg { p, a, b };
        debug_assert!(alg.ramified_places_are(&[p]));
        Ok(alg)
    }

    pub fn mul(&self, x: &Q4, y: &Q4) -> Q4 {
        let a = BigRational::from(BigInt::from(self.a));
        let b = BigRational::from(BigInt::from(self.b));
        let ab = &a * &b;
        let z0 = &x[0] * &y[0] + &a * &x[1] * &y[1] + &b * &x[2] * &y[2] - &ab * &x[3] * &y[3];
        let z1 = &x[0] * &y[1] + &x[1] * &y[0] - &b * &x[2] * &y[3] + &b * &x[3] * &y[2];
        let z2 = &x[0] * &y[2] + &x[2] * &y[0] + &a * &x[1] * &y[3] - &a * &x[3] * &y[1];
        let z3 = &x[0] * &y[3] + &x[3] * &y[0] + &x[1] * &y[2] - &x[2] * &y[1];
        [z0, z1, z2, z3]
    }

    pub fn conj(&self, x: &Q4) -> Q4 {
        [x[0].clone(), -x[1].clone(), -x[2].clone(), -x[3].clone()]
    }

    pub fn trd(&self, x: &Q4) -> BigRational {
        &x[0] + &x[0]
    }

    pub fn nrd(&self, x: &Q4) -> BigRational {
        let a = BigRational::from(BigInt::from(self.a));
        let b = BigRational::from(BigInt::from(self.b));
        let ab = &a * &b;
        &x[0] * &x[0] - &a * &x[1] * &x[1] - &b * &x[2] * &x[2] + &ab * &x[3] * &x[3]
    }

    /// trd(x conj(y)), the bilinear form polarizing 2 nrd.
    pub fn pair(&self, x: &Q4, y: &Q4) -> BigRational {
        let a = BigRational::from(BigInt::from(self.a));
        let b = BigRational::from(BigInt::from(self.b));
        let ab = &a * &b;
        let two = BigRational::from(BigInt::from(2));
        two * (&x[0] * &y[0] - &a * &x[1] * &y[1] - &b * &x[2] * &y[2] + &ab * &x[3] * &y[3])
    }

    fn ramified_places_are(&self, finite: &[u64]) -> bool {
        if self.a >= 0 || self.b >= 0 {
            return false;
        }
        let mut places: Vec<u64> = Vec::new();
        let mut candidates: Vec<u64> = vec![2];
        for n in [self.a.unsigned_abs(), self.b.unsigned_abs()] {
            for (q, _) in factorize_u64(n) {
                if !candidates.contains(&q) {
                    candidates.push(q);
                }
            }
        }
        for q in candidates {
            if hilbert_symbol(self.a, self.b, q) == -1 {
                places.push(q);
            }
        }
        places.sort_unstable();
        let mut want = finite.to_vec();
        want.sort_unstable();
        places == want
    }
}

/// Hilbert symbol (a, b)_q over Q_q for a prime q (the infinite place is
/// handled by `hilbert_symbol_inf`).
pub fn hilbert_symbol(a: i64, b: i64, q: u64) -> i32 {
    assert!(a != 0 && b != 0);
    let (alpha, u) = split_valuation(a, q);
    let (beta, v) = split_valuation(b, q);
    if q == 2 {
        let eps = |x: i64| (((x - 1) / 2) % 2 + 2) % 2;
        let omega = |x: i64| (((x * x - 1) / 8) % 2 + 2) % 2;
        let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = 1i32;
        if (alpha * beta) % 2 == 1 && (q - 1) / 2 % 2 == 1 {
            s = -s;
        }
        if beta % 2 == 1 {
            s *= legendre(u.rem_euclid(q as i64), q);
        }
        if alpha % 2 == 1 {
            s *= legendre(v.rem_euclid(q as i64), q);
        }
        s
    }
}

pub fn hilbert_symbol_inf(a: i64, b: i64) -> i32 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}

/// Writes x = q^e u with q not dividing u; returns (e, u).
fn split_valuation(x: i64, q: u64) -> (i64, i64) {
    let mut e = 0i64;
    let mut u = x;
    while u % (q as i64) == 0 {
        u /= q as i64;
        e += 1;
    }
    (e, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramification_by_residue_class() {
        // 7, 11, 19 = 3 mod 4; 13 = 5 mod 8; 17 = 1 mod 8.
        assert_eq!(QuatAlg::new(7).unwrap(), QuatAlg { p: 7, a: -1, b: -7 });
        assert_eq!(QuatAlg::new(11).unwrap(), QuatAlg { p: 11, a: -1, b: -11 });
        assert_eq!(QuatAlg::new(13).unwrap(), QuatAlg { p: 13, a: -2, b: -13 });
        let a17 = QuatAlg::new(17).unwrap();
        assert_eq!(a17.a, -3);
        assert!(QuatAlg::new(15).is_err());
    }

    #[test]
    fn larger_primes_construct() {
        for p in [23, 37, 43, 67, 151, 251] {
            let alg = QuatAlg::new(p).unwrap();
            assert!(alg.ramified_places_are(&[p]), "p = {}", p);
        }
    }

    #[test]
    fn hilbert_product_formula() {
        // Product over all places of (a, b)_v = 1.
        for (a, b) in [(-1, -7), (-2, -13), (-3, -17), (6, 10), (-5, 12), (15, -21)] {
            let mut prod = hilbert_symbol_inf(a, b);
            let mut qs = vec![2u64];
            for n in [a.unsigned_abs(), b.unsigned_abs()] {
                for (q, _) in factorize_u64(n) {
                    if !qs.contains(&q) {
                        qs.push(q);
                    }
                }
            }
            for q in qs {
                prod *= hilbert_symbol(a, b, q);
            }
            assert_eq!(prod, 1, "a={} b={}", a, b);
        }
    }

    #[test]
    fn multiplication_table() {
        let alg = QuatAlg::new(7).unwrap();
        let i = q4_from_ints([0, 1, 0, 0]);
        let j = q4_from_ints([0, 0, 1, 0]);
        let k = q4_from_ints([0, 0, 0, 1]);
        assert_eq!(alg.mul(&i, &i), q4_from_ints([-1, 0, 0, 0]));
        assert_eq!(alg.mul(&j, &j), q4_from_ints([-7, 0, 0, 0]));
        assert_eq!(alg.mul(&i, &j), k);
        let minus_k: Q4 = q4_from_ints([0, 0, 0, -1]);
        assert_eq!(alg.mul(&j, &i), minus_k);
        assert_eq!(alg.mul(&k, &k), q4_from_ints([-7, 0, 0, 0]));
    }

    #[test]
    fn norm_is_multiplicative() {
        let alg = QuatAlg::new(11).unwrap();
        let x = q4_from_ints([1, 2, 3, 4]);
        let y = q4_from_ints([-2, 5, 0, 1]);
        let xy = alg.mul(&x, &y);
        assert_eq!(alg.nrd(&xy), alg.nrd(&x) * alg.nrd(&y));
        // nrd(x) = x conj(x).
        let n = alg.mul(&x, &alg.conj(&x));
        assert_eq!(n[0], alg.nrd(&x));
        assert!(n[1].is_zero() && n[2].is_zero() && n[3].is_zero());
        // trd and pair consistency: pair(x, y) = trd(x conj(y)).
        let t = alg.mul(&x, &alg.conj(&y));
        assert_eq!(alg.pair(&x, &y), alg.trd(&t));
    }

    #[test]
    fn conjugation_is_an_antiautomorphism() {
        let alg = QuatAlg::new(13).unwrap();
        let x = q4_from_ints([3, -1, 2, 0]);
        let y = q4_from_ints([0, 4, -2, 5]);
        let lhs = alg.conj(&alg.mul(&x, &y));
        let rhs = alg.mul(&alg.conj(&y), &alg.conj(&x));
        assert_eq!(lhs, rhs);
    }
}
