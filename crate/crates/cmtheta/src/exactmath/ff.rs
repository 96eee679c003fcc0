//! Small prime fields F_p and their quadratic extensions F_p^2, with a
//! baby-step giant-step discrete logarithm projected onto Z/ell^t. The
//! quadratic extension is represented as F_p[x]/(x^2 - r) for the smallest
//! quadratic nonresidue r, so elements are pairs (a, b) = a + b sqrt(r).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::residue::ResidueRing;
use crate::{Error, Result};

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut q = 11u64;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += 2;
    }
    true
}

pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Legendre symbol (a | p) for odd prime p, in {-1, 0, 1}.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = ResidueRing::new(p);
    let ared = a.rem_euclid(p as i64) as u64;
    if ared == 0 {
        return 0;
    }
    let s = r.pow(ared, (p - 1) / 2);
    if s == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol where `a` may exceed i64 range.
pub fn legendre_big(a: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let mut r = a % &pb;
    if r.is_negative() {
        r += &pb;
    }
    legendre(r.to_i64().unwrap(), p)
}

/// Smallest primitive root mod p.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime_u64(p) && p >= 3);
    let r = ResidueRing::new(p);
    let factors = factorize_u64(p - 1);
    'outer: for g in 2..p {
        for &(q, _) in &factors {
            if r.pow(g, (p - 1) / q) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("no primitive root found");
}

/// Full discrete log base the smallest primitive root, by baby-step
/// giant-step over F_p^x.
pub fn discrete_log_full(p: u64, x: u64) -> Result<u64> {
    assert!(p < 10_000, "discrete log implemented for desk-scale p only");
    let x = x % p;
    if x == 0 {
        return Err(Error::arithmetic("discrete log of 0"));
    }
    let r = ResidueRing::new(p);
    let g = primitive_root(p);
    let m = ((p as f64).sqrt().ceil() as u64) + 1;
    let mut baby: HashMap<u64, u64> = HashMap::new();
    let mut cur = 1u64;
    for j in 0..m {
        baby.entry(cur).or_insert(j);
        cur = r.mul(cur, g);
    }
    // giant factor g^(-m)
    let gm = r.pow(g, m);
    let gm_inv = r.inv(gm).ok_or_else(|| Error::arithmetic("non-unit base"))?;
    let mut gamma = x;
    for i in 0..=m {
        if let Some(&j) = baby.get(&gamma) {
            return Ok((i * m + j) % (p - 1));
        }
        gamma = r.mul(gamma, gm_inv);
    }
    Err(Error::arithmetic("discrete log search exhausted"))
}

/// Discrete logarithm of x in F_p^x projected to Z/ell^t, normalized so the
/// smallest primitive root mod p maps to 1. Requires ell^t | p - 1.
pub fn discrete_log(p: u64, ell: u64, t: u32, x: u64) -> Result<u64> {
    let lt = ell.pow(t);
    if (p - 1) % lt != 0 {
        return Err(Error::config(format!(
            "ell^t = {} does not divide p - 1 = {}",
            lt,
            p - 1
        )));
    }
    Ok(discrete_log_full(p, x)? % lt)
}

/// The field F_p^2 = F_p[x]/(x^2 - r), r the smallest nonresidue mod p.
/// Elements are (a, b) meaning a + b x.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    pub p: u64,
    pub nonres: u64,
    ring: ResidueRing,
}

pub type Fp2El = (u64, u64);

impl Fp2 {
    pub fn new(p: u64) -> Self {
        assert!(is_prime_u64(p) && p >= 3);
        let nonres = (2..p)
            .find(|&r| legendre(r as i64, p) == -1)
            .expect("nonresidue exists for p >= 3");
        Fp2 {
            p,
            nonres,
            ring: ResidueRing::new(p),
        }
    }

    pub fn zero(&self) -> Fp2El {
        (0, 0)
    }

    pub fn one(&self) -> Fp2El {
        (1, 0)
    }

    pub fn from_base(&self, a: u64) -> Fp2El {
        (a % self.p, 0)
    }

    pub fn add(&self, a: Fp2El, b: Fp2El) -> Fp2El {
        (self.ring.add(a.0, b.0), self.ring.add(a.1, b.1))
    }

    pub fn sub(&self, a: Fp2El, b: Fp2El) -> Fp2El {
        (self.ring.sub(a.0, b.0), self.ring.sub(a.1, b.1))
    }

    pub fn neg(&self, a: Fp2El) -> Fp2El {
        (self.ring.sub(0, a.0), self.ring.sub(0, a.1))
    }

    pub fn mul(&self, a: Fp2El, b: Fp2El) -> Fp2El {
        // (a0 + a1 x)(b0 + b1 x) = a0b0 + r a1b1 + (a0b1 + a1b0) x
        let r = &self.ring;
        (
            r.add(r.mul(a.0, b.0), r.mul(self.nonres, r.mul(a.1, b.1))),
            r.add(r.mul(a.0, b.1), r.mul(a.1, b.0)),
        )
    }

    pub fn pow(&self, a: Fp2El, mut e: u64) -> Fp2El {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius x -> x^p, i.e. (a, b) -> (a, -b).
    pub fn frobenius(&self, a: Fp2El) -> Fp2El {
        (a.0, self.ring.sub(0, a.1))
    }

    /// Norm to F_p: a^(p+1) = a0^2 - r a1^2.
    pub fn norm(&self, a: Fp2El) -> u64 {
        let r = &self.ring;
        r.sub(r.mul(a.0, a.0), r.mul(self.nonres, r.mul(a.1, a.1)))
    }

    pub fn inv(&self, a: Fp2El) -> Option<Fp2El> {
        let n = self.norm(a);
        let ninv = self.ring.inv(n)?;
        let conj = self.frobenius(a);
        Some((self.ring.mul(conj.0, ninv), self.ring.mul(conj.1, ninv)))
    }

    /// All roots in F_p^2 of an integer polynomial, by exhaustive search.
    /// Desk-scale guard: p <= 1000.
    pub fn roots_of_int_poly(&self, coeffs: &[BigInt]) -> Vec<Fp2El> {
        assert!(self.p <= 1000, "exhaustive root search needs p <= 1000");
        let pb = BigInt::from(self.p);
        let cmod: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                let mut r = c % &pb;
                if r.is_negative() {
                    r += &pb;
                }
                r.to_u64().unwrap()
            })
            .collect();
        let mut roots = Vec::new();
        for a in 0..self.p {
            for b in 0..self.p {
                let x = (a, b);
                let mut acc = self.zero();
                for c in cmod.iter().rev() {
                    acc = self.add(self.mul(acc, x), self.from_base(*c));
                }
                if acc == (0, 0) {
                    roots.push(x);
                }
            }
        }
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_roots_known() {
        assert_eq!(primitive_root(11), 2);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(41), 6);
    }

    #[test]
    fn discrete_log_is_homomorphism() {
        let p = 101;
        let r = ResidueRing::new(p);
        for a in [2u64, 3, 17, 55] {
            for b in [5u64, 90, 33] {
                let la = discrete_log_full(p, a).unwrap();
                let lb = discrete_log_full(p, b).unwrap();
                let lab = discrete_log_full(p, r.mul(a, b)).unwrap();
                assert_eq!((la + lb) % (p - 1), lab);
            }
        }
    }

    #[test]
    fn discrete_log_normalization() {
        // Smallest primitive root mod 11 is 2; log(2) = 1 mod 5.
        assert_eq!(discrete_log(11, 5, 1, 2).unwrap(), 1);
        // log(4) = 2.
        assert_eq!(discrete_log(11, 5, 1, 4).unwrap(), 2);
    }

    #[test]
    fn fp2_field_axioms() {
        let f = Fp2::new(11);
        let x = (3u64, 7u64);
        let xi = f.inv(x).unwrap();
        assert_eq!(f.mul(x, xi), f.one());
        // Frobenius is the p-power map.
        assert_eq!(f.frobenius(x), f.pow(x, 11));
        // Norm is multiplicative.
        let y = (5u64, 2u64);
        let r = ResidueRing::new(11);
        assert_eq!(f.norm(f.mul(x, y)), r.mul(f.norm(x), f.norm(y)));
    }

    #[test]
    fn roots_of_quadratic() {
        let f = Fp2::new(11);
        // x^2 + 1 over F_11 (11 = 3 mod 4, so roots lie in F_121 - F_11).
        let coeffs = vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)];
        let roots = f.roots_of_int_poly(&coeffs);
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert_eq!(f.mul(r, r), f.neg(f.one()));
            assert_ne!(r.1, 0);
        }
    }
}
