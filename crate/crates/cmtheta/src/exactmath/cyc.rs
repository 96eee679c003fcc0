//! Cyclotomic field elements in the power basis `1, z, ..., z^(phi(n)-1)`
//! of `Q(zeta_n)`, with exact rational coordinates. Multiplication reduces
//! modulo the n-th cyclotomic polynomial, computed once by exact division
//! of `x^n - 1` by the lower-level cyclotomic polynomials.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigc::BigComplex;
use crate::{Error, Result};

/// Euler phi function.
pub fn phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials; `den` must be monic and divide
/// `num` exactly.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (dd..=nd).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for j in 0..=dd {
            let t = &den[j] * &c;
            rem[i - dd + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

/// Coefficients of the n-th cyclotomic polynomial, ascending powers.
pub fn cyclotomic_coeffs(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let result: Arc<Vec<BigInt>> = if n == 1 {
        Arc::new(vec![BigInt::from(-1), BigInt::one()])
    } else {
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for d in 1..n {
            if n % d == 0 {
                den = poly_mul_int(&den, &cyclotomic_coeffs(d));
            }
        }
        Arc::new(poly_div_exact_int(&num, &den))
    };
    cache.lock().unwrap().insert(n, result.clone());
    result
}

/// Element of `Q(zeta_n)` with exact rational coordinates in the power
/// basis. Equality is coordinatewise, which is canonical because the power
/// basis is a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyc {
    n: u32,
    c: Vec<BigRational>,
}

impl Cyc {
    /// Reduce an arbitrary-length coordinate vector modulo the cyclotomic
    /// polynomial and wrap it.
    pub fn from_coords(n: u32, mut v: Vec<BigRational>) -> Self {
        assert!(n >= 1 && n <= 64, "cyclotomic conductor out of range");
        let ph = phi(n);
        let p = cyclotomic_coeffs(n);
        if v.len() < ph {
            v.resize(ph, BigRational::zero());
        }
        for i in (ph..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let ci = std::mem::replace(&mut v[i], BigRational::zero());
            for j in 0..ph {
                let t = &ci * BigRational::from(p[j].clone());
                v[i - ph + j] -= t;
            }
        }
        v.truncate(ph);
        Cyc { n, c: v }
    }

    pub fn zero(n: u32) -> Self {
        Cyc::from_coords(n, vec![])
    }

    pub fn one(n: u32) -> Self {
        Cyc::from_int(n, 1)
    }

    pub fn from_int(n: u32, k: i64) -> Self {
        let mut v = vec![BigRational::zero(); phi(n)];
        v[0] = BigRational::from(BigInt::from(k));
        Cyc { n, c: v }
    }

    pub fn from_rational(n: u32, r: BigRational) -> Self {
        let mut v = vec![BigRational::zero(); phi(n)];
        v[0] = r;
        Cyc { n, c: v }
    }

    /// zeta_n^k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = BigRational::one();
        Cyc::from_coords(n, v)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().skip(1).all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|x| x.denom().is_one())
    }

    /// Integer power-basis coordinates, failing if any denominator is
    /// nontrivial.
    pub fn coords_int(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::arithmetic("cyclotomic element is not integral"));
        }
        Ok(self.c.iter().map(|x| x.numer().clone()).collect())
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.n, other.n);
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a + b)
            .collect();
        Cyc { n: self.n, c }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.n, other.n);
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a - b)
            .collect();
        Cyc { n: self.n, c }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        assert_eq!(self.n, other.n);
        let mut out = vec![BigRational::zero(); self.c.len() + other.c.len()];
        for (i, ai) in self.c.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in other.c.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                out[i + j] += ai * bj;
            }
        }
        Cyc::from_coords(self.n, out)
    }

    pub fn scale(&self, r: &BigRational) -> Cyc {
        Cyc {
            n: self.n,
            c: self.c.iter().map(|a| a * r).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Cyc {
        self.scale(&BigRational::from(BigInt::from(k)))
    }

    /// Galois action zeta -> zeta^a for gcd(a, n) = 1.
    pub fn galois(&self, a: u32) -> Cyc {
        let a = a % self.n;
        assert_eq!(num_integer::gcd(a as u64, self.n as u64), 1);
        let mut v = vec![BigRational::zero(); self.n as usize];
        for (i, ci) in self.c.iter().enumerate() {
            if !ci.is_zero() {
                let e = (a as usize * i) % self.n as usize;
                v[e] += ci;
            }
        }
        Cyc::from_coords(self.n, v)
    }

    /// Complex conjugation zeta -> zeta^(-1).
    pub fn conj(&self) -> Cyc {
        if self.n <= 2 {
            self.clone()
        } else {
            self.galois(self.n - 1)
        }
    }

    /// Absolute norm down to Q, as the product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let mut prod = Cyc::one(self.n);
        for a in 1..=self.n {
            if num_integer::gcd(a as u64, self.n as u64) == 1 {
                prod = prod.mul(&self.galois(a % self.n.max(1)));
            }
        }
        assert!(prod.is_rational(), "norm must be rational");
        prod.c[0].clone()
    }

    /// Multiplicative inverse; error on zero.
    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::arithmetic("division by zero in Q(zeta)"));
        }
        let mut prod = Cyc::one(self.n);
        for a in 2..=self.n {
            if num_integer::gcd(a as u64, self.n as u64) == 1 {
                prod = prod.mul(&self.galois(a % self.n));
            }
        }
        // self * prod is the norm, a nonzero rational.
        let nrm = self.mul(&prod);
        assert!(nrm.is_rational());
        let inv_n = nrm.c[0].recip();
        Ok(prod.scale(&inv_n))
    }

    pub fn div(&self, other: &Cyc) -> Result<Cyc> {
        Ok(self.mul(&other.inv()?))
    }

    /// Evaluate under the standard complex embedding zeta_n -> e^(2 pi i/n).
    pub fn eval(&self, prec: usize) -> BigComplex {
        let mut acc = BigComplex::zero(prec);
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let z = BigComplex::root_of_unity(self.n, i as i64, prec);
            acc = acc.add(&z.scale_rational(ci));
        }
        acc
    }

    /// Reduce coordinates into Z/m, inverting denominators; error if a
    /// denominator shares a factor with m.
    pub fn reduce_mod(&self, m: u64) -> Result<CycMod> {
        let mut c = Vec::with_capacity(self.c.len());
        for x in &self.c {
            c.push(rational_mod(x, m)?);
        }
        Ok(CycMod { n: self.n, m, c })
    }

    /// Multiplicative order if this element is a root of unity in the
    /// standard embedding sense (exact check: z^k = 1), else None. Checks
    /// k | n only, which is complete for values of characters.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        for k in 1..=self.n {
            if self.n % k == 0 {
                let mut pow = Cyc::one(self.n);
                for _ in 0..k {
                    pow = pow.mul(self);
                }
                if pow == Cyc::one(self.n) {
                    return Some(k);
                }
            }
        }
        None
    }
}

/// Reduce an exact rational into Z/m (denominator must be a unit mod m).
pub fn rational_mod(x: &BigRational, m: u64) -> Result<u64> {
    let mb = BigInt::from(m);
    let num = x.numer().clone().rem_euclid(&mb);
    let den = x.denom().clone().rem_euclid(&mb);
    let num_u = num.to_string().parse::<u64>().unwrap();
    let den_u = den.to_string().parse::<u64>().unwrap();
    let den_inv = super::residue::ResidueRing::new(m).inv(den_u).ok_or_else(|| {
        Error::arithmetic(format!("denominator {} not a unit mod {}", den_u, m))
    })?;
    Ok(super::residue::ResidueRing::new(m).mul(num_u, den_inv))
}

trait RemEuclidBig {
    fn rem_euclid(self, m: &BigInt) -> BigInt;
}

impl RemEuclidBig for BigInt {
    fn rem_euclid(self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// Element of (Z/m)[zeta_n] in the power basis mod the n-th cyclotomic
/// polynomial. For m = ell^t this is the coefficient ring of the higher
/// Eisenstein pairing and the regulator comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMod {
    n: u32,
    m: u64,
    c: Vec<u64>,
}

impl CycMod {
    pub fn zero(n: u32, m: u64) -> Self {
        CycMod {
            n,
            m,
            c: vec![0; phi(n)],
        }
    }

    pub fn from_int(n: u32, m: u64, k: i64) -> Self {
        let mut c = vec![0u64; phi(n)];
        c[0] = k.rem_euclid(m as i64) as u64;
        CycMod { n, m, c }
    }

    pub fn zeta_pow(n: u32, m: u64, k: i64) -> Self {
        Cyc::zeta_pow(n, k).reduce_mod(m).unwrap()
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &CycMod) -> CycMod {
        assert!(self.n == other.n && self.m == other.m);
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + b) % self.m)
            .collect();
        CycMod {
            n: self.n,
            m: self.m,
            c,
        }
    }

    pub fn sub(&self, other: &CycMod) -> CycMod {
        assert!(self.n == other.n && self.m == other.m);
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + self.m - b) % self.m)
            .collect();
        CycMod {
            n: self.n,
            m: self.m,
            c,
        }
    }

    pub fn neg(&self) -> CycMod {
        CycMod {
            n: self.n,
            m: self.m,
            c: self.c.iter().map(|&a| (self.m - a) % self.m).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> CycMod {
        let k = k % self.m;
        CycMod {
            n: self.n,
            m: self.m,
            c: self
                .c
                .iter()
                .map(|&a| ((a as u128 * k as u128) % self.m as u128) as u64)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CycMod) -> CycMod {
        assert!(self.n == other.n && self.m == other.m);
        let ph = phi(self.n);
        let pc = cyclotomic_coeffs(self.n);
        let m128 = self.m as u128;
        // Cyclotomic coefficients reduced mod m, as nonnegative residues.
        let pmod: Vec<u64> = pc
            .iter()
            .map(|x| {
                let r = x.clone().rem_euclid(&BigInt::from(self.m));
                r.to_string().parse::<u64>().unwrap()
            })
            .collect();
        let mut out = vec![0u128; 2 * ph];
        for i in 0..ph {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..ph {
                out[i + j] = (out[i + j] + self.c[i] as u128 * other.c[j] as u128) % m128;
            }
        }
        for i in (ph..out.len()).rev() {
            if out[i] == 0 {
                continue;
            }
            let ci = out[i];
            out[i] = 0;
            for j in 0..ph {
                // x^i = -sum_j P_j x^(i-ph+j) mod Phi_n, P monic.
                let sub = ci * pmod[j] as u128 % m128;
                out[i - ph + j] = (out[i - ph + j] + m128 - sub) % m128;
            }
        }
        CycMod {
            n: self.n,
            m: self.m,
            c: out[..ph].iter().map(|&x| x as u64).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polys_match_known() {
        let to_i64 = |v: &Arc<Vec<BigInt>>| -> Vec<i64> {
            v.iter().map(|x| x.to_string().parse().unwrap()).collect()
        };
        assert_eq!(to_i64(&cyclotomic_coeffs(1)), vec![-1, 1]);
        assert_eq!(to_i64(&cyclotomic_coeffs(2)), vec![1, 1]);
        assert_eq!(to_i64(&cyclotomic_coeffs(3)), vec![1, 1, 1]);
        assert_eq!(to_i64(&cyclotomic_coeffs(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(&cyclotomic_coeffs(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(&cyclotomic_coeffs(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(
            to_i64(&cyclotomic_coeffs(24)),
            vec![1, 0, 0, 0, -1, 0, 0, 0, 1]
        );
    }

    #[test]
    fn zeta_orders() {
        for n in [3u32, 4, 5, 7, 12, 24] {
            let z = Cyc::zeta_pow(n, 1);
            let mut pow = Cyc::one(n);
            for k in 1..=n {
                pow = pow.mul(&z);
                if k < n {
                    assert_ne!(pow, Cyc::one(n), "zeta_{} has premature order {}", n, k);
                }
            }
            assert_eq!(pow, Cyc::one(n));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let x = Cyc::from_coords(12, vec![rat(3, 2), rat(-1, 1), rat(0, 1), rat(5, 7)]);
        let xi = x.inv().unwrap();
        assert_eq!(x.mul(&xi), Cyc::one(12));
    }

    #[test]
    fn conj_is_inverse_on_units() {
        let z = Cyc::zeta_pow(7, 3);
        assert_eq!(z.mul(&z.conj()), Cyc::one(7));
    }

    #[test]
    fn cycmod_matches_cyc() {
        let a = Cyc::from_coords(3, vec![rat(2, 1), rat(4, 1)]);
        let b = Cyc::from_coords(3, vec![rat(1, 1), rat(3, 1)]);
        let m = 25;
        let lhs = a.mul(&b).reduce_mod(m).unwrap();
        let rhs = a.reduce_mod(m).unwrap().mul(&b.reduce_mod(m).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_mod_inverts_denominator() {
        // 1/2 mod 25 = 13.
        assert_eq!(rational_mod(&rat(1, 2), 25).unwrap(), 13);
        assert!(rational_mod(&rat(1, 5), 25).is_err());
    }
}
