//! Arbitrary precision complex arithmetic on top of astro-float, plus the
//! rounding bridge back into Z: nearest-integer rounding with an exact
//! remainder estimate (the "defect") and minimal polynomials from complex
//! root lists. Precision is carried explicitly per value; operations run at
//! the precision of the left operand.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Exact big float from a big integer.
pub fn bf_from_bigint(x: &BigInt, _prec: usize) -> BigFloat {
    if x.is_zero() {
        return BigFloat::from_i64(0, 64);
    }
    let (sign, digits) = x.to_u64_digits();
    let s = if sign == num_bigint::Sign::Minus {
        Sign::Neg
    } else {
        Sign::Pos
    };
    let e = (digits.len() * 64) as astro_float::Exponent;
    BigFloat::from_words(&digits, s, e)
}

/// Big float approximation of a rational at the given precision.
pub fn bf_from_rational(x: &BigRational, prec: usize) -> BigFloat {
    let n = bf_from_bigint(x.numer(), prec);
    let d = bf_from_bigint(x.denom(), prec);
    n.div(&d, prec, RM)
}

/// Nearest integer together with the rounding defect |x - round(x)|.
pub fn bf_round_to_bigint(x: &BigFloat) -> (BigInt, f64) {
    if x.is_zero() {
        return (BigInt::zero(), 0.0);
    }
    let (words, _nbits, sign, e, _inexact) = x.as_raw_parts().expect("finite value");
    let mut m = BigInt::zero();
    for (i, w) in words.iter().enumerate() {
        m |= BigInt::from(*w) << (64 * i);
    }
    let pbits = (words.len() * 64) as i64;
    let shift = pbits - e as i64;
    let (q, defect) = if shift <= 0 {
        (m << ((-shift) as usize), 0.0)
    } else {
        let sh = shift as usize;
        let q0: BigInt = &m >> sh;
        let r: BigInt = m - (&q0 << sh);
        let frac = if sh <= 64 {
            r.to_f64().unwrap_or(0.0) / (1u128 << sh) as f64
        } else {
            let top: BigInt = r >> (sh - 64);
            top.to_f64().unwrap_or(0.0) / 18446744073709551616.0
        };
        if frac >= 0.5 {
            (q0 + 1, 1.0 - frac)
        } else {
            (q0, frac)
        }
    };
    if sign == Sign::Neg {
        (-q, defect)
    } else {
        (q, defect)
    }
}

/// Lossy f64 view, for reporting only.
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((words, _n, s, e, _)) => {
            let top = words.last().copied().unwrap_or(0);
            let next = if words.len() >= 2 {
                words[words.len() - 2]
            } else {
                0
            };
            let mant = top as f64 / 18446744073709551616.0
                + next as f64 / (18446744073709551616.0 * 18446744073709551616.0);
            let v = mant * 2f64.powf(e as f64);
            if s == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

/// Complex number with explicit working precision in bits.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        BigComplex::new(BigFloat::from_i64(0, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        BigComplex::new(BigFloat::from_i64(1, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        BigComplex::new(BigFloat::from_i64(x, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_rational(x: &BigRational, prec: usize) -> Self {
        BigComplex::new(bf_from_rational(x, prec), BigFloat::from_i64(0, prec), prec)
    }

    pub fn real(x: BigFloat, prec: usize) -> Self {
        BigComplex::new(x, BigFloat::from_i64(0, prec), prec)
    }

    pub fn add(&self, o: &BigComplex) -> BigComplex {
        BigComplex::new(
            self.re.add(&o.re, self.prec, RM),
            self.im.add(&o.im, self.prec, RM),
            self.prec,
        )
    }

    pub fn sub(&self, o: &BigComplex) -> BigComplex {
        BigComplex::new(
            self.re.sub(&o.re, self.prec, RM),
            self.im.sub(&o.im, self.prec, RM),
            self.prec,
        )
    }

    pub fn neg(&self) -> BigComplex {
        BigComplex::new(self.re.neg(), self.im.neg(), self.prec)
    }

    pub fn conj(&self) -> BigComplex {
        BigComplex::new(self.re.clone(), self.im.neg(), self.prec)
    }

    pub fn mul(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec;
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        BigComplex::new(ac.sub(&bd, p, RM), ad.add(&bc, p, RM), p)
    }

    pub fn div(&self, o: &BigComplex) -> BigComplex {
        let p = self.prec;
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        BigComplex::new(
            ac.add(&bd, p, RM).div(&den, p, RM),
            bc.sub(&ad, p, RM).div(&den, p, RM),
            p,
        )
    }

    pub fn scale_rational(&self, r: &BigRational) -> BigComplex {
        let f = bf_from_rational(r, self.prec);
        BigComplex::new(
            self.re.mul(&f, self.prec, RM),
            self.im.mul(&f, self.prec, RM),
            self.prec,
        )
    }

    pub fn scale_bf(&self, f: &BigFloat) -> BigComplex {
        BigComplex::new(
            self.re.mul(f, self.prec, RM),
            self.im.mul(f, self.prec, RM),
            self.prec,
        )
    }

    pub fn abs2(&self) -> BigFloat {
        let p = self.prec;
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.abs2().sqrt(self.prec, RM)
    }

    /// log |z|, computed as ln(|z|^2) / 2.
    pub fn ln_abs(&self) -> BigFloat {
        let l = with_consts(|cc| self.abs2().ln(self.prec, RM, cc));
        let half = BigFloat::from_i64(1, self.prec).div(&BigFloat::from_i64(2, self.prec), self.prec, RM);
        l.mul(&half, self.prec, RM)
    }

    /// Complex exponential e^z.
    pub fn exp(&self) -> BigComplex {
        let p = self.prec;
        with_consts(|cc| {
            let er = self.re.exp(p, RM, cc);
            let c = self.im.cos(p, RM, cc);
            let s = self.im.sin(p, RM, cc);
            BigComplex::new(er.mul(&c, p, RM), er.mul(&s, p, RM), p)
        })
    }

    /// e^(2 pi i k / n).
    pub fn root_of_unity(n: u32, k: i64, prec: usize) -> BigComplex {
        let p = prec + 32;
        with_consts(|cc| {
            let pi = cc.pi(p, RM);
            let kk = k.rem_euclid(n as i64);
            let ratio = BigFloat::from_i64(2 * kk, p).div(&BigFloat::from_i64(n as i64, p), p, RM);
            let theta = pi.mul(&ratio, p, RM);
            let c = theta.cos(prec, RM, cc);
            let s = theta.sin(prec, RM, cc);
            BigComplex::new(c, s, prec)
        })
    }

    /// Integer power by binary exponentiation; negative powers go through
    /// the reciprocal.
    pub fn powi(&self, e: i64) -> BigComplex {
        if e < 0 {
            return BigComplex::one(self.prec).div(&self.powi(-e));
        }
        let mut acc = BigComplex::one(self.prec);
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (bf_to_f64(&self.re), bf_to_f64(&self.im))
    }

    /// Decimal string pair for serialization.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (format!("{}", self.re), format!("{}", self.im))
    }

    /// |self - other| < 2^(-bits), checked at working precision.
    pub fn approx_eq(&self, other: &BigComplex, bits: i64) -> bool {
        let d = self.sub(other).abs();
        if d.is_zero() {
            return true;
        }
        let bound = pow2(-bits, self.prec);
        matches!(d.cmp(&bound), Some(c) if c < 0)
    }
}

/// 2^e as a BigFloat.
pub fn pow2(e: i64, prec: usize) -> BigFloat {
    let mut x = BigFloat::from_i64(1, prec);
    x.set_exponent((e + 1) as astro_float::Exponent);
    x
}

/// Monic integer polynomial with the given complex roots: expands the
/// product of (X - r), rounds every coefficient to the nearest integer and
/// reports the largest rounding defect (including imaginary residue).
/// Coefficients ascend, with leading coefficient 1.
pub fn min_poly_from_roots(roots: &[BigComplex]) -> (Vec<BigInt>, f64) {
    assert!(!roots.is_empty());
    let prec = roots[0].prec;
    let mut coeffs = vec![BigComplex::one(prec)];
    for r in roots {
        let mut next = vec![BigComplex::zero(prec); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(r));
        }
        coeffs = next;
    }
    let mut out = Vec::with_capacity(coeffs.len());
    let mut defect: f64 = 0.0;
    for c in &coeffs {
        let (n, d) = bf_round_to_bigint(&c.re);
        let dim = bf_to_f64(&c.im.abs());
        defect = defect.max(d).max(dim.abs());
        out.push(n);
    }
    (out, defect)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_bigint() {
        let x = BigInt::parse_bytes(b"123456789012345678901234567890", 10).unwrap();
        let bf = bf_from_bigint(&x, 256);
        let (back, defect) = bf_round_to_bigint(&bf);
        assert_eq!(back, x);
        assert_eq!(defect, 0.0);
    }

    #[test]
    fn rounding_defect() {
        // 1/3 rounds to 0 with defect 1/3.
        let third = bf_from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)), 128);
        let (n, d) = bf_round_to_bigint(&third);
        assert_eq!(n, BigInt::from(0));
        assert!((d - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        let prec = 192;
        let mut acc = BigComplex::zero(prec);
        for k in 0..7 {
            acc = acc.add(&BigComplex::root_of_unity(7, k, prec));
        }
        assert!(acc.abs2().exponent().map(|e| e < -300).unwrap_or(true));
    }

    #[test]
    fn minpoly_of_golden_ratio_pair() {
        // Roots (1 +- sqrt(5))/2 have minimal polynomial x^2 - x - 1.
        let prec = 192;
        let five = BigFloat::from_i64(5, prec);
        let s5 = five.sqrt(prec, RM);
        let half = BigFloat::from_i64(1, prec).div(&BigFloat::from_i64(2, prec), prec, RM);
        let r1 = BigComplex::real(
            BigFloat::from_i64(1, prec).add(&s5, prec, RM).mul(&half, prec, RM),
            prec,
        );
        let r2 = BigComplex::real(
            BigFloat::from_i64(1, prec).sub(&s5, prec, RM).mul(&half, prec, RM),
            prec,
        );
        let (coeffs, defect) = min_poly_from_roots(&[r1, r2]);
        assert!(defect < 1e-30);
        assert_eq!(coeffs, vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn exp_of_2pii_is_one() {
        let prec = 192;
        let z = with_consts(|cc| {
            let pi = cc.pi(prec, RM);
            let two_pi = pi.mul(&BigFloat::from_i64(2, prec), prec, RM);
            BigComplex::new(BigFloat::from_i64(0, prec), two_pi, prec)
        });
        let e = z.exp();
        assert!(e.approx_eq(&BigComplex::one(prec), (prec as i64) - 16));
    }
}
