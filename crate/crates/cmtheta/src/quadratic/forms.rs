//! Positive definite binary quadratic forms and class groups of imaginary
//! quadratic orders. Classes are represented by reduced primitive forms;
//! the group law is Dirichlet composition. The independently derived class
//! number formula is kept alongside as an oracle for the enumeration.

use std::collections::HashMap;

use num_integer::Integer;

use crate::{Error, Result};

/// Primitive positive definite binary quadratic form a x^2 + b xy + c y^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let d = b * b - 4 * a * c;
        i64::try_from(d).expect("discriminant fits i64")
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (x, y) = (x as i128, y as i128);
        i64::try_from(a * x * x + b * x * y + c * y * y).expect("form value fits i64")
    }

    /// The principal form of the given discriminant.
    pub fn identity(disc: i64) -> Self {
        assert!(disc < 0 && (disc % 4 == 0 || disc.rem_euclid(4) == 1));
        if disc % 4 == 0 {
            Form::new(1, 0, -disc / 4)
        } else {
            Form::new(1, 1, (1 - disc) / 4)
        }
    }

    pub fn inverse(&self) -> Form {
        Form::new(self.a, -self.b, self.c).reduce()
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        if !(b.abs() <= a && a <= c) {
            return false;
        }
        if (b.abs() == a || a == c) && b < 0 {
            return false;
        }
        true
    }

    /// Gauss reduction: normalize b into (-a, a], swap outer coefficients
    /// while a > c, then fix the sign convention on the boundary.
    pub fn reduce(&self) -> Form {
        let mut a = self.a as i128;
        let mut b = self.b as i128;
        let mut c = self.c as i128;
        assert!(a > 0 && b * b - 4 * a * c < 0, "form must be positive definite");
        loop {
            // b <- b - 2ka with b + 2ka in (-a, a]
            let k = (b + a).div_euclid(2 * a);
            let bb = b - 2 * k * a;
            c += k * k * a - k * b;
            b = bb;
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            break;
        }
        if (b.abs() == a || a == c) && b < 0 {
            b = -b;
        }
        Form::new(
            i64::try_from(a).unwrap(),
            i64::try_from(b).unwrap(),
            i64::try_from(c).unwrap(),
        )
    }

    /// Action of an SL2(Z) matrix [[x, u], [y, w]] on the form.
    pub fn transform(&self, x: i64, u: i64, y: i64, w: i64) -> Form {
        debug_assert_eq!(
            (x as i128) * (w as i128) - (y as i128) * (u as i128),
            1,
            "matrix must be unimodular"
        );
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (x, u, y, w) = (x as i128, u as i128, y as i128, w as i128);
        let a2 = a * x * x + b * x * y + c * y * y;
        let b2 = 2 * (a * x * u + c * y * w) + b * (x * w + y * u);
        let c2 = a * u * u + b * u * w + c * w * w;
        Form::new(
            i64::try_from(a2).expect("transformed form fits i64"),
            i64::try_from(b2).expect("transformed form fits i64"),
            i64::try_from(c2).expect("transformed form fits i64"),
        )
    }

    /// Equivalent form whose leading coefficient is coprime to n. Searches
    /// primitive vectors (x, y) in growing boxes; a primitive form
    /// represents values coprime to any fixed modulus, so this terminates.
    pub fn rep_coprime_to(&self, n: i64) -> Form {
        assert!(self.is_primitive());
        let n = n.abs().max(1);
        for bound in 1..=64i64 {
            for x in -bound..=bound {
                for y in -bound..=bound {
                    if x.abs() != bound && y.abs() != bound {
                        continue;
                    }
                    if x.gcd(&y) != 1 {
                        continue;
                    }
                    let v = self.eval(x, y);
                    if v != 0 && v.gcd(&n) == 1 {
                        // Complete (x, y) to an SL2 matrix.
                        let gcd::ExtGcd { s, t } = gcd::ext(x, y);
                        return self.transform(x, -t, y, s);
                    }
                }
            }
        }
        unreachable!("primitive form represents a value coprime to {}", n);
    }

    /// Dirichlet composition of two forms of the same discriminant.
    pub fn compose(&self, other: &Form) -> Form {
        let d = self.disc();
        assert_eq!(d, other.disc(), "forms must share a discriminant");
        let f1 = *self;
        let f2 = if self.a.gcd(&other.a) == 1 {
            *other
        } else {
            other.rep_coprime_to(self.a)
        };
        let (a1, b1) = (f1.a as i128, f1.b as i128);
        let (a2, b2) = (f2.a as i128, f2.b as i128);
        // B = b1 mod 2 a1, B = b2 mod 2 a2; moduli share only the factor 2
        // and b1 = b2 = d mod 2, so the system is solvable.
        let (m1, m2) = (2 * a1, 2 * a2);
        let g = m1.gcd(&m2);
        debug_assert_eq!((b2 - b1).rem_euclid(g), 0);
        let lcm = m1 / g * m2;
        let egcd = (m1 / g).extended_gcd(&(m2 / g));
        let t = ((b2 - b1) / g * egcd.x).rem_euclid(m2 / g);
        let big_b = (b1 + m1 * t).rem_euclid(lcm);
        let a = a1 * a2;
        let num = big_b * big_b - d as i128;
        debug_assert_eq!(num.rem_euclid(4 * a), 0);
        let c = num / (4 * a);
        Form::new(
            i64::try_from(a).expect("composite fits i64"),
            i64::try_from(big_b).expect("composite fits i64"),
            i64::try_from(c).expect("composite fits i64"),
        )
        .reduce()
    }
}

mod gcd {
    pub struct ExtGcd {
        pub s: i64,
        pub t: i64,
    }

    /// For coprime (x, y), returns s, t with x s + y t = 1.
    pub fn ext(x: i64, y: i64) -> ExtGcd {
        let (mut r0, mut r1) = (x, y);
        let (mut s0, mut s1) = (1i64, 0i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 < 0 {
            (s0, t0) = (-s0, -t0);
        }
        ExtGcd { s: s0, t: t0 }
    }
}

/// The class group Pic(O) of the order of the given discriminant, as a
/// finite group with explicit composition table. Index 0 is the identity.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub disc: i64,
    pub forms: Vec<Form>,
    index: HashMap<Form, usize>,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

impl ClassGroup {
    pub fn new(disc: i64) -> Result<Self> {
        if disc >= 0 || !(disc % 4 == 0 || disc.rem_euclid(4) == 1) {
            return Err(Error::config(format!(
                "{} is not an imaginary quadratic discriminant",
                disc
            )));
        }
        let mut forms = vec![Form::identity(disc)];
        let m = -disc;
        let mut a = 1i64;
        while a * a * 3 <= m {
            for b in -a..=a {
                if (b * b - disc) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - disc) / (4 * a);
                let f = Form::new(a, b, c);
                if f.is_reduced() && f.is_primitive() && f != forms[0] {
                    forms.push(f);
                }
            }
            a += 1;
        }
        forms[1..].sort();
        let index: HashMap<Form, usize> = forms.iter().copied().zip(0..).collect();
        let h = forms.len();
        let mut mul = vec![vec![0usize; h]; h];
        let mut inv = vec![0usize; h];
        for i in 0..h {
            for j in 0..h {
                let p = forms[i].compose(&forms[j]);
                mul[i][j] = *index
                    .get(&p)
                    .ok_or_else(|| Error::arithmetic("composite not in reduced set"))?;
            }
            inv[i] = *index
                .get(&forms[i].inverse())
                .ok_or_else(|| Error::arithmetic("inverse not in reduced set"))?;
        }
        Ok(ClassGroup {
            disc,
            forms,
            index,
            mul,
            inv,
        })
    }

    pub fn h(&self) -> usize {
        self.forms.len()
    }

    pub fn index_of(&self, f: &Form) -> Option<usize> {
        self.index.get(&f.reduce()).copied()
    }

    pub fn pow(&self, i: usize, e: i64) -> usize {
        let i = if e < 0 { self.inv[i] } else { i };
        let mut e = e.unsigned_abs();
        let mut acc = 0usize;
        let mut base = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul[acc][base];
            }
            base = self.mul[base][base];
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> u64 {
        let mut n = 1u64;
        let mut x = i;
        while x != 0 {
            x = self.mul[x][i];
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> u64 {
        (0..self.h())
            .map(|i| self.element_order(i))
            .fold(1, |acc, o| acc.lcm(&o))
    }
}

/// Splits a discriminant as disc = c^2 * disc_K with disc_K fundamental.
pub fn split_discriminant(disc: i64) -> Result<(i64, u64)> {
    if disc >= 0 || !(disc % 4 == 0 || disc.rem_euclid(4) == 1) {
        return Err(Error::config(format!(
            "{} is not an imaginary quadratic discriminant",
            disc
        )));
    }
    let m = (-disc) as u64;
    let mut s = 1u64;
    let mut sqfree = 1u64;
    for (q, e) in crate::exactmath::ff::factorize_u64(m) {
        s *= q.pow(e / 2);
        if e % 2 == 1 {
            sqfree *= q;
        }
    }
    if sqfree % 4 == 3 {
        Ok((-(sqfree as i64), s))
    } else {
        if s % 2 != 0 {
            return Err(Error::config(format!("{} is not a discriminant", disc)));
        }
        Ok((-(4 * sqfree as i64), s / 2))
    }
}

fn kronecker_prime(d: i64, q: u64) -> i64 {
    if q == 2 {
        if d % 2 == 0 {
            0
        } else {
            match d.rem_euclid(8) {
                1 | 7 => 1,
                _ => -1,
            }
        }
    } else {
        crate::exactmath::ff::legendre(d.rem_euclid(q as i64), q) as i64
    }
}

/// Class number of the order of conductor c in the field of fundamental
/// discriminant disc_k, by the classical formula relative to the maximal
/// order. Supported fundamental class numbers are tabulated; returns None
/// outside the table.
pub fn class_number_formula(disc_k: i64, c: u64) -> Option<u64> {
    const HK: &[(i64, u64)] = &[
        (-3, 1),
        (-4, 1),
        (-7, 1),
        (-8, 1),
        (-11, 1),
        (-15, 2),
        (-19, 1),
        (-20, 2),
        (-23, 3),
        (-24, 2),
        (-31, 3),
        (-35, 2),
        (-39, 4),
        (-40, 2),
        (-43, 1),
        (-47, 5),
        (-51, 2),
        (-52, 2),
        (-55, 4),
        (-56, 4),
        (-59, 3),
        (-67, 1),
        (-68, 4),
        (-71, 7),
        (-79, 5),
        (-83, 3),
        (-84, 4),
        (-87, 6),
        (-88, 2),
        (-91, 2),
        (-95, 8),
        (-103, 5),
        (-104, 6),
        (-107, 3),
        (-111, 8),
        (-115, 2),
        (-119, 10),
        (-120, 4),
        (-123, 2),
        (-127, 5),
        (-131, 5),
        (-163, 1),
    ];
    let hk = HK.iter().find(|(d, _)| *d == disc_k).map(|(_, h)| *h)?;
    if c == 1 {
        return Some(hk);
    }
    let unit_index: u64 = match disc_k {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    let mut num = (hk as i128) * (c as i128);
    let mut den = unit_index as i128;
    for (q, _) in crate::exactmath::ff::factorize_u64(c) {
        num *= q as i128 - kronecker_prime(disc_k, q) as i128;
        den *= q as i128;
    }
    assert_eq!(num % den, 0, "class number formula must be integral");
    Some((num / den) as u64)
}
