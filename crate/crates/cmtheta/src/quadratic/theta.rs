//! Weight-one theta series attached to a class group character: the n-th
//! coefficient is the character sum over invertible ideals of norm n prime
//! to the conductor. Ideals are enumerated exactly through primitive forms
//! (A, B, C) with A the primitive norm and d^2 pulled out.

use num_integer::Integer;

use super::chars::{conductor, ClassChar};
use super::forms::{ClassGroup, Form};
use super::ideals::QuadOrder;
use crate::exactmath::Cyc;
use crate::{Error, Result};

/// Class indices (with multiplicity) of all invertible integral ideals of
/// norm n in the order of the class group's discriminant. No coprimality
/// filter is applied here.
pub fn ideal_classes_of_norm(g: &ClassGroup, n: u64) -> Vec<usize> {
    let disc = g.disc;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % (d * d) == 0 {
            let a = (n / (d * d)) as i64;
            for b in (-a + 1)..=a {
                if (b - disc).rem_euclid(2) != 0 {
                    continue;
                }
                let num = b * b - disc;
                if num % (4 * a) != 0 {
                    continue;
                }
                let f = Form::new(a, b, num / (4 * a));
                if !f.is_primitive() {
                    continue;
                }
                out.push(g.index_of(&f.reduce()).expect("reduced form in class group"));
            }
        }
        d += 1;
    }
    out
}

/// Coefficients a(0), ..., a(bound) of the theta series of a primitive
/// nontrivial character of the class group, exactly in Q(zeta_order).
pub fn theta_coefficients(g: &ClassGroup, xi: &ClassChar, bound: usize) -> Result<Vec<Cyc>> {
    if xi.is_trivial() {
        return Err(Error::config(
            "trivial character: the theta series is Eisenstein, not cuspidal",
        ));
    }
    let order = QuadOrder::new(g.disc)?;
    let cond = conductor(g, xi)?;
    if cond != order.c {
        return Err(Error::config(format!(
            "character is imprimitive: conductor {} < {}; rebuild at discriminant {}",
            cond,
            order.c,
            order.dk * (cond * cond) as i64
        )));
    }
    let mut coeffs = vec![Cyc::zero(xi.order); bound + 1];
    for n in 1..=bound as u64 {
        if n.gcd(&order.c) != 1 {
            continue;
        }
        let mut acc = Cyc::zero(xi.order);
        for cls in ideal_classes_of_norm(g, n) {
            acc = acc.add(&xi.value(cls));
        }
        coeffs[n as usize] = acc;
    }
    Ok(coeffs)
}

/// Coefficients of q * prod (1 - q^k)(1 - q^(23 k)) by the pentagonal
/// number expansion; the independent oracle for the cubic theta series of
/// discriminant -23.
pub fn eta_eta23_coefficients(bound: usize) -> Vec<i64> {
    let pent = |scale: usize| -> Vec<i64> {
        let mut v = vec![0i64; bound + 1];
        let mut k = 0i64;
        loop {
            let hit = |k: i64, v: &mut Vec<i64>| {
                let e = k * (3 * k - 1) / 2;
                let idx = e as usize * scale;
                if e >= 0 && idx <= bound {
                    v[idx] += if k.rem_euclid(2) == 0 { 1 } else { -1 };
                    true
                } else {
                    false
                }
            };
            let a = hit(k, &mut v);
            let b = if k > 0 { hit(-k, &mut v) } else { false };
            if !a && !b && k > 0 {
                break;
            }
            k += 1;
        }
        v
    };
    let p1 = pent(1);
    let p23 = pent(23);
    let mut out = vec![0i64; bound + 1];
    for i in 0..=bound {
        for j in 0..=(bound - i) {
            if i + j + 1 <= bound {
                out[i + j + 1] += p1[i] * p23[j];
            }
        }
    }
    out
}
