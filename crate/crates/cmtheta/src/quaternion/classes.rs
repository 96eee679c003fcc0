//! Maximal orders and right ideal classes of a definite quaternion
//! algebra ramified at one finite prime. The maximal order is grown from
//! Z<1, i, j, k> by prime saturation until the trace form determinant
//! equals p^2; the class set is found by a breadth-first walk through
//! 2-neighbors, with completeness certified exactly by the Eichler mass
//! formula sum 1/w_i = (p - 1)/12.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::alg::{q4_from_ints, Q4, QuatAlg};
use super::lat::QLat;
use crate::exactmath::ff::factorize_u64;
use crate::{Error, Result};

/// Determinant of a square rational matrix by cofactor expansion.
fn det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigRational::zero();
    for (col, head) in m[0].iter().enumerate() {
        if head.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = head * det(&minor);
        if col % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// |det trd(b_i b_j)| of a lattice basis; equals rd^2 for an order of
/// reduced discriminant rd.
fn trace_form_det(alg: &QuatAlg, l: &QLat) -> BigRational {
    let basis = l.basis();
    let m: Vec<Vec<BigRational>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| alg.trd(&alg.mul(&basis[i], &basis[j])))
                .collect()
        })
        .collect();
    det(&m).abs()
}

/// Attempts to enlarge the order by a coset x in (1/q) L / L such that
/// L + Z x is again a ring of integral elements.
fn enlarge_at(alg: &QuatAlg, l: &QLat, q: u64) -> Option<QLat> {
    let basis = l.basis();
    let qr = BigRational::from(BigInt::from(q));
    let mut coef = [0u64; 4];
    loop {
        // Advance the odometer; skip the zero coset.
        let mut k = 0;
        loop {
            coef[k] += 1;
            if coef[k] < q {
                break;
            }
            coef[k] = 0;
            k += 1;
            if k == 4 {
                return None;
            }
        }
        let mut x = super::alg::q4_zero();
        for (c, b) in coef.iter().zip(&basis) {
            for (xi, bi) in x.iter_mut().zip(b.iter()) {
                *xi += BigRational::from(BigInt::from(*c)) * bi / &qr;
            }
        }
        if !alg.trd(&x).is_integer() || !alg.nrd(&x).is_integer() {
            continue;
        }
        let mut gens = basis.clone();
        gens.push(x.clone());
        let m = QLat::from_generators(&gens);
        if &m == l {
            continue;
        }
        let closed = m.contains(&alg.mul(&x, &x))
            && basis.iter().all(|b| {
                m.contains(&alg.mul(&x, b)) && m.contains(&alg.mul(b, &x))
            });
        if closed {
            return Some(m);
        }
    }
}

/// The maximal order containing Z<1, i, j, k>, certified by its trace
/// form determinant p^2.
pub fn maximal_order(alg: &QuatAlg) -> QLat {
    let mut l = QLat::from_generators(&[
        q4_from_ints([1, 0, 0, 0]),
        q4_from_ints([0, 1, 0, 0]),
        q4_from_ints([0, 0, 1, 0]),
        q4_from_ints([0, 0, 0, 1]),
    ]);
    let target = BigRational::from(BigInt::from(alg.p) * BigInt::from(alg.p));
    for _ in 0..64 {
        let d = trace_form_det(alg, &l);
        if d == target {
            return l;
        }
        let ratio = &d / &target;
        assert!(
            ratio.is_integer() && ratio > BigRational::one(),
            "order not contained in a maximal order"
        );
        let ratio: u64 = u64::try_from(ratio.to_integer()).expect("small index");
        let mut progressed = false;
        for (q, _) in factorize_u64(ratio) {
            if let Some(m) = enlarge_at(alg, &l, q) {
                l = m;
                progressed = true;
                break;
            }
        }
        assert!(progressed, "saturation stalled before reaching p^2");
    }
    unreachable!("saturation did not terminate");
}

/// Right ideal classes of the fixed maximal order.
pub struct ClassSet {
    pub alg: QuatAlg,
    pub order: QLat,
    /// Class representatives; reps[0] is the order itself. All are
    /// integral primitive right ideals of `order`.
    pub reps: Vec<QLat>,
    pub nrds: Vec<BigRational>,
    /// w_i = |left-order units| / 2.
    pub weights: Vec<u64>,
}

impl ClassSet {
    pub fn h(&self) -> usize {
        self.reps.len()
    }

    /// Exact rational sqrt of the covolume ratio to the order.
    pub fn ideal_nrd(&self, l: &QLat) -> BigRational {
        let ratio = l.covolume() / self.order.covolume();
        sqrt_rational(&ratio).expect("covolume ratio is a square")
    }

    /// The left order (1/nrd I)(I conj(I)).
    pub fn left_order(&self, l: &QLat) -> QLat {
        let n = self.ideal_nrd(l);
        let prod = l.mul(&self.alg, &l.conj(&self.alg));
        let ol = prod.scale(&n.recip());
        debug_assert!(ol.contains(&q4_from_ints([1, 0, 0, 0])));
        ol
    }

    fn unit_weight(&self, l: &QLat) -> u64 {
        let ol = self.left_order(l);
        let units = ol.count_nrd(&self.alg, &BigRational::one());
        debug_assert_eq!(units % 2, 0);
        (units / 2) as u64
    }

    /// Whether two right ideals are left-equivalent: some x in J conj(I)
    /// has nrd(x) = nrd(I) nrd(J).
    pub fn equivalent(&self, i: &QLat, j: &QLat) -> bool {
        let prod = j.mul(&self.alg, &i.conj(&self.alg));
        let target = self.ideal_nrd(i) * self.ideal_nrd(j);
        prod.count_nrd(&self.alg, &target) > 0
    }

    fn class_of(&self, l: &QLat) -> Option<usize> {
        (0..self.h()).find(|&k| self.equivalent(&self.reps[k], l))
    }

    /// Class index of an arbitrary right ideal.
    pub fn index_of(&self, l: &QLat) -> usize {
        self.class_of(l).expect("complete class set")
    }
}

/// Divides out the content so the integral ideal is primitive in the
/// order's coordinates.
fn primitive_in(order: &QLat, l: &QLat) -> QLat {
    let mut g = BigInt::zero();
    for b in l.basis() {
        let coords = order.coords(&b).expect("integral ideal");
        for c in coords {
            g = g.gcd(&c);
        }
    }
    if g > BigInt::one() {
        l.scale(&BigRational::new(BigInt::one(), g))
    } else {
        l.clone()
    }
}

fn sqrt_rational(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

/// Enumerates the right ideal classes by 2-neighbor BFS and certifies the
/// result against the exact mass formula.
pub fn ideal_classes(alg: &QuatAlg) -> Result<ClassSet> {
    if alg.p == 2 {
        return Err(Error::config("class walk needs an odd ramified prime"));
    }
    let order = maximal_order(alg);
    let mut set = ClassSet {
        alg: alg.clone(),
        order: order.clone(),
        reps: vec![order.clone()],
        nrds: vec![BigRational::one()],
        weights: Vec::new(),
    };
    set.weights = vec![set.unit_weight(&order)];
    let mass_target = BigRational::new(BigInt::from(alg.p - 1), BigInt::from(12));
    let cap = 10 * (alg.p as usize - 1) / 12 + 24;
    let q = 2u64;
    let mut queue: VecDeque<QLat> = VecDeque::new();
    queue.push_back(order.clone());
    while let Some(ideal) = queue.pop_front() {
        let mut neighbors: Vec<QLat> = Vec::new();
        // Left multiplication by the left order preserves the right
        // O-module structure, so x runs over O_l(I)/q O_l(I).
        let ol = set.left_order(&ideal);
        let lbasis = ol.basis();
        for mask in 1..(q.pow(4)) {
            let digits = [
                mask % q,
                (mask / q) % q,
                (mask / (q * q)) % q,
                (mask / (q * q * q)) % q,
            ];
            let mut x = super::alg::q4_zero();
            for (c, b) in digits.iter().zip(&lbasis) {
                for (xi, bi) in x.iter_mut().zip(b.iter()) {
                    *xi += BigRational::from(BigInt::from(*c)) * bi;
                }
            }
            let nx = alg.nrd(&x);
            if !(nx / BigRational::from(BigInt::from(q))).is_integer() {
                continue;
            }
            // J = x I + q I.
            let ix = QLat::from_generators(
                &ideal
                    .basis()
                    .iter()
                    .map(|b| alg.mul(&x, b))
                    .collect::<Vec<Q4>>(),
            );
            let j = ix.add(&ideal.scale(&BigRational::from(BigInt::from(q))));
            let index = j.covolume() / ideal.covolume();
            if index != BigRational::from(BigInt::from(q * q)) {
                continue;
            }
            neighbors.push(primitive_in(&order, &j));
        }
        neighbors.sort();
        neighbors.dedup();
        for j in neighbors {
            if set.class_of(&j).is_none() {
                set.nrds.push(set.ideal_nrd(&j));
                set.weights.push(set.unit_weight(&j));
                set.reps.push(j.clone());
                queue.push_back(j);
                if set.reps.len() > cap {
                    return Err(Error::failed("class walk exceeded the mass guard"));
                }
            }
        }
    }
    let mass: BigRational = set
        .weights
        .iter()
        .map(|&w| BigRational::new(BigInt::one(), BigInt::from(w)))
        .sum();
    if mass != mass_target {
        return Err(Error::failed(format!(
            "mass formula violated: found {}, expected {}",
            mass, mass_target
        )));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_orders_have_unit_one() {
        for p in [7u64, 11, 13, 17, 19, 23] {
            let alg = QuatAlg::new(p).unwrap();
            let o = maximal_order(&alg);
            assert!(o.contains(&q4_from_ints([1, 0, 0, 0])), "p = {}", p);
            assert_eq!(
                trace_form_det(&alg, &o),
                BigRational::from(BigInt::from(p * p))
            );
        }
    }

    #[test]
    fn class_numbers_and_weights() {
        let cases: Vec<(u64, Vec<u64>)> = vec![
            (7, vec![2]),
            (11, vec![2, 3]),
            (13, vec![1]),
            (19, vec![1, 2]),
            (23, vec![1, 2, 3]),
        ];
        for (p, mut expect) in cases {
            let alg = QuatAlg::new(p).unwrap();
            let set = ideal_classes(&alg).unwrap();
            let mut got = set.weights.clone();
            got.sort_unstable();
            expect.sort_unstable();
            assert_eq!(got, expect, "p = {}", p);
        }
    }

    #[test]
    fn mass_formula_medium_primes() {
        for p in [37u64, 43, 67] {
            let alg = QuatAlg::new(p).unwrap();
            let set = ideal_classes(&alg).unwrap();
            let mass: BigRational = set
                .weights
                .iter()
                .map(|&w| BigRational::new(BigInt::one(), BigInt::from(w)))
                .sum();
            assert_eq!(
                mass,
                BigRational::new(BigInt::from(p - 1), BigInt::from(12)),
                "p = {}",
                p
            );
        }
    }

    #[test]
    fn representatives_are_inequivalent() {
        let alg = QuatAlg::new(23).unwrap();
        let set = ideal_classes(&alg).unwrap();
        for i in 0..set.h() {
            for j in 0..i {
                assert!(!set.equivalent(&set.reps[i], &set.reps[j]));
            }
            assert!(set.equivalent(&set.reps[i], &set.reps[i]));
        }
    }

    #[test]
    fn left_orders_are_maximal() {
        let alg = QuatAlg::new(11).unwrap();
        let set = ideal_classes(&alg).unwrap();
        for rep in &set.reps {
            let ol = set.left_order(rep);
            assert_eq!(
                trace_form_det(&alg, &ol),
                BigRational::from(BigInt::from(11u64 * 11))
            );
            // An order: closed under multiplication.
            let b = ol.basis();
            for x in &b {
                for y in &b {
                    assert!(ol.contains(&alg.mul(x, y)));
                }
            }
        }
    }
}
