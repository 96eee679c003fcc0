//! Fractional ideals of imaginary quadratic orders as rank-2 lattices in
//! K = Q(sqrt(dK)), with Hermite-normal-form bases over the coordinate
//! system (1, sqrt(dK)). Supports products, conjugation, norms relative to
//! an order, membership, extension to a larger order, and exact
//! enumeration of elements of a given norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::forms::{split_discriminant, Form};
use crate::exactmath::PosDefLattice;
use crate::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Element x + y sqrt(dK) of the quadratic field of fundamental
/// discriminant dK.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadElem {
    pub dk: i64,
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadElem {
    pub fn new(dk: i64, x: BigRational, y: BigRational) -> Self {
        QuadElem { dk, x, y }
    }

    pub fn from_int(dk: i64, n: i64) -> Self {
        QuadElem::new(dk, rat(n), BigRational::zero())
    }

    pub fn zero(dk: i64) -> Self {
        QuadElem::from_int(dk, 0)
    }

    pub fn one(dk: i64) -> Self {
        QuadElem::from_int(dk, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem::new(self.dk, &self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem::new(self.dk, &self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem::new(self.dk, -self.x.clone(), -self.y.clone())
    }

    pub fn mul(&self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.dk, o.dk);
        let d = rat(self.dk);
        QuadElem::new(
            self.dk,
            &self.x * &o.x + &self.y * &o.y * d,
            &self.x * &o.y + &self.y * &o.x,
        )
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem::new(self.dk, self.x.clone(), -self.y.clone())
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - rat(self.dk) * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        &self.x + &self.x
    }

    pub fn scale(&self, r: &BigRational) -> QuadElem {
        QuadElem::new(self.dk, &self.x * r, &self.y * r)
    }

    /// Multiplicative inverse; zero input is rejected.
    pub fn inv(&self) -> Result<QuadElem> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::arithmetic("inverse of zero"));
        }
        Ok(self.conj().scale(&n.recip()))
    }
}

/// Descriptor of the order of conductor c inside the maximal order of the
/// field with fundamental discriminant dK; disc = c^2 dK.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadOrder {
    pub dk: i64,
    pub c: u64,
    pub disc: i64,
}

impl QuadOrder {
    pub fn new(disc: i64) -> Result<Self> {
        let (dk, c) = split_discriminant(disc)?;
        Ok(QuadOrder { dk, c, disc })
    }

    /// Standard generator w = (disc + sqrt(disc)) / 2, so the order is
    /// Z + Z w.
    pub fn w(&self) -> QuadElem {
        QuadElem::new(
            self.dk,
            BigRational::new(BigInt::from(self.disc), BigInt::from(2)),
            BigRational::new(BigInt::from(self.c), BigInt::from(2)),
        )
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal::from_basis_vectors(self.dk, &[QuadElem::one(self.dk), self.w()])
            .expect("order lattice has rank 2")
    }

    /// sqrt(disc) as an element of K.
    pub fn sqrt_disc(&self) -> QuadElem {
        QuadElem::new(self.dk, BigRational::zero(), rat(self.c as i64))
    }

    /// Number of units of the order: 6 or 4 for the two exceptional
    /// maximal orders, otherwise 2.
    pub fn unit_count(&self) -> u64 {
        match (self.dk, self.c) {
            (-3, 1) => 6,
            (-4, 1) => 4,
            _ => 2,
        }
    }
}

/// Full-rank lattice in K with HNF basis [(a, 0), (b, g)] in coordinates
/// (1, sqrt(dK)), stored with a common positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub dk: i64,
    /// Denominator d and integer rows [[a, 0], [b, g]]: the basis vectors
    /// are (a/d) and (b + g sqrt(dK))/d, with a, g > 0 and 0 <= b < a.
    den: BigInt,
    a: BigInt,
    b: BigInt,
    g: BigInt,
}

impl Ideal {
    /// HNF basis of the lattice spanned by the given vectors. Fails unless
    /// the span has full rank 2.
    pub fn from_basis_vectors(dk: i64, vecs: &[QuadElem]) -> Result<Ideal> {
        let mut den = BigInt::one();
        for v in vecs {
            debug_assert_eq!(v.dk, dk);
            den = num_integer::lcm(den.clone(), v.x.denom().clone());
            den = num_integer::lcm(den, v.y.denom().clone());
        }
        let mut rows: Vec<(BigInt, BigInt)> = vecs
            .iter()
            .map(|v| {
                let p = (&v.x * BigRational::from(den.clone())).to_integer();
                let q = (&v.y * BigRational::from(den.clone())).to_integer();
                (p, q)
            })
            .filter(|(p, q)| !p.is_zero() || !q.is_zero())
            .collect();
        // Eliminate the sqrt coordinate: combine rows until a single row
        // carries gcd of all q, the rest have q = 0.
        let mut i = 0;
        while i < rows.len() {
            if rows[i].1.is_zero() {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < rows.len() {
                if rows[j].1.is_zero() {
                    j += 1;
                    continue;
                }
                // Row combination via extended gcd on the q entries.
                let e = rows[i].1.extended_gcd(&rows[j].1);
                let (qi, qj) = (rows[i].1.clone(), rows[j].1.clone());
                let (pi, pj) = (rows[i].0.clone(), rows[j].0.clone());
                let new_i = (&e.x * &pi + &e.y * &pj, e.gcd.clone());
                let new_j = (
                    (&qj / &e.gcd) * &pi - (&qi / &e.gcd) * &pj,
                    BigInt::zero(),
                );
                rows[i] = new_i;
                rows[j] = new_j;
                j += 1;
            }
            break;
        }
        let mut g_row: Option<(BigInt, BigInt)> = None;
        let mut a_val = BigInt::zero();
        for (p, q) in rows {
            if q.is_zero() {
                if !p.is_zero() {
                    a_val = num_integer::gcd(a_val, p);
                }
            } else {
                debug_assert!(g_row.is_none());
                g_row = Some((p, q));
            }
        }
        let (mut b_val, mut g_val) = g_row.ok_or_else(|| Error::arithmetic("lattice rank < 2"))?;
        if a_val.is_zero() {
            return Err(Error::arithmetic("lattice rank < 2"));
        }
        a_val = a_val.abs();
        if g_val.is_negative() {
            g_val = -g_val;
            b_val = -b_val;
        }
        b_val = b_val.mod_floor(&a_val);
        let mut ideal = Ideal {
            dk,
            den,
            a: a_val,
            b: b_val,
            g: g_val,
        };
        ideal.normalize_den();
        Ok(ideal)
    }

    fn normalize_den(&mut self) {
        let g = num_integer::gcd(
            num_integer::gcd(self.a.clone(), self.b.clone()),
            num_integer::gcd(self.g.clone(), self.den.clone()),
        );
        if !g.is_one() {
            self.a = &self.a / &g;
            self.b = &self.b / &g;
            self.g = &self.g / &g;
            self.den = &self.den / &g;
        }
    }

    pub fn basis(&self) -> [QuadElem; 2] {
        let d = BigRational::from(self.den.clone());
        [
            QuadElem::new(
                self.dk,
                BigRational::from(self.a.clone()) / d.clone(),
                BigRational::zero(),
            ),
            QuadElem::new(
                self.dk,
                BigRational::from(self.b.clone()) / d.clone(),
                BigRational::from(self.g.clone()) / d,
            ),
        ]
    }

    /// Ideal attached to a form (a, b, c) of discriminant disc(order):
    /// Z a + Z (b + sqrt(disc)) / 2, matching the orientation convention
    /// of to_form so the two maps are mutually inverse.
    pub fn from_form(order: &QuadOrder, f: &Form) -> Ideal {
        debug_assert_eq!(f.disc(), order.disc);
        let alpha = QuadElem::from_int(order.dk, f.a);
        let beta = QuadElem::new(
            order.dk,
            BigRational::new(BigInt::from(f.b), BigInt::from(2)),
            BigRational::new(BigInt::from(order.c), BigInt::from(2)),
        );
        Ideal::from_basis_vectors(order.dk, &[alpha, beta]).expect("form lattice has rank 2")
    }

    /// Reduced norm form of the ideal relative to the order, with the
    /// orientation convention Im(beta/alpha) > 0. The result is a
    /// primitive form of discriminant disc(order) whenever the ideal is
    /// invertible for that order.
    pub fn to_form(&self, order: &QuadOrder) -> Result<Form> {
        let [alpha, mut beta] = self.basis();
        // Orientation: the sqrt coefficient of beta * conj(alpha) fixes
        // the sign of Im(beta/alpha).
        let t = beta.mul(&alpha.conj());
        if t.y.is_negative() {
            beta = beta.neg();
        }
        let n = self.norm_in(order);
        let a = alpha.norm() / n.clone();
        let bb = (alpha.mul(&beta.conj()).trace()) / n.clone();
        let c = beta.norm() / n;
        let to_i64 = |r: &BigRational| -> Result<i64> {
            if !r.is_integer() {
                return Err(Error::arithmetic("norm form is not integral"));
            }
            i64::try_from(r.to_integer()).map_err(|_| Error::arithmetic("norm form overflow"))
        };
        let f = Form::new(to_i64(&a)?, to_i64(&bb)?, to_i64(&c)?);
        if f.disc() != order.disc {
            return Err(Error::arithmetic(format!(
                "ideal is not proper for disc {}: norm form disc {}",
                order.disc,
                f.disc()
            )));
        }
        Ok(f.reduce())
    }

    pub fn mul(&self, other: &Ideal) -> Ideal {
        debug_assert_eq!(self.dk, other.dk);
        let [a1, b1] = self.basis();
        let [a2, b2] = other.basis();
        Ideal::from_basis_vectors(
            self.dk,
            &[a1.mul(&a2), a1.mul(&b2), b1.mul(&a2), b1.mul(&b2)],
        )
        .expect("product lattice has rank 2")
    }

    pub fn conj(&self) -> Ideal {
        let [a, b] = self.basis();
        Ideal::from_basis_vectors(self.dk, &[a.conj(), b.conj()]).expect("conjugate rank 2")
    }

    pub fn scale_elem(&self, e: &QuadElem) -> Ideal {
        let [a, b] = self.basis();
        Ideal::from_basis_vectors(self.dk, &[a.mul(e), b.mul(e)]).expect("scaled rank 2")
    }

    pub fn scale_rat(&self, r: &BigRational) -> Ideal {
        let [a, b] = self.basis();
        Ideal::from_basis_vectors(self.dk, &[a.scale(r), b.scale(r)]).expect("scaled rank 2")
    }

    /// Determinant of the coordinate matrix: covolume relative to the
    /// lattice Z + Z sqrt(dK).
    fn det(&self) -> BigRational {
        BigRational::new(&self.a * &self.g, &self.den * &self.den)
    }

    /// Norm of the ideal relative to an order: the index (as a positive
    /// rational) of the ideal in the order lattice.
    pub fn norm_in(&self, order: &QuadOrder) -> BigRational {
        let o = order.unit_ideal();
        (self.det() / o.det()).abs()
    }

    pub fn contains(&self, e: &QuadElem) -> bool {
        // Solve e = s * (a/den) + t * ((b + g sqrt)/den) for integers s, t.
        let den = BigRational::from(self.den.clone());
        let t = (&e.y * &den) / BigRational::from(self.g.clone());
        if !t.is_integer() {
            return false;
        }
        let s = (&e.x * &den - t.clone() * BigRational::from(self.b.clone()))
            / BigRational::from(self.a.clone());
        s.is_integer()
    }

    /// Whether the lattice is a module over the given order.
    pub fn is_module_over(&self, order: &QuadOrder) -> bool {
        let w = order.w();
        let [a, b] = self.basis();
        self.contains(&a.mul(&w)) && self.contains(&b.mul(&w))
    }

    /// The lattice generated over a (larger) order: O' * I.
    pub fn extend_to_order(&self, target: &QuadOrder) -> Ideal {
        let w = target.w();
        let [a, b] = self.basis();
        Ideal::from_basis_vectors(self.dk, &[a.clone(), b.clone(), a.mul(&w), b.mul(&w)])
            .expect("extension rank 2")
    }

    /// Fractional inverse relative to an order: conj(I) / N(I).
    pub fn inverse_in(&self, order: &QuadOrder) -> Ideal {
        self.conj().scale_rat(&self.norm_in(order).recip())
    }

    /// All elements of the lattice of the given norm, exactly.
    pub fn elements_of_norm(&self, n: &BigRational) -> Vec<QuadElem> {
        let [e1, e2] = self.basis();
        let g11 = e1.norm();
        let g22 = e2.norm();
        let g12 = e1.mul(&e2.conj()).trace() / rat(2);
        let lat = PosDefLattice::new(vec![
            vec![g11, g12.clone()],
            vec![g12, g22],
        ])
        .expect("norm form of an imaginary quadratic lattice is definite");
        lat.enumerate_by_norm(n)
            .into_iter()
            .map(|v| {
                let s = BigRational::from(v[0].clone());
                let t = BigRational::from(v[1].clone());
                e1.scale(&s).add(&e2.scale(&t))
            })
            .collect()
    }

    /// Invertibility test relative to an order: I * conj(I) = N(I) * O.
    pub fn is_invertible_in(&self, order: &QuadOrder) -> bool {
        let n = self.norm_in(order);
        let rhs = order.unit_ideal().scale_rat(&n);
        self.mul(&self.conj()) == rhs
    }

    /// Prime ideals of the order above a rational prime q not dividing the
    /// conductor: lattices Z q + Z (-b + sqrt(disc))/2 for square roots b
    /// of disc mod 4q. Empty when q is inert.
    pub fn primes_above(order: &QuadOrder, q: u64) -> Vec<Ideal> {
        assert!(order.c % q != 0, "prime must not divide the conductor");
        let disc = order.disc;
        let mut out: Vec<Ideal> = Vec::new();
        for b in 0..(2 * q as i64) {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            if (b * b - disc).rem_euclid(4 * q as i64) != 0 {
                continue;
            }
            let f = Form::new(q as i64, b, (b * b - disc) / (4 * q as i64));
            let ideal = Ideal::from_form(order, &f);
            if !out.contains(&ideal) {
                out.push(ideal);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::forms::ClassGroup;

    #[test]
    fn form_ideal_roundtrip() {
        for disc in [-23, -47, -100, -207] {
            let order = QuadOrder::new(disc).unwrap();
            let g = ClassGroup::new(disc).unwrap();
            for f in &g.forms {
                let ideal = Ideal::from_form(&order, f);
                assert_eq!(ideal.norm_in(&order), rat(f.a));
                assert!(ideal.is_module_over(&order));
                assert!(ideal.is_invertible_in(&order));
                assert_eq!(ideal.to_form(&order).unwrap(), *f);
            }
        }
    }

    #[test]
    fn ideal_product_matches_composition() {
        for disc in [-23, -47, -100] {
            let order = QuadOrder::new(disc).unwrap();
            let g = ClassGroup::new(disc).unwrap();
            for f1 in &g.forms {
                for f2 in &g.forms {
                    let i1 = Ideal::from_form(&order, f1);
                    let i2 = Ideal::from_form(&order, f2);
                    let prod = i1.mul(&i2).to_form(&order).unwrap();
                    assert_eq!(prod, f1.compose(f2), "disc {}", disc);
                }
            }
        }
    }

    #[test]
    fn conj_gives_inverse_class() {
        let disc = -23;
        let order = QuadOrder::new(disc).unwrap();
        let g = ClassGroup::new(disc).unwrap();
        let f = Form::new(2, 1, 3);
        let i = Ideal::from_form(&order, &f);
        let prod = i.mul(&i.conj());
        // I * conj(I) = N(I) * O, the principal class.
        assert_eq!(prod.to_form(&order).unwrap(), g.forms[0]);
        assert_eq!(prod, order.unit_ideal().scale_rat(&rat(2)));
    }

    #[test]
    fn primes_above_small() {
        let order = QuadOrder::new(-23).unwrap();
        let g = ClassGroup::new(-23).unwrap();
        for q in [2u64, 3, 13] {
            let ps = Ideal::primes_above(&order, q);
            assert_eq!(ps.len(), 2, "q = {} splits", q);
            let c0 = g.index_of(&ps[0].to_form(&order).unwrap()).unwrap();
            let c1 = g.index_of(&ps[1].to_form(&order).unwrap()).unwrap();
            assert_ne!(c0, 0, "prime above {} is non-principal", q);
            assert_eq!(g.mul[c0][c1], 0, "conjugate primes multiply to 1");
            assert_eq!(ps[0].mul(&ps[1]), order.unit_ideal().scale_rat(&rat(q as i64)));
        }
        // 5 is inert in Q(sqrt(-23)).
        assert!(Ideal::primes_above(&order, 5).is_empty());
    }

    #[test]
    fn primes_above_disc_minus_100() {
        let order = QuadOrder::new(-100).unwrap();
        let g = ClassGroup::new(-100).unwrap();
        let ps = Ideal::primes_above(&order, 13);
        assert_eq!(ps.len(), 2);
        for p in &ps {
            let idx = g.index_of(&p.to_form(&order).unwrap()).unwrap();
            assert_eq!(idx, 1, "prime above 13 lands in the nontrivial class");
        }
    }

    #[test]
    fn extension_to_maximal_order() {
        // O_3 in Q(sqrt(-23)): disc -207, h = 6, mapping onto h = 3.
        let o3 = QuadOrder::new(-207).unwrap();
        let o1 = QuadOrder::new(-23).unwrap();
        let g3 = ClassGroup::new(-207).unwrap();
        let g1 = ClassGroup::new(-23).unwrap();
        assert_eq!(g3.h(), 6);
        // The pushforward is a surjective homomorphism on classes.
        let mut image = std::collections::HashSet::new();
        for f in &g3.forms {
            let up = Ideal::from_form(&o3, f).extend_to_order(&o1);
            assert!(up.is_module_over(&o1));
            let cls = g1.index_of(&up.to_form(&o1).unwrap()).unwrap();
            image.insert(cls);
        }
        assert_eq!(image.len(), 3);
        // Identity maps to identity.
        let up = Ideal::from_form(&o3, &g3.forms[0]).extend_to_order(&o1);
        assert_eq!(g1.index_of(&up.to_form(&o1).unwrap()).unwrap(), 0);
    }

    #[test]
    fn elements_of_norm() {
        let order = QuadOrder::new(-23).unwrap();
        let o = order.unit_ideal();
        assert_eq!(o.elements_of_norm(&rat(1)).len(), 2);
        assert_eq!(o.elements_of_norm(&rat(2)).len(), 0);
        // Norm 6: (1 +- sqrt(-23))/2 and negatives.
        let six = o.elements_of_norm(&rat(6));
        assert_eq!(six.len(), 4);
        for e in &six {
            assert_eq!(e.norm(), rat(6));
            assert!(o.contains(e));
        }
    }

    #[test]
    fn membership_and_inverse() {
        let order = QuadOrder::new(-23).unwrap();
        let f = Form::new(2, 1, 3);
        let i = Ideal::from_form(&order, &f);
        let inv = i.inverse_in(&order);
        assert_eq!(i.mul(&inv), order.unit_ideal());
        assert!(i.contains(&QuadElem::from_int(-23, 2)));
        assert!(!i.contains(&QuadElem::one(-23)));
    }
}
