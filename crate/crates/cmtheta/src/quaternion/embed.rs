//! Optimal embeddings of an imaginary quadratic order O_c into the left
//! orders of the class representatives, the induced map from Pic(O_c) to
//! the class set, and the class functions it pushes forward.
//!
//! An embedding is pinned by the image x of w = (D + sqrt(D))/2: an
//! element with trd(x) = D and nrd(x) = (D^2 - D)/4 such that phi does
//! not extend to any order of smaller conductor (saturation). The action
//! of an O_c-ideal class t with representative ideal (a, (b + sqrt(D))/2)
//! sends the base ideal I to phi(a) I + phi((b + sqrt(D))/2) I, and the
//! class of the result depends only on t.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::alg::{q4_from_ints, Q4};
use super::brandt::BrandtModule;
use super::classes::{ideal_classes, ClassSet};
use super::lat::QLat;
use crate::exactmath::ff::{factorize_u64, legendre};
use crate::exactmath::Cyc;
use crate::quadratic::{ClassChar, ClassGroup, Form};
use crate::{Error, Result};

pub struct EmbeddedClassSet {
    pub brandt: BrandtModule,
    pub group: ClassGroup,
    /// Class hosting the base embedding.
    pub base_class: usize,
    /// Image of w under the base embedding.
    pub x: Q4,
    /// iota[t] = class index of the translate of the base ideal by the
    /// t-th ideal class of Pic(O_c).
    pub iota: Vec<usize>,
}

impl EmbeddedClassSet {
    pub fn new(p: u64, group: &ClassGroup) -> Result<EmbeddedClassSet> {
        let alg = super::alg::QuatAlg::new(p)?;
        let classes = ideal_classes(&alg)?;
        EmbeddedClassSet::with_classes(classes, group)
    }

    pub fn with_classes(classes: ClassSet, group: &ClassGroup) -> Result<EmbeddedClassSet> {
        let p = classes.alg.p;
        let disc = group.disc;
        let (dk, c) = crate::quadratic::split_discriminant(disc)?;
        if disc >= -4 {
            return Err(Error::config("discriminant must be below -4"));
        }
        if (-disc) % (p as i64) == 0 || c % p == 0 {
            return Err(Error::config("p must be coprime to the discriminant"));
        }
        if legendre(dk.rem_euclid(p as i64), p) != -1 {
            return Err(Error::config("p must be inert in the quadratic field"));
        }
        // Base embedding: first class (in walk order) admitting one.
        let mut base: Option<(usize, Q4)> = None;
        'outer: for i in 0..classes.h() {
            let order = classes.left_order(&classes.reps[i]);
            let mut xs = optimal_elements(&classes, &order, disc, c);
            xs.sort_by_key(|x| x.iter().map(|c| c.to_string()).collect::<Vec<_>>());
            if let Some(x) = xs.into_iter().next() {
                base = Some((i, x));
                break 'outer;
            }
        }
        let (base_class, x) =
            base.ok_or_else(|| Error::failed("no optimal embedding into any class"))?;
        let brandt = BrandtModule::new(classes);
        let mut set = EmbeddedClassSet {
            brandt,
            group: group.clone(),
            base_class,
            x,
            iota: Vec::new(),
        };
        let iota: Vec<usize> = (0..group.h())
            .map(|t| set.translate_class(&group.forms[t]))
            .collect();
        set.iota = iota;
        if set.iota[0] != set.base_class {
            return Err(Error::failed("identity class does not fix the base ideal"));
        }
        Ok(set)
    }

    /// phi(u + v sqrt(D)) = u + v (2x - D).
    fn phi(&self, u: &BigRational, v: &BigRational) -> Q4 {
        let d = BigRational::from(BigInt::from(self.group.disc));
        let two = BigRational::from(BigInt::from(2));
        let mut out = super::alg::q4_zero();
        for (oi, xi) in out.iter_mut().zip(self.x.iter()) {
            *oi = v * &two * xi;
        }
        out[0] += u - v * &d;
        out
    }

    /// Class index of phi(a) I + phi((b + sqrt(D))/2) I for the base
    /// ideal I and a form (a, b, *) with leading coefficient coprime to
    /// p; reduces the ideal-class action on the class set.
    pub fn translate_class_of_form(&self, f: &Form) -> Result<usize> {
        if f.a <= 0 || (f.a as u64) % self.brandt.classes.alg.p == 0 {
            return Err(Error::config("translate needs a norm coprime to p"));
        }
        Ok(self.translate_class(f))
    }

    fn translate_class(&self, f: &Form) -> usize {
        let f = f.rep_coprime_to((self.brandt.classes.alg.p as i64) * self.group.disc);
        let base = &self.brandt.classes.reps[self.base_class];
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let ga = self.phi(&BigRational::from(BigInt::from(f.a)), &BigRational::zero());
        let gb = self.phi(&(&half * BigRational::from(BigInt::from(f.b))), &half);
        let mut gens: Vec<Q4> = Vec::with_capacity(8);
        for bvec in base.basis() {
            gens.push(self.brandt.classes.alg.mul(&ga, &bvec));
            gens.push(self.brandt.classes.alg.mul(&gb, &bvec));
        }
        let translated = QLat::from_generators(&gens);
        self.brandt.classes.index_of(&translated)
    }

    /// Pushforward of a ring class character: [xi]_i =
    /// (1/w_i) sum_{iota(t) = i} xi(t).
    pub fn xi_vector(&self, xi: &ClassChar) -> Vec<Cyc> {
        let h = self.brandt.h();
        let mut out = vec![Cyc::zero(xi.order); h];
        for (t, &i) in self.iota.iter().enumerate() {
            out[i] = out[i].add(&xi.value(t));
        }
        for (i, v) in out.iter_mut().enumerate() {
            let w = BigRational::new(BigInt::one(), BigInt::from(self.brandt.classes.weights[i]));
            *v = v.scale(&w);
        }
        out
    }

    /// Pushforward of the trivial character at the given cyclotomic
    /// conductor: [1]_i = (fiber size over i) / w_i.
    pub fn unit_vector(&self, cond: u32) -> Vec<Cyc> {
        let h = self.brandt.h();
        let mut out = vec![Cyc::zero(cond); h];
        for &i in &self.iota {
            out[i] = out[i].add(&Cyc::one(cond));
        }
        for (i, v) in out.iter_mut().enumerate() {
            let w = BigRational::new(BigInt::one(), BigInt::from(self.brandt.classes.weights[i]));
            *v = v.scale(&w);
        }
        out
    }

    /// The all-ones vector, the Eisenstein anchor Sigma_0.
    pub fn sigma0(&self, cond: u32) -> Vec<Cyc> {
        vec![Cyc::one(cond); self.brandt.h()]
    }

    /// Theta lift Theta_p([1] (x) [xi]) through q^k_max.
    pub fn theta_lift_of_character(&self, xi: &ClassChar, k_max: u64) -> Vec<Cyc> {
        let one = self.unit_vector(xi.order);
        let vec_xi = self.xi_vector(xi);
        self.brandt.theta_lift(&one, &vec_xi, k_max)
    }
}

/// All x in the order with trd(x) = D, nrd(x) = (D^2 - D)/4 whose
/// embedding does not extend to a smaller conductor.
pub fn optimal_elements(classes: &ClassSet, order: &QLat, disc: i64, c: u64) -> Vec<Q4> {
    let alg = &classes.alg;
    let d = BigInt::from(disc);
    let nw = BigRational::new(&d * &d - &d, BigInt::from(4));
    let trd_target = BigRational::from(d.clone());
    let mut out = Vec::new();
    for x in order.elements_of_nrd(alg, &nw) {
        if alg.trd(&x) != trd_target {
            continue;
        }
        let mut saturated = true;
        for (q, _) in factorize_u64(c) {
            // Does phi extend to O_{c/q}? Test whether
            // (D/q^2 + (2x - D)/q) / 2 lies in the order.
            let dq = BigRational::new(BigInt::from(disc), BigInt::from(q * q));
            let qq = BigRational::from(BigInt::from(q));
            let two = BigRational::from(BigInt::from(2));
            let mut y = super::alg::q4_zero();
            for (yi, xi) in y.iter_mut().zip(x.iter()) {
                *yi = &two * xi / &qq / &two;
            }
            y[0] += (&dq - BigRational::from(BigInt::from(disc)) / &qq) / &two;
            if order.contains(&y) {
                saturated = false;
                break;
            }
        }
        if saturated {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::characters_of_order;

    fn embedded(p: u64, disc: i64) -> EmbeddedClassSet {
        let g = ClassGroup::new(disc).unwrap();
        EmbeddedClassSet::new(p, &g).unwrap()
    }

    #[test]
    fn base_embedding_satisfies_minimal_polynomial() {
        let e = embedded(11, -23);
        let alg = &e.brandt.classes.alg;
        // x^2 - D x + (D^2 - D)/4 = 0 for x = phi(w).
        let x2 = alg.mul(&e.x, &e.x);
        let d = BigRational::from(BigInt::from(-23i64));
        let nw = BigRational::from(BigInt::from((23 * 24) / 4));
        let mut check = x2;
        for (ci, xi) in check.iter_mut().zip(e.x.iter()) {
            *ci -= &d * xi;
        }
        check[0] += nw;
        assert!(check.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn iota_covers_and_anchors_pair() {
        for (p, disc, n) in [(11u64, -23i64, 3u32), (11, -100, 2)] {
            let e = embedded(p, disc);
            assert_eq!(e.iota.len(), e.group.h());
            let xi = characters_of_order(&e.group, n)[0].clone();
            let vec_xi = e.xi_vector(&xi);
            let one = e.unit_vector(xi.order);
            let sigma0 = e.sigma0(xi.order);
            // <Sigma_0, [1]> = h and <Sigma_0, [xi]> = 0.
            let h = e.brandt.pair(&sigma0, &one);
            assert_eq!(
                h,
                Cyc::from_int(xi.order, e.group.h() as i64),
                "p={} disc={}",
                p,
                disc
            );
            assert!(e.brandt.pair(&sigma0, &vec_xi).is_zero());
        }
    }

    #[test]
    fn translate_is_class_invariant() {
        let e = embedded(11, -23);
        for t in 0..e.group.h() {
            let f1 = e.group.forms[t].rep_coprime_to(11 * 23);
            let f2 = e.group.forms[t].rep_coprime_to(11 * 23 * 5 * 7);
            let c1 = e.translate_class_of_form(&f1).unwrap();
            let c2 = e.translate_class_of_form(&f2).unwrap();
            assert_eq!(c1, c2, "t = {}", t);
            assert_eq!(c1, e.iota[t]);
        }
    }

    #[test]
    fn iota_intertwines_group_translation() {
        // iota(t s) arises from translating the t-ideal by s: check
        // through composing translated forms.
        let e = embedded(11, -23);
        let g = &e.group;
        for t in 0..g.h() {
            for s in 0..g.h() {
                let composed = g.mul[t][s];
                // Translating by the product ideal directly.
                let f = g.forms[composed].rep_coprime_to(11 * 23);
                assert_eq!(
                    e.translate_class_of_form(&f).unwrap(),
                    e.iota[composed]
                );
            }
        }
    }

    #[test]
    fn embedding_count_oracle() {
        // Sum over classes of (optimal embeddings)/w_i = 2 h(O_c) for an
        // inert prime coprime to the conductor.
        for (p, disc, c, h) in [(11u64, -23i64, 1u64, 3i64), (11, -100, 5, 2)] {
            let g = ClassGroup::new(disc).unwrap();
            let e = EmbeddedClassSet::new(p, &g).unwrap();
            let classes = &e.brandt.classes;
            let mut total = BigRational::zero();
            for i in 0..classes.h() {
                let order = classes.left_order(&classes.reps[i]);
                let count = optimal_elements(classes, &order, disc, c).len();
                total += BigRational::new(
                    BigInt::from(count),
                    BigInt::from(classes.weights[i]),
                );
            }
            assert_eq!(
                total,
                BigRational::from(BigInt::from(2 * h)),
                "p={} disc={}",
                p,
                disc
            );
        }
    }

    #[test]
    fn inert_requirement_enforced() {
        // 13 splits in Q(sqrt(-23)): (-23|13) = (3|13) = 1.
        let g = ClassGroup::new(-23).unwrap();
        assert!(EmbeddedClassSet::new(13, &g).is_err());
        // p dividing the conductor is rejected: disc -175 = 5^2 * -7.
        let g2 = ClassGroup::new(-175).unwrap();
        assert!(EmbeddedClassSet::new(5, &g2).is_err());
    }

    #[test]
    fn theta_lift_constant_term_vanishes_for_nontrivial_xi() {
        let e = embedded(11, -23);
        let xi = characters_of_order(&e.group, 3)[0].clone();
        let lift = e.theta_lift_of_character(&xi, 6);
        // Constant term is (1/2)<[1], 1><[xi], 1> and the second factor is
        // a full character sum, which vanishes for nontrivial xi.
        assert!(lift[0].is_zero());
        // The lift is a nonzero multiple of a weight-one newform, so its
        // q^1 coefficient must not vanish.
        assert!(!lift[1].is_zero());
    }
}
