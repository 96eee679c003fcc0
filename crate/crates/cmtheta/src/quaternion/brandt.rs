//! Brandt matrices and the degree-two theta lift on the class set. The
//! entry B(n)_{ij} counts lattice points of reduced norm n nrd(I_i)nrd(I_j)
//! in I_i conj(I_j), divided by twice the weight of class j; all entries
//! are certified integral. Invariants exercised by the tests: B(1) is the
//! identity, rows sum to the divisor sum prime to p, w_j B(n)_{ij} is
//! symmetric, and the matrices commute.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::classes::ClassSet;
use crate::exactmath::{Cyc, PosDefLattice};

pub struct BrandtModule {
    pub classes: ClassSet,
    cache: RefCell<HashMap<u64, Vec<Vec<i64>>>>,
    filled: Cell<u64>,
}

impl BrandtModule {
    pub fn new(classes: ClassSet) -> BrandtModule {
        BrandtModule {
            classes,
            cache: RefCell::new(HashMap::new()),
            filled: Cell::new(0),
        }
    }

    pub fn h(&self) -> usize {
        self.classes.h()
    }

    /// Computes B(1) through B(n_max) with a single bounded lattice scan
    /// per class pair, binning vectors by exact reduced norm.
    pub fn fill_through(&self, n_max: u64) {
        if self.filled.get() >= n_max {
            return;
        }
        let h = self.h();
        let alg = &self.classes.alg;
        let nr = BigRational::from(BigInt::from(n_max));
        let mut counts = vec![vec![vec![0i64; h]; h]; n_max as usize + 1];
        for i in 0..h {
            for j in 0..h {
                let prod = self.classes.reps[i].mul(alg, &self.classes.reps[j].conj(alg));
                let step = &self.classes.nrds[i] * &self.classes.nrds[j];
                let lat = PosDefLattice::new(prod.gram(alg)).expect("definite norm form");
                for (norm, _) in lat.enumerate_up_to(&(&step * &nr)) {
                    let q = norm / &step;
                    debug_assert!(q.is_integer(), "ideal norm does not divide element norm");
                    if let Ok(n) = u64::try_from(q.to_integer()) {
                        counts[n as usize][i][j] += 1;
                    }
                }
            }
        }
        let mut cache = self.cache.borrow_mut();
        for n in 1..=n_max {
            let mut out = vec![vec![0i64; h]; h];
            for i in 0..h {
                for j in 0..h {
                    let count = counts[n as usize][i][j];
                    let denom = 2 * self.classes.weights[j] as i64;
                    assert_eq!(count % denom, 0, "Brandt entry not integral");
                    out[i][j] = count / denom;
                }
            }
            cache.insert(n, out);
        }
        self.filled.set(n_max);
    }

    pub fn brandt(&self, n: u64) -> Vec<Vec<i64>> {
        if let Some(b) = self.cache.borrow().get(&n) {
            return b.clone();
        }
        let h = self.h();
        let alg = &self.classes.alg;
        let mut out = vec![vec![0i64; h]; h];
        for i in 0..h {
            for j in 0..h {
                let prod = self.classes.reps[i].mul(alg, &self.classes.reps[j].conj(alg));
                let target = BigRational::from(BigInt::from(n))
                    * &self.classes.nrds[i]
                    * &self.classes.nrds[j];
                let count = prod.count_nrd(alg, &target) as i64;
                let denom = 2 * self.classes.weights[j] as i64;
                assert_eq!(count % denom, 0, "Brandt entry not integral");
                out[i][j] = count / denom;
            }
        }
        self.cache.borrow_mut().insert(n, out.clone());
        out
    }

    /// Apply T_n to a class function given as a coordinate vector.
    pub fn hecke(&self, n: u64, phi: &[Cyc]) -> Vec<Cyc> {
        let b = self.brandt(n);
        (0..self.h())
            .map(|i| {
                let mut acc = Cyc::zero(phi[0].conductor());
                for (j, v) in phi.iter().enumerate() {
                    if b[i][j] != 0 {
                        acc = acc.add(&v.scale_int(b[i][j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Weighted bilinear pairing sum_i w_i phi_i psi_i.
    pub fn pair(&self, phi: &[Cyc], psi: &[Cyc]) -> Cyc {
        let mut acc = Cyc::zero(phi[0].conductor());
        for i in 0..self.h() {
            let term = phi[i].mul(&psi[i]).scale_int(self.classes.weights[i] as i64);
            acc = acc.add(&term);
        }
        acc
    }

    /// q-expansion of the theta lift of phi (x) psi through degree k_max:
    /// constant term (1/2) <phi, 1> <psi, 1>, then <T_k phi, psi>.
    pub fn theta_lift(&self, phi: &[Cyc], psi: &[Cyc], k_max: u64) -> Vec<Cyc> {
        self.fill_through(k_max);
        let cond = phi[0].conductor();
        let ones = vec![Cyc::one(cond); self.h()];
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mut out = Vec::with_capacity(k_max as usize + 1);
        out.push(self.pair(phi, &ones).mul(&self.pair(psi, &ones)).scale(&half));
        for k in 1..=k_max {
            out.push(self.pair(&self.hecke(k, phi), psi));
        }
        out
    }
}
