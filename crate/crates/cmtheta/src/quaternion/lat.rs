//! Full-rank lattices in a rational quaternion algebra, held in row
//! Hermite normal form over a common denominator. All class-set and
//! Brandt computations reduce to exact lattice arithmetic here plus
//! positive definite enumeration of the reduced norm form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::alg::{Q4, QuatAlg};
use crate::exactmath::PosDefLattice;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct QLat {
    /// Common denominator, positive.
    pub den: BigInt,
    /// Basis rows in coordinates (1, i, j, k), in upper triangular HNF
    /// with positive pivots and entries above each pivot reduced mod it.
    pub rows: Vec<Vec<BigInt>>,
}

impl QLat {
    /// Builds the lattice spanned by the given elements; they must span a
    /// full-rank sublattice.
    pub fn from_generators(gens: &[Q4]) -> QLat {
        let mut den = BigInt::one();
        for g in gens {
            for c in g {
                den = den.lcm(c.denom());
            }
        }
        let rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| {
                g.iter()
                    .map(|c| (c * BigRational::from(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let rows = hnf4(rows);
        assert_eq!(rows.len(), 4, "generators do not span a full lattice");
        let mut lat = QLat { den, rows };
        lat.normalize_den();
        lat
    }

    fn normalize_den(&mut self) {
        let mut g = self.den.clone();
        for r in &self.rows {
            for c in r {
                g = g.gcd(c);
            }
        }
        if g > BigInt::one() {
            self.den = &self.den / &g;
            for r in &mut self.rows {
                for c in r.iter_mut() {
                    *c = &*c / &g;
                }
            }
        }
    }

    pub fn basis(&self) -> Vec<Q4> {
        self.rows
            .iter()
            .map(|r| {
                [
                    BigRational::new(r[0].clone(), self.den.clone()),
                    BigRational::new(r[1].clone(), self.den.clone()),
                    BigRational::new(r[2].clone(), self.den.clone()),
                    BigRational::new(r[3].clone(), self.den.clone()),
                ]
            })
            .collect()
    }

    /// Lattice product: the span of all basis products.
    pub fn mul(&self, alg: &QuatAlg, other: &QLat) -> QLat {
        let mut gens = Vec::with_capacity(16);
        for x in self.basis() {
            for y in other.basis() {
                gens.push(alg.mul(&x, &y));
            }
        }
        QLat::from_generators(&gens)
    }

    pub fn add(&self, other: &QLat) -> QLat {
        let mut gens = self.basis();
        gens.extend(other.basis());
        QLat::from_generators(&gens)
    }

    pub fn conj(&self, alg: &QuatAlg) -> QLat {
        let gens: Vec<Q4> = self.basis().iter().map(|x| alg.conj(x)).collect();
        QLat::from_generators(&gens)
    }

    pub fn scale(&self, r: &BigRational) -> QLat {
        let gens: Vec<Q4> = self
            .basis()
            .iter()
            .map(|x| x.clone().map(|c| &c * r))
            .collect();
        QLat::from_generators(&gens)
    }

    /// Covolume relative to the standard lattice Z^4: |det(basis)|.
    pub fn covolume(&self) -> BigRational {
        let mut det = BigInt::one();
        for i in 0..4 {
            det *= &self.rows[i][i];
        }
        BigRational::new(det, self.den.pow(4)).abs()
    }

    /// Membership test by forward substitution: the basis is upper
    /// triangular, so column i is supported only on rows 0..=i.
    pub fn contains(&self, x: &Q4) -> bool {
        self.coords(x).is_some()
    }

    /// Coordinates of x in the lattice basis, if x lies in the lattice.
    pub fn coords(&self, x: &Q4) -> Option<Vec<BigInt>> {
        let mut rem: Vec<BigRational> = x.to_vec();
        let mut out = vec![BigInt::zero(); 4];
        for i in 0..4 {
            let piv = BigRational::new(self.rows[i][i].clone(), self.den.clone());
            let q = &rem[i] / &piv;
            if !q.is_integer() {
                return None;
            }
            for (jj, c) in self.rows[i].iter().enumerate() {
                rem[jj] -= &q * BigRational::new(c.clone(), self.den.clone());
            }
            out[i] = q.to_integer();
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(out)
        } else {
            None
        }
    }

    /// Gram matrix of the reduced norm form on the basis.
    pub fn gram(&self, alg: &QuatAlg) -> Vec<Vec<BigRational>> {
        let basis = self.basis();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| &half * alg.pair(&basis[i], &basis[j]))
                    .collect()
            })
            .collect()
    }

    /// All lattice elements of reduced norm exactly `target`, both signs
    /// included; the zero vector is never reported.
    pub fn elements_of_nrd(&self, alg: &QuatAlg, target: &BigRational) -> Vec<Q4> {
        let lat = PosDefLattice::new(self.gram(alg)).expect("definite norm form");
        let basis = self.basis();
        lat.enumerate_by_norm(target)
            .into_iter()
            .map(|v| {
                let mut x = super::alg::q4_zero();
                for (c, b) in v.iter().zip(&basis) {
                    for (xi, bi) in x.iter_mut().zip(b.iter()) {
                        *xi += BigRational::from(c.clone()) * bi;
                    }
                }
                x
            })
            .collect()
    }

    /// Number of lattice elements of reduced norm `target` (both signs
    /// reported by the enumeration; zero only for target 0).
    pub fn count_nrd(&self, alg: &QuatAlg, target: &BigRational) -> usize {
        if target.is_zero() {
            return 1;
        }
        let lat = PosDefLattice::new(self.gram(alg)).expect("definite norm form");
        lat.count_by_norm(target)
    }
}

/// Row HNF of integer rows spanning a sublattice of Z^4: returns the
/// nonzero rows, upper triangular, positive pivots, entries above each
/// pivot reduced into [0, pivot).
pub fn hnf4(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(4);
    for col in 0..4 {
        // Combine all rows with support starting at `col` into one pivot
        // row by extended gcd.
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest: Vec<Vec<BigInt>> = Vec::new();
        for r in rows.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let e = p[col].extended_gcd(&r[col]);
                    let (g, x, y) = (e.gcd, e.x, e.y);
                    let u = &p[col] / &g;
                    let v = &r[col] / &g;
                    let comb: Vec<BigInt> = (0..4).map(|t| &x * &p[t] + &y * &r[t]).collect();
                    let elim: Vec<BigInt> = (0..4).map(|t| &v * &p[t] - &u * &r[t]).collect();
                    debug_assert_eq!(comb[col], g);
                    debug_assert!(elim[col].is_zero());
                    pivot = Some(comb);
                    rest.push(elim);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                for c in p.iter_mut() {
                    *c = -&*c;
                }
            }
            out.push(p);
        }
    }
    // Reduce entries above each pivot, in ascending pivot order so later
    // reductions cannot disturb columns already in canonical range.
    for i in 0..out.len() {
        let pcol = (0..4).position(|c| !out[i][c].is_zero()).unwrap();
        for j in 0..i {
            let q = out[j][pcol].div_floor(&out[i][pcol]);
            if !q.is_zero() {
                for t in 0..4 {
                    let sub = &q * &out[i][t];
                    out[j][t] -= sub;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::alg::q4_from_ints;

    fn std_lattice() -> QLat {
        QLat::from_generators(&[
            q4_from_ints([1, 0, 0, 0]),
            q4_from_ints([0, 1, 0, 0]),
            q4_from_ints([0, 0, 1, 0]),
            q4_from_ints([0, 0, 0, 1]),
        ])
    }

    #[test]
    fn hnf_is_canonical() {
        // Same lattice from different generating sets.
        let l1 = QLat::from_generators(&[
            q4_from_ints([2, 1, 0, 0]),
            q4_from_ints([0, 3, 0, 0]),
            q4_from_ints([0, 0, 1, 5]),
            q4_from_ints([0, 0, 0, 7]),
            q4_from_ints([2, 4, 0, 0]),
        ]);
        let l2 = QLat::from_generators(&[
            q4_from_ints([2, 4, 1, 5]),
            q4_from_ints([0, 3, 0, 0]),
            q4_from_ints([0, 0, 1, 12]),
            q4_from_ints([0, 0, 0, 7]),
            q4_from_ints([4, 2, 0, 0]),
        ]);
        assert_eq!(l1, l2);
        assert_eq!(l1.covolume(), BigRational::from(BigInt::from(42)));
    }

    #[test]
    fn membership_and_coords() {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut gens = vec![
            q4_from_ints([1, 0, 0, 0]),
            q4_from_ints([0, 1, 0, 0]),
            q4_from_ints([0, 0, 1, 0]),
        ];
        let mixed: Q4 = [
            half.clone(),
            half.clone(),
            half.clone(),
            half.clone(),
        ];
        gens.push(mixed.clone());
        let l = QLat::from_generators(&gens);
        assert!(l.contains(&mixed));
        assert!(l.contains(&q4_from_ints([3, -2, 5, 1])));
        let x: Q4 = [
            half.clone(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ];
        assert!(!l.contains(&x));
        let c = l.coords(&mixed).unwrap();
        // Reconstruct from coords.
        let basis = l.basis();
        let mut acc = crate::quaternion::alg::q4_zero();
        for (ci, b) in c.iter().zip(&basis) {
            for (ai, bi) in acc.iter_mut().zip(b.iter()) {
                *ai += BigRational::from(ci.clone()) * bi;
            }
        }
        assert_eq!(acc, mixed);
    }

    #[test]
    fn product_of_standard_basis_lattices() {
        let alg = QuatAlg::new(7).unwrap();
        let l = std_lattice();
        let sq = l.mul(&alg, &l);
        assert_eq!(sq, l);
        let scaled = l.scale(&BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(
            scaled.covolume(),
            BigRational::new(BigInt::from(81), BigInt::from(16))
        );
        assert_eq!(scaled.mul(&alg, &scaled).covolume(),
            BigRational::new(BigInt::from(6561), BigInt::from(256)));
    }

    #[test]
    fn norm_counts_of_lipschitz_lattice() {
        // In (-1, -1 | Q), the standard lattice has nrd = sum of four
        // squares: r4(n) counts.
        let alg = QuatAlg { p: 2, a: -1, b: -1 };
        let l = std_lattice();
        let counts: Vec<usize> = (1..=6)
            .map(|n| l.count_nrd(&alg, &BigRational::from(BigInt::from(n))))
            .collect();
        assert_eq!(counts, vec![8, 24, 32, 24, 48, 96]);
    }

    #[test]
    fn conj_preserves_covolume() {
        let alg = QuatAlg::new(11).unwrap();
        let l = QLat::from_generators(&[
            q4_from_ints([1, 2, 0, 0]),
            q4_from_ints([0, 5, 0, 0]),
            q4_from_ints([0, 0, 2, 1]),
            q4_from_ints([0, 0, 0, 3]),
        ]);
        assert_eq!(l.conj(&alg).covolume(), l.covolume());
        assert_eq!(l.conj(&alg).conj(&alg), l);
    }
}
