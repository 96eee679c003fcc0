//! Characters of class groups of imaginary quadratic orders. The dual
//! group is built by extending characters along a chain of cyclic steps;
//! values live in Z/E as exponents of a fixed primitive E-th root of
//! unity, where E is the group exponent. Conductors are computed honestly
//! through the pushforward maps to smaller orders.

use num_integer::Integer;

use super::forms::ClassGroup;
use super::ideals::{Ideal, QuadOrder};
use crate::exactmath::Cyc;
use crate::{Error, Result};

/// A character of a class group, of exact order `order`, stored as the
/// exponent vector: value at class i is zeta_order ^ exps[i].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassChar {
    pub order: u32,
    pub exps: Vec<u64>,
}

impl ClassChar {
    /// Value at class index i, exactly, in Q(zeta_order).
    pub fn value(&self, i: usize) -> Cyc {
        Cyc::zeta_pow(self.order, self.exps[i] as i64)
    }

    /// Value of the complex conjugate character at class index i.
    pub fn value_conj(&self, i: usize) -> Cyc {
        Cyc::zeta_pow(self.order, -(self.exps[i] as i64))
    }

    /// The character xi^a.
    pub fn pow(&self, a: i64) -> ClassChar {
        let n = self.order as u64;
        let exps: Vec<u64> = self
            .exps
            .iter()
            .map(|e| ((*e as i64 * a).rem_euclid(n as i64)) as u64)
            .collect();
        let ord = exact_order(&exps, n);
        ClassChar {
            order: ord as u32,
            exps: exps.into_iter().map(|e| e / (n / ord)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
}

fn exact_order(exps: &[u64], n: u64) -> u64 {
    let mut g = n;
    for &e in exps {
        g = g.gcd(&e);
    }
    n / g
}

/// All characters of the class group, as exponent vectors modulo the group
/// exponent E. Returns (E, vectors); the trivial character comes first.
pub fn character_group(g: &ClassGroup) -> (u64, Vec<Vec<u64>>) {
    let h = g.h();
    let e = g.exponent();
    // Subgroup elements known so far and the characters defined on them;
    // entries are None off the subgroup.
    let mut defined = vec![false; h];
    defined[0] = true;
    let mut chars: Vec<Vec<u64>> = vec![vec![0; h]];
    let mut sub: Vec<usize> = vec![0];
    for gen in 1..h {
        if defined[gen] {
            continue;
        }
        // Order k of gen modulo the current subgroup.
        let mut k = 1u64;
        let mut pw = gen;
        while !defined[pw] {
            k += 1;
            pw = g.mul[pw][gen];
        }
        // pw = gen^k lies in the subgroup; each character extends in k ways
        // solving k * b = chi(gen^k) mod E.
        let mut next_chars = Vec::with_capacity(chars.len() * k as usize);
        for chi in &chars {
            let v = chi[pw];
            assert_eq!(v % k, 0, "character extension must be solvable");
            // k divides E, so the solutions of k b = v mod E are
            // v/k + t E/k for t = 0..k.
            let base = (v / k) % (e / k);
            for t in 0..k {
                let b = (base + t * (e / k)) % e;
                let mut ext = chi.clone();
                let mut cur = 0usize;
                let mut val = 0u64;
                for _ in 0..k {
                    // Walk cosets sub * gen^j.
                    for &s in &sub {
                        ext[g.mul[s][cur]] = (chi[s] + val) % e;
                    }
                    cur = g.mul[cur][gen];
                    val = (val + b) % e;
                }
                next_chars.push(ext);
            }
        }
        chars = next_chars;
        // Enlarge the subgroup.
        let mut new_sub = Vec::new();
        let mut cur = 0usize;
        for _ in 0..k {
            for &s in &sub {
                let x = g.mul[s][cur];
                new_sub.push(x);
                defined[x] = true;
            }
            cur = g.mul[cur][gen];
        }
        sub = new_sub;
    }
    debug_assert_eq!(chars.len(), h);
    chars.sort();
    (e, chars)
}

/// All characters of exact order n, with values rescaled into Q(zeta_n).
pub fn characters_of_order(g: &ClassGroup, n: u32) -> Vec<ClassChar> {
    let (e, chars) = character_group(g);
    let mut out = Vec::new();
    if e % n as u64 != 0 {
        return out;
    }
    for v in chars {
        if exact_order(&v, e) != n as u64 {
            continue;
        }
        let step = e / n as u64;
        out.push(ClassChar {
            order: n,
            exps: v.iter().map(|x| x / step).collect(),
        });
    }
    out
}

/// Class-index pushforward Pic(O_c) -> Pic(O_c') for c' | c: extend each
/// ideal to the larger order and locate its class.
pub fn pushforward_map(from: &ClassGroup, to_conductor: u64) -> Result<(ClassGroup, Vec<usize>)> {
    let order_from = QuadOrder::new(from.disc)?;
    if order_from.c % to_conductor != 0 {
        return Err(Error::config(format!(
            "{} does not divide the conductor {}",
            to_conductor, order_from.c
        )));
    }
    let to_disc = order_from.dk * (to_conductor * to_conductor) as i64;
    let to_group = ClassGroup::new(to_disc)?;
    let order_to = QuadOrder::new(to_disc)?;
    let mut map = Vec::with_capacity(from.h());
    for f in &from.forms {
        let up = Ideal::from_form(&order_from, f).extend_to_order(&order_to);
        let cls = to_group
            .index_of(&up.to_form(&order_to)?)
            .ok_or_else(|| Error::arithmetic("pushforward class not found"))?;
        map.push(cls);
    }
    Ok((to_group, map))
}

/// Conductor of a ring class character: the smallest divisor c' of the
/// conductor of the order such that the character factors through
/// Pic(O_c').
pub fn conductor(g: &ClassGroup, xi: &ClassChar) -> Result<u64> {
    let order = QuadOrder::new(g.disc)?;
    let c = order.c;
    let mut divisors: Vec<u64> = (1..=c).filter(|d| c % d == 0).collect();
    divisors.sort();
    for cp in divisors {
        let (_, map) = pushforward_map(g, cp)?;
        // xi factors through iff it is trivial on the kernel.
        let trivial_on_kernel = (0..g.h())
            .filter(|&i| map[i] == map[0])
            .all(|i| xi.exps[i] == 0);
        if trivial_on_kernel {
            return Ok(cp);
        }
    }
    Ok(c)
}

/// The integer m attached to a character: q when the order is a prime
/// power q^k, 1 otherwise.
pub fn m_of_xi(order: u32) -> u32 {
    let f = crate::exactmath::ff::factorize_u64(order as u64);
    if f.len() == 1 {
        f[0].0 as u32
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn dual_group_size_and_homomorphism() {
        for disc in [-23, -47, -84, -207, -100] {
            let g = ClassGroup::new(disc).unwrap();
            let (e, chars) = character_group(&g);
            assert_eq!(chars.len(), g.h());
            // Distinctness.
            let set: std::collections::HashSet<_> = chars.iter().cloned().collect();
            assert_eq!(set.len(), chars.len());
            for v in &chars {
                assert_eq!(v[0], 0);
                for i in 0..g.h() {
                    for j in 0..g.h() {
                        assert_eq!(v[g.mul[i][j]], (v[i] + v[j]) % e, "disc {}", disc);
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_characters_of_disc_23() {
        let g = ClassGroup::new(-23).unwrap();
        let chars = characters_of_order(&g, 3);
        assert_eq!(chars.len(), 2);
        // The two cubic characters are conjugate.
        assert_eq!(chars[0].pow(-1).exps, chars[1].exps);
        // Column orthogonality: sum over classes vanishes.
        for ch in &chars {
            let mut acc = Cyc::zero(3);
            for i in 0..g.h() {
                acc = acc.add(&ch.value(i));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn quintic_characters_of_disc_47() {
        let g = ClassGroup::new(-47).unwrap();
        assert_eq!(characters_of_order(&g, 5).len(), 4);
        assert_eq!(characters_of_order(&g, 3).len(), 0);
        assert_eq!(characters_of_order(&g, 1).len(), 1);
    }

    #[test]
    fn klein_group_characters() {
        let g = ClassGroup::new(-84).unwrap();
        assert_eq!(g.h(), 4);
        let quad = characters_of_order(&g, 2);
        assert_eq!(quad.len(), 3);
        for ch in &quad {
            assert_eq!(ch.exps.iter().filter(|&&e| e == 1).count(), 2);
        }
    }

    #[test]
    fn conductors_in_z6_tower() {
        // Pic(O_3) of Q(sqrt(-23)) is cyclic of order 6; cubic characters
        // descend to the maximal order, the rest need conductor 3.
        let g = ClassGroup::new(-207).unwrap();
        assert_eq!(g.h(), 6);
        for ch in characters_of_order(&g, 3) {
            assert_eq!(conductor(&g, &ch).unwrap(), 1);
        }
        for ch in characters_of_order(&g, 2) {
            assert_eq!(conductor(&g, &ch).unwrap(), 3);
        }
        for ch in characters_of_order(&g, 6) {
            assert_eq!(conductor(&g, &ch).unwrap(), 3);
        }
        let triv = characters_of_order(&g, 1);
        assert_eq!(conductor(&g, &triv[0]).unwrap(), 1);
    }

    #[test]
    fn order2_character_of_disc_100_is_primitive() {
        let g = ClassGroup::new(-100).unwrap();
        let chars = characters_of_order(&g, 2);
        assert_eq!(chars.len(), 1);
        assert_eq!(conductor(&g, &chars[0]).unwrap(), 5);
    }

    #[test]
    fn m_values() {
        assert_eq!(m_of_xi(2), 2);
        assert_eq!(m_of_xi(3), 3);
        assert_eq!(m_of_xi(4), 2);
        assert_eq!(m_of_xi(5), 5);
        assert_eq!(m_of_xi(6), 1);
        assert_eq!(m_of_xi(9), 3);
        assert_eq!(m_of_xi(12), 1);
    }

    #[test]
    fn character_powers() {
        let g = ClassGroup::new(-207).unwrap();
        let six = characters_of_order(&g, 6);
        assert!(!six.is_empty());
        let ch = &six[0];
        assert_eq!(ch.pow(2).order, 3);
        assert_eq!(ch.pow(3).order, 2);
        assert_eq!(ch.pow(6).order, 1);
        assert_eq!(ch.pow(-1).order, 6);
    }
}
