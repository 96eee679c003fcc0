//! Timing probe for the Brandt theta lift at moderate primes.

use cmtheta::quadratic::{characters_of_order, ClassGroup};
use cmtheta::quaternion::EmbeddedClassSet;

fn main() {
    let group = ClassGroup::new(-23).unwrap();
    let chi = characters_of_order(&group, 3)[0].clone();
    let xi = chi.pow(2);
    for p in [53u64, 103, 199] {
        let t0 = std::time::Instant::now();
        let e = EmbeddedClassSet::new(p, &group).unwrap();
        let t1 = t0.elapsed();
        let lift = e.theta_lift_of_character(&xi, 50);
        let t2 = t0.elapsed();
        let nz = lift.iter().filter(|c| !c.is_zero()).count();
        println!(
            "p = {p}: set up in {:.2?}, lift in {:.2?}, {nz} nonzero of 51",
            t1,
            t2 - t1
        );
    }
}
