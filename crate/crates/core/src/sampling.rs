//! Seeded random instances for the self-test and acceptance suites.

use rand::Rng;

use crate::cones::{block_is_nonzero, moduli_effective_generators, DivisorClass};
use crate::models::theta_class;
use crate::rational::{frac, q, to_i64};
use crate::weights::{classify_linearization, LinearizationClass, ParabolicWeight};
use crate::Limits;

/// A nonnegative integer combination of a few effective-cone generators.
///
/// With probability one half only `E` and pair generators are used, so the
/// class has `t ≤ 0`.
pub fn random_effective_class<R: Rng>(rng: &mut R, n: usize) -> DivisorClass {
    let gens = moduli_effective_generators(n, &Limits::default()).expect("n ≥ 5");
    let low_only = rng.random_bool(0.5);
    let pool: Vec<&DivisorClass> = gens.iter().filter(|g| !low_only || g.t <= q(0)).collect();
    let mut d = DivisorClass::new(vec![q(0); n], q(0));
    let terms = rng.random_range(1..=4);
    for _ in 0..terms {
        let g = pool[rng.random_range(0..pool.len())];
        let mult = q(rng.random_range(1..=2));
        d = d.add(&g.scale(&mult));
    }
    d
}

/// Entries `p/q` with `1 ≤ q ≤ max_den`, each strictly inside `(0,1)`.
pub fn random_weight<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> ParabolicWeight {
    let a = (0..n)
        .map(|_| {
            let d = rng.random_range(2..=max_den);
            frac(rng.random_range(1..d), d)
        })
        .collect();
    ParabolicWeight::new(a).expect("entries in (0,1)")
}

/// An effective weight with `Σa < 2` off every wall.
pub fn random_walk_weight<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> ParabolicWeight {
    let limits = Limits::default();
    loop {
        let w = random_weight(rng, n, max_den);
        if w.sum() >= q(2) {
            continue;
        }
        let class = classify_linearization(&w, &limits).expect("small n").class;
        if class == LinearizationClass::General {
            return w;
        }
    }
}

/// A weight off every wall whose theta divisor has sections.
pub fn random_theta_weight<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> ParabolicWeight {
    let limits = Limits::default();
    loop {
        let w = random_weight(rng, n, max_den);
        if !w.is_general(&limits).expect("small n") {
            continue;
        }
        let class = theta_class(&w).class;
        let (_, c) = class.cleared();
        let b: Vec<i64> = c.b.iter().map(|x| to_i64(x).expect("small")).collect();
        let t = to_i64(&c.t).expect("small");
        let effective = if t > 0 {
            block_is_nonzero(&b, t)
        } else {
            classify_linearization(&w, &limits).expect("small n").class
                != LinearizationClass::NotEffective
        };
        if effective {
            return w;
        }
    }
}
