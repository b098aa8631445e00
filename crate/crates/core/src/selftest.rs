//! Deterministic invariant suites over small instances.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cones::{
    decompose, extremality_certificate, git_cone, hypersimplex_facets, moduli_effective_generators,
    surgery, verify_decomposition,
};
use crate::conformal::{enumerate_paths, height, rank_fusion, rank_sections_generic, BlockSpec};
use crate::models::{classify_model, represents_weight, theta_class, wall_walk, CrossingKind};
use crate::rational::q;
use crate::sampling::{random_effective_class, random_theta_weight, random_walk_weight};
use crate::Limits;

const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }

    /// Fixed-width summary table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:>7} {:>8}  status",
            "suite", "cases", "failures"
        );
        for s in &self.suites {
            let status = if s.failures == 0 { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<24} {:>7} {:>8}  {}",
                s.name, s.cases, s.failures, status
            );
        }
        out
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: 0,
        }
    }

    fn check(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += usize::from(!ok);
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

/// Every shape of length `n` with entries in `0..=max`.
pub fn all_shapes(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..=max).map(move |k| {
                    let mut s = s.clone();
                    s.push(k);
                    s
                })
            })
            .collect();
    }
    out
}

fn rank_agreement(limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("rank fusion = paths");
    for level in 1..=3 {
        for n in 0..=5 {
            for shape in all_shapes(n, level) {
                let spec = BlockSpec::new(level, shape);
                let paths = enumerate_paths(&spec, limits).map(|p| p.len());
                tally.check(paths.map(BigUint::from).ok() == Some(rank_fusion(&spec)));
            }
        }
    }
    tally.done()
}

fn section_oracle(limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("rank sections = fusion");
    let cases: &[(u32, &[u32])] = &[
        (1, &[1, 1, 1, 1]),
        (2, &[1, 1, 1, 1]),
        (1, &[1, 1, 1, 1, 1, 1]),
        (2, &[1, 1, 1, 1, 1, 1]),
        (2, &[2, 2, 1, 1]),
        (3, &[2, 2, 2]),
        (1, &[2, 1, 1]),
        (0, &[1, 1]),
    ];
    for &(level, shape) in cases {
        let spec = BlockSpec::new(level, shape);
        let ok = rank_sections_generic(&spec, limits)
            .map(|r| BigUint::from(r.rank) == rank_fusion(&spec))
            .unwrap_or(false);
        tally.check(ok);
    }
    tally.done()
}

fn validator_sensitivity(limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("validator sensitivity");
    for shape in all_shapes(4, 2) {
        let spec = BlockSpec::new(2, shape.clone());
        for ds in enumerate_paths(&spec, limits).unwrap_or_default() {
            tally.check(ds.validate_shape(&shape).is_ok());
            for j in 0..ds.n() {
                for row in 0..2 {
                    for delta in [-1i64, 1] {
                        let mut m = ds.clone();
                        let cell = if row == 0 {
                            &mut m.top[j]
                        } else {
                            &mut m.bottom[j]
                        };
                        let Ok(v) = u32::try_from(i64::from(*cell) + delta) else {
                            continue;
                        };
                        *cell = v;
                        tally.check(m.validate_shape(&shape).is_err());
                    }
                }
            }
        }
    }
    tally.done()
}

fn surgery_suite(limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("surgery postconditions");
    for level in 2..=3 {
        for n in 2..=5 {
            for shape in all_shapes(n, level) {
                if shape.contains(&0) || shape.windows(2).any(|w| w[0] < w[1]) {
                    continue;
                }
                let spec = BlockSpec::new(level, shape.clone());
                for ds in enumerate_paths(&spec, limits).unwrap_or_default() {
                    let h = height(&ds);
                    if h <= 1 {
                        continue;
                    }
                    let ok = surgery(&ds, &shape).is_ok_and(|r| {
                        r.t.len() >= 2 && r.t.len() % 2 == 0 && height(&r.ds_out) == h - 1
                    });
                    tally.check(ok);
                }
            }
        }
    }
    tally.done()
}

fn cone_counts(limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("cone generators/facets");
    for n in 5..=7 {
        let count = moduli_effective_generators(n, limits).map(|g| g.len());
        tally.check(count == Ok(1 << (n - 1)));
    }
    for n in 5..=6 {
        tally.check(git_cone(n).facets().ok() == Some(hypersimplex_facets(n)));
    }
    tally.done()
}

fn extremality(limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("extremality");
    for g in moduli_effective_generators(5, limits).unwrap_or_default() {
        tally.check(extremality_certificate(&g, 5, limits).is_ok());
    }
    tally.done()
}

fn decomposition(rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut tally = Tally::new("decomposition");
    for n in 5..=6 {
        for _ in 0..20 {
            let d = random_effective_class(rng, n);
            tally.check(decompose(&d).is_ok_and(|dec| verify_decomposition(&d, &dec)));
        }
    }
    tally.done()
}

fn walks(rng: &mut ChaCha8Rng, limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("wall walk");
    for i in 0..20 {
        let n = 5 + i % 3;
        let w = random_walk_weight(rng, n, 7);
        let ok = wall_walk(&w, limits).is_ok_and(|walk| {
            let first_ok = walk.events.first().is_some_and(|e| {
                e.c == q(2) / w.sum() && e.kind == CrossingKind::BlowUp && e.wall.size() == n
            });
            let dims_ok = walk.events.iter().all(|e| {
                e.dim_minus >= 0 && e.dim_plus >= 0 && e.dim_minus + e.dim_plus == n as i64 - 4
            });
            first_ok && dims_ok
        });
        tally.check(ok);
    }
    tally.done()
}

fn theta_round_trip(rng: &mut ChaCha8Rng, limits: &Limits) -> SuiteResult {
    let mut tally = Tally::new("theta round trip");
    for i in 0..20 {
        let w = random_theta_weight(rng, 5 + i % 2, 6);
        let ok =
            classify_model(&theta_class(&w).class, limits).is_ok_and(|m| represents_weight(&m, &w));
        tally.check(ok);
    }
    tally.done()
}

/// Runs every suite with a fixed seed.
pub fn run(limits: &Limits) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let suites = vec![
        rank_agreement(limits),
        section_oracle(limits),
        validator_sensitivity(limits),
        surgery_suite(limits),
        cone_counts(limits),
        extremality(limits),
        decomposition(&mut rng),
        walks(&mut rng, limits),
        theta_round_trip(&mut rng, limits),
    ];
    debug_assert!(suites.iter().all(|s| !s.cases.is_zero()));
    SelftestReport { suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_enumerated() {
        assert_eq!(
            all_shapes(2, 1),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(all_shapes(0, 3), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn table_lists_every_suite() {
        let report = SelftestReport {
            suites: vec![SuiteResult {
                name: "x",
                cases: 3,
                failures: 1,
            }],
        };
        assert!(!report.passed());
        assert!(report.table().contains("FAIL"));
    }
}
