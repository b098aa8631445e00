//! Ranks of sl2 conformal blocks on the projective line.
//!
//! Three independent routes are provided: the height-state fusion recursion
//! ([`rank_fusion`]), enumeration of boxed Catalan paths
//! ([`enumerate_paths`]), and an explicit section-space computation with
//! invariant polynomials ([`rank_sections`]).

mod paths;
mod sections;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub use paths::{enumerate_paths, height, lex_least_path, DoubleSequence, DsViolation};
pub use sections::{
    rank_sections, rank_sections_generic, section_basis, SectionBasisElement, SectionRank,
    CROSS_CHECK_POINT, DEFAULT_POINT,
};

use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConformalError {
    #[error("instance too large: total weight {total} exceeds bound {bound}")]
    InstanceTooLarge { total: u64, bound: u64 },
    #[error("point must have one coordinate per marked point, pairwise distinct")]
    InvalidPoint,
    #[error("section ranks disagree at two generic points ({first} vs {second})")]
    NonGeneric { first: usize, second: usize },
    #[error("invalid double sequence: {0}")]
    InvalidSequence(#[from] DsViolation),
}

/// A level together with a weight vector `k` labelling the marked points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    pub level: u32,
    pub shape: Vec<u32>,
}

impl BlockSpec {
    pub fn new(level: u32, shape: impl Into<Vec<u32>>) -> Self {
        Self {
            level,
            shape: shape.into(),
        }
    }

    pub fn n(&self) -> usize {
        self.shape.len()
    }

    pub fn total(&self) -> u64 {
        self.shape.iter().map(|&k| u64::from(k)).sum()
    }

    /// Zeros removed and entries sorted in descending order. Rank is unchanged.
    pub fn canonical(&self) -> Self {
        let mut shape: Vec<u32> = self.shape.iter().copied().filter(|&k| k > 0).collect();
        shape.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            level: self.level,
            shape,
        }
    }

    pub(crate) fn check_size(&self, limits: &Limits) -> Result<(), ConformalError> {
        let total = self.total();
        if total > limits.max_weight_sum {
            return Err(ConformalError::InstanceTooLarge {
                total,
                bound: limits.max_weight_sum,
            });
        }
        Ok(())
    }
}

/// Whether the step `h -> h'` across a point of weight `k` is allowed at `level`.
///
/// These are the three-point fusion rules for `(h, k, h')`.
pub(crate) fn fusion_allowed(level: u32, h: u32, k: u32, h_next: u32) -> bool {
    let (h, k, hn, l) = (
        i64::from(h),
        i64::from(k),
        i64::from(h_next),
        i64::from(level),
    );
    (h + k + hn) % 2 == 0 && hn >= (h - k).abs() && hn <= h + k && h + k + hn <= 2 * l
}

/// Rank of the conformal block via the point-by-point factorization recursion.
pub fn rank_fusion(spec: &BlockSpec) -> BigUint {
    let level = spec.level;
    if spec.shape.iter().any(|&k| k > level) {
        return BigUint::zero();
    }
    let width = level as usize + 1;
    let mut states = vec![BigUint::zero(); width];
    states[0] = BigUint::one();
    for &k in &spec.shape {
        let mut next = vec![BigUint::zero(); width];
        for (h, count) in states.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            for (hn, slot) in next.iter_mut().enumerate() {
                if fusion_allowed(level, h as u32, k, hn as u32) {
                    *slot += count;
                }
            }
        }
        states = next;
    }
    states.swap_remove(0)
}

/// Nonvanishing test for the product of sections of two blocks.
///
/// Shapes are zero-padded to a common length. When both blocks are nonzero the
/// product block at level `a.level + b.level` and shape `a + b` is nonzero too;
/// that implication is checked here and a violation panics.
pub fn product_compatible(a: &BlockSpec, b: &BlockSpec) -> bool {
    let compatible = !rank_fusion(a).is_zero() && !rank_fusion(b).is_zero();
    if compatible {
        let n = a.n().max(b.n());
        let at = |s: &BlockSpec, i: usize| s.shape.get(i).copied().unwrap_or(0);
        let sum = BlockSpec::new(
            a.level + b.level,
            (0..n).map(|i| at(a, i) + at(b, i)).collect::<Vec<_>>(),
        );
        assert!(
            !rank_fusion(&sum).is_zero(),
            "product of nonzero blocks vanished at {sum:?}"
        );
    }
    compatible
}
