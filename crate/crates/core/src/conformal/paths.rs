//! Double sequences (boxed Catalan paths).
//!
//! A double sequence of level `ℓ` is a `2 × n` matrix with top row `x` and
//! bottom row `y`. Reading column `j` as `x_j` up-steps followed by `y_j`
//! down-steps traces a lattice path from height 0 back to height 0. The
//! upper corner of column `j` is `P_{j-1} + x_j` and the lower corner is
//! `P_{j-1} - y_j`, where `P_j` is the height after column `j`. Validity means
//! upper corners stay at most `ℓ` and lower corners stay nonnegative.

use thiserror::Error;

use super::{BlockSpec, ConformalError};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DsViolation {
    #[error("top and bottom rows have different lengths")]
    LengthMismatch,
    #[error("entry in column {0} exceeds the level")]
    EntryAboveLevel(usize),
    #[error("upper corner of column {0} exceeds the level")]
    UpperCorner(usize),
    #[error("lower corner of column {0} is negative")]
    LowerCorner(usize),
    #[error("top and bottom rows have different sums")]
    Unbalanced,
    #[error("column {0} does not match the shape")]
    ShapeMismatch(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleSequence {
    pub top: Vec<u32>,
    pub bottom: Vec<u32>,
    pub level: u32,
}

impl DoubleSequence {
    pub fn new(top: Vec<u32>, bottom: Vec<u32>, level: u32) -> Self {
        Self { top, bottom, level }
    }

    pub fn n(&self) -> usize {
        self.top.len()
    }

    pub fn shape(&self) -> Vec<u32> {
        self.top
            .iter()
            .zip(&self.bottom)
            .map(|(x, y)| x + y)
            .collect()
    }

    /// Heights `P_0 = 0, P_1, …, P_n` of the path at column boundaries.
    pub fn boundary_heights(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.n() + 1);
        let mut p = 0i64;
        out.push(p);
        for (x, y) in self.top.iter().zip(&self.bottom) {
            p += i64::from(*x) - i64::from(*y);
            out.push(p);
        }
        out
    }

    pub fn upper_corners(&self) -> Vec<i64> {
        let p = self.boundary_heights();
        self.top
            .iter()
            .enumerate()
            .map(|(j, &x)| p[j] + i64::from(x))
            .collect()
    }

    pub fn lower_corners(&self) -> Vec<i64> {
        let p = self.boundary_heights();
        self.bottom
            .iter()
            .enumerate()
            .map(|(j, &y)| p[j] - i64::from(y))
            .collect()
    }

    pub fn validate(&self) -> Result<(), DsViolation> {
        if self.top.len() != self.bottom.len() {
            return Err(DsViolation::LengthMismatch);
        }
        let level = i64::from(self.level);
        for (j, (&x, &y)) in self.top.iter().zip(&self.bottom).enumerate() {
            if x > self.level || y > self.level {
                return Err(DsViolation::EntryAboveLevel(j));
            }
        }
        if let Some(j) = self.upper_corners().iter().position(|&u| u > level) {
            return Err(DsViolation::UpperCorner(j));
        }
        if let Some(j) = self.lower_corners().iter().position(|&l| l < 0) {
            return Err(DsViolation::LowerCorner(j));
        }
        let sx: u64 = self.top.iter().map(|&x| u64::from(x)).sum();
        let sy: u64 = self.bottom.iter().map(|&y| u64::from(y)).sum();
        if sx != sy {
            return Err(DsViolation::Unbalanced);
        }
        Ok(())
    }

    pub fn validate_shape(&self, shape: &[u32]) -> Result<(), DsViolation> {
        self.validate()?;
        if shape.len() != self.n() {
            return Err(DsViolation::LengthMismatch);
        }
        match self.shape().iter().zip(shape).position(|(a, b)| a != b) {
            Some(j) => Err(DsViolation::ShapeMismatch(j)),
            None => Ok(()),
        }
    }
}

/// Maximal upper corner over the first `n - 1` columns (0 for `n ≤ 1`).
pub fn height(ds: &DoubleSequence) -> u32 {
    let upper = ds.upper_corners();
    let take = match upper.len() {
        0 | 1 => upper.len(),
        n => n - 1,
    };
    upper[..take].iter().copied().max().unwrap_or(0).max(0) as u32
}

/// `reach[j][h]`: can columns `j..n`, entered at height `h`, finish at height 0?
fn reachability(spec: &BlockSpec) -> Vec<Vec<bool>> {
    let n = spec.n();
    let width = spec.level as usize + 1;
    let mut reach = vec![vec![false; width]; n + 1];
    reach[n][0] = true;
    for j in (0..n).rev() {
        for h in 0..width {
            reach[j][h] = column_choices(spec.level, h as u32, spec.shape[j])
                .any(|(_, next)| reach[j + 1][next as usize]);
        }
    }
    reach
}

/// Admissible `(x, next height)` pairs for a column of weight `k` entered at `h`,
/// in increasing `x`.
fn column_choices(level: u32, h: u32, k: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=k).filter_map(move |x| {
        let y = k - x;
        let ok = x <= level && y <= level && h + x <= level && y <= h;
        ok.then(|| (x, h + x - y))
    })
}

/// The lexicographically least double sequence of the given level and shape.
pub fn lex_least_path(spec: &BlockSpec) -> Option<DoubleSequence> {
    let reach = reachability(spec);
    if !reach[0][0] {
        return None;
    }
    let mut top = Vec::with_capacity(spec.n());
    let mut h = 0u32;
    for (j, &k) in spec.shape.iter().enumerate() {
        let (x, next) = column_choices(spec.level, h, k)
            .find(|&(_, next)| reach[j + 1][next as usize])
            .expect("reachable state has a reachable successor");
        top.push(x);
        h = next;
    }
    let bottom = spec.shape.iter().zip(&top).map(|(k, x)| k - x).collect();
    Some(DoubleSequence::new(top, bottom, spec.level))
}

/// All double sequences of the given level and shape, lexicographically ordered.
pub fn enumerate_paths(
    spec: &BlockSpec,
    limits: &Limits,
) -> Result<Vec<DoubleSequence>, ConformalError> {
    spec.check_size(limits)?;
    let reach = reachability(spec);
    let mut out = Vec::new();
    if !reach[0][0] {
        return Ok(out);
    }
    let mut top = Vec::with_capacity(spec.n());
    walk(spec, &reach, 0, 0, &mut top, &mut out);
    Ok(out)
}

fn walk(
    spec: &BlockSpec,
    reach: &[Vec<bool>],
    j: usize,
    h: u32,
    top: &mut Vec<u32>,
    out: &mut Vec<DoubleSequence>,
) {
    if j == spec.n() {
        let bottom = spec
            .shape
            .iter()
            .zip(top.iter())
            .map(|(k, x)| k - x)
            .collect();
        out.push(DoubleSequence::new(top.clone(), bottom, spec.level));
        return;
    }
    for (x, next) in column_choices(spec.level, h, spec.shape[j]) {
        if reach[j + 1][next as usize] {
            top.push(x);
            walk(spec, reach, j + 1, next, top, out);
            top.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn height_three_example() -> DoubleSequence {
        DoubleSequence::new(vec![2, 1, 1, 0, 1, 0], vec![0, 1, 2, 1, 0, 1], 3)
    }

    #[test]
    fn two_point_path_is_forced() {
        let paths = enumerate_paths(&BlockSpec::new(1, vec![1, 1]), &Limits::default()).unwrap();
        assert_eq!(paths, vec![DoubleSequence::new(vec![1, 0], vec![0, 1], 1)]);
        assert_eq!(height(&paths[0]), 1);
    }

    #[test]
    fn height_three_example_validates_and_is_enumerated() {
        let ds = height_three_example();
        ds.validate_shape(&[2, 2, 3, 1, 1, 1]).unwrap();
        assert_eq!(height(&ds), 3);
        let spec = BlockSpec::new(3, vec![2, 2, 3, 1, 1, 1]);
        assert!(enumerate_paths(&spec, &Limits::default())
            .unwrap()
            .contains(&ds));
    }

    #[test]
    fn derived_row_conditions_hold() {
        let spec = BlockSpec::new(3, vec![2, 2, 3, 1, 1, 1]);
        for ds in enumerate_paths(&spec, &Limits::default()).unwrap() {
            assert_eq!(ds.bottom[0], 0);
            assert_eq!(*ds.top.last().unwrap(), 0);
            assert!(ds.boundary_heights().iter().all(|&p| p >= 0));
        }
    }

    #[test]
    fn violations_are_reported() {
        let mut ds = height_three_example();
        ds.level = 2;
        assert_eq!(ds.validate(), Err(DsViolation::UpperCorner(1)));
        let bad = DoubleSequence::new(vec![0, 1], vec![1, 0], 1);
        assert_eq!(bad.validate(), Err(DsViolation::LowerCorner(0)));
        let unbalanced = DoubleSequence::new(vec![1, 0], vec![0, 0], 1);
        assert_eq!(unbalanced.validate(), Err(DsViolation::Unbalanced));
        let wide = DoubleSequence::new(vec![2, 0], vec![0, 2], 1);
        assert_eq!(wide.validate(), Err(DsViolation::EntryAboveLevel(0)));
    }

    #[test]
    fn lex_least_is_first_enumerated() {
        let spec = BlockSpec::new(3, vec![2, 2, 3, 1, 1, 1]);
        let all = enumerate_paths(&spec, &Limits::default()).unwrap();
        assert_eq!(lex_least_path(&spec).as_ref(), all.first());
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn enumeration_respects_size_bound() {
        let spec = BlockSpec::new(30, vec![21, 21]);
        assert!(matches!(
            enumerate_paths(&spec, &Limits::default()),
            Err(ConformalError::InstanceTooLarge {
                total: 42,
                bound: 40
            })
        ));
    }
}
