//! Parabolic weights, GIT linearizations, stability and walls.
//!
//! A weight `a ∈ (0,1)^n` serves both as parabolic data and as the
//! linearization `O(a_1, …, a_n)` on `(P¹)^n`. Stability of a configuration
//! depends only on which points coincide. The wall `Δ_{I,m}` is the
//! hyperplane `Σ_{i∈I} a_i − Σ_{i∉I} a_i = 2m`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{common_denominator, sum, Q};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightsError {
    #[error("weight entry {index} is not strictly between 0 and 1")]
    EntryOutOfRange { index: usize },
    #[error("need at least {min} marked points, got {n}")]
    TooFewPoints { n: usize, min: usize },
    #[error("enumeration too large: {n} points exceeds bound {bound}")]
    EnumerationTooLarge { n: usize, bound: usize },
    #[error("weight lies on a stability wall")]
    OnWall,
    #[error("weight is not general")]
    NonGeneral,
    #[error("weight is not effective")]
    NotEffective,
    #[error("weights have different numbers of points ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("blocks do not partition the index set")]
    InvalidPartition,
    #[error("invalid wall: {0}")]
    InvalidWall(&'static str),
}

/// Hard cap from the bitmask representation of subsets.
const MAX_BITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParabolicWeight {
    a: Vec<Q>,
}

impl ParabolicWeight {
    pub fn new(a: Vec<Q>) -> Result<Self, WeightsError> {
        if a.len() < 3 {
            return Err(WeightsError::TooFewPoints { n: a.len(), min: 3 });
        }
        if let Some(index) = a.iter().position(|x| !x.is_positive() || *x >= Q::one()) {
            return Err(WeightsError::EntryOutOfRange { index });
        }
        Ok(Self { a })
    }

    pub fn entries(&self) -> &[Q] {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn sum(&self) -> Q {
        sum(&self.a)
    }

    /// `c · a`, provided every entry stays in `(0,1)`.
    pub fn scaled(&self, c: &Q) -> Result<Self, WeightsError> {
        Self::new(self.a.iter().map(|x| x * c).collect())
    }

    /// Integer representative `k·a` with `k` the least common denominator.
    pub fn cleared(&self) -> (BigInt, Vec<BigInt>) {
        let k = common_denominator(&self.a);
        let ints = self
            .a
            .iter()
            .map(|x| (x * Q::from_integer(k.clone())).to_integer())
            .collect();
        (k, ints)
    }

    /// Whether the weight lies on no wall `Δ_{I,m}` for any `m`.
    pub fn is_general(&self, limits: &Limits) -> Result<bool, WeightsError> {
        Ok(walls_containing(self, limits)?.is_empty())
    }
}

impl fmt::Display for ParabolicWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The wall `Δ_{I,m}`, stored in canonical form.
///
/// `Δ_{I,m} = Δ_{I^c,−m}`; the representative has `m ≥ 0`, and for `m = 0`
/// the side containing index 0. `I = [n]` is allowed, giving the walls where
/// the total weight is `2m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Wall {
    n: usize,
    mask: u64,
    m: u64,
}

impl Wall {
    pub fn new(n: usize, indices: &[usize], m: i64) -> Result<Self, WeightsError> {
        if n == 0 || n > MAX_BITS {
            return Err(WeightsError::InvalidWall("unsupported number of points"));
        }
        let mut mask = 0u64;
        for &i in indices {
            if i >= n {
                return Err(WeightsError::InvalidWall("index out of range"));
            }
            mask |= 1 << i;
        }
        let full = full_mask(n);
        let (mask, m) = match m.cmp(&0) {
            Ordering::Less => (full & !mask, m.unsigned_abs()),
            Ordering::Greater => (mask, m as u64),
            Ordering::Equal if mask & 1 == 0 => (full & !mask, 0),
            Ordering::Equal => (mask, 0),
        };
        if mask == 0 {
            return Err(WeightsError::InvalidWall("empty subset"));
        }
        if m == 0 && mask == full {
            return Err(WeightsError::InvalidWall("Δ_{[n],0} is empty"));
        }
        Ok(Self { n, mask, m })
    }

    pub(crate) fn from_mask(n: usize, mask: u64, m: u64) -> Self {
        Self { n, mask, m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// 0-based indices of `I`, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.mask >> i & 1 == 1).collect()
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// `Σ_I a_i − Σ_{I^c} a_i − 2m`.
    pub fn evaluate(&self, w: &ParabolicWeight) -> Q {
        let d = signed_sum(w.entries(), self.mask);
        d - Q::from_integer(BigInt::from(2 * self.m))
    }
}

impl Ord for Wall {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.m, self.indices()).cmp(&(other.n, other.m, other.indices()))
    }
}

impl PartialOrd for Wall {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn signed_sum(a: &[Q], mask: u64) -> Q {
    a.iter().enumerate().fold(Q::zero(), |acc, (i, x)| {
        if mask >> i & 1 == 1 {
            acc + x
        } else {
            acc - x
        }
    })
}

/// `Σ_{i∈I} v_i` for every mask `I` of `0..n`.
pub(crate) fn subset_sums(values: &[BigInt]) -> Vec<BigInt> {
    let mut sums = vec![BigInt::zero(); 1 << values.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = &sums[mask & (mask - 1)] + &values[low];
    }
    sums
}

fn check_scan(n: usize, limits: &Limits) -> Result<(), WeightsError> {
    let bound = limits.max_n.min(MAX_BITS);
    if n > bound {
        return Err(WeightsError::EnumerationTooLarge { n, bound });
    }
    Ok(())
}

/// Coincidence pattern of `n` points on the line, as a set partition of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    blocks: Vec<Vec<usize>>,
}

impl PointConfig {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, WeightsError> {
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return Err(WeightsError::InvalidPartition);
            }
            seen[i] = true;
        }
        if seen.contains(&false) || blocks.iter().any(Vec::is_empty) {
            return Err(WeightsError::InvalidPartition);
        }
        Ok(Self { blocks })
    }

    /// All points distinct.
    pub fn distinct(n: usize) -> Self {
        Self {
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

/// GIT stability of a configuration: compare each block weight against `a/2`.
pub fn stability(config: &PointConfig, w: &ParabolicWeight) -> Result<Stability, WeightsError> {
    if config.n() != w.n() {
        return Err(WeightsError::LengthMismatch(config.n(), w.n()));
    }
    let half = w.sum() / Q::from_integer(BigInt::from(2));
    let mut result = Stability::Stable;
    for block in config.blocks() {
        let s = block
            .iter()
            .fold(Q::zero(), |acc, &i| acc + &w.entries()[i]);
        match s.cmp(&half) {
            Ordering::Greater => return Ok(Stability::Unstable),
            Ordering::Equal => result = Stability::StrictlySemistable,
            Ordering::Less => {}
        }
    }
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearizationClass {
    NotEffective,
    EffectiveNotGeneral,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearizationInfo {
    pub class: LinearizationClass,
    /// Every pair satisfies `a_i + a_j < a/2`.
    pub maximal_stable_locus: bool,
}

/// Effectiveness and genericity of the linearization `O(a)`.
///
/// "General" refers to the walls `Δ_{I,0}` only; see [`ParabolicWeight::is_general`]
/// for the condition relative to all walls.
pub fn classify_linearization(
    w: &ParabolicWeight,
    limits: &Limits,
) -> Result<LinearizationInfo, WeightsError> {
    check_scan(w.n(), limits)?;
    let (_, ints) = w.cleared();
    let total: BigInt = ints.iter().sum();
    let maximal_stable_locus = (0..ints.len())
        .all(|i| (i + 1..ints.len()).all(|j| BigInt::from(2) * (&ints[i] + &ints[j]) < total));
    let class = if ints.iter().any(|x| BigInt::from(2) * x >= total) {
        LinearizationClass::NotEffective
    } else if subset_sums(&ints)
        .iter()
        .any(|s| BigInt::from(2) * s == total)
    {
        LinearizationClass::EffectiveNotGeneral
    } else {
        LinearizationClass::General
    };
    Ok(LinearizationInfo {
        class,
        maximal_stable_locus,
    })
}

/// All walls `Δ_{I,m}` through `w`, canonical and sorted.
pub fn walls_containing(w: &ParabolicWeight, limits: &Limits) -> Result<Vec<Wall>, WeightsError> {
    let n = w.n();
    check_scan(n, limits)?;
    let (k, ints) = w.cleared();
    let total: BigInt = ints.iter().sum();
    let two_k = BigInt::from(2) * &k;
    let mut walls = Vec::new();
    for (mask, s) in subset_sums(&ints).iter().enumerate().skip(1) {
        let d = BigInt::from(2) * s - &total;
        if d.is_negative() || !d.is_multiple_of(&two_k) {
            continue;
        }
        let m = u64::try_from(d / &two_k).expect("wall index fits in u64");
        if m == 0 && mask & 1 == 0 {
            continue;
        }
        walls.push(Wall::from_mask(n, mask as u64, m));
    }
    walls.sort();
    Ok(walls)
}

/// Whether two weights off all walls lie in the same chamber.
pub fn same_chamber(
    w1: &ParabolicWeight,
    w2: &ParabolicWeight,
    limits: &Limits,
) -> Result<bool, WeightsError> {
    if w1.n() != w2.n() {
        return Err(WeightsError::LengthMismatch(w1.n(), w2.n()));
    }
    if !w1.is_general(limits)? || !w2.is_general(limits)? {
        return Err(WeightsError::OnWall);
    }
    // Off the walls, the side of every Δ_{I,m} is fixed by ⌊(Σ_I − Σ_{I^c}) / 2⌋.
    let chamber_index = |w: &ParabolicWeight| {
        let (k, ints) = w.cleared();
        let total: BigInt = ints.iter().sum();
        let two_k = BigInt::from(2) * &k;
        subset_sums(&ints)
            .into_iter()
            .map(|s| (BigInt::from(2) * s - &total).div_floor(&two_k))
            .collect::<Vec<_>>()
    };
    Ok(chamber_index(w1) == chamber_index(w2))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardInfo {
    pub rank: usize,
    /// Pairs `{i, j}` (0-based, `i < j`) with `a_i + a_j ≥ a/2`.
    pub unstable_pairs: Vec<(usize, usize)>,
}

/// Picard rank `n − k` of the GIT quotient, `k` the number of unstable pairs.
pub fn picard_rank_git(w: &ParabolicWeight, limits: &Limits) -> Result<PicardInfo, WeightsError> {
    let n = w.n();
    if n < 5 {
        return Err(WeightsError::TooFewPoints { n, min: 5 });
    }
    match classify_linearization(w, limits)?.class {
        LinearizationClass::General => {}
        LinearizationClass::NotEffective => return Err(WeightsError::NotEffective),
        LinearizationClass::EffectiveNotGeneral => return Err(WeightsError::NonGeneral),
    }
    let half = w.sum() / Q::from_integer(BigInt::from(2));
    let a = w.entries();
    let unstable_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| &a[i] + &a[j] >= half)
        .collect();
    for (x, &(i, j)) in unstable_pairs.iter().enumerate() {
        for &(p, r) in &unstable_pairs[x + 1..] {
            assert!(
                i == p || i == r || j == p || j == r,
                "disjoint unstable pairs {{{i},{j}}} and {{{p},{r}}} for general weight {w}"
            );
        }
    }
    Ok(PicardInfo {
        rank: n - unstable_pairs.len(),
        unstable_pairs,
    })
}
