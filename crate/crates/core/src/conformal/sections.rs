//! Conformal blocks as spaces of invariant polynomials.
//!
//! Identify `V_{k_1} ⊗ … ⊗ V_{k_n}` with polynomials in `y_1, …, y_n` of degree
//! at most `k_i` in `y_i`. The SL2-invariants are spanned by the products
//! `Π (y_i − y_j)` over loopless multigraphs with degree sequence `k`, and the
//! level-`ℓ` block is the subspace vanishing to order at least `N − ℓ` at the
//! chosen point, `N = |k| / 2`. The dimension is found by exact row reduction
//! of coefficient vectors written in coordinates centred at the point.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::{BlockSpec, ConformalError};
use crate::rational::{q, Q};
use crate::Limits;

/// `p_i = i` for `i = 1..n`.
pub const DEFAULT_POINT: fn(usize) -> Vec<Q> = |n| (1..=n as i64).map(q).collect();
/// `p_i = i² + 1`, used to cross-check genericity.
pub const CROSS_CHECK_POINT: fn(usize) -> Vec<Q> =
    |n| (1..=n as i64).map(|i| q(i * i + 1)).collect();

/// A multiset of index pairs `{i, j}` standing for `Π (y_i − y_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectionBasisElement {
    /// Pairs with `i < j`, repeated according to multiplicity, sorted.
    pub pairs: Vec<(usize, usize)>,
}

impl SectionBasisElement {
    pub fn degrees(&self, n: usize) -> Vec<u32> {
        let mut deg = vec![0u32; n];
        for &(i, j) in &self.pairs {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionRank {
    pub rank: usize,
    /// Set when `Σ k_i` is odd; the rank is then 0.
    pub odd_total: bool,
}

/// All loopless multigraphs on `0..n` with the given degree sequence.
pub fn section_basis(shape: &[u32]) -> Vec<SectionBasisElement> {
    let mut remaining = shape.to_vec();
    let mut out = Vec::new();
    let mut pairs = Vec::new();
    extend_basis(&mut remaining, 0, &mut pairs, &mut out);
    out
}

fn extend_basis(
    remaining: &mut [u32],
    vertex: usize,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<SectionBasisElement>,
) {
    let n = remaining.len();
    let Some(i) = (vertex..n).find(|&i| remaining[i] > 0) else {
        out.push(SectionBasisElement {
            pairs: pairs.clone(),
        });
        return;
    };
    distribute(remaining, i, i + 1, pairs, out);
}

/// Spends the remaining degree of `i` on partners `j ≥ from`.
fn distribute(
    remaining: &mut [u32],
    i: usize,
    from: usize,
    pairs: &mut Vec<(usize, usize)>,
    out: &mut Vec<SectionBasisElement>,
) {
    if remaining[i] == 0 {
        extend_basis(remaining, i + 1, pairs, out);
        return;
    }
    let n = remaining.len();
    if from >= n {
        return;
    }
    let max = remaining[i].min(remaining[from]);
    for m in (0..=max).rev() {
        remaining[i] -= m;
        remaining[from] -= m;
        pairs.extend(std::iter::repeat_n((i, from), m as usize));
        distribute(remaining, i, from + 1, pairs, out);
        pairs.truncate(pairs.len() - m as usize);
        remaining[i] += m;
        remaining[from] += m;
    }
}

type Monomial = Vec<u16>;

/// Expands `Π (y_i − y_j)` in the shifted variables `z = y − p`.
fn expand(element: &SectionBasisElement, point: &[Q]) -> HashMap<Monomial, Q> {
    let n = point.len();
    let mut poly: HashMap<Monomial, Q> = HashMap::new();
    poly.insert(vec![0; n], q(1));
    for &(i, j) in &element.pairs {
        let shift = &point[i] - &point[j];
        let mut next: HashMap<Monomial, Q> = HashMap::with_capacity(poly.len() * 3);
        for (mono, coeff) in &poly {
            let mut zi = mono.clone();
            zi[i] += 1;
            *next.entry(zi).or_insert_with(Q::zero) += coeff;
            let mut zj = mono.clone();
            zj[j] += 1;
            *next.entry(zj).or_insert_with(Q::zero) -= coeff;
            if !shift.is_zero() {
                *next.entry(mono.clone()).or_insert_with(Q::zero) += coeff * &shift;
            }
        }
        next.retain(|_, c| !c.is_zero());
        poly = next;
    }
    poly
}

/// Rank of the level-`ℓ` block computed from invariant polynomials at `point`.
pub fn rank_sections(
    spec: &BlockSpec,
    point: &[Q],
    limits: &Limits,
) -> Result<SectionRank, ConformalError> {
    spec.check_size(limits)?;
    let n = spec.n();
    if point.len() != n {
        return Err(ConformalError::InvalidPoint);
    }
    for i in 0..n {
        if point[i + 1..].contains(&point[i]) {
            return Err(ConformalError::InvalidPoint);
        }
    }
    let total = spec.total();
    if total % 2 == 1 {
        return Ok(SectionRank {
            rank: 0,
            odd_total: true,
        });
    }
    let order = (total / 2) as i64 - i64::from(spec.level);

    // Column order: total degree first, so low-order coefficients pivot first.
    let basis = section_basis(&spec.shape);
    let polys: Vec<HashMap<Monomial, Q>> = basis.iter().map(|e| expand(e, point)).collect();
    let mut monomials: Vec<&Monomial> = polys.iter().flat_map(|p| p.keys()).collect();
    monomials.sort_by(|a, b| {
        let da: u32 = a.iter().map(|&e| u32::from(e)).sum();
        let db: u32 = b.iter().map(|&e| u32::from(e)).sum();
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    monomials.dedup();
    let low_cols = monomials
        .iter()
        .take_while(|m| i64::from(m.iter().map(|&e| u32::from(e)).sum::<u32>()) < order)
        .count();
    let index: HashMap<&Monomial, usize> =
        monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();

    // Incremental echelon basis keyed by pivot column.
    let mut echelon: BTreeMap<usize, BTreeMap<usize, Q>> = BTreeMap::new();
    for poly in &polys {
        let mut row: BTreeMap<usize, Q> = poly.iter().map(|(m, c)| (index[m], c.clone())).collect();
        for (&pivot, basis_row) in &echelon {
            let Some(c) = row.get(&pivot).cloned() else {
                continue;
            };
            let f = c / &basis_row[&pivot];
            for (&col, v) in basis_row {
                let entry = row.entry(col).or_insert_with(Q::zero);
                *entry -= &f * v;
                if entry.is_zero() {
                    row.remove(&col);
                }
            }
        }
        if let Some((&pivot, _)) = row.iter().next() {
            echelon.insert(pivot, row);
        }
    }
    let rank = echelon.keys().filter(|&&pivot| pivot >= low_cols).count();
    Ok(SectionRank {
        rank,
        odd_total: false,
    })
}

/// [`rank_sections`] at the default point, cross-checked at a second point.
pub fn rank_sections_generic(
    spec: &BlockSpec,
    limits: &Limits,
) -> Result<SectionRank, ConformalError> {
    let first = rank_sections(spec, &DEFAULT_POINT(spec.n()), limits)?;
    let second = rank_sections(spec, &CROSS_CHECK_POINT(spec.n()), limits)?;
    if first != second {
        return Err(ConformalError::NonGeneric {
            first: first.rank,
            second: second.rank,
        });
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn generic(level: u32, shape: &[u32]) -> usize {
        rank_sections_generic(&BlockSpec::new(level, shape), &Limits::default())
            .unwrap()
            .rank
    }

    #[test]
    fn basis_elements_have_the_right_degrees() {
        let shape = [2, 1, 1, 2];
        let basis = section_basis(&shape);
        assert!(!basis.is_empty());
        for e in &basis {
            assert_eq!(e.pairs.len(), 3);
            assert_eq!(e.degrees(4), shape.to_vec());
        }
        let mut dedup = basis.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), basis.len());
        // Four points of weight one: three perfect matchings.
        assert_eq!(section_basis(&[1, 1, 1, 1]).len(), 3);
        assert!(section_basis(&[3, 1]).is_empty());
    }

    #[test]
    fn level_one_four_points() {
        assert_eq!(generic(1, &[1, 1, 1, 1]), 1);
    }

    #[test]
    fn full_invariants_when_level_reaches_half_weight() {
        // Plücker relation: three matchings span a 2-dimensional space.
        assert_eq!(generic(2, &[1, 1, 1, 1]), 2);
        assert_eq!(generic(3, &[1, 1, 1, 1, 1, 1]), 5);
    }

    #[test]
    fn level_zero_two_points_vanishes() {
        assert_eq!(generic(0, &[1, 1]), 0);
    }

    #[test]
    fn odd_total_is_flagged() {
        let r = rank_sections(
            &BlockSpec::new(2, vec![1, 1, 1]),
            &DEFAULT_POINT(3),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(
            r,
            SectionRank {
                rank: 0,
                odd_total: true
            }
        );
    }

    #[test]
    fn rejects_bad_points() {
        let spec = BlockSpec::new(1, vec![1, 1]);
        let limits = Limits::default();
        assert_eq!(
            rank_sections(&spec, &[q(1), q(1)], &limits),
            Err(ConformalError::InvalidPoint)
        );
        assert_eq!(
            rank_sections(&spec, &[q(1)], &limits),
            Err(ConformalError::InvalidPoint)
        );
        assert!(rank_sections(&spec, &[frac(1, 2), frac(-3, 7)], &limits).is_ok());
    }
}
