//! Writing an effective class as a sum of effective-cone generators.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{git_cone_membership, ConesError, DivisorClass, Membership};
use crate::conformal::{height, lex_least_path, rank_fusion, BlockSpec};
use crate::rational::{to_i64, Q};

use super::surgery::surgery;

/// Generator multiplicities, keyed by the sorted 0-based subset `I`.
/// The empty subset stands for `E`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Decomposition {
    pub terms: BTreeMap<Vec<usize>, u64>,
}

impl Decomposition {
    fn add(&mut self, subset: Vec<usize>, count: u64) {
        if count > 0 {
            *self.terms.entry(subset).or_insert(0) += count;
        }
    }

    /// `Σ multiplicity · generator`.
    pub fn reconstruct(&self, n: usize) -> DivisorClass {
        let mut total = DivisorClass::new(vec![Q::zero(); n], Q::zero());
        for (subset, &count) in &self.terms {
            let g = if subset.is_empty() {
                DivisorClass::exceptional(n)
            } else {
                DivisorClass::generator(n, subset).expect("stored subsets are even")
            };
            total = total.add(&g.scale(&Q::from_integer(count.into())));
        }
        total
    }
}

/// Decomposes an integral class `O(b) − tE` with `Σ b` even.
///
/// While `t > 0` the lexicographically least double sequence of level `N − t`
/// is lowered by surgery, peeling off one generator per step. Once `t ≤ 0`
/// the remainder is `−t` copies of `E` plus a GIT-cone class, which is split
/// into pairs greedily.
pub fn decompose(d: &DivisorClass) -> Result<Decomposition, ConesError> {
    let n = d.n();
    let mut b: Vec<i64> =
        d.b.iter()
            .map(to_i64)
            .collect::<Option<_>>()
            .ok_or(ConesError::NonIntegral)?;
    let mut t = to_i64(&d.t).ok_or(ConesError::NonIntegral)?;
    let total: i64 = b.iter().sum();
    if total % 2 != 0 {
        return Err(ConesError::NonIntegral);
    }
    if b.iter().any(|&x| x < 0) || b.iter().any(|&x| x > i64::from(u32::MAX)) {
        return Err(ConesError::NotEffective);
    }

    let mut out = Decomposition::default();
    if t > 0 && !block_is_nonzero(&b, t) {
        return Err(ConesError::NotEffective);
    }
    while t > 0 {
        let half: i64 = b.iter().sum::<i64>() / 2;
        let level = u32::try_from(half - t).map_err(|_| ConesError::NotEffective)?;
        let mut support: Vec<usize> = (0..n).filter(|&i| b[i] > 0).collect();
        support.sort_by(|&i, &j| b[j].cmp(&b[i]).then(i.cmp(&j)));
        let shape: Vec<u32> = support.iter().map(|&i| b[i] as u32).collect();
        let ds = lex_least_path(&BlockSpec::new(level, shape.clone()))
            .ok_or(ConesError::NotEffective)?;
        if height(&ds) <= 1 {
            let mut subset = support.clone();
            subset.sort_unstable();
            out.add(subset, 1);
            out.add(Vec::new(), u64::from(level) - 1);
            return Ok(out);
        }
        let cut = surgery(&ds, &shape)?;
        let mut subset: Vec<usize> = cut.t.iter().map(|&c| support[c]).collect();
        subset.sort_unstable();
        for &i in &subset {
            b[i] -= 1;
        }
        t += 1 - subset.len() as i64 / 2;
        out.add(subset, 1);
    }

    out.add(Vec::new(), t.unsigned_abs());
    let bq: Vec<Q> = b.iter().map(|&x| Q::from_integer(x.into())).collect();
    if git_cone_membership(&bq) == Membership::Outside {
        return Err(ConesError::NotEffective);
    }
    while b.iter().any(|&x| x > 0) {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| b[j].cmp(&b[i]).then(i.cmp(&j)));
        let (i, j) = (order[0], order[1]);
        if b[j] == 0 {
            return Err(ConesError::NotEffective);
        }
        b[i] -= 1;
        b[j] -= 1;
        out.add(vec![i.min(j), i.max(j)], 1);
    }
    Ok(out)
}

/// Whether `V_{N−t}(b)` is nonzero, for `b ≥ 0` integral with even sum.
pub(crate) fn block_is_nonzero(b: &[i64], t: i64) -> bool {
    let half: i64 = b.iter().sum::<i64>() / 2;
    let Ok(level) = u32::try_from(half - t) else {
        return false;
    };
    let shape: Vec<u32> = b.iter().map(|&x| x as u32).collect();
    !rank_fusion(&BlockSpec::new(level, shape)).is_zero()
}

/// Checks that every key is a listed generator and the sum reproduces `d`.
pub fn verify_decomposition(d: &DivisorClass, dec: &Decomposition) -> bool {
    let n = d.n();
    let keys_ok = dec
        .terms
        .keys()
        .all(|s| s.len() % 2 == 0 && s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&i| i < n));
    keys_ok && dec.reconstruct(n) == *d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn class(b: &[i64], t: i64) -> DivisorClass {
        DivisorClass::new(b.iter().map(|&x| q(x)).collect(), q(t))
    }

    #[test]
    fn generators_decompose_to_themselves() {
        let g = DivisorClass::generator(6, &[0, 2, 3, 5]).unwrap();
        let dec = decompose(&g).unwrap();
        assert_eq!(
            dec.terms.into_iter().collect::<Vec<_>>(),
            vec![(vec![0, 2, 3, 5], 1)]
        );
        let e = decompose(&DivisorClass::exceptional(5)).unwrap();
        assert_eq!(e.terms.into_iter().collect::<Vec<_>>(), vec![(vec![], 1)]);
        let pair = decompose(&DivisorClass::generator(5, &[1, 4]).unwrap()).unwrap();
        assert_eq!(
            pair.terms.into_iter().collect::<Vec<_>>(),
            vec![(vec![1, 4], 1)]
        );
    }

    #[test]
    fn examples_reconstruct() {
        for d in [
            class(&[1, 1, 1, 1, 1, 1], 0),
            class(&[2, 2, 2, 2, 2], 1),
            class(&[3, 2, 2, 1, 1, 1], 2),
            class(&[1, 1, 1, 1, 1, 1], -3),
        ] {
            let dec = decompose(&d).unwrap();
            assert!(verify_decomposition(&d, &dec), "{d:?} -> {dec:?}");
        }
    }

    #[test]
    fn rejects_bad_classes() {
        assert_eq!(
            decompose(&class(&[1, 1, 1, 0, 0], 0)),
            Err(ConesError::NonIntegral)
        );
        let half = DivisorClass::new(vec![q(1); 6], crate::rational::frac(1, 2));
        assert_eq!(decompose(&half), Err(ConesError::NonIntegral));
        // V_0(1,1) = 0.
        assert_eq!(
            decompose(&class(&[1, 1, 0, 0, 0], 1)),
            Err(ConesError::NotEffective)
        );
        assert_eq!(
            decompose(&class(&[5, 1, 1, 1, 0], 0)),
            Err(ConesError::NotEffective)
        );
        assert_eq!(
            decompose(&class(&[-1, 1, 0, 0, 0], 0)),
            Err(ConesError::NotEffective)
        );
    }
}
