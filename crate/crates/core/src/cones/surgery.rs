//! Lowering the height of a boxed Catalan path by one.
//!
//! Given a path of height `h > 1` at level `ℓ` with a descending positive
//! shape, pick an even set `T` of columns and remove one up-step at the odd
//! positions of `T` and one down-step at the even positions. The result is a
//! path of level `ℓ − 1`, height `h − 1` and shape `k − 1_T`.
//!
//! Columns are paired greedily. Walking left to right, take the first column
//! `j₀` whose upper corner still reaches `h`. Its partner on the left is the
//! first column `c ≤ j₀` after the previous pair with `x_c > 0` such that all
//! lower corners in `(c, j₀]` are at least 1. The partner on the right is the
//! next column after `c` whose lower corner touches the axis. Every upper
//! corner in `[c_odd, c_even]` drops by one and no lower corner changes sign.

use super::ConesError;
use crate::conformal::{height, DoubleSequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryResult {
    /// 0-based columns, ascending; `|T|` is even and at least 2.
    pub t: Vec<usize>,
    pub ds_out: DoubleSequence,
}

pub fn surgery(ds: &DoubleSequence, shape: &[u32]) -> Result<SurgeryResult, ConesError> {
    ds.validate_shape(shape)?;
    if shape.windows(2).any(|w| w[0] < w[1]) || shape.contains(&0) {
        return Err(ConesError::UnsortedShape);
    }
    let h = height(ds);
    if h <= 1 {
        return Err(ConesError::HeightTooSmall(h));
    }
    let h = i64::from(h);
    let n = ds.n();
    let upper = ds.upper_corners();
    let lower = ds.lower_corners();

    let mut covered = vec![false; n];
    let mut t = Vec::new();
    let mut top = ds.top.clone();
    let mut bottom = ds.bottom.clone();
    let mut floor = 0usize;
    while let Some(j0) = (0..n).find(|&j| upper[j] == h && !covered[j]) {
        let c_odd = (floor..=j0)
            .find(|&c| ds.top[c] > 0 && lower[c + 1..=j0].iter().all(|&l| l >= 1))
            .ok_or(ConesError::SurgeryFailed("no column to lower"))?;
        let c_even = (c_odd + 1..n)
            .find(|&c| lower[c] == 0)
            .ok_or(ConesError::SurgeryFailed("no return to the axis"))?;
        top[c_odd] -= 1;
        bottom[c_even] -= 1;
        covered[c_odd..=c_even].fill(true);
        t.push(c_odd);
        t.push(c_even);
        floor = c_even + 1;
    }

    let ds_out = DoubleSequence::new(top, bottom, ds.level - 1);
    let expected: Vec<u32> = shape
        .iter()
        .enumerate()
        .map(|(j, &k)| k - u32::from(t.contains(&j)))
        .collect();
    ds_out
        .validate_shape(&expected)
        .map_err(|_| ConesError::SurgeryFailed("output is not a valid double sequence"))?;
    if i64::from(height(&ds_out)) != h - 1 {
        return Err(ConesError::SurgeryFailed("height did not drop by one"));
    }
    Ok(SurgeryResult { t, ds_out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(top: &[u32], bottom: &[u32], level: u32) -> DoubleSequence {
        DoubleSequence::new(top.to_vec(), bottom.to_vec(), level)
    }

    #[test]
    fn six_point_example() {
        let input = ds(&[1, 1, 0, 1, 0, 0], &[0, 0, 1, 0, 1, 1], 2);
        let out = surgery(&input, &[1; 6]).unwrap();
        assert_eq!(out.t, vec![0, 5]);
        assert_eq!(out.ds_out, ds(&[0, 1, 0, 1, 0, 0], &[0, 0, 1, 0, 1, 0], 1));
        assert_eq!(height(&out.ds_out), 1);
    }

    #[test]
    fn two_excursions_at_full_height() {
        // Level 5, height 5, touching height 5 twice with a dip to 0 between.
        let input = ds(
            &[5, 0, 3, 0, 2, 2, 0, 0, 1, 0],
            &[0, 4, 1, 2, 0, 0, 2, 2, 1, 1],
            5,
        );
        let shape = input.shape();
        assert_eq!(shape, vec![5, 4, 4, 2, 2, 2, 2, 2, 2, 1]);
        let out = surgery(&input, &shape).unwrap();
        assert_eq!(out.t, vec![0, 2, 4, 8]);
        assert_eq!(
            out.ds_out,
            ds(
                &[4, 0, 3, 0, 1, 2, 0, 0, 1, 0],
                &[0, 4, 0, 2, 0, 0, 2, 2, 0, 1],
                4
            )
        );
        assert_eq!(out.ds_out.shape(), vec![4, 4, 3, 2, 1, 2, 2, 2, 1, 1]);
        assert_eq!(height(&out.ds_out), 4);
    }

    #[test]
    fn literal_first_column_choice_would_break_lower_corners() {
        // Choosing c = first column with x > 0 here would push the lower
        // corner of column 3 below the axis; the search skips to column 3.
        let input = ds(&[4, 0, 1, 2, 2, 0, 0, 0], &[0, 3, 1, 0, 0, 2, 2, 1], 5);
        let shape = input.shape();
        assert_eq!(shape, vec![4, 3, 2, 2, 2, 2, 2, 1]);
        assert_eq!(height(&input), 5);
        let out = surgery(&input, &shape).unwrap();
        assert_eq!(out.t, vec![2, 7]);
        assert_eq!(height(&out.ds_out), 4);
    }

    #[test]
    fn preconditions() {
        let flat = ds(&[1, 0], &[0, 1], 1);
        assert_eq!(surgery(&flat, &[1, 1]), Err(ConesError::HeightTooSmall(1)));
        let input = ds(&[1, 1, 0, 1, 0, 0], &[0, 0, 1, 0, 1, 1], 2);
        assert!(matches!(
            surgery(&input, &[1, 1, 1, 1, 1, 2]),
            Err(ConesError::InvalidSequence(_))
        ));
    }
}
