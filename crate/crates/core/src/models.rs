//! Wall crossings along a weight ray and classification of birational models.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::cones::{
    block_is_nonzero, git_cone_membership, moduli_cone, ConesError, DivisorClass, Membership,
};
use crate::rational::{common_denominator, q, sum, to_i64, Q};
use crate::weights::{
    classify_linearization, subset_sums, LinearizationClass, ParabolicWeight, Wall, WeightsError,
};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelsError {
    #[error("weight sum must be below 2")]
    SumTooLarge,
    #[error("weight is not general")]
    NotGeneral,
    #[error("weight is not effective")]
    NotEffective,
    #[error("class is not effective")]
    ClassNotEffective,
    #[error("class is on the boundary of the effective cone and no reduction applies")]
    NotInterior,
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Cones(#[from] ConesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossingKind {
    BlowUp,
    Flip,
    BlowDown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingEvent {
    pub c: Q,
    pub wall: Wall,
    pub dim_minus: i64,
    pub dim_plus: i64,
    pub kind: CrossingKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkEnd {
    /// The ray leaves `(0,1)^n` at this scale.
    WeightBoundary { c: Q },
    /// Crossing `wall` at scale `c` would leave no stable bundles.
    EmptyModuli { c: Q, wall: Wall },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallWalk {
    pub events: Vec<CrossingEvent>,
    pub end: WalkEnd,
}

/// Walls met by `c · w` for `c ∈ [1, min 1/a_i)`, in order of `c`.
///
/// Crossing `Δ_{I,m}` replaces a `P^{dim⁻}`-bundle by a `P^{dim⁺}`-bundle with
/// `dim⁻ = 2m + n − 2 − |I|` and `dim⁺ = |I| − 2m − 2`. A wall with
/// `dim⁺ < 0` empties the moduli space; the walk stops there.
pub fn wall_walk(w: &ParabolicWeight, limits: &Limits) -> Result<WallWalk, ModelsError> {
    let n = w.n();
    if w.sum() >= q(2) {
        return Err(ModelsError::SumTooLarge);
    }
    match classify_linearization(w, limits)?.class {
        LinearizationClass::General => {}
        LinearizationClass::NotEffective => return Err(ModelsError::NotEffective),
        LinearizationClass::EffectiveNotGeneral => return Err(ModelsError::NotGeneral),
    }
    let c_max = w
        .entries()
        .iter()
        .map(|a| Q::one() / a)
        .min()
        .expect("at least three points");

    let (k, ints) = w.cleared();
    let total: BigInt = ints.iter().sum();
    let kq = Q::from_integer(k);
    let mut events = Vec::new();
    for (mask, s) in subset_sums(&ints).into_iter().enumerate().skip(1) {
        // s_I = Σ_I a − Σ_{I^c} a, in units of 1/k.
        let s_i = Q::from_integer(BigInt::from(2) * s - &total) / &kq;
        if !s_i.is_positive() {
            continue;
        }
        for m in 1u64.. {
            let c = Q::from_integer(BigInt::from(2 * m)) / &s_i;
            if c >= c_max {
                break;
            }
            let size = (mask as u64).count_ones() as i64;
            let dim_minus = 2 * m as i64 + n as i64 - 2 - size;
            let dim_plus = size - 2 * m as i64 - 2;
            let kind = if dim_minus == 0 {
                CrossingKind::BlowUp
            } else if dim_plus == 0 {
                CrossingKind::BlowDown
            } else {
                CrossingKind::Flip
            };
            events.push(CrossingEvent {
                c,
                wall: Wall::from_mask(n, mask as u64, m),
                dim_minus,
                dim_plus,
                kind,
            });
        }
    }
    events.sort_by(|x, y| x.c.cmp(&y.c).then_with(|| x.wall.cmp(&y.wall)));

    let mut end = WalkEnd::WeightBoundary { c: c_max };
    if let Some(stop) = events.iter().position(|e| e.dim_plus < 0) {
        let c = events[stop].c.clone();
        end = WalkEnd::EmptyModuli {
            c: c.clone(),
            wall: events[stop].wall,
        };
        events.retain(|e| e.c < c);
    }
    if let Some(first) = events.first() {
        assert_eq!(first.wall.size(), n, "first wall must be Δ_{{[n],1}}");
        assert_eq!(first.wall.m(), 1, "first wall must be Δ_{{[n],1}}");
        assert_eq!(first.kind, CrossingKind::BlowUp);
    }
    Ok(WallWalk { events, end })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaClass {
    /// Least common denominator of the weight.
    pub k: BigInt,
    pub class: DivisorClass,
    /// `k (1 − Σa/2)`.
    pub e: Q,
}

/// The class `(k·a; N − k)` of the theta divisor, `N = k Σa / 2`.
pub fn theta_class(w: &ParabolicWeight) -> ThetaClass {
    let k = common_denominator(w.entries());
    let kq = Q::from_integer(k.clone());
    let b: Vec<Q> = w.entries().iter().map(|a| a * &kq).collect();
    let t = sum(&b) / q(2) - &kq;
    ThetaClass {
        k,
        e: -t.clone(),
        class: DivisorClass::new(b, t),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    ParabolicModuli,
    GitQuotient,
    BoundaryReduction,
}

/// A degeneration applied before naming the model, in the order applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// Points with `b_i = 0` are forgotten.
    Vacua(Vec<usize>),
    /// Points with `b_i = N − t` are dropped and the degree shifts by their count.
    Saturation(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDescription {
    pub kind: ModelKind,
    /// Original indices of the points that remain, ascending.
    pub points: Vec<usize>,
    /// Parabolic weight on `points`.
    pub weight: Vec<Q>,
    /// The GIT linearization on `points`, for [`ModelKind::GitQuotient`].
    pub linearization: Option<Vec<Q>>,
    pub dropped_points: Vec<usize>,
    pub degree_shift: i64,
    pub reductions: Vec<Reduction>,
}

/// Names the model `Proj ⊕ H⁰(mD)` of an effective class on the blown-up
/// moduli space.
///
/// Denominators are cleared first; the model only depends on the ray. For
/// `t > 0` the answer is the parabolic moduli space of weight `b/(N − t)`.
/// For `t ≤ 0` it is the GIT quotient with linearization `b`, whose weight is
/// reported at the same scale `b/(N − t)`. Boundary classes are reduced by
/// forgetting points with `b_i = 0`, then dropping points with `b_i = N − t`.
pub fn classify_model(d: &DivisorClass, limits: &Limits) -> Result<ModelDescription, ModelsError> {
    let original = d;
    let (_, d) = d.cleared();
    let n = d.n();
    let b: Vec<i64> =
        d.b.iter()
            .map(to_i64)
            .collect::<Option<_>>()
            .ok_or(ConesError::NonIntegral)?;
    let t = to_i64(&d.t).ok_or(ConesError::NonIntegral)?;
    if b.iter().any(|&x| x < 0) {
        return Err(ModelsError::ClassNotEffective);
    }
    let effective = if t > 0 {
        block_is_nonzero(&b, t)
    } else {
        git_cone_membership(&d.b) != Membership::Outside
    };
    if !effective {
        return Err(ModelsError::ClassNotEffective);
    }
    let membership = moduli_cone(n, limits)?.membership(&d.coords())?.membership;
    if membership == Membership::Outside {
        return Err(ModelsError::ClassNotEffective);
    }

    let level = d.half_weight() - &d.t;
    let mut reductions = Vec::new();
    let mut points: Vec<usize> = (0..n).collect();
    let mut dropped = Vec::new();
    if membership == Membership::Boundary {
        let zeros: Vec<usize> = (0..n).filter(|&i| b[i] == 0).collect();
        if !zeros.is_empty() {
            points.retain(|i| !zeros.contains(i));
            reductions.push(Reduction::Vacua(zeros));
        }
        dropped = points
            .iter()
            .copied()
            .filter(|&i| Q::from_integer(b[i].into()) == level)
            .collect();
        if !dropped.is_empty() {
            points.retain(|i| !dropped.contains(i));
            reductions.push(Reduction::Saturation(dropped.clone()));
        }
        if reductions.is_empty() {
            return Err(ModelsError::NotInterior);
        }
    } else if t > 0 {
        assert!(
            b.iter().all(|&x| Q::from_integer(x.into()) < level),
            "interior class with a saturated point"
        );
    }

    let weight: Vec<Q> = points
        .iter()
        .map(|&i| Q::from_integer(b[i].into()) / &level)
        .collect();
    let kind = if !dropped.is_empty() {
        ModelKind::BoundaryReduction
    } else if t > 0 {
        ModelKind::ParabolicModuli
    } else {
        ModelKind::GitQuotient
    };
    let linearization = (kind == ModelKind::GitQuotient)
        .then(|| points.iter().map(|&i| original.b[i].clone()).collect());
    Ok(ModelDescription {
        kind,
        points,
        weight,
        linearization,
        degree_shift: -(dropped.len() as i64),
        dropped_points: dropped,
        reductions,
    })
}

/// Whether `desc` is the moduli space `M(w)` on all points, without reductions.
pub fn represents_weight(desc: &ModelDescription, w: &ParabolicWeight) -> bool {
    matches!(
        desc.kind,
        ModelKind::ParabolicModuli | ModelKind::GitQuotient
    ) && desc.reductions.is_empty()
        && desc.points.len() == w.n()
        && desc.weight == w.entries()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn uniform(n: usize, p: i64, d: i64) -> ParabolicWeight {
        ParabolicWeight::new(vec![frac(p, d); n]).unwrap()
    }

    fn class(b: &[i64], t: i64) -> DivisorClass {
        DivisorClass::new(b.iter().map(|&x| q(x)).collect(), q(t))
    }

    #[test]
    fn walk_for_uniform_thirds() {
        let walk = wall_walk(&uniform(5, 1, 3), &Limits::default()).unwrap();
        let first = &walk.events[0];
        assert_eq!(first.c, frac(6, 5));
        assert_eq!(first.wall, Wall::new(5, &[0, 1, 2, 3, 4], 1).unwrap());
        assert_eq!((first.dim_minus, first.dim_plus), (0, 1));
        assert_eq!(first.kind, CrossingKind::BlowUp);
        let rest = &walk.events[1..];
        assert_eq!(rest.len(), 5);
        for e in rest {
            assert_eq!(e.c, q(2));
            assert_eq!((e.wall.size(), e.wall.m()), (4, 1));
            assert_eq!((e.dim_minus, e.dim_plus), (1, 0));
            assert_eq!(e.kind, CrossingKind::BlowDown);
        }
        assert_eq!(
            walk.end,
            WalkEnd::EmptyModuli {
                c: frac(12, 5),
                wall: Wall::new(5, &[0, 1, 2, 3, 4], 2).unwrap()
            }
        );
    }

    #[test]
    fn walk_preconditions_and_empty_range() {
        let limits = Limits::default();
        assert_eq!(
            wall_walk(&uniform(5, 2, 5), &limits),
            Err(ModelsError::SumTooLarge)
        );
        assert_eq!(
            wall_walk(&uniform(4, 1, 3), &limits),
            Err(ModelsError::NotGeneral)
        );
        // 1/a_1 = 10/9 < 2/Σa = 20/19: no wall before the weight leaves (0,1).
        let w = ParabolicWeight::new(vec![
            frac(9, 10),
            frac(1, 40),
            frac(1, 40),
            frac(1, 40),
            frac(1, 40),
        ])
        .unwrap();
        assert_eq!(wall_walk(&w, &limits), Err(ModelsError::NotEffective));
        let walk = wall_walk(&uniform(5, 1, 5), &limits).unwrap();
        assert_eq!(walk.events.len(), 6);
        assert_eq!(walk.events[0].c, q(2));
        assert!(walk.events[1..]
            .iter()
            .all(|e| e.c == frac(10, 3) && e.kind == CrossingKind::BlowDown));
        assert!(matches!(walk.end, WalkEnd::EmptyModuli { ref c, .. } if *c == q(4)));
    }

    #[test]
    fn theta_examples() {
        let th = theta_class(&uniform(5, 1, 2));
        assert_eq!(th.k, BigInt::from(2));
        assert_eq!(th.class.b, vec![q(1); 5]);
        assert_eq!(th.class.t, frac(1, 2));
        assert_eq!(th.e, frac(-1, 2));
        let th = theta_class(&ParabolicWeight::new(vec![frac(1, 2); 4]).unwrap());
        assert_eq!(th.class.t, q(0));
    }

    #[test]
    fn classify_examples() {
        let limits = Limits::default();
        let m = classify_model(&class(&[1; 6], 1), &limits).unwrap();
        assert_eq!(m.kind, ModelKind::ParabolicModuli);
        assert_eq!(m.weight, vec![frac(1, 2); 6]);

        let m = classify_model(&class(&[1; 5], 0), &limits).unwrap();
        assert_eq!(m.kind, ModelKind::GitQuotient);
        assert_eq!(m.linearization, Some(vec![q(1); 5]));
        assert_eq!(m.weight, vec![frac(2, 5); 5]);

        let m = classify_model(&class(&[2, 1, 1, 1, 1], 1), &limits).unwrap();
        assert_eq!(m.kind, ModelKind::BoundaryReduction);
        assert_eq!(m.dropped_points, vec![0]);
        assert_eq!(m.degree_shift, -1);
        assert_eq!(m.points, vec![1, 2, 3, 4]);

        let m = classify_model(&class(&[0, 1, 1, 1, 1], 1), &limits).unwrap();
        assert_eq!(
            m.reductions,
            vec![
                Reduction::Vacua(vec![0]),
                Reduction::Saturation(vec![1, 2, 3, 4])
            ]
        );

        assert_eq!(
            classify_model(&class(&[1, 1, 0, 0, 0], 1), &limits),
            Err(ModelsError::ClassNotEffective)
        );
    }

    #[test]
    fn theta_round_trip() {
        let limits = Limits::default();
        for w in [
            uniform(5, 1, 2),
            uniform(6, 1, 2),
            uniform(5, 1, 3),
            ParabolicWeight::new(vec![
                frac(1, 2),
                frac(1, 3),
                frac(1, 3),
                frac(1, 3),
                frac(1, 6),
            ])
            .unwrap(),
        ] {
            let m = classify_model(&theta_class(&w).class, &limits).unwrap();
            assert!(represents_weight(&m, &w), "{w}: {m:?}");
        }
    }
}
