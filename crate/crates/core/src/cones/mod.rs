//! Divisor classes on the blown-up moduli space and its effective cone.
//!
//! A class `O(b_1, …, b_n) − tE` is stored as `(b; t)` in `Q^{n+1}`. The
//! exceptional divisor is `E = (0; −1)` and the generator attached to an even
//! subset `I` is `G_I = (1_I; |I|/2 − 1)`. Together with `E` these `2^{n−1}`
//! classes span the effective cone when `n ≥ 5`. Slicing at `t = 0` gives the
//! GIT cone over the hypersimplex, spanned by `e_i + e_j`.

mod cone;
mod decompose;
mod surgery;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use cone::{cone_membership_lp, Membership, MembershipResult, RationalCone, Witness};
pub use decompose::{decompose, verify_decomposition, Decomposition};
pub use surgery::{surgery, SurgeryResult};

pub(crate) use decompose::block_is_nonzero;

use crate::conformal::{ConformalError, DsViolation};
use crate::linalg::rank;
use crate::rational::{common_denominator, dot, q, sum, Q};
use crate::weights::{classify_linearization, LinearizationClass, ParabolicWeight, WeightsError};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConesError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cone generators must be nonzero")]
    ZeroGenerator,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("need at least {min} marked points, got {n}")]
    TooFewPoints { n: usize, min: usize },
    #[error("too many marked points: {n} exceeds bound {bound}")]
    TooManyPoints { n: usize, bound: usize },
    #[error("class is not one of the effective-cone generators")]
    NotAGenerator,
    #[error("surgery needs height at least 2, got {0}")]
    HeightTooSmall(u32),
    #[error("shape must be positive and sorted in descending order")]
    UnsortedShape,
    #[error("invalid input sequence: {0}")]
    InvalidSequence(#[from] DsViolation),
    #[error("class is not effective")]
    NotEffective,
    #[error("class is not integral with even total weight")]
    NonIntegral,
    #[error("surgery failed: {0}")]
    SurgeryFailed(&'static str),
    #[error("extremality certificate failed verification: {0}")]
    CertificateFailed(&'static str),
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error(transparent)]
    Conformal(#[from] ConformalError),
}

/// The class `O(b) − tE`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub b: Vec<Q>,
    pub t: Q,
}

impl DivisorClass {
    pub fn new(b: Vec<Q>, t: Q) -> Self {
        Self { b, t }
    }

    /// `E = (0; −1)`.
    pub fn exceptional(n: usize) -> Self {
        Self::new(vec![Q::zero(); n], q(-1))
    }

    /// `G_I = (1_I; |I|/2 − 1)` for a nonempty even subset (0-based indices).
    pub fn generator(n: usize, subset: &[usize]) -> Result<Self, ConesError> {
        let mut b = vec![Q::zero(); n];
        for &i in subset {
            if i >= n || !b[i].is_zero() {
                return Err(ConesError::NotAGenerator);
            }
            b[i] = Q::one();
        }
        if subset.is_empty() || subset.len() % 2 == 1 {
            return Err(ConesError::NotAGenerator);
        }
        Ok(Self::new(b, q(subset.len() as i64 / 2 - 1)))
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `N = Σ b_i / 2`.
    pub fn half_weight(&self) -> Q {
        sum(&self.b) / q(2)
    }

    /// Coordinates `(b_1, …, b_n, t)`.
    pub fn coords(&self) -> Vec<Q> {
        let mut v = self.b.clone();
        v.push(self.t.clone());
        v
    }

    pub fn from_coords(v: &[Q]) -> Self {
        let (t, b) = v.split_last().expect("at least the t coordinate");
        Self::new(b.to_vec(), t.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect(),
            &self.t + &other.t,
        )
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.b.iter().map(|x| x * c).collect(), &self.t * c)
    }

    /// The smallest positive multiple with integral coordinates and even `Σ b`,
    /// together with the multiplier.
    pub fn cleared(&self) -> (BigInt, Self) {
        let mut k = common_denominator(self.b.iter().chain(std::iter::once(&self.t)));
        let scaled = self.scale(&Q::from_integer(k.clone()));
        if !(sum(&scaled.b).to_integer() % BigInt::from(2)).is_zero() {
            k *= 2;
        }
        let out = self.scale(&Q::from_integer(k.clone()));
        (k, out)
    }

    /// The even subset `I` if this is `G_I`, `Some(empty)` for `E`.
    pub fn generator_subset(&self) -> Option<Vec<usize>> {
        let mut subset = Vec::new();
        for (i, x) in self.b.iter().enumerate() {
            if x.is_one() {
                subset.push(i);
            } else if !x.is_zero() {
                return None;
            }
        }
        let expected = if subset.is_empty() {
            q(-1)
        } else {
            q(subset.len() as i64 / 2 - 1)
        };
        (subset.len() % 2 == 0 && self.t == expected).then_some(subset)
    }
}

fn check_moduli_n(n: usize, limits: &Limits) -> Result<(), ConesError> {
    if n < 5 {
        return Err(ConesError::TooFewPoints { n, min: 5 });
    }
    if n > limits.max_n {
        return Err(ConesError::TooManyPoints {
            n,
            bound: limits.max_n,
        });
    }
    Ok(())
}

/// `e_i + e_j` (with `t = 0`) for every pair with `a_i + a_j < a/2`.
pub fn git_effective_generators(
    w: &ParabolicWeight,
    limits: &Limits,
) -> Result<Vec<DivisorClass>, ConesError> {
    match classify_linearization(w, limits)?.class {
        LinearizationClass::General => {}
        LinearizationClass::NotEffective => return Err(WeightsError::NotEffective.into()),
        LinearizationClass::EffectiveNotGeneral => return Err(WeightsError::NonGeneral.into()),
    }
    let n = w.n();
    let half = w.sum() / q(2);
    let a = w.entries();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if &a[i] + &a[j] < half {
                let mut b = vec![Q::zero(); n];
                b[i] = Q::one();
                b[j] = Q::one();
                out.push(DivisorClass::new(b, Q::zero()));
            }
        }
    }
    Ok(out)
}

/// The cone spanned by all `e_i + e_j` in `Q^n`.
pub fn git_cone(n: usize) -> RationalCone {
    let mut gens = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v[j] = Q::one();
            gens.push(v);
        }
    }
    RationalCone::new(n, gens).expect("pair vectors are nonzero")
}

/// Membership in the cone over the hypersimplex: `b_i ≥ 0` and `2 b_i ≤ Σ b`.
pub fn git_cone_membership(b: &[Q]) -> Membership {
    let total = sum(b);
    let mut strict = true;
    for x in b {
        let upper = &total - x * q(2);
        if x.is_negative() || upper.is_negative() {
            return Membership::Outside;
        }
        strict &= x.is_positive() && upper.is_positive();
    }
    if strict {
        Membership::Interior
    } else {
        Membership::Boundary
    }
}

/// Inward facet normals `e_i` and `Σ e − 2e_i` of [`git_cone`], in sorted order.
pub fn hypersimplex_facets(n: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut lower = vec![Q::zero(); n];
        lower[i] = Q::one();
        out.push(lower);
        let mut upper = vec![Q::one(); n];
        upper[i] = q(-1);
        out.push(upper);
    }
    out.sort();
    out
}

/// `E` followed by `G_I` for every nonempty even `I`, ordered by `|I|` then
/// lexicographically: `2^{n−1}` classes.
pub fn moduli_effective_generators(
    n: usize,
    limits: &Limits,
) -> Result<Vec<DivisorClass>, ConesError> {
    check_moduli_n(n, limits)?;
    let mut subsets: Vec<Vec<usize>> = (1u64..1 << n)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    subsets.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let mut out = vec![DivisorClass::exceptional(n)];
    out.extend(
        subsets
            .iter()
            .map(|s| DivisorClass::generator(n, s).expect("even subset")),
    );
    Ok(out)
}

pub fn moduli_cone(n: usize, limits: &Limits) -> Result<RationalCone, ConesError> {
    let gens = moduli_effective_generators(n, limits)?;
    RationalCone::new(n + 1, gens.iter().map(DivisorClass::coords).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalityCertificate {
    pub generator: DivisorClass,
    /// `n` independent functionals on `(b; t)`, each zero on the generator and
    /// nonnegative on every generator.
    pub functionals: Vec<Vec<Q>>,
    /// Nonnegative on every other generator and negative on this one.
    pub separation: Vec<Q>,
}

/// Supporting functionals at a generator of the effective cone.
fn supporting_functionals(n: usize, subset: &[usize]) -> Vec<Vec<Q>> {
    let coordinate = |k: usize| {
        let mut f = vec![Q::zero(); n + 1];
        f[k] = Q::one();
        f
    };
    let outside: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
    match subset.len() {
        // E: the coordinates b_k.
        0 => (0..n).map(coordinate).collect(),
        // I = {p, q}: Σ_{j≠k} b_j − b_k − t for k ∈ I, and b_k outside I.
        2 => {
            let mut out: Vec<Vec<Q>> = subset
                .iter()
                .map(|&k| {
                    let mut f = vec![Q::one(); n + 1];
                    f[k] = q(-1);
                    f[n] = q(-1);
                    f
                })
                .collect();
            out.extend(outside.iter().map(|&k| coordinate(k)));
            out
        }
        // |I| = 2i ≥ 4: Σ_{J_k} b + Σ_{j∉I} b − 2t with |J_k| = 2i − 2, and b_k outside I.
        size => {
            let head = &subset[..size - 1];
            let mut families: Vec<Vec<usize>> = head
                .iter()
                .map(|&k| head.iter().copied().filter(|&j| j != k).collect())
                .collect();
            let mut last: Vec<usize> = head[..size - 3].to_vec();
            last.push(subset[size - 1]);
            families.push(last);
            let mut out: Vec<Vec<Q>> = families
                .iter()
                .map(|j_k| {
                    let mut f = vec![Q::zero(); n + 1];
                    for &j in j_k.iter().chain(&outside) {
                        f[j] = Q::one();
                    }
                    f[n] = q(-2);
                    f
                })
                .collect();
            out.extend(outside.iter().map(|&k| coordinate(k)));
            out
        }
    }
}

/// Certifies that `g` spans an extremal ray of the effective cone.
///
/// Two independent checks: `n` independent supporting functionals vanishing
/// at `g`, and an exact LP showing `g` is not in the cone of the remaining
/// generators.
pub fn extremality_certificate(
    g: &DivisorClass,
    n: usize,
    limits: &Limits,
) -> Result<ExtremalityCertificate, ConesError> {
    if g.n() != n {
        return Err(ConesError::DimensionMismatch {
            expected: n,
            got: g.n(),
        });
    }
    let subset = g.generator_subset().ok_or(ConesError::NotAGenerator)?;
    let cone = moduli_cone(n, limits)?;
    let point = g.coords();

    let functionals = supporting_functionals(n, &subset);
    if rank(&functionals) != n {
        return Err(ConesError::CertificateFailed("functionals are dependent"));
    }
    for f in &functionals {
        if !dot(f, &point).is_zero() {
            return Err(ConesError::CertificateFailed("functional does not vanish"));
        }
        if cone.generators().iter().any(|h| dot(f, h).is_negative()) {
            return Err(ConesError::CertificateFailed(
                "functional negative on a generator",
            ));
        }
    }

    let index = cone
        .generators()
        .iter()
        .position(|h| *h == point)
        .expect("generator is listed");
    let separation = cone
        .separate_generator(index)
        .ok_or(ConesError::CertificateFailed(
            "generator lies in the cone of the others",
        ))?;
    Ok(ExtremalityCertificate {
        generator: g.clone(),
        functionals,
        separation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn generator_constructors() {
        assert_eq!(
            DivisorClass::exceptional(3).coords(),
            vec![q(0), q(0), q(0), q(-1)]
        );
        let g = DivisorClass::generator(6, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(g.b, vec![q(1); 6]);
        assert_eq!(g.t, q(2));
        assert!(DivisorClass::generator(5, &[0, 1, 2]).is_err());
        assert!(DivisorClass::generator(5, &[]).is_err());
        assert_eq!(g.generator_subset(), Some(vec![0, 1, 2, 3, 4, 5]));
        assert_eq!(
            DivisorClass::exceptional(4).generator_subset(),
            Some(vec![])
        );
        assert_eq!(
            DivisorClass::new(vec![q(1); 6], q(3)).generator_subset(),
            None
        );
    }

    #[test]
    fn clearing_denominators() {
        let d = DivisorClass::new(vec![frac(1, 2); 5], frac(1, 3));
        let (k, c) = d.cleared();
        assert_eq!(k, BigInt::from(12));
        assert_eq!(c.b, vec![q(6); 5]);
        assert_eq!(c.t, q(4));
        let (k, _) = DivisorClass::new(vec![q(1); 5], q(0)).cleared();
        assert_eq!(k, BigInt::from(2));
    }

    #[test]
    fn generator_counts() {
        let limits = Limits::default();
        for n in 5..=10 {
            assert_eq!(
                moduli_effective_generators(n, &limits).unwrap().len(),
                1 << (n - 1)
            );
        }
        assert_eq!(
            moduli_effective_generators(4, &limits),
            Err(ConesError::TooFewPoints { n: 4, min: 5 })
        );
    }

    #[test]
    fn git_generators_examples() {
        let limits = Limits::default();
        let uniform = ParabolicWeight::new(vec![frac(1, 5); 5]).unwrap();
        assert_eq!(
            git_effective_generators(&uniform, &limits).unwrap().len(),
            10
        );
        let skew = ParabolicWeight::new(vec![
            frac(5, 16),
            frac(1, 8),
            frac(1, 8),
            frac(1, 8),
            frac(1, 8),
        ])
        .unwrap();
        assert_eq!(git_effective_generators(&skew, &limits).unwrap().len(), 6);
    }

    #[test]
    fn git_membership_examples() {
        let v = |xs: &[i64]| xs.iter().map(|&x| q(x)).collect::<Vec<_>>();
        assert_eq!(
            git_cone_membership(&v(&[1, 1, 0, 0, 0])),
            Membership::Boundary
        );
        assert_eq!(
            git_cone_membership(&v(&[1, 1, 1, 1, 1])),
            Membership::Interior
        );
        assert_eq!(
            git_cone_membership(&v(&[4, 1, 1, 1, 1])),
            Membership::Boundary
        );
        assert_eq!(
            git_cone_membership(&v(&[5, 1, 1, 1, 1])),
            Membership::Outside
        );
        let cone = git_cone(5);
        for b in [
            v(&[1, 1, 0, 0, 0]),
            v(&[1, 1, 1, 1, 1]),
            v(&[4, 1, 1, 1, 1]),
            v(&[5, 1, 1, 1, 1]),
        ] {
            assert_eq!(
                cone.membership(&b).unwrap().membership,
                git_cone_membership(&b)
            );
        }
    }

    #[test]
    fn git_cone_facets_match_hypersimplex() {
        for n in 5..=6 {
            assert_eq!(git_cone(n).facets().unwrap(), hypersimplex_facets(n));
        }
    }

    #[test]
    fn printed_pair_functional_does_not_vanish() {
        // Σ_j b_j − b_k − t on G_{12}: 2 − 1 − 0.
        let g = DivisorClass::generator(5, &[0, 1]).unwrap();
        let printed = sum(&g.b) - &g.b[0] - &g.t;
        assert_eq!(printed, q(1));
        let corrected = &supporting_functionals(5, &[0, 1])[0];
        assert_eq!(dot(corrected, &g.coords()), q(0));
    }

    #[test]
    fn certificates_for_all_generators_n5() {
        let limits = Limits::default();
        for g in moduli_effective_generators(5, &limits).unwrap() {
            let cert = extremality_certificate(&g, 5, &limits).unwrap();
            assert_eq!(cert.functionals.len(), 5);
            assert!(dot(&cert.separation, &g.coords()).is_negative());
        }
        let not_gen = DivisorClass::new(vec![q(1), q(1), q(1), q(1), q(0)], q(2));
        assert_eq!(
            extremality_certificate(&not_gen, 5, &limits),
            Err(ConesError::NotAGenerator)
        );
    }
}
