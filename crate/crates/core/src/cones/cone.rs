//! Finitely generated rational cones.

use num_traits::{Signed, Zero};

use super::ConesError;
use crate::linalg::{independent_subset, inverse, rank};
use crate::lp::{feasible_point, minimize, LpResult};
use crate::rational::{dot, primitive_integer, q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Nonnegative coefficients `λ` with `Σ λ_i g_i = v`.
    Combination(Vec<Q>),
    /// A functional nonnegative on every generator and negative on `v`.
    Separating(Vec<Q>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipResult {
    pub membership: Membership,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCone {
    dim: usize,
    generators: Vec<Vec<Q>>,
}

impl RationalCone {
    pub fn new(dim: usize, generators: Vec<Vec<Q>>) -> Result<Self, ConesError> {
        for g in &generators {
            if g.len() != dim {
                return Err(ConesError::DimensionMismatch {
                    expected: dim,
                    got: g.len(),
                });
            }
            if g.iter().all(Zero::is_zero) {
                return Err(ConesError::ZeroGenerator);
            }
        }
        Ok(Self { dim, generators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Q>] {
        &self.generators
    }

    pub fn is_full_dimensional(&self) -> bool {
        rank(&self.generators) == self.dim
    }

    /// Generator matrix with one column per generator.
    fn columns(&self, extra: Option<&[Q]>) -> Vec<Vec<Q>> {
        (0..self.dim)
            .map(|r| {
                let mut row: Vec<Q> = self.generators.iter().map(|g| g[r].clone()).collect();
                if let Some(e) = extra {
                    row.push(e[r].clone());
                }
                row
            })
            .collect()
    }

    /// Exact membership of `v`, with a combination or separating witness.
    ///
    /// "Interior" means the topological interior in `Q^dim`; a cone that is
    /// not full-dimensional has none, so its members are reported as Boundary.
    pub fn membership(&self, v: &[Q]) -> Result<MembershipResult, ConesError> {
        if v.len() != self.dim {
            return Err(ConesError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let a = self.columns(None);
        let lambda = match feasible_point(&a, v) {
            Ok(x) => x,
            Err(z) => {
                return Ok(MembershipResult {
                    membership: Membership::Outside,
                    witness: Witness::Separating(z),
                })
            }
        };
        if !self.is_full_dimensional() {
            return Ok(MembershipResult {
                membership: Membership::Boundary,
                witness: Witness::Combination(lambda),
            });
        }
        // The generator sum lies in the interior; v is interior iff
        // v − ε·s stays in the cone for some ε > 0.
        let s: Vec<Q> = (0..self.dim)
            .map(|r| self.generators.iter().fold(Q::zero(), |acc, g| acc + &g[r]))
            .collect();
        let a_eps = self.columns(Some(&s));
        let mut cost = vec![Q::zero(); self.generators.len()];
        cost.push(q(-1));
        let interior = match minimize(&a_eps, v, &cost) {
            LpResult::Optimal { value, .. } => value.is_negative(),
            LpResult::Unbounded => true,
            LpResult::Infeasible { .. } => unreachable!("ε = 0 is feasible"),
        };
        Ok(MembershipResult {
            membership: if interior {
                Membership::Interior
            } else {
                Membership::Boundary
            },
            witness: Witness::Combination(lambda),
        })
    }

    /// A functional separating generator `index` from the cone of the others,
    /// or `None` if it lies in that cone.
    pub fn separate_generator(&self, index: usize) -> Option<Vec<Q>> {
        let others: Vec<Vec<Q>> = self
            .generators
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != index)
            .map(|(_, g)| g.clone())
            .collect();
        let target = &self.generators[index];
        if others.is_empty() {
            // Every functional is ≥ 0 on nothing; take −g.
            return Some(target.iter().map(|x| -x).collect());
        }
        let a: Vec<Vec<Q>> = (0..self.dim)
            .map(|r| others.iter().map(|g| g[r].clone()).collect())
            .collect();
        feasible_point(&a, target).err()
    }

    /// Inward facet normals of a full-dimensional cone, as primitive integer
    /// vectors in sorted order.
    ///
    /// Computed by double description on the dual cone; every returned normal
    /// is checked to be nonnegative on all generators and tight on a set of
    /// rank `dim − 1`.
    pub fn facets(&self) -> Result<Vec<Vec<Q>>, ConesError> {
        let d = self.dim;
        let m = self.generators.len();
        let basis = independent_subset(&self.generators);
        if basis.len() < d {
            return Err(ConesError::NotFullDimensional);
        }
        let b: Vec<Vec<Q>> = basis.iter().map(|&i| self.generators[i].clone()).collect();
        let inv = inverse(&b).expect("independent rows are invertible");

        // Ray k of {f : B f ≥ 0} is column k of B⁻¹, tight on every basis row but k.
        let mut rays: Vec<Ray> = (0..d)
            .map(|k| {
                let f: Vec<Q> = (0..d).map(|r| inv[r][k].clone()).collect();
                let mut tight = vec![false; m];
                for (j, &g) in basis.iter().enumerate() {
                    tight[g] = j != k;
                }
                Ray { f, tight }
            })
            .collect();

        for g in (0..m).filter(|i| !basis.contains(i)) {
            let gen = &self.generators[g];
            let values: Vec<Q> = rays.iter().map(|r| dot(gen, &r.f)).collect();
            let mut next = Vec::new();
            for (r, v) in rays.iter().zip(&values) {
                if !v.is_negative() {
                    let mut r = r.clone();
                    r.tight[g] = v.is_zero();
                    next.push(r);
                }
            }
            for (pi, p) in rays.iter().enumerate() {
                if !values[pi].is_positive() {
                    continue;
                }
                for (ni, nr) in rays.iter().enumerate() {
                    if !values[ni].is_negative() {
                        continue;
                    }
                    let common: Vec<bool> = p
                        .tight
                        .iter()
                        .zip(&nr.tight)
                        .map(|(a, b)| *a && *b)
                        .collect();
                    if common.iter().filter(|&&x| x).count() + 2 < d {
                        continue;
                    }
                    let adjacent = rays.iter().enumerate().all(|(oi, o)| {
                        oi == pi || oi == ni || common.iter().zip(&o.tight).any(|(c, t)| *c && !*t)
                    });
                    if !adjacent {
                        continue;
                    }
                    let f: Vec<Q> =
                        nr.f.iter()
                            .zip(&p.f)
                            .map(|(x, y)| &values[pi] * x - &values[ni] * y)
                            .collect();
                    let mut tight = common;
                    tight[g] = true;
                    next.push(Ray {
                        f: primitive_integer(&f),
                        tight,
                    });
                }
            }
            rays = next;
        }

        let mut facets: Vec<Vec<Q>> = Vec::with_capacity(rays.len());
        for ray in rays {
            let f = primitive_integer(&ray.f);
            let tight: Vec<Vec<Q>> = self
                .generators
                .iter()
                .filter(|g| {
                    let v = dot(g, &f);
                    assert!(!v.is_negative(), "facet normal negative on a generator");
                    v.is_zero()
                })
                .cloned()
                .collect();
            assert_eq!(
                rank(&tight),
                d - 1,
                "double description produced a non-facet"
            );
            facets.push(f);
        }
        facets.sort();
        facets.dedup();
        Ok(facets)
    }
}

#[derive(Debug, Clone)]
struct Ray {
    f: Vec<Q>,
    tight: Vec<bool>,
}

/// [`RationalCone::membership`] as a free function.
pub fn cone_membership_lp(v: &[Q], cone: &RationalCone) -> Result<MembershipResult, ConesError> {
    cone.membership(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    }

    fn orthant() -> RationalCone {
        RationalCone::new(3, vecs(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap()
    }

    #[test]
    fn membership_examples() {
        let c = orthant();
        let sum = vec![q(1), q(1), q(1)];
        assert_eq!(c.membership(&sum).unwrap().membership, Membership::Interior);
        let r = c.membership(&[q(1), q(0), q(0)]).unwrap();
        assert_eq!(r.membership, Membership::Boundary);
        let neg = vec![q(-1), q(-1), q(-1)];
        let r = c.membership(&neg).unwrap();
        assert_eq!(r.membership, Membership::Outside);
        let Witness::Separating(z) = r.witness else {
            panic!("expected a separating functional")
        };
        assert!(dot(&z, &neg).is_negative());
        assert!(c.generators().iter().all(|g| !dot(&z, g).is_negative()));
        assert!(matches!(
            c.membership(&[q(1)]),
            Err(ConesError::DimensionMismatch {
                expected: 3,
                got: 1
            })
        ));
    }

    #[test]
    fn lower_dimensional_cone_has_no_interior() {
        let c = RationalCone::new(3, vecs(&[&[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert_eq!(
            c.membership(&[q(1), q(1), q(0)]).unwrap().membership,
            Membership::Boundary
        );
        assert_eq!(c.facets(), Err(ConesError::NotFullDimensional));
    }

    #[test]
    fn facets_of_square_pyramid() {
        let c = RationalCone::new(
            3,
            vecs(&[
                &[1, 1, 1],
                &[-1, 1, 1],
                &[1, -1, 1],
                &[-1, -1, 1],
                &[0, 0, 1],
            ]),
        )
        .unwrap();
        let facets = c.facets().unwrap();
        assert_eq!(
            facets,
            vecs(&[&[-1, 0, 1], &[0, -1, 1], &[0, 1, 1], &[1, 0, 1]])
        );
        // The apex-direction generator is not extremal; the corners are.
        assert!(c.separate_generator(4).is_none());
        assert!(c.separate_generator(0).is_some());
    }

    #[test]
    fn orthant_facets_are_coordinates() {
        assert_eq!(
            orthant().facets().unwrap(),
            vecs(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])
        );
    }
}
