//! Multidegrees, Euler characteristics and fibral twists.
//!
//! The special fibre is reduced, its components meet transversally in single
//! points, so the intersection form on fibral divisors is the negated
//! Laplacian of the dual graph: `Y_i·Y_j = 1` across an edge and
//! `Y_i² = -deg(i)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::TreeLikeCurve;
use crate::error::{Error, Result};

/// Numerical class of a locally free sheaf: constant rank and a degree per
/// component id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleClass {
    pub rank: u32,
    pub multidegree: BTreeMap<u32, i64>,
}

impl BundleClass {
    /// Degrees listed in component-index order.
    pub fn new(curve: &TreeLikeCurve, rank: u32, degrees: &[i64]) -> Result<Self> {
        if degrees.len() != curve.len() {
            return Err(Error::KeyMismatch {
                what: "multidegree",
            });
        }
        let bc = BundleClass {
            rank,
            multidegree: curve.ids().zip(degrees.iter().copied()).collect(),
        };
        bc.check(curve)?;
        Ok(bc)
    }

    /// Rank-`rank` class of degree zero on every component.
    pub fn trivial(curve: &TreeLikeCurve, rank: u32) -> Self {
        BundleClass {
            rank,
            multidegree: curve.ids().map(|id| (id, 0)).collect(),
        }
    }

    pub fn check(&self, curve: &TreeLikeCurve) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        if !same_keys(&self.multidegree, curve) {
            return Err(Error::KeyMismatch {
                what: "multidegree",
            });
        }
        Ok(())
    }

    pub fn degree_at(&self, curve: &TreeLikeCurve, idx: usize) -> i64 {
        self.multidegree[&curve.id(idx)]
    }

    /// Degrees in component-index order.
    pub fn degrees(&self, curve: &TreeLikeCurve) -> Vec<i64> {
        curve.ids().map(|id| self.multidegree[&id]).collect()
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree.values().sum()
    }
}

/// Fibral divisor `Σ a_i Y_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDivisor {
    pub coeffs: BTreeMap<u32, i64>,
}

impl TwistDivisor {
    pub fn zero(curve: &TreeLikeCurve) -> Self {
        TwistDivisor {
            coeffs: curve.ids().map(|id| (id, 0)).collect(),
        }
    }

    /// Coefficients in component-index order.
    pub fn new(curve: &TreeLikeCurve, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != curve.len() {
            return Err(Error::KeyMismatch { what: "twist" });
        }
        Ok(TwistDivisor {
            coeffs: curve.ids().zip(coeffs.iter().copied()).collect(),
        })
    }

    pub fn check(&self, curve: &TreeLikeCurve) -> Result<()> {
        if same_keys(&self.coeffs, curve) {
            Ok(())
        } else {
            Err(Error::KeyMismatch { what: "twist" })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&a| a == 0)
    }
}

fn same_keys<V>(map: &BTreeMap<u32, V>, curve: &TreeLikeCurve) -> bool {
    map.len() == curve.len() && curve.ids().all(|id| map.contains_key(&id))
}

/// Intersection number `Y_i·Y_j` of two components (by index).
pub fn intersection(curve: &TreeLikeCurve, i: usize, j: usize) -> Result<i64> {
    curve.check_index(i)?;
    curve.check_index(j)?;
    Ok(if i == j {
        -(curve.degree(i) as i64)
    } else if curve.adjacent(i, j) {
        1
    } else {
        0
    })
}

pub fn intersection_matrix(curve: &TreeLikeCurve) -> Vec<Vec<i64>> {
    let n = curve.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| intersection(curve, i, j).expect("indices in range"))
                .collect()
        })
        .collect()
}

/// Riemann–Roch on one component: `χ_i = d_i + r(1 - ρ_a(Y_i))`.
pub fn euler_char_component(curve: &TreeLikeCurve, bc: &BundleClass, idx: usize) -> Result<i64> {
    let comp = curve.component(idx)?;
    let d = *bc.multidegree.get(&comp.id).ok_or(Error::KeyMismatch {
        what: "multidegree",
    })?;
    let r = bc.rank as i64;
    Ok(d + r * (1 - comp.arithmetic_genus() as i64))
}

/// `χ = Σ χ_i - r(N - 1)`: each connecting node contributes `r` to the
/// normalization sequence.
pub fn euler_char_total(curve: &TreeLikeCurve, bc: &BundleClass) -> Result<i64> {
    bc.check(curve)?;
    let sum: i64 = (0..curve.len())
        .map(|i| euler_char_component(curve, bc, i))
        .sum::<Result<i64>>()?;
    Ok(sum - bc.rank as i64 * (curve.len() as i64 - 1))
}

/// Sum of component Euler characteristics over a set of component indices.
pub fn chi_subcurve_sum(curve: &TreeLikeCurve, bc: &BundleClass, subset: &[usize]) -> Result<i64> {
    if subset.is_empty() {
        return Err(Error::EmptySubcurve);
    }
    subset
        .iter()
        .map(|&i| euler_char_component(curve, bc, i))
        .sum()
}

/// Tensors by `O(Σ a_j Y_j)`: `d_i' = d_i + r Σ_j a_j (Y_j·Y_i)`.
pub fn twist(curve: &TreeLikeCurve, bc: &BundleClass, t: &TwistDivisor) -> Result<BundleClass> {
    bc.check(curve)?;
    t.check(curve)?;
    let r = bc.rank as i64;
    let mut out = bc.clone();
    for (i, comp) in curve.components().iter().enumerate() {
        let a = t.coeffs[&comp.id];
        if a == 0 {
            continue;
        }
        *out.multidegree.get_mut(&comp.id).unwrap() -= r * a * curve.degree(i) as i64;
        for &j in curve.neighbors(i) {
            *out.multidegree.get_mut(&curve.id(j)).unwrap() += r * a;
        }
    }
    Ok(out)
}

/// Twist by `a·Y_idx` alone.
pub fn twist_single(
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    idx: usize,
    a: i64,
) -> Result<BundleClass> {
    curve.check_index(idx)?;
    let mut coeffs = vec![0; curve.len()];
    coeffs[idx] = a;
    twist(curve, bc, &TwistDivisor::new(curve, &coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{arithmetic_genus, Component};

    fn path_ab() -> TreeLikeCurve {
        TreeLikeCurve::path(&[1, 1]).unwrap()
    }

    #[test]
    fn intersection_numbers_on_path() {
        let c = TreeLikeCurve::path(&[0, 0, 0]).unwrap();
        assert_eq!(intersection(&c, 0, 1).unwrap(), 1);
        assert_eq!(intersection(&c, 0, 2).unwrap(), 0);
        assert_eq!(intersection(&c, 1, 1).unwrap(), -2);
        for row in intersection_matrix(&c) {
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
        assert!(matches!(
            intersection(&c, 0, 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn riemann_roch_per_component() {
        let chi = |g: u32, nodes: u32, r: u32, d: i64| {
            let c = TreeLikeCurve::irreducible(g, nodes);
            euler_char_component(&c, &BundleClass::new(&c, r, &[d]).unwrap(), 0).unwrap()
        };
        assert_eq!(chi(1, 0, 2, 5), 5);
        assert_eq!(chi(2, 0, 2, 3), 1);
        assert_eq!(chi(1, 1, 2, 3), 1);
        assert_eq!(chi(0, 0, 1, 0), 1);
    }

    #[test]
    fn total_chi_two_components() {
        let c = path_ab();
        let bc = BundleClass::new(&c, 2, &[5, -1]).unwrap();
        assert_eq!(euler_char_total(&c, &bc).unwrap(), 2);
        assert_eq!(chi_subcurve_sum(&c, &bc, &[0, 1]).unwrap(), 4);
        assert_eq!(chi_subcurve_sum(&c, &bc, &[1]).unwrap(), -1);
        assert_eq!(chi_subcurve_sum(&c, &bc, &[]), Err(Error::EmptySubcurve));
    }

    #[test]
    fn total_chi_single_component_matches_component() {
        let c = TreeLikeCurve::irreducible(2, 1);
        let bc = BundleClass::new(&c, 3, &[7]).unwrap();
        assert_eq!(
            euler_char_total(&c, &bc).unwrap(),
            euler_char_component(&c, &bc, 0).unwrap()
        );
    }

    #[test]
    fn star_structure_sheaf() {
        let comps = (1..=4).map(|i| Component::new(i, 0, 0)).collect();
        let c = TreeLikeCurve::new(comps, &[[1, 2], [1, 3], [1, 4]]).unwrap();
        let chi = euler_char_total(&c, &BundleClass::trivial(&c, 1)).unwrap();
        assert_eq!(chi, 1);
        assert_eq!(1 - chi, arithmetic_genus(&c) as i64);
    }

    #[test]
    fn twist_moves_degree_across_node() {
        let c = path_ab();
        let bc = BundleClass::new(&c, 2, &[5, -1]).unwrap();
        let t = TwistDivisor::new(&c, &[1, 0]).unwrap();
        let out = twist(&c, &bc, &t).unwrap();
        assert_eq!(out.degrees(&c), vec![3, 1]);
        assert_eq!(twist(&c, &bc, &TwistDivisor::zero(&c)).unwrap(), bc);
    }

    #[test]
    fn far_twist_leaves_subcurve_sum() {
        // Path 1-2-3-4; twist on component 4 cannot reach {1}.
        let c = TreeLikeCurve::path(&[1, 0, 2, 1]).unwrap();
        let bc = BundleClass::new(&c, 3, &[4, -2, 7, 1]).unwrap();
        let out = twist_single(&c, &bc, 3, 5).unwrap();
        assert_eq!(
            chi_subcurve_sum(&c, &bc, &[0]).unwrap(),
            chi_subcurve_sum(&c, &out, &[0]).unwrap()
        );
    }

    #[test]
    fn key_mismatch_detected() {
        let c = path_ab();
        let bc = BundleClass {
            rank: 2,
            multidegree: BTreeMap::from([(1, 0), (3, 0)]),
        };
        assert!(matches!(
            euler_char_total(&c, &bc),
            Err(Error::KeyMismatch { .. })
        ));
        let zero_rank = BundleClass {
            rank: 0,
            ..BundleClass::trivial(&c, 1)
        };
        assert_eq!(zero_rank.check(&c), Err(Error::ZeroRank));
    }

    #[test]
    fn wire_shapes() {
        let bc: BundleClass =
            serde_json::from_str(r#"{"rank":2,"multidegree":{"1":5,"2":-1}}"#).unwrap();
        assert_eq!(bc.multidegree[&2], -1);
        let t: TwistDivisor = serde_json::from_str(r#"{"coeffs":{"1":1,"2":0}}"#).unwrap();
        assert_eq!(t.coeffs[&1], 1);
    }
}
