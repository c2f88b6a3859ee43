//! Slopes and semistability checks on numerical classes.
//!
//! All comparisons are exact. The λ-semistability check evaluates, for each
//! position `i` of a leaf-pruning order, the window
//!
//! ```text
//! L_i = (Σ_{G(i)} λ_j)·χ + r(|G(i)| - 1)  ≤  S_i = Σ_{G(i)} χ_j  ≤  L_i + r
//! ```

use std::cmp::Ordering as CmpOrdering;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::curve::{Ordering, TreeLikeCurve};
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::twist::{chi_subcurve_sum, euler_char_total, BundleClass};

/// Positive rational weights per component id, summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polarization {
    #[serde(with = "rational::map")]
    pub weights: BTreeMap<u32, Rational>,
}

impl Polarization {
    /// Weights in component-index order.
    pub fn new(curve: &TreeLikeCurve, weights: &[Rational]) -> Result<Self> {
        if weights.len() != curve.len() {
            return Err(Error::KeyMismatch {
                what: "polarization",
            });
        }
        let pol = Polarization {
            weights: curve.ids().zip(weights.iter().copied()).collect(),
        };
        pol.check(curve)?;
        Ok(pol)
    }

    /// Equal weights `1/N`.
    pub fn uniform(curve: &TreeLikeCurve) -> Self {
        let w = Rational::new(1, curve.len() as i64);
        Polarization {
            weights: curve.ids().map(|id| (id, w)).collect(),
        }
    }

    pub fn check(&self, curve: &TreeLikeCurve) -> Result<()> {
        if self.weights.len() != curve.len()
            || !curve.ids().all(|id| self.weights.contains_key(&id))
        {
            return Err(Error::KeyMismatch {
                what: "polarization",
            });
        }
        if let Some((id, w)) = self.weights.iter().find(|(_, w)| **w <= Rational::zero()) {
            return Err(Error::InvalidPolarization(format!(
                "weight {} on component {id} is not positive",
                rational::format(w)
            )));
        }
        let total: Rational = self.weights.values().sum();
        if total != int(1) {
            return Err(Error::InvalidPolarization(format!(
                "weights sum to {}",
                rational::format(&total)
            )));
        }
        Ok(())
    }

    pub fn weight_at(&self, curve: &TreeLikeCurve, idx: usize) -> Rational {
        self.weights[&curve.id(idx)]
    }
}

/// Degree of a fixed ample class on each component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmpleDegrees {
    pub degrees: BTreeMap<u32, u32>,
}

impl AmpleDegrees {
    pub fn new(curve: &TreeLikeCurve, degrees: &[u32]) -> Result<Self> {
        if degrees.len() != curve.len() {
            return Err(Error::KeyMismatch {
                what: "ample degrees",
            });
        }
        let h = AmpleDegrees {
            degrees: curve.ids().zip(degrees.iter().copied()).collect(),
        };
        h.check(curve)?;
        Ok(h)
    }

    pub fn check(&self, curve: &TreeLikeCurve) -> Result<()> {
        if self.degrees.len() != curve.len()
            || !curve.ids().all(|id| self.degrees.contains_key(&id))
        {
            return Err(Error::KeyMismatch {
                what: "ample degrees",
            });
        }
        if self.degrees.values().any(|&h| h == 0) {
            return Err(Error::InvalidAmpleDegree);
        }
        Ok(())
    }

    pub fn total(&self) -> i64 {
        self.degrees.values().map(|&h| h as i64).sum()
    }
}

/// `d / r` on an irreducible curve.
pub fn slope(curve: &TreeLikeCurve, bc: &BundleClass) -> Result<Rational> {
    if curve.len() != 1 {
        return Err(Error::WrongArity(curve.len()));
    }
    bc.check(curve)?;
    Ok(Rational::new(bc.total_degree(), bc.rank as i64))
}

/// `χ / Σ λ_i r`.
pub fn seshadri_slope(
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    pol: &Polarization,
) -> Result<Rational> {
    pol.check(curve)?;
    let chi = euler_char_total(curve, bc)?;
    let denom: Rational = pol.weights.values().map(|w| w * bc.rank as i64).sum();
    Ok(int(chi) / denom)
}

/// `λ_i = h_i / Σ h_j`: the polarization whose Seshadri slope reproduces the
/// Gieseker comparison for this ample class.
pub fn polarization_from_ample(h: &AmpleDegrees) -> Result<Polarization> {
    if h.degrees.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if h.degrees.values().any(|&d| d == 0) {
        return Err(Error::InvalidAmpleDegree);
    }
    let total = h.total();
    Ok(Polarization {
        weights: h
            .degrees
            .iter()
            .map(|(&id, &d)| (id, Rational::new(d as i64, total)))
            .collect(),
    })
}

/// One window of the λ-semistability check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexVerdict {
    /// 1-based position in the ordering.
    pub index: usize,
    pub component: u32,
    /// Component ids of `G(i)`.
    pub good: Vec<u32>,
    #[serde(with = "rational")]
    pub lower: Rational,
    #[serde(with = "rational")]
    pub upper: Rational,
    /// `S_i`, the sum of component Euler characteristics over `G(i)`.
    pub value: i64,
    pub pass: bool,
}

impl IndexVerdict {
    /// Distance from `S_i` to the window; zero inside it.
    pub fn distance(&self) -> Rational {
        let s = int(self.value);
        if s < self.lower {
            self.lower - s
        } else if s > self.upper {
            s - self.upper
        } else {
            Rational::zero()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub rank: u32,
    pub chi: i64,
    /// Component ids in ordering positions.
    pub ordering: Vec<u32>,
    pub indices: Vec<IndexVerdict>,
    pub pass: bool,
}

impl LambdaReport {
    pub fn failing(&self) -> impl Iterator<Item = &IndexVerdict> {
        self.indices.iter().filter(|v| !v.pass)
    }
}

/// `(L_i, S_i)` at ordering position `pos`.
pub(crate) fn window_at(
    curve: &TreeLikeCurve,
    ord: &Ordering,
    bc: &BundleClass,
    pol: &Polarization,
    chi: i64,
    pos: usize,
) -> Result<(Rational, i64)> {
    let good = ord.good(pos);
    let weight: Rational = good.iter().map(|&j| pol.weight_at(curve, j)).sum();
    let r = bc.rank as i64;
    let lower = weight * chi + int(r * (good.len() as i64 - 1));
    Ok((lower, chi_subcurve_sum(curve, bc, good)?))
}

pub(crate) fn verdict_at(
    curve: &TreeLikeCurve,
    ord: &Ordering,
    bc: &BundleClass,
    pol: &Polarization,
    chi: i64,
    pos: usize,
) -> Result<IndexVerdict> {
    let (lower, value) = window_at(curve, ord, bc, pol, chi, pos)?;
    let upper = lower + int(bc.rank as i64);
    let s = int(value);
    Ok(IndexVerdict {
        index: pos + 1,
        component: curve.id(ord.component_at(pos)),
        good: ord.good(pos).iter().map(|&j| curve.id(j)).collect(),
        lower,
        upper,
        value,
        pass: lower <= s && s <= upper,
    })
}

/// Evaluates every λ-semistability window along `ord`.
pub fn lambda_check(
    curve: &TreeLikeCurve,
    ord: &Ordering,
    bc: &BundleClass,
    pol: &Polarization,
) -> Result<LambdaReport> {
    ord.check(curve)?;
    pol.check(curve)?;
    let chi = euler_char_total(curve, bc)?;
    let indices = (0..curve.len())
        .map(|pos| verdict_at(curve, ord, bc, pol, chi, pos))
        .collect::<Result<Vec<_>>>()?;
    Ok(LambdaReport {
        rank: bc.rank,
        chi,
        ordering: ord.ids(curve),
        pass: indices.iter().all(|v| v.pass),
        indices,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMismatch {
    pub component: u32,
    pub bundle_degree: i64,
    pub det_degree: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalViolation {
    pub component: u32,
    pub degree: i64,
    pub rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetVerdict {
    pub pass: bool,
    pub mismatches: Vec<DegreeMismatch>,
    pub rational_violations: Vec<RationalViolation>,
}

/// Checks that `det_multidegree` is the determinant multidegree of `bc` and
/// that `r` divides the degree on every smooth rational component.
pub fn det_compatibility(
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    det_multidegree: &BTreeMap<u32, i64>,
) -> Result<DetVerdict> {
    bc.check(curve)?;
    let mut mismatches = Vec::new();
    let mut rational_violations = Vec::new();
    for comp in curve.components() {
        let d = bc.multidegree[&comp.id];
        let det = det_multidegree.get(&comp.id).copied();
        if det != Some(d) {
            mismatches.push(DegreeMismatch {
                component: comp.id,
                bundle_degree: d,
                det_degree: det,
            });
        }
        if comp.is_rational() && d % bc.rank as i64 != 0 {
            rational_violations.push(RationalViolation {
                component: comp.id,
                degree: d,
                rank: bc.rank,
            });
        }
    }
    for &id in det_multidegree.keys() {
        if curve.index_of(id).is_none() {
            mismatches.push(DegreeMismatch {
                component: id,
                bundle_degree: 0,
                det_degree: det_multidegree.get(&id).copied(),
            });
        }
    }
    Ok(DetVerdict {
        pass: mismatches.is_empty() && rational_violations.is_empty(),
        mismatches,
        rational_violations,
    })
}

/// Numerics of a subsheaf: rank on each component and Euler characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubobjectNumerics {
    pub multirank: BTreeMap<u32, u32>,
    pub chi: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "=")]
    Equal,
    #[serde(rename = ">")]
    Greater,
}

impl From<CmpOrdering> for Relation {
    fn from(o: CmpOrdering) -> Self {
        match o {
            CmpOrdering::Less => Relation::Less,
            CmpOrdering::Equal => Relation::Equal,
            CmpOrdering::Greater => Relation::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GiesekerComparison {
    #[serde(with = "rational")]
    pub sub: Rational,
    #[serde(with = "rational")]
    pub class: Rational,
    pub relation: Relation,
    /// `sub ≤ class`: the subobject does not destabilize.
    pub bounded: bool,
}

/// Compares reduced Hilbert polynomials of a subobject and the class through
/// their linear-term ratios `χ_sub / Σ r_i' h_i` and `χ / r Σ h_i`.
pub fn gieseker_vs_seshadri(
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    h: &AmpleDegrees,
    sub: &SubobjectNumerics,
) -> Result<GiesekerComparison> {
    h.check(curve)?;
    if sub.multirank.len() != curve.len() || !curve.ids().all(|id| sub.multirank.contains_key(&id))
    {
        return Err(Error::KeyMismatch { what: "multirank" });
    }
    if let Some(&r) = sub.multirank.values().find(|&&r| r > bc.rank) {
        return Err(Error::RankBound {
            sub: r,
            rank: bc.rank,
        });
    }
    let weighted: i64 = sub
        .multirank
        .iter()
        .map(|(id, &r)| r as i64 * h.degrees[id] as i64)
        .sum();
    if weighted == 0 {
        return Err(Error::ZeroMultirank);
    }
    let chi = euler_char_total(curve, bc)?;
    let sub_value = Rational::new(sub.chi, weighted);
    let class_value = Rational::new(chi, bc.rank as i64 * h.total());
    let relation = Relation::from(sub_value.cmp(&class_value));
    Ok(GiesekerComparison {
        sub: sub_value,
        class: class_value,
        relation,
        bounded: relation != Relation::Greater,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{prune_ordering, Component};

    fn path_ab() -> TreeLikeCurve {
        TreeLikeCurve::path(&[1, 1]).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn slopes_on_irreducible() {
        let c = TreeLikeCurve::irreducible(2, 0);
        let s = |r, d| slope(&c, &BundleClass::new(&c, r, &[d]).unwrap()).unwrap();
        assert_eq!(s(2, 3), Rational::new(3, 2));
        assert_eq!(s(5, 0), int(0));
        assert_eq!(s(4, -4), int(-1));
        let p = path_ab();
        assert_eq!(
            slope(&p, &BundleClass::trivial(&p, 1)),
            Err(Error::WrongArity(2))
        );
    }

    #[test]
    fn seshadri_examples() {
        let c = path_ab();
        let bc = BundleClass::new(&c, 2, &[5, -1]).unwrap();
        let pol = Polarization::new(&c, &[half(), half()]).unwrap();
        assert_eq!(seshadri_slope(&c, &bc, &pol).unwrap(), int(1));

        let p1 = TreeLikeCurve::irreducible(0, 0);
        let o = BundleClass::trivial(&p1, 1);
        assert_eq!(
            seshadri_slope(&p1, &o, &Polarization::uniform(&p1)).unwrap(),
            int(1)
        );
    }

    #[test]
    fn polarization_validation() {
        let c = path_ab();
        assert!(matches!(
            Polarization::new(&c, &[int(1), int(0)]),
            Err(Error::InvalidPolarization(_))
        ));
        assert!(matches!(
            Polarization::new(&c, &[half(), Rational::new(1, 3)]),
            Err(Error::InvalidPolarization(_))
        ));
        let pol: Polarization =
            serde_json::from_str(r#"{"weights":{"1":"1/2","2":"1/2"}}"#).unwrap();
        pol.check(&c).unwrap();
    }

    #[test]
    fn ample_to_polarization() {
        let c = path_ab();
        let p = polarization_from_ample(&AmpleDegrees::new(&c, &[1, 1]).unwrap()).unwrap();
        assert_eq!(
            p.weights.values().copied().collect::<Vec<_>>(),
            vec![half(), half()]
        );
        let p = polarization_from_ample(&AmpleDegrees::new(&c, &[2, 3]).unwrap()).unwrap();
        assert_eq!(
            p.weights.values().copied().collect::<Vec<_>>(),
            vec![Rational::new(2, 5), Rational::new(3, 5)]
        );
        p.check(&c).unwrap();
        assert_eq!(
            AmpleDegrees::new(&c, &[0, 1]).unwrap_err(),
            Error::InvalidAmpleDegree
        );
    }

    #[test]
    fn lambda_check_before_and_after_balancing() {
        let c = path_ab();
        let ord = prune_ordering(&c);
        let pol = Polarization::uniform(&c);

        let before =
            lambda_check(&c, &ord, &BundleClass::new(&c, 2, &[5, -1]).unwrap(), &pol).unwrap();
        let v = &before.indices[0];
        assert_eq!((v.lower, v.upper, v.value), (int(1), int(3), 5));
        assert!(!v.pass);
        assert_eq!(v.distance(), int(2));
        assert!(before.indices[1].pass);
        assert!(!before.pass);

        let after =
            lambda_check(&c, &ord, &BundleClass::new(&c, 2, &[3, 1]).unwrap(), &pol).unwrap();
        assert_eq!(after.indices[0].value, 3);
        assert!(after.pass);
    }

    #[test]
    fn lambda_check_single_component() {
        let c = TreeLikeCurve::irreducible(4, 2);
        let ord = prune_ordering(&c);
        let bc = BundleClass::new(&c, 3, &[-17]).unwrap();
        assert!(
            lambda_check(&c, &ord, &bc, &Polarization::uniform(&c))
                .unwrap()
                .pass
        );
    }

    #[test]
    fn lambda_check_rejects_foreign_ordering() {
        let c = path_ab();
        let other = TreeLikeCurve::path(&[1, 1, 1]).unwrap();
        let ord = prune_ordering(&other);
        assert_eq!(
            lambda_check(
                &c,
                &ord,
                &BundleClass::trivial(&c, 2),
                &Polarization::uniform(&c)
            )
            .unwrap_err(),
            Error::OrderingMismatch
        );
    }

    #[test]
    fn determinant_constraint() {
        let comps = vec![Component::new(1, 0, 0), Component::new(2, 1, 0)];
        let c = TreeLikeCurve::new(comps, &[[1, 2]]).unwrap();
        let bc = BundleClass::new(&c, 2, &[3, 1]).unwrap();
        let v = det_compatibility(&c, &bc, &bc.multidegree).unwrap();
        assert!(!v.pass);
        assert!(v.mismatches.is_empty());
        assert_eq!(v.rational_violations[0].component, 1);

        let ok = BundleClass::new(&c, 2, &[4, 1]).unwrap();
        assert!(det_compatibility(&c, &ok, &ok.multidegree).unwrap().pass);

        let det = BTreeMap::from([(1, 3), (2, 0)]);
        let v = det_compatibility(&c, &bc, &det).unwrap();
        assert_eq!(v.mismatches.len(), 1);
        assert_eq!(v.mismatches[0].component, 2);
    }

    #[test]
    fn gieseker_examples() {
        let c = path_ab();
        let bc = BundleClass::new(&c, 2, &[5, -1]).unwrap();
        let h = AmpleDegrees::new(&c, &[1, 1]).unwrap();
        let full = SubobjectNumerics {
            multirank: BTreeMap::from([(1, 2), (2, 2)]),
            chi: 2,
        };
        assert_eq!(
            gieseker_vs_seshadri(&c, &bc, &h, &full).unwrap().relation,
            Relation::Equal
        );
        let sub = SubobjectNumerics {
            multirank: BTreeMap::from([(1, 1), (2, 1)]),
            chi: 2,
        };
        let cmp = gieseker_vs_seshadri(&c, &bc, &h, &sub).unwrap();
        assert_eq!((cmp.sub, cmp.class), (int(1), half()));
        assert_eq!(cmp.relation, Relation::Greater);
        let low = SubobjectNumerics {
            multirank: BTreeMap::from([(1, 1), (2, 0)]),
            chi: -10,
        };
        assert!(gieseker_vs_seshadri(&c, &bc, &h, &low).unwrap().bounded);
        let zero = SubobjectNumerics {
            multirank: BTreeMap::from([(1, 0), (2, 0)]),
            chi: 0,
        };
        assert_eq!(
            gieseker_vs_seshadri(&c, &bc, &h, &zero).unwrap_err(),
            Error::ZeroMultirank
        );
    }
}
