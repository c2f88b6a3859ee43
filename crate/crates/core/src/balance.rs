//! Twist balancing: find `a_1, …, a_N` with `E ⊗ O(Σ a_i Y_i)` λ-semistable.
//!
//! Positions are processed from `N-1` down to `1`. Twisting by `a·Y_i`
//! lowers `S_i` by exactly `r·a` and leaves `χ` and every later window
//! untouched, so each step solves a one-dimensional problem: put `S_i - r·a`
//! into a window of width `r`. There are one or two integer solutions; the
//! smaller `a` is taken, which leaves `S_i` as high in the window as possible.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::curve::{prune_ordering, Ordering, TreeLikeCurve};
use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use crate::stability::{lambda_check, verdict_at, window_at, Polarization};
use crate::twist::{euler_char_total, twist, twist_single, BundleClass, TwistDivisor};

/// Log entry for one balancing step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based ordering position.
    pub index: usize,
    pub component: u32,
    /// Window `[L_i, L_i + r]` for `S_i`.
    #[serde(with = "rational")]
    pub lower: Rational,
    #[serde(with = "rational")]
    pub upper: Rational,
    /// `S_i` before the step.
    pub value: i64,
    /// Real interval `[(S-L-r)/r, (S-L)/r]` of admissible twists.
    #[serde(with = "rational")]
    pub twist_lower: Rational,
    #[serde(with = "rational")]
    pub twist_upper: Rational,
    /// All integers in that interval, ascending.
    pub candidates: Vec<i64>,
    pub chosen: i64,
    /// `S_i` after the step.
    pub value_after: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub twist: i64,
    pub class: BundleClass,
    pub record: StepRecord,
}

/// Integers in the closed interval `[lo, hi]`.
fn integers_between(lo: Rational, hi: Rational) -> Vec<i64> {
    let first = lo.ceil().to_integer();
    let last = hi.floor().to_integer();
    (first..=last).collect()
}

/// Balances ordering position `pos` (0-based), assuming every later position
/// already passes.
pub fn balance_step(
    curve: &TreeLikeCurve,
    ord: &Ordering,
    bc: &BundleClass,
    pol: &Polarization,
    pos: usize,
) -> Result<StepOutcome> {
    ord.check(curve)?;
    pol.check(curve)?;
    let n = curve.len();
    if pos + 1 >= n {
        return Err(Error::IndexOutOfRange {
            index: pos,
            len: n.saturating_sub(1),
        });
    }
    let chi = euler_char_total(curve, bc)?;
    for t in pos + 1..n {
        if !verdict_at(curve, ord, bc, pol, chi, t)?.pass {
            return Err(Error::PreconditionViolated(t + 1));
        }
    }

    let r = bc.rank as i64;
    let (lower, value) = window_at(curve, ord, bc, pol, chi, pos)?;
    let excess = int(value) - lower;
    let twist_lower = (excess - int(r)) / r;
    let twist_upper = excess / r;
    let candidates = integers_between(twist_lower, twist_upper);
    let chosen = *candidates
        .first()
        .expect("an interval of length one contains an integer");

    let class = twist_single(curve, bc, ord.component_at(pos), chosen)?;
    let after = verdict_at(curve, ord, &class, pol, chi, pos)?;
    debug_assert_eq!(after.value, value - r * chosen);

    Ok(StepOutcome {
        twist: chosen,
        record: StepRecord {
            index: pos + 1,
            component: curve.id(ord.component_at(pos)),
            lower,
            upper: lower + int(r),
            value,
            twist_lower,
            twist_upper,
            candidates,
            chosen,
            value_after: after.value,
        },
        class,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceResult {
    /// Component ids in the ordering used.
    pub ordering: Vec<u32>,
    pub twist: TwistDivisor,
    pub class: BundleClass,
    pub steps: Vec<StepRecord>,
}

/// Balances along the default pruning order.
pub fn balance(
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    pol: &Polarization,
) -> Result<BalanceResult> {
    balance_with_ordering(curve, &prune_ordering(curve), bc, pol)
}

pub fn balance_with_ordering(
    curve: &TreeLikeCurve,
    ord: &Ordering,
    bc: &BundleClass,
    pol: &Polarization,
) -> Result<BalanceResult> {
    ord.check(curve)?;
    pol.check(curve)?;
    bc.check(curve)?;
    let n = curve.len();
    let mut coeffs = vec![0i64; n];
    let mut class = bc.clone();
    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    for pos in (0..n.saturating_sub(1)).rev() {
        let step = balance_step(curve, ord, &class, pol, pos)?;
        coeffs[ord.component_at(pos)] = step.twist;
        class = step.class;
        steps.push(step.record);
    }

    let divisor = TwistDivisor::new(curve, &coeffs)?;
    assert_eq!(
        twist(curve, bc, &divisor)?,
        class,
        "stepwise twists compose to the total twist"
    );
    assert!(
        lambda_check(curve, ord, &class, pol)?.pass,
        "balanced class passes every window"
    );
    Ok(BalanceResult {
        ordering: ord.ids(curve),
        twist: divisor,
        class,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexDistance {
    pub index: usize,
    pub component: u32,
    #[serde(with = "rational")]
    pub distance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnbalanceReport {
    pub distances: Vec<IndexDistance>,
    pub balanced: bool,
}

/// Distance from each `S_i` to its window along the default pruning order.
pub fn unbalance_report(
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    pol: &Polarization,
) -> Result<UnbalanceReport> {
    let report = lambda_check(curve, &prune_ordering(curve), bc, pol)?;
    Ok(UnbalanceReport {
        balanced: report.pass,
        distances: report
            .indices
            .iter()
            .map(|v| IndexDistance {
                index: v.index,
                component: v.component,
                distance: v.distance(),
            })
            .collect(),
    })
}

/// `true` when `(S - L)` is an integer multiple of `r`, i.e. both window
/// endpoints are reachable.
pub fn two_solutions(value: i64, lower: Rational, rank: u32) -> bool {
    let excess = int(value) - lower;
    excess.is_integer() && excess.to_integer().is_multiple_of(&(rank as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn path_ab() -> TreeLikeCurve {
        TreeLikeCurve::path(&[1, 1]).unwrap()
    }

    #[test]
    fn single_step_on_two_components() {
        let c = path_ab();
        let ord = prune_ordering(&c);
        let bc = BundleClass::new(&c, 2, &[5, -1]).unwrap();
        let pol = Polarization::uniform(&c);
        let step = balance_step(&c, &ord, &bc, &pol, 0).unwrap();
        assert_eq!(step.record.candidates, vec![1, 2]);
        assert_eq!(step.twist, 1);
        assert_eq!(step.class.degrees(&c), vec![3, 1]);
        assert_eq!(step.record.value_after, 3);
    }

    #[test]
    fn zero_twist_when_already_balanced_at_top() {
        // S = 3 sits on the upper endpoint of [1,3]: candidates {0, 1}.
        let c = path_ab();
        let ord = prune_ordering(&c);
        let bc = BundleClass::new(&c, 2, &[3, 1]).unwrap();
        let step = balance_step(&c, &ord, &bc, &Polarization::uniform(&c), 0).unwrap();
        assert_eq!(step.record.candidates, vec![0, 1]);
        assert_eq!(step.twist, 0);
    }

    #[test]
    fn endpoint_divisibility_gives_two_solutions() {
        // S - L = 2 = r with integral window: a ∈ {0, 1}; smaller wins.
        let c = path_ab();
        let ord = prune_ordering(&c);
        let bc = BundleClass::new(&c, 2, &[3, 1]).unwrap();
        let pol = Polarization::uniform(&c);
        let step = balance_step(&c, &ord, &bc, &pol, 0).unwrap();
        let rec = &step.record;
        assert!(two_solutions(rec.value, rec.lower, 2));
        // Window with non-integral lower end has a single solution.
        let pol = Polarization::new(&c, &[Rational::new(1, 3), Rational::new(2, 3)]).unwrap();
        let step = balance_step(&c, &ord, &bc, &pol, 0).unwrap();
        assert_eq!(step.record.candidates.len(), 1);
        assert!(!two_solutions(step.record.value, step.record.lower, 2));
    }

    #[test]
    fn balance_two_components() {
        let c = path_ab();
        let bc = BundleClass::new(&c, 2, &[5, -1]).unwrap();
        let out = balance(&c, &bc, &Polarization::uniform(&c)).unwrap();
        assert_eq!(
            out.twist.coeffs.values().copied().collect::<Vec<_>>(),
            vec![1, 0]
        );
        assert_eq!(out.class.degrees(&c), vec![3, 1]);
        assert_eq!(out.steps.len(), 1);
    }

    #[test]
    fn balance_irreducible_is_noop() {
        let c = TreeLikeCurve::irreducible(2, 0);
        let bc = BundleClass::new(&c, 3, &[11]).unwrap();
        let out = balance(&c, &bc, &Polarization::uniform(&c)).unwrap();
        assert!(out.twist.is_zero());
        assert!(out.steps.is_empty());
        assert_eq!(out.class, bc);
    }

    #[test]
    fn precondition_enforced() {
        // Path 1-2-3 with order (1,3,2): position 2 (component 3) fails.
        let c = TreeLikeCurve::path(&[1, 1, 1]).unwrap();
        let ord = prune_ordering(&c);
        let bc = BundleClass::new(&c, 2, &[0, 0, 30]).unwrap();
        let pol = Polarization::uniform(&c);
        assert_eq!(
            balance_step(&c, &ord, &bc, &pol, 0).unwrap_err(),
            Error::PreconditionViolated(2)
        );
        assert!(matches!(
            balance_step(&c, &ord, &bc, &pol, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn unbalance_distances() {
        let c = path_ab();
        let pol = Polarization::uniform(&c);
        let before =
            unbalance_report(&c, &BundleClass::new(&c, 2, &[5, -1]).unwrap(), &pol).unwrap();
        assert_eq!(before.distances[0].distance, int(2));
        assert!(!before.balanced);
        let after = unbalance_report(&c, &BundleClass::new(&c, 2, &[3, 1]).unwrap(), &pol).unwrap();
        assert!(after.distances.iter().all(|d| d.distance.is_zero()));
        assert!(after.balanced);
    }
}
