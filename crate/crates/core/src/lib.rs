//! Numerical semistability for vector bundles on tree-like nodal curves.
//!
//! The crate works with discrete data only: dual graphs of curves whose
//! components meet in a tree, bundle classes given by rank and multidegree,
//! polarizations as positive rational weights, generalized parabolic bundle
//! numerics on a normalization, and matrices over truncated discrete
//! valuation rings `F_p[π]/(π^{n+1})`.
//!
//! ```
//! use nodal_stab::{balance, BundleClass, Polarization, TreeLikeCurve};
//!
//! let curve = TreeLikeCurve::path(&[1, 1]).unwrap();
//! let class = BundleClass::new(&curve, 2, &[5, -1]).unwrap();
//! let out = balance(&curve, &class, &Polarization::uniform(&curve)).unwrap();
//! assert_eq!(out.class.degrees(&curve), vec![3, 1]);
//! ```

pub mod balance;
pub mod cli;
pub mod curve;
pub mod dvr;
pub mod error;
pub mod field;
pub mod gpb;
pub mod rational;
pub mod stability;
pub mod twist;

pub use balance::{balance, balance_step, balance_with_ordering, BalanceResult, StepRecord};
pub use curve::{
    arithmetic_genus, decompose, prune_ordering, validate_curve, Component, CurveDocument,
    Decomposition, Ordering, TreeLikeCurve, ValidationReport,
};
pub use dvr::{TruncatedMatrix, TruncatedRing, TruncatedScalar};
pub use error::{Error, Result};
pub use field::Field;
pub use gpb::{GluingFlag, GpbClass};
pub use rational::Rational;
pub use stability::{lambda_check, AmpleDegrees, LambdaReport, Polarization};
pub use twist::{euler_char_total, twist, BundleClass, TwistDivisor};
