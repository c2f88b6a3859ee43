//! Evaluating the λ-semistability windows, with uniform weights and with
//! weights coming from ample degrees.
//!
//! Run with `cargo run --example lambda_windows`.

use nodal_stab::stability::{polarization_from_ample, seshadri_slope};
use nodal_stab::{
    lambda_check, prune_ordering, AmpleDegrees, BundleClass, Polarization, TreeLikeCurve,
};

fn show(
    label: &str,
    curve: &TreeLikeCurve,
    bc: &BundleClass,
    pol: &Polarization,
) -> nodal_stab::Result<()> {
    let report = lambda_check(curve, &prune_ordering(curve), bc, pol)?;
    println!(
        "{label}: χ = {}, slope = {}",
        report.chi,
        seshadri_slope(curve, bc, pol)?
    );
    for v in &report.indices {
        println!(
            "  i={} (component {}): {} ≤ S={} ≤ {}  {}",
            v.index,
            v.component,
            v.lower,
            v.value,
            v.upper,
            if v.pass { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}

fn main() -> nodal_stab::Result<()> {
    let curve = TreeLikeCurve::path(&[1, 1])?;
    let bc = BundleClass::new(&curve, 2, &[3, 1])?;
    show("uniform", &curve, &bc, &Polarization::uniform(&curve))?;

    let ample = AmpleDegrees::new(&curve, &[1, 2])?;
    show(
        "ample (1,2)",
        &curve,
        &bc,
        &polarization_from_ample(&ample)?,
    )?;
    Ok(())
}
