//! Twisting a bundle class until every window holds, with the step log.
//!
//! Run with `cargo run --example balance_twist`.

use nodal_stab::{
    balance, lambda_check, prune_ordering, BundleClass, Polarization, Rational, TreeLikeCurve,
};

fn main() -> nodal_stab::Result<()> {
    // Star with a genus-2 centre and three elliptic arms.
    let curve = TreeLikeCurve::new(
        (1..=4)
            .map(|id| nodal_stab::Component::new(id, if id == 1 { 2 } else { 1 }, 0))
            .collect(),
        &[[1, 2], [1, 3], [1, 4]],
    )?;
    let bc = BundleClass::new(&curve, 3, &[-12, 9, 14, 1])?;
    let pol = Polarization::new(
        &curve,
        &[
            Rational::new(2, 5),
            Rational::new(1, 5),
            Rational::new(1, 5),
            Rational::new(1, 5),
        ],
    )?;

    let before = lambda_check(&curve, &prune_ordering(&curve), &bc, &pol)?;
    println!("before: {} failing windows", before.failing().count());

    let out = balance(&curve, &bc, &pol)?;
    for step in &out.steps {
        println!(
            "step i={} (component {}): S={}, window [{}, {}], candidates {:?}, a={}, S after={}",
            step.index,
            step.component,
            step.value,
            step.lower,
            step.upper,
            step.candidates,
            step.chosen,
            step.value_after
        );
    }
    println!("twist {:?}", out.twist.coeffs);
    println!("balanced multidegree {:?}", out.class.multidegree);
    let after = lambda_check(&curve, &prune_ordering(&curve), &out.class, &pol)?;
    println!("after: pass = {}", after.pass);
    Ok(())
}
