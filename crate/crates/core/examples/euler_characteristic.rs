//! Riemann–Roch per component, the node correction, and fibral twists.
//!
//! Run with `cargo run --example euler_characteristic`.

use nodal_stab::twist::{chi_subcurve_sum, euler_char_component, intersection_matrix};
use nodal_stab::{euler_char_total, twist, BundleClass, TreeLikeCurve, TwistDivisor};

fn main() -> nodal_stab::Result<()> {
    let curve = TreeLikeCurve::path(&[1, 0, 2])?;
    let bc = BundleClass::new(&curve, 2, &[5, -1, 3])?;

    println!("intersection matrix:");
    for row in intersection_matrix(&curve) {
        println!("  {row:?}");
    }
    for idx in 0..curve.len() {
        println!(
            "χ on component {} = {}",
            curve.id(idx),
            euler_char_component(&curve, &bc, idx)?
        );
    }
    println!("χ total = {}", euler_char_total(&curve, &bc)?);

    // A twist supported on the middle component moves degree to its
    // neighbours but keeps χ fixed.
    let t = TwistDivisor::new(&curve, &[0, 1, 0])?;
    let moved = twist(&curve, &bc, &t)?;
    println!(
        "after O(Y_2): multidegree {:?}, χ total = {}",
        moved.degrees(&curve),
        euler_char_total(&curve, &moved)?
    );
    println!(
        "χ over the whole curve before/after: {} / {}",
        chi_subcurve_sum(&curve, &bc, &[0, 1, 2])?,
        chi_subcurve_sum(&curve, &moved, &[0, 1, 2])?
    );
    Ok(())
}
