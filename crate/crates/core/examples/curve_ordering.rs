//! Leaf-pruning order of a small tree and the decomposition it induces.
//!
//! Run with `cargo run --example curve_ordering`.

use nodal_stab::{decompose, prune_ordering, validate_curve, Component, TreeLikeCurve};

fn main() -> nodal_stab::Result<()> {
    // A genus-2 component with two elliptic tails and a nodal rational
    // bridge hanging off one of them.
    let curve = TreeLikeCurve::new(
        vec![
            Component::new(1, 2, 0),
            Component::new(2, 1, 0),
            Component::new(3, 1, 0),
            Component::new(4, 0, 1),
        ],
        &[[1, 2], [1, 3], [3, 4]],
    )?;

    let report = validate_curve(&curve.to_document())?;
    println!(
        "{} components, {} nodes between them, arithmetic genus {}",
        report.components, report.edges, report.arithmetic_genus
    );

    let ord = prune_ordering(&curve);
    println!("ordering: {:?}", ord.ids(&curve));
    for pos in 0..curve.len() {
        let parts = decompose(&curve, &ord, pos)?;
        let ids = |v: &[usize]| v.iter().map(|&i| curve.id(i)).collect::<Vec<_>>();
        println!(
            "  Y_{} = component {}: G = {:?}, B = {:?}, next = {:?}",
            pos + 1,
            curve.id(ord.component_at(pos)),
            ids(&parts.good),
            ids(&parts.bad),
            ord.next(pos).map(|q| curve.id(ord.component_at(q))),
        );
    }
    Ok(())
}
