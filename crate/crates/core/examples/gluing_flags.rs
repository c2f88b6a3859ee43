//! Parabolic slopes, the rational-normalization gluing flag over several
//! fields, and r-th roots of gluing scalars.
//!
//! Run with `cargo run --example gluing_flags`.

use nodal_stab::gpb::{
    build_rational_flag, check_no_kernel_section, check_projections, gpb_subbundle_check,
    parabolic_slope, phi_rank_degree, picard_rth_root, SubbundleNumerics,
};
use nodal_stab::{Field, GpbClass};

fn main() -> nodal_stab::Result<()> {
    let g = GpbClass::canonical(2, 3, 1)?;
    let phi = phi_rank_degree(&g, 2)?;
    println!(
        "rank 2, degree 3, one node, genus 2: par μ = {}, χ(φ) = {}, deg φ = {}",
        parabolic_slope(&g)?,
        phi.chi,
        phi.degree
    );
    let sub = SubbundleNumerics {
        rank: 1,
        degree: 1,
        flag_dims: vec![1],
    };
    let v = gpb_subbundle_check(&g, &sub)?;
    println!(
        "line subbundle of degree 1: slope {} vs {} ({:?})",
        v.sub_slope, v.ambient_slope, v.relation
    );

    for field in ["Q", "F2", "F3", "F7"] {
        let field: Field = field.parse()?;
        for r in 2..=5 {
            match build_rational_flag(field, r, 2 * r as i64, 1) {
                Ok(flag) => {
                    let ok = check_projections(&flag).locally_free
                        && check_no_kernel_section(&flag).pass;
                    println!("{field} r={r}: locally free = {ok}");
                }
                Err(e) => println!("{field} r={r}: {e}"),
            }
        }
    }

    let f7 = Field::Prime(7);
    let scalars = [f7.from_i64(6), f7.from_i64(1)];
    match picard_rth_root(f7, 3, &scalars) {
        Ok(roots) => println!("cube roots in F7 of 6 and 1: {}, {}", roots[0], roots[1]),
        Err(e) => println!("{e}"),
    }
    if let Err(e) = picard_rth_root(f7, 2, &[f7.from_i64(3)]) {
        println!("square root of 3 in F7: {e}");
    }
    Ok(())
}
