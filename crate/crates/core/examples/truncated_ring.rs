//! The kernel layer of `GL(r, F_p[π]/(π^{n+1}))`: the determinant–trace
//! identity, the SL-kernel criterion, and a determinant correction.
//!
//! Run with `cargo run --example truncated_ring`.

use nodal_stab::dvr::{det_trace_identity, kernel_layer_element, sl_kernel_check, torsor_correct};
use nodal_stab::{Field, TruncatedMatrix, TruncatedRing};

fn main() -> nodal_stab::Result<()> {
    let f5 = Field::Prime(5);
    let a = vec![vec![1, 2], vec![3, 4]];
    let report = det_trace_identity(f5, &a, 1)?;
    println!(
        "{}: det(I + πA) = {:?}, 1 + π tr A = {:?}",
        report.ring,
        report.det.coeffs(),
        report.one_plus_trace.coeffs()
    );

    let ring = TruncatedRing::new(f5, 1)?;
    for b in [a.clone(), vec![vec![1, 0], vec![0, 0]]] {
        let m = kernel_layer_element(ring, &b)?;
        let v = sl_kernel_check(&m)?;
        println!(
            "B = {b:?}: det = 1 {}, trace-free {}, in kernel {}",
            v.det_is_one, v.trace_condition, v.in_kernel
        );
    }

    // Correct the determinant of a cochain entry by γ = 1 + 3π².
    let ring = TruncatedRing::new(Field::Prime(7), 2)?;
    let f = TruncatedMatrix::from_coeffs(
        ring,
        &[
            vec![vec![2, 1, 0], vec![0, 0, 1]],
            vec![vec![1, 0, 0], vec![4, 0, 3]],
        ],
    )?;
    let gamma = ring.scalar(&[1, 0, 3])?;
    let corrected = torsor_correct(std::slice::from_ref(&f), std::slice::from_ref(&gamma))?;
    println!(
        "det F = {:?}, γ·det F = {:?}, det(ΓF) = {:?}",
        f.det().coeffs(),
        (&gamma * &f.det()).coeffs(),
        corrected[0].det().coeffs()
    );
    Ok(())
}
