//! Cox–de Boor evaluation, partition of unity and knot insertion on one
//! open knot vector.

use isomortar::splinecore::KnotVector;

fn main() -> isomortar::Result<()> {
    let kv = KnotVector::new(2, vec![0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0])?;
    println!(
        "dim {} elements {} greville {:?}",
        kv.dim(),
        kv.num_elements(),
        kv.greville()
    );
    for t in [0.0, 0.3, 0.5, 0.9, 1.0] {
        let b = kv.eval_basis(t, 1)?;
        let sum: f64 = b.values().iter().sum();
        println!(
            "t={t:.1} basis {:?} derivatives {:?} sum {sum:.15}",
            b.values(),
            b.derivative(1)
        );
    }
    // Inserting a knot keeps the curve unchanged.
    let coeffs = [0.0, 1.0, -1.0, 2.0];
    let (fine, fine_coeffs) = kv.insert_knot(&coeffs, 0.25)?;
    for t in [0.1, 0.4, 0.8] {
        println!(
            "t={t:.1} coarse {:.15} refined {:.15}",
            kv.eval_spline(&coeffs, t)?,
            fine.eval_spline(&fine_coeffs, t)?
        );
    }
    Ok(())
}
