//! Re-entrant corner: rates limited by the `r^{2/3}` singularity.

use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{run_convergence, Case};

fn main() -> isomortar::Result<()> {
    let levels = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let report = run_convergence(
        &Case::Corner,
        MultiplierVariant::EqualOrderModified,
        4,
        levels,
    )?;
    report.write_csv(std::io::stdout())?;
    let v = report.broken_v_slopes().asymptotic.unwrap_or(f64::NAN);
    println!("broken V slope {v:.3} (regularity limit 2/3)");
    for l in 0..report.rows[0].dual_l2.len() {
        println!(
            "interface {l}: dual slope {:.3}",
            report.dual_slopes(l).asymptotic.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
