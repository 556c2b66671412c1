//! Curved interface approximated independently on both sides: matching
//! and non-matching meshes give the same rates despite the gap.

use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{run_convergence, Case};

fn main() -> isomortar::Result<()> {
    let levels = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    for name in ["wavy", "wavy-nonmatching"] {
        let case = Case::parse(name)?;
        for level in 0..levels {
            let gap = case.domain(3, level)?.interfaces()[0].gap;
            println!("{name} level {level}: interface gap {gap:.2e}");
        }
        let report = run_convergence(&case, MultiplierVariant::EqualOrderModified, 3, levels)?;
        report.write_csv(std::io::stdout())?;
        println!(
            "{name}: L2 slope {:.3}",
            report.l2_slopes().asymptotic.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
