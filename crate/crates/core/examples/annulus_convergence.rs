//! L² rates on the two-patch quarter annulus for equal-order multipliers.

use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{run_convergence, Case};

fn main() -> isomortar::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let levels = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let nonmatching = args.iter().any(|a| a == "--nonmatching");
    for p in [2, 3, 4] {
        let start = std::time::Instant::now();
        let report = run_convergence(
            &Case::Annulus { nonmatching },
            MultiplierVariant::EqualOrderModified,
            p,
            levels,
        )?;
        println!("P{p}/P{p} ({:.1?})", start.elapsed());
        report.write_csv(std::io::stdout())?;
        println!(
            "asymptotic L2 slope {:.3}",
            report.l2_slopes().asymptotic.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
