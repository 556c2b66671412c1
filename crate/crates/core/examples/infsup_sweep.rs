//! Inf-sup constants of the multiplier spaces on refined interval meshes.

use isomortar::infsup::{sweep, BcMode, SweepConfig};

fn main() -> isomortar::Result<()> {
    for bc in [BcMode::Free, BcMode::Dirichlet] {
        let config = SweepConfig {
            bc,
            ..SweepConfig::default()
        };
        let result = sweep(&config)?;
        println!("bc {bc:?}");
        result.write_csv(std::io::stdout())?;
        for &p in &config.degrees {
            for &v in &config.variants {
                if let Some(var) = result.variation(p, v) {
                    println!("  p={p} {v}: variation {:.1}%", 100.0 * var);
                }
            }
        }
    }
    Ok(())
}
