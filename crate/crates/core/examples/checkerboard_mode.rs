//! The oscillating mode of the `p - 1` multipliers: its sup ratio decays
//! like `h`, so that pairing is not uniformly stable.

use isomortar::infsup::{checkerboard, checkerboard_start};
use isomortar::studies::least_squares_slope;

fn main() -> isomortar::Result<()> {
    for p in [2, 3, 10] {
        let rows = checkerboard(p, checkerboard_start(p), 5)?;
        for (h, r) in &rows {
            println!("p={p} h={h:.3e} ratio={r:.4e}");
        }
        let hs: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let rs: Vec<f64> = rows.iter().map(|r| r.1).collect();
        println!(
            "p={p} slope {:.3}",
            least_squares_slope(&rs, &hs, rs.len()).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
