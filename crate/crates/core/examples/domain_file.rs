//! Loads a JSON domain with a `problem` section and runs a refinement study.
//!
//! `cargo run --example domain_file -- examples/data/quarter_annulus.json 3`

use isomortar::geometry::DomainFile;
use isomortar::spaces::MultiplierVariant;
use isomortar::studies::{run_convergence, Case};

fn main() -> isomortar::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/examples/data/two_squares.json"
        )
        .into()
    });
    let degree = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let file = DomainFile::load(&path)?;
    let domain = file.to_domain()?;
    println!(
        "{path}: {} patches, {} interfaces",
        domain.patches().len(),
        domain.interfaces().len()
    );
    let report = run_convergence(
        &Case::File(Box::new(file)),
        MultiplierVariant::EqualOrderModified,
        degree,
        4,
    )?;
    report.write_csv(std::io::stdout())?;
    Ok(())
}
