//! The three Lagrange multiplier spaces on a slave face with eight spans.

use isomortar::spaces::{MultiplierSpace, MultiplierVariant};
use isomortar::splinecore::KnotVector;

fn main() -> isomortar::Result<()> {
    let p = 3;
    let trace = KnotVector::uniform(p, 8);
    println!("trace: degree {p}, dimension {}", trace.dim());
    for v in [
        MultiplierVariant::EqualOrderModified,
        MultiplierVariant::DEGREE_MINUS_ONE,
        MultiplierVariant::DEGREE_MINUS_TWO,
    ] {
        let m = MultiplierSpace::new(&trace, v, true, true)?;
        println!("{v}: degree {} dimension {}", m.degree(), m.dim());
        if v == MultiplierVariant::EqualOrderModified {
            println!("  alpha {:?}\n  beta {:?}", m.alpha(), m.beta());
            // The modified functions have a vanishing p-th derivative on the
            // end elements.
            let d = m.eval_derivative(0.05, p)?;
            println!("  p-th derivatives at t = 0.05: {d:?}");
        }
    }
    Ok(())
}
