//! The trace formula needs simple, transversal crossings. Families that break
//! this are refused with a specific error instead of a number.

use unitrace::measure::build_measure;
use unitrace::{ComplexMatrix, ObservableFamily, UnitaryFamily};

fn main() -> unitrace::Result<()> {
    // two eigenphases reach 2π together
    let degenerate = UnitaryFamily::diag_phase(vec![1.0, 1.0], ComplexMatrix::identity(2))?;
    match build_measure(&degenerate, &ObservableFamily::Identity, 1.0, 10.0) {
        Err(e) => println!("degenerate crossing: {e}"),
        Ok(mu) => println!("unexpected: {} atoms", mu.len()),
    }

    // one eigenvalue sits at 1 for every k
    let frozen = UnitaryFamily::exp_path(ComplexMatrix::from_real_diag(&[0.0, 1.0]), ComplexMatrix::identity(2))?;
    match build_measure(&frozen, &ObservableFamily::Identity, 0.5, 3.0) {
        Err(e) => println!("zero speed: {e}"),
        Ok(mu) => println!("unexpected: {} atoms", mu.len()),
    }
    Ok(())
}
