//! Both sides of the trace formula along t -> 1 for the complex-weight
//! showcase family.

use unitrace::measure::{verify_trace_formula, GaussianTestFunction};
use unitrace::{corpus, Complex64};

fn main() -> unitrace::Result<()> {
    let (f, a) = corpus::showcase_complex_witness();
    for (center, width) in [(6.3, 1.5), (10.0, 1.0)] {
        let g = GaussianTestFunction::new(center, width, Complex64::new(1.0, 0.0))?;
        let rep = verify_trace_formula(&f, &a, &g, &[0.9, 0.99, 0.999])?;
        println!("g centered at {center}, width {width}: {} atoms in window", rep.n_atoms);
        for row in &rep.rows {
            println!("  t = {:<6} abel side {:.10}   atoms {:.10}   |diff| {:.3e}", row.t, row.lhs, row.rhs, row.abs_err);
        }
        println!(
            "  extrapolated t -> 1: {:.10}; rel err {:.2e} vs threshold {:.1e}: {}",
            rep.extrapolated,
            rep.rel_err,
            rep.threshold,
            if rep.pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(())
}
