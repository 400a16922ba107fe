//! U(k) = e^{2πik} puts one atom on every integer, so pairing the measure
//! with a Gaussian is Poisson summation.

use std::f64::consts::PI;

use unitrace::measure::{build_measure, pair_measure, GaussianTestFunction};
use unitrace::{Complex64, ComplexMatrix, ObservableFamily, UnitaryFamily};

fn main() -> unitrace::Result<()> {
    let f = UnitaryFamily::scalar(2.0 * PI)?;
    // the speed is 2π at every atom; A = 2π makes each weight 1
    let a = ObservableFamily::Constant { a: ComplexMatrix::from_real_diag(&[2.0 * PI]) };

    println!("{:>8} {:>6} {:>22} {:>22} {:>10}", "center", "width", "sum w g(k0)", "sum_m g(m)", "|diff|");
    for (center, width) in [(0.0, 0.3), (0.25, 0.5), (-1.7, 1.0), (3.1, 2.0)] {
        let g = GaussianTestFunction::new(center, width, Complex64::new(1.0, 0.0))?;
        let (lo, hi) = g.window();
        let mu = build_measure(&f, &a, lo, hi)?;
        let lhs = pair_measure(&mu, &g)?;
        let direct: Complex64 = (-100..=100).map(|m| g.eval(m as f64)).sum();
        println!("{center:>8.2} {width:>6.2} {:>22.15} {:>22.15} {:>10.2e}", lhs.re, direct.re, (lhs - direct).norm());
    }
    Ok(())
}
