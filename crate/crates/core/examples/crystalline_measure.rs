//! U(k) = diag(e^{ikℓ}) S: the Fourier side as an exponential sum with
//! frequencies n·ℓ, next to the atoms it is dual to. Writes the pair as JSON.

use std::path::PathBuf;

use unitrace::corpus;
use unitrace::measure::{build_measure, crystalline_expand, export_measure};

fn main() -> unitrace::Result<()> {
    let (f, a) = corpus::showcase_complex_witness();
    let terms = crystalline_expand(&f, &a, 3)?;
    println!("order  multi-index  frequency  coefficient");
    for t in terms.iter().filter(|t| t.order >= 0) {
        println!("{:>5}  {:>11}  {:>9.5}  {:.6}", t.order, format!("{:?}", t.multi_index), t.freq, t.coeff);
    }

    let mu = build_measure(&f, &a, 0.0, 15.0)?;
    println!("\natoms on [0, 15] (weights carry a real imaginary part):");
    for atom in mu.atoms() {
        println!("  k0 = {:>10.6}   w = {:.6}", atom.position, atom.weight);
    }

    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("crystalline.json"));
    export_measure(&mu, &terms, Some(&f.spec()), &path)?;
    println!("\nwrote {}", path.display());
    Ok(())
}
