//! Characteristic polynomial, Newton identities, and the remainder
//! R = h(1)·Σ_{|j|≤N} tr U^j that stays bounded while the partial sums do not.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitrace::newton::{cayley_hamilton_residual, char_poly, newton_residual, remainder_sweep};
use unitrace::corpus;

fn main() -> unitrace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = corpus::random_diag_phase(&mut rng, 3, (0.5, 2.0));
    let u = f.evaluate(1.0);
    let cp = char_poly(&u)?;
    println!("h(λ) coefficients c0..c3 at k = 1:");
    for (i, c) in cp.coeffs().iter().enumerate() {
        println!("  c{i} = {c:.12}");
    }
    let worst = (-50..=50).map(|j| newton_residual(&u, j)).collect::<unitrace::Result<Vec<_>>>()?;
    println!("max Newton residual over j in [-50, 50]: {:.2e}", worst.iter().cloned().fold(0.0, f64::max));
    println!("Cayley-Hamilton residual: {:.2e}", cayley_hamilton_residual(&u)?);

    // approach the first crossing: partial sums grow, R does not
    let k0 = unitrace::spectral_flow::find_crossings(&f, 0.5, 10.0, f.default_step())?[0].k0;
    println!("\nfirst crossing at k0 = {k0:.9}");
    println!("{:>10} {:>8} {:>14} {:>10}", "k - k0", "N", "|partial sum|", "|R|");
    for offset in [1e-1, 1e-2, 1e-3] {
        for s in remainder_sweep(&f, k0 + offset, &[10, 100, 1000])? {
            println!("{offset:>10.0e} {:>8} {:>14.4} {:>10.4}", s.n, s.partial_sum.norm(), s.remainder.norm());
        }
    }
    Ok(())
}
