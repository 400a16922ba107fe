//! With A = U' and a positive generator every weight is exactly i: the
//! measure divided by 2πi is the unit comb on the crossings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitrace::measure::build_measure;
use unitrace::{corpus, ObservableFamily};

fn main() -> unitrace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [2, 3, 4] {
        let f = corpus::random_diag_phase(&mut rng, n, (0.5, 2.0));
        let mu = build_measure(&f, &ObservableFamily::DerivativeOfU, 0.0, 20.0)?;
        let worst = mu.atoms().iter().map(|a| (a.weight.arg() - std::f64::consts::FRAC_PI_2).abs()).fold(0.0, f64::max);
        println!("n = {n}: {:>3} atoms on [0, 20], max |arg w - pi/2| = {worst:.1e}", mu.len());
    }
    Ok(())
}
