//! The Poisson-kernel closed form against the truncated power sum
//! (1/2π) Σ t^|m| tr(U^m A).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitrace::trace_formula::{abel_kernel_eval, abel_sum_direct, abel_tail_bound, AbelParams};
use unitrace::{corpus, ObservableFamily};

fn main() -> unitrace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = corpus::random_diag_phase(&mut rng, 3, (0.5, 2.0));
    let a = ObservableFamily::Constant { a: corpus::random_hermitian(&mut rng, 3) };
    println!("{:>6} {:>6} {:>8} {:>36} {:>10} {:>10}", "k", "t", "m_max", "closed form", "|diff|", "bound");
    for t in [0.5, 0.8, 0.95] {
        for m_max in [20, 80, 320] {
            let k = rng.gen_range(-10.0..10.0);
            let p = AbelParams::new(t, m_max)?;
            let closed = abel_kernel_eval(&f, &a, k, t)?;
            let direct = abel_sum_direct(&f, &a, k, &p)?;
            let bound = abel_tail_bound(3, a.norm_bound(&f), &p);
            println!("{k:>6.2} {t:>6} {m_max:>8} {:>36.14} {:>10.2e} {bound:>10.2e}", closed, (closed - direct).norm());
        }
    }
    Ok(())
}
