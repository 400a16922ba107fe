//! At a crossing the eigenvalue moves with velocity <v|U'|v>; compare with a
//! finite difference of the tracked eigenvalue.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitrace::linalg::{eig_unitary, inner};
use unitrace::spectral_flow::find_crossings;
use unitrace::{corpus, Complex64};

fn main() -> unitrace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = corpus::random_diag_phase(&mut rng, 3, (0.5, 2.0));
    let h = 1e-5;
    println!("{:>12} {:>28} {:>10}", "k0", "<v|U'|v>", "fd rel err");
    for c in find_crossings(&f, 0.0, 12.0, f.default_step())? {
        let eigenvalue_near = |k: f64| -> unitrace::Result<Complex64> {
            let pairs = eig_unitary(&f.evaluate(k))?;
            let best = pairs
                .into_iter()
                .max_by(|p, q| inner(&p.vector, &c.eigvec).norm().total_cmp(&inner(&q.vector, &c.eigvec).norm()))
                .expect("non-empty spectrum");
            Ok(best.value)
        };
        let fd = (eigenvalue_near(c.k0 + h)? - eigenvalue_near(c.k0 - h)?) / (2.0 * h);
        println!("{:>12.9} {:>28.12} {:>10.2e}", c.k0, c.speed, (c.speed - fd).norm() / fd.norm());
    }
    Ok(())
}
