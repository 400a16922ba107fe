//! Symmetric Cesàro means of u^m converge to the projection onto ker(u - I)
//! at rate 1/N.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use unitrace::trace_formula::cesaro_projection;
use unitrace::{corpus, ComplexMatrix};

fn main() -> unitrace::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (u, q) = corpus::unitary_with_phases(&mut rng, &[0.0, PI, PI / 2.0, -PI / 2.0]);
    let target = ComplexMatrix::outer(&q.column(0));
    println!("{:>8} {:>12} {:>10}", "N", "||P_N - P||", "N * err");
    for n in [10, 100, 1_000, 10_000] {
        let err = (&cesaro_projection(&u, n)? - &target).frobenius_norm();
        println!("{n:>8} {err:>12.3e} {:>10.4}", err * n as f64);
    }
    Ok(())
}
