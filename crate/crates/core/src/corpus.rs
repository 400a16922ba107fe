//! Seeded random matrices and families used by tests, examples and the
//! `random_diag_phase` config variant.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::family::{ObservableFamily, UnitaryFamily};
use crate::linalg::{inner, vec_norm, ComplexMatrix};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Entries i.i.d. standard complex Gaussian.
pub fn random_matrix(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_vec(n, data).expect("finite gaussian entries")
}

/// Haar-distributed unitary: Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let norm = vec_norm(&v);
        for x in v.iter_mut() {
            *x /= norm;
        }
        cols.push(v);
    }
    let mut out = ComplexMatrix::zeros(n);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// `Q diag(e^{iθ}) Q^H` for a random unitary `Q`; returns the matrix and `Q`.
pub fn unitary_with_phases(rng: &mut impl Rng, phases: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let q = random_unitary(rng, phases.len());
    let diag: Vec<Complex64> = phases.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    (ComplexMatrix::conjugate_diag(&q, &diag), q)
}

/// DiagPhase family with lengths uniform in `range` and Haar-random `S`.
pub fn random_diag_phase(rng: &mut impl Rng, n: usize, range: (f64, f64)) -> UnitaryFamily {
    let lengths = (0..n).map(|_| rng.gen_range(range.0..range.1)).collect();
    UnitaryFamily::diag_phase(lengths, random_unitary(rng, n)).expect("valid random family")
}

/// The shipped complex-coefficient showcase: `ℓ = (1, √2)`,
/// `S = [[cos 0.6, i sin 0.6], [i sin 0.6, cos 0.6]]`, `A = diag(1, i)`.
/// Its atoms carry weights with a substantial imaginary part.
pub fn showcase_complex_witness() -> (UnitaryFamily, ObservableFamily) {
    let (s, c) = 0.6f64.sin_cos();
    let smat = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(c, 0.0), Complex64::new(0.0, s)],
        vec![Complex64::new(0.0, s), Complex64::new(c, 0.0)],
    ])
    .expect("2x2");
    let family = UnitaryFamily::diag_phase(vec![1.0, std::f64::consts::SQRT_2], smat).expect("unitary S");
    let a = ComplexMatrix::from_diag(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
    (family, ObservableFamily::Constant { a })
}
