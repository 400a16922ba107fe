use std::f64::consts::PI;

use num_complex::Complex64;

use super::{inner, vec_norm, ComplexMatrix, ZERO};
use crate::error::Result;

/// One eigenvalue `e^{iθ}` of a unitary matrix with a unit eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// θ in (-π, π].
    pub phase: f64,
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

const MAX_SWEEPS: usize = 100;

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order (stable with respect to pivot
/// order on ties) and the matching unit eigenvectors as columns. Only the
/// Hermitian part of `h` is used.
pub fn eigh(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.dim();
    let mut a = (h + &h.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut q = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-18 * scale {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for r in p + 1..n {
                rotated |= rotate(&mut a, &mut q, p, r, scale);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &q.column(src));
    }
    (values, vectors)
}

// Annihilates a[p][r] with the unitary G = diag(1, e^{-iφ}) · R(c, s)
// acting on coordinates (p, r). Returns false when the entry is negligible.
fn rotate(a: &mut ComplexMatrix, q: &mut ComplexMatrix, p: usize, r: usize, scale: f64) -> bool {
    let n = a.dim();
    let apr = a[(p, r)];
    let mag = apr.norm();
    if mag <= 1e-21 * scale {
        a[(p, r)] = ZERO;
        a[(r, p)] = ZERO;
        return false;
    }
    let app = a[(p, p)].re;
    let arr = a[(r, r)].re;
    let theta = (arr - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = (apr / mag).conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pr = Complex64::new(s, 0.0);
    let g_rp = e * -s;
    let g_rr = e * c;

    for i in 0..n {
        let xp = a[(i, p)];
        let xr = a[(i, r)];
        a[(i, p)] = xp * g_pp + xr * g_rp;
        a[(i, r)] = xp * g_pr + xr * g_rr;
    }
    for j in 0..n {
        let xp = a[(p, j)];
        let xr = a[(r, j)];
        a[(p, j)] = g_pp.conj() * xp + g_rp.conj() * xr;
        a[(r, j)] = g_pr.conj() * xp + g_rr.conj() * xr;
    }
    a[(p, r)] = ZERO;
    a[(r, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);

    for i in 0..n {
        let xp = q[(i, p)];
        let xr = q[(i, r)];
        q[(i, p)] = xp * g_pp + xr * g_rp;
        q[(i, r)] = xp * g_pr + xr * g_rr;
    }
    true
}

// cos-eigenvalues closer than this are resolved by the sin part instead.
const CLUSTER_TOL: f64 = 1e-8;
// Residual above which the spectrum is re-solved after a rotation e^{-iα}.
const POLISH_TRIGGER: f64 = 1e-12;

/// Eigendecomposition of a unitary matrix.
///
/// The Hermitian part `H = (u + u^H)/2` is diagonalized by Jacobi
/// rotations; within each cluster of (numerically) equal `cos θ` the
/// anti-Hermitian part `K = (u - u^H)/2i` separates `e^{iθ}` from
/// `e^{-iθ}`. Eigenvalues whose cosines nearly coincide without being
/// equal (θ₁ ≈ -θ₂) leave the first pass inaccurate; in that case the
/// whole procedure is repeated on `e^{-iα} u` with α chosen away from every
/// pairwise midpoint `(θᵢ + θⱼ)/2 mod π`.
///
/// Pairs are sorted by phase. Degenerate eigenvalues come back as some
/// orthonormal basis of their eigenspace, in pivot order (not canonical).
pub fn eig_unitary(u: &ComplexMatrix) -> Result<Vec<EigenPair>> {
    u.check_unitary()?;
    let first = resolve(u, 0.0);
    if max_residual(u, &first) <= POLISH_TRIGGER {
        return Ok(first);
    }
    let alpha = separating_rotation(&first);
    let second = resolve(u, alpha);
    if max_residual(u, &second) < max_residual(u, &first) {
        Ok(second)
    } else {
        Ok(first)
    }
}

fn resolve(u: &ComplexMatrix, alpha: f64) -> Vec<EigenPair> {
    let n = u.dim();
    let w = u.scale(Complex64::from_polar(1.0, -alpha));
    let wh = w.adjoint();
    let h = (&w + &wh).scale(Complex64::new(0.5, 0.0));
    let k = (&w - &wh).scale(Complex64::new(0.0, -0.5));
    let (cosines, q) = eigh(&h);

    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end] - cosines[end - 1] <= CLUSTER_TOL {
            end += 1;
        }
        if end - start == 1 {
            vectors.push(q.column(start));
        } else {
            let basis: Vec<Vec<Complex64>> = (start..end).map(|j| q.column(j)).collect();
            let m = basis.len();
            let mut restricted = ComplexMatrix::zeros(m);
            for (a, va) in basis.iter().enumerate() {
                let kv = k.apply(va);
                for (b, vb) in basis.iter().enumerate() {
                    restricted[(b, a)] = inner(vb, &kv);
                }
            }
            let (_, rot) = eigh(&restricted);
            for col in 0..m {
                let mut v = vec![ZERO; n];
                for (a, va) in basis.iter().enumerate() {
                    let coef = rot[(a, col)];
                    for (dst, &x) in v.iter_mut().zip(va) {
                        *dst += coef * x;
                    }
                }
                vectors.push(v);
            }
        }
        start = end;
    }

    let mut pairs: Vec<EigenPair> = vectors
        .into_iter()
        .map(|mut v| {
            let norm = vec_norm(&v);
            for z in v.iter_mut() {
                *z /= norm;
            }
            let rayleigh = u.expectation(&v);
            let phase = principal_phase(rayleigh.arg());
            EigenPair {
                phase,
                value: Complex64::from_polar(1.0, phase),
                vector: v,
            }
        })
        .collect();
    pairs.sort_by(|a, b| a.phase.total_cmp(&b.phase));
    pairs
}

fn max_residual(u: &ComplexMatrix, pairs: &[EigenPair]) -> f64 {
    pairs
        .iter()
        .map(|p| {
            let uv = u.apply(&p.vector);
            let r: Vec<Complex64> = uv.iter().zip(&p.vector).map(|(a, b)| a - p.value * b).collect();
            vec_norm(&r)
        })
        .fold(0.0, f64::max)
}

// Picks α maximizing the distance (mod π) to every midpoint of two
// distinct phases; those midpoints are exactly where cos(θ - α) collides.
fn separating_rotation(pairs: &[EigenPair]) -> f64 {
    let mut bad = Vec::new();
    for (i, a) in pairs.iter().enumerate() {
        for b in &pairs[i + 1..] {
            if (a.value - b.value).norm() > 1e-6 {
                bad.push(((a.phase + b.phase) / 2.0).rem_euclid(PI));
            }
        }
    }
    if bad.is_empty() {
        return 0.0;
    }
    bad.sort_by(f64::total_cmp);
    let mut best = (0.0, -1.0);
    for (i, &x) in bad.iter().enumerate() {
        let next = if i + 1 < bad.len() { bad[i + 1] } else { bad[0] + PI };
        let gap = next - x;
        if gap > best.1 {
            best = (x + gap / 2.0, gap);
        }
    }
    best.0
}

/// Maps an angle into (-π, π].
pub fn principal_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}
