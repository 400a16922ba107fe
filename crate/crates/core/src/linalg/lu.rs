use num_complex::Complex64;

use super::{vec_norm, ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Determinant by LU with partial (row) pivoting.
pub fn determinant(a: &ComplexMatrix) -> Complex64 {
    let n = a.dim();
    if n == 1 {
        return a[(0, 0)];
    }
    let mut m = a.clone();
    let mut det = ONE;
    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&x, &y| m[(x, k)].norm().total_cmp(&m[(y, k)].norm()))
            .unwrap();
        if m[(pivot_row, k)] == ZERO {
            return ZERO;
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(pivot_row, j)];
                m[(pivot_row, j)] = tmp;
            }
            det = -det;
        }
        let pivot = m[(k, k)];
        det *= pivot;
        for i in k + 1..n {
            let l = m[(i, k)] / pivot;
            if l == ZERO {
                continue;
            }
            for j in k + 1..n {
                let v = m[(k, j)];
                m[(i, j)] -= l * v;
            }
        }
    }
    det
}

/// Rank tolerance used when callers have no better scale: `1e-8 ||m||_F`.
pub fn default_rank_tol(m: &ComplexMatrix) -> f64 {
    1e-8 * m.frobenius_norm()
}

// P m Q = L U with L unit lower triangular (stored below the diagonal).
struct FullPivotLu {
    lu: ComplexMatrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl FullPivotLu {
    fn factor(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut lu = m.clone();
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (mut pi, mut pj, mut best) = (k, k, -1.0);
            for i in k..n {
                for j in k..n {
                    let v = lu[(i, j)].norm();
                    if v > best {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if pi != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pi, j)];
                    lu[(pi, j)] = tmp;
                }
                rows.swap(k, pi);
            }
            if pj != k {
                for i in 0..n {
                    let tmp = lu[(i, k)];
                    lu[(i, k)] = lu[(i, pj)];
                    lu[(i, pj)] = tmp;
                }
                cols.swap(k, pj);
            }
            let pivot = lu[(k, k)];
            if pivot == ZERO {
                break;
            }
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= l * v;
                }
            }
        }
        FullPivotLu { lu, rows, cols }
    }

    fn pivots(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.lu.dim()).map(|k| self.lu[(k, k)].norm())
    }

    // Solves m y = x with the trailing pivot floored at `floor` so that a
    // (nearly) singular factorization still yields an inverse-iteration step.
    fn solve_floored(&self, x: &[Complex64], floor: f64) -> Vec<Complex64> {
        let n = self.lu.dim();
        let mut w: Vec<Complex64> = self.rows.iter().map(|&r| x[r]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let wj = w[j];
                w[i] -= l * wj;
            }
        }
        let mut z = vec![ZERO; n];
        for i in (0..n).rev() {
            let mut acc = w[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * z[j];
            }
            let mut d = self.lu[(i, i)];
            if d.norm() < floor {
                d = if d == ZERO { Complex64::new(floor, 0.0) } else { d / d.norm() * floor };
            }
            z[i] = acc / d;
        }
        let mut y = vec![ZERO; n];
        for (i, &c) in self.cols.iter().enumerate() {
            y[c] = z[i];
        }
        y
    }
}

/// Unit vector spanning the one-dimensional numerical kernel of `m`.
///
/// The rank decision counts elimination pivots (full pivoting) above
/// `tol`; anything other than exactly one small pivot is reported as
/// [`Error::RankDeficiency`]. The candidate from back substitution is
/// polished by one inverse-iteration step, and the phase is fixed so the
/// largest-magnitude entry is real and positive.
pub fn nullspace_vector(m: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let n = m.dim();
    let lu = FullPivotLu::factor(m);
    let rank = lu.pivots().filter(|&p| p > tol).count();
    let nullity = n - rank;
    if nullity != 1 {
        return Err(Error::RankDeficiency { nullity, tol });
    }

    // Back substitution on U z = 0 with the free (last) variable set to 1.
    let mut z = vec![ZERO; n];
    z[n - 1] = ONE;
    for i in (0..n - 1).rev() {
        let mut acc = ZERO;
        for j in i + 1..n {
            acc += lu.lu[(i, j)] * z[j];
        }
        z[i] = -acc / lu.lu[(i, i)];
    }
    let mut v = vec![ZERO; n];
    for (i, &c) in lu.cols.iter().enumerate() {
        v[c] = z[i];
    }
    normalize(&mut v);

    let floor = f64::EPSILON * m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut polished = lu.solve_floored(&v, floor);
    if polished.iter().all(|z| z.re.is_finite() && z.im.is_finite()) && vec_norm(&polished) > 0.0 {
        normalize(&mut polished);
        if vec_norm(&m.apply(&polished)) <= vec_norm(&m.apply(&v)) {
            v = polished;
        }
    }
    fix_phase(&mut v);
    Ok(v)
}

fn normalize(v: &mut [Complex64]) {
    let norm = vec_norm(v);
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// Rotates `v` so its largest-magnitude entry (first on ties) is real positive.
pub(crate) fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() == 0.0 {
        return;
    }
    let rot = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[best] = Complex64::new(v[best].re, 0.0);
}
