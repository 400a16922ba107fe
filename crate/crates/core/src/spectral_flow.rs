//! Eigenphase tracking along `k` and localization of the crossings
//! `λ(k₀) = 1`.
//!
//! Phases are followed sample to sample by eigenvector overlap and
//! unwrapped per track. A crossing is a place where a tracked phase passes
//! a multiple of 2π; it is bracketed on the scan grid, refined by
//! bisection on `θ_j(k) - 2πm`, polished with one secant step, and finally
//! validated as a simple zero with non-zero speed.

use std::f64::consts::PI;

use log::debug;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::UnitaryFamily;
use crate::linalg::{
    default_rank_tol, determinant, eig_unitary, inner, nullspace_vector, vec_norm, ComplexMatrix,
    EigenPair,
};

/// Minimum eigenvector overlap accepted between adjacent samples.
pub const MIN_OVERLAP: f64 = 0.7;
/// Crossings from different tracks closer than this are degenerate.
pub const MERGE_TOL: f64 = 1e-9;
/// Target for `|θ_j(k₀) - 2πm|` during refinement.
pub const PHASE_TOL: f64 = 1e-12;
/// Speeds at or below this violate the non-zero-speed hypothesis.
pub const MIN_SPEED: f64 = 1e-10;

const AMBIGUITY: f64 = 0.05;
const MAX_SUBDIVISIONS: usize = 8;

/// Eigenphases matched across a k-grid.
#[derive(Debug, Clone)]
pub struct PhaseTrack {
    pub grid: Vec<f64>,
    /// `phases[i][j]`: unwrapped phase of track `j` at `grid[i]`.
    pub phases: Vec<Vec<f64>>,
    /// Smallest matched overlap of each step `grid[i] → grid[i+1]`.
    pub overlaps: Vec<f64>,
    vectors: Vec<Vec<Vec<Complex64>>>,
}

impl PhaseTrack {
    pub fn n_tracks(&self) -> usize {
        self.phases.first().map_or(0, Vec::len)
    }

    /// Unwrapped phase of one track over the whole grid.
    pub fn track(&self, j: usize) -> Vec<f64> {
        self.phases.iter().map(|p| p[j]).collect()
    }

    /// Eigenvector of track `j` at sample `i`.
    pub fn vector(&self, i: usize, j: usize) -> &[Complex64] {
        &self.vectors[i][j]
    }
}

/// A validated parameter value where `U(k₀)` has eigenvalue 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub k0: f64,
    /// Track that produced the crossing, when it came from a scan.
    pub track_index: Option<usize>,
    /// Unit vector spanning `ker(U(k₀) - I)`.
    pub eigvec: Vec<Complex64>,
    /// `<v|U'(k₀)|v>`, the eigenvalue speed `dλ/dk` at the crossing.
    pub speed: Complex64,
    /// `||(U(k₀) - I) v||`.
    pub residual: f64,
    /// `|det(U(k₀) - I)|`.
    pub abs_det: f64,
}

struct Sample {
    k: f64,
    phases: Vec<f64>,
    vectors: Vec<Vec<Complex64>>,
}

fn check_range(k_min: f64, k_max: f64, step: f64) -> Result<()> {
    if !(k_min.is_finite() && k_max.is_finite() && k_min < k_max) {
        return Err(Error::InvalidParameter(format!("empty k range [{k_min}, {k_max}]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    Ok(())
}

/// Follows every eigenphase of `f` over `[k_min, k_max]`.
///
/// Adjacent samples are matched by maximal `|<v_i(k)|v_j(k')>|`; steps whose
/// best matching falls below [`MIN_OVERLAP`] are subdivided (up to 2⁸-fold)
/// before giving up with [`Error::Tracking`].
pub fn scan_eigenphases(f: &UnitaryFamily, k_min: f64, k_max: f64, step: f64) -> Result<PhaseTrack> {
    check_range(k_min, k_max, step)?;
    let n_steps = ((k_max - k_min) / step).ceil().max(1.0) as usize;
    let h = (k_max - k_min) / n_steps as f64;

    let first = eig_unitary(&f.evaluate(k_min))?;
    let mut samples = vec![Sample {
        k: k_min,
        phases: first.iter().map(|p| p.phase).collect(),
        vectors: first.into_iter().map(|p| p.vector).collect(),
    }];
    let mut overlaps = Vec::with_capacity(n_steps);
    for i in 1..=n_steps {
        let k = if i == n_steps { k_max } else { k_min + i as f64 * h };
        advance(f, &mut samples, &mut overlaps, k, 0)?;
    }

    Ok(PhaseTrack {
        grid: samples.iter().map(|s| s.k).collect(),
        phases: samples.iter().map(|s| s.phases.clone()).collect(),
        overlaps,
        vectors: samples.into_iter().map(|s| s.vectors).collect(),
    })
}

fn advance(
    f: &UnitaryFamily,
    samples: &mut Vec<Sample>,
    overlaps: &mut Vec<f64>,
    k: f64,
    depth: usize,
) -> Result<()> {
    let prev = samples.last().expect("seeded");
    let pairs = eig_unitary(&f.evaluate(k))?;
    let (assignment, matched) = match_tracks(&prev.vectors, &pairs);
    let worst = matched.iter().cloned().fold(1.0, f64::min);
    if worst < MIN_OVERLAP {
        if depth < MAX_SUBDIVISIONS {
            let mid = 0.5 * (prev.k + k);
            advance(f, samples, overlaps, mid, depth + 1)?;
            return advance(f, samples, overlaps, k, depth + 1);
        }
        return Err(Error::Tracking { k, overlap: worst });
    }
    let phases = assignment
        .iter()
        .zip(&prev.phases)
        .map(|(&l, &old)| old + principal(pairs[l].phase - old))
        .collect();
    let vectors = assignment.iter().map(|&l| pairs[l].vector.clone()).collect();
    overlaps.push(worst);
    samples.push(Sample { k, phases, vectors });
    Ok(())
}

// assignment[j] = index into `pairs` continuing track j; also returns the
// matched overlaps.
fn match_tracks(prev: &[Vec<Complex64>], pairs: &[EigenPair]) -> (Vec<usize>, Vec<f64>) {
    let n = prev.len();
    let overlap: Vec<Vec<f64>> = prev
        .iter()
        .map(|v| pairs.iter().map(|p| inner(v, &p.vector).norm()).collect())
        .collect();

    let mut greedy = Vec::with_capacity(n);
    let mut ambiguous = false;
    for row in &overlap {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
        if n > 1 && row[order[0]] - row[order[1]] < AMBIGUITY {
            ambiguous = true;
        }
        greedy.push(order[0]);
    }
    let mut seen = vec![false; n];
    for &l in &greedy {
        if std::mem::replace(&mut seen[l], true) {
            ambiguous = true;
        }
    }
    let assignment = if ambiguous { max_weight_assignment(&overlap) } else { greedy };
    let matched = assignment.iter().enumerate().map(|(j, &l)| overlap[j][l]).collect();
    (assignment, matched)
}

// Hungarian algorithm (potentials form) maximizing Σ w[j][assignment[j]].
fn max_weight_assignment(w: &[Vec<f64>]) -> Vec<usize> {
    let n = w.len();
    let cost = |i: usize, j: usize| -w[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

fn principal(x: f64) -> f64 {
    crate::linalg::principal_phase(x)
}

/// Locates, refines and validates every crossing in `[k_min, k_max]`.
pub fn find_crossings(f: &UnitaryFamily, k_min: f64, k_max: f64, step: f64) -> Result<Vec<Crossing>> {
    let track = scan_eigenphases(f, k_min, k_max, step)?;
    crossings_from_track(f, &track)
}

/// Crossing search on an existing scan.
pub fn crossings_from_track(f: &UnitaryFamily, track: &PhaseTrack) -> Result<Vec<Crossing>> {
    let two_pi = 2.0 * PI;
    let mut located: Vec<(f64, usize)> = Vec::new();
    for j in 0..track.n_tracks() {
        for i in 0..track.grid.len() - 1 {
            let (ta, tb) = (track.phases[i][j], track.phases[i + 1][j]);
            let lo = ta.min(tb) - PHASE_TOL;
            let hi = ta.max(tb) + PHASE_TOL;
            let m_lo = (lo / two_pi).ceil() as i64;
            let m_hi = (hi / two_pi).floor() as i64;
            for m in m_lo..=m_hi {
                let level = two_pi * m as f64;
                if let Some(k0) = refine(f, track, i, j, level)? {
                    located.push((k0, j));
                }
            }
        }
    }
    located.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    // Same track found twice (crossing on a grid point): keep one.
    let mut unique: Vec<(f64, usize)> = Vec::with_capacity(located.len());
    for (k0, j) in located {
        if unique.iter().rev().take_while(|(k, _)| k0 - k <= MERGE_TOL).any(|&(_, t)| t == j) {
            continue;
        }
        unique.push((k0, j));
    }
    for w in unique.windows(2) {
        let gap = w[1].0 - w[0].0;
        if gap <= MERGE_TOL {
            return Err(Error::DegenerateCrossing {
                k0: w[0].0,
                tracks: (w[0].1, w[1].1),
                gap,
            });
        }
    }

    let (k_min, k_max) = (track.grid[0], *track.grid.last().expect("non-empty grid"));
    unique
        .into_iter()
        .filter(|&(k0, _)| k0 >= k_min && k0 <= k_max)
        .map(|(k0, j)| {
            let mut c = validate_simple_zero(f, k0)?;
            c.track_index = Some(j);
            debug!("crossing at k0 = {k0:.15} on track {j}, speed {}", c.speed);
            Ok(c)
        })
        .collect()
}

// Phase of track j at k, continued from a reference eigenvector/phase.
fn tracked_phase(f: &UnitaryFamily, k: f64, reference: &[Complex64], ref_phase: f64) -> Result<(f64, Vec<Complex64>)> {
    let pairs = eig_unitary(&f.evaluate(k))?;
    let best = pairs
        .iter()
        .max_by(|a, b| inner(reference, &a.vector).norm().total_cmp(&inner(reference, &b.vector).norm()))
        .expect("non-empty spectrum");
    Ok((ref_phase + principal(best.phase - ref_phase), best.vector.clone()))
}

fn refine(f: &UnitaryFamily, track: &PhaseTrack, i: usize, j: usize, level: f64) -> Result<Option<f64>> {
    let (mut ka, mut kb) = (track.grid[i], track.grid[i + 1]);
    let mut fa = track.phases[i][j] - level;
    let mut fb = track.phases[i + 1][j] - level;
    if fa.abs() <= PHASE_TOL {
        return Ok(Some(ka));
    }
    if fb.abs() <= PHASE_TOL {
        return Ok(Some(kb));
    }
    if fa.signum() == fb.signum() {
        return Ok(None);
    }
    let mut reference = track.vector(i, j).to_vec();
    let mut ref_phase = track.phases[i][j];

    let mut best = if fa.abs() < fb.abs() { (ka, fa) } else { (kb, fb) };
    for _ in 0..200 {
        let km = 0.5 * (ka + kb);
        if km <= ka || km >= kb {
            break;
        }
        let (theta, vec) = tracked_phase(f, km, &reference, ref_phase)?;
        let fm = theta - level;
        if fm.abs() < best.1.abs() {
            best = (km, fm);
        }
        if fm.abs() <= PHASE_TOL {
            break;
        }
        if fm.signum() == fa.signum() {
            ka = km;
            fa = fm;
            reference = vec;
            ref_phase = theta;
        } else {
            kb = km;
            fb = fm;
        }
    }

    // One secant step through the final bracket.
    if fb != fa {
        let ks = ka - fa * (kb - ka) / (fb - fa);
        if ks > ka && ks < kb {
            let (theta, _) = tracked_phase(f, ks, &reference, ref_phase)?;
            let fs = theta - level;
            if fs.abs() < best.1.abs() {
                best = (ks, fs);
            }
        }
    }
    Ok(Some(best.0))
}

/// Checks that `k₀` is a simple zero of `det(U(k) - I)` with non-zero
/// eigenvalue speed and packages the crossing data.
pub fn validate_simple_zero(f: &UnitaryFamily, k0: f64) -> Result<Crossing> {
    let u = f.evaluate(k0);
    let n = u.dim();
    let m = &u - &ComplexMatrix::identity(n);
    // U - I can be tiny as a whole (1×1 families, U ≈ I); the rank
    // tolerance is measured against the scale of U itself.
    let tol = default_rank_tol(&m).max(1e-8 * u.frobenius_norm());
    let eigvec = nullspace_vector(&m, tol)?;
    let residual = vec_norm(&m.apply(&eigvec));
    let abs_det = determinant(&m).norm();
    if residual > 1e-8 || abs_det > 1e-8 * n as f64 {
        return Err(Error::NotACrossing { k0, residual });
    }
    let speed = f.derivative(k0).expectation(&eigvec);
    if speed.norm() <= MIN_SPEED {
        return Err(Error::ZeroSpeed { k0, speed: speed.norm() });
    }
    Ok(Crossing {
        k0,
        track_index: None,
        eigvec,
        speed,
        residual,
        abs_det,
    })
}

/// One row per grid point: `(k, θ₁..θ_n, |det(U(k) - I)|)`.
pub fn phase_curves(f: &UnitaryFamily, track: &PhaseTrack) -> Vec<(f64, Vec<f64>, f64)> {
    track
        .grid
        .iter()
        .zip(&track.phases)
        .map(|(&k, phases)| {
            let m = &f.evaluate(k) - &ComplexMatrix::identity(f.dim());
            (k, phases.clone(), determinant(&m).norm())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::family::FamilyKind;
    use crate::linalg::I;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn swap2() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn sqrt2_family() -> UnitaryFamily {
        UnitaryFamily::diag_phase(vec![1.0, std::f64::consts::SQRT_2], swap2()).unwrap()
    }

    #[test]
    fn scalar_phase_is_linear() {
        let f = UnitaryFamily::scalar(1.0).unwrap();
        let track = scan_eigenphases(&f, 0.0, 7.0, 0.05).unwrap();
        for (k, p) in track.grid.iter().zip(&track.phases) {
            assert!((p[0] - k).abs() <= 1e-12);
        }
    }

    #[test]
    fn decoupled_phases() {
        let f = UnitaryFamily::diag_phase(vec![1.0, 2.0], ComplexMatrix::identity(2)).unwrap();
        let track = scan_eigenphases(&f, 0.0, 7.0, 0.05).unwrap();
        let slopes: Vec<f64> = (0..2)
            .map(|j| {
                let t = track.track(j);
                (t[t.len() - 1] - t[0]) / 7.0
            })
            .collect();
        let mut sorted = slopes.clone();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - 1.0).abs() <= 1e-12 && (sorted[1] - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn tracked_phases_agree_with_rediagonalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let f = corpus::random_diag_phase(&mut rng, 4, (0.5, 2.0));
        let track = scan_eigenphases(&f, 0.0, 10.0, f.default_step()).unwrap();
        for (k, phases) in track.grid.iter().zip(&track.phases) {
            let mut fresh: Vec<f64> = eig_unitary(&f.evaluate(*k)).unwrap().iter().map(|p| p.phase).collect();
            let mut wrapped: Vec<f64> = phases.iter().map(|&p| principal(p)).collect();
            fresh.sort_by(f64::total_cmp);
            wrapped.sort_by(f64::total_cmp);
            for (a, b) in fresh.iter().zip(&wrapped) {
                assert!(principal(a - b).abs() <= 1e-10);
            }
        }
        assert!(track.overlaps.iter().all(|&o| o >= MIN_OVERLAP));
        for j in 0..4 {
            assert!(track.track(j).windows(2).all(|w| (w[1] - w[0]).abs() < PI));
        }
    }

    #[test]
    fn scalar_crossings() {
        let f = UnitaryFamily::scalar(1.0).unwrap();
        let cs = find_crossings(&f, -0.5, 13.0, f.default_step()).unwrap();
        let ks: Vec<f64> = cs.iter().map(|c| c.k0).collect();
        assert_eq!(ks.len(), 3);
        for (k, want) in ks.iter().zip([0.0, 2.0 * PI, 4.0 * PI]) {
            assert!((k - want).abs() <= 1e-10, "{k} vs {want}");
        }
    }

    #[test]
    fn decoupled_crossing_from_faster_track() {
        let f = UnitaryFamily::diag_phase(vec![1.0, 2.0], ComplexMatrix::identity(2)).unwrap();
        let cs = find_crossings(&f, 0.5, 5.0, f.default_step()).unwrap();
        assert_eq!(cs.len(), 1);
        assert!((cs[0].k0 - PI).abs() <= 1e-10);
        // Track 1 carries e^{2ik}.
        let j = cs[0].track_index.unwrap();
        assert!((cs[0].eigvec[1].norm() - 1.0).abs() <= 1e-12, "track {j}");
    }

    #[test]
    fn diagonal_s_crossings_are_exact() {
        let lengths = vec![0.7, 1.3, 2.3];
        let f = UnitaryFamily::diag_phase(lengths.clone(), ComplexMatrix::identity(3)).unwrap();
        let (lo, hi) = (0.3, 25.0);
        let cs = find_crossings(&f, lo, hi, f.default_step()).unwrap();
        let mut expected: Vec<f64> = lengths
            .iter()
            .flat_map(|&l| (0..100).map(move |m| 2.0 * PI * m as f64 / l))
            .filter(|&k| k >= lo && k <= hi)
            .collect();
        expected.sort_by(f64::total_cmp);
        assert_eq!(cs.len(), expected.len());
        for (c, e) in cs.iter().zip(&expected) {
            assert!((c.k0 - e).abs() <= 1e-9);
        }
    }

    // Dense |det(U - I)| scan: local minima on a 1e-4 grid, refined by
    // ternary search, kept when the refined minimum is below 1e-6.
    fn dense_det_minima(f: &UnitaryFamily, lo: f64, hi: f64) -> Vec<f64> {
        let n = f.dim();
        let det = |k: f64| determinant(&(&f.evaluate(k) - &ComplexMatrix::identity(n))).norm();
        let h = 1e-4;
        let count = ((hi - lo) / h).round() as usize;
        let vals: Vec<f64> = (0..=count).map(|i| det(lo + i as f64 * h)).collect();
        let mut out = Vec::new();
        for i in 0..=count {
            let left = if i == 0 { f64::INFINITY } else { vals[i - 1] };
            let right = if i == count { f64::INFINITY } else { vals[i + 1] };
            if vals[i] <= left && vals[i] < right {
                let (mut a, mut b) = ((lo + (i as f64 - 1.0) * h).max(lo), (lo + (i as f64 + 1.0) * h).min(hi));
                for _ in 0..200 {
                    let m1 = a + (b - a) / 3.0;
                    let m2 = b - (b - a) / 3.0;
                    if det(m1) < det(m2) {
                        b = m2;
                    } else {
                        a = m1;
                    }
                }
                let k = 0.5 * (a + b);
                if det(k) <= 1e-6 {
                    out.push(k);
                }
            }
        }
        out
    }

    #[test]
    fn crossings_match_dense_determinant_scan() {
        let f = sqrt2_family();
        let cs = find_crossings(&f, 0.0, 20.0, f.default_step()).unwrap();
        let oracle = dense_det_minima(&f, 0.0, 20.0);
        assert_eq!(cs.len(), oracle.len());
        for (c, k) in cs.iter().zip(&oracle) {
            assert!((c.k0 - k).abs() <= 1e-7, "{} vs {k}", c.k0);
            assert!(c.abs_det <= 1e-8 * 2.0);
            assert!(c.residual <= 1e-8);
        }
        // Closed form: det(U - I) = 1 - e^{i(1+√2)k}.
        for (m, c) in cs.iter().enumerate() {
            let k = 2.0 * PI * m as f64 / (1.0 + std::f64::consts::SQRT_2);
            assert!((c.k0 - k).abs() <= 1e-10);
        }
    }

    #[test]
    fn scalar_validation() {
        let f = UnitaryFamily::scalar(1.0).unwrap();
        let c = validate_simple_zero(&f, 2.0 * PI).unwrap();
        assert!((c.eigvec[0] - 1.0).norm() <= 1e-15);
        assert!((c.speed - I).norm() <= 1e-14);
    }

    #[test]
    fn forced_degeneracy_is_rank_deficient() {
        let f = UnitaryFamily::diag_phase(vec![1.0, 1.0], ComplexMatrix::identity(2)).unwrap();
        assert!(matches!(
            validate_simple_zero(&f, 2.0 * PI),
            Err(Error::RankDeficiency { nullity: 2, .. })
        ));
        match find_crossings(&f, 1.0, 8.0, f.default_step()) {
            Err(Error::DegenerateCrossing { tracks, .. }) => assert_ne!(tracks.0, tracks.1),
            other => panic!("expected DegenerateCrossing, got {other:?}"),
        }
    }

    #[test]
    fn zero_speed_is_reported() {
        let h = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let f = UnitaryFamily::exp_path(h, ComplexMatrix::identity(2)).unwrap();
        assert!(matches!(validate_simple_zero(&f, 1.0), Err(Error::ZeroSpeed { .. })));
        assert!(matches!(find_crossings(&f, 0.5, 3.0, 0.05), Err(Error::ZeroSpeed { .. })));
    }

    #[test]
    fn non_crossing_is_rejected() {
        let f = UnitaryFamily::scalar(1.0).unwrap();
        assert!(validate_simple_zero(&f, 1.0).is_err());
    }

    fn tracked_eigenvalue(f: &UnitaryFamily, k: f64, v: &[Complex64]) -> Complex64 {
        let pairs = eig_unitary(&f.evaluate(k)).unwrap();
        pairs
            .iter()
            .max_by(|a, b| inner(v, &a.vector).norm().total_cmp(&inner(v, &b.vector).norm()))
            .unwrap()
            .value
    }

    #[test]
    fn speed_matches_phase_velocity() {
        let f = sqrt2_family();
        let c = &find_crossings(&f, 1.0, 5.0, f.default_step()).unwrap()[0];
        let h = 1e-5;
        let phase = |k: f64| tracked_eigenvalue(&f, k, &c.eigvec).arg();
        let dtheta = principal(phase(c.k0 + h) - phase(c.k0 - h)) / (2.0 * h);
        let lambda = tracked_eigenvalue(&f, c.k0, &c.eigvec);
        let fd = I * lambda * dtheta;
        assert!((c.speed - fd).norm() / c.speed.norm() <= 1e-6);
    }

    #[test]
    fn crossing_count_matches_fine_grid_sign_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..4 {
            let n = rng.gen_range(2..=4);
            let f = corpus::random_diag_phase(&mut rng, n, (0.5, 2.0));
            let step = f.default_step();
            let (lo, hi) = (0.1, 15.0);
            let cs = find_crossings(&f, lo, hi, step).unwrap();
            let fine = scan_eigenphases(&f, lo, hi, step / 10.0).unwrap();
            let mut changes = 0;
            for j in 0..n {
                let t = fine.track(j);
                for w in t.windows(2) {
                    changes += ((w[1] / (2.0 * PI)).floor() - (w[0] / (2.0 * PI)).floor()).abs() as usize;
                }
            }
            assert_eq!(cs.len(), changes);
        }
    }

    #[test]
    fn positive_generator_phases_increase() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = corpus::random_diag_phase(&mut rng, 3, (0.5, 2.0));
        assert!(matches!(f.kind(), FamilyKind::DiagPhase { .. }));
        let track = scan_eigenphases(&f, -5.0, 5.0, f.default_step()).unwrap();
        for j in 0..3 {
            assert!(track.track(j).windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn hungarian_resolves_conflicts() {
        let w = vec![vec![0.9, 0.89, 0.0], vec![0.88, 0.1, 0.0], vec![0.0, 0.0, 1.0]];
        assert_eq!(max_weight_assignment(&w), vec![1, 0, 2]);
    }

    #[test]
    fn bad_ranges_are_rejected() {
        let f = UnitaryFamily::scalar(1.0).unwrap();
        assert!(scan_eigenphases(&f, 1.0, 1.0, 0.1).is_err());
        assert!(scan_eigenphases(&f, 0.0, 1.0, 0.0).is_err());
    }
}
