//! The atomic measure `Σ w(k₀) δ(k - k₀)` and its pairing with Gaussian test
//! functions, next to the Abel-regularized Fourier side it must agree with.

mod crystalline;
mod export;
pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::family::{ObservableFamily, UnitaryFamily};
use crate::spectral_flow::find_crossings;
use crate::trace_formula::{abel_kernel_eval, check_abel_t, crossing_weight};

pub use crystalline::{abel_exp_sum, crystalline_expand, exp_sum_at, ExpSumTerm, COEFF_FLOOR};
pub use export::{export_measure, import_measure, measure_document, MeasureDocument};

/// Atoms with a smaller weight are dropped.
pub const WEIGHT_FLOOR: f64 = 1e-14;
/// Half-width of the integration window, in units of σ.
pub const WINDOW_SIGMAS: f64 = 10.0;
/// Test-function values (relative to the amplitude) allowed outside a
/// measure's range.
pub const TRUNCATION_TOL: f64 = 1e-16;
/// Absolute quadrature tolerance relative to the amplitude.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// `|rhs|` below which a pairing is treated as vanishing.
pub const VANISHING_RHS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub weight: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    k_range: (f64, f64),
}

impl AtomicMeasure {
    /// Checks ordering and range; zero-weight atoms are dropped.
    pub fn new(atoms: Vec<Atom>, k_range: (f64, f64)) -> Result<Self> {
        let (lo, hi) = k_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!("bad measure range [{lo}, {hi}]")));
        }
        let atoms: Vec<Atom> = atoms.into_iter().filter(|a| a.weight.norm() > WEIGHT_FLOOR).collect();
        for a in &atoms {
            if !(a.position >= lo && a.position <= hi) || !a.weight.is_finite() {
                return Err(Error::InvalidParameter(format!("atom at {} outside [{lo}, {hi}]", a.position)));
            }
        }
        if atoms.windows(2).any(|w| w[0].position >= w[1].position) {
            return Err(Error::InvalidParameter("atom positions must increase strictly".into()));
        }
        Ok(AtomicMeasure { atoms, k_range })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn k_range(&self) -> (f64, f64) {
        self.k_range
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// `g(k) = amplitude · exp(-(k - center)² / (2 width²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTestFunction {
    pub center: f64,
    pub width: f64,
    #[serde(default = "unit_amplitude", deserialize_with = "real_or_complex")]
    pub amplitude: Complex64,
}

fn unit_amplitude() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Accepts `1.5` as well as `[re, im]`.
fn real_or_complex<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Amp {
        Real(f64),
        Pair(f64, f64),
    }
    Ok(match Amp::deserialize(d)? {
        Amp::Real(re) => Complex64::new(re, 0.0),
        Amp::Pair(re, im) => Complex64::new(re, im),
    })
}

impl GaussianTestFunction {
    pub fn new(center: f64, width: f64, amplitude: Complex64) -> Result<Self> {
        let g = GaussianTestFunction { center, width, amplitude };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite() && self.center.is_finite() && self.amplitude.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad Gaussian test function {self:?}")));
        }
        Ok(())
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        let z = (k - self.center) / self.width;
        self.amplitude * (-0.5 * z * z).exp()
    }

    /// `∫ g = amplitude · σ √(2π)`.
    pub fn integral(&self) -> Complex64 {
        self.amplitude * self.width * (2.0 * PI).sqrt()
    }

    /// `∫ |g|` outside `[lo, hi]`.
    pub fn mass_outside(&self, lo: f64, hi: f64) -> f64 {
        let s = self.width * std::f64::consts::SQRT_2;
        let half = 0.5 * self.amplitude.norm() * self.width * (2.0 * PI).sqrt();
        half * (libm::erfc((self.center - lo) / s) + libm::erfc((hi - self.center) / s))
    }

    /// `[center - 10σ, center + 10σ]`.
    pub fn window(&self) -> (f64, f64) {
        (self.center - WINDOW_SIGMAS * self.width, self.center + WINDOW_SIGMAS * self.width)
    }

    /// Largest `|g|` outside `[lo, hi]`.
    fn peak_outside(&self, lo: f64, hi: f64) -> f64 {
        if self.center < lo || self.center > hi {
            self.amplitude.norm()
        } else {
            self.eval(lo).norm().max(self.eval(hi).norm())
        }
    }
}

/// Atoms at every validated crossing in `[k_min, k_max]`, weighted by
/// [`crossing_weight`].
pub fn build_measure(f: &UnitaryFamily, a: &ObservableFamily, k_min: f64, k_max: f64) -> Result<AtomicMeasure> {
    let crossings = find_crossings(f, k_min, k_max, f.default_step())?;
    let mut atoms = Vec::with_capacity(crossings.len());
    for c in &crossings {
        atoms.push(Atom {
            position: c.k0,
            weight: crossing_weight(f, a, c)?,
        });
    }
    AtomicMeasure::new(atoms, (k_min, k_max))
}

/// `Σ w · g(k₀)`. Fails with [`Error::Truncation`] when `g` is not negligible
/// outside the measure's range, since atoms there are unknown.
pub fn pair_measure(mu: &AtomicMeasure, g: &GaussianTestFunction) -> Result<Complex64> {
    let partial: Complex64 = mu.atoms.iter().map(|a| a.weight * g.eval(a.position)).sum();
    let (lo, hi) = mu.k_range;
    if g.peak_outside(lo, hi) > TRUNCATION_TOL * g.amplitude.norm() {
        return Err(Error::Truncation {
            outside_mass: g.mass_outside(lo, hi),
            partial,
        });
    }
    Ok(partial)
}

/// `∫ abel_kernel_eval(f, a, k, t) g(k) dk` over `[c - 10σ, c + 10σ]`.
pub fn pair_abel(f: &UnitaryFamily, a: &ObservableFamily, g: &GaussianTestFunction, t: f64) -> Result<Complex64> {
    check_abel_t(t)?;
    g.validate()?;
    if g.amplitude == Complex64::new(0.0, 0.0) {
        return Ok(g.amplitude);
    }
    // Kernel peaks are about (1 - t)/|θ'| wide; start with panels of a few
    // peak widths so none is stepped over.
    let speed = f.max_speed();
    let mut panel = 0.5 * g.width;
    if speed > 0.0 {
        panel = panel.min(4.0 * (1.0 - t) / speed);
    }
    let (lo, hi) = g.window();
    let integrand = |k: f64| Ok(abel_kernel_eval(f, a, k, t)? * g.eval(k));
    quadrature::integrate(&integrand, lo, hi, panel, QUADRATURE_TOL * g.amplitude.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub t: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub test_function: GaussianTestFunction,
    pub rows: Vec<VerificationRow>,
    pub n_atoms: usize,
    /// Denominator of the relative error.
    pub scale: f64,
    pub rel_err: f64,
    pub threshold: f64,
    pub monotone: bool,
    /// Estimate of `lim_{t→1} lhs` by polynomial extrapolation in `1 - t`.
    pub extrapolated: Complex64,
    pub pass: bool,
}

/// Runs both sides along `t_schedule`.
///
/// PASS iff the error at the last `t` is at most `max(10 (1 - t), 1e-6)`
/// relative to `scale`, and the errors do not increase over the last three
/// values of `t`. `scale` is `|rhs|` unless the pairing vanishes, in which
/// case it is the mass scale `n ||A|| ∫|g| / 2π` of the Abel side.
pub fn verify_trace_formula(
    f: &UnitaryFamily,
    a: &ObservableFamily,
    g: &GaussianTestFunction,
    t_schedule: &[f64],
) -> Result<VerificationReport> {
    check_schedule(t_schedule)?;
    g.validate()?;
    let (lo, hi) = g.window();
    let mu = build_measure(f, a, lo, hi)?;
    let rhs = pair_measure(&mu, g)?;
    let mut rows = Vec::with_capacity(t_schedule.len());
    for &t in t_schedule {
        let lhs = pair_abel(f, a, g, t)?;
        log::debug!("t = {t}: lhs = {lhs}, rhs = {rhs}");
        rows.push(VerificationRow { t, lhs, rhs, abs_err: (lhs - rhs).norm() });
    }

    let scale = if rhs.norm() <= VANISHING_RHS {
        f.dim() as f64 * a.norm_bound(f) / (2.0 * PI) * g.amplitude.norm() * g.width * (2.0 * PI).sqrt()
    } else {
        rhs.norm()
    }
    .max(1e-12);
    let last = rows.last().expect("non-empty schedule");
    let rel_err = last.abs_err / scale;
    let threshold = (10.0 * (1.0 - last.t)).max(1e-6);
    let tail = &rows[rows.len().saturating_sub(3)..];
    let monotone = tail.windows(2).all(|w| w[1].abs_err <= w[0].abs_err);
    let extrapolated = extrapolate(tail);
    Ok(VerificationReport {
        test_function: *g,
        n_atoms: mu.len(),
        pass: rel_err <= threshold && monotone,
        rows,
        scale,
        rel_err,
        threshold,
        monotone,
        extrapolated,
    })
}

pub(crate) fn check_schedule(ts: &[f64]) -> Result<()> {
    if ts.is_empty() {
        return Err(Error::InvalidParameter("empty t schedule".into()));
    }
    for &t in ts {
        check_abel_t(t)?;
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("t schedule must increase strictly".into()));
    }
    Ok(())
}

/// Lagrange interpolation of `lhs` in `x = 1 - t`, evaluated at `x = 0`.
fn extrapolate(rows: &[VerificationRow]) -> Complex64 {
    let xs: Vec<f64> = rows.iter().map(|r| 1.0 - r.t).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for (i, r) in rows.iter().enumerate() {
        let mut w = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                w *= xj / (xj - xs[i]);
            }
        }
        sum += r.lhs * w;
    }
    sum
}

/// `lim_{t→1}` of `pair_abel` estimated from the given schedule.
pub fn abel_limit(f: &UnitaryFamily, a: &ObservableFamily, g: &GaussianTestFunction, t_schedule: &[f64]) -> Result<Complex64> {
    check_schedule(t_schedule)?;
    let mut rows = Vec::with_capacity(t_schedule.len());
    for &t in t_schedule {
        let lhs = pair_abel(f, a, g, t)?;
        rows.push(VerificationRow { t, lhs, rhs: lhs, abs_err: 0.0 });
    }
    Ok(extrapolate(&rows))
}
