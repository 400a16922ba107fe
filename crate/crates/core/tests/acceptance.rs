//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Every reference value here comes from an evaluation that does not share
//! code with the quantity under test (closed-form sums, finite differences,
//! matrix powers, constructed spectra).

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unitrace::corpus;
use unitrace::linalg::eig_unitary;
use unitrace::measure::{build_measure, crystalline_expand, exp_sum_at, pair_measure, verify_trace_formula, GaussianTestFunction};
use unitrace::newton::{cayley_hamilton_residual, newton_residual, remainder_sweep};
use unitrace::spectral_flow::find_crossings;
use unitrace::trace_formula::{abel_kernel_eval, abel_sum_direct, abel_tail_bound, cesaro_projection, crossing_weight, AbelParams};
use unitrace::{Complex64, ComplexMatrix, Error, ObservableFamily, UnitaryFamily};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn unit_gaussian(center: f64, width: f64) -> GaussianTestFunction {
    GaussianTestFunction::new(center, width, Complex64::new(1.0, 0.0)).unwrap()
}

/// Random `diag_phase` families, dimensions cycling through `dims`.
fn diag_corpus(seed: u64, count: usize, dims: &[usize]) -> Vec<UnitaryFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| corpus::random_diag_phase(&mut rng, dims[i % dims.len()], (0.5, 2.0))).collect()
}

fn poisson_base_case() -> Outcome {
    // U(k) = e^{2πik}; A = 2π puts unit mass on every integer.
    let f = UnitaryFamily::scalar(2.0 * PI).unwrap();
    let a = ObservableFamily::Constant { a: ComplexMatrix::from_real_diag(&[2.0 * PI]) };
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let g = GaussianTestFunction::new(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(0.2..1.5),
            Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        )
        .unwrap();
        let (lo, hi) = g.window();
        let mu = build_measure(&f, &a, lo, hi).map_err(|e| e.to_string())?;
        let lhs = pair_measure(&mu, &g).map_err(|e| e.to_string())?;
        let direct: Complex64 = (-200..=200).map(|m| g.eval(m as f64)).sum();
        worst = worst.max((lhs - direct).norm());
    }
    ensure(worst <= 1e-10, || format!("max |error| {worst:.3e} > 1e-10"))?;
    Ok(format!("max |error| {worst:.2e} over 5 Gaussians"))
}

fn eigenvalue_speed() -> Outcome {
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for f in diag_corpus(202, 20, &[2, 3, 4]) {
        for c in find_crossings(&f, 0.0, 15.0, f.default_step()).map_err(|e| e.to_string())? {
            // Central difference of the eigenvalue that continues v.
            let pick = |k: f64| -> Complex64 {
                let pairs = eig_unitary(&f.evaluate(k)).unwrap();
                pairs
                    .iter()
                    .max_by(|p, q| {
                        let op = unitrace::linalg::inner(&p.vector, &c.eigvec).norm();
                        let oq = unitrace::linalg::inner(&q.vector, &c.eigvec).norm();
                        op.total_cmp(&oq)
                    })
                    .unwrap()
                    .value
            };
            let fd = (pick(c.k0 + h) - pick(c.k0 - h)) / (2.0 * h);
            let rel = (c.speed - fd).norm() / fd.norm();
            worst = worst.max(rel);
            count += 1;
        }
    }
    ensure(count > 0, || "no crossings found".into())?;
    ensure(worst <= 1e-5, || format!("max relative error {worst:.3e} > 1e-5"))?;
    Ok(format!("{count} crossings, max relative error {worst:.2e}"))
}

fn two_sided_trace_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut cases: Vec<(String, UnitaryFamily, ObservableFamily)> = Vec::new();
    for n in [2, 3, 2, 3] {
        let f = corpus::random_diag_phase(&mut rng, n, (0.5, 2.0));
        cases.push((format!("diag_phase n={n}, A=I"), f, ObservableFamily::Identity));
    }
    for n in [2, 3] {
        let f = corpus::random_diag_phase(&mut rng, n, (0.5, 2.0));
        let a = ObservableFamily::Constant { a: corpus::random_hermitian(&mut rng, n) };
        cases.push((format!("diag_phase n={n}, A hermitian"), f, a));
    }
    {
        let f = corpus::random_diag_phase(&mut rng, 2, (0.5, 2.0));
        let a = ObservableFamily::Constant { a: corpus::random_unitary(&mut rng, 2) };
        cases.push(("diag_phase n=2, A unitary".into(), f, a));
    }
    {
        // positive generator keeps every crossing transversal
        let q = corpus::random_unitary(&mut rng, 2);
        let h = ComplexMatrix::conjugate_diag(&q, &[Complex64::new(0.8, 0.0), Complex64::new(1.7, 0.0)]);
        let f = UnitaryFamily::exp_path(h, corpus::random_unitary(&mut rng, 2)).unwrap();
        cases.push(("exp_path n=2, A=I".into(), f, ObservableFamily::Identity));
    }
    cases.push(("scalar omega=1, A=I".into(), UnitaryFamily::scalar(1.0).unwrap(), ObservableFamily::Identity));
    let (f, a) = corpus::showcase_complex_witness();
    cases.push(("complex-weight showcase".into(), f, a));

    let schedule = [0.9, 0.99, 0.999];
    let mut worst: f64 = 0.0;
    for (name, f, a) in &cases {
        // centre the test function on a crossing so the pairing is not small
        let atoms = find_crossings(f, 2.0, 9.0, f.default_step()).map_err(|e| format!("{name}: {e}"))?;
        let center = atoms.first().map(|c| c.k0).ok_or_else(|| format!("{name}: no crossing in [2, 9]"))?;
        let g = unit_gaussian(center + 0.1, 0.5);
        let rep = verify_trace_formula(f, a, &g, &schedule).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.pass, || {
            let errs: Vec<String> = rep.rows.iter().map(|r| format!("{:.2e}", r.abs_err)).collect();
            format!("{name}: rel_err {:.3e} (threshold {:.1e}), errors {errs:?}", rep.rel_err, rep.threshold)
        })?;
        worst = worst.max(rep.rel_err / rep.threshold);
    }
    Ok(format!("{} families PASS, worst rel_err/threshold {worst:.2}", cases.len()))
}

fn positive_generator() -> Outcome {
    let mut worst_abs: f64 = 0.0;
    let mut worst_arg: f64 = 0.0;
    let mut count = 0;
    for f in diag_corpus(404, 20, &[2, 3, 4]) {
        for c in find_crossings(&f, 0.0, 20.0, f.default_step()).map_err(|e| e.to_string())? {
            let w = crossing_weight(&f, &ObservableFamily::DerivativeOfU, &c).map_err(|e| e.to_string())?;
            worst_abs = worst_abs.max((w - Complex64::new(0.0, 1.0)).norm());
            worst_arg = worst_arg.max((w.arg() - PI / 2.0).abs());
            count += 1;
        }
    }
    ensure(worst_abs <= 1e-9 && worst_arg <= 1e-10, || {
        format!("max |w - i| {worst_abs:.3e}, max |arg w - pi/2| {worst_arg:.3e}")
    })?;
    Ok(format!("{count} atoms, max |w - i| {worst_abs:.2e}, max |arg w - pi/2| {worst_arg:.2e}"))
}

fn kernel_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut families = diag_corpus(506, 4, &[2, 3, 4]);
    families.push(UnitaryFamily::exp_path(corpus::random_hermitian(&mut rng, 3), corpus::random_unitary(&mut rng, 3)).unwrap());
    families.push(UnitaryFamily::scalar(1.3).unwrap());
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let f = &families[i % families.len()];
        let n = f.dim();
        let a = match i % 3 {
            0 => ObservableFamily::Identity,
            1 => ObservableFamily::Constant { a: corpus::random_matrix(&mut rng, n) },
            _ => ObservableFamily::DerivativeOfU,
        };
        let k = rng.gen_range(-30.0..30.0);
        let t: f64 = rng.gen_range(0.05..0.95);
        // truncate where the tail bound is between 1e-10 and 1e-4 of the
        // leading term, so the bound is a real constraint
        let eps: f64 = 10f64.powf(rng.gen_range(-10.0..-4.0));
        let m_max = (eps.ln() / t.ln()).ceil() as usize;
        let p = AbelParams::new(t, m_max).unwrap();
        let closed = abel_kernel_eval(f, &a, k, t).map_err(|e| e.to_string())?;
        let direct = abel_sum_direct(f, &a, k, &p).map_err(|e| e.to_string())?;
        let bound = abel_tail_bound(n, a.norm_bound(f), &p);
        let ratio = (closed - direct).norm() / bound;
        ensure(ratio <= 1.0, || format!("k={k}, t={t}, m_max={m_max}: |diff| exceeds bound {bound:.3e} by {ratio:.2}x"))?;
        worst = worst.max(ratio);
    }
    Ok(format!("200 points, max |diff|/bound {worst:.2e}"))
}

fn crystalline_expansion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let f = corpus::random_diag_phase(&mut rng, n, (0.5, 2.0));
        let am = corpus::random_matrix(&mut rng, n);
        let terms = crystalline_expand(&f, &ObservableFamily::Constant { a: am.clone() }, 4).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let k = rng.gen_range(-25.0..25.0);
            let u = f.evaluate(k);
            let mut power = ComplexMatrix::identity(n);
            let mut inverse = ComplexMatrix::identity(n);
            for m in 0..=4i64 {
                if m > 0 {
                    power = &power * &u;
                    inverse = &inverse * &u.adjoint();
                }
                worst = worst.max((exp_sum_at(&terms, m, k) - power.trace_of_product(&am)).norm());
                worst = worst.max((exp_sum_at(&terms, -m, k) - inverse.trace_of_product(&am)).norm());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("max |expansion - tr(U^m A)| {worst:.3e} > 1e-12"))?;

    let (f, a) = corpus::showcase_complex_witness();
    let mu = build_measure(&f, &a, 0.0, 30.0).map_err(|e| e.to_string())?;
    let best = mu
        .atoms()
        .iter()
        .map(|x| x.weight.im.abs() / x.weight.norm())
        .fold(0.0, f64::max);
    ensure(best >= 0.1, || format!("showcase: max |Im w|/|w| = {best:.3} < 0.1"))?;
    Ok(format!("max expansion error {worst:.2e}; showcase max |Im w|/|w| = {best:.2} over {} atoms", mu.len()))
}

fn newton_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut unitaries: Vec<ComplexMatrix> = (2..=8).map(|n| corpus::random_unitary(&mut rng, n)).collect();
    for f in diag_corpus(708, 6, &[2, 3, 4]) {
        unitaries.push(f.evaluate(rng.gen_range(-10.0..10.0)));
    }
    let mut worst_newton: f64 = 0.0;
    let mut worst_ch: f64 = 0.0;
    for u in &unitaries {
        for j in -50..=50 {
            worst_newton = worst_newton.max(newton_residual(u, j).map_err(|e| e.to_string())?);
        }
        let ch = cayley_hamilton_residual(u).map_err(|e| e.to_string())?;
        worst_ch = worst_ch.max(ch / u.dim() as f64);
    }
    ensure(worst_newton <= 1e-9, || format!("newton residual {worst_newton:.3e} > 1e-9"))?;
    ensure(worst_ch <= 1e-9, || format!("Cayley-Hamilton residual/n {worst_ch:.3e} > 1e-9"))?;

    // sup over N of |R| on a grid kept 1e-3 away from crossings
    let ns: Vec<usize> = (0..=10_000).collect();
    let mut worst_drift: f64 = 0.0;
    for f in diag_corpus(709, 3, &[2, 3]) {
        let (lo, hi) = (0.0, 10.0);
        let atoms: Vec<f64> = find_crossings(&f, lo - 1.0, hi + 1.0, f.default_step())
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| c.k0)
            .collect();
        let (mut sup_1e3, mut sup_1e4) = (0.0f64, 0.0f64);
        for i in 0..=200 {
            let k = lo + (hi - lo) * i as f64 / 200.0;
            if atoms.iter().any(|a| (a - k).abs() < 1e-3) {
                continue;
            }
            for s in remainder_sweep(&f, k, &ns).map_err(|e| e.to_string())? {
                let r = s.remainder.norm();
                sup_1e4 = sup_1e4.max(r);
                if s.n <= 1000 {
                    sup_1e3 = sup_1e3.max(r);
                }
            }
        }
        worst_drift = worst_drift.max((sup_1e4 - sup_1e3) / sup_1e4);
    }
    ensure(worst_drift < 0.01, || format!("sup |R| drifts {:.2}% between N=1e3 and 1e4", 100.0 * worst_drift))?;
    Ok(format!(
        "newton {worst_newton:.1e}, Cayley-Hamilton/n {worst_ch:.1e}, sup|R| drift {:.3}%",
        100.0 * worst_drift
    ))
}

fn von_neumann_projection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let spectra: [&[f64]; 3] = [&[0.0, PI], &[0.0, PI / 2.0, -PI / 2.0], &[0.0, PI, PI / 2.0, -PI / 2.0]];
    let ns = [100usize, 1_000, 10_000];
    let mut exponents = Vec::new();
    for phases in spectra {
        let (u, q) = corpus::unitary_with_phases(&mut rng, phases);
        let target = ComplexMatrix::outer(&q.column(0));
        let gap = phases[1..].iter().map(|&t| (Complex64::from_polar(1.0, t) - 1.0).norm()).fold(f64::INFINITY, f64::min);
        let mut errs = Vec::new();
        for &n in &ns {
            let err = (&cesaro_projection(&u, n).map_err(|e| e.to_string())? - &target).frobenius_norm();
            ensure(err <= 2.0 / gap / n as f64, || format!("N={n}: error {err:.3e} above 2/(gap N)"))?;
            errs.push(err);
        }
        // least-squares slope of -log(err) against log(N)
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| -e.ln()).collect();
        let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        ensure((0.9..=1.1).contains(&slope), || format!("phases {phases:?}: fitted exponent {slope:.3}"))?;
        exponents.push(format!("{slope:.3}"));
    }
    Ok(format!("fitted exponents {}", exponents.join(", ")))
}

fn hypothesis_violations() -> Outcome {
    let degenerate = UnitaryFamily::diag_phase(vec![1.0, 1.0], ComplexMatrix::identity(2)).unwrap();
    let g = unit_gaussian(2.0 * PI, 0.5);
    match verify_trace_formula(&degenerate, &ObservableFamily::Identity, &g, &[0.9, 0.99, 0.999]) {
        Err(Error::DegenerateCrossing { .. }) => {}
        other => return Err(format!("degenerate family gave {other:?}")),
    }
    match build_measure(&degenerate, &ObservableFamily::Identity, 1.0, 10.0) {
        Err(Error::DegenerateCrossing { .. }) => {}
        other => return Err(format!("degenerate measure gave {other:?}")),
    }
    let frozen = UnitaryFamily::exp_path(ComplexMatrix::from_real_diag(&[0.0, 1.0]), ComplexMatrix::identity(2)).unwrap();
    match build_measure(&frozen, &ObservableFamily::Identity, 0.5, 3.0) {
        Err(Error::ZeroSpeed { .. }) => {}
        other => return Err(format!("zero-speed family gave {other:?}")),
    }
    match verify_trace_formula(&frozen, &ObservableFamily::Identity, &unit_gaussian(1.5, 0.1), &[0.9, 0.99]) {
        Err(Error::ZeroSpeed { .. }) => {}
        other => return Err(format!("zero-speed verification gave {other:?}")),
    }
    Ok("DegenerateCrossing and ZeroSpeed raised".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("Poisson summation base case", poisson_base_case, Duration::from_secs(1)),
        ("eigenvalue-speed lemma", eigenvalue_speed, Duration::from_secs(30)),
        ("two-sided trace formula", two_sided_trace_formula, Duration::from_secs(300)),
        ("positive-generator normalization", positive_generator, Duration::from_secs(10)),
        ("kernel identity", kernel_identity, Duration::from_secs(30)),
        ("crystalline expansion", crystalline_expansion, Duration::from_secs(10)),
        ("Newton machinery", newton_machinery, Duration::from_secs(60)),
        ("von Neumann projection", von_neumann_projection, Duration::from_secs(10)),
        ("hypothesis-violation loudness", hypothesis_violations, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {}. {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
