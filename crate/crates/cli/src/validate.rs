//! Acceptance suite: eleven numbered checks with fixed tolerances.
//!
//! Every check is deterministic (seeded sampling, fixed grids), so the report
//! is byte-identical from run to run.

use std::f64::consts::PI;
use std::fmt;

use qpurify_core::channel::{contract_kraus, kraus_superoperator, propagator, zero_t_kraus, KrausSet};
use qpurify_core::extraction::{
    alpha_analytic, analyze, contracted_map, estimate_measurements, f_down, f_up,
    maximally_mixed, optimal_tau_weak_damping, perturbative_purity, pure_eigenstate_criterion, trajectory,
    MeasurementSpec, PureStateSpec,
};
use qpurify_core::linalg::{
    apply, choi_matrix, eig, frobenius_norm, hermitian_eigenvalues, to_qubit_report_order, vectorize,
};
use qpurify_core::{Complex64, ComplexMatrix, ModelParams};
use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::config::Config;
use crate::output::num;
use crate::sweep::{model_at, run_sweep, SweepRow};

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "zero-temperature channel equivalence"),
    (2, "down-measurement map analytics"),
    (3, "up-measurement case structure"),
    (4, "weak-damping purity law"),
    (5, "optimal measurement interval"),
    (6, "ideal sweep purity"),
    (7, "high-temperature collapse"),
    (8, "near-purity pockets at low temperature"),
    (9, "trajectory purity maximum"),
    (10, "measurement-count estimate"),
    (11, "channel CPTP and semigroup"),
];

#[derive(Debug, Clone, Copy, Default)]
pub struct ValidationOptions {
    /// Perturbs one zero-temperature Kraus coefficient (negative control).
    pub corrupt_kraus: bool,
    /// Worker threads for the grid checks.
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}  {}: {}", self.id, self.title, self.detail)
    }
}

type Check = Result<(bool, String), qpurify_core::Error>;

/// Runs one criterion; `None` for an unknown number.
pub fn run_criterion(id: u8, opts: &ValidationOptions) -> Option<CriterionOutcome> {
    let title = CRITERIA.iter().find(|(n, _)| *n == id)?.1;
    let result = match id {
        1 => zero_t_equivalence(opts),
        2 => down_map(),
        3 => up_cases(),
        4 => weak_damping(),
        5 => optimal_interval(),
        6 => ideal_sweep(opts),
        7 => hot_collapse(opts),
        8 => cold_pockets(opts),
        9 => trajectory_peak(),
        10 => measurement_count(),
        11 => channel_properties(opts),
        _ => return None,
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CriterionOutcome { id, title, passed, detail })
}

pub fn run_all(opts: &ValidationOptions) -> Vec<CriterionOutcome> {
    CRITERIA.iter().filter_map(|(id, _)| run_criterion(*id, opts)).collect()
}

pub fn report(outcomes: &[CriterionOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&o.to_string());
        s.push('\n');
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    s.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    s
}

fn defaults(kt_over_omega: f64) -> Result<ModelParams, qpurify_core::Error> {
    ModelParams::from_ratios(10.0, 0.1, 0.95, kt_over_omega)
}

fn kraus(p: &ModelParams, tau: f64, opts: &ValidationOptions) -> Result<KrausSet, qpurify_core::Error> {
    let mut k = zero_t_kraus(p, tau)?;
    if opts.corrupt_kraus {
        k.operators[1] *= Complex64::from(1.01);
    }
    Ok(k)
}

fn zero_t_equivalence(opts: &ValidationOptions) -> Check {
    const TOL: f64 = 1e-7;
    let mut worst = 0.0f64;
    for g2 in [0.01, 0.1, 0.5] {
        for ratio in [0.5, 0.95, 1.0] {
            for tau in [0.3, 1.0, 5.0] {
                let p = ModelParams::from_ratios(10.0, g2, ratio, 0.0)?;
                let diff = propagator(&p, tau)? - kraus_superoperator(&kraus(&p, tau, opts)?)?;
                worst = worst.max(frobenius_norm(&diff));
            }
        }
    }
    Ok((worst < TOL, format!("27 points, max |expm - Kraus|_F = {} (tol {TOL:e})", num(worst))))
}

/// Closed-form down-measurement map in (uu, dd, ud, du) ordering.
fn down_closed_form(p: &ModelParams, tau: f64) -> ComplexMatrix {
    let f = f_down(p, tau);
    let mut v = ComplexMatrix::zeros(4, 4);
    v[(0, 0)] = Complex64::from(f.norm_sqr());
    v[(1, 0)] = Complex64::from(0.5 * (1.0 - (-p.gamma1 * tau).exp()));
    v[(1, 1)] = Complex64::from(1.0);
    v[(2, 2)] = f;
    v[(3, 3)] = f.conj();
    v
}

fn down_map() -> Check {
    const TOL: f64 = 1e-10;
    let p = defaults(0.0)?;
    let (mut map_err, mut eig_err, mut state_err, mut purity_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for tau in [0.5, 1.0, 3.7, 7.82] {
        let m = MeasurementSpec::new(PI, 0.0, tau)?;
        let map = contracted_map(&p, &m)?;
        let diff = to_qubit_report_order(&map)? - down_closed_form(&p, tau);
        map_err = map_err.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));

        let f = f_down(&p, tau);
        let res = analyze(&map)?;
        for want in [Complex64::from(1.0), f, f.conj(), Complex64::from(f.norm_sqr())] {
            let d = res.spectrum.eigenvalues.iter().map(|l| (l - want).norm()).fold(f64::INFINITY, f64::min);
            eig_err = eig_err.max(d);
        }
        eig_err = eig_err.max((res.lambda0() - Complex64::from(1.0)).norm());
        let down = PureStateSpec::new(PI, 0.0).density();
        state_err = state_err.max(frobenius_norm(&(&res.extracted_state - down)));
        purity_err = purity_err.max((res.purity - 1.0).abs());
    }
    let ok = map_err < TOL && eig_err < TOL && state_err < TOL && purity_err < TOL;
    Ok((
        ok,
        format!(
            "max entry error {}, eigenvalue error {}, state error {}, |P - 1| = {} (tol {TOL:e})",
            num(map_err),
            num(eig_err),
            num(state_err),
            num(purity_err)
        ),
    ))
}

fn up_cases() -> Check {
    const TOL: f64 = 1e-10;
    const POINTS: usize = 2000;
    let p = defaults(0.0)?;
    let (mut mismatches, mut flips, mut case_two_points) = (0usize, 0usize, 0usize);
    let mut worst = 0.0f64;
    let mut prev: Option<(bool, bool)> = None;
    for i in 0..POINTS {
        let tau = 0.01 + 19.99 * i as f64 / (POINTS - 1) as f64;
        let upper = (-p.gamma2 * tau).exp();
        let coherence = f_up(&p, tau).norm_sqr();
        let margin = (-0.5 * p.gamma2 * tau).exp() - coherence.sqrt();
        let res = analyze(&contracted_map(&p, &MeasurementSpec::new(0.0, 0.0, tau)?)?)?;
        let l0 = res.lambda0();
        let upper_dominates = (l0 - upper).norm() < (l0 - coherence).norm();
        let expected = margin > 0.0;
        if upper_dominates != expected {
            mismatches += 1;
        }
        if let Some((prev_dom, prev_exp)) = prev {
            if prev_dom != upper_dominates {
                flips += 1;
                if prev_exp == expected {
                    mismatches += 1;
                }
            }
        }
        prev = Some((upper_dominates, expected));
        if expected {
            case_two_points += 1;
            let a = alpha_analytic(&p, tau)?;
            worst = worst.max((res.purity - (1.0 + a * a) / (1.0 + a).powi(2)).abs());
        }
    }
    let ok = mismatches == 0 && flips > 0 && worst < TOL;
    Ok((
        ok,
        format!(
            "{POINTS} intervals, {flips} case flips, {mismatches} mismatches, case II purity error {} over {case_two_points} points (tol {TOL:e})",
            num(worst)
        ),
    ))
}

fn weak_damping() -> Check {
    const TOL: f64 = 0.05;
    let p = ModelParams::from_ratios(10.0, 1e-4, 0.95, 0.0)?;
    let tau = 1.0;
    let m = MeasurementSpec::new(0.0, 0.0, tau)?;
    let law = p.gamma2 * tau / (p.epsilon * tau).sin().powi(2);
    let exact = 1.0 - analyze(&contracted_map(&p, &m)?)?.purity;
    let pert = 1.0 - perturbative_purity(&p, &m)?;
    let e1 = (exact - law).abs() / law;
    let e2 = (pert - exact).abs() / exact;
    Ok((
        e1 < TOL && e2 < TOL,
        format!(
            "1 - P: exact {}, law {}, perturbative {}; relative errors {} and {} (tol {TOL})",
            num(exact),
            num(law),
            num(pert),
            num(e1),
            num(e2)
        ),
    ))
}

fn optimal_interval() -> Check {
    let x = optimal_tau_weak_damping(1.0)?;
    let ratio = x / PI;
    let resid = (x.tan() - 2.0 * x).abs();
    Ok((
        (ratio - 0.37).abs() <= 0.005 && resid < 1e-9,
        format!("x*/pi = {}, |tan x* - 2 x*| = {} (tol 0.005, 1e-9)", num(ratio), num(resid)),
    ))
}

fn default_grid(kt_over_omega: f64, ideal: bool, opts: &ValidationOptions) -> Result<Vec<SweepRow>, qpurify_core::Error> {
    let mut cfg = Config::default();
    cfg.model.kt_over_omega = kt_over_omega;
    cfg.model.ideal = ideal;
    cfg.workers = opts.workers;
    run_sweep(&cfg).map_err(|e| qpurify_core::Error::Numeric(e.to_string()))
}

fn ideal_sweep(opts: &ValidationOptions) -> Check {
    const TOL: f64 = 1e-8;
    let rows = default_grid(0.0, true, opts)?;
    let clean: Vec<&SweepRow> = rows.iter().filter(|r| !r.degenerate).collect();
    let worst = clean.iter().map(|r| (r.purity - 1.0).abs()).fold(0.0, f64::max);
    Ok((
        !clean.is_empty() && worst < TOL,
        format!(
            "{} of {} cells non-degenerate, max |P - 1| = {} (tol {TOL:e})",
            clean.len(),
            rows.len(),
            num(worst)
        ),
    ))
}

fn hot_collapse(opts: &ValidationOptions) -> Check {
    let rows = default_grid(10.0, false, opts)?;
    let low = rows.iter().filter(|r| r.purity <= 0.52).count();
    let frac = low as f64 / rows.len() as f64;
    Ok((frac >= 0.9, format!("{low} of {} cells with P <= 0.52, fraction {} (need >= 0.9)", rows.len(), num(frac))))
}

/// Whether some eigenvector of one of the `vs` is a common eigenvector of all.
fn has_pure_eigenstate(vs: &[ComplexMatrix]) -> Result<bool, qpurify_core::Error> {
    const TOL: f64 = 1e-8;
    for v in vs {
        if frobenius_norm(v) == 0.0 {
            continue;
        }
        let es = eig(v)?;
        for k in 0..2 {
            let cand = PureStateSpec::from_ket(&es.right.column(k).into_owned())?;
            if pure_eigenstate_criterion(vs, &cand, TOL).holds {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn cold_pockets(opts: &ValidationOptions) -> Check {
    let kt = 0.01;
    let rows = default_grid(kt, false, opts)?;
    let near_axis = |t: f64| t <= 0.1 || t >= 0.9;
    let pockets = rows.iter().filter(|r| r.purity >= 0.99 && near_axis(r.point.theta_over_pi)).count();

    // Thermal occupations at this temperature are below 1e-40, so the
    // zero-temperature operators describe the channel.
    let p = defaults(0.0)?;
    let (mut interior_passes, mut axis_misses) = (0usize, 0usize);
    for r in &rows {
        let th = r.point.theta_over_pi;
        let m = MeasurementSpec::new(th * PI, r.point.chi, r.point.epsilon_tau)?;
        let vs = contract_kraus(&kraus(&p, m.tau, opts)?, &m)?;
        let pure = has_pure_eigenstate(&vs)?;
        let on_axis = th == 0.0 || th == 1.0;
        if pure && !on_axis {
            interior_passes += 1;
        }
        if !pure && on_axis {
            axis_misses += 1;
        }
    }
    let occ = qpurify_core::model::thermal_occupations(&model_at(&Config::default().model, kt)?)?;
    Ok((
        pockets > 0 && interior_passes == 0 && axis_misses == 0,
        format!(
            "{pockets} cells with P >= 0.99 near theta = 0 or pi; exact criterion passes off-axis at {interior_passes} cells, fails on-axis at {axis_misses} (n+ = {})",
            num(occ.n_plus)
        ),
    ))
}

fn trajectory_peak() -> Check {
    let p = defaults(1e-3)?;
    let m = MeasurementSpec::new(2.25, 0.0, 7.82)?;
    let traj = trajectory(&contracted_map(&p, &m)?, &maximally_mixed(), 50)?;
    let pur: Vec<f64> = traj.points.iter().map(|pt| pt.purity).collect();
    let argmax = pur
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (n, &v)| if v > best.1 { (n, v) } else { best })
        .0;
    let ok = argmax == 2 && pur[2] > pur[1] && pur[2] > pur[10];
    Ok((
        ok,
        format!(
            "argmax N = {argmax}; P(1) = {}, P(2) = {}, P(10) = {}, P(50) = {}",
            num(pur[1]),
            num(pur[2]),
            num(pur[10]),
            num(pur[50])
        ),
    ))
}

fn measurement_count() -> Check {
    const P0: f64 = 0.99;
    let p = defaults(0.01)?;
    let map = contracted_map(&p, &MeasurementSpec::new(0.75 * PI, 0.0, 1.0)?)?;
    let spec = eig(&map)?;
    let constant = estimate_measurements(&spec, &maximally_mixed(), P0)?.numerator_constant;
    let const_err = (constant - (3f64.ln() + 99f64.ln())).abs();

    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    let mut max_n = 0;
    for _ in 0..20 {
        let a = ComplexMatrix::from_fn(2, 2, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rho = &a * a.adjoint();
        let rho = &rho / rho.trace();
        let est = estimate_measurements(&spec, &rho, P0)?;
        max_n = max_n.max(est.count);
        // Iterate the map directly and split the result into components.
        let mut state = rho.clone();
        for _ in 0..est.count {
            state = apply(&map, &state)?;
        }
        let v = vectorize(&state);
        let comps: Vec<f64> = (0..4)
            .map(|k| (spec.left.row(k) * &v)[(0, 0)].norm() * spec.right.column(k).norm())
            .collect();
        let weight = comps[0] / comps.iter().sum::<f64>();
        worst = worst.min(weight);
    }
    Ok((
        const_err < 1e-12 && (constant - 5.7).abs() < 0.05 && worst >= P0,
        format!(
            "ln 3 + ln 99 = {}; min weight over 20 states {} at N <= {max_n} (need >= {P0})",
            num(constant),
            num(worst)
        ),
    ))
}

fn channel_properties(opts: &ValidationOptions) -> Check {
    const CHOI_TOL: f64 = -1e-9;
    const TRACE_TOL: f64 = 1e-12;
    const SEMIGROUP_TOL: f64 = 1e-9;
    let mut rng = StdRng::seed_from_u64(11);
    let (mut min_choi, mut trace_err, mut semi_err, mut kraus_defect) = (f64::INFINITY, 0.0f64, 0.0f64, 0.0f64);
    let mut zero_t_samples = 0;
    for i in 0..100 {
        let kt = if i % 4 == 0 { 0.0 } else { rng.gen_range(0.0..10.0) };
        let p = ModelParams::from_ratios(
            rng.gen_range(2.0..20.0),
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.1..3.0),
            kt,
        )?;
        let tau = rng.gen_range(0.1..10.0);
        let mut channels = vec![propagator(&p, tau)?];
        if kt == 0.0 {
            zero_t_samples += 1;
            let k = kraus(&p, tau, opts)?;
            kraus_defect = kraus_defect.max(k.completeness_defect());
            channels.push(kraus_superoperator(&k)?);
        }
        for ch in &channels {
            min_choi = min_choi.min(hermitian_eigenvalues(&choi_matrix(ch)?)?[0]);
            trace_err = trace_err.max(trace_row_error(ch));
        }
        let (s, t) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0));
        let lhs = propagator(&p, s)? * propagator(&p, t)?;
        semi_err = semi_err.max(frobenius_norm(&(lhs - propagator(&p, s + t)?)));
    }
    let ok = min_choi >= CHOI_TOL && trace_err <= TRACE_TOL && semi_err < SEMIGROUP_TOL && kraus_defect < 1e-10;
    Ok((
        ok,
        format!(
            "100 samples ({zero_t_samples} with Kraus form): min Choi eigenvalue {}, trace-row error {}, semigroup error {}, Kraus completeness defect {} (tol {CHOI_TOL:e}, {TRACE_TOL:e}, {SEMIGROUP_TOL:e}, 1e-10)",
            num(min_choi),
            num(trace_err),
            num(semi_err),
            num(kraus_defect)
        ),
    ))
}

/// `max_j |sum_i S[(i,i), j] - delta_j|` for a superoperator in column stacking.
fn trace_row_error(s: &ComplexMatrix) -> f64 {
    let n = (s.nrows() as f64).sqrt().round() as usize;
    (0..s.ncols())
        .map(|j| {
            let row: Complex64 = (0..n).map(|i| s[(i * (n + 1), j)]).sum();
            let want = if j % (n + 1) == 0 { 1.0 } else { 0.0 };
            (row - Complex64::from(want)).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_criterion_is_addressable() {
        assert!(run_criterion(0, &ValidationOptions::default()).is_none());
        assert!(run_criterion(12, &ValidationOptions::default()).is_none());
        let o = run_criterion(5, &ValidationOptions::default()).unwrap();
        assert!(o.passed, "{o}");
        assert!(o.to_string().starts_with("criterion  5 PASS"));
    }

    #[test]
    fn trace_row_of_identity_is_exact() {
        assert_eq!(trace_row_error(&ComplexMatrix::identity(16, 16)), 0.0);
        let mut s = ComplexMatrix::identity(4, 4);
        s[(0, 1)] = Complex64::from(0.5);
        assert_eq!(trace_row_error(&s), 0.5);
    }
}
