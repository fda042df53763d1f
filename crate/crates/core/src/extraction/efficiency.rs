use num_complex::Complex64;

use super::map::{purity, SpectralDecomposition};
use super::validate_density;
use crate::error::{Error, Result};
use crate::linalg::{apply, devectorize, frobenius_norm, vectorize, ComplexMatrix, Superoperator};

/// Cumulative success probabilities below this are not tracked further.
pub const UNDERFLOW_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub n: usize,
    /// Probability that all `n` measurements succeed.
    pub success_probability: f64,
    /// Purity of the normalized conditional state after `n` measurements.
    pub purity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    /// Set when the run stopped early because the success probability fell
    /// below [`UNDERFLOW_THRESHOLD`].
    pub underflow: bool,
}

/// Repeatedly applies `map` to `rho0`, recording `N = 0..=n_max`.
///
/// The state is renormalized after every step and the success probability is
/// accumulated as a product of per-step traces, so the purity stays accurate
/// long after the raw trace would have underflowed.
pub fn trajectory(map: &Superoperator, rho0: &ComplexMatrix, n_max: usize) -> Result<Trajectory> {
    if map.shape() != (4, 4) {
        return Err(Error::Dimension(format!("expected a 4x4 qubit map, got {}x{}", map.nrows(), map.ncols())));
    }
    validate_density(rho0)?;
    if n_max < 1 {
        return Err(Error::Parameter("n_max must be at least 1".into()));
    }

    let mut points = Vec::with_capacity(n_max + 1);
    let mut rho = rho0.clone();
    let mut prob = 1.0;
    points.push(TrajectoryPoint { n: 0, success_probability: prob, purity: purity(&rho) });

    for n in 1..=n_max {
        let next = apply(map, &rho)?;
        let step = next.trace().re;
        prob *= step;
        if !(prob >= UNDERFLOW_THRESHOLD) || !(step > 0.0) {
            return Ok(Trajectory { points, underflow: true });
        }
        rho = next / Complex64::from(step);
        points.push(TrajectoryPoint { n, success_probability: prob, purity: purity(&rho) });
    }
    Ok(Trajectory { points, underflow: false })
}

/// `tr(V^N rho0) = sum_n lambda_n^N tr(Pi_n rho0)`.
pub fn spectral_success_probability(spec: &SpectralDecomposition, rho0: &ComplexMatrix, n: usize) -> Result<f64> {
    let v = vectorize(rho0);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..spec.dim() {
        let coeff = (spec.left.row(k) * &v)[(0, 0)];
        let comp = devectorize(&(spec.right.column(k) * coeff), rho0.nrows(), rho0.ncols())?;
        total += spec.eigenvalues[k].powu(n as u32) * comp.trace();
    }
    Ok(total.re)
}

/// Estimated number of measurements needed for the dominant component to
/// make up a fraction `p0` of the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementEstimate {
    pub count: u64,
    /// `ln(M - 1) + ln(p0 / (1 - p0))`.
    pub numerator_constant: f64,
    /// `ln(R(rho0) / ||Pi_0 rho0||)`.
    pub initial_state_term: f64,
    /// `ln |lambda0 / lambda1|`.
    pub log_ratio: f64,
    /// Dominance weight at `count`.
    pub weight: f64,
}

/// Frobenius norms `||Pi_n rho0||` of each spectral component.
fn component_norms(spec: &SpectralDecomposition, rho0: &ComplexMatrix) -> Vec<f64> {
    let v = vectorize(rho0);
    (0..spec.dim())
        .map(|k| {
            let coeff = (spec.left.row(k) * &v)[(0, 0)];
            coeff.norm() * spec.right.column(k).norm()
        })
        .collect()
}

/// Dominance weight `|lambda0|^N ||Pi_0 rho|| / sum_n |lambda_n|^N ||Pi_n rho||`.
pub fn dominance_weight(spec: &SpectralDecomposition, rho0: &ComplexMatrix, n: u64) -> f64 {
    let norms = component_norms(spec, rho0);
    let terms: Vec<f64> = spec
        .eigenvalues
        .iter()
        .zip(&norms)
        .map(|(l, c)| if *c == 0.0 { 0.0 } else { l.norm().powf(n as f64) * c })
        .collect();
    terms[0] / terms.iter().sum::<f64>()
}

/// Smallest `N` meeting the sufficient condition
/// `N >= [ln(p0/(1-p0)) + ln(M-1) + ln(R/||Pi_0 rho0||)] / ln|lambda0/lambda1|`
/// with Frobenius norms and `R = max_{n>0} ||Pi_n rho0||`.
pub fn estimate_measurements(spec: &SpectralDecomposition, rho0: &ComplexMatrix, p0: f64) -> Result<MeasurementEstimate> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::Parameter(format!("target quality must lie in (0, 1), got {p0}")));
    }
    if spec.dim() < 2 {
        return Err(Error::Dimension("need at least two eigenvalues".into()));
    }
    if !spec.diagonalizable || spec.moduli_equal(0, 1) {
        return Err(Error::Degenerate("|lambda0| does not exceed |lambda1|".into()));
    }
    let norms = component_norms(spec, rho0);
    if norms[0] <= 1e-14 * frobenius_norm(rho0) {
        return Err(Error::OrthogonalStart);
    }
    let r = norms[1..].iter().copied().fold(0.0, f64::max);
    let m = spec.dim() as f64;
    let numerator_constant = (m - 1.0).ln() + (p0 / (1.0 - p0)).ln();
    let initial_state_term = (r / norms[0]).ln();
    let log_ratio = (spec.eigenvalues[0].norm() / spec.eigenvalues[1].norm()).ln();
    let rhs = (numerator_constant + initial_state_term) / log_ratio;
    let count = if rhs.is_finite() { rhs.ceil().max(0.0) as u64 } else { 0 };
    Ok(MeasurementEstimate {
        count,
        numerator_constant,
        initial_state_term,
        log_ratio,
        weight: dominance_weight(spec, rho0, count),
    })
}
