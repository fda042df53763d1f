//! The channel acting on S+X between two measurements.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extraction::MeasurementSpec;
use crate::linalg::{conjugation_sum, expm, frobenius_norm, ComplexMatrix, ComplexVector, Superoperator};
use crate::model::{liouvillian, transition, CoupledState, ModelParams};

/// Below this relative rate difference the equal-rate limit of the cascade
/// coefficients is used.
pub const EQUAL_RATE_RTOL: f64 = 1e-8;

/// Operator-sum representation `rho -> sum_k T_k rho T_k^dag` at time `tau`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    pub operators: Vec<ComplexMatrix>,
    pub tau: f64,
}

impl KrausSet {
    /// `|| sum_k T_k^dag T_k - I ||_F`.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.operators.first().map_or(0, |t| t.nrows());
        let sum = self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(n, n), |acc, t| acc + t.adjoint() * t);
        frobenius_norm(&(sum - ComplexMatrix::identity(n, n)))
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("interval must be finite and non-negative, got {tau}")))
    }
}

/// `exp(L tau)` for the full thermal generator.
pub fn propagator(p: &ModelParams, tau: f64) -> Result<Superoperator> {
    check_tau(tau)?;
    expm(&liouvillian(p)?, tau)
}

/// Population transferred `|2> -> |1>` by time `t` under the zero-temperature
/// cascade: `gamma2 (e^{-gamma2 t} - e^{-gamma1 t}) / (gamma1 - gamma2)`,
/// or its limit `gamma t e^{-gamma t}` when the rates coincide.
pub fn cascade_weight(gamma1: f64, gamma2: f64, t: f64) -> f64 {
    let delta = gamma1 - gamma2;
    let scale = gamma1.max(gamma2);
    if scale == 0.0 {
        return 0.0;
    }
    if delta.abs() < EQUAL_RATE_RTOL * scale {
        let g = 0.5 * (gamma1 + gamma2);
        g * t * (-g * t).exp()
    } else {
        // e^{-g2 t} - e^{-g1 t} = -e^{-g2 t} expm1(-delta t)
        -gamma2 * (-gamma2 * t).exp() * (-delta * t).exp_m1() / delta
    }
}

/// Amplitude coefficients of the four zero-temperature Kraus operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTemperatureAmplitudes {
    /// `|1> -> |0>`: `sqrt(1 - e^{-gamma1 t})`
    pub one_to_zero: f64,
    /// `|2> -> |1>`: `sqrt(cascade_weight)`
    pub two_to_one: f64,
    /// `|2> -> |0>`: `sqrt(1 + (gamma2 e^{-gamma1 t} - gamma1 e^{-gamma2 t}) / (gamma1 - gamma2))`
    pub two_to_zero: f64,
}

impl ZeroTemperatureAmplitudes {
    pub fn new(gamma1: f64, gamma2: f64, t: f64) -> Self {
        let w21 = cascade_weight(gamma1, gamma2, t);
        // Completeness on |2>: e^{-gamma2 t} + w21 + w20 = 1.
        let w20 = (-(-gamma2 * t).exp_m1() - w21).max(0.0);
        Self {
            one_to_zero: (-(-gamma1 * t).exp_m1()).max(0.0).sqrt(),
            two_to_one: w21.max(0.0).sqrt(),
            two_to_zero: w20.sqrt(),
        }
    }
}

/// The closed-form zero-temperature channel as four Kraus operators in the
/// product basis.
pub fn zero_t_kraus(p: &ModelParams, tau: f64) -> Result<KrausSet> {
    p.validate()?;
    check_tau(tau)?;
    if p.temperature != 0.0 {
        return Err(Error::Unsupported(format!(
            "closed-form Kraus operators exist only at zero temperature (T = {})",
            p.temperature
        )));
    }
    use CoupledState::*;
    let phase = |energy: f64, decay: f64| Complex64::new(-decay * tau, -energy * tau).exp();
    let t0 = Zero.projector()
        + One.projector() * phase(One.energy(p), 0.5 * p.gamma1)
        + Two.projector() * phase(Two.energy(p), 0.5 * p.gamma2)
        + Singlet.projector() * phase(Singlet.energy(p), 0.0);
    let amp = ZeroTemperatureAmplitudes::new(p.gamma1, p.gamma2, tau);
    let t1 = transition(One, Zero) * Complex64::from(amp.one_to_zero);
    let t2 = transition(Two, One) * Complex64::from(amp.two_to_one);
    let t3 = transition(Two, Zero) * Complex64::from(amp.two_to_zero);
    Ok(KrausSet {
        operators: vec![t0, t1, t2, t3],
        tau,
    })
}

pub fn kraus_superoperator(k: &KrausSet) -> Result<Superoperator> {
    conjugation_sum(&k.operators)
}

/// `<Phi|_X op |Phi>_X` for an operator on S+X, giving an operator on S.
pub fn contract_ancilla(op: &ComplexMatrix, ancilla: &ComplexVector) -> Result<ComplexMatrix> {
    if op.shape() != (4, 4) || ancilla.len() != 2 {
        return Err(Error::Dimension(format!(
            "expected a 4x4 two-qubit operator and a 2-component ket, got {}x{} and {}",
            op.nrows(),
            op.ncols(),
            ancilla.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(2, 2, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..2 {
            for y in 0..2 {
                acc += ancilla[x].conj() * op[(2 * a + x, 2 * b + y)] * ancilla[y];
            }
        }
        acc
    }))
}

/// Contracted operators `V_k = <Phi| T_k |Phi>` on the target.
pub fn contract_kraus(k: &KrausSet, phi: &MeasurementSpec) -> Result<Vec<ComplexMatrix>> {
    let ket = phi.ancilla_ket();
    k.operators.iter().map(|t| contract_ancilla(t, &ket)).collect()
}
