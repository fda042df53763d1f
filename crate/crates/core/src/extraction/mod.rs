//! Measurement-conditioned dynamics of the target qubit and the state it is
//! driven to after many successful ancilla measurements.

mod criterion;
mod efficiency;
mod map;
mod perturbative;

pub use criterion::{pure_eigenstate_criterion, CriterionVerdict};
pub use efficiency::{
    dominance_weight, estimate_measurements, spectral_success_probability, trajectory, MeasurementEstimate, Trajectory,
    TrajectoryPoint, UNDERFLOW_THRESHOLD,
};
pub use map::{
    alpha_analytic, analyze, contracted_map, contracted_map_from_kraus, contraction_superop, embedding_superop,
    f_down, f_up, purity, ExtractionResult, SpectralDecomposition,
};
pub use perturbative::{
    gauss_legendre, optimal_tau_weak_damping, perturbation_map, perturbative_purity, QUADRATURE_START_NODES,
    QUADRATURE_RTOL,
};

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// The ancilla state `cos(theta/2)|u> + e^{i chi} sin(theta/2)|d>` that every
/// measurement must confirm, and the interval between measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSpec {
    pub theta: f64,
    pub chi: f64,
    pub tau: f64,
}

impl MeasurementSpec {
    pub fn new(theta: f64, chi: f64, tau: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Parameter(format!("theta must lie in [0, pi], got {theta}")));
        }
        if !(0.0..TAU).contains(&chi) {
            return Err(Error::Parameter(format!("chi must lie in [0, 2 pi), got {chi}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Parameter(format!("tau must be positive, got {tau}")));
        }
        Ok(Self { theta, chi, tau })
    }

    pub fn ancilla_ket(&self) -> ComplexVector {
        bloch_ket(self.theta, self.chi)
    }

    /// `|Phi><Phi|`.
    pub fn ancilla_projector(&self) -> ComplexMatrix {
        let k = self.ancilla_ket();
        &k * k.adjoint()
    }
}

/// A candidate pure target state `cos(eta/2)|u> + e^{i xi} sin(eta/2)|d>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureStateSpec {
    pub eta: f64,
    pub xi: f64,
}

impl PureStateSpec {
    pub fn new(eta: f64, xi: f64) -> Self {
        Self { eta, xi }
    }

    /// Bloch angles of an arbitrary nonzero ket (global phase dropped).
    pub fn from_ket(v: &ComplexVector) -> Result<Self> {
        if v.len() != 2 {
            return Err(Error::Dimension(format!("expected a qubit ket, got length {}", v.len())));
        }
        let (a, b) = (v[0], v[1]);
        if a.norm() == 0.0 && b.norm() == 0.0 {
            return Err(Error::Numeric("zero vector has no Bloch angles".into()));
        }
        let eta = 2.0 * b.norm().atan2(a.norm());
        let xi = if b.norm() == 0.0 || a.norm() == 0.0 {
            if b.norm() == 0.0 { 0.0 } else { b.arg() }
        } else {
            b.arg() - a.arg()
        };
        Ok(Self { eta, xi: xi.rem_euclid(TAU) })
    }

    pub fn ket(&self) -> ComplexVector {
        bloch_ket(self.eta, self.xi)
    }

    /// `sin(eta/2)|u> - e^{i xi} cos(eta/2)|d>`.
    pub fn perp_ket(&self) -> ComplexVector {
        let ph = Complex64::from_polar(1.0, self.xi);
        ComplexVector::from_column_slice(&[
            Complex64::from((self.eta / 2.0).sin()),
            -ph * (self.eta / 2.0).cos(),
        ])
    }

    pub fn density(&self) -> ComplexMatrix {
        let k = self.ket();
        &k * k.adjoint()
    }
}

fn bloch_ket(polar: f64, azimuth: f64) -> ComplexVector {
    ComplexVector::from_column_slice(&[
        Complex64::from((polar / 2.0).cos()),
        Complex64::from_polar((polar / 2.0).sin(), azimuth),
    ])
}

/// `I / 2`.
pub fn maximally_mixed() -> ComplexMatrix {
    ComplexMatrix::identity(2, 2) * Complex64::from(0.5)
}

/// Checks that `rho` is a 2x2 density matrix (Hermitian, unit trace, PSD).
pub fn validate_density(rho: &ComplexMatrix) -> Result<()> {
    if rho.shape() != (2, 2) {
        return Err(Error::Dimension(format!("expected a 2x2 density matrix, got {}x{}", rho.nrows(), rho.ncols())));
    }
    crate::linalg::ensure_finite(rho, "density matrix")?;
    let herm = crate::linalg::frobenius_norm(&(rho - rho.adjoint()));
    let tr = rho.trace();
    if herm > 1e-10 || (tr - Complex64::from(1.0)).norm() > 1e-10 {
        return Err(Error::Parameter("density matrix must be Hermitian with unit trace".into()));
    }
    // 2x2 Hermitian: PSD iff determinant >= 0 given unit trace.
    let det = (rho[(0, 0)] * rho[(1, 1)] - rho[(0, 1)] * rho[(1, 0)]).re;
    if det < -1e-10 || rho[(0, 0)].re < -1e-10 || rho[(1, 1)].re < -1e-10 {
        return Err(Error::Parameter("density matrix must be positive semidefinite".into()));
    }
    Ok(())
}
