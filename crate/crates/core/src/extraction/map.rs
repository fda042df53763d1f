use num_complex::Complex64;

use super::MeasurementSpec;
use crate::channel::{cascade_weight, propagator, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{
    conjugation_sum, devectorize, eig, frobenius_norm, hermitian_part, kron, vectorize, ComplexMatrix, EigenSystem,
    Superoperator,
};
use crate::channel::contract_kraus;
use crate::model::ModelParams;

pub type SpectralDecomposition = EigenSystem;

/// Dominant eigenvalues below this modulus leave nothing to extract.
const EMPTY_EXTRACTION: f64 = 1e-14;
/// Dominant eigenvectors with smaller trace cannot be normalized to a state.
const TRACELESS: f64 = 1e-12;

/// 16x4 map `vec(rho_S) -> vec(rho_S ⊗ |Phi><Phi|)`.
pub fn embedding_superop(m: &MeasurementSpec) -> Superoperator {
    let proj = m.ancilla_projector();
    let mut out = Superoperator::zeros(16, 4);
    for col in 0..4 {
        let mut e = ComplexMatrix::zeros(2, 2);
        e[(col % 2, col / 2)] = Complex64::from(1.0);
        out.set_column(col, &vectorize(&kron(&e, &proj)));
    }
    out
}

/// 4x16 map `vec(rho_tot) -> vec(<Phi| rho_tot |Phi>)`.
pub fn contraction_superop(m: &MeasurementSpec) -> Superoperator {
    let phi = m.ancilla_ket();
    // (I ⊗ <Phi|) rho (I ⊗ |Phi>)
    let phi_bra = ComplexMatrix::from_row_slice(1, 2, &[phi[0].conj(), phi[1].conj()]);
    let bra = kron(&ComplexMatrix::identity(2, 2), &phi_bra);
    crate::linalg::sandwich(&bra, &bra.adjoint())
}

/// The 4x4 conditional map on the target between two successful measurements.
pub fn contracted_map(p: &ModelParams, m: &MeasurementSpec) -> Result<Superoperator> {
    let full = propagator(p, m.tau)?;
    Ok(contraction_superop(m) * full * embedding_superop(m))
}

/// The same map assembled from contracted Kraus operators.
pub fn contracted_map_from_kraus(k: &KrausSet, m: &MeasurementSpec) -> Result<Superoperator> {
    conjugation_sum(&contract_kraus(k, m)?)
}

/// `f_up(tau) = (1/2) e^{-i(Omega+epsilon) tau} (1 + e^{-gamma1 tau/2} e^{2 i epsilon tau})`.
pub fn f_up(p: &ModelParams, tau: f64) -> Complex64 {
    Complex64::from_polar(0.5, -(p.omega + p.epsilon) * tau)
        * (Complex64::from(1.0) + Complex64::from_polar((-0.5 * p.gamma1 * tau).exp(), 2.0 * p.epsilon * tau))
}

/// `f_down(tau) = (1/2) e^{-i(Omega-epsilon) tau} (1 + e^{-gamma1 tau/2} e^{-2 i epsilon tau})`.
pub fn f_down(p: &ModelParams, tau: f64) -> Complex64 {
    Complex64::from_polar(0.5, -(p.omega - p.epsilon) * tau)
        * (Complex64::from(1.0) + Complex64::from_polar((-0.5 * p.gamma1 * tau).exp(), -2.0 * p.epsilon * tau))
}

/// Spectral analysis of a conditional map and the state it extracts.
#[derive(Debug, Clone)]
pub struct ExtractionResult {
    pub spectrum: SpectralDecomposition,
    /// Hermitized, trace-normalized dominant right eigenvector.
    pub extracted_state: ComplexMatrix,
    pub purity: f64,
    /// `ln |lambda0 / lambda1|`.
    pub log_ratio: f64,
    /// Dominant modulus shared by several eigenvalues, or a defective map.
    pub degenerate: bool,
}

impl ExtractionResult {
    pub fn lambda0(&self) -> Complex64 {
        self.spectrum.eigenvalues[0]
    }

    pub fn lambda1(&self) -> Complex64 {
        self.spectrum.eigenvalues.get(1).copied().unwrap_or_default()
    }
}

/// `tr(rho^2)` of a Hermitian matrix.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    frobenius_norm(rho).powi(2)
}

pub fn analyze(map: &Superoperator) -> Result<ExtractionResult> {
    if map.shape() != (4, 4) {
        return Err(Error::Dimension(format!("expected a 4x4 qubit map, got {}x{}", map.nrows(), map.ncols())));
    }
    let spectrum = eig(map)?;
    let l0 = spectrum.eigenvalues[0];
    if l0.norm() < EMPTY_EXTRACTION {
        return Err(Error::EmptyExtraction(l0.norm()));
    }
    let l1 = spectrum.eigenvalues[1];
    let log_ratio = (l0.norm() / l1.norm()).ln();
    let mut degenerate = !spectrum.diagonalizable || spectrum.moduli_equal(0, 1);

    let sigma = devectorize(&spectrum.right.column(0).into_owned(), 2, 2)?;
    let tr = sigma.trace();
    let (extracted_state, purity_value) = if tr.norm() < TRACELESS {
        degenerate = true;
        let h = hermitian_part(&sigma);
        let nrm = frobenius_norm(&h);
        (if nrm > 0.0 { h / Complex64::from(nrm) } else { h }, f64::NAN)
    } else {
        let rho = hermitian_part(&(sigma / tr));
        let pur = purity(&rho);
        (rho, pur)
    };

    Ok(ExtractionResult {
        spectrum,
        extracted_state,
        purity: purity_value,
        log_ratio,
        degenerate,
    })
}

/// Mixing parameter of the state extracted when the ancilla is repeatedly
/// found up at zero temperature and the upper population decays slower than
/// the coherence `|f_up|`:
/// `alpha = gamma2 (e^{-gamma2 tau} - e^{-gamma1 tau}) / [2 (gamma1 - gamma2)(e^{-gamma2 tau} - |f_up|^2)]`.
///
/// The extracted state is `(|u><u| + alpha |d><d|) / (1 + alpha)`.
pub fn alpha_analytic(p: &ModelParams, tau: f64) -> Result<f64> {
    p.validate()?;
    if p.temperature != 0.0 {
        return Err(Error::Unsupported(format!(
            "closed-form mixing parameter requires zero temperature (T = {})",
            p.temperature
        )));
    }
    let upper = (-0.5 * p.gamma2 * tau).exp();
    let f = f_up(p, tau).norm();
    if !(upper > f) {
        return Err(Error::Domain(format!(
            "the pure state |d> is extracted here (e^(-gamma2 tau/2) = {upper} <= |f_up| = {f})"
        )));
    }
    let gap = (-p.gamma2 * tau).exp() - f * f;
    Ok(cascade_weight(p.gamma1, p.gamma2, tau) / (2.0 * gap))
}
