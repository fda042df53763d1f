use num_complex::Complex64;

use super::PureStateSpec;
use crate::linalg::{frobenius_norm, ComplexMatrix};

/// Outcome of testing whether a pure state is a common eigenvector of a set
/// of operators.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionVerdict {
    pub holds: bool,
    /// `alpha_k = <phi| V_k |phi>`.
    pub alphas: Vec<Complex64>,
    /// `sum_k |alpha_k|^2`, the eigenvalue of the map on `|phi><phi|`; only
    /// reported when the criterion holds.
    pub lambda_phi: Option<f64>,
    /// Largest `||V_k phi - alpha_k phi|| / ||V_k||_F` over `k`.
    pub worst_residual: f64,
}

/// A pure state `|phi><phi|` is an eigenvector of `rho -> sum_k V_k rho V_k^dag`
/// exactly when `|phi>` is an eigenvector of every `V_k`.
///
/// Each operator passes when `||V_k phi - alpha_k phi|| <= tol ||V_k||_F`;
/// identically vanishing operators pass trivially.
pub fn pure_eigenstate_criterion(vs: &[ComplexMatrix], candidate: &PureStateSpec, tol: f64) -> CriterionVerdict {
    let phi = candidate.ket();
    let mut alphas = Vec::with_capacity(vs.len());
    let mut worst = 0.0f64;
    let mut holds = true;
    for v in vs {
        let image = v * &phi;
        let alpha = (phi.adjoint() * &image)[(0, 0)];
        let resid = (image - &phi * alpha).norm();
        let scale = frobenius_norm(v);
        if resid > tol * scale {
            holds = false;
        }
        if scale > 0.0 {
            worst = worst.max(resid / scale);
        }
        alphas.push(alpha);
    }
    let lambda_phi = holds.then(|| alphas.iter().map(|a| a.norm_sqr()).sum());
    CriterionVerdict {
        holds,
        alphas,
        lambda_phi,
        worst_residual: worst,
    }
}
