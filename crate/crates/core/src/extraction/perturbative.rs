//! First-order purity of the extracted state in the weak-damping regime.

use num_complex::Complex64;

use super::map::{contraction_superop, embedding_superop};
use super::MeasurementSpec;
use crate::channel::contract_ancilla;
use crate::error::{Error, Result};
use crate::linalg::{diag, eig, frobenius_norm, sandwich, ComplexMatrix, Superoperator};
use crate::model::{coupled_basis_change, dissipator, CoupledState, ModelParams};

/// Node count of the first quadrature pass.
pub const QUADRATURE_START_NODES: usize = 32;
/// Node doubling stops once successive estimates agree to this (relative).
pub const QUADRATURE_RTOL: f64 = 1e-8;

const QUADRATURE_MAX_NODES: usize = 4096;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Closed-system evolution superoperator at time `t`, built from the known
/// eigenbasis of the Hamiltonian.
fn unitary_superop(basis: &ComplexMatrix, energies: &[f64], t: f64) -> Superoperator {
    let phases: Vec<Complex64> = energies.iter().map(|e| Complex64::from_polar(1.0, -e * t)).collect();
    let u = basis * diag(&phases) * basis.adjoint();
    sandwich(&u, &u.adjoint())
}

fn energies(p: &ModelParams) -> Vec<f64> {
    CoupledState::ALL.iter().map(|s| s.energy(p)).collect()
}

/// First-order damping correction to the conditional map,
/// `<Phi| int_0^tau U(tau - t) D U(t) dt (. ⊗ |Phi><Phi|) |Phi>`,
/// with `U` the closed-system evolution and `D` the dissipator.
pub fn perturbation_map(p: &ModelParams, m: &MeasurementSpec) -> Result<Superoperator> {
    let d = dissipator(p)?;
    if frobenius_norm(&d) == 0.0 {
        return Ok(Superoperator::zeros(4, 4));
    }
    let basis = coupled_basis_change();
    let en = energies(p);
    let pin = embedding_superop(m);
    let pout = contraction_superop(m);

    let integrate = |n: usize| -> Superoperator {
        let (x, w) = gauss_legendre(n);
        let half = 0.5 * m.tau;
        let mut acc = Superoperator::zeros(4, 4);
        for (xi, wi) in x.iter().zip(&w) {
            let t = half * (xi + 1.0);
            let left = &pout * unitary_superop(&basis, &en, m.tau - t);
            let right = unitary_superop(&basis, &en, t) * &pin;
            acc += left * &d * right * Complex64::from(wi * half);
        }
        acc
    };

    let mut n = QUADRATURE_START_NODES;
    let mut prev = integrate(n);
    while n < QUADRATURE_MAX_NODES {
        n *= 2;
        let next = integrate(n);
        let change = frobenius_norm(&(&next - &prev));
        if change <= QUADRATURE_RTOL * frobenius_norm(&next) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Convergence { dim: 16 })
}

/// Purity of the extracted state to first order in the damping rates:
/// `1 - 2 Re sum_{mn != 00} <u_n|Q_0|u_m> (sigma~_mn, dV sigma_00) / (lambda_00 - lambda_mn)`
/// where `u_n`, `v_n` are the right and left eigenvectors of the ideal
/// contracted evolution `V_0 = <Phi| e^{-iH tau} |Phi>`,
/// `sigma_mn = |u_m><u_n|`, `sigma~_mn = |v_m><v_n|` and
/// `lambda_mn = mu_m conj(mu_n)`.
pub fn perturbative_purity(p: &ModelParams, m: &MeasurementSpec) -> Result<f64> {
    let basis = coupled_basis_change();
    let en = energies(p);
    let phases: Vec<Complex64> = en.iter().map(|e| Complex64::from_polar(1.0, -e * m.tau)).collect();
    let u_tau = &basis * diag(&phases) * basis.adjoint();
    let v0 = contract_ancilla(&u_tau, &m.ancilla_ket())?;
    let es = eig(&v0)?;
    if !es.diagonalizable || es.moduli_equal(0, 1) {
        return Err(Error::Degenerate(
            "ideal conditional evolution has no unique dominant eigenvalue".into(),
        ));
    }

    let dv = perturbation_map(p, m)?;
    let mu = &es.eigenvalues;
    let u = |k: usize| es.right.column(k).into_owned();
    let sigma00 = &u(0) * u(0).adjoint();
    let image = crate::linalg::apply(&dv, &sigma00)?;
    let q0 = ComplexMatrix::identity(2, 2) - &sigma00;
    let lambda00 = mu[0] * mu[0].conj();

    let mut correction = Complex64::new(0.0, 0.0);
    for mi in 0..2 {
        for ni in 0..2 {
            if (mi, ni) == (0, 0) {
                continue;
            }
            let weight = (u(ni).adjoint() * &q0 * u(mi))[(0, 0)];
            if weight.norm() == 0.0 {
                continue;
            }
            // (|v_m><v_n|, X) = <v_m| X |v_n> with <v_k| the k-th left row.
            let overlap = (es.left.row(mi) * &image * es.left.row(ni).adjoint())[(0, 0)];
            correction += weight * overlap / (lambda00 - mu[mi] * mu[ni].conj());
        }
    }
    Ok(1.0 - 2.0 * correction.re)
}

/// Interval `tau = x*/epsilon` minimizing the weak-damping loss
/// `x / sin^2 x`, `x = epsilon tau`, over `(0, pi)`.
///
/// The minimizer is bracketed on `[0.1, 3]` and located by bisection on the
/// sign of the derivative, `sin x - 2x cos x`, down to `1e-12` in `x`.
pub fn optimal_tau_weak_damping(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Parameter(format!("coupling must be positive, got {epsilon}")));
    }
    let slope = |x: f64| x.sin() - 2.0 * x * x.cos();
    let (mut lo, mut hi) = (0.1, 3.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi) / epsilon)
}
