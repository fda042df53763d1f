//! Two exchange-coupled spins (target S, ancilla X) in a common bosonic bath.
//!
//! Units have `hbar = k_B = 1`. The product basis is ordered
//! `|uu>, |ud>, |du>, |dd>` with the target spin as the left tensor factor,
//! i.e. index `2*s + x` with `up = 0`, `down = 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron, sandwich, ComplexMatrix, ComplexVector, Superoperator, I, ONE, ZERO};

/// Physical constants of the two-spin model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Bohr frequency of each spin.
    pub omega: f64,
    /// Exchange coupling.
    pub epsilon: f64,
    /// Decay rate of the `|1> -> |0>` transition (frequency `omega + epsilon`).
    pub gamma1: f64,
    /// Decay rate of the `|2> -> |1>` transition (frequency `omega - epsilon`).
    pub gamma2: f64,
    /// Bath temperature.
    pub temperature: f64,
}

impl ModelParams {
    pub fn new(omega: f64, epsilon: f64, gamma1: f64, gamma2: f64, temperature: f64) -> Result<Self> {
        let p = Self {
            omega,
            epsilon,
            gamma1,
            gamma2,
            temperature,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds parameters from the dimensionless ratios used for reporting,
    /// with the coupling fixed to one.
    pub fn from_ratios(
        omega_over_epsilon: f64,
        gamma2_over_epsilon: f64,
        gamma1_over_gamma2: f64,
        kt_over_omega: f64,
    ) -> Result<Self> {
        let omega = omega_over_epsilon;
        let gamma2 = gamma2_over_epsilon;
        Self::new(omega, 1.0, gamma1_over_gamma2 * gamma2, gamma2, kt_over_omega * omega)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.omega, self.epsilon, self.gamma1, self.gamma2, self.temperature];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!("non-finite model parameter in {self:?}")));
        }
        if !(self.epsilon >= 0.0 && self.omega > self.epsilon) {
            return Err(Error::Parameter(format!(
                "need omega > epsilon >= 0, got omega = {}, epsilon = {}",
                self.omega, self.epsilon
            )));
        }
        if self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(Error::Parameter(format!(
                "decay rates must be non-negative, got gamma1 = {}, gamma2 = {}",
                self.gamma1, self.gamma2
            )));
        }
        if self.temperature < 0.0 {
            return Err(Error::Parameter(format!(
                "temperature must be non-negative, got {}",
                self.temperature
            )));
        }
        Ok(())
    }

    /// Same model without the bath.
    pub fn ideal(&self) -> Self {
        Self {
            gamma1: 0.0,
            gamma2: 0.0,
            ..*self
        }
    }

    pub fn is_ideal(&self) -> bool {
        self.gamma1 == 0.0 && self.gamma2 == 0.0
    }
}

/// Labels of the triplet/singlet eigenbasis, in the order used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoupledState {
    /// `|uu>`
    Two,
    /// `(|ud> + |du>)/sqrt 2`
    One,
    /// `|dd>`
    Zero,
    /// `(|ud> - |du>)/sqrt 2`
    Singlet,
}

impl CoupledState {
    pub const ALL: [CoupledState; 4] = [Self::Two, Self::One, Self::Zero, Self::Singlet];

    /// Amplitudes over the product basis `|uu>, |ud>, |du>, |dd>`.
    pub fn ket(self) -> ComplexVector {
        let h = Complex64::from(FRAC_1_SQRT_2);
        let amps = match self {
            Self::Two => [ONE, ZERO, ZERO, ZERO],
            Self::One => [ZERO, h, h, ZERO],
            Self::Zero => [ZERO, ZERO, ZERO, ONE],
            Self::Singlet => [ZERO, h, -h, ZERO],
        };
        ComplexVector::from_column_slice(&amps)
    }

    pub fn energy(self, p: &ModelParams) -> f64 {
        match self {
            Self::Two => 2.0 * p.omega,
            Self::One => p.omega + p.epsilon,
            Self::Zero => 0.0,
            Self::Singlet => p.omega - p.epsilon,
        }
    }

    pub fn projector(self) -> ComplexMatrix {
        let k = self.ket();
        &k * k.adjoint()
    }
}

/// `|to><from|` in the product basis.
pub fn transition(from: CoupledState, to: CoupledState) -> ComplexMatrix {
    to.ket() * from.ket().adjoint()
}

/// Unitary whose columns are the coupled-basis kets (`|2>, |1>, |0>, |s>`).
pub fn coupled_basis_change() -> ComplexMatrix {
    let cols: Vec<ComplexVector> = CoupledState::ALL.iter().map(|s| s.ket()).collect();
    ComplexMatrix::from_columns(&cols)
}

/// Mean thermal boson numbers at the two transition frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalOccupations {
    /// At frequency `omega + epsilon`.
    pub n_plus: f64,
    /// At frequency `omega - epsilon`.
    pub n_minus: f64,
}

/// Bose-Einstein occupation of a mode at `frequency` and `temperature`.
pub fn bose_einstein(frequency: f64, temperature: f64) -> Result<f64> {
    if !(frequency > 0.0) {
        return Err(Error::Parameter(format!(
            "bath mode frequency must be positive, got {frequency}"
        )));
    }
    if temperature < 0.0 || !temperature.is_finite() {
        return Err(Error::Parameter(format!("invalid temperature {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (frequency / temperature).exp_m1())
}

pub fn thermal_occupations(p: &ModelParams) -> Result<ThermalOccupations> {
    Ok(ThermalOccupations {
        n_plus: bose_einstein(p.omega + p.epsilon, p.temperature)?,
        n_minus: bose_einstein(p.omega - p.epsilon, p.temperature)?,
    })
}

/// Two-spin Hamiltonian in the product basis:
/// `sum_i omega/2 (1 + sz_i) + epsilon (s+_S s-_X + s-_S s+_X)`.
pub fn hamiltonian(p: &ModelParams) -> Result<ComplexMatrix> {
    p.validate()?;
    let w = Complex64::from(p.omega);
    let e = Complex64::from(p.epsilon);
    #[rustfmt::skip]
    let h = ComplexMatrix::from_row_slice(4, 4, &[
        w * 2.0, ZERO, ZERO, ZERO,
        ZERO,    w,    e,    ZERO,
        ZERO,    e,    w,    ZERO,
        ZERO,    ZERO, ZERO, ZERO,
    ]);
    Ok(h)
}

/// Generator of `rho -> -i [H, rho]`.
pub fn hamiltonian_generator(h: &ComplexMatrix) -> Superoperator {
    let n = h.nrows();
    let id = ComplexMatrix::identity(n, n);
    (kron(&id, h) - kron(&h.transpose(), &id)) * (-I)
}

/// Generator of `rho -> L rho L^dag - {L^dag L, rho}/2`.
pub fn lindblad_dissipator(jump: &ComplexMatrix) -> Superoperator {
    let n = jump.nrows();
    let id = ComplexMatrix::identity(n, n);
    let ldl = jump.adjoint() * jump;
    sandwich(jump, &jump.adjoint()) - (kron(&id, &ldl) + kron(&ldl.transpose(), &id)) * Complex64::from(0.5)
}

/// One dissipative channel of the bath: a rate and a coupled-basis transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationChannel {
    pub rate: f64,
    pub from: CoupledState,
    pub to: CoupledState,
}

/// The four thermal transitions of the bath. The singlet is decoupled.
pub fn dissipation_channels(p: &ModelParams) -> Result<[DissipationChannel; 4]> {
    use CoupledState::*;
    let occ = thermal_occupations(p)?;
    Ok([
        DissipationChannel { rate: p.gamma2 * (1.0 + occ.n_minus), from: Two, to: One },
        DissipationChannel { rate: p.gamma1 * (1.0 + occ.n_plus), from: One, to: Zero },
        DissipationChannel { rate: p.gamma2 * occ.n_minus, from: One, to: Two },
        DissipationChannel { rate: p.gamma1 * occ.n_plus, from: Zero, to: One },
    ])
}

/// Dissipative part of the generator (16x16).
pub fn dissipator(p: &ModelParams) -> Result<Superoperator> {
    p.validate()?;
    let mut d = Superoperator::zeros(16, 16);
    for ch in dissipation_channels(p)? {
        if ch.rate != 0.0 {
            d += lindblad_dissipator(&transition(ch.from, ch.to)) * Complex64::from(ch.rate);
        }
    }
    Ok(d)
}

/// Full Lindblad generator on the 16-dimensional Liouville space of S+X,
/// using the bare Hamiltonian.
pub fn liouvillian(p: &ModelParams) -> Result<Superoperator> {
    Ok(hamiltonian_generator(&hamiltonian(p)?) + dissipator(p)?)
}
