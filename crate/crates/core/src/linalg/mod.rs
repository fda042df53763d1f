//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Matrices are `nalgebra` dense matrices of `Complex64`. Superoperators act
//! on density matrices flattened by **column stacking**:
//! `vec(rho)[i + n*j] = rho[(i, j)]`, so that `vec(A rho B) = (B^T ⊗ A) vec(rho)`.
//!
//! For a single qubit the literature often lists the components as
//! `(rho_uu, rho_dd, rho_ud, rho_du)` instead; [`to_qubit_report_order`]
//! permutes a 4x4 superoperator into that ordering for display and for
//! entrywise comparison with closed-form maps.

mod eig;
mod expm;

pub use eig::{eig, EigenSystem, DEGENERACY_RTOL, RCOND_THRESHOLD};
pub use expm::{expm, PADE_ORDER, PADE_THETA};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// A matrix acting on column-stacked density matrices.
pub type Superoperator = ComplexMatrix;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Position of each report-order component `(uu, dd, ud, du)` inside the
/// column-stacked vector of a 2x2 matrix.
pub const QUBIT_REPORT_ORDER: [usize; 4] = [0, 3, 2, 1];

pub fn ensure_square(m: &ComplexMatrix, what: &str) -> Result<()> {
    if m.nrows() == m.ncols() && m.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "{what} requires a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )))
    }
}

pub fn ensure_finite(m: &ComplexMatrix, what: &str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric(format!("{what} has non-finite entries")))
    }
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(m: &ComplexMatrix) -> Result<Complex64> {
    ensure_square(m, "trace")?;
    Ok(m.diagonal().iter().sum())
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Diagonal matrix with the given entries.
pub fn diag(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(entries))
}

/// Column-stacks `m`.
pub fn vectorize(m: &ComplexMatrix) -> ComplexVector {
    // nalgebra stores column-major, which is exactly column stacking.
    ComplexVector::from_column_slice(m.as_slice())
}

pub fn devectorize(v: &ComplexVector, rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 || v.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "cannot reshape a vector of length {} into {rows}x{cols}",
            v.len()
        )));
    }
    Ok(ComplexMatrix::from_column_slice(rows, cols, v.as_slice()))
}

/// Superoperator of `rho -> left * rho * right`.
pub fn sandwich(left: &ComplexMatrix, right: &ComplexMatrix) -> ComplexMatrix {
    kron(&right.transpose(), left)
}

/// Superoperator of `rho -> sum_k K_k rho K_k^dagger`.
pub fn conjugation_sum<'a>(ops: impl IntoIterator<Item = &'a ComplexMatrix>) -> Result<Superoperator> {
    let mut acc: Option<Superoperator> = None;
    for k in ops {
        ensure_square(k, "Kraus operator")?;
        let term = sandwich(k, &k.adjoint());
        acc = Some(match acc {
            None => term,
            Some(s) if s.shape() == term.shape() => s + term,
            Some(s) => {
                return Err(Error::Dimension(format!(
                    "Kraus operators of different sizes ({} vs {})",
                    (s.nrows() as f64).sqrt(),
                    k.nrows()
                )))
            }
        });
    }
    acc.ok_or_else(|| Error::Dimension("empty operator list".into()))
}

/// Applies a superoperator to a matrix.
pub fn apply(superop: &Superoperator, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if superop.ncols() != rho.len() {
        return Err(Error::Dimension(format!(
            "superoperator with {} columns cannot act on a {}x{} matrix",
            superop.ncols(),
            rho.nrows(),
            rho.ncols()
        )));
    }
    devectorize(&(superop * vectorize(rho)), rho.nrows(), rho.ncols())
}

/// Permutes a qubit superoperator from column stacking into the
/// `(uu, dd, ud, du)` report ordering.
pub fn to_qubit_report_order(s: &Superoperator) -> Result<Superoperator> {
    if s.shape() != (4, 4) {
        return Err(Error::Dimension(format!(
            "qubit superoperator must be 4x4, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let p = QUBIT_REPORT_ORDER;
    Ok(ComplexMatrix::from_fn(4, 4, |r, c| s[(p[r], p[c])]))
}

/// Inverse of [`to_qubit_report_order`].
pub fn from_qubit_report_order(s: &Superoperator) -> Result<Superoperator> {
    if s.shape() != (4, 4) {
        return Err(Error::Dimension(format!(
            "qubit superoperator must be 4x4, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let mut out = ComplexMatrix::zeros(4, 4);
    let p = QUBIT_REPORT_ORDER;
    for r in 0..4 {
        for c in 0..4 {
            out[(p[r], p[c])] = s[(r, c)];
        }
    }
    Ok(out)
}

/// Choi matrix `sum_{kl} E_kl ⊗ M(E_kl)` of a superoperator on `n x n` matrices.
pub fn choi_matrix(s: &Superoperator) -> Result<ComplexMatrix> {
    ensure_square(s, "Choi matrix")?;
    let n = (s.nrows() as f64).sqrt().round() as usize;
    if n * n != s.nrows() {
        return Err(Error::Dimension(format!(
            "superoperator size {} is not a perfect square",
            s.nrows()
        )));
    }
    Ok(ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (k, i) = (row / n, row % n);
        let (l, j) = (col / n, col % n);
        s[(i + n * j, k + n * l)]
    }))
}

/// Hermitian part `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    ensure_square(m, "hermitian_eigenvalues")?;
    ensure_finite(m, "hermitian_eigenvalues input")?;
    let mut vals: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Inverse via LU with partial pivoting.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_square(m, "inverse")?;
    m.clone()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("matrix is singular".into()))
}

/// Induced 1-norm (maximum absolute column sum).
pub fn one_norm(m: &ComplexMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn norms_and_traces() {
        assert!((frobenius_norm(&ComplexMatrix::identity(4, 4)) - 2.0).abs() < 1e-15);
        let d = diag(&[c(0.3, 0.0), c(0.7, 0.0)]);
        assert!((trace(&d).unwrap() - ONE).norm() < 1e-15);
        assert!(matches!(
            trace(&ComplexMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn kron_identity_blocks() {
        let sigma = ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let k = kron(&ComplexMatrix::identity(2, 2), &sigma);
        assert_eq!(k.view((0, 0), (2, 2)), sigma);
        assert_eq!(k.view((2, 2), (2, 2)), sigma);
        assert!(k.view((0, 2), (2, 2)).iter().all(|z| *z == ZERO));
    }

    #[test]
    fn up_projector_lands_in_first_report_slot() {
        let up = diag(&[ONE, ZERO]);
        let v = vectorize(&up);
        let report: Vec<Complex64> = QUBIT_REPORT_ORDER.iter().map(|&i| v[i]).collect();
        assert_eq!(report, vec![ONE, ZERO, ZERO, ZERO]);
        let ud = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        let v = vectorize(&ud);
        assert_eq!(v[QUBIT_REPORT_ORDER[2]], ONE);
    }

    #[test]
    fn devectorize_rejects_bad_length() {
        let v = ComplexVector::zeros(5);
        assert!(matches!(devectorize(&v, 2, 2), Err(Error::Dimension(_))));
    }

    #[test]
    fn sandwich_matches_direct_evaluation_on_basis() {
        let a = ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 2.0), c(-0.5, 0.1), c(0.3, -1.0), c(2.0, 0.0)]);
        let b = ComplexMatrix::from_row_slice(2, 2, &[c(0.2, 0.0), c(1.5, -0.7), c(0.0, 1.0), c(-1.1, 0.4)]);
        let s = sandwich(&a, &b);
        for idx in 0..4 {
            let mut e = ComplexMatrix::zeros(2, 2);
            e[(idx % 2, idx / 2)] = ONE;
            let direct = &a * &e * &b;
            let via = apply(&s, &e).unwrap();
            assert!(frobenius_norm(&(direct - via)) < 1e-14);
        }
    }

    #[test]
    fn report_order_round_trip() {
        let s = ComplexMatrix::from_fn(4, 4, |r, cidx| c(r as f64, cidx as f64));
        let back = from_qubit_report_order(&to_qubit_report_order(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn choi_of_identity_channel_is_rank_one() {
        let id = ComplexMatrix::identity(4, 4);
        let choi = choi_matrix(&id).unwrap();
        // |Omega><Omega| with |Omega> = |00> + |11>
        let vals = hermitian_eigenvalues(&choi).unwrap();
        assert!((vals[3] - 2.0).abs() < 1e-12);
        assert!(vals[..3].iter().all(|v| v.abs() < 1e-12));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), rows * cols).prop_map(move |v| {
            ComplexMatrix::from_iterator(rows, cols, v.into_iter().map(|(a, b)| Complex64::new(a, b)))
        })
    }

    proptest! {
        #[test]
        fn vectorize_round_trips(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| matrix(r, c))) {
            let back = devectorize(&vectorize(&m), m.nrows(), m.ncols()).unwrap();
            prop_assert_eq!(back, m);
        }

        #[test]
        fn sandwich_agrees_with_products(a in matrix(3, 3), b in matrix(3, 3), rho in matrix(3, 3)) {
            let via = apply(&sandwich(&a, &b), &rho).unwrap();
            let direct = &a * &rho * &b;
            prop_assert!(frobenius_norm(&(via - &direct)) <= 1e-12 * (1.0 + frobenius_norm(&direct)));
        }
    }
}
