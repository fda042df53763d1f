use num_complex::Complex64;

use super::{ensure_finite, ensure_square, frobenius_norm, one_norm, ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Two eigenvalue moduli closer than this (relative) are considered equal.
pub const DEGENERACY_RTOL: f64 = 1e-9;

/// Eigenvector matrices with reciprocal condition number below this are
/// reported as non-diagonalizable.
pub const RCOND_THRESHOLD: f64 = 1e-10;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigendecomposition `A = R diag(lambda) L` of a general complex matrix.
///
/// Columns of `right` are unit-norm right eigenvectors; rows of `left` are
/// the matching left eigenvectors scaled so that `left * right = I`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<Complex64>,
    pub right: ComplexMatrix,
    pub left: ComplexMatrix,
    pub diagonalizable: bool,
    /// 1-norm condition number of `right`; infinite when it is singular.
    pub condition_estimate: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn right_vector(&self, n: usize) -> ComplexMatrix {
        self.right.columns(n, 1).into_owned()
    }

    pub fn left_vector(&self, n: usize) -> ComplexMatrix {
        self.left.rows(n, 1).into_owned()
    }

    /// Rank-one eigenprojection `right_n left_n`.
    pub fn projector(&self, n: usize) -> ComplexMatrix {
        self.right_vector(n) * self.left_vector(n)
    }

    /// `sum_n lambda_n right_n left_n`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = super::diag(&self.eigenvalues);
        &self.right * d * &self.left
    }

    /// Whether `|lambda_a|` and `|lambda_b|` are equal within [`DEGENERACY_RTOL`].
    pub fn moduli_equal(&self, a: usize, b: usize) -> bool {
        moduli_close(self.eigenvalues[a], self.eigenvalues[b])
    }
}

fn moduli_close(a: Complex64, b: Complex64) -> bool {
    let (ma, mb) = (a.norm(), b.norm());
    let scale = ma.max(mb);
    scale == 0.0 || (ma - mb).abs() < DEGENERACY_RTOL * scale
}

/// Eigenvalues and bi-orthonormal eigenvectors of a square complex matrix.
///
/// Eigenvalues come out sorted by descending modulus. Moduli equal within
/// [`DEGENERACY_RTOL`] are ordered by descending real part, then descending
/// imaginary part.
pub fn eig(a: &ComplexMatrix) -> Result<EigenSystem> {
    ensure_square(a, "eig")?;
    ensure_finite(a, "eig input")?;
    let n = a.nrows();

    let (t, z) = schur(a.clone())?;
    let y = triangular_eigenvectors(&t);
    let mut right = z * y;
    for mut col in right.column_iter_mut() {
        let nrm = col.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nrm > 0.0 {
            col /= Complex64::from(nrm);
        }
    }

    let order = spectral_order(&(0..n).map(|i| t[(i, i)]).collect::<Vec<_>>());
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| t[(i, i)]).collect();
    let right = ComplexMatrix::from_fn(n, n, |r, c| right[(r, order[c])]);

    let (left, diagonalizable, condition_estimate) = match right.clone().try_inverse() {
        Some(inv) => {
            let kappa = one_norm(&right) * one_norm(&inv);
            let ok = kappa.is_finite() && 1.0 / kappa >= RCOND_THRESHOLD;
            (inv, ok, kappa)
        }
        None => (ComplexMatrix::zeros(n, n), false, f64::INFINITY),
    };

    Ok(EigenSystem {
        eigenvalues,
        right,
        left,
        diagonalizable,
        condition_estimate,
    })
}

/// Index permutation putting `values` in the documented spectral order.
fn spectral_order(values: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].norm().total_cmp(&values[a].norm()).then(a.cmp(&b)));

    // Group runs of (relatively) equal modulus, then order each run.
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let head = values[idx[start]];
        let mut end = start + 1;
        while end < idx.len() && moduli_close(head, values[idx[end]]) {
            end += 1;
        }
        let mut group = idx[start..end].to_vec();
        group.sort_by(|&a, &b| {
            values[b]
                .re
                .total_cmp(&values[a].re)
                .then(values[b].im.total_cmp(&values[a].im))
                .then(a.cmp(&b))
        });
        out.extend(group);
        start = end;
    }
    out
}

/// Complex Schur form `A = Z T Z^H` by Householder reduction to Hessenberg
/// form followed by single-shift QR sweeps with Wilkinson shifts.
fn schur(mut h: ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = h.nrows();
    let mut z = ComplexMatrix::identity(n, n);
    hessenberg(&mut h, &mut z);
    if n == 1 {
        return Ok((h, z));
    }

    let eps = f64::EPSILON;
    let scale = frobenius_norm(&h).max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;

    while hi > 0 {
        // Locate the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag_sum = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if diag_sum == 0.0 {
                diag_sum = scale;
            }
            if sub <= eps * diag_sum {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::Convergence { dim: n });
        }

        let mu = if iter.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::from(h[(hi, hi - 1)].norm() * 0.75)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        qr_sweep(&mut h, &mut z, lo, hi, mu);
    }

    // Clean the strictly lower part left over from deflation.
    for c in 0..n {
        for r in c + 1..n {
            h[(r, c)] = ZERO;
        }
    }
    Ok((h, z))
}

/// Eigenvalue of the trailing 2x2 block closer to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Givens rotation `[[c, s], [-s*, c]]` with real `c` mapping `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, ZERO);
    }
    let fn_ = f.norm();
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let r = fn_.hypot(gn);
    let c = fn_ / r;
    let s = (f / fn_) * g.conj() / r;
    (c, s)
}

/// One explicitly shifted QR sweep on rows/columns `lo..=hi`, applied as a
/// similarity to the whole matrix so the Schur vectors stay valid.
fn qr_sweep(h: &mut ComplexMatrix, z: &mut ComplexMatrix, lo: usize, hi: usize, mu: Complex64) {
    let n = h.nrows();
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = x * c + s * y;
            h[(k + 1, j)] = -s.conj() * x + y * c;
        }
        h[(k + 1, k)] = ZERO;
        rots.push((c, s));
    }
    for (offset, &(c, s)) in rots.iter().enumerate() {
        let k = lo + offset;
        let rows = (k + 2).min(hi) + 1;
        for i in 0..rows {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s.conj();
            h[(i, k + 1)] = -x * s + y * c;
        }
        for i in 0..n {
            let x = z[(i, k)];
            let y = z[(i, k + 1)];
            z[(i, k)] = x * c + y * s.conj();
            z[(i, k + 1)] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// In-place Householder reduction to upper Hessenberg form, accumulating the
/// unitary transform into `z`.
fn hessenberg(h: &mut ComplexMatrix, z: &mut ComplexMatrix) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let alpha_norm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        // v = x + phase*|x| e1, reflector P = I - 2 v v^H / (v^H v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // H <- P H
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| vi.conj() * h[(k + 1 + t, j)]).sum();
            let f = dot * beta;
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * f;
            }
        }
        // H <- H P, Z <- Z P
        for m in [&mut *h, &mut *z] {
            for i in 0..n {
                let dot: Complex64 = v.iter().enumerate().map(|(t, vi)| m[(i, k + 1 + t)] * vi).sum();
                let f = dot * beta;
                for (t, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + t)] -= f * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Right eigenvectors of an upper-triangular matrix by back substitution.
/// Near-zero pivots are replaced by a tiny value (as LAPACK `ztrevc` does),
/// which makes defective matrices show up as an ill-conditioned basis.
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.nrows();
    let smin = (f64::EPSILON * frobenius_norm(t)).max(f64::MIN_POSITIVE * 1e3);
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let acc: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[(j, k)]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                denom = Complex64::from(smin);
            }
            y[(i, k)] = -acc / denom;
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::diag;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_pairs(a: &ComplexMatrix, es: &EigenSystem) {
        let scale = frobenius_norm(a).max(1.0);
        for k in 0..es.dim() {
            let r = es.right_vector(k);
            let resid = a * &r - &r * es.eigenvalues[k];
            assert!(frobenius_norm(&resid) < 1e-9 * scale, "residual {k}");
        }
        if es.diagonalizable {
            let id = ComplexMatrix::identity(es.dim(), es.dim());
            assert!(frobenius_norm(&(&es.left * &es.right - id)) < 1e-9);
            assert!(frobenius_norm(&(es.reconstruct() - a)) < 1e-8 * scale);
        }
    }

    #[test]
    fn diagonal_with_repeat() {
        let a = diag(&[c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        let es = eig(&a).unwrap();
        assert_eq!(es.eigenvalues, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        assert!(es.diagonalizable);
        check_pairs(&a, &es);
    }

    #[test]
    fn identity_two() {
        let a = ComplexMatrix::identity(2, 2);
        let es = eig(&a).unwrap();
        assert_eq!(es.eigenvalues, vec![ONE, ONE]);
        assert!(es.diagonalizable);
        check_pairs(&a, &es);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let a = ComplexMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        let es = eig(&a).unwrap();
        assert!(!es.diagonalizable);
        assert!(es.condition_estimate > 1.0 / RCOND_THRESHOLD);
    }

    #[test]
    fn ordering_rules() {
        // equal moduli: larger real part first, then larger imaginary part
        let a = diag(&[c(0.0, 1.0), c(-1.0, 0.0), c(0.2, 0.0), c(1.0, 0.0), c(0.0, -1.0)]);
        let es = eig(&a).unwrap();
        assert_eq!(
            es.eigenvalues,
            vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.2, 0.0)]
        );
    }

    #[test]
    fn random_matrices_satisfy_contract() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in [1usize, 2, 3, 4, 7, 16] {
            for _ in 0..10 {
                let a = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                let es = eig(&a).unwrap();
                assert!(es.diagonalizable);
                check_pairs(&a, &es);
                for w in es.eigenvalues.windows(2) {
                    assert!(w[0].norm() >= w[1].norm() * (1.0 - DEGENERACY_RTOL));
                }
                let again = eig(&a).unwrap();
                assert_eq!(again.eigenvalues, es.eigenvalues);
            }
        }
    }

    #[test]
    fn hermitian_and_unitary_inputs() {
        let mut rng = StdRng::seed_from_u64(11);
        let g = ComplexMatrix::from_fn(6, 6, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let h = &g + g.adjoint();
        let es = eig(&h).unwrap();
        assert!(es.eigenvalues.iter().all(|l| l.im.abs() < 1e-12));
        check_pairs(&h, &es);
        let u = crate::linalg::expm(&(h * c(0.0, 1.0)), 1.0).unwrap();
        let es = eig(&u).unwrap();
        assert!(es.eigenvalues.iter().all(|l| (l.norm() - 1.0).abs() < 1e-12));
        check_pairs(&u, &es);
    }

    #[test]
    fn triangular_and_nilpotent_inputs() {
        let a = ComplexMatrix::from_row_slice(3, 3, &[ZERO, ONE, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO]);
        let es = eig(&a).unwrap();
        assert!(!es.diagonalizable);
        assert!(es.eigenvalues.iter().all(|l| l.norm() < 1e-12));
        let z = ComplexMatrix::zeros(3, 3);
        let es = eig(&z).unwrap();
        assert!(es.diagonalizable);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matches!(eig(&ComplexMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }
}
