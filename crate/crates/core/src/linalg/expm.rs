use num_complex::Complex64;

use super::{ensure_finite, ensure_square, one_norm, ComplexMatrix};
use crate::error::{Error, Result};

/// Degree of the diagonal Padé approximant. Always used, regardless of norm,
/// so the floating-point path depends only on the number of squarings.
pub const PADE_ORDER: usize = 13;

/// Largest 1-norm for which the degree-13 approximant is accurate to unit
/// roundoff in double precision (Higham, 2005).
pub const PADE_THETA: f64 = 5.371_920_351_148_152;

const PADE_COEFFS: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// `exp(a * scale)` by scaling and squaring with a [13/13] Padé approximant.
///
/// The argument is halved `s = max(0, ceil(log2(|a*scale|_1 / PADE_THETA)))`
/// times before the approximant is evaluated and the result squared back.
pub fn expm(a: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    ensure_square(a, "expm")?;
    ensure_finite(a, "expm input")?;
    if !scale.is_finite() {
        return Err(Error::Numeric(format!("expm scale {scale} is not finite")));
    }

    let n = a.nrows();
    let norm = one_norm(a) * scale.abs();
    let squarings = if norm > PADE_THETA {
        (norm / PADE_THETA).log2().ceil() as i32
    } else {
        0
    };
    let x = a * Complex64::from(scale / 2f64.powi(squarings));

    let b = PADE_COEFFS.map(Complex64::from);
    let id = ComplexMatrix::identity(n, n);
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let x6 = &x4 * &x2;

    let u_inner = &x6 * (&x6 * b[13] + &x4 * b[11] + &x2 * b[9]) + &x6 * b[7] + &x4 * b[5] + &x2 * b[3]
        + &id * b[1];
    let u = &x * u_inner;
    let v = &x6 * (&x6 * b[12] + &x4 * b[10] + &x2 * b[8]) + &x6 * b[6] + &x4 * b[4] + &x2 * b[2]
        + &id * b[0];

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::Numeric("Padé denominator is singular".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    ensure_finite(&r, "expm result")?;
    Ok(r)
}
