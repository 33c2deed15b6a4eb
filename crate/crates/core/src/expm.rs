//! Matrix exponential in double precision: scaling and squaring with the
//! degree-13 Pade approximant (Higham 2005).

use num_complex::Complex;

use crate::error::AlgebraError;
use crate::matrix::Matrix;
use crate::scalar::C64;

// Pade-13 numerator coefficients b_0..b_13.
const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm threshold below which Pade-13 reaches double precision without scaling.
const THETA_13: f64 = 5.371920351148152;

/// `exp(B)` with relative accuracy around 1e-12 for norms up to ~50.
pub fn matrix_exp(b: &Matrix<C64>) -> Result<Matrix<C64>, AlgebraError> {
    if !b.is_finite() {
        return Err(AlgebraError::Overflow);
    }
    let norm = b.norm_one();
    let squarings = if norm <= THETA_13 {
        0
    } else {
        (norm / THETA_13).log2().ceil() as u32
    };
    let scaled = b.scale(&Complex::new((0.5f64).powi(squarings as i32), 0.0));

    let n = b.dim();
    let id: Matrix<C64> = Matrix::identity(n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let re = |x: f64| Complex::new(x, 0.0);
    let u_inner = &(&a6.scale(&re(B[13])) + &a4.scale(&re(B[11]))) + &a2.scale(&re(B[9]));
    let u_poly = &(&(&a6 * &u_inner) + &a6.scale(&re(B[7])))
        + &(&(&a4.scale(&re(B[5])) + &a2.scale(&re(B[3]))) + &id.scale(&re(B[1])));
    let u = &scaled * &u_poly;
    let v_inner = &(&a6.scale(&re(B[12])) + &a4.scale(&re(B[10]))) + &a2.scale(&re(B[8]));
    let v = &(&(&a6 * &v_inner) + &a6.scale(&re(B[6])))
        + &(&(&a4.scale(&re(B[4])) + &a2.scale(&re(B[2]))) + &id.scale(&re(B[0])));

    // exp ~ (V - U)^{-1} (V + U)
    let denom = &v - &u;
    let numer = &v + &u;
    let mut result = match denom.inverse() {
        Some(inv) => &inv * &numer,
        None => return Err(AlgebraError::Overflow),
    };
    for _ in 0..squarings {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(AlgebraError::Overflow);
    }
    Ok(result)
}
