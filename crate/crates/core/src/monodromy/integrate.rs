//! Adaptive transport of fundamental solutions around a circular loop.
//!
//! Dormand-Prince 5(4) with PI-free step control on the matrix-valued state.
//! The loop `z(t) = r e^{it}`, `t` from 0 to 2 pi, is counterclockwise in
//! `z`; the irregular point stays at distance `r` from the path, so the
//! right-hand side is smooth along the whole contour.

use num_complex::Complex;

use super::MonodromyError;
use crate::matrix::Matrix;
use crate::scalar::C64;

/// Transported fundamental solution with integration diagnostics.
#[derive(Debug, Clone)]
pub struct NumericMonodromy {
    pub matrix: Matrix<C64>,
    /// Accumulated local error estimates: a global defect indicator.
    pub defect: f64,
    pub steps: usize,
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 4_000_000;

/// Counterclockwise transport of `dPsi/dz = A(z) Psi` around `|z| = radius`
/// from the base point `z = radius`, with local error control at `tol`.
///
/// Returns `Psi(after) Psi(before)^{-1}`, which is `Psi_end` since the
/// initial value is the identity.
pub fn circle_transport(
    field: impl Fn(C64) -> Matrix<C64>,
    radius: f64,
    tol: f64,
) -> Result<NumericMonodromy, MonodromyError> {
    assert!(
        radius > 0.0 && radius.is_finite(),
        "radius must be positive"
    );
    assert!(tol > 0.0, "tolerance must be positive");
    let dim = field(C64::from_polar(radius, 0.0)).dim();
    // dPsi/dt = i z A(z) Psi along z(t) = r e^{it}
    let rhs = |t: f64, y: &Matrix<C64>| -> Matrix<C64> {
        let z = C64::from_polar(radius, t);
        let a = field(z);
        (&a * y).scale(&(C64::new(0.0, 1.0) * z))
    };

    let t_end = 2.0 * std::f64::consts::PI;
    let mut y: Matrix<C64> = Matrix::identity(dim);
    let mut t = 0.0f64;
    let mut h = t_end / 64.0;
    let h_min = t_end * 1e-13;
    let mut defect = 0.0f64;
    let mut steps = 0usize;

    while t < t_end {
        if steps > MAX_STEPS || h < h_min {
            return Err(MonodromyError::ToleranceNotMet);
        }
        if t + h > t_end {
            h = t_end - t;
        }
        let mut k: Vec<Matrix<C64>> = Vec::with_capacity(7);
        k.push(rhs(t, &y));
        for stage in 1..7 {
            let mut arg = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let w = A[stage - 1][j];
                if w != 0.0 {
                    arg = &arg + &kj.scale(&Complex::new(h * w, 0.0));
                }
            }
            k.push(rhs(t + C[stage] * h, &arg));
        }
        let mut y5 = y.clone();
        let mut err: Matrix<C64> = Matrix::zero(dim);
        for (j, kj) in k.iter().enumerate() {
            if B5[j] != 0.0 {
                y5 = &y5 + &kj.scale(&Complex::new(h * B5[j], 0.0));
            }
            let diff = B5[j] - B4[j];
            if diff != 0.0 {
                err = &err + &kj.scale(&Complex::new(h * diff, 0.0));
            }
        }
        let scale = tol + tol * y.frobenius_norm().max(y5.frobenius_norm());
        let err_norm = err.frobenius_norm() / scale;
        if err_norm <= 1.0 {
            t += h;
            y = y5;
            defect += err.frobenius_norm();
            if !y.is_finite() {
                return Err(MonodromyError::ToleranceNotMet);
            }
        }
        let factor = if err_norm > 0.0 {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        steps += 1;
    }

    Ok(NumericMonodromy {
        matrix: y,
        defect,
        steps,
    })
}

/// Monodromy of `dPsi/dz = (U/z^2 - V/z) Psi` around the counterclockwise
/// loop `|z| = radius`, transported from the base point `z = radius`.
pub fn monodromy_numeric(
    u: &Matrix<C64>,
    v: &Matrix<C64>,
    radius: f64,
    tol: f64,
) -> Result<NumericMonodromy, MonodromyError> {
    assert_eq!(u.dim(), v.dim(), "dimension mismatch");
    let u = u.clone();
    let v = v.clone();
    circle_transport(
        move |z| {
            let z2 = z * z;
            let one = Complex::new(1.0, 0.0);
            &u.scale(&(one / z2)) - &v.scale(&(one / z))
        },
        radius,
        tol,
    )
}
