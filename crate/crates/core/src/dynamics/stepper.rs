//! Dormand–Prince 5(4) embedded Runge–Kutta step.

use crate::error::Result;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0; 6],
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

/// Fifth-order weights; identical to the last row of `A` (FSAL).
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Difference between fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

pub(crate) struct StepResult<const N: usize> {
    pub y: [f64; N],
    /// Derivative at the new point, reused as the next step's first stage.
    pub dydt: [f64; N],
    pub error: [f64; N],
}

/// One Dormand–Prince step of size `h` from `(t, y)` with `k1 = f(t, y)`.
pub(crate) fn step<const N: usize, F>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Result<StepResult<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut k = [[0.0; N]; 7];
    k[0] = *k1;
    for s in 1..7 {
        let mut ys = *y;
        for (i, yi) in ys.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += A[s][j] * kj[i];
            }
            *yi += h * acc;
        }
        k[s] = f(t + C[s] * h, &ys)?;
    }

    let mut y_new = *y;
    let mut error = [0.0; N];
    for i in 0..N {
        let mut acc = 0.0;
        let mut err = 0.0;
        for s in 0..7 {
            acc += B[s] * k[s][i];
            err += E[s] * k[s][i];
        }
        y_new[i] += h * acc;
        error[i] = h * err;
    }
    Ok(StepResult {
        y: y_new,
        dydt: k[6],
        error,
    })
}

/// Max-norm of the local error scaled by `atol + rtol·max(|y|, |y_new|)`.
pub(crate) fn error_norm<const N: usize>(
    y: &[f64; N],
    y_new: &[f64; N],
    error: &[f64; N],
    rtol: f64,
    atol: f64,
) -> f64 {
    (0..N)
        .map(|i| error[i].abs() / (atol + rtol * y[i].abs().max(y_new[i].abs())))
        .fold(0.0, f64::max)
}
