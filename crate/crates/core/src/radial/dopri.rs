//! Dormand–Prince 5(4) step with an embedded error estimate.

pub const DIM: usize = 4;
pub type State = [f64; DIM];

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

/// Fifth-order weights; also the last row of `A`.
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

pub struct Step {
    pub y: State,
    /// Scaled error norm; the step is acceptable when `<= 1`.
    pub err: f64,
}

/// One trial step of size `h` from `(t, y)`.
pub fn step<F: Fn(f64, &State) -> State>(
    f: &F,
    t: f64,
    y: &State,
    h: f64,
    rtol: f64,
    atol: f64,
) -> Step {
    let mut k = [[0.0; DIM]; 7];
    k[0] = f(t, y);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            for d in 0..DIM {
                ys[d] += h * A[s][j] * kj[d];
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    let mut y5 = *y;
    let mut err: f64 = 0.0;
    for d in 0..DIM {
        let mut hi = 0.0;
        let mut lo = 0.0;
        for s in 0..7 {
            hi += B5[s] * k[s][d];
            lo += B4[s] * k[s][d];
        }
        y5[d] += h * hi;
        let scale = atol + rtol * y[d].abs().max(y5[d].abs());
        err = err.max((h * (hi - lo)).abs() / scale);
    }
    if !y5.iter().all(|x| x.is_finite()) {
        err = f64::INFINITY;
    }
    Step { y: y5, err }
}

/// Standard controller with safety factor 0.9 and growth clamped to
/// `[0.2, 5]`.
pub fn next_h(h: f64, err: f64) -> f64 {
    let factor = if err == 0.0 {
        5.0
    } else if err.is_finite() {
        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
    } else {
        0.2
    };
    h * factor
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_consistent() {
        for (s, row) in A.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            assert!((sum - C[s]).abs() < 1e-15, "row {s}");
        }
        assert!((B5.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((B4.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_to_high_accuracy() {
        let f = |_: f64, y: &State| [y[0], -y[1], 0.0, 0.0];
        let (mut t, mut y, mut h): (f64, State, f64) = (0.0, [1.0, 1.0, 0.0, 0.0], 0.01);
        while t < 1.0 {
            h = h.min(1.0 - t);
            let s = step(&f, t, &y, h, 1e-12, 1e-12);
            if s.err <= 1.0 {
                t += h;
                y = s.y;
            }
            h = next_h(h, s.err);
        }
        assert!((y[0] - 1f64.exp()).abs() < 1e-10);
        assert!((y[1] - (-1f64).exp()).abs() < 1e-10);
    }
}
