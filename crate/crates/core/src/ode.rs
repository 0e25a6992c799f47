//! One-step integrators over fixed-size real state vectors.

pub type State<const N: usize> = [f64; N];

fn axpy<const N: usize>(y: &State<N>, a: f64, k: &State<N>) -> State<N> {
    let mut out = *y;
    for (o, ki) in out.iter_mut().zip(k) {
        *o += a * ki;
    }
    out
}

/// Classical fourth-order Runge–Kutta step.
pub fn rk4_step<const N: usize>(f: &impl Fn(f64, &State<N>) -> State<N>, s: f64, y: &State<N>, h: f64) -> State<N> {
    let k1 = f(s, y);
    let k2 = f(s + 0.5 * h, &axpy(y, 0.5 * h, &k1));
    let k3 = f(s + 0.5 * h, &axpy(y, 0.5 * h, &k2));
    let k4 = f(s + h, &axpy(y, h, &k3));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// `n` equal RK4 steps from `s0` to `s1`.
pub fn rk4_fixed<const N: usize>(
    f: &impl Fn(f64, &State<N>) -> State<N>,
    s0: f64,
    y0: &State<N>,
    s1: f64,
    n: usize,
) -> State<N> {
    let h = (s1 - s0) / n as f64;
    let mut y = *y0;
    for i in 0..n {
        y = rk4_step(f, s0 + i as f64 * h, &y, h);
    }
    y
}

/// Tolerances for [`dopri45`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveTolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for AdaptiveTolerance {
    fn default() -> Self {
        Self { rtol: 1e-12, atol: 1e-14 }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince 5(4) from `s0` to `s1`, landing exactly on `s1`.
pub fn dopri45<const N: usize>(
    f: &impl Fn(f64, &State<N>) -> State<N>,
    s0: f64,
    y0: &State<N>,
    s1: f64,
    tol: AdaptiveTolerance,
) -> State<N> {
    let span = s1 - s0;
    if span == 0.0 {
        return *y0;
    }
    let dir = span.signum();
    let mut h = dir * (span.abs() / 16.0).min(1e-2);
    let mut s = s0;
    let mut y = *y0;
    let mut k = [[0.0; N]; 7];
    while (s1 - s) * dir > 0.0 {
        if (s + h - s1) * dir > 0.0 {
            h = s1 - s;
        }
        for stage in 0..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[stage] = f(s + C[stage] * h, &ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let (mut d5, mut d4) = (0.0, 0.0);
            for stage in 0..7 {
                d5 += B5[stage] * k[stage][i];
                d4 += B4[stage] * k[stage][i];
            }
            y5[i] += h * d5;
            let scale = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
            err = err.max((h * (d5 - d4)).abs() / scale);
        }
        if err <= 1.0 {
            s += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * span.abs().max(1.0) {
            // Step underflow: take the tiny step anyway so the loop terminates.
            h = dir * 1e-14 * span.abs().max(1.0);
        }
    }
    y
}
