//! Independent numerical oracles shared by unit, integration and acceptance
//! tests. Only `std` is used here so nothing in this file shares a code path
//! with the library under test.

use std::f64::consts::PI;
use std::sync::OnceLock;

const GL_ORDER: usize = 20;

fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static NODES: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GL_ORDER;
        let mut out = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out
    })
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    gauss_legendre()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gl_panel(f, a, mid);
    let right = gl_panel(f, mid, b);
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    if (left + right - whole).abs() <= tol.max(floor) || depth >= 30 {
        return left + right;
    }
    let tol = tol * std::f64::consts::FRAC_1_SQRT_2;
    adapt(f, a, mid, left, tol, depth + 1) + adapt(f, mid, b, right, tol, depth + 1)
}

/// Adaptive composite 20-point Gauss–Legendre quadrature of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    const PANELS: usize = 32;
    let h = (b - a) / PANELS as f64;
    let pieces: Vec<f64> = (0..PANELS)
        .map(|i| gl_panel(&f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .collect();
    let estimate: f64 = pieces.iter().map(|p| p.abs()).sum();
    let tol = (rel_tol * estimate).max(1e-300) / PANELS as f64;
    pieces
        .iter()
        .enumerate()
        .map(|(i, &p)| adapt(&f, a + i as f64 * h, a + (i + 1) as f64 * h, p, tol, 0))
        .sum()
}

/// `(2/√π) ∫₀ˣ e^{−t²} dt`.
pub fn erf_by_quadrature(x: f64) -> f64 {
    2.0 / PI.sqrt() * integrate(|t| (-t * t).exp(), 0.0, x, 1e-15)
}

/// `(2/√π) ∫₀ˣ e^{t²} dt`.
pub fn erfi_by_quadrature(x: f64) -> f64 {
    2.0 / PI.sqrt() * integrate(|t| (t * t).exp(), 0.0, x, 1e-15)
}

/// Incomplete elliptic integral of the first kind for modulus `k`.
pub fn elliptic_f(phi: f64, k: f64) -> f64 {
    let kc2 = (1.0 - k) * (1.0 + k);
    integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            1.0 / (c * c + kc2 * s * s).sqrt()
        },
        0.0,
        phi,
        1e-15,
    )
}

/// `sn(u, k)` obtained by numerically inverting `F(φ, k) = u` and taking
/// `sin φ`. Independent of any Landen/AGM machinery.
pub fn sn_by_inversion(u: f64, k: f64) -> f64 {
    if u < 0.0 {
        return -sn_by_inversion(-u, k);
    }
    if u == 0.0 {
        return 0.0;
    }
    let kc2 = (1.0 - k) * (1.0 + k);
    let mut hi = u.min(PI / 2.0);
    while elliptic_f(hi, k) < u {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut phi = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = elliptic_f(phi, k) - u;
        if g > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let (s, c) = phi.sin_cos();
        let newton = phi - g * (c * c + kc2 * s * s).sqrt();
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - phi).abs() < 1e-16 * phi.abs().max(1.0) {
            phi = next;
            break;
        }
        phi = next;
    }
    phi.sin()
}

fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Discounted lognormal expectation of the call payoff.
pub fn lognormal_call(s: f64, k: f64, r: f64, sigma: f64, t: f64, delta: f64) -> f64 {
    let vol = sigma * t.sqrt();
    let drift = (r - delta - 0.5 * sigma * sigma) * t;
    let z_strike = ((k / s).ln() - drift) / vol;
    let upper = vol + 14.0;
    if z_strike >= upper {
        return 0.0;
    }
    let lower = z_strike.max(-14.0);
    let payoff = |z: f64| (s * (drift + vol * z).exp() - k) * normal_pdf(z);
    (-r * t).exp() * integrate(payoff, lower, upper, 1e-14)
}

/// Discounted lognormal expectation of the put payoff.
pub fn lognormal_put(s: f64, k: f64, r: f64, sigma: f64, t: f64, delta: f64) -> f64 {
    let vol = sigma * t.sqrt();
    let drift = (r - delta - 0.5 * sigma * sigma) * t;
    let z_strike = ((k / s).ln() - drift) / vol;
    if z_strike <= -14.0 {
        return 0.0;
    }
    let upper = z_strike.min(14.0);
    let payoff = |z: f64| (k - s * (drift + vol * z).exp()) * normal_pdf(z);
    (-r * t).exp() * integrate(payoff, -14.0, upper, 1e-14)
}

/// Adaptive Dormand–Prince 5(4) integration of `y' = f(t, y)`, returning the
/// state at every requested output time (which must be increasing).
pub fn dopri5<F>(f: F, t0: f64, y0: &[f64], outputs: &[f64], rtol: f64, atol: f64) -> Vec<Vec<f64>>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
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
    let n = y0.len();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h: f64 = 1e-3;
    let mut out = Vec::with_capacity(outputs.len());
    for &target in outputs {
        while t < target {
            let step = h.min(target - t);
            let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
            for stage in 0..7 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    for i in 0..n {
                        ys[i] += step * A[stage][j] * kj[i];
                    }
                }
                k.push(f(t + C[stage] * step, &ys));
            }
            let mut y5 = y.clone();
            let mut err = 0.0f64;
            for i in 0..n {
                let mut d5 = 0.0;
                let mut d4 = 0.0;
                for s in 0..7 {
                    d5 += B5[s] * k[s][i];
                    d4 += B4[s] * k[s][i];
                }
                y5[i] += step * d5;
                let scale = atol + rtol * y[i].abs().max(y5[i].abs());
                err = err.max((step * (d5 - d4)).abs() / scale);
            }
            if err <= 1.0 {
                t += step;
                y = y5;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
        }
        out.push(y.clone());
    }
    out
}

/// Least-squares solution of `A x ≈ y` through the normal equations, solved
/// by Gaussian elimination with partial pivoting.
pub fn normal_equations(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = rows[0].len();
    let mut m = vec![vec![0.0; p + 1]; p];
    for (row, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                m[i][j] += row[i] * row[j];
            }
            m[i][p] += row[i] * yi;
        }
    }
    for col in 0..p {
        let pivot = (col..p)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        for r in col + 1..p {
            let factor = m[r][col] / m[col][col];
            for c in col..=p {
                m[r][c] -= factor * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; p];
    for i in (0..p).rev() {
        let tail: f64 = (i + 1..p).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][p] - tail) / m[i][i];
    }
    x
}

/// Step size from the cube-root-of-epsilon rule for central differences.
pub fn fd_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Tiny deterministic generator (SplitMix64) for picking test points.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }
}
