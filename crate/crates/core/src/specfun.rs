//! Special functions: complex log-Gamma and digamma, Beta, `K_{iR}(x)`,
//! Whittaker `W_{κ,μ}(z)` and Mellin transforms of Whittaker products.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{self, QuadValue};

type C = Complex64;

const B2J: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const SHIFT: f64 = 16.0;

fn check_pole(z: C) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::PoleAt(z.re));
    }
    Ok(())
}

/// `log Γ(z)`, the branch continuous off the negative real axis and real on
/// the positive axis.
pub fn log_gamma(z: C) -> Result<C> {
    check_pole(z)?;
    let mut w = z;
    let mut acc = C::new(0.0, 0.0);
    while w.re < SHIFT {
        acc += w.ln();
        w += 1.0;
    }
    let lw = w.ln();
    let mut s = (w - 0.5) * lw - w + 0.5 * (2.0 * PI).ln();
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut p = inv;
    for (j, b) in B2J.iter().enumerate() {
        let n = 2.0 * (j + 1) as f64;
        s += p * (b / (n * (n - 1.0)));
        p *= inv2;
    }
    Ok(s - acc)
}

pub fn gamma(z: C) -> Result<C> {
    Ok(log_gamma(z)?.exp())
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma_real(x: f64) -> f64 {
    log_gamma(C::new(x, 0.0)).expect("positive argument").re
}

pub fn digamma(z: C) -> Result<C> {
    check_pole(z)?;
    let mut w = z;
    let mut acc = C::new(0.0, 0.0);
    while w.re < SHIFT {
        acc += 1.0 / w;
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut s = w.ln() - 0.5 * inv;
    let mut p = inv2;
    for (j, b) in B2J.iter().enumerate() {
        let n = 2.0 * (j + 1) as f64;
        s -= p * (b / n);
        p *= inv2;
    }
    Ok(s - acc)
}

pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("beta({a}, {b})")));
    }
    Ok((ln_gamma_real(a) + ln_gamma_real(b) - ln_gamma_real(a + b)).exp())
}

/// `|Γ(x + iy)|²`.
pub fn abs_gamma_sq(x: f64, y: f64) -> f64 {
    (2.0 * log_gamma(C::new(x, y)).expect("off the poles").re).exp()
}

/// `K_{iR}(x)` with an underflow flag for arguments beyond double range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselK {
    pub value: f64,
    pub underflow: bool,
}

pub fn bessel_k_imag(r: f64, x: f64) -> Result<BesselK> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("K_iR at x = {x}")));
    }
    let r = r.abs();
    if x > 700.0 {
        return Ok(BesselK { value: 0.0, underflow: true });
    }
    let value = if r >= 2.0 && x <= 1.5 * r { k_series(r, x) } else { k_integral(r, x) };
    Ok(BesselK { value, underflow: false })
}

/// `K_{iR}(x)`, zero beyond the double range.
pub fn k_imag(r: f64, x: f64) -> f64 {
    bessel_k_imag(r, x).map(|k| k.value).unwrap_or(f64::NAN)
}

fn k_series(r: f64, x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term = term * q / (C::new(m, r) * m);
        sum += term;
        if term.norm() < 1e-17 * sum.norm() && m > x {
            break;
        }
        m += 1.0;
    }
    let arg = log_gamma(C::new(1.0, r)).unwrap().im;
    let theta = r * (x / 2.0).ln() - arg;
    let pre = (PI / (r * (PI * r).sinh())).sqrt();
    -pre * (C::from_polar(1.0, theta) * sum).im
}

fn k_integral(r: f64, x: f64) -> f64 {
    // e^{-x} ∫ exp(-x (cosh t - 1)) cos(R t) dt on [0, T] with x(cosh T - 1) = 42
    let t_max = (1.0 + 42.0 / x).acosh();
    let panels = 2 + (r * t_max / 2.0) as usize;
    let res = quad::integrate(
        |t: f64| (-2.0 * x * (0.5 * t).sinh().powi(2)).exp() * (r * t).cos(),
        0.0,
        t_max,
        panels,
        1e-17,
        1e-15,
        4000,
    );
    res.value * (-x).exp()
}

/// `U(a, b, z)` by the Laplace integral `∫ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt / Γ(a)`
/// along a ray `t = τ e^{iθ}`. The ray is turned toward the side where the
/// oscillating powers decay, which keeps cancellation down for large `|Im a|`.
/// Requires `Re a > 0` and `|arg z| < π`.
fn kummer_u_integral(a: C, b: C, z: C) -> C {
    let phi = z.arg();
    let tilt = if a.im.abs() < 0.5 { 0.0 } else { 1.4f64.copysign(a.im) };
    let theta = (tilt - phi).clamp(-PI + 0.05, PI - 0.05);
    let theta = if (theta + phi).abs() > 1.45 { -phi } else { theta };
    let dir = C::from_polar(1.0, theta);
    let e = b - a - 1.0;
    let lg = log_gamma(a).unwrap();
    let f = |tau: f64| -> C {
        let t = dir * tau;
        let l = -z * t + (a - 1.0) * (tau.ln() + C::new(0.0, theta)) + e * (t + 1.0).ln() - lg;
        if l.re < -745.0 {
            C::new(0.0, 0.0)
        } else {
            l.exp() * dir
        }
    };
    quad::exp_sinh(f, 6.5, 1e-14).0
}

fn kummer_u(a: C, b: C, z: C) -> C {
    if a.re > 0.05 {
        return kummer_u_integral(a, b, z);
    }
    // U(a-1) = -(b - 2a - z) U(a) - a (a - b + 1) U(a + 1), applied upward from Re a > 0
    let n = (0.05 - a.re).ceil() as usize;
    let top = a + n as f64;
    let mut u1 = kummer_u_integral(top + 1.0, b, z);
    let mut u0 = kummer_u_integral(top, b, z);
    let mut cur = top;
    for _ in 0..n {
        let um = -(b - 2.0 * cur - z) * u0 - cur * (cur - b + 1.0) * u1;
        u1 = u0;
        u0 = um;
        cur -= 1.0;
    }
    u0
}

/// `e^{-z/2} z^{μ+½} ₁F₁(½+μ−κ; 1+2μ; z)`.
fn whittaker_m(kappa: f64, mu: C, z: C) -> C {
    let a = 0.5 + mu - kappa;
    let b = 1.0 + 2.0 * mu;
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut n = 0.0;
    loop {
        term = term * (a + n) / ((b + n) * (n + 1.0)) * z;
        sum += term;
        n += 1.0;
        if term.norm() < 1e-17 * sum.norm() && n > z.norm() {
            break;
        }
        if n > 2000.0 {
            break;
        }
    }
    (-z / 2.0).exp() * (z.ln() * (mu + 0.5)).exp() * sum
}

/// Small-argument route: the connection formula through `M_{κ,±μ}`.
fn whittaker_w_series(kappa: f64, mu: C, z: C) -> C {
    let g = |w: C| log_gamma(w).unwrap();
    let c1 = (g(-2.0 * mu) - g(0.5 - mu - kappa)).exp();
    let c2 = (g(2.0 * mu) - g(0.5 + mu - kappa)).exp();
    c1 * whittaker_m(kappa, mu, z) + c2 * whittaker_m(kappa, -mu, z)
}

/// Large-argument route: `e^{-z/2} z^{μ+½} U(½+μ−κ, 1+2μ, z)`.
fn whittaker_w_integral(kappa: f64, mu: C, z: C) -> C {
    let a = 0.5 + mu - kappa;
    let b = 1.0 + 2.0 * mu;
    (-z / 2.0).exp() * (z.ln() * (mu + 0.5)).exp() * kummer_u(a, b, z)
}

/// Which evaluation route [`whittaker_w`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WRoute {
    Auto,
    Series,
    Integral,
}

/// Whittaker `W_{κ,μ}(z)`, normalized by `W ~ z^κ e^{-z/2}` at infinity,
/// for `Re z > 0` or `|arg z| < π/2`.
pub fn whittaker_w(kappa: f64, mu: C, z: C) -> Result<C> {
    whittaker_w_route(kappa, mu, z, WRoute::Auto)
}

pub fn whittaker_w_route(kappa: f64, mu: C, z: C, route: WRoute) -> Result<C> {
    if !(z.norm() > 0.0) || z.arg().abs() >= PI {
        return Err(Error::Domain(format!("Whittaker W at z = {z}")));
    }
    let two_mu = 2.0 * mu;
    let near_int = two_mu.im.abs() < 1e-3 && (two_mu.re - two_mu.re.round()).abs() < 1e-3;
    let series_ok = !near_int;
    let use_series = match route {
        WRoute::Series => {
            if !series_ok {
                return Err(Error::Domain("series route needs 2μ off the integers".into()));
            }
            true
        }
        WRoute::Integral => false,
        WRoute::Auto => series_ok && z.norm() <= 2.0 * (1.0 + mu.norm()),
    };
    Ok(if use_series {
        whittaker_w_series(kappa, mu, z)
    } else {
        whittaker_w_integral(kappa, mu, z)
    })
}

/// Request for `M_k(s) = ∫₀^∞ W_{k,μ}(y) W_{k,ν}(y) y^{s−2} dy`.
#[derive(Clone, Copy, Debug)]
pub struct MellinSample {
    pub k: f64,
    pub mu: C,
    pub nu: C,
    pub s: C,
    /// Angle of the rotated ray `y = ρ e^{iθ}`; zero for the real axis.
    pub rotation: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct MellinValue {
    pub value: C,
    pub error: f64,
}

pub fn mellin_whittaker_pair(req: &MellinSample) -> Result<MellinValue> {
    if !(req.s.re > 0.0) {
        return Err(Error::Domain("Mellin transform needs Re s > 0".into()));
    }
    if req.rotation.abs() >= PI / 2.0 {
        return Err(Error::Domain("rotation must stay inside the right half-plane".into()));
    }
    let dir = C::from_polar(1.0, req.rotation);
    let f = |rho: f64| -> C {
        let y = dir * rho;
        let w1 = whittaker_w(req.k, req.mu, y).unwrap_or(C::new(f64::NAN, 0.0));
        let w2 = if req.nu == req.mu {
            w1
        } else {
            whittaker_w(req.k, req.nu, y).unwrap_or(C::new(f64::NAN, 0.0))
        };
        w1 * w2 * (y.ln() * (req.s - 2.0)).exp() * dir
    };
    let (value, error) = quad::exp_sinh(f, 5.0, 1e-13);
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::PrecisionUnreachable("Mellin transform".into()));
    }
    Ok(MellinValue { value, error: error.max(1e-15 * value.magnitude()) })
}

/// `∫₀^∞ W_{κ,μ}(y) W_{λ,μ'}(y) dy/y`, the `s = 1` value of the Mellin pair.
pub fn whittaker_product_integral(kappa: f64, lambda: f64, mu: C, mu2: C) -> Result<C> {
    let f = |y: f64| -> C {
        let w1 = whittaker_w(kappa, mu, C::new(y, 0.0)).unwrap();
        let w2 = whittaker_w(lambda, mu2, C::new(y, 0.0)).unwrap();
        w1 * w2 / y
    };
    let (v, _) = quad::exp_sinh(f, 5.0, 1e-13);
    Ok(v)
}
