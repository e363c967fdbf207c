//! Central values of L-functions by smoothed approximate functional
//! equations, each computed at two cutoffs whose spread is the error bar.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modforms::{HolomorphicEigenform, MaassForm, Parity};
use crate::qforms::is_discriminant;
use crate::quad;
use crate::specfun::k_imag;

/// An L-value with its self-validation data.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralValue {
    pub value: f64,
    pub error_estimate: f64,
    pub method: String,
    pub cutoffs: (f64, f64),
}

impl CentralValue {
    fn vanishing(method: &str) -> Self {
        CentralValue { value: 0.0, error_estimate: 0.0, method: method.into(), cutoffs: (0.0, 0.0) }
    }
}

/// The two cutoffs `A` and `2A` used by every AFE here.
pub const CUTOFFS: (f64, f64) = (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::SQRT_2);

/// Kronecker symbol `(d/n)` for `d ≡ 0, 1 mod 4`.
pub fn kronecker_symbol(d: i64, n: i64) -> Result<i32> {
    if d.rem_euclid(4) > 1 {
        return Err(Error::NotADiscriminant(d));
    }
    Ok(kronecker(d, n))
}

fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut res = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a < 0 {
            res = -res;
        }
    }
    let tz = n.trailing_zeros();
    n >>= tz;
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            res = -res;
        }
    }
    // Jacobi symbol (a/n) for odd n > 0
    let mut a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 { res } else { 0 }
}

/// `Q(k, x) = Γ(k, x)/Γ(k) = e^{−x} Σ_{j<k} x^j / j!` for integer `k ≥ 1`.
fn gamma_q_int(k: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut s = 1.0;
    for j in 1..k {
        term *= x / j as f64;
        s += term;
    }
    s * (-x).exp()
}

/// Smallest `x` with `Q(k, x) < 1e−18`.
fn q_cut(k: u32) -> f64 {
    let mut x = k as f64;
    while gamma_q_int(k, x) > 1e-18 {
        x += 0.5;
    }
    x
}

/// Coefficients needed for the AFE of a weight-`w` form twisted by a
/// character of conductor `q` (use `q = 1` for no twist).
pub fn coefficients_needed(weight: u32, q: u64) -> usize {
    let x = q_cut(weight / 2);
    (x * q as f64 * CUTOFFS.1 / (2.0 * PI)).ceil() as usize + 1
}

/// `Σ λ(n) χ(n) n^{−½} [Q(w/2, 2πn/(qA)) + ε Q(w/2, 2πnA/q)]`.
fn afe_holomorphic(f: &HolomorphicEigenform, q: u64, chi: &dyn Fn(usize) -> i32, a: f64) -> (f64, f64) {
    let k = f.weight / 2;
    let eps = if k % 2 == 0 { 1.0 } else { -1.0 };
    let x_cut = q_cut(k);
    let e = (f.weight as f64 - 1.0) / 2.0;
    let mut sum = 0.0;
    let mut abs = 0.0;
    let mut n = 1usize;
    loop {
        let x1 = 2.0 * PI * n as f64 / (q as f64 * a);
        let x2 = 2.0 * PI * n as f64 * a / q as f64;
        if x1.min(x2) > x_cut || n > f.len() {
            break;
        }
        let c = chi(n);
        if c != 0 {
            let lam = f.a(n) / (n as f64).powf(e);
            let t = c as f64 * lam / (n as f64).sqrt() * (gamma_q_int(k, x1) + eps * gamma_q_int(k, x2));
            sum += t;
            abs += t.abs();
        }
        n += 1;
    }
    (sum, abs)
}

fn two_cutoffs(f: &HolomorphicEigenform, q: u64, chi: &dyn Fn(usize) -> i32, method: String) -> Result<CentralValue> {
    let needed = coefficients_needed(f.weight, q);
    if f.len() < needed {
        return Err(Error::InsufficientCoefficients { needed, have: f.len() });
    }
    let (v1, s1) = afe_holomorphic(f, q, chi, CUTOFFS.0);
    let (v2, s2) = afe_holomorphic(f, q, chi, CUTOFFS.1);
    let round = 4.0 * f64::EPSILON * s1.max(s2);
    Ok(CentralValue { value: v2, error_estimate: (v1 - v2).abs() + round, method, cutoffs: CUTOFFS })
}

/// `L(½, f)` in the analytic normalization `λ(n) = a(n)/n^{(w−1)/2}`.
pub fn central_value_holomorphic(f: &HolomorphicEigenform) -> Result<CentralValue> {
    if (f.weight / 2) % 2 == 1 {
        return Ok(CentralValue::vanishing("root number -1"));
    }
    two_cutoffs(f, 1, &|_| 1, "AFE, incomplete Gamma weights, conductor 1".into())
}

/// `L(½, f ⊗ χ_d)` for a positive fundamental discriminant `d`.
pub fn central_value_twisted(f: &HolomorphicEigenform, d: i64) -> Result<CentralValue> {
    let info = is_discriminant(d);
    if !info.valid || d <= 0 {
        return Err(Error::NotADiscriminant(d));
    }
    if !info.fundamental {
        return Err(Error::NotFundamental(d));
    }
    if (f.weight / 2) % 2 == 1 {
        return Ok(CentralValue::vanishing("root number -1"));
    }
    let chi = move |n: usize| kronecker(d, n as i64);
    let q = (d * d) as u64;
    // the AFE argument scale is √(conductor) = d
    two_cutoffs(f, d as u64, &chi, format!("AFE, incomplete Gamma weights, conductor {q}"))
}

/// `H(x) = ∫_x^∞ t^{−½} K_{iR}(t) dt`.
fn bessel_tail(r: f64, x: f64) -> f64 {
    let end = x.max(r) + 60.0;
    let panels = 4 + ((end - x) / 2.0) as usize;
    quad::integrate(|t: f64| k_imag(r, t) / t.sqrt(), x, end, panels, 1e-300, 1e-13, 4000).value
}

/// `Λ(½, φ) = π^{−½} Γ((½+iR)/2) Γ((½−iR)/2) L(½, φ)` for a Maass form.
pub fn completed_central_maass(phi: &MaassForm) -> Result<CentralValue> {
    if phi.parity == Parity::Odd {
        return Ok(CentralValue::vanishing("root number -1 (odd form)"));
    }
    let r = phi.spectral_r;
    let scale = (-PI * r / 2.0).exp();
    let run = |a: f64| -> Result<(f64, f64)> {
        // Λ(½) = 4 Σ a(n) (2πn)^{−½} [H(2πn/A) + H(2πnA)]
        let mut sum = 0.0;
        let mut abs = 0.0;
        for n in 1.. {
            let (x1, x2) = (2.0 * PI * n as f64 / a, 2.0 * PI * n as f64 * a);
            let h1 = bessel_tail(r, x1);
            let h2 = bessel_tail(r, x2);
            if x1.min(x2) > r && h1.abs().max(h2.abs()) < 1e-17 * scale {
                break;
            }
            if n > phi.coeffs.len() {
                return Err(Error::InsufficientCoefficients { needed: n, have: phi.coeffs.len() });
            }
            let t = 4.0 * phi.coeffs[n - 1] / (2.0 * PI * n as f64).sqrt() * (h1 + h2);
            sum += t;
            abs += t.abs();
        }
        Ok((sum, abs))
    };
    let (v1, s1) = run(CUTOFFS.0)?;
    let (v2, s2) = run(CUTOFFS.1)?;
    let round = 1e-12 * s1.max(s2);
    Ok(CentralValue {
        value: v2,
        error_estimate: (v1 - v2).abs() + round,
        method: "AFE, K-Bessel tail weights".into(),
        cutoffs: CUTOFFS,
    })
}
