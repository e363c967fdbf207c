//! Level-one Hecke eigenforms: exact q-expansions for the one-dimensional
//! holomorphic cusp spaces, Maass form data files, point evaluation and
//! Petersson norms.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geodesics::reduce_with_cocycle;
use crate::quad;
use crate::specfun::k_imag;

/// Weights whose level-one cusp space is one-dimensional.
pub const SUPPORTED_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// Smallest height reached after reduction to the fundamental domain.
pub const MIN_HEIGHT: f64 = 0.866_025_403_784_438_6;

#[derive(Clone, Debug)]
pub struct HolomorphicEigenform {
    pub weight: u32,
    /// `a(1), a(2), …` as exact integers.
    pub coeffs: Arc<Vec<BigInt>>,
    coeffs_f: Arc<Vec<f64>>,
}

fn coeff_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static C: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of `Π (1 − qⁿ)^k` up to `q^n` by the power recursion on the
/// sparse pentagonal series.
fn eta_power(k: i64, n: usize) -> Vec<BigInt> {
    // Euler: Π(1 − qⁿ) = Σ (−1)^j q^{j(3j−1)/2}
    let mut pent: Vec<(usize, i64)> = Vec::new();
    let mut j = 1i64;
    loop {
        let s = if j % 2 == 0 { 1 } else { -1 };
        let e1 = (j * (3 * j - 1) / 2) as usize;
        let e2 = (j * (3 * j + 1) / 2) as usize;
        if e1 > n {
            break;
        }
        pent.push((e1, s));
        if e2 <= n {
            pent.push((e2, s));
        }
        j += 1;
    }
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::from(1);
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for &(e, s) in &pent {
            if e > m {
                break;
            }
            let w = ((k + 1) * e as i64 - m as i64) * s;
            if w != 0 {
                acc += &c[m - e] * w;
            }
        }
        c[m] = acc / (m as i64);
    }
    c
}

fn sigma_table(k: u32, n: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); n + 1];
    for d in 1..=n {
        let p = BigInt::from(d).pow(k);
        let mut m = d;
        while m <= n {
            s[m] += &p;
            m += d;
        }
    }
    s
}

/// `E_k` coefficients for `k ∈ {0, 4, 6, 8, 10, 14}`.
fn eisenstein(k: u32, n: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n + 1];
    e[0] = BigInt::from(1);
    if k == 0 {
        return e;
    }
    let c: i64 = match k {
        4 => 240,
        6 => -504,
        8 => 480,
        10 => -264,
        14 => -24,
        _ => unreachable!(),
    };
    let s = sigma_table(k - 1, n);
    for m in 1..=n {
        e[m] = &s[m] * c;
    }
    e
}

fn compute_coeffs(weight: u32, n: usize) -> Vec<BigInt> {
    // Δ = q Π(1 − qⁿ)^24, then Δ·E_{w−12}
    let eta = eta_power(24, n - 1);
    let e = eisenstein(weight - 12, n - 1);
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = BigInt::zero();
        for i in 0..=m {
            if !e[m - i].is_zero() {
                acc += &eta[i] * &e[m - i];
            }
        }
        out.push(acc);
    }
    out
}

/// The normalized eigenform of the given weight with `a(1..=n)`.
pub fn holomorphic_eigenform(weight: u32, n: usize) -> Result<HolomorphicEigenform> {
    if !SUPPORTED_WEIGHTS.contains(&weight) {
        return Err(Error::UnsupportedWeight(weight));
    }
    let n = n.max(1);
    let coeffs = {
        let mut cache = coeff_cache().lock().unwrap();
        match cache.get(&weight) {
            Some(c) if c.len() >= n => Arc::new(c[..n].to_vec()),
            _ => {
                let c = Arc::new(compute_coeffs(weight, n));
                cache.insert(weight, c.clone());
                c
            }
        }
    };
    let coeffs_f = Arc::new(coeffs.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect());
    Ok(HolomorphicEigenform { weight, coeffs, coeffs_f })
}

/// Number of divisors, used in the Deligne bound.
fn divisor_count(n: usize) -> f64 {
    let mut c = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            c += if d * d == n { 1 } else { 2 };
        }
        d += 1;
    }
    c as f64
}

impl HolomorphicEigenform {
    pub fn k_half(&self) -> u32 {
        self.weight / 2
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a(n)` as a double, `n ≥ 1`.
    pub fn a(&self, n: usize) -> f64 {
        self.coeffs_f[n - 1]
    }

    /// Truncation index for `Σ a(n) qⁿ` at height `y` such that the Deligne
    /// tail `Σ_{n>N} d(n) n^{(w−1)/2} e^{−2πny}` stays below `tol`.
    pub fn terms_needed(&self, y: f64, tol: f64) -> usize {
        let e = (self.weight as f64 - 1.0) / 2.0;
        let mut n = 1usize;
        loop {
            // tail ≤ next term × geometric factor, with d(n) ≤ 2√n
            let t = |m: f64| 2.0 * m.sqrt() * m.powf(e) * (-2.0 * PI * m * y).exp();
            let r = t(n as f64 + 2.0) / t(n as f64 + 1.0);
            if r < 1.0 && t(n as f64 + 1.0) / (1.0 - r) < tol {
                return n;
            }
            n += 1;
            if n > 1_000_000 {
                return n;
            }
        }
    }

    /// `f(z)` via the fundamental domain and `f(z) = (cz + d)^{−w} f(z*)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_tol(z, 1e-15)
    }

    pub fn eval_tol(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("f at {z}")));
        }
        let (zs, j) = reduce_with_cocycle(z);
        let n = self.terms_needed(zs.im, tol);
        if n > self.len() {
            return Err(Error::PrecisionUnreachable(format!(
                "{n} coefficients needed at height {}, {} stored",
                zs.im,
                self.len()
            )));
        }
        Ok(self.q_series(zs, n) * j.powi(-(self.weight as i32)))
    }

    /// `Σ_{n ≤ N} a(n) e^{2πinz}` by Horner's rule, no reduction.
    pub fn q_series(&self, z: Complex64, n: usize) -> Complex64 {
        let q = Complex64::from_polar((-2.0 * PI * z.im).exp(), 2.0 * PI * z.re);
        let mut s = Complex64::new(0.0, 0.0);
        for m in (1..=n).rev() {
            s = (s + self.coeffs_f[m - 1]) * q;
        }
        s
    }

    /// Content hash of the coefficients.
    pub fn form_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.weight.to_le_bytes());
        for c in self.coeffs.iter().take(64) {
            h.update(c.to_signed_bytes_le());
            h.update([0xff]);
        }
        format!("hol{}-{}", self.weight, hex8(&h.finalize()))
    }

    /// Deligne bound `|a(n)| ≤ d(n) n^{(w−1)/2}` on the stored range.
    pub fn deligne_holds(&self) -> bool {
        let e = (self.weight as f64 - 1.0) / 2.0;
        (1..=self.len()).all(|n| self.a(n).abs() <= divisor_count(n) * (n as f64).powf(e) * (1.0 + 1e-12))
    }
}

fn hex8(bytes: &[u8]) -> String {
    bytes.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug)]
pub struct MaassForm {
    /// Laplace eigenvalue `¼ + R²`.
    pub spectral_r: f64,
    pub parity: Parity,
    /// `⟨φ, φ⟩` when known.
    pub norm: Option<f64>,
    /// `a(1), a(2), …`.
    pub coeffs: Vec<f64>,
    pub provenance: String,
}

/// Parses the line-oriented Maass data format.
pub fn parse_maass_form(text: &str, provenance: &str) -> Result<MaassForm> {
    let mut r = None;
    let mut parity = None;
    let mut norm = None;
    let mut coeffs: Vec<f64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        let mut it = line.split_whitespace();
        let key = it.next().unwrap();
        let val = it.next().ok_or_else(|| perr("missing value"))?;
        if it.next().is_some() {
            return Err(perr("trailing fields"));
        }
        match key {
            "R" => r = Some(val.parse::<f64>().map_err(|_| perr("bad R"))?),
            "parity" => {
                parity = Some(match val {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(perr("parity must be even or odd")),
                })
            }
            "norm" => {
                norm = if val == "unknown" {
                    None
                } else {
                    Some(val.parse::<f64>().map_err(|_| perr("bad norm"))?)
                }
            }
            _ => {
                let n: usize = key.parse().map_err(|_| perr("expected `n a(n)`"))?;
                if n != coeffs.len() + 1 {
                    return Err(perr("coefficients must be listed for n = 1, 2, … in order"));
                }
                coeffs.push(val.parse::<f64>().map_err(|_| perr("bad coefficient"))?);
            }
        }
    }
    let end = text.lines().count();
    let r = r.ok_or(Error::Parse { line: end, msg: "missing R".into() })?;
    let parity = parity.ok_or(Error::Parse { line: end, msg: "missing parity".into() })?;
    if coeffs.is_empty() {
        return Err(Error::Parse { line: end, msg: "no coefficients".into() });
    }
    let a1 = coeffs[0];
    if a1 == 0.0 {
        return Err(Error::Validation("a(1) = 0".into()));
    }
    for c in coeffs.iter_mut() {
        *c /= a1;
    }
    let form = MaassForm { spectral_r: r, parity, norm: norm.map(|x| x / (a1 * a1)), coeffs, provenance: provenance.into() };
    form.validate()?;
    Ok(form)
}

pub fn load_maass_form(path: &Path) -> Result<MaassForm> {
    let text = std::fs::read_to_string(path)?;
    parse_maass_form(&text, &path.display().to_string())
}

impl MaassForm {
    /// Data-quality checks: finite values, `R > 0`, and the Hecke relations
    /// `a(p²) = a(p)² − 1` and `a(mn) = a(m)a(n)` on the stored range.
    pub fn validate(&self) -> Result<()> {
        if !(self.spectral_r > 0.0) || self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Validation("R and coefficients must be finite, R > 0".into()));
        }
        let n = self.coeffs.len();
        let a = |k: usize| self.coeffs[k - 1];
        for p in [2usize, 3, 5] {
            if p * p <= n && (a(p * p) - a(p) * a(p) + 1.0).abs() > 1e-4 {
                return Err(Error::Validation(format!("Hecke relation a({p}²) = a({p})² − 1 fails")));
            }
        }
        for (m, k) in [(2usize, 3usize), (2, 5), (3, 5)] {
            if m * k <= n && (a(m * k) - a(m) * a(k)).abs() > 1e-4 {
                return Err(Error::Validation(format!("multiplicativity a({}) = a({m})a({k}) fails", m * k)));
            }
        }
        Ok(())
    }

    pub fn form_id(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.spectral_r.to_le_bytes());
        h.update([matches!(self.parity, Parity::Odd) as u8]);
        for c in &self.coeffs {
            h.update(c.to_le_bytes());
        }
        let p = if self.parity == Parity::Odd { "odd" } else { "even" };
        format!("maass{p}{:.4}-{}", self.spectral_r, hex8(&h.finalize()))
    }

    /// Number of terms needed at height `y` for an absolute tolerance `tol`
    /// relative to the size `e^{−πR/2}` of the leading terms, or `None` if the
    /// stored coefficients run out.
    pub fn terms_needed(&self, y: f64, tol: f64) -> Option<usize> {
        let r = self.spectral_r;
        let scale = (-PI * r / 2.0).exp();
        for n in 1..=self.coeffs.len() {
            let x = 2.0 * PI * n as f64 * y;
            // |K_{iR}(x)| ≤ √(π/2x) e^{−x} beyond the turning point
            if x > r && (PI / (2.0 * x)).sqrt() * (-x).exp() * 2.0 * (n as f64).sqrt() < tol * scale {
                return Some(n);
            }
        }
        None
    }

    /// `φ(z) = 2 Σ a(n) √y K_{iR}(2πny) cos(2πnx)` (sine for odd forms),
    /// evaluated at the fundamental-domain image of `z`.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        if !(z.im > 0.0) {
            return Err(Error::Domain(format!("φ at {z}")));
        }
        let (zs, _) = reduce_with_cocycle(z);
        let n = self.terms_needed(zs.im, 1e-14).ok_or_else(|| {
            Error::PrecisionUnreachable(format!("not enough Maass coefficients at height {}", zs.im))
        })?;
        Ok(self.fourier_sum(zs, n))
    }

    /// The Fourier sum at `z` itself, without reduction.
    pub fn fourier_sum(&self, z: Complex64, n: usize) -> f64 {
        let sy = z.im.sqrt();
        let mut s = 0.0;
        for m in 1..=n.min(self.coeffs.len()) {
            let arg = 2.0 * PI * m as f64;
            let k = k_imag(self.spectral_r, arg * z.im);
            let t = match self.parity {
                Parity::Even => (arg * z.re).cos(),
                Parity::Odd => (arg * z.re).sin(),
            };
            s += self.coeffs[m - 1] * k * t;
        }
        2.0 * sy * s
    }
}

/// Either kind of eigenform.
#[derive(Clone, Debug)]
pub enum Eigenform {
    Holomorphic(HolomorphicEigenform),
    Maass(MaassForm),
}

impl Eigenform {
    pub fn form_id(&self) -> String {
        match self {
            Eigenform::Holomorphic(f) => f.form_id(),
            Eigenform::Maass(f) => f.form_id(),
        }
    }
}

/// Petersson norm with its diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct NormValue {
    pub value: f64,
    /// Bound on the part above the truncation height.
    pub tail_bound: f64,
    pub quad_error: f64,
}

/// `∫_F |f|² y^w dx dy / y²` (holomorphic) or `∫_F |φ|² dx dy / y²` (Maass)
/// over the standard fundamental domain cut at `y_max`.
///
/// Below `y = 1` the domain is integrated in two dimensions; above it the
/// `x`-integral is done termwise by Parseval.
pub fn petersson_norm(f: &Eigenform, y_max: f64) -> Result<NormValue> {
    let y_max = y_max.max(1.0);
    let (dens, strip): (Box<dyn Fn(Complex64) -> f64 + Sync>, Box<dyn Fn(f64) -> f64>) = match f {
        Eigenform::Holomorphic(h) => {
            let h1 = h.clone();
            let h2 = h.clone();
            let w = h.weight as i32;
            let n = h.terms_needed(MIN_HEIGHT * 0.99, 1e-18).min(h.len());
            (
                Box::new(move |z: Complex64| h1.q_series(z, n).norm_sqr() * z.im.powi(w - 2)),
                Box::new(move |y: f64| {
                    let mut s = 0.0;
                    for m in 1..=n {
                        s += h2.a(m).powi(2) * (-4.0 * PI * m as f64 * y).exp();
                    }
                    s * y.powi(w - 2)
                }),
            )
        }
        Eigenform::Maass(m) => {
            let m1 = m.clone();
            let m2 = m.clone();
            let n = m.terms_needed(MIN_HEIGHT * 0.99, 1e-12).ok_or_else(|| {
                Error::PrecisionUnreachable("not enough Maass coefficients for the norm".into())
            })?;
            (
                Box::new(move |z: Complex64| m1.fourier_sum(z, n).powi(2) / (z.im * z.im)),
                Box::new(move |y: f64| {
                    let mut s = 0.0;
                    for k in 1..=n {
                        let kk = k_imag(m2.spectral_r, 2.0 * PI * k as f64 * y);
                        s += m2.coeffs[k - 1].powi(2) * kk * kk;
                    }
                    2.0 * s / y
                }),
            )
        }
    };
    // lower region, symmetric in x
    let lower = quad::integrate(
        |x: f64| {
            let y0 = (1.0 - x * x).sqrt();
            let inner = quad::integrate(|y: f64| dens(Complex64::new(x, y)), y0, 1.0, 1, 1e-300, 1e-13, 200);
            inner.value
        },
        0.0,
        0.5,
        2,
        1e-300,
        1e-13,
        200,
    );
    let upper = quad::integrate(&strip, 1.0, y_max, 8, 1e-300, 1e-13, 2000);
    // the strip density decays at least like e^{−2π y} times a power
    let tail = quad::integrate(&strip, y_max, y_max + 40.0, 8, 1e-300, 1e-10, 2000);
    Ok(NormValue {
        value: 2.0 * lower.value + upper.value,
        tail_bound: tail.value.abs(),
        quad_error: 2.0 * lower.error + upper.error,
    })
}
