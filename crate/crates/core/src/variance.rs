//! Variances of the normalized periods `μ_d(F)/d^{1/4}`: the classical
//! closed forms on minimal vectors, the ladder functionals, the empirical
//! discriminant averages and the residue identities behind the constants.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lfun::{central_value_holomorphic, completed_central_maass};
use crate::modforms::{petersson_norm, Eigenform, Parity};
use crate::periods::{mu_batch, table_id, BatchOptions, BatchResult, PeriodCache, PeriodRecord};
use crate::specfun::{abs_gamma_sq, beta, digamma, gamma, mellin_whittaker_pair, whittaker_product_integral, MellinSample};

type C = Complex64;

/// `V^sym(φ₀, φ₀)` for a Maass form with Laplace eigenvalue `¼ + R²`:
/// `|Γ(¼ + ir)|⁴ / (2π |Γ(½ + 2ir)|²) · norm` with `r = R/2`.
pub fn v_sym_spherical(big_r: f64, norm: f64) -> f64 {
    let r = big_r / 2.0;
    abs_gamma_sq(0.25, r).powi(2) / (2.0 * PI * abs_gamma_sq(0.5, 2.0 * r)) * norm
}

/// `V^sym(φ_w, φ_w) = ½ 2^w B(w/2, w/2)` for a unit lowest-weight vector,
/// and exactly zero when `w ≡ 2 mod 4`.
pub fn v_sym_discrete(w: u32) -> f64 {
    if w % 4 != 0 {
        return 0.0;
    }
    let h = w as f64 / 2.0;
    // 2^w B(h, h) without overflowing either factor
    (w as f64 * std::f64::consts::LN_2 + beta(h, h).expect("positive").ln()).exp() / 2.0
}

/// A `K`-type ladder of an irreducible unitary representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LadderSpec {
    /// Principal or complementary series with parameter `s` (`s ∈ iℝ` or `(−1, 1)`).
    Spherical { s: C },
    /// Lowest weight `m0 > 0` (even).
    Discrete { m0: i64 },
}

/// `η(φ_n)/η(φ_π)` for the `A`-invariant functional `η`.
pub fn ladder_ratio(spec: LadderSpec, n: i64) -> Result<C> {
    if n % 2 != 0 {
        return Err(Error::OutOfLadder(n));
    }
    match spec {
        LadderSpec::Spherical { s } => {
            let m = n.abs();
            if m % 4 == 2 {
                return Ok(C::new(0.0, 0.0));
            }
            let mut r = C::new(1.0, 0.0);
            let mut j = 4;
            while j <= m {
                r *= (j as f64 - 3.0 - s) / (j as f64 - 1.0 + s);
                j += 4;
            }
            Ok(r)
        }
        LadderSpec::Discrete { m0 } => {
            if m0 <= 0 || m0 % 2 != 0 || n < m0 {
                return Err(Error::OutOfLadder(n));
            }
            let k = n - m0;
            if k % 4 == 2 {
                return Ok(C::new(0.0, 0.0));
            }
            let mut r = 1.0;
            let mut j = 4;
            while j <= k {
                // step m0 + j − 4 → m0 + j
                r *= (j as f64 / 2.0 - 1.0) / (m0 as f64 + j as f64 / 2.0 - 1.0);
                j += 4;
            }
            Ok(C::new(r, 0.0))
        }
    }
}

/// The parameter `s` with which the ladder operators act.
pub fn ladder_parameter(spec: LadderSpec) -> C {
    match spec {
        LadderSpec::Spherical { s } => s,
        LadderSpec::Discrete { m0 } => C::new(m0 as f64 - 1.0, 0.0),
    }
}

/// The constants entering the predicted variance of one form.
#[derive(Clone, Debug, PartialEq)]
pub struct FormTarget {
    pub form_id: String,
    /// `c(0) = 6/π` for Maass forms, `1/π` for holomorphic ones.
    pub c: f64,
    /// `L(½, F)` in the analytic normalization.
    pub l_half: f64,
    /// `V^sym` on the generating vector including the Petersson norm.
    pub v_sym: f64,
    /// Factor from the classical Petersson norm to the one in `V^sym`.
    pub dictionary: f64,
}

impl FormTarget {
    pub fn value(&self) -> f64 {
        self.c * self.l_half * self.v_sym * self.dictionary
    }
}

/// Dictionary constant for holomorphic forms; see the crate README.
pub const HOLOMORPHIC_DICTIONARY: f64 = 6.0;
/// Dictionary constant for Maass forms (uncalibrated).
pub const MAASS_DICTIONARY: f64 = 1.0;

/// Assembles `c · L(½) · V^sym` for a form, computing `L(½)` and the Petersson
/// norm when they are not supplied.
pub fn form_target(f: &Eigenform, dictionary: Option<f64>) -> Result<FormTarget> {
    match f {
        Eigenform::Holomorphic(h) => {
            let l = central_value_holomorphic(h)?.value;
            let norm = if h.weight % 4 == 0 { petersson_norm(f, 12.0)?.value } else { 0.0 };
            Ok(FormTarget {
                form_id: h.form_id(),
                c: 1.0 / PI,
                l_half: l,
                v_sym: v_sym_discrete(h.weight) * norm,
                dictionary: dictionary.unwrap_or(HOLOMORPHIC_DICTIONARY),
            })
        }
        Eigenform::Maass(m) => {
            let (l, v) = if m.parity == Parity::Odd {
                (0.0, 0.0)
            } else {
                let big_l = completed_central_maass(m)?.value;
                let gamma = abs_gamma_sq(0.25, m.spectral_r / 2.0) / PI.sqrt();
                let norm = match m.norm {
                    Some(n) => n,
                    None => petersson_norm(f, 12.0)?.value,
                };
                (big_l / gamma, v_sym_spherical(m.spectral_r, norm))
            };
            Ok(FormTarget {
                form_id: m.form_id(),
                c: 6.0 / PI,
                l_half: l,
                v_sym: v,
                dictionary: dictionary.unwrap_or(MAASS_DICTIONARY),
            })
        }
    }
}

/// One row of a variance report.
#[derive(Clone, Debug, PartialEq)]
pub struct VarianceRow {
    pub y: i64,
    /// Discriminants `d ≤ Y` with a record.
    pub count: usize,
    /// `Σ μ̃_d(F₁) conj μ̃_d(F₂) / count`.
    pub b_sharp: C,
    /// The same sum divided by `Y`.
    pub b_flat: C,
    /// `c L(½) V^sym` on the diagonal, zero for distinct forms.
    pub target: f64,
    /// `B/target`, or `B/√(T₁T₂)` for distinct forms.
    pub ratio_sharp: f64,
    pub ratio_flat: f64,
    /// Running mean of `μ̃_d(F₁)` over `count`.
    pub mean: C,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarianceReport {
    pub form_ids: (String, String),
    pub targets: (FormTarget, FormTarget),
    pub rows: Vec<VarianceRow>,
    /// Relative spread `(max − min)/mean` of each ratio over the last decade of the grid.
    pub last_decade_spread: (f64, f64),
    /// Standard error of the diagonal sum estimated from block averages over
    /// disjoint `d`-windows, relative to the final `B_sharp`.
    pub block_error: f64,
    pub failures: Vec<(i64, String)>,
}

/// Cutoffs `1, 2, 5 × 10^j` up to `y_max`, plus `y_max` itself.
pub fn y_grid(y_max: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 10i64;
    while p <= y_max {
        for m in [1, 2, 5] {
            if m * p <= y_max {
                out.push(m * p);
            }
        }
        p *= 10;
    }
    if out.last() != Some(&y_max) {
        out.push(y_max);
    }
    out
}

fn relative_spread(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    (hi - lo) / mean.abs()
}

/// Builds the report from two period tables over the same discriminants.
pub fn variance_from_records(
    r1: &[PeriodRecord],
    r2: &[PeriodRecord],
    t1: &FormTarget,
    t2: &FormTarget,
    grid: &[i64],
) -> Result<VarianceReport> {
    if r1.len() != r2.len() || r1.iter().zip(r2).any(|(a, b)| a.d != b.d) {
        return Err(Error::Validation("period tables cover different discriminants".into()));
    }
    let same = t1.form_id == t2.form_id;
    let target = if same { t1.value() } else { 0.0 };
    let denom = if same { target } else { (t1.value() * t2.value()).sqrt() };
    let mut rows = Vec::with_capacity(grid.len());
    let mut sum = C::new(0.0, 0.0);
    let mut sum1 = C::new(0.0, 0.0);
    let mut i = 0;
    for &y in grid {
        while i < r1.len() && r1[i].d <= y {
            sum += r1[i].normalized * r2[i].normalized.conj();
            sum1 += r1[i].normalized;
            i += 1;
        }
        let count = i;
        let n = count.max(1) as f64;
        let b_sharp = sum / n;
        let b_flat = sum / y as f64;
        rows.push(VarianceRow {
            y,
            count,
            b_sharp,
            b_flat,
            target,
            ratio_sharp: b_sharp.re / denom,
            ratio_flat: b_flat.re / denom,
            mean: sum1 / n,
        });
    }
    let last = rows.last().map(|r| r.y).unwrap_or(0);
    let decade: Vec<&VarianceRow> = rows.iter().filter(|r| r.y * 10 >= last).collect();
    let spread = (
        relative_spread(&decade.iter().map(|r| r.ratio_sharp).collect::<Vec<_>>()),
        relative_spread(&decade.iter().map(|r| r.ratio_flat).collect::<Vec<_>>()),
    );
    Ok(VarianceReport {
        form_ids: (t1.form_id.clone(), t2.form_id.clone()),
        targets: (t1.clone(), t2.clone()),
        block_error: block_error(r1, r2, 16),
        rows,
        last_decade_spread: spread,
        failures: Vec::new(),
    })
}

/// Standard error of the mean of `μ̃₁ conj μ̃₂` from `blocks` consecutive
/// windows, relative to the overall mean.
fn block_error(r1: &[PeriodRecord], r2: &[PeriodRecord], blocks: usize) -> f64 {
    if r1.len() < blocks * 2 {
        return f64::NAN;
    }
    let size = r1.len() / blocks;
    let means: Vec<f64> = (0..blocks)
        .map(|b| {
            let range = b * size..(b + 1) * size;
            r1[range.clone()].iter().zip(&r2[range]).map(|(a, c)| (a.normalized * c.normalized.conj()).re).sum::<f64>()
                / size as f64
        })
        .collect();
    let m = means.iter().sum::<f64>() / blocks as f64;
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (blocks - 1) as f64;
    (var / blocks as f64).sqrt() / m.abs()
}

/// The empirical variance of `F₁`, `F₂` over discriminants up to `y_max`.
pub fn variance_run(
    f1: &Eigenform,
    f2: &Eigenform,
    y_max: i64,
    cache: Option<&mut PeriodCache>,
    opts: &BatchOptions,
    dictionaries: (Option<f64>, Option<f64>),
) -> Result<VarianceReport> {
    let t1 = form_target(f1, dictionaries.0)?;
    let t2 = form_target(f2, dictionaries.1)?;
    let same = f1.form_id() == f2.form_id();
    let forms: Vec<Eigenform> = if same { vec![f1.clone()] } else { vec![f1.clone(), f2.clone()] };
    let batch = mu_batch(&forms, 5, y_max, cache, opts)?;
    let (r1, r2) = common_records(&batch, same);
    let mut rep = variance_from_records(&r1, &r2, &t1, &t2, &y_grid(y_max))?;
    rep.failures = batch.failures;
    Ok(rep)
}

fn common_records(batch: &BatchResult, same: bool) -> (Vec<PeriodRecord>, Vec<PeriodRecord>) {
    let a = &batch.records[0];
    if same {
        return (a.clone(), a.clone());
    }
    let b = &batch.records[1];
    let ds: std::collections::HashSet<i64> = b.iter().map(|r| r.d).collect();
    let r1: Vec<PeriodRecord> = a.iter().filter(|r| ds.contains(&r.d)).cloned().collect();
    let keep: std::collections::HashSet<i64> = r1.iter().map(|r| r.d).collect();
    let r2 = b.iter().filter(|r| keep.contains(&r.d)).cloned().collect();
    (r1, r2)
}

/// CSV with header `Y,count,B_emp_sharp,B_emp_flat,target,ratio_sharp,ratio_flat,mean`.
/// Complex quantities are written by their real parts.
pub fn variance_csv(rep: &VarianceReport) -> String {
    let mut s = String::from("Y,count,B_emp_sharp,B_emp_flat,target,ratio_sharp,ratio_flat,mean\n");
    for r in &rep.rows {
        let _ = writeln!(
            s,
            "{},{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            r.y, r.count, r.b_sharp.re, r.b_flat.re, r.target, r.ratio_sharp, r.ratio_flat, r.mean.re
        );
    }
    s
}

/// Running mean with a fit of the partial sums against `Y^{1/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanReport {
    pub form_id: String,
    /// `(Y, count, mean)`.
    pub rows: Vec<(i64, usize, C)>,
    /// Least-squares slope of `log |Σ_{d≤Y} μ̃_d|` against `log Y`.
    pub exponent: f64,
    /// `max |Σ_{d≤Y} μ̃_d| / Y^{1/2}` over the grid.
    pub sqrt_constant: f64,
}

pub fn mean_from_records(form_id: &str, recs: &[PeriodRecord], grid: &[i64]) -> MeanReport {
    let mut rows = Vec::new();
    let mut sum = C::new(0.0, 0.0);
    let mut i = 0;
    let mut pts = Vec::new();
    let mut c: f64 = 0.0;
    for &y in grid {
        while i < recs.len() && recs[i].d <= y {
            sum += recs[i].normalized;
            i += 1;
        }
        rows.push((y, i, sum / i.max(1) as f64));
        c = c.max(sum.norm() / (y as f64).sqrt());
        if sum.norm() > 0.0 {
            pts.push(((y as f64).ln(), sum.norm().ln()));
        }
    }
    let exponent = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    } else {
        f64::NAN
    };
    MeanReport { form_id: form_id.to_string(), rows, exponent, sqrt_constant: c }
}

pub fn mean_run(f: &Eigenform, y_max: i64, cache: Option<&mut PeriodCache>, opts: &BatchOptions) -> Result<MeanReport> {
    let batch = mu_batch(std::slice::from_ref(f), 5, y_max, cache, opts)?;
    Ok(mean_from_records(&table_id(f.form_id(), opts), &batch.records[0], &y_grid(y_max)))
}

pub fn mean_csv(rep: &MeanReport) -> String {
    let mut s = String::from("Y,count,mean_re,mean_im\n");
    for (y, n, m) in &rep.rows {
        let _ = writeln!(s, "{y},{n},{:.12e},{:.12e}", m.re, m.im);
    }
    s
}

/// One identity of the residue chain: a value computed by quadrature against
/// its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub computed: C,
    pub expected: C,
}

impl IdentityCheck {
    pub fn residual(&self) -> f64 {
        (self.computed - self.expected).norm() / self.expected.norm().max(1e-300)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankinReport {
    pub r: f64,
    pub checks: Vec<IdentityCheck>,
}

impl RankinReport {
    /// Largest residual among checks whose name starts with `prefix`.
    pub fn residual(&self, prefix: &str) -> f64 {
        self.checks.iter().filter(|c| c.name.starts_with(prefix)).map(|c| c.residual()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residual("")
    }
}

/// Rebuilds the Rankin–Selberg residue relations for a weight-½ form with
/// spectral parameter `r` from numerically integrated Whittaker products,
/// with `⟨F, F⟩ = 1`.
///
/// - `ratio`: `R⁺/R⁻` from the analytic `J(s)` integral equals `|Γ(¼+ir)|²/|Γ(¾+ir)|²`;
/// - `digamma`: `ψ(¼+ir) − ψ(¼−ir) + ψ(¾+ir) − ψ(¾−ir) = 2i sinh(2πr) |Γ(½+2ir)|²`;
/// - `residue`: `R⁺ I₊ + R⁻ I₋ = 4π/vol(Γ₀(4)\H)` with `R⁺` from its closed form;
/// - `square±`, `cross±`: the four integrals against their Gamma expressions
///   (the cross products carry a factor `π` in front of `2r/(sinh 2πr |Γ|²)`);
/// - `recurrence@s`, `det@s`: the three-term recurrence of `M_¼(s)` and the
///   closed form of `det M(s)` at `μ = ν = ir` for each of [`RANKIN_S_POINTS`].
pub const RANKIN_S_POINTS: [(f64, f64); 3] = [(1.5, 0.0), (2.0, 0.0), (1.2, 0.7)];

pub fn rankin_identity_suite(r: f64) -> Result<RankinReport> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r = {r} must be positive")));
    }
    let mu = C::new(0.0, r);
    let sh = (2.0 * PI * r).sinh();
    let g14 = abs_gamma_sq(0.25, r);
    let g34 = abs_gamma_sq(0.75, r);
    let g74 = abs_gamma_sq(1.75, r);
    let g12 = abs_gamma_sq(0.5, 2.0 * r);

    let cross_p = whittaker_product_integral(1.25, 0.25, mu, mu)?;
    let cross_m = whittaker_product_integral(-1.25, -0.25, mu, mu)?;
    let sq_p = whittaker_product_integral(0.25, 0.25, mu, mu)?;
    let sq_m = whittaker_product_integral(-0.25, -0.25, mu, mu)?;

    let psi = |x: f64, y: f64| digamma(C::new(x, y));
    let dpsi_14 = psi(0.25, r)? - psi(0.25, -r)?;
    let dpsi_34 = psi(0.75, r)? - psi(0.75, -r)?;
    let i = C::new(0.0, 1.0);

    let ratio_quad = (0.5625 + r * r) * cross_m / cross_p;
    let r_plus = g14 / g12 / PI;
    let r_minus = r_plus / (g14 / g34);
    let vol = 2.0 * PI;
    let checks = vec![
        IdentityCheck { name: "cross+", computed: cross_p, expected: C::new(2.0 * PI * r / (sh * g14), 0.0) },
        IdentityCheck { name: "cross-", computed: cross_m, expected: C::new(2.0 * PI * r / (sh * g74), 0.0) },
        IdentityCheck { name: "square+", computed: sq_p, expected: PI / (i * sh) * dpsi_14 / g14 },
        IdentityCheck { name: "square-", computed: sq_m, expected: PI / (i * sh) * dpsi_34 / g34 },
        IdentityCheck { name: "ratio", computed: ratio_quad, expected: C::new(g14 / g34, 0.0) },
        IdentityCheck { name: "digamma", computed: dpsi_14 + dpsi_34, expected: 2.0 * i * sh * g12 },
        IdentityCheck {
            name: "residue",
            computed: r_plus * sq_p + r_minus * sq_m,
            expected: C::new(4.0 * PI / vol, 0.0),
        },
    ];
    let mut checks = checks;
    let m = |k: f64, s: C| -> Result<C> {
        Ok(mellin_whittaker_pair(&MellinSample { k, mu, nu: mu, s, rotation: 0.0 })?.value)
    };
    for (name_r, name_d, (x, y)) in [
        ("recurrence@1", "det@1", RANKIN_S_POINTS[0]),
        ("recurrence@2", "det@2", RANKIN_S_POINTS[1]),
        ("recurrence@3", "det@3", RANKIN_S_POINTS[2]),
    ] {
        let s = C::new(x, y);
        let (m0, m1, m2) = (m(0.25, s)?, m(0.25, s + 1.0)?, m(0.25, s + 2.0)?);
        let (n0, n1) = (m(-0.25, s)?, m(-0.25, s + 1.0)?);
        let two_mu = 2.0 * mu;
        checks.push(IdentityCheck {
            name: name_r,
            computed: (s + 1.0) * m2 - 0.5 * (2.0 * s + 1.0) * m1,
            expected: (s * s - two_mu * two_mu) * s * m0,
        });
        let g = |z: C| gamma(z);
        checks.push(IdentityCheck {
            name: name_d,
            computed: -(n1 * m0) - n0 * m1,
            expected: -2.0 * g(s + two_mu)? * g(s - two_mu)? / s,
        });
    }
    Ok(RankinReport { r, checks })
}
