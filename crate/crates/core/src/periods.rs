//! Periods of eigenforms along closed geodesics, the sums `μ_d(F)` over all
//! classes of discriminant `d`, and a persistent table of normalized values.
//!
//! A primitive geodesic is cut at its crossings with the imaginary axis: the
//! reduced forms `q₀, q₁, …` of its reduction cycle each contribute the arc of
//! `S_{qᵢ}` from `i√(−aᵢ/cᵢ)` to `sᵢ + i/√(−aᵢ₊₁/cᵢ₊₁)`, the image of the next
//! crossing under the cycle step. The arcs stay at moderate height, so the
//! double-precision quadrature never sees the exponentially thin ends of the
//! semicircle.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geodesics::{geodesic_arc, reduce_with_cocycle, Semicircle};
use crate::modforms::{Eigenform, HolomorphicEigenform, MaassForm, MIN_HEIGHT};
use crate::qforms::{
    admissible_scales, big_sci, is_discriminant, pell_fundamental, primitive_classes, reduce_form, rho_cycle,
    PellSolution, QuadForm,
};
use crate::quad::{self, CVec, QuadValue};

type C = Complex64;

/// Coefficients of the quadratic `P(z) = c z² − b z + a` scaled by `1/√D`.
#[derive(Clone, Copy, Debug)]
pub struct PieceGeom {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub inv_sqrt_d: f64,
}

impl PieceGeom {
    pub fn of_form(q: &QuadForm) -> Self {
        PieceGeom { a: q.a as f64, b: q.b as f64, c: q.c as f64, inv_sqrt_d: 1.0 / (q.disc() as f64).sqrt() }
    }

    #[inline]
    pub fn p_scaled(&self, z: C) -> C {
        ((z * self.c - self.b) * z + self.a) * self.inv_sqrt_d
    }
}

/// Something integrated along geodesics in flow time.
pub trait Observable: Sync {
    type Out: QuadValue + Send + Sync;
    /// Integrand at `z` with flow velocity `v`.
    fn density(&self, g: &PieceGeom, z: C, v: C) -> Self::Out;
    /// Typical size of the integrand, used to scale tolerances.
    fn scale(&self) -> f64 {
        1.0
    }
    /// Sign picked up by the period when the form is negated.
    fn negation_sign(&self) -> f64 {
        1.0
    }
}

/// `N` holomorphic forms evaluated together: `f(z) (P(z)/√D)^{k−1} dz/dt`.
pub struct HolomorphicBundle<const N: usize> {
    weights: [i32; N],
    coeffs: Vec<Vec<f64>>,
}

impl<const N: usize> HolomorphicBundle<N> {
    pub fn new(forms: &[HolomorphicEigenform; N]) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(N);
        let mut weights = [0; N];
        for (i, f) in forms.iter().enumerate() {
            let n = f.terms_needed(MIN_HEIGHT * (1.0 - 1e-9), 1e-17);
            if n > f.len() {
                return Err(Error::InsufficientCoefficients { needed: n, have: f.len() });
            }
            coeffs.push((1..=n).map(|m| f.a(m)).collect());
            weights[i] = f.weight as i32;
        }
        Ok(HolomorphicBundle { weights, coeffs })
    }
}

impl<const N: usize> Observable for HolomorphicBundle<N> {
    type Out = CVec<N>;

    #[inline]
    fn density(&self, g: &PieceGeom, z: C, v: C) -> CVec<N> {
        let (zs, j) = reduce_with_cocycle(z);
        let q = C::from_polar((-2.0 * PI * zs.im).exp(), 2.0 * PI * zs.re);
        let jinv = j.inv();
        let p = g.p_scaled(z);
        let mut out = [C::new(0.0, 0.0); N];
        for i in 0..N {
            let mut s = C::new(0.0, 0.0);
            for &a in self.coeffs[i].iter().rev() {
                s = (s + a) * q;
            }
            let w = self.weights[i];
            out[i] = s * jinv.powi(w) * p.powi(w / 2 - 1) * v;
        }
        CVec(out)
    }

    fn negation_sign(&self) -> f64 {
        // only meaningful when all weights share k mod 2
        if (self.weights[0] / 2) % 2 == 0 { 1.0 } else { -1.0 }
    }
}

/// A Maass form integrated against arclength.
pub struct MaassObservable {
    form: MaassForm,
    nterms: usize,
    scale: f64,
}

impl MaassObservable {
    pub fn new(form: &MaassForm) -> Result<Self> {
        let nterms = form.terms_needed(MIN_HEIGHT * (1.0 - 1e-9), 1e-15).ok_or_else(|| {
            Error::PrecisionUnreachable("not enough Maass coefficients for the fundamental domain".into())
        })?;
        Ok(MaassObservable { form: form.clone(), nterms, scale: (-PI * form.spectral_r / 2.0).exp() })
    }
}

impl Observable for MaassObservable {
    type Out = f64;

    fn density(&self, _g: &PieceGeom, z: C, _v: C) -> f64 {
        let (zs, _) = reduce_with_cocycle(z);
        self.form.fourier_sum(zs, self.nterms)
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Standard,
    /// Each class is integrated through its negative, `J(q) = ±J(−q)`.
    Flipped,
}

/// Quadrature controls.
#[derive(Clone, Copy, Debug)]
pub struct PeriodOptions {
    /// Absolute tolerance per unit of flow time, relative to the observable's scale.
    pub tol: f64,
    /// Initial panel length in flow time.
    pub panel: f64,
    pub orientation: Orientation,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions { tol: 1e-10, panel: 0.75, orientation: Orientation::Standard }
    }
}

/// A period with its quadrature error estimate and the flow time covered.
#[derive(Clone, Copy, Debug)]
pub struct Period<T> {
    pub value: T,
    pub error: f64,
    pub length: f64,
    pub evals: usize,
}

fn integrate_arc<O: Observable>(obs: &O, q: &QuadForm, t0: f64, t1: f64, opts: &PeriodOptions) -> Period<O::Out> {
    let circle = Semicircle::of_form(q);
    let g = PieceGeom::of_form(q);
    let len = (t1 - t0).abs();
    let panels = ((len / opts.panel).ceil() as usize).max(1);
    let tol = opts.tol * obs.scale() * len.max(1e-3);
    let r = quad::integrate(
        |t: f64| {
            let (z, v) = circle.point_and_velocity(t);
            obs.density(&g, z, v)
        },
        t0,
        t1,
        panels,
        tol,
        0.0,
        panels * 64 + 256,
    );
    Period { value: r.value, error: r.error, length: t1 - t0, evals: r.evals }
}

/// Period of the primitive closed geodesic of a reduced primitive form over
/// one traversal (flow time `2 log ε_D` with `D = disc q`), by the cycle cut.
pub fn cycle_period<O: Observable>(obs: &O, q: &QuadForm, opts: &PeriodOptions) -> Result<Period<O::Out>> {
    if !q.is_reduced() || !q.is_primitive() {
        return Err(Error::NotReduced(q.to_string()));
    }
    let d = q.disc_i64()?;
    let cyc = rho_cycle(q)?;
    let height = |f: &QuadForm| (-(f.a as f64) / f.c as f64).sqrt();
    let mut total = O::Out::zero();
    let mut err = 0.0;
    let mut len = 0.0;
    let mut evals = 0;
    for (i, (qi, s)) in cyc.iter().enumerate() {
        let next = &cyc[(i + 1) % cyc.len()].0;
        let circle = Semicircle::of_form(qi);
        let za = C::new(0.0, height(qi));
        let zb = C::new(*s as f64, 1.0 / height(next));
        let p = integrate_arc(obs, qi, circle.time_of(za), circle.time_of(zb), opts);
        total = total + p.value;
        err += p.error;
        len += p.length;
        evals += p.evals;
    }
    let want = pell_fundamental(d)?.length();
    if ((len.abs() - want) / want).abs() > 1e-7 {
        return Err(Error::PrecisionUnreachable(format!(
            "cycle of {q} covers flow time {len}, expected {want}"
        )));
    }
    let sign = if len < 0.0 { -1.0 } else { 1.0 };
    Ok(Period { value: total * sign, error: err, length: len.abs(), evals })
}

/// The period of any form over the geodesic closed by the unit of `d_ambient`.
pub fn period_of_form<O: Observable>(
    obs: &O,
    q: &QuadForm,
    d_ambient: i64,
    opts: &PeriodOptions,
) -> Result<Period<O::Out>> {
    let (prim, _) = q.primitive_part();
    let dp = prim.disc_i64()?;
    if d_ambient % dp != 0 || !crate::qforms::is_square(d_ambient / dp) {
        return Err(Error::Domain(format!("{d_ambient} is not a square multiple of disc {prim}")));
    }
    let j = crate::qforms::unit_index(d_ambient, dp)? as f64;
    let (src, sign) = match opts.orientation {
        Orientation::Standard => (prim, 1.0),
        Orientation::Flipped => (prim.neg(), obs.negation_sign()),
    };
    let p = cycle_period(obs, &reduce_form(&src)?, opts)?;
    Ok(Period { value: p.value * (j * sign), error: p.error * j, length: p.length * j, evals: p.evals })
}

/// The period by direct integration along `S_q` from flow time `t0` over the
/// full length `2 log ε_{d_ambient}`. Only usable while `ε` is small enough for
/// double precision near the ends of the semicircle.
pub fn period_direct<O: Observable>(
    obs: &O,
    q: &QuadForm,
    d_ambient: i64,
    t0: f64,
    opts: &PeriodOptions,
) -> Result<Period<O::Out>> {
    let arc = geodesic_arc(q, d_ambient)?;
    if arc.flow_length + t0.abs() > 60.0 {
        return Err(Error::PrecisionUnreachable(format!(
            "flow length {} too long for direct integration",
            arc.flow_length
        )));
    }
    Ok(integrate_arc(obs, q, t0, t0 + arc.flow_length, opts))
}

/// `∫_{C(q)} f(z) (P(z)/√D)^{k−1} dz` for one holomorphic form.
pub fn period_holomorphic(f: &HolomorphicEigenform, q: &QuadForm, d_ambient: i64) -> Result<Period<C>> {
    let b = HolomorphicBundle::new(std::array::from_ref(f))?;
    let p = period_of_form(&b, q, d_ambient, &PeriodOptions::default())?;
    Ok(Period { value: p.value.0[0], error: p.error, length: p.length, evals: p.evals })
}

/// `∫_{C(q)} φ ds` for a Maass form.
pub fn period_maass(phi: &MaassForm, q: &QuadForm, d_ambient: i64) -> Result<Period<f64>> {
    period_of_form(&MaassObservable::new(phi)?, q, d_ambient, &PeriodOptions::default())
}

/// One line of the period table.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodRecord {
    pub d: i64,
    pub form_id: String,
    pub value: C,
    /// `value / d^{1/4}`.
    pub normalized: C,
    pub h: usize,
    /// Pell data, 15 significant digits.
    pub t: String,
    pub u: String,
    pub quad_error: f64,
}

impl PeriodRecord {
    fn line_body(&self) -> String {
        format!(
            "{} {} {} {} {} {:.14e} {:.14e} {:.14e} {:.6e}",
            self.form_id,
            self.d,
            self.h,
            self.t,
            self.u,
            self.value.re,
            self.value.im,
            self.normalized.re,
            self.quad_error
        )
    }

    /// The cache line, with a CRC-32 suffix over the body.
    pub fn to_line(&self) -> String {
        let body = self.line_body();
        format!("{body} {:08x}", crc32fast::hash(body.as_bytes()))
    }

    pub fn parse_line(line: &str, line_no: usize) -> Result<PeriodRecord> {
        let bad = |msg: &str| Error::CacheCorrupt { line: line_no, msg: msg.into() };
        let (body, crc) = line.rsplit_once(' ').ok_or_else(|| bad("missing checksum"))?;
        let want = u32::from_str_radix(crc, 16).map_err(|_| bad("bad checksum field"))?;
        if crc32fast::hash(body.as_bytes()) != want {
            return Err(bad("checksum mismatch"));
        }
        let f: Vec<&str> = body.split(' ').collect();
        if f.len() != 9 {
            return Err(bad("expected 9 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        let d: i64 = f[1].parse().map_err(|_| bad("bad discriminant"))?;
        let value = C::new(num(f[5])?, num(f[6])?);
        Ok(PeriodRecord {
            form_id: f[0].to_string(),
            d,
            h: f[2].parse().map_err(|_| bad("bad class number"))?,
            t: f[3].to_string(),
            u: f[4].to_string(),
            value,
            normalized: value / (d as f64).powf(0.25),
            quad_error: num(f[8])?,
        })
    }
}

/// Append-only period table with one serialized writer.
pub struct PeriodCache {
    path: PathBuf,
    records: HashMap<(String, i64), PeriodRecord>,
    writer: Mutex<Option<File>>,
}

impl PeriodCache {
    /// Opens (or creates) the table, verifying every checksum.
    pub fn open(path: &Path) -> Result<PeriodCache> {
        let mut records = HashMap::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let r = PeriodRecord::parse_line(&line, i + 1)?;
                records.insert((r.form_id.clone(), r.d), r);
            }
        }
        Ok(PeriodCache { path: path.to_path_buf(), records, writer: Mutex::new(None) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, form_id: &str, d: i64) -> Option<&PeriodRecord> {
        self.records.get(&(form_id.to_string(), d))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends records and makes them visible to later lookups.
    pub fn append(&mut self, recs: &[PeriodRecord]) -> Result<()> {
        if recs.is_empty() {
            return Ok(());
        }
        let mut guard = self.writer.lock().unwrap();
        if guard.is_none() {
            *guard = Some(OpenOptions::new().create(true).append(true).open(&self.path)?);
        }
        let file = guard.as_mut().unwrap();
        let mut buf = String::new();
        for r in recs {
            buf.push_str(&r.to_line());
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        file.flush()?;
        drop(guard);
        for r in recs {
            self.records.insert((r.form_id.clone(), r.d), r.clone());
        }
        Ok(())
    }
}

/// Result of [`cache_verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheCheck {
    pub lines: usize,
    pub bad: usize,
    pub first_bad: Option<usize>,
}

pub fn cache_verify(path: &Path) -> Result<CacheCheck> {
    let mut check = CacheCheck { lines: 0, bad: 0, first_bad: None };
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        check.lines += 1;
        if PeriodRecord::parse_line(&line, i + 1).is_err() {
            check.bad += 1;
            check.first_bad.get_or_insert(i + 1);
        }
    }
    Ok(check)
}

/// Rewrites the table keeping the last record per `(form_id, d)`, sorted.
/// Returns `(lines before, lines after)`.
pub fn cache_compact(path: &Path) -> Result<(usize, usize)> {
    let mut latest: BTreeMap<(String, i64), String> = BTreeMap::new();
    let mut before = 0;
    for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        before += 1;
        let r = PeriodRecord::parse_line(&line, i + 1)?;
        latest.insert((r.form_id, r.d), line);
    }
    let mut text = String::new();
    for l in latest.values() {
        text.push_str(l);
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())?;
    Ok((before, latest.len()))
}

/// Per-form coverage: record count and maximal runs of consecutive valid
/// discriminants present.
pub fn cache_stats(path: &Path) -> Result<BTreeMap<String, (usize, Vec<(i64, i64)>)>> {
    let cache = PeriodCache::open(path)?;
    let mut by_form: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    for (form, d) in cache.records.keys() {
        by_form.entry(form.clone()).or_default().push(*d);
    }
    let mut out = BTreeMap::new();
    for (form, mut ds) in by_form {
        ds.sort_unstable();
        let mut runs: Vec<(i64, i64)> = Vec::new();
        for &d in &ds {
            match runs.last_mut() {
                Some(run) if next_discriminant(run.1) == d => run.1 = d,
                _ => runs.push((d, d)),
            }
        }
        out.insert(form, (ds.len(), runs));
    }
    Ok(out)
}

fn next_discriminant(d: i64) -> i64 {
    let mut n = d + 1;
    while !is_discriminant(n).valid {
        n += 1;
    }
    n
}

/// Writes through a temporary file in the same directory and renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// How an imprimitive class `ℓ·q'` of discriminant `d` contributes to `μ_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Traversal {
    /// Once around the primitive geodesic of `q'`. With this convention
    /// `μ_d d^{(k−1)/2}` are the Fourier coefficients of the Shintani lift.
    Primitive,
    /// Around the geodesic for flow time `2 log ε_d`, i.e. `log ε_d / log ε_{d'}` times.
    Ambient,
}

/// Options for [`mu_batch`].
#[derive(Clone, Copy, Debug)]
pub struct BatchOptions {
    pub period: PeriodOptions,
    pub traversal: Traversal,
    pub threads: usize,
    /// Discriminants assembled and written per round.
    pub chunk: usize,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions { period: PeriodOptions::default(), traversal: Traversal::Primitive, threads: 1, chunk: 4096 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BatchResult {
    /// Records per form, in the order of the input forms, sorted by `d`.
    pub records: Vec<Vec<PeriodRecord>>,
    /// Cycle-period computations performed (zero on a full cache hit).
    pub quadrature_calls: usize,
    pub failures: Vec<(i64, String)>,
}

/// Sum over the primitive classes of `D` of one-traversal periods.
#[derive(Clone, Debug)]
struct PrimSum<T> {
    value: T,
    error: f64,
    h: usize,
    log_eps: f64,
}

fn prim_sum<O: Observable>(obs: &O, dp: i64, opts: &PeriodOptions) -> Result<PrimSum<O::Out>> {
    let classes = primitive_classes(dp)?;
    let mut value = O::Out::zero();
    let mut error = 0.0;
    for q in &classes {
        let p = match opts.orientation {
            Orientation::Standard => cycle_period(obs, q, opts)?,
            Orientation::Flipped => {
                let p = cycle_period(obs, &reduce_form(&q.neg())?, opts)?;
                Period { value: p.value * obs.negation_sign(), ..p }
            }
        };
        value = value + p.value;
        error += p.error;
    }
    Ok(PrimSum { value, error, h: classes.len(), log_eps: pell_fundamental(dp)?.log_epsilon() })
}

/// Values `μ_d` for every valid `d` in `[d_lo, d_hi]`, summed over all
/// classes, imprimitive ones weighted according to `opts.traversal`.
fn batch_generic<O: Observable>(
    obs: &O,
    to_components: impl Fn(&O::Out) -> Vec<C> + Sync,
    form_ids: &[String],
    d_lo: i64,
    d_hi: i64,
    mut cache: Option<&mut PeriodCache>,
    opts: &BatchOptions,
) -> Result<BatchResult>
where
    O::Out: Clone,
{
    let nf = form_ids.len();
    let valid: Vec<i64> = (d_lo.max(5)..=d_hi).filter(|&d| is_discriminant(d).valid).collect();
    let mut result = BatchResult { records: vec![Vec::new(); nf], ..Default::default() };
    let mut sums: HashMap<i64, std::result::Result<PrimSum<O::Out>, String>> = HashMap::new();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;

    for chunk in valid.chunks(opts.chunk.max(1)) {
        let missing: Vec<i64> = chunk
            .iter()
            .copied()
            .filter(|&d| match cache.as_deref() {
                Some(c) => form_ids.iter().any(|id| c.get(id, d).is_none()),
                None => true,
            })
            .collect();
        let mut need: Vec<i64> = missing
            .iter()
            .flat_map(|&d| admissible_scales(d).into_iter().map(move |l| d / (l * l)))
            .filter(|dp| !sums.contains_key(dp))
            .collect();
        need.sort_unstable();
        need.dedup();
        let fresh: Vec<(i64, std::result::Result<PrimSum<O::Out>, String>)> = pool.install(|| {
            need.par_iter()
                .map(|&dp| (dp, prim_sum(obs, dp, &opts.period).map_err(|e| e.to_string())))
                .collect()
        });
        result.quadrature_calls += fresh.len();
        sums.extend(fresh);

        let mut new_records = Vec::new();
        for &d in chunk {
            let cached: Option<Vec<PeriodRecord>> = cache.as_deref().and_then(|c| {
                form_ids.iter().map(|id| c.get(id, d).cloned()).collect::<Option<Vec<_>>>()
            });
            let recs = match cached {
                Some(r) => r,
                None => match assemble(d, opts.traversal, &sums, &to_components, form_ids) {
                    Ok(r) => {
                        new_records.extend(r.iter().cloned());
                        r
                    }
                    Err(e) => {
                        result.failures.push((d, e));
                        continue;
                    }
                },
            };
            for (i, r) in recs.into_iter().enumerate() {
                result.records[i].push(r);
            }
        }
        if let Some(c) = cache.as_deref_mut() {
            c.append(&new_records)?;
        }
    }
    Ok(result)
}

fn assemble<T>(
    d: i64,
    traversal: Traversal,
    sums: &HashMap<i64, std::result::Result<PrimSum<T>, String>>,
    to_components: &impl Fn(&T) -> Vec<C>,
    form_ids: &[String],
) -> std::result::Result<Vec<PeriodRecord>, String> {
    let pell: PellSolution = pell_fundamental(d).map_err(|e| e.to_string())?;
    let log_eps = pell.log_epsilon();
    let mut total = vec![C::new(0.0, 0.0); form_ids.len()];
    let mut err = 0.0;
    let mut h = 0;
    for l in admissible_scales(d) {
        let dp = d / (l * l);
        let s = match sums.get(&dp) {
            Some(Ok(s)) => s,
            Some(Err(e)) => return Err(format!("d'={dp}: {e}")),
            None => return Err(format!("d'={dp}: missing primitive sum")),
        };
        let j = match traversal {
            Traversal::Primitive => 1.0,
            Traversal::Ambient => (log_eps / s.log_eps).round(),
        };
        for (t, v) in total.iter_mut().zip(to_components(&s.value)) {
            *t += v * j;
        }
        err += s.error * j;
        h += s.h;
    }
    let q = (d as f64).powf(0.25);
    Ok(form_ids
        .iter()
        .zip(total)
        .map(|(id, v)| PeriodRecord {
            d,
            form_id: id.clone(),
            value: v,
            normalized: v / q,
            h,
            t: big_sci(&pell.t),
            u: big_sci(&pell.u),
            quad_error: err,
        })
        // rounded exactly as a table row would be, so fresh and cached runs print the same bytes
        .map(|r| PeriodRecord::parse_line(&r.to_line(), 0).expect("own line parses"))
        .collect())
}

/// Table key; the non-default traversal gets its own rows.
pub fn table_id(form_id: String, opts: &BatchOptions) -> String {
    match opts.traversal {
        Traversal::Primitive => form_id,
        Traversal::Ambient => form_id + "~amb",
    }
}

fn batch_holomorphic<const N: usize>(
    forms: &[HolomorphicEigenform; N],
    d_lo: i64,
    d_hi: i64,
    cache: Option<&mut PeriodCache>,
    opts: &BatchOptions,
) -> Result<BatchResult> {
    let obs = HolomorphicBundle::new(forms)?;
    let ids: Vec<String> = forms.iter().map(|f| table_id(f.form_id(), opts)).collect();
    batch_generic(&obs, |v: &CVec<N>| v.0.to_vec(), &ids, d_lo, d_hi, cache, opts)
}

/// `μ_d(F)` for each form and each valid `d ∈ [d_lo, d_hi]`, reusing and
/// extending the cache. Holomorphic forms are integrated together in one
/// pass; Maass forms one at a time.
pub fn mu_batch(
    forms: &[Eigenform],
    d_lo: i64,
    d_hi: i64,
    mut cache: Option<&mut PeriodCache>,
    opts: &BatchOptions,
) -> Result<BatchResult> {
    let mut out = BatchResult { records: vec![Vec::new(); forms.len()], ..Default::default() };
    let hol: Vec<(usize, HolomorphicEigenform)> = forms
        .iter()
        .enumerate()
        .filter_map(|(i, f)| match f {
            Eigenform::Holomorphic(h) => Some((i, h.clone())),
            _ => None,
        })
        .collect();
    let mut merge = |idx: &[usize], r: BatchResult| {
        for (k, recs) in r.records.into_iter().enumerate() {
            out.records[idx[k]] = recs;
        }
        out.quadrature_calls += r.quadrature_calls;
        out.failures.extend(r.failures);
    };
    // group holomorphic forms by k mod 2 so the orientation sign is shared
    for parity in [0u32, 1] {
        let group: Vec<&(usize, HolomorphicEigenform)> =
            hol.iter().filter(|(_, f)| (f.weight / 2) % 2 == parity).collect();
        for part in group.chunks(3) {
            let idx: Vec<usize> = part.iter().map(|(i, _)| *i).collect();
            let fs: Vec<HolomorphicEigenform> = part.iter().map(|(_, f)| f.clone()).collect();
            let c = cache.as_deref_mut();
            let r = match fs.len() {
                1 => batch_holomorphic(&[fs[0].clone()], d_lo, d_hi, c, opts)?,
                2 => batch_holomorphic(&[fs[0].clone(), fs[1].clone()], d_lo, d_hi, c, opts)?,
                _ => batch_holomorphic(&[fs[0].clone(), fs[1].clone(), fs[2].clone()], d_lo, d_hi, c, opts)?,
            };
            merge(&idx, r);
        }
    }
    for (i, f) in forms.iter().enumerate() {
        if let Eigenform::Maass(m) = f {
            let obs = MaassObservable::new(m)?;
            let ids = vec![table_id(m.form_id(), opts)];
            let c = cache.as_deref_mut();
            let r = batch_generic(&obs, |v: &f64| vec![C::new(*v, 0.0)], &ids, d_lo, d_hi, c, opts)?;
            merge(&[i], r);
        }
    }
    Ok(out)
}
