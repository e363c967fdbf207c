//! Indefinite binary quadratic forms: discriminants, Pell units, reduction,
//! reduction cycles and class enumeration (primitive and imprimitive).

use std::collections::HashSet;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The form `a x² + b xy + c y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    /// Discriminant as `i64`, failing if it does not fit.
    pub fn disc_i64(&self) -> Result<i64> {
        i64::try_from(self.disc()).map_err(|_| Error::Overflow("discriminant"))
    }

    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn primitive_part(&self) -> (QuadForm, i64) {
        let g = self.content().max(1);
        (QuadForm::new(self.a / g, self.b / g, self.c / g), g)
    }

    pub fn scale(&self, l: i64) -> Result<QuadForm> {
        let m = |x: i64| x.checked_mul(l).ok_or(Error::Overflow("form scaling"));
        Ok(QuadForm::new(m(self.a)?, m(self.b)?, m(self.c)?))
    }

    pub fn neg(&self) -> QuadForm {
        QuadForm::new(-self.a, -self.b, -self.c)
    }

    /// Standard reducedness: `0 < b < √d` and `√d − b < 2|a| < √d + b`.
    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        if d <= 0 {
            return false;
        }
        let s = isqrt_u128(d as u128) as i128;
        if s * s == d {
            return false;
        }
        let (a2, b) = (2 * (self.a as i128).abs(), self.b as i128);
        b > 0 && b <= s && a2 + b > s && a2 - b <= s
    }

    /// The form transported by `g ∈ SL₂(ℤ)` so that its geodesic moves by `g⁻¹`:
    /// `g^*q = q ∘ (g⁻¹)ᵀ`. With this action `(gh)^* = h^* g^*`.
    pub fn pullback(&self, g: [[i64; 2]; 2]) -> Result<QuadForm> {
        let [[al, be], [ga, de]] = g.map(|r| r.map(|x| x as i128));
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let c2 = c * al * al - b * al * ga + a * ga * ga;
        let b2 = b * (al * de + be * ga) - 2 * c * al * be - 2 * a * ga * de;
        let a2 = c * be * be - b * be * de + a * de * de;
        let f = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("form action"));
        Ok(QuadForm::new(f(a2)?, f(b2)?, f(c2)?))
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscInfo {
    pub valid: bool,
    pub fundamental: bool,
    pub square: bool,
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn isqrt(n: u64) -> u64 {
    isqrt_u128(n as u128) as u64
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let s = isqrt(n as u64);
        s * s == n as u64
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Classifies `n` as a positive non-square discriminant.
pub fn discriminant_info(n: i64) -> DiscInfo {
    let square = is_square(n);
    let valid = n > 0 && (n % 4 == 0 || n % 4 == 1) && !square;
    let fundamental = valid
        && if n % 4 == 1 {
            is_squarefree(n as u64)
        } else {
            let m = (n / 4) as u64;
            (m % 4 == 2 || m % 4 == 3) && is_squarefree(m)
        };
    DiscInfo { valid, fundamental, square }
}

pub fn is_discriminant(n: i64) -> DiscInfo {
    discriminant_info(n)
}

fn require_disc(d: i64) -> Result<()> {
    if discriminant_info(d).valid {
        Ok(())
    } else {
        Err(Error::NotADiscriminant(d))
    }
}

/// Minimal solution of `t² − d u² = 4` with `t, u > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub d: i64,
    pub t: BigInt,
    pub u: BigInt,
}

impl PellSolution {
    /// `log ε_d` in double precision; exact enough since `ε = (t + √(t²−4))/2`.
    pub fn log_epsilon(&self) -> f64 {
        match self.t.to_f64() {
            Some(t) if t < 1e12 => (t / 2.0).acosh(),
            _ => big_ln(&self.t) - 1.0 / bigsq_f64(&self.t),
        }
    }

    /// Closed geodesic length `2 log ε_d`.
    pub fn length(&self) -> f64 {
        2.0 * self.log_epsilon()
    }

    /// `ε_d` at `bits` of working precision.
    pub fn epsilon(&self, bits: u32) -> crate::highprec::Real {
        use crate::highprec::Real;
        let sd = Real::from_i64(self.d, bits).sqrt();
        (Real::from_bigint(&self.t, bits) + &(Real::from_bigint(&self.u, bits) * &sd)).half()
    }
}

fn bigsq_f64(t: &BigInt) -> f64 {
    t.to_f64().map(|x| x * x).unwrap_or(f64::INFINITY)
}

/// Natural log of a positive big integer.
pub fn big_ln(t: &BigInt) -> f64 {
    let bits = t.bits();
    if bits <= 1000 {
        return t.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = t >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Fundamental solution of `t² − d u² = 4` by the continued fraction of the
/// quadratic irrationality generating the order of discriminant `d`.
pub fn pell_fundamental(d: i64) -> Result<PellSolution> {
    require_disc(d)?;
    let p0: i64 = if d % 4 == 0 { 0 } else { 1 };
    let q0: i64 = 2;
    let s = isqrt(d as u64) as i64;
    let (mut p, mut q) = (p0, q0);
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let dd = BigInt::from(d);
    let limit = 64 + 8 * (s as usize + 1) * (64 - (d as u64).leading_zeros() as usize);
    for _ in 0..limit {
        let a = (p + s).div_euclid(q);
        let h = &h1 * a + &h2;
        let k = &k1 * a + &k2;
        let pn = a * q - p;
        let qn = (d - pn * pn) / q;
        if qn == q0 {
            let t = &h * 2 - &k * p0;
            let norm = &t * &t - &dd * &k * &k;
            if norm == BigInt::from(4) {
                return Ok(PellSolution { d, t, u: k });
            }
            if norm == BigInt::from(-4) {
                let t2 = (&t * &t + &dd * &k * &k) / 2;
                let u2 = &t * &k;
                return Ok(PellSolution { d, t: t2, u: u2 });
            }
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        p = pn;
        q = qn;
    }
    Err(Error::PrecisionUnreachable(format!("continued fraction for d={d}")))
}

/// The integer `r ≡ −b (mod 2|c|)` normalizing the reduction operator.
fn rho_normalizer(b: i128, c: i128, s: i128) -> i128 {
    let m = 2 * c.abs();
    if c.abs() > s {
        // −|c| < r ≤ |c|
        let r = (-b).rem_euclid(m);
        if r > c.abs() {
            r - m
        } else {
            r
        }
    } else {
        // √d − 2|c| < r < √d, i.e. the largest r ≤ ⌊√d⌋ in the class
        let r0 = (-b).rem_euclid(m);
        r0 + (s - r0).div_euclid(m) * m
    }
}

/// One step of the reduction operator: `[a,b,c] ↦ [c, −b + 2cs, c s² − b s + a]`,
/// returning the new form and the shift `s`. Equal to the pullback by `[[s,−1],[1,0]]`.
fn rho_raw(b: i128, c: i128, d: i128, s: i128) -> (i128, i128, i128, i128) {
    let r = rho_normalizer(b, c, s);
    let sh = (r + b) / (2 * c);
    let c2 = (r * r - d) / (4 * c);
    (c, r, c2, sh)
}

fn to_form(a: i128, b: i128, c: i128) -> Result<QuadForm> {
    let f = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("reduction"));
    Ok(QuadForm::new(f(a)?, f(b)?, f(c)?))
}

fn nonsquare_disc(q: &QuadForm) -> Result<(i128, i128)> {
    let d = q.disc();
    if d <= 0 {
        return Err(Error::Domain(format!("form {q} is not indefinite")));
    }
    let s = isqrt_u128(d as u128) as i128;
    if s * s == d {
        return Err(Error::SquareDiscriminant(d));
    }
    Ok((d, s))
}

/// Reduces an indefinite form within its proper equivalence class.
pub fn reduce_form(q: &QuadForm) -> Result<QuadForm> {
    let (d, s) = nonsquare_disc(q)?;
    // a and c never vanish: the discriminant is not a square
    let (mut a, mut b, mut c) = (q.a as i128, q.b as i128, q.c as i128);
    for _ in 0..100_000 {
        if let Ok(f) = to_form(a, b, c) {
            if f.is_reduced() {
                return Ok(f);
            }
        }
        (a, b, c, _) = rho_raw(b, c, d, s);
    }
    Err(Error::PrecisionUnreachable(format!("reduction of {q}")))
}

/// Right neighbour of a reduced form together with the shift used.
pub fn rho_step_with_shift(q: &QuadForm) -> Result<(QuadForm, i64)> {
    if !q.is_reduced() {
        return Err(Error::NotReduced(q.to_string()));
    }
    let (d, s) = nonsquare_disc(q)?;
    let (a, b, c, sh) = rho_raw(q.b as i128, q.c as i128, d, s);
    Ok((to_form(a, b, c)?, sh as i64))
}

pub fn rho_step(q: &QuadForm) -> Result<QuadForm> {
    rho_step_with_shift(q).map(|x| x.0)
}

/// The full cycle of a reduced form: `(q_i, s_i)` with `q_{i+1} = ρ(q_i)`
/// obtained with shift `s_i`; the cycle has even length.
pub fn rho_cycle(q: &QuadForm) -> Result<Vec<(QuadForm, i64)>> {
    let mut out = Vec::new();
    let mut cur = *q;
    loop {
        let (next, sh) = rho_step_with_shift(&cur)?;
        out.push((cur, sh));
        cur = next;
        if cur == *q {
            return Ok(out);
        }
        if out.len() > 1_000_000 {
            return Err(Error::PrecisionUnreachable(format!("cycle of {q}")));
        }
    }
}

/// One class of discriminant `d`: `form = scale · (primitive form of disc d/scale²)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRep {
    pub form: QuadForm,
    pub primitive: QuadForm,
    pub primitive_disc: i64,
    pub scale: i64,
}

#[derive(Clone, Debug)]
pub struct ClassList {
    pub d: i64,
    pub reps: Vec<ClassRep>,
}

impl ClassList {
    pub fn h(&self) -> usize {
        self.reps.len()
    }
}

static SPF: OnceLock<RwLock<Vec<u32>>> = OnceLock::new();

/// Smallest-prime-factor table, grown on demand.
fn with_spf<R>(n: usize, f: impl FnOnce(&[u32]) -> R) -> R {
    let lock = SPF.get_or_init(|| RwLock::new(Vec::new()));
    {
        let t = lock.read().unwrap();
        if t.len() > n {
            return f(&t);
        }
    }
    let mut t = lock.write().unwrap();
    if t.len() <= n {
        let size = (n + 1).max(2 * t.len()).max(1 << 12);
        let mut spf = vec![0u32; size];
        for i in 2..size {
            if spf[i] == 0 {
                let mut j = i;
                while j < size {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        *t = spf;
    }
    f(&t)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    if n > 50_000_000 {
        let mut m = n;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                push_prime_power(&mut out, p, e);
            }
            p += 1;
        }
        if m > 1 {
            push_prime_power(&mut out, m, 1);
        }
        return out;
    }
    with_spf(n as usize, |spf| {
        let mut m = n as usize;
        while m > 1 {
            let p = spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            push_prime_power(&mut out, p as u64, e);
        }
    });
    out
}

fn push_prime_power(out: &mut Vec<u64>, p: u64, e: u32) {
    let len = out.len();
    let mut pk = 1;
    for _ in 0..e {
        pk *= p;
        for i in 0..len {
            out.push(out[i] * pk);
        }
    }
}

/// All reduced primitive forms of discriminant `d`.
pub fn reduced_primitive_forms(d: i64) -> Result<Vec<QuadForm>> {
    require_disc(d)?;
    let s = isqrt(d as u64) as i64;
    let mut out = Vec::new();
    let mut b = if d % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = ((d - b * b) / 4) as u64;
        for a in divisors(n) {
            let a = a as i64;
            for sa in [a, -a] {
                let q = QuadForm::new(sa, b, -(n as i64) / sa);
                if q.is_reduced() && q.is_primitive() {
                    out.push(q);
                }
            }
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

/// Representatives of the primitive classes of `d`, one per reduction cycle,
/// each the smallest form of its cycle.
pub fn primitive_classes(d: i64) -> Result<Vec<QuadForm>> {
    let forms = reduced_primitive_forms(d)?;
    let mut seen: HashSet<QuadForm> = HashSet::with_capacity(forms.len());
    let mut reps = Vec::new();
    for q in forms {
        if seen.contains(&q) {
            continue;
        }
        let cyc = rho_cycle(&q)?;
        // forms are visited in sorted order, so q is its cycle's minimum
        for (f, _) in cyc {
            seen.insert(f);
        }
        reps.push(q);
    }
    Ok(reps)
}

/// Scales `ℓ ≥ 1` with `ℓ² | d` and `d/ℓ²` a discriminant.
pub fn admissible_scales(d: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut l = 1i64;
    while l * l <= d {
        if d % (l * l) == 0 && discriminant_info(d / (l * l)).valid {
            out.push(l);
        }
        l += 1;
    }
    out
}

pub fn enumerate_classes(d: i64) -> Result<ClassList> {
    require_disc(d)?;
    let mut reps = Vec::new();
    for l in admissible_scales(d) {
        let dp = d / (l * l);
        for q in primitive_classes(dp)? {
            reps.push(ClassRep { form: q.scale(l)?, primitive: q, primitive_disc: dp, scale: l });
        }
    }
    Ok(ClassList { d, reps })
}

pub fn hurwitz_class_number(d: i64) -> Result<usize> {
    require_disc(d)?;
    let mut h = 0;
    for l in admissible_scales(d) {
        h += primitive_classes(d / (l * l))?.len();
    }
    Ok(h)
}

/// `j` with `ε_d = ε_{d'}^j` for `d = ℓ² d'`.
pub fn unit_index(d: i64, dp: i64) -> Result<u32> {
    let (pd, pp) = (pell_fundamental(d)?, pell_fundamental(dp)?);
    let j = (pd.log_epsilon() / pp.log_epsilon()).round();
    if !(j >= 1.0) {
        return Err(Error::Validation(format!("unit index of {d} over {dp}")));
    }
    Ok(j as u32)
}

/// Magnitude helper used by the cache writer: `t` in scientific notation
/// truncated to 15 significant digits, or exact when short.
pub fn big_sci(x: &BigInt) -> String {
    let s = x.abs().to_string();
    let sign = if x.is_negative() { "-" } else { "" };
    if s.len() <= 15 {
        return format!("{sign}{s}");
    }
    format!("{sign}{}.{}e{}", &s[..1], &s[1..15], s.len() - 1)
}
