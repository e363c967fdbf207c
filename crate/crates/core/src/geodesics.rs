//! Hyperbolic matrices of forms, oriented closed geodesics and reduction of
//! points to the standard fundamental domain.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::highprec::{Complex as HpComplex, Real};
use crate::qforms::{pell_fundamental, PellSolution, QuadForm};

/// `[[a, b], [c, d]]` with determinant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperbolicMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl HyperbolicMatrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        HyperbolicMatrix { a, b, c, d }
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = m;
        HyperbolicMatrix::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.det().is_one() && self.trace().abs() > BigInt::from(2)
    }

    pub fn inverse(&self) -> Self {
        HyperbolicMatrix::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn neg(&self) -> Self {
        HyperbolicMatrix::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn mul(&self, o: &Self) -> Self {
        HyperbolicMatrix::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    /// Möbius action at working precision.
    pub fn act_hp(&self, z: &HpComplex) -> HpComplex {
        let bits = z.re.bits();
        let one = |x: &BigInt| HpComplex::real(Real::from_bigint(x, bits));
        let num = z.scale_big(&self.a).add(&one(&self.b));
        let den = z.scale_big(&self.c).add(&one(&self.d));
        num.div(&den)
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (z * f(&self.a) + f(&self.b)) / (z * f(&self.c) + f(&self.d))
    }
}

/// `γ(q) = [[(t − b u)/2, a u], [−c u, (t + b u)/2]]`.
pub fn matrix_of_form(q: &QuadForm, p: &PellSolution) -> Result<HyperbolicMatrix> {
    let (a, b, c) = (BigInt::from(q.a), BigInt::from(q.b), BigInt::from(q.c));
    let tl = &p.t - &b * &p.u;
    if tl.is_odd() {
        return Err(Error::ParityViolation);
    }
    let tr = &p.t + &b * &p.u;
    let m = HyperbolicMatrix::new(tl / 2, &a * &p.u, -&c * &p.u, tr / 2);
    if !m.det().is_one() {
        return Err(Error::Domain(format!("Pell data for d={} does not match disc of {q}", p.d)));
    }
    Ok(m)
}

/// `B(γ) = sign(tr γ) / gcd(b, d − a, −c) · [b, d − a, −c]`.
pub fn form_of_matrix(m: &HyperbolicMatrix) -> Result<QuadForm> {
    if !m.is_hyperbolic() {
        return Err(Error::NotHyperbolic);
    }
    let v = [m.b.clone(), &m.d - &m.a, -&m.c];
    let g = v[0].gcd(&v[1]).gcd(&v[2]);
    let sign = BigInt::from(if m.trace().is_negative() { -1 } else { 1 });
    let f = |x: &BigInt| -> Result<i64> {
        (x * &sign / &g).to_i64().ok_or(Error::Overflow("form of matrix"))
    };
    Ok(QuadForm::new(f(&v[0])?, f(&v[1])?, f(&v[2])?))
}

/// Double-precision geometry of the semicircle `S_q` joining the roots of
/// `a − b z + c z²`, oriented from `(b + √d)/(2c)` to `(b − √d)/(2c)` and
/// parametrized by arclength with the apex at time zero.
#[derive(Clone, Copy, Debug)]
pub struct Semicircle {
    pub center: f64,
    pub radius: f64,
    /// `+1` if the flow moves to the left (θ increasing), `−1` otherwise.
    pub dir: f64,
}

impl Semicircle {
    pub fn of_form(q: &QuadForm) -> Semicircle {
        let d = q.disc() as f64;
        let c = q.c as f64;
        Semicircle {
            center: q.b as f64 / (2.0 * c),
            radius: d.sqrt() / (2.0 * c.abs()),
            dir: if q.c > 0 { 1.0 } else { -1.0 },
        }
    }

    pub fn repelling(&self) -> f64 {
        self.center + self.dir * self.radius
    }

    pub fn attracting(&self) -> f64 {
        self.center - self.dir * self.radius
    }

    /// Angle from the center at flow time `t`.
    pub fn theta(&self, t: f64) -> f64 {
        2.0 * (self.dir * t).exp().atan()
    }

    /// Point and velocity `dz/dt` at flow time `t`.
    pub fn point_and_velocity(&self, t: f64) -> (Complex64, Complex64) {
        let th = self.theta(t);
        let (s, c) = th.sin_cos();
        let e = Complex64::new(c, s);
        let z = self.center + e * self.radius;
        let v = Complex64::i() * e * (self.radius * self.dir * s);
        (z, v)
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        self.point_and_velocity(t).0
    }

    /// Flow time of a point on the semicircle.
    pub fn time_of(&self, z: Complex64) -> f64 {
        let th = z.im.atan2(z.re - self.center);
        self.dir * (th / 2.0).tan().ln()
    }
}

#[derive(Clone, Debug)]
pub struct GeodesicArc {
    pub form: QuadForm,
    pub d_ambient: i64,
    pub pell: PellSolution,
    pub matrix: HyperbolicMatrix,
    pub circle: Semicircle,
    pub flow_length: f64,
    pub base_point: Complex64,
}

impl GeodesicArc {
    /// `(repelling, attracting)` endpoints at `bits` of precision.
    pub fn endpoints_hp(&self, bits: u32) -> (Real, Real) {
        let q = &self.form;
        let sd = Real::from_i64(q.disc() as i64, bits).sqrt();
        let b = Real::from_i64(q.b, bits);
        let plus = (&b + &sd).div_i64(2 * q.c);
        let minus = (&b - &sd).div_i64(2 * q.c);
        (plus, minus)
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.circle.repelling(), self.circle.attracting())
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        self.circle.point_at(t)
    }

    fn frame_hp(&self, bits: u32) -> (HpComplex, HpComplex, HpComplex, HpComplex) {
        let (wr, wa) = self.endpoints_hp(bits);
        let one = Real::from_i64(1, bits);
        let c = |x: Real| HpComplex::real(x);
        if wa > wr {
            (c(wa), c(wr), c(one.clone()), c(one))
        } else {
            (c(wa), c(-wr), c(one.clone()), c(-one))
        }
    }

    /// `g₀(ζ)` where `g₀` sends `0, ∞, i` to the repelling end, the attracting end and the apex.
    pub fn frame_act_hp(&self, zeta: &HpComplex) -> HpComplex {
        let (a, b, c, d) = self.frame_hp(zeta.re.bits());
        a.mul(zeta).add(&b).div(&c.mul(zeta).add(&d))
    }

    /// Point at flow time `flow_length`, i.e. `g₀(i ε²)`, and the image of the
    /// base point under the matrix, both at `bits` of precision.
    pub fn closure_points_hp(&self, bits: u32) -> (HpComplex, HpComplex) {
        let eps = self.pell.epsilon(bits);
        let e2 = &eps * &eps;
        let zero = Real::zero(bits);
        let end = self.frame_act_hp(&HpComplex::new(zero.clone(), e2));
        let apex = self.frame_act_hp(&HpComplex::new(zero, Real::from_i64(1, bits)));
        (end, self.matrix.act_hp(&apex))
    }

    /// Bits needed so the closure comparison keeps ~50 digits.
    pub fn closure_bits(&self) -> u32 {
        200 + (8.0 * self.pell.log_epsilon() / std::f64::consts::LN_2) as u32
    }
}

/// The oriented closed geodesic of `q` closed by the unit of `d_ambient`.
pub fn geodesic_arc(q: &QuadForm, d_ambient: i64) -> Result<GeodesicArc> {
    let d = q.disc_i64()?;
    if d_ambient % d != 0 || !crate::qforms::is_square(d_ambient / d) {
        return Err(Error::Domain(format!("{d_ambient} is not a square multiple of disc {q}")));
    }
    let pell = pell_fundamental(d_ambient)?;
    let m = crate::qforms::isqrt((d_ambient / d) as u64) as i64;
    let matrix = matrix_of_form(q, &scaled_pell(&pell, m))?;
    let circle = Semicircle::of_form(q);
    Ok(GeodesicArc {
        form: *q,
        d_ambient,
        flow_length: pell.length(),
        base_point: Complex64::new(circle.center, circle.radius),
        pell,
        matrix,
        circle,
    })
}

/// `(t, u·ℓ)`: the unit of `ℓ² d'` written as a solution for `d'`.
fn scaled_pell(p: &PellSolution, l: i64) -> PellSolution {
    PellSolution { d: p.d / (l * l), t: p.t.clone(), u: &p.u * l }
}

/// `(z*, g)` with `g z = z*`, `|Re z*| ≤ ½`, `|z*| ≥ 1`.
pub fn reduce_to_fundamental_domain(z: Complex64) -> (Complex64, [[i64; 2]; 2]) {
    let mut z = z;
    let mut g = [[1i64, 0], [0, 1]];
    for _ in 0..10_000 {
        let n = z.re.round();
        if n != 0.0 {
            z.re -= n;
            let n = n as i64;
            g = [[g[0][0] - n * g[1][0], g[0][1] - n * g[1][1]], g[1]];
        }
        if z.norm_sqr() < 1.0 - 1e-14 {
            z = -1.0 / z;
            g = [[-g[1][0], -g[1][1]], g[0]];
        } else {
            break;
        }
    }
    (z, g)
}

/// Fast variant without the matrix: `(z*, c z + d)` for the reducing `g`.
#[inline]
pub fn reduce_with_cocycle(z: Complex64) -> (Complex64, Complex64) {
    let mut z = z;
    let (mut c, mut d) = (0.0f64, 1.0f64);
    let (mut a, mut b) = (1.0f64, 0.0f64);
    let z0 = z;
    for _ in 0..10_000 {
        let n = z.re.round();
        if n != 0.0 {
            z.re -= n;
            a -= n * c;
            b -= n * d;
        }
        if z.norm_sqr() < 1.0 - 1e-14 {
            z = -1.0 / z;
            let (na, nb) = (-c, -d);
            c = a;
            d = b;
            a = na;
            b = nb;
        } else {
            break;
        }
    }
    (z, z0 * c + d)
}

/// `g` in `SL₂(ℤ)` acting on points.
pub fn mobius(g: [[i64; 2]; 2], z: Complex64) -> Complex64 {
    let [[a, b], [c, d]] = g.map(|r| r.map(|x| x as f64));
    (z * a + b) / (z * c + d)
}

pub fn is_identity(m: &HyperbolicMatrix) -> bool {
    m.a.is_one() && m.b.is_zero() && m.c.is_zero() && m.d.is_one()
}
