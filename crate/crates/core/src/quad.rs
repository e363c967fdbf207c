//! Quadrature rules: Gauss–Kronrod 10/21 panels, Gauss–Legendre nodes and
//! double-exponential rules for half-infinite ranges.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Values that can be integrated: a vector space with a size for error control.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Fixed-size bundle of complex values, integrated together.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<const N: usize>(pub [Complex64; N]);

impl<const N: usize> Add for CVec<N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for i in 0..N {
            self.0[i] += o.0[i];
        }
        self
    }
}

impl<const N: usize> Sub for CVec<N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for i in 0..N {
            self.0[i] -= o.0[i];
        }
        self
    }
}

impl<const N: usize> Mul<f64> for CVec<N> {
    type Output = Self;
    fn mul(mut self, k: f64) -> Self {
        for x in self.0.iter_mut() {
            *x *= k;
        }
        self
    }
}

impl<const N: usize> QuadValue for CVec<N> {
    fn zero() -> Self {
        CVec([Complex64::new(0.0, 0.0); N])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525048080,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One 21-point Kronrod panel on `[a, b]`: `(kronrod, |kronrod − gauss|)`.
pub fn gk21<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = T::zero();
    for j in 0..10 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

#[derive(Clone, Copy, Debug)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub evals: usize,
}

/// Globally adaptive Gauss–Kronrod on `[a, b]` starting from `init` equal panels.
/// Stops when the summed error is below `max(abs_tol, rel_tol·|value|)`.
pub fn integrate<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    init: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Integral<T> {
    let n = init.max(1);
    let mut panels: Vec<(f64, f64, T, f64)> = Vec::with_capacity(n);
    let w = (b - a) / n as f64;
    for i in 0..n {
        let (lo, hi) = (a + w * i as f64, if i + 1 == n { b } else { a + w * (i + 1) as f64 });
        let (v, e) = gk21(&mut f, lo, hi);
        panels.push((lo, hi, v, e));
    }
    let mut evals = 21 * n;
    loop {
        let mut total = T::zero();
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            total = total + p.2;
            err += p.3;
            if p.3 > panels[worst].3 {
                worst = i;
            }
        }
        let tol = abs_tol.max(rel_tol * total.magnitude());
        if err <= tol || panels.len() >= max_panels {
            return Integral { value: total, error: err, evals };
        }
        let (lo, hi, _, _) = panels[worst];
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk21(&mut f, lo, mid);
        let (v2, e2) = gk21(&mut f, mid, hi);
        evals += 42;
        panels[worst] = (lo, mid, v1, e1);
        panels.push((mid, hi, v2, e2));
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Trapezoidal rule in the exp-sinh variable for `∫₀^∞ g(t) dt`, with the
/// integrand supplied as `g(t)` and step halving until two levels agree.
/// Returns `(value, |difference of last two levels|)`.
pub fn exp_sinh<T: QuadValue>(mut g: impl FnMut(f64) -> T, tau_max: f64, tol: f64) -> (T, f64) {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut node = |tau: f64| -> T {
        let sh = half_pi * tau.sinh();
        let t = sh.exp();
        if t == 0.0 || !t.is_finite() {
            return T::zero();
        }
        g(t) * (t * half_pi * tau.cosh())
    };
    let mut h = 0.25;
    let mut sum = node(0.0);
    let mut k = 1;
    while k as f64 * h <= tau_max {
        let tau = k as f64 * h;
        sum = sum + node(tau) + node(-tau);
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..6 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tau_max {
            let tau = k as f64 * h;
            sum = sum + node(tau) + node(-tau);
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).magnitude();
        if diff <= tol * cur.magnitude() {
            return (cur, diff);
        }
        prev = cur;
    }
    let diff = prev.magnitude() * tol;
    (prev, diff.max(0.0))
}
