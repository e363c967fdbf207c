//! Binary fixed-point reals over `BigInt`, enough for endpoints, Möbius images
//! and flow-closure checks at a few hundred bits.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// `m / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real { m: BigInt::zero(), bits }
    }

    pub fn from_i64(x: i64, bits: u32) -> Self {
        Real { m: BigInt::from(x) << bits, bits }
    }

    pub fn from_bigint(x: &BigInt, bits: u32) -> Self {
        Real { m: x << bits, bits }
    }

    /// Exact value of a double.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        let scaled = x * 2f64.powi(52);
        let mant = BigInt::from(scaled as i128);
        let m = if bits >= 52 { mant << (bits - 52) } else { mant >> (52 - bits) };
        Real { m, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.m.bits();
        if len > 1000 {
            let sh = len - 900;
            let top = (&self.m >> sh).to_f64().unwrap();
            return top * 2f64.powi(sh as i32 - self.bits as i32);
        }
        self.m.to_f64().unwrap() * 2f64.powi(-(self.bits as i32))
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn abs(&self) -> Self {
        Real { m: self.m.abs(), bits: self.bits }
    }

    pub fn half(&self) -> Self {
        Real { m: &self.m >> 1u32, bits: self.bits }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.m.is_negative(), "sqrt of negative value");
        Real { m: (&self.m << self.bits).sqrt(), bits: self.bits }
    }

    pub fn div(&self, o: &Real) -> Self {
        assert_eq!(self.bits, o.bits);
        Real { m: (&self.m << self.bits) / &o.m, bits: self.bits }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        Real { m: &self.m * k, bits: self.bits }
    }

    pub fn mul_big(&self, k: &BigInt) -> Self {
        Real { m: &self.m * k, bits: self.bits }
    }

    pub fn div_i64(&self, k: i64) -> Self {
        Real { m: &self.m / k, bits: self.bits }
    }

    /// Relative size `|self − o| / max(|self|, |o|)` in double precision.
    pub fn rel_diff(&self, o: &Real) -> f64 {
        let scale = if self.abs() > o.abs() { self.abs() } else { o.abs() };
        if scale.is_zero() {
            return 0.0;
        }
        ratio(&(self - o).abs(), &scale)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Real {
    fn cmp(&self, o: &Self) -> Ordering {
        assert_eq!(self.bits, o.bits);
        self.m.cmp(&o.m)
    }
}

impl Add<&Real> for Real {
    type Output = Real;
    fn add(self, o: &Real) -> Real {
        assert_eq!(self.bits, o.bits);
        Real { m: self.m + &o.m, bits: self.bits }
    }
}

impl Sub<&Real> for Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        assert_eq!(self.bits, o.bits);
        Real { m: self.m - &o.m, bits: self.bits }
    }
}

impl<'a> Sub<&Real> for &'a Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        self.clone() - o
    }
}

impl<'a> Add<&Real> for &'a Real {
    type Output = Real;
    fn add(self, o: &Real) -> Real {
        self.clone() + o
    }
}

impl<'a> Mul<&Real> for &'a Real {
    type Output = Real;
    fn mul(self, o: &Real) -> Real {
        assert_eq!(self.bits, o.bits);
        Real { m: (&self.m * &o.m) >> self.bits, bits: self.bits }
    }
}

impl Mul<&Real> for Real {
    type Output = Real;
    fn mul(self, o: &Real) -> Real {
        &self * o
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { m: -self.m, bits: self.bits }
    }
}

/// Complex number over [`Real`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn real(re: Real) -> Self {
        let bits = re.bits();
        Complex { re, im: Real::zero(bits) }
    }

    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        Complex { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    pub fn scale_big(&self, k: &BigInt) -> Complex {
        Complex { re: self.re.mul_big(k), im: self.im.mul_big(k) }
    }

    pub fn div(&self, o: &Complex) -> Complex {
        let den = &(&o.re * &o.re) + &(&o.im * &o.im);
        let num = self.mul(&Complex { re: o.re.clone(), im: -o.im.clone() });
        Complex { re: num.re.div(&den), im: num.im.div(&den) }
    }

    pub fn norm(&self) -> Real {
        (&(&self.re * &self.re) + &(&self.im * &self.im)).sqrt()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Relative distance `|self − o| / |o|`.
    pub fn rel_diff(&self, o: &Complex) -> f64 {
        ratio(&self.sub(o).norm(), &o.norm())
    }
}

fn ratio(a: &Real, b: &Real) -> f64 {
    if b.is_zero() {
        return if a.is_zero() { 0.0 } else { f64::INFINITY };
    }
    let shift = b.m.bits().saturating_sub(200);
    (&a.m >> shift).to_f64().unwrap() / (&b.m >> shift).to_f64().unwrap()
}
