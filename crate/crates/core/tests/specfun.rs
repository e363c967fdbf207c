//! Special functions against values frozen from an arbitrary-precision
//! reference, plus identity and dual-route checks.

use gvlab::specfun::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;

fn close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1e-300)
}

#[test]
fn log_gamma_reference_values() {
    let cases = [
        ((0.5, 0.0), (0.57236494292470008707, 0.0)),
        ((3.7, -2.1), (0.78534695807382238876, -2.5830129251152622486)),
        ((0.25, 9.5), (-14.566362805176888445, 11.495669673626658751)),
        ((-2.5, 0.3), (-0.43208889261320192052, -9.0933454212897415073)),
        ((1.0, 40.0), (-60.068474811534223876, 108.33849295121103518)),
        ((0.1, 0.01), (2.2476658232303512977, -0.10390589166538166232)),
    ];
    for ((x, y), (u, v)) in cases {
        let g = log_gamma(C::new(x, y)).unwrap();
        assert!((g - C::new(u, v)).norm() < 1e-13 * (1.0 + u.abs() + v.abs()), "{x}+{y}i: {g}");
    }
    assert!(log_gamma(C::new(-3.0, 0.0)).is_err());
    assert!(log_gamma(C::new(0.0, 0.0)).is_err());
}

#[test]
fn digamma_reference_values() {
    let cases = [
        ((1.0, 0.0), (-0.57721566490153286061, 0.0)),
        ((0.25, 6.9), (1.9313024184200947221, 1.6070760915884453392)),
        ((-1.5, 2.0), (1.0398337581729536799, 2.3613736063180939716)),
        ((3.0, -4.0), (1.5503598173334109127, -1.0105022091860444529)),
    ];
    for ((x, y), (u, v)) in cases {
        let g = digamma(C::new(x, y)).unwrap();
        assert!((g - C::new(u, v)).norm() < 1e-13, "{x}+{y}i: {g}");
    }
}

#[test]
fn gamma_identities() {
    for y in [0.3, 2.0, 7.5, 19.0] {
        // |Γ(iy)|² = π / (y sinh πy) and |Γ(½ + iy)|² = π / cosh πy
        let a = abs_gamma_sq(0.0 + 1e-300, y);
        assert!((a / (PI / (y * (PI * y).sinh())) - 1.0).abs() < 1e-12);
        let b = abs_gamma_sq(0.5, y);
        assert!((b / (PI / (PI * y).cosh()) - 1.0).abs() < 1e-12);
        // Im ψ(½ + iy) = (π/2) tanh πy
        let p = digamma(C::new(0.5, y)).unwrap();
        assert!((p.im - 0.5 * PI * (PI * y).tanh()).abs() < 1e-13);
    }
    let b = beta(2.5, 3.5).unwrap();
    assert!((b - 3.0 * PI / 256.0).abs() < 1e-15);
    assert!(beta(-1.0, 2.0).is_err());
}

#[test]
fn bessel_k_reference_values() {
    let r1 = 9.53369526135355755;
    let r2 = 13.7797513518907389;
    let cases = [
        (0.5, 0.3, 1.1009281827393464939),
        (0.5, 5.0, 0.0036074271313261712002),
        (r1, 0.8, 1.220149646521008216e-7),
        (r1, 6.0, -2.9707344675878813309e-8),
        (r1, 14.3, 8.3864707471797458432e-9),
        (r1, 30.0, 4.7468673439801438456e-15),
        (r2, 5.44, -1.2881001256240511552e-10),
        (r2, 25.0, 7.6090249097386556868e-14),
        (1.0, 200.0, 1.2226291959682648879e-88),
        (3.0, 4.4, 0.0027566675318785033997),
        (3.0, 4.6, 0.0022995449374104657655),
    ];
    for (r, x, want) in cases {
        let k = bessel_k_imag(r, x).unwrap();
        assert!(!k.underflow);
        assert!((k.value - want).abs() < 1e-11 * want.abs(), "K_i{r}({x}) = {} vs {want}", k.value);
    }
    let far = bessel_k_imag(2.0, 900.0).unwrap();
    assert!(far.underflow && far.value == 0.0);
    assert!(bessel_k_imag(2.0, -1.0).is_err());
}

#[test]
fn whittaker_reference_values() {
    let cases = [
        (1.25, (0.0, 3.1), (0.7, 0.0), (0.014943066622769828226, 0.0)),
        (1.25, (0.0, 3.1), (12.0, 0.0), (0.022829057600629628457, 0.0)),
        (0.25, (0.0, 3.1), (4.0, 3.0), (0.047378990969956380451, -0.011933365785300518921)),
        (-1.25, (0.0, 2.0), (2.0, 0.0), (0.018510402203804325199, 0.0)),
        (-0.25, (0.0, 2.0), (1.0, -5.0), (-0.15142255476611516104, 0.26370927982301173701)),
        (0.25, (0.5, 0.0), (3.0, 0.0), (0.30923322521586053689, 0.0)),
        (1.25, (0.0, 6.0), (30.0, 20.0), (-8.593859099263400558e-6, -7.8159828514463651699e-6)),
        (0.25, (0.0, 6.0), (0.05, 0.05), (-0.00084043788222890472935, -0.00067838293770653331791)),
    ];
    for (k, (mr, mi), (zr, zi), (wr, wi)) in cases {
        let w = whittaker_w(k, C::new(mr, mi), C::new(zr, zi)).unwrap();
        assert!(close(w, C::new(wr, wi), 1e-10), "W_{k},{mr}+{mi}i({zr}+{zi}i) = {w}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn whittaker_routes_agree(k in prop::sample::select(vec![-1.25, -0.25, 0.25, 1.25]),
                              r in 0.2f64..5.0, x in 0.3f64..6.0, y in -3.0f64..3.0) {
        let mu = C::new(0.0, r);
        let z = C::new(x, y);
        let a = whittaker_w_route(k, mu, z, WRoute::Series).unwrap();
        let b = whittaker_w_route(k, mu, z, WRoute::Integral).unwrap();
        prop_assert!(close(a, b, 1e-10), "{a} vs {b}");
    }

    #[test]
    fn bessel_k_solves_its_ode(r in 0.0f64..15.0, x in 0.5f64..25.0) {
        // x² K'' + x K' − (x² − R²) K = 0
        let h = 1e-3 * x;
        let k = |t: f64| k_imag(r, t);
        let (k0, kp, km) = (k(x), k(x + h), k(x - h));
        let d1 = (kp - km) / (2.0 * h);
        let d2 = (kp - 2.0 * k0 + km) / (h * h);
        let res = x * x * d2 + x * d1 - (x * x - r * r) * k0;
        let scale = (x * x + r * r) * (k0.abs() + h * d1.abs() + x.abs() * d1.abs() / x);
        prop_assert!(res.abs() <= 1e-4 * scale, "R={r} x={x} res={res} scale={scale}");
    }
}

fn mk(k: f64, mu: C, nu: C, s: C) -> C {
    mellin_whittaker_pair(&MellinSample { k, mu, nu, s, rotation: 0.0 }).unwrap().value
}

#[test]
fn mellin_recurrence_and_determinant() {
    let (k, mu, nu) = (0.25, C::new(0.0, 0.5), C::new(0.0, 0.3));
    for s in [C::new(1.5, 0.0), C::new(2.0, 0.0), C::new(1.2, 0.7)] {
        let lhs = (s + 1.0) * mk(k, mu, nu, s + 2.0) - 2.0 * k * (2.0 * s + 1.0) * mk(k, mu, nu, s + 1.0);
        let d1 = mu + nu;
        let d2 = mu - nu;
        let rhs = (s * s - d1 * d1) * (s * s - d2 * d2) / s * mk(k, mu, nu, s);
        assert!(close(lhs, rhs, 1e-9), "s={s}: {lhs} vs {rhs}");
    }
    // frozen reference: det M(2) at μ = 0.5i, ν = 0.3i
    let s = C::new(2.0, 0.0);
    let det = mk(-k, mu, nu, s + 1.0) * (-mk(k, mu, nu, s)) - mk(-k, mu, nu, s) * mk(k, mu, nu, s + 1.0);
    assert!(close(det, C::new(-0.65508308979434794, 0.0), 1e-9), "{det}");
    let g = |z: C| gamma(z).unwrap();
    let cf = -2.0 * g(s + mu + nu) * g(s + mu - nu) * g(s - mu + nu) * g(s - mu - nu) / (s * g(s) * g(s));
    assert!(close(det, cf, 1e-9));
}

#[test]
fn mellin_asymptotic_along_vertical_line() {
    let (k, mu, nu) = (0.25, C::new(0.0, 0.7), C::new(0.0, 0.7));
    let ratio = |s: C| {
        let v = mellin_whittaker_pair(&MellinSample { k, mu, nu, s, rotation: s.arg() }).unwrap();
        v.value * gamma(s).unwrap() / gamma(s - 0.5 + k).unwrap().powi(2)
    };
    let r10 = ratio(C::new(1.5, 10.0));
    let r40 = ratio(C::new(1.5, 40.0));
    assert!((r40 - 1.0).norm() < (r10 - 1.0).norm());
    // error term of size |s|^{-1/2}
    assert!((r40 - 1.0).norm() < 2.0 / 40f64.sqrt(), "{r40}");
    // rotated and unrotated rays agree where both converge
    let s = C::new(1.5, 2.0);
    let a = mellin_whittaker_pair(&MellinSample { k, mu, nu, s, rotation: 0.0 }).unwrap().value;
    let b = mellin_whittaker_pair(&MellinSample { k, mu, nu, s, rotation: 0.9 }).unwrap().value;
    assert!(close(a, b, 1e-9), "{a} vs {b}");
}

#[test]
fn spec_examples() {
    let w = whittaker_w(0.0, C::new(0.5, 0.0), C::new(2.0, 0.0)).unwrap();
    assert!((w - C::new((-1f64).exp(), 0.0)).norm() < 1e-12);
    let y = 40.0;
    let w = whittaker_w(0.25, C::new(0.0, 1.0), C::new(y, 0.0)).unwrap();
    // leading correction (μ² − (κ − ½)²)/y
    let first = 1.0 + (-1.0 - 0.0625) / y;
    assert!((w.re * y.powf(-0.25) * (y / 2.0).exp() - first).abs() < 2e-3);
    assert!((k_imag(0.0, 1.0) - 0.42102443824070833).abs() < 1e-12);
    let x = 400.0;
    let r = 3.0;
    assert!((k_imag(r, x) * (2.0 * x / PI).sqrt() * x.exp() - 1.0).abs() < 0.02);
    assert!((beta(6.0, 6.0).unwrap() - 1.0 / 2772.0).abs() < 1e-16);
    assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    let z = C::new(0.25, 0.3);
    let refl = digamma(z).unwrap() - digamma(1.0 - z).unwrap() + PI / (PI * z).tan();
    assert!(refl.norm() < 1e-11);
    // ψ(¼+ir) − ψ(¼−ir) + ψ(¾+ir) − ψ(¾−ir) = 2i sinh(2πr)|Γ(½+2ir)|²
    let r = 1.0;
    let p = |x: f64, y: f64| digamma(C::new(x, y)).unwrap();
    let chain = p(0.25, r) - p(0.25, -r) + p(0.75, r) - p(0.75, -r);
    let want = C::new(0.0, 2.0 * (2.0 * PI * r).sinh() * abs_gamma_sq(0.5, 2.0 * r));
    assert!(close(chain, want, 1e-10), "{chain} vs {want}");
}

proptest! {
    #[test]
    fn log_gamma_reflection_and_duplication(x in -6.0f64..6.0, y in 0.05f64..30.0) {
        let z = C::new(x, y);
        let lg = |w: C| log_gamma(w).unwrap();
        // Γ(z)Γ(1−z) = π / sin πz
        let lhs = (lg(z) + lg(1.0 - z)).exp();
        let rhs = PI / (PI * z).sin();
        prop_assert!(close(lhs, rhs, 1e-11));
        // Γ(z)Γ(z+½) = 2^{1−2z} √π Γ(2z)
        let lhs = lg(z) + lg(z + 0.5);
        let rhs = (1.0 - 2.0 * z) * 2f64.ln() + 0.5 * PI.ln() + lg(2.0 * z);
        let d = lhs - rhs;
        let k = (d.im / (2.0 * PI)).round();
        prop_assert!((d - C::new(0.0, 2.0 * PI * k)).norm() < 1e-11 * (1.0 + lhs.norm()));
    }
}
