use gvlab::modforms::*;
use num_bigint::BigInt;
use num_complex::Complex64 as C;
use proptest::prelude::*;

/// τ(n) from the product Π(1 − qⁿ)^24 expanded by repeated multiplication.
fn tau_by_product(n: usize) -> Vec<i128> {
    let mut p = vec![0i128; n];
    p[0] = 1;
    for m in 1..n {
        for _ in 0..24 {
            for i in (m..n).rev() {
                p[i] -= p[i - m];
            }
        }
    }
    p
}

fn sigma(k: u32, n: u64) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(k)).sum()
}

#[test]
fn delta_coefficients() {
    let f = holomorphic_eigenform(12, 5).unwrap();
    let want: Vec<BigInt> = [1, -24, 252, -1472, 4830].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(*f.coeffs, want);
    let f = holomorphic_eigenform(12, 120).unwrap();
    let oracle = tau_by_product(120);
    for n in 1..=120 {
        assert_eq!(f.coeffs[n - 1], BigInt::from(oracle[n - 1]), "τ({n})");
    }
}

#[test]
fn weight_sixteen_is_delta_times_e4() {
    let f = holomorphic_eigenform(16, 40).unwrap();
    assert_eq!(f.coeffs[1], BigInt::from(216));
    let tau = tau_by_product(40);
    for n in 1..=40usize {
        let mut want = BigInt::from(tau[n - 1]);
        for i in 1..n {
            want += BigInt::from(tau[i - 1]) * 240 * sigma(3, (n - i) as u64);
        }
        assert_eq!(f.coeffs[n - 1], want, "n={n}");
    }
    assert!(matches!(holomorphic_eigenform(24, 5), Err(gvlab::Error::UnsupportedWeight(24))));
}

#[test]
fn hecke_relations_exact() {
    for w in SUPPORTED_WEIGHTS {
        let f = holomorphic_eigenform(w, 400).unwrap();
        let a = |n: usize| f.coeffs[n - 1].clone();
        for p in [2usize, 3, 5, 7, 11, 13, 17, 19] {
            for n in 1..=400 / p {
                let mut want = &a(p) * &a(n);
                if n % p == 0 {
                    want -= BigInt::from(p).pow(w - 1) * a(n / p);
                }
                assert_eq!(a(p * n), want, "w={w} p={p} n={n}");
            }
        }
        assert!(f.deligne_holds(), "w={w}");
    }
}

#[test]
fn evaluation_examples() {
    for w in [12u32, 16, 18] {
        let f = holomorphic_eigenform(w, 60).unwrap();
        let z = C::new(0.3, 0.8);
        let a = f.eval(z).unwrap();
        let b = f.eval(z + 1.0).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm());
        let z = C::new(0.2, 1.1);
        let lhs = f.eval(-1.0 / z).unwrap();
        let rhs = z.powi(w as i32) * f.eval(z).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm(), "w={w}");
        let y = 6.0;
        let v = f.eval(C::new(0.0, y)).unwrap() * (2.0 * std::f64::consts::PI * y).exp();
        assert!((v - 1.0).norm() < 1e-14);
    }
    let f = holomorphic_eigenform(12, 3).unwrap();
    assert!(f.eval(C::new(0.0, 0.9)).is_err());
}

#[test]
fn delta_petersson_norm() {
    let f = Eigenform::Holomorphic(holomorphic_eigenform(12, 60).unwrap());
    let a = petersson_norm(&f, 10.0).unwrap();
    let b = petersson_norm(&f, 20.0).unwrap();
    assert!(a.value > 0.0);
    assert!((a.value - b.value).abs() < 1e-9 * b.value);
    // published value of ⟨Δ, Δ⟩ in the measure dx dy / y²
    assert!((b.value - 1.035362056804320922e-6).abs() < 1e-9 * b.value, "{}", b.value);
    // bilinearity in the scale of f
    let g = holomorphic_eigenform(12, 60).unwrap();
    let z = C::new(0.1, 0.95);
    assert!(((g.eval(z).unwrap() * 3.0).norm_sqr() / g.eval(z).unwrap().norm_sqr() - 9.0).abs() < 1e-12);
}

#[test]
fn maass_file_format() {
    let good = "# test\nR 9.5\nparity odd\nnorm unknown\n1 1.0\n2 0.5\n3 -0.25\n4 -0.75\n";
    let m = parse_maass_form(good, "inline").unwrap();
    assert_eq!(m.parity, Parity::Odd);
    assert_eq!(m.coeffs.len(), 4);
    assert!(m.norm.is_none());
    let missing = "R 9.5\n1 1.0\n";
    assert!(matches!(parse_maass_form(missing, "x"), Err(gvlab::Error::Parse { .. })));
    let gap = "R 9.5\nparity even\n1 1.0\n3 0.2\n";
    assert!(matches!(parse_maass_form(gap, "x"), Err(gvlab::Error::Parse { line: 4, .. })));
    let bad_hecke = "R 9.5\nparity even\n1 1\n2 0.5\n3 0.1\n4 0.9\n";
    assert!(matches!(parse_maass_form(bad_hecke, "x"), Err(gvlab::Error::Validation(_))));
    // a(1) rescaled to one
    let scaled = "R 9.5\nparity even\nnorm 4.0\n1 2.0\n2 1.0\n";
    let m = parse_maass_form(scaled, "x").unwrap();
    assert_eq!(m.coeffs, vec![1.0, 0.5]);
    assert_eq!(m.norm, Some(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn modularity_residual(x in -1.0f64..1.0, y in 0.2f64..2.0) {
        let f = holomorphic_eigenform(12, 60).unwrap();
        let z = C::new(x, y);
        let lhs = f.eval(-1.0 / z).unwrap();
        let rhs = z.powi(12) * f.eval(z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9 * rhs.norm());
    }
}

fn data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

#[test]
fn maass_data_files() {
    let odd = load_maass_form(&data("maass_odd_9.53.txt")).unwrap();
    let even = load_maass_form(&data("maass_even_13.78.txt")).unwrap();
    assert_eq!(odd.parity, Parity::Odd);
    assert_eq!(even.parity, Parity::Even);
    // published spectral parameters
    assert!((odd.spectral_r - 9.53369526135355755).abs() < 1e-10);
    assert!((even.spectral_r - 13.7797513518907389).abs() < 1e-10);
    assert!(odd.norm.unwrap() > 0.0 && even.norm.unwrap() > 0.0);
    for phi in [&odd, &even] {
        // automorphy checked against the raw Fourier sum below the fundamental domain
        for z in [C::new(0.13, 0.55), C::new(-0.31, 0.62), C::new(0.45, 0.5)] {
            let raw = phi.fourier_sum(z, phi.coeffs.len());
            let red = phi.eval(z).unwrap();
            let scale = (-std::f64::consts::PI * phi.spectral_r / 2.0).exp();
            assert!((raw - red).abs() < 1e-8 * scale, "{z}: {raw} vs {red}");
            let w = -1.0 / z;
            assert!((phi.fourier_sum(w, phi.coeffs.len()) - raw).abs() < 1e-8 * scale);
        }
        let z = C::new(0.21, 0.9);
        assert!((phi.eval(z).unwrap() - phi.eval(z + 1.0).unwrap()).abs() < 1e-10 * phi.eval(z).unwrap().abs());
        let refl = phi.eval(C::new(-0.21, 0.9)).unwrap();
        let sign = if phi.parity == Parity::Odd { -1.0 } else { 1.0 };
        assert!((refl - sign * phi.eval(z).unwrap()).abs() < 1e-12 * refl.abs());
    }
    assert!(odd.eval(C::new(0.0, 1.3)).unwrap().abs() < 1e-10 * (-std::f64::consts::PI * 9.5 / 2.0).exp());
}

#[test]
fn maass_norm_is_stable_in_the_cutoff() {
    let even = load_maass_form(&data("maass_even_13.78.txt")).unwrap();
    let stored = even.norm.unwrap();
    let f = Eigenform::Maass(even);
    let a = petersson_norm(&f, 6.0).unwrap();
    let b = petersson_norm(&f, 12.0).unwrap();
    assert!((a.value - b.value).abs() < 1e-9 * b.value);
    assert!((b.value - stored).abs() < 1e-9 * stored);
}
