use gvlab::modforms::*;
use gvlab::periods::*;
use gvlab::variance::*;
use gvlab::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::path::Path;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn v_sym_spherical_values() {
    // Γ(¼)⁴/(2π Γ(½)²) = Γ(¼)⁴/(2π²)
    let g14 = 3.625_609_908_221_908_311_9_f64;
    assert!(rel(v_sym_spherical(0.0, 1.0), g14.powi(4) / (2.0 * std::f64::consts::PI.powi(2))) < 1e-13);
    assert!(rel(v_sym_spherical(0.0, 1.0), 8.753_758_460_905_906_6) < 1e-13);
    // mpmath, 30 digits
    assert!(rel(v_sym_spherical(27.5596, 1.0), 0.072_581_947_813_455_949_5) < 1e-11);
    assert!(rel(v_sym_spherical(9.53369526135355, 1.0), 0.210_072_984_228_208_890_2) < 1e-11);
    for norm in [0.5, 2.0, 1e-9] {
        assert!(rel(v_sym_spherical(13.0, norm), norm * v_sym_spherical(13.0, 1.0)) < 1e-14);
    }
}

#[test]
fn v_sym_discrete_values() {
    assert!(rel(v_sym_discrete(12), 2048.0 / 2772.0) < 1e-14);
    // ½ 2¹⁶ (7!)² / 15!
    let fact = |n: u64| (1..=n).product::<u64>() as f64;
    assert!(rel(v_sym_discrete(16), 0.5 * 65536.0 * fact(7).powi(2) / fact(15)) < 1e-12);
    for w in [14, 18, 22, 26] {
        assert_eq!(v_sym_discrete(w), 0.0);
    }
    assert!(v_sym_discrete(200).is_finite());
}

#[test]
fn ladder_examples() {
    let sph = |s: f64| LadderSpec::Spherical { s: C::new(s, 0.0) };
    assert!((ladder_ratio(sph(0.0), 4).unwrap() - 1.0 / 3.0).norm() < 1e-15);
    assert!((ladder_ratio(sph(0.0), 8).unwrap() - 5.0 / 21.0).norm() < 1e-15);
    for n in [2, 6, 10, -2, -6, 102] {
        assert_eq!(ladder_ratio(sph(0.3), n).unwrap(), C::new(0.0, 0.0));
    }
    assert_eq!(ladder_ratio(sph(0.3), 0).unwrap(), C::new(1.0, 0.0));
    assert_eq!(ladder_ratio(sph(0.3), -8).unwrap(), ladder_ratio(sph(0.3), 8).unwrap());
    assert!(matches!(ladder_ratio(sph(0.3), 3), Err(Error::OutOfLadder(3))));

    let disc = LadderSpec::Discrete { m0: 12 };
    assert_eq!(ladder_ratio(disc, 12).unwrap(), C::new(1.0, 0.0));
    assert!((ladder_ratio(disc, 16).unwrap() - 1.0 / 13.0).norm() < 1e-15);
    assert!((ladder_ratio(disc, 20).unwrap() - 3.0 / (13.0 * 15.0)).norm() < 1e-15);
    for n in [14, 18, 22, 50] {
        assert_eq!(ladder_ratio(disc, n).unwrap(), C::new(0.0, 0.0));
    }
    assert!(matches!(ladder_ratio(disc, 10), Err(Error::OutOfLadder(10))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn ladder_recurrence_spherical(t in -30.0f64..30.0, real in proptest::bool::ANY, half in -40i64..40) {
        let s = if real { C::new(t / 31.0, 0.0) } else { C::new(0.0, t) };
        let spec = LadderSpec::Spherical { s };
        let n = 2 * half;
        let lhs = (n as f64 - s - 1.0) * ladder_ratio(spec, n - 2).unwrap();
        let rhs = (n as f64 + s + 1.0) * ladder_ratio(spec, n + 2).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()).max(1e-300));
    }

    #[test]
    fn ladder_recurrence_discrete(m0h in 1i64..20, step in 1i64..40) {
        let m0 = 2 * m0h;
        let spec = LadderSpec::Discrete { m0 };
        let s = ladder_parameter(spec);
        let n = m0 + 2 * step;
        let lhs = (n as f64 - s - 1.0) * ladder_ratio(spec, n - 2).unwrap();
        let rhs = (n as f64 + s + 1.0) * ladder_ratio(spec, n + 2).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()).max(1e-300));
    }
}

#[test]
fn rankin_identities_hold() {
    for r in [0.5, 1.0, 2.0] {
        let rep = rankin_identity_suite(r).unwrap();
        assert_eq!(rep.checks.len(), 13);
        for c in &rep.checks {
            assert!(c.residual() < 1e-7, "r={r} {}: {} vs {}", c.name, c.computed, c.expected);
        }
    }
    assert!(rankin_identity_suite(0.0).is_err());
}

fn records(values: &[(i64, C)]) -> Vec<PeriodRecord> {
    values
        .iter()
        .map(|&(d, v)| PeriodRecord {
            d,
            form_id: "x".into(),
            value: v,
            normalized: v / (d as f64).powf(0.25),
            h: 1,
            t: "1".into(),
            u: "1".into(),
            quad_error: 0.0,
        })
        .collect()
}

fn target(id: &str, v: f64) -> FormTarget {
    FormTarget { form_id: id.into(), c: 1.0 / std::f64::consts::PI, l_half: 1.0, v_sym: v, dictionary: 1.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn report_is_hermitian_and_scale_free(
        vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0), 20..60),
        lam_re in 0.1f64..10.0, lam_im in -5.0f64..5.0,
    ) {
        let ds: Vec<i64> = (5..).filter(|&d| gvlab::qforms::is_discriminant(d).valid).take(vals.len()).collect();
        let a = records(&ds.iter().zip(&vals).map(|(&d, v)| (d, C::new(v.0, v.1))).collect::<Vec<_>>());
        let b = records(&ds.iter().zip(&vals).map(|(&d, v)| (d, C::new(v.2, v.3))).collect::<Vec<_>>());
        let grid = y_grid(*ds.last().unwrap());
        let (ta, tb) = (target("a", 2.0), target("b", 3.0));
        let ab = variance_from_records(&a, &b, &ta, &tb, &grid).unwrap();
        let ba = variance_from_records(&b, &a, &tb, &ta, &grid).unwrap();
        for (x, y) in ab.rows.iter().zip(&ba.rows) {
            prop_assert!((x.b_sharp - y.b_sharp.conj()).norm() < 1e-15);
            prop_assert!((x.b_flat - y.b_flat.conj()).norm() < 1e-15);
        }
        let aa = variance_from_records(&a, &a, &ta, &ta, &grid).unwrap();
        prop_assert!(aa.rows.iter().all(|r| r.b_sharp.re >= 0.0 && r.b_sharp.im.abs() < 1e-15));

        // f → λf scales both B and ⟨f,f⟩ by |λ|²
        let lam = C::new(lam_re, lam_im);
        let scaled = records(&ds.iter().zip(&vals).map(|(&d, v)| (d, C::new(v.0, v.1) * lam)).collect::<Vec<_>>());
        let ts = target("a", 2.0 * lam.norm_sqr());
        let ss = variance_from_records(&scaled, &scaled, &ts, &ts, &grid).unwrap();
        for (x, y) in aa.rows.iter().zip(&ss.rows) {
            prop_assert!((x.ratio_sharp - y.ratio_sharp).abs() <= 1e-10 * x.ratio_sharp.abs());
            prop_assert!((x.ratio_flat - y.ratio_flat).abs() <= 1e-10 * x.ratio_flat.abs());
        }
    }
}

#[test]
fn grid_and_csv_shape() {
    assert_eq!(y_grid(1000), vec![10, 20, 50, 100, 200, 500, 1000]);
    assert_eq!(y_grid(3000), vec![10, 20, 50, 100, 200, 500, 1000, 2000, 3000]);
    let a = records(&[(5, C::new(1.0, 0.0)), (8, C::new(-1.0, 0.0)), (12, C::new(0.5, 0.0))]);
    let t = target("a", 1.0);
    let rep = variance_from_records(&a, &a, &t, &t, &[5, 10, 12]).unwrap();
    let csv = variance_csv(&rep);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "Y,count,B_emp_sharp,B_emp_flat,target,ratio_sharp,ratio_flat,mean");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("10,2,"));
    let short = records(&[(5, C::new(1.0, 0.0))]);
    assert!(variance_from_records(&a, &short, &t, &t, &[12]).is_err());
}

#[test]
fn delta_target_constants() {
    let f = Eigenform::Holomorphic(holomorphic_eigenform(12, 100).unwrap());
    let t = form_target(&f, None).unwrap();
    assert!(rel(t.l_half, 0.792_122_838_646_030_4) < 1e-12);
    assert!(rel(t.v_sym, 2048.0 / 2772.0 * 1.035_362_056_804_320_9e-6) < 1e-8);
    assert_eq!(t.dictionary, HOLOMORPHIC_DICTIONARY);
    assert!(rel(t.value(), 6.0 / std::f64::consts::PI * t.l_half * t.v_sym) < 1e-15);
    let g = Eigenform::Holomorphic(holomorphic_eigenform(18, 100).unwrap());
    assert_eq!(form_target(&g, None).unwrap().value(), 0.0);
}

#[test]
fn vanishing_statistics() {
    let opts = BatchOptions::default();
    let f18 = Eigenform::Holomorphic(holomorphic_eigenform(18, 100).unwrap());
    let rep = variance_run(&f18, &f18, 2000, None, &opts, (None, None)).unwrap();
    assert!(rep.rows.iter().all(|r| r.b_sharp.norm() < 1e-25 && r.mean.norm() < 1e-12));
    let m = mean_run(&f18, 2000, None, &opts).unwrap();
    assert!(m.rows.iter().all(|r| r.2.norm() < 1e-12));

    let odd = load_maass_form(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/maass_odd_9.53.txt"))).unwrap();
    let scale = (-std::f64::consts::PI * odd.spectral_r / 2.0).exp();
    let m = mean_run(&Eigenform::Maass(odd), 150, None, &opts).unwrap();
    assert!(m.rows.iter().all(|r| r.2.norm() < 1e-9 * scale));
}

#[test]
fn delta_variance_small_range() {
    let f = Eigenform::Holomorphic(holomorphic_eigenform(12, 100).unwrap());
    let rep = variance_run(&f, &f, 3000, None, &BatchOptions::default(), (None, None)).unwrap();
    let last = rep.rows.last().unwrap();
    assert_eq!(last.y, 3000);
    assert!(last.ratio_flat > 0.5 && last.ratio_flat < 1.5, "{}", last.ratio_flat);
    assert!(rel(last.ratio_sharp / last.ratio_flat, 3000.0 / last.count as f64) < 1e-12);
    assert!(rep.failures.is_empty());
    assert!(rep.block_error.is_finite());
}
