use gvlab::modforms::*;
use gvlab::periods::*;
use gvlab::qforms::*;
use gvlab::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::path::Path;
use std::sync::OnceLock;

fn delta() -> HolomorphicEigenform {
    holomorphic_eigenform(12, 80).unwrap()
}

fn odd_maass() -> &'static MaassForm {
    static F: OnceLock<MaassForm> = OnceLock::new();
    F.get_or_init(|| load_maass_form(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/maass_odd_9.53.txt"))).unwrap())
}

fn even_maass() -> &'static MaassForm {
    static F: OnceLock<MaassForm> = OnceLock::new();
    F.get_or_init(|| load_maass_form(Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/data/maass_even_13.78.txt"))).unwrap())
}

fn direct_hol(f: &HolomorphicEigenform, q: &QuadForm, d: i64, t0: f64) -> C {
    let b = HolomorphicBundle::new(std::array::from_ref(f)).unwrap();
    period_direct(&b, q, d, t0, &PeriodOptions::default()).unwrap().value.0[0]
}

fn close(a: C, b: C, rel: f64, floor: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()) + floor
}

#[test]
fn cycle_cut_matches_direct_arc() {
    for w in [12, 16, 18, 20] {
        let f = holomorphic_eigenform(w, 80).unwrap();
        for d in (5..=120).filter(|&d| is_discriminant(d).valid) {
            let pell = pell_fundamental(d).unwrap();
            if pell.length() > 14.0 {
                continue;
            }
            for rep in enumerate_classes(d).unwrap().reps {
                let cyc = period_holomorphic(&f, &rep.form, d).unwrap().value;
                let dir = direct_hol(&f, &rep.form, d, 0.0);
                assert!(close(cyc, dir, 1e-8, 1e-13), "w={w} d={d} {} {cyc} {dir}", rep.form);
            }
        }
    }
    let phi = odd_maass();
    let obs = MaassObservable::new(phi).unwrap();
    for d in [5, 8, 12, 13, 17, 20, 21] {
        for rep in enumerate_classes(d).unwrap().reps {
            let cyc = period_maass(phi, &rep.form, d).unwrap().value;
            let dir = period_direct(&obs, &rep.form, d, 0.0, &PeriodOptions::default()).unwrap().value;
            assert!((cyc - dir).abs() < 1e-8 * 3e-7, "d={d} {cyc} {dir}");
        }
    }
}

#[test]
fn period_independent_of_base_point() {
    let f = delta();
    for (q, d) in [(QuadForm::new(1, 1, -1), 5), (QuadForm::new(2, 3, -1), 17), (QuadForm::new(-3, 3, 1), 21)] {
        let base = direct_hol(&f, &q, d, 0.0);
        for t0 in [-1.7, 0.4, 2.9] {
            assert!(close(direct_hol(&f, &q, d, t0), base, 1e-8, 1e-15), "{q} t0={t0}");
        }
    }
}

#[test]
fn dilation_invariance() {
    let f = delta();
    for (q, d) in [(QuadForm::new(1, 1, -1), 5), (QuadForm::new(-1, 2, 1), 8), (QuadForm::new(-1, 3, 1), 13)] {
        let big = 4 * d;
        let q2 = q.scale(2).unwrap();
        let a = direct_hol(&f, &q, big, 0.0);
        let b = direct_hol(&f, &q2, big, 0.0);
        assert!(close(a, b, 1e-8, 1e-15), "{q}: {a} vs {b}");
        let c = period_holomorphic(&f, &q2, big).unwrap().value;
        assert!(close(a, c, 1e-8, 1e-15));
    }
}

#[test]
fn odd_maass_measure_vanishes() {
    let phi = odd_maass();
    let scale = (-std::f64::consts::PI * phi.spectral_r / 2.0).exp();
    for d in [5, 8, 12, 13] {
        let mut sum = 0.0;
        let mut biggest: f64 = 0.0;
        for rep in enumerate_classes(d).unwrap().reps {
            let p = period_maass(phi, &rep.form, d).unwrap().value;
            biggest = biggest.max(p.abs());
            sum += p;
        }
        assert!(sum.abs() < 1e-6 * scale, "d={d} sum {sum}");
        let _ = biggest;
    }
    // the even form does not vanish identically
    let even = even_maass();
    let total: f64 = [5, 8, 12, 13, 17]
        .iter()
        .flat_map(|&d| enumerate_classes(d).unwrap().reps.into_iter().map(move |r| (r, d)))
        .map(|(r, d)| period_maass(even, &r.form, d).unwrap().value.abs())
        .sum();
    assert!(total > 1e-3 * (-std::f64::consts::PI * even.spectral_r / 2.0).exp());
}

#[test]
fn weight_18_measure_vanishes_but_periods_do_not() {
    let f = holomorphic_eigenform(18, 80).unwrap();
    let r = mu_batch(&[Eigenform::Holomorphic(f.clone())], 5, 400, None, &BatchOptions::default()).unwrap();
    assert!(r.failures.is_empty());
    for rec in &r.records[0] {
        assert!(rec.normalized.norm() < 1e-10, "d={} {}", rec.d, rec.normalized);
    }
    // classes of 12 are not fixed by negation; their periods cancel in pairs
    let classes = primitive_classes(12).unwrap();
    assert_eq!(classes.len(), 2);
    let p: Vec<C> = classes.iter().map(|q| period_holomorphic(&f, q, 12).unwrap().value).collect();
    assert!(p[0].norm() > 1e-5, "{}", p[0]);
    assert!((p[0] + p[1]).norm() < 1e-12 * p[0].norm());
}

#[test]
fn orientation_flip_agrees() {
    let forms = [12, 16, 18].map(|w| Eigenform::Holomorphic(holomorphic_eigenform(w, 80).unwrap()));
    let mut forms = forms.to_vec();
    forms.push(Eigenform::Maass(even_maass().clone()));
    let std_opts = BatchOptions::default();
    let mut flip = BatchOptions::default();
    flip.period.orientation = Orientation::Flipped;
    let a = mu_batch(&forms, 5, 150, None, &std_opts).unwrap();
    let b = mu_batch(&forms, 5, 150, None, &flip).unwrap();
    for (ra, rb) in a.records.iter().zip(&b.records) {
        let top = ra.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
        for (x, y) in ra.iter().zip(rb) {
            assert_eq!(x.d, y.d);
            assert!((x.value - y.value).norm() < 1e-8 * top + 1e-14, "{} d={}", x.form_id, x.d);
        }
    }
}

#[test]
fn measure_real_for_weights_divisible_by_four() {
    for w in [12, 16, 20] {
        let f = holomorphic_eigenform(w, 80).unwrap();
        let r = mu_batch(&[Eigenform::Holomorphic(f)], 5, 600, None, &BatchOptions::default()).unwrap();
        let top = r.records[0].iter().map(|r| r.value.norm()).fold(0.0, f64::max);
        assert!(top > 0.0);
        for rec in &r.records[0] {
            assert!(rec.value.im.abs() < 1e-8 * top, "w={w} d={}", rec.d);
            assert_eq!(rec.normalized, rec.value / (rec.d as f64).powf(0.25));
        }
    }
}

#[test]
fn tighter_quadrature_stays_within_error_estimate() {
    let f = holomorphic_eigenform(16, 80).unwrap();
    let b = HolomorphicBundle::new(&[f]).unwrap();
    let loose = PeriodOptions { tol: 1e-7, ..Default::default() };
    let tight = PeriodOptions { tol: 1e-13, panel: 0.3, ..Default::default() };
    for d in [5, 29, 101, 229, 1001] {
        for q in primitive_classes(d).unwrap() {
            let a = cycle_period(&b, &q, &loose).unwrap();
            let t = cycle_period(&b, &q, &tight).unwrap();
            let diff = (a.value.0[0] - t.value.0[0]).norm();
            assert!(diff <= 10.0 * a.error + 1e-16, "d={d} diff {diff:e} err {:e}", a.error);
        }
    }
}

#[test]
fn cycle_length_matches_pell() {
    let f = delta();
    let b = HolomorphicBundle::new(&[f]).unwrap();
    for d in [5, 13, 61, 92, 109, 421, 9949] {
        for q in primitive_classes(d).unwrap() {
            let p = cycle_period(&b, &q, &PeriodOptions::default()).unwrap();
            let want = pell_fundamental(d).unwrap().length();
            assert!((p.length - want).abs() < 1e-9 * want);
        }
    }
    assert!(matches!(
        cycle_period(&b, &QuadForm::new(1, 5, 1), &PeriodOptions::default()),
        Err(Error::NotReduced(_))
    ));
}

#[test]
fn cache_round_trip_and_admin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("periods.txt");
    let forms = [Eigenform::Holomorphic(delta())];
    let first = {
        let mut cache = PeriodCache::open(&path).unwrap();
        mu_batch(&forms, 5, 300, Some(&mut cache), &BatchOptions::default()).unwrap()
    };
    assert!(first.quadrature_calls > 0);
    let mut cache = PeriodCache::open(&path).unwrap();
    let second = mu_batch(&forms, 5, 300, Some(&mut cache), &BatchOptions::default()).unwrap();
    assert_eq!(second.quadrature_calls, 0);
    for (a, b) in first.records[0].iter().zip(&second.records[0]) {
        assert_eq!(a.d, b.d);
        assert!((a.value - b.value).norm() <= 1e-14 * a.value.norm());
    }
    let check = cache_verify(&path).unwrap();
    assert_eq!(check.bad, 0);
    let n = check.lines;

    // duplicate every line, then compact back
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, format!("{text}{text}")).unwrap();
    assert_eq!(cache_compact(&path).unwrap(), (2 * n, n));

    let stats = cache_stats(&path).unwrap();
    let (count, runs) = &stats[&delta().form_id()];
    assert_eq!(*count, n);
    assert_eq!(runs, &vec![(5, 300)]);

    // corrupt one digit on line 3
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let l = &mut lines[2];
    let pos = l.find('e').unwrap() - 1;
    let ch = if &l[pos..pos + 1] == "1" { "2" } else { "1" };
    l.replace_range(pos..pos + 1, ch);
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert_eq!(cache_verify(&path).unwrap().first_bad, Some(3));
    assert!(matches!(PeriodCache::open(&path), Err(Error::CacheCorrupt { line: 3, .. })));
}

#[test]
fn record_line_format() {
    let rec = PeriodRecord {
        d: 5,
        form_id: "hol12-abc".into(),
        value: C::new(-3.3162770562e-3, 0.0),
        normalized: C::new(-3.3162770562e-3, 0.0) / 5f64.powf(0.25),
        h: 1,
        t: "3".into(),
        u: "1".into(),
        quad_error: 1e-18,
    };
    let line = rec.to_line();
    assert_eq!(line.split(' ').count(), 10);
    assert_eq!(PeriodRecord::parse_line(&line, 1).unwrap(), rec);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn class_function_under_sl2z(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, pick in 0usize..6) {
        // build g = [[a', b'], [c', d']] with det 1 from a product of generators
        let mut g = [[1i64, 0], [0, 1]];
        for (i, e) in [a, b, c].into_iter().enumerate() {
            let m = if i % 2 == 0 { [[1, e], [0, 1]] } else { [[1, 0], [e, 1]] };
            g = [[g[0][0]*m[0][0] + g[0][1]*m[1][0], g[0][0]*m[0][1] + g[0][1]*m[1][1]],
                 [g[1][0]*m[0][0] + g[1][1]*m[1][0], g[1][0]*m[0][1] + g[1][1]*m[1][1]]];
        }
        let (q, d) = [(QuadForm::new(1, 1, -1), 5), (QuadForm::new(-1, 2, 1), 8), (QuadForm::new(-2, 2, 1), 12),
                      (QuadForm::new(-1, 3, 1), 13), (QuadForm::new(2, 3, -1), 17), (QuadForm::new(-1, 4, 1), 20)][pick];
        let gq = q.pullback(g).unwrap();
        let f = delta();
        let a = direct_hol(&f, &q, d, 0.0);
        let b = direct_hol(&f, &gq, d, 0.0);
        prop_assert!(close(a, b, 1e-8, 1e-15), "{} -> {}: {} vs {}", q, gq, a, b);
        let phi = odd_maass();
        let pa = period_maass(phi, &q, d).unwrap().value;
        let pb = period_maass(phi, &gq, d).unwrap().value;
        prop_assert!((pa - pb).abs() < 1e-8 * 3e-7);
    }
}

/// `c(D p²) = c(D) (a(p) − χ_D(p) p^{k−1})` for the lift coefficients `c(d) = μ_d d^{(k−1)/2}`.
#[test]
fn imprimitive_sums_satisfy_shimura_relation() {
    for w in [12u32, 16] {
        let f = holomorphic_eigenform(w, 80).unwrap();
        let k = (w / 2) as i32;
        let r = mu_batch(&[Eigenform::Holomorphic(f.clone())], 5, 1300, None, &BatchOptions::default()).unwrap();
        let c = |d: i64| {
            let rec = r.records[0].iter().find(|x| x.d == d).unwrap();
            rec.value.re * (d as f64).powf((k as f64 - 1.0) / 2.0)
        };
        for dd in [5i64, 8, 12, 13, 17, 21, 24] {
            for p in [2i64, 3, 5, 7] {
                let chi = gvlab::lfun::kronecker_symbol(dd, p).unwrap() as f64;
                let want = c(dd) * (f.a(p as usize) - chi * (p as f64).powi(k - 1));
                let got = c(dd * p * p);
                assert!((got - want).abs() < 1e-9 * want.abs().max(c(dd).abs()), "w={w} D={dd} p={p}: {got} {want}");
            }
        }
    }
}

#[test]
fn ambient_traversal_reweights_imprimitive_classes() {
    let f = delta();
    let prim = mu_batch(&[Eigenform::Holomorphic(f.clone())], 5, 100, None, &BatchOptions::default()).unwrap();
    let opts = BatchOptions { traversal: Traversal::Ambient, ..Default::default() };
    let amb = mu_batch(&[Eigenform::Holomorphic(f.clone())], 5, 100, None, &opts).unwrap();
    assert!(amb.records[0][0].form_id.ends_with("~amb"));
    for (p, a) in prim.records[0].iter().zip(&amb.records[0]) {
        if is_discriminant(p.d).fundamental {
            assert_eq!(p.value, a.value);
        }
    }
    // d = 20 = 4·5 with ε_20 = ε_5³
    let mu = |recs: &[PeriodRecord], d: i64| recs.iter().find(|x| x.d == d).unwrap().value;
    let j5 = mu(&prim.records[0], 5);
    let diff = mu(&amb.records[0], 20) - mu(&prim.records[0], 20);
    assert!((diff - j5 * 2.0).norm() < 1e-12);
}

/// For fundamental `d`, `|μ_d|²/√d = ((k−1)!/π^k)² L(½,f) L(½,f⊗χ_d) / 4^k`.
#[test]
fn central_value_formula_for_fundamental_discriminants() {
    use gvlab::lfun::*;
    for w in [12u32, 16] {
        let f = holomorphic_eigenform(w, coefficients_needed(w, 200)).unwrap();
        let k = (w / 2) as i32;
        let fact: f64 = (1..k).map(f64::from).product();
        let l0 = central_value_holomorphic(&f).unwrap().value;
        let constant = (fact / std::f64::consts::PI.powi(k)).powi(2) * l0 / 4f64.powi(k);
        let r = mu_batch(&[Eigenform::Holomorphic(f.clone())], 5, 200, None, &BatchOptions::default()).unwrap();
        for rec in r.records[0].iter().filter(|x| is_discriminant(x.d).fundamental) {
            let l = central_value_twisted(&f, rec.d).unwrap();
            let lhs = rec.value.norm_sqr() / (rec.d as f64).sqrt();
            assert!((lhs - constant * l.value).abs() < 1e-9 * constant * (l.value.abs() + 1e-3), "w={w} d={}", rec.d);
        }
    }
}
