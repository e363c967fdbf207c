//! Computes a Maass cusp form for SL₂(ℤ) by Hejhal's collocation method and
//! writes it in the data-file format read by `load_maass_form`.
//!
//!     cargo run --release --example hejhal -- odd 9.5337 data/maass_odd_9.53.txt
//!
//! The spectral parameter is refined by a secant iteration on the mismatch of
//! `a(2)` between two collocation heights.

use std::f64::consts::PI;
use std::io::Write;

use gvlab::geodesics::reduce_to_fundamental_domain;
use gvlab::modforms::{parse_maass_form, petersson_norm, Eigenform, Parity};
use gvlab::specfun::k_imag;
use num_complex::Complex64;

struct Setup {
    parity: Parity,
    m: usize,
    q: usize,
    y: f64,
}

fn cs(p: Parity, t: f64) -> f64 {
    match p {
        Parity::Even => t.cos(),
        Parity::Odd => t.sin(),
    }
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Coefficients `a(1..=M)` with `a(1) = 1` at spectral parameter `r`.
fn coefficients(s: &Setup, r: f64) -> Vec<f64> {
    let (m, q, y) = (s.m, s.q, s.y);
    let pts: Vec<(f64, Complex64)> = (1..=q)
        .map(|j| {
            let x = (j as f64 - 0.5) / (2.0 * q as f64);
            (x, reduce_to_fundamental_domain(Complex64::new(x, y)).0)
        })
        .collect();
    // basis values at the pulled-back points
    let basis: Vec<Vec<f64>> = (1..=m)
        .map(|l| {
            pts.iter()
                .map(|(_, z)| z.im.sqrt() * k_imag(r, 2.0 * PI * l as f64 * z.im) * cs(s.parity, 2.0 * PI * l as f64 * z.re))
                .collect()
        })
        .collect();
    let mut v = vec![vec![0.0; m]; m];
    for n in 1..=m {
        for l in 1..=m {
            let mut acc = 0.0;
            for (j, (x, _)) in pts.iter().enumerate() {
                acc += basis[l - 1][j] * cs(s.parity, 2.0 * PI * n as f64 * x);
            }
            v[n - 1][l - 1] = -2.0 * acc / q as f64;
        }
        v[n - 1][n - 1] += y.sqrt() * k_imag(r, 2.0 * PI * n as f64 * y);
    }
    // fix a(1) = 1 and drop the first equation
    let a: Vec<Vec<f64>> = (1..m).map(|i| v[i][1..].to_vec()).collect();
    let b: Vec<f64> = (1..m).map(|i| -v[i][0]).collect();
    let mut out = vec![1.0];
    out.extend(solve(a, b));
    out
}

/// Largest violation of `a(mn) = a(m)a(n)` (coprime) and `a(p²) = a(p)² − 1`.
fn hecke_residual(a: &[f64]) -> f64 {
    let n = a.len();
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    let mut worst: f64 = 0.0;
    for i in 2..=n {
        for j in i..=n / i {
            if gcd(i, j) == 1 {
                worst = worst.max((a[i * j - 1] - a[i - 1] * a[j - 1]).abs());
            }
        }
        let prime = (2..i).all(|d| i % d != 0);
        if prime && i * i <= n {
            worst = worst.max((a[i * i - 1] - a[i - 1] * a[i - 1] + 1.0).abs());
        }
    }
    worst
}

fn setup(parity: Parity, r: f64, y: f64) -> Setup {
    // truncate where K_{iR}(2πMY) drops below 1e−17 of the bulk e^{−πR/2}
    let m = ((40.0 + PI * r / 2.0) / (2.0 * PI * y)).ceil() as usize + 2;
    Setup { parity, m, q: m + 12, y }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let parity = match args.get(1).map(String::as_str) {
        Some("even") => Parity::Even,
        _ => Parity::Odd,
    };
    let mut r: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(9.5337);
    let out = args.get(3).cloned();

    let (y1, y2) = (0.32, 0.41);
    let mismatch = |r: f64| {
        let a = coefficients(&setup(parity, r, y1), r);
        let b = coefficients(&setup(parity, r, y2), r);
        a[1] - b[1]
    };
    let mut r0 = r - 1e-3;
    let mut f0 = mismatch(r0);
    let mut f1 = mismatch(r);
    for it in 0..30 {
        let step = f1 * (r - r0) / (f1 - f0);
        r0 = r;
        f0 = f1;
        r -= step;
        f1 = mismatch(r);
        eprintln!("iteration {it}: R = {r:.16} mismatch {f1:.3e}");
        if step.abs() < 1e-14 * r {
            break;
        }
    }

    let lo = setup(parity, r, 0.16);
    let a = coefficients(&lo, r);
    let b = coefficients(&setup(parity, r, 0.2), r);
    let keep = 30.min(a.len());
    let agree = (1..=keep).map(|n| (a[n - 1] - b[n - 1]).abs()).fold(0.0, f64::max);
    let hecke = hecke_residual(&a[..keep]);

    let mut text = String::new();
    text += "# Maass cusp form for SL2(Z), Hejhal collocation\n";
    text += &format!("# heights {} and 0.2, {} terms; max |a(n)| difference {:.1e}\n", lo.y, lo.m, agree);
    text += &format!("# max Hecke residual for n <= {keep}: {hecke:.1e}\n");
    text += &format!("R {r:.17}\n");
    text += &format!("parity {}\n", if parity == Parity::Odd { "odd" } else { "even" });
    text += "norm unknown\n";
    for (n, c) in a.iter().take(keep).enumerate() {
        text += &format!("{} {:.17e}\n", n + 1, c);
    }
    let form = parse_maass_form(&text, "hejhal").expect("generated data validates");
    let norm = petersson_norm(&Eigenform::Maass(form), 12.0).expect("norm");
    let text = text.replace("norm unknown", &format!("norm {:.15e}", norm.value));

    match out {
        Some(path) => {
            let mut f = std::fs::File::create(&path).expect("create output");
            f.write_all(text.as_bytes()).unwrap();
            eprintln!("wrote {path}");
        }
        None => print!("{text}"),
    }
}
