//! Geodesic periods per class and the class sums mu_d, checked against the
//! closed formula in terms of twisted central values.
//!
//!     cargo run --example periods -- 400

use gvlab::lfun::{central_value_holomorphic, central_value_twisted, coefficients_needed};
use gvlab::modforms::{holomorphic_eigenform, Eigenform};
use gvlab::periods::{mu_batch, period_holomorphic, BatchOptions};
use gvlab::qforms::{enumerate_classes, is_discriminant};

fn main() -> gvlab::Result<()> {
    let d_max: i64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(400);
    let f = holomorphic_eigenform(12, coefficients_needed(12, d_max as u64))?;

    println!("per-class periods of Delta at d = 40:");
    for rep in enumerate_classes(40)?.reps {
        let p = period_holomorphic(&f, &rep.form, 40)?;
        println!("  {}: {:.15e} {:+.1e}i (quadrature error {:.1e}, {} evaluations)", rep.form, p.value.re, p.value.im, p.error, p.evals);
    }

    let batch = mu_batch(&[Eigenform::Holomorphic(f.clone())], 5, d_max, None, &BatchOptions::default())?;
    let l0 = central_value_holomorphic(&f)?.value;
    let constant = (120.0 / std::f64::consts::PI.powi(6)).powi(2) * l0 / 4096.0;
    println!("\n   d  H      mu_d / d^(1/4)     |mu_d|^2 / (sqrt(d) L(1/2, f x chi_d))");
    for r in &batch.records[0] {
        if is_discriminant(r.d).fundamental {
            let l = central_value_twisted(&f, r.d)?;
            println!("{:4} {:2} {:+.12e}  {:.12e}", r.d, r.h, r.normalized.re, r.value.norm_sqr() / (r.d as f64).sqrt() / l.value);
        }
    }
    println!("predicted ratio {constant:.12e}; {} cycle sums computed", batch.quadrature_calls);
    Ok(())
}
