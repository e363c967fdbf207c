//! Numerical identities behind the variance constant: Whittaker integrals,
//! the Mellin recurrence and determinant, the Rankin-Selberg residue chain,
//! and the K-type ladder.
//!
//!     cargo run --example identities -- 0.5 1 2

use gvlab::variance::{ladder_ratio, rankin_identity_suite, v_sym_discrete, v_sym_spherical, LadderSpec};
use num_complex::Complex64;

fn main() -> gvlab::Result<()> {
    let rs: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    for r in if rs.is_empty() { vec![0.5, 1.0, 2.0] } else { rs } {
        let rep = rankin_identity_suite(r)?;
        println!("r = {r}");
        for c in &rep.checks {
            println!("  {:14} {:+.15e} {:+.15e}i   residual {:.1e}", c.name, c.computed.re, c.computed.im, c.residual());
        }
    }

    let spec = LadderSpec::Spherical { s: Complex64::new(0.0, 4.76) };
    let row: Vec<String> = (0..=16).step_by(2).map(|n| format!("{:.4}", ladder_ratio(spec, n).unwrap())).collect();
    println!("spherical ladder, s = 4.76i: {}", row.join(" "));
    let spec = LadderSpec::Discrete { m0: 12 };
    let row: Vec<String> = (12..=28).step_by(2).map(|n| format!("{:.5}", ladder_ratio(spec, n).unwrap().re)).collect();
    println!("discrete ladder, m0 = 12:     {}", row.join(" "));
    for w in [12, 16, 18, 20] {
        println!("V_sym(weight {w}) = {:.12}", v_sym_discrete(w));
    }
    println!("V_sym(R = 13.7798, norm 1) = {:.12}", v_sym_spherical(13.779751351890, 1.0));
    Ok(())
}
