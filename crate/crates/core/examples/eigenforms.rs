//! Level-one Hecke eigenforms: coefficients, Hecke multiplicativity, Deligne's
//! bound, evaluation and Petersson norms; plus a Maass form from the data files.
//!
//!     cargo run --example eigenforms

use std::path::Path;

use gvlab::modforms::{holomorphic_eigenform, load_maass_form, petersson_norm, Eigenform, SUPPORTED_WEIGHTS};
use num_complex::Complex64;

fn main() -> gvlab::Result<()> {
    let delta = holomorphic_eigenform(12, 200)?;
    let tau: Vec<String> = (1..=10).map(|n| format!("{}", delta.a(n))).collect();
    println!("tau(1..10) = {}", tau.join(", "));
    println!("tau(2) tau(3) - tau(6) = {}", delta.a(2) * delta.a(3) - delta.a(6));
    println!("tau(4) - (tau(2)^2 - 2^11) = {}", delta.a(4) - (delta.a(2).powi(2) - 2f64.powi(11)));

    for w in SUPPORTED_WEIGHTS {
        let f = holomorphic_eigenform(w, 200)?;
        let z = Complex64::new(0.1, 0.9);
        println!(
            "weight {w}: id {}, a(2) = {}, Deligne holds: {}, f(0.1+0.9i) = {:.6e}",
            f.form_id(),
            f.a(2),
            f.deligne_holds(),
            f.eval(z)?
        );
    }
    let n = petersson_norm(&Eigenform::Holomorphic(delta), 12.0)?;
    println!("<Delta, Delta> = {:.15e} (+- {:.1e})", n.value, n.quad_error + n.tail_bound);

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["maass_odd_9.53.txt", "maass_even_13.78.txt"] {
        let phi = load_maass_form(&dir.join(name))?;
        phi.validate()?;
        println!(
            "{}: R = {}, {:?}, {} coefficients, a(2) a(3) - a(6) = {:.1e}",
            phi.form_id(),
            phi.spectral_r,
            phi.parity,
            phi.coeffs.len(),
            phi.coeffs[1] * phi.coeffs[2] - phi.coeffs[5]
        );
    }
    Ok(())
}
