//! Central values of L-functions, each from two cutoffs of an approximate
//! functional equation whose difference is the error bar.
//!
//!     cargo run --example lvalues

use std::path::Path;

use gvlab::lfun::{central_value_holomorphic, central_value_twisted, coefficients_needed, completed_central_maass};
use gvlab::modforms::{holomorphic_eigenform, load_maass_form, SUPPORTED_WEIGHTS};
use gvlab::qforms::is_discriminant;

fn main() -> gvlab::Result<()> {
    for w in SUPPORTED_WEIGHTS {
        let f = holomorphic_eigenform(w, coefficients_needed(w, 1))?;
        let l = central_value_holomorphic(&f)?;
        println!("L(1/2, f_{w}) = {:.15} +- {:.1e}  [{}]", l.value, l.error_estimate, l.method);
    }
    let f = holomorphic_eigenform(12, coefficients_needed(12, 60))?;
    println!("twists of Delta:");
    for d in (5..=60).filter(|&d| is_discriminant(d).fundamental) {
        let l = central_value_twisted(&f, d)?;
        println!("  d = {d:3}: {:.12} +- {:.1e}", l.value, l.error_estimate);
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["maass_even_13.78.txt", "maass_odd_9.53.txt"] {
        let phi = load_maass_form(&dir.join(name))?;
        let l = completed_central_maass(&phi)?;
        println!("Lambda(1/2) for R = {:.6}: {:.6e} +- {:.1e} [{}]", phi.spectral_r, l.value, l.error_estimate, l.method);
    }
    Ok(())
}
