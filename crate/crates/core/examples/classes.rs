//! Classes of indefinite binary quadratic forms, their reduction cycles and
//! the fundamental solution of the Pell equation.
//!
//!     cargo run --example classes -- 5 12 20 40 1621

use gvlab::qforms::{enumerate_classes, hurwitz_class_number, is_discriminant, pell_fundamental, rho_cycle};

fn main() -> gvlab::Result<()> {
    let discs: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let discs = if discs.is_empty() { vec![5, 12, 20, 40, 145, 1621] } else { discs };
    for d in discs {
        let info = is_discriminant(d);
        if !info.valid {
            println!("{d}: not a positive non-square discriminant");
            continue;
        }
        let pell = pell_fundamental(d)?;
        println!(
            "d = {d}{}: H(d) = {}, t = {}, u = {}, 2 log eps = {:.6}",
            if info.fundamental { " (fundamental)" } else { "" },
            hurwitz_class_number(d)?,
            pell.t,
            pell.u,
            pell.length()
        );
        for rep in enumerate_classes(d)?.reps {
            let cycle: Vec<String> = rho_cycle(&rep.primitive)?.iter().map(|(q, _)| q.to_string()).collect();
            println!("  {}  = {} x {} (disc {}), cycle {}", rep.form, rep.scale, rep.primitive, rep.primitive_disc, cycle.join(" -> "));
        }
    }
    Ok(())
}
