//! The closed geodesic attached to a form: its hyperbolic matrix, endpoints,
//! and how it winds through the fundamental domain.
//!
//!     cargo run --example geodesics

use gvlab::geodesics::{form_of_matrix, geodesic_arc, matrix_of_form, reduce_to_fundamental_domain};
use gvlab::qforms::{pell_fundamental, QuadForm};

fn main() -> gvlab::Result<()> {
    for (q, d) in [(QuadForm::new(1, 1, -1), 5), (QuadForm::new(2, 2, -1), 12), (QuadForm::new(2, 2, -2), 20)] {
        let arc = geodesic_arc(&q, d)?;
        let g = matrix_of_form(&q.primitive_part().0, &pell_fundamental(q.primitive_part().0.disc_i64()?)?)?;
        let (rep, att) = arc.endpoints();
        println!("{q} at d = {d}: gamma = {g:?}, trace {}", g.trace());
        println!("  endpoints {rep:.12} -> {att:.12}, flow length {:.12}", arc.flow_length);
        println!("  form of gamma: {}", form_of_matrix(&g)?);
        let steps = 8;
        for i in 0..=steps {
            let t = arc.flow_length * i as f64 / steps as f64;
            let z = arc.point_at(t);
            let (w, _) = reduce_to_fundamental_domain(z);
            println!("  t = {t:8.4}  z = {:+.6} {:+.6}i  reduced {:+.6} {:+.6}i", z.re, z.im, w.re, w.im);
        }
        // after one period the flow returns to the same point of the quotient
        let (a, _) = reduce_to_fundamental_domain(arc.point_at(0.3));
        let (b, _) = reduce_to_fundamental_domain(arc.point_at(0.3 + arc.flow_length));
        println!("  closure error {:.2e}", (a - b).norm());
    }
    Ok(())
}
