//! Empirical variance of mu_d over discriminants d <= Y against the predicted
//! constant, in both normalizations, with the running mean alongside.
//!
//!     cargo run --release --example variance -- 20000 /tmp/periods.tbl
//!
//! The optional table path caches periods between runs.

use std::path::Path;

use gvlab::modforms::{holomorphic_eigenform, Eigenform};
use gvlab::periods::{BatchOptions, PeriodCache};
use gvlab::variance::{mean_run, variance_csv, variance_run};

fn main() -> gvlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let y: i64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(5000);
    let mut cache = args.next().map(|p| PeriodCache::open(Path::new(&p))).transpose()?;
    let opts = BatchOptions::default();
    let delta = Eigenform::Holomorphic(holomorphic_eigenform(12, 64)?);
    let f16 = Eigenform::Holomorphic(holomorphic_eigenform(16, 64)?);

    let rep = variance_run(&delta, &delta, y, cache.as_mut(), &opts, (None, None))?;
    let t = &rep.targets.0;
    println!("c = {:.6}, L(1/2) = {:.12}, V_sym <f,f> = {:.12e}, dictionary {}", t.c, t.l_half, t.v_sym, t.dictionary);
    print!("{}", variance_csv(&rep));
    println!(
        "last-decade spread: sharp {:.3}, flat {:.3}; block error {:.3}",
        rep.last_decade_spread.0, rep.last_decade_spread.1, rep.block_error
    );

    let cross = variance_run(&delta, &f16, y, cache.as_mut(), &opts, (None, None))?;
    let last = cross.rows.last().unwrap();
    println!("cross term weight 12 x 16 at Y = {}: B / sqrt(T12 T16) = {:+.4}", last.y, last.ratio_flat);

    let m = mean_run(&delta, y, cache.as_mut(), &opts)?;
    println!("partial sums grow like Y^{:.3}; max |S(Y)|/sqrt(Y) = {:.3e}", m.exponent, m.sqrt_constant);
    Ok(())
}
