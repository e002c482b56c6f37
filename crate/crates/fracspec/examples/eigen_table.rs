//! Numerical versus asymptotic eigenvalues for the fractional
//! Ornstein-Uhlenbeck study case (H = 3/4, beta = -1): the discretized
//! operator's spectrum against the second-order closed forms, with relative
//! errors in percent.
//!
//! ```sh
//! cargo run --example eigen_table
//! ```
//!
//! L = 2000 keeps this to a couple of seconds; push L to 10^4 to reproduce
//! the stable printed digits of the reference table.

use fracspec::nystrom::compare;
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    let spec = ProcessSpec::fou(0.75, -1.0)?;
    let l = 2000;
    let rows = compare(&spec, l, 10)?;

    println!("fOU, H = 0.75, beta = -1, L = {l}");
    println!(
        "{:>3} {:>14} {:>12} {:>14} {:>12} {:>10} {:>10}",
        "n", "lambda_hat", "nu_hat", "lambda_tilde", "nu_tilde", "err_l(%)", "err_nu(%)"
    );
    for r in rows {
        println!(
            "{:>3} {:>14.8e} {:>12.6} {:>14.8e} {:>12.6} {:>10.2} {:>10.2}",
            r.n,
            r.lambda_hat,
            r.nu_hat,
            r.lambda_tilde,
            r.nu_tilde,
            r.rel_err_lambda * 100.0,
            r.rel_err_nu * 100.0
        );
    }
    Ok(())
}
