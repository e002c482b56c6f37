//! The second-order frequency approximation is asymptotically exact; this
//! prints the raw error `nu_hat - nu_tilde` over n, whose decay (with its
//! odd/even split from the boundary layer) shows the size of the dropped
//! O(1/n) residual.
//!
//! ```sh
//! cargo run --example nu_error_series
//! ```

use fracspec::nystrom::compare;
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    let spec = ProcessSpec::fou(0.75, -1.0)?;
    let rows = compare(&spec, 2000, 20)?;
    println!("n, nu_hat - nu_tilde, n * (nu_hat - nu_tilde)");
    for r in rows {
        let err = r.nu_hat - r.nu_tilde;
        println!("{:>3}, {:>12.6e}, {:>9.5}", r.n, err, err * r.n as f64);
    }
    Ok(())
}
