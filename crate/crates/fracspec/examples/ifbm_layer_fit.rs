//! Integrated fBm with H > 1/2 has a two-scale boundary layer: a polynomial
//! part with explicit density, and an exponentially decaying oscillating
//! part whose rates `cos(phi) nu_n`, `sin(phi) nu_n` are known in closed
//! form while its amplitudes and phases are not. This example fits those
//! amplitudes per eigenfunction by least squares against a discretized
//! solve, and shows how much of the residual they explain.
//!
//! ```sh
//! cargo run --example ifbm_layer_fit
//! ```

use fracspec::asymptotics::EigenfunApprox;
use fracspec::nystrom::{solve, vector_to_function, NystromGrid};
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    let spec = ProcessSpec::ifbm(0.75)?;
    let l = 1200;
    let grid = NystromGrid::new(l)?;
    let k = 8;
    let estimates = solve(&spec, &grid, k, 1e-10)?;
    let approx = EigenfunApprox::new(&spec)?;
    let xs: Vec<f64> = grid.nodes().collect();

    println!("ifBm, H = 0.75, L = {l}; exponential-layer fit per eigenfunction");
    println!(
        "{:>3} {:>12} {:>12} {:>9} {:>9} {:>9} {:>9}",
        "n", "sup pre-fit", "sup postfit", "amp0", "phase0", "amp1", "phase1"
    );
    for n in 4..=k {
        let phi = vector_to_function(&estimates[n - 1].vector, &grid, n);
        let mut pre = 0.0_f64;
        for (&x, &v) in xs.iter().zip(&phi) {
            pre = pre.max((v - approx.value(n, x)?).abs());
        }
        let fit = approx.fit_exp_layer(n, &xs, &phi)?;
        let mut post = 0.0_f64;
        for (&x, &v) in xs.iter().zip(&phi) {
            let full = approx.value(n, x)? + approx.exp_layer(&fit, n, x)?;
            post = post.max((v - full).abs());
        }
        println!(
            "{n:>3} {pre:>12.5} {post:>12.5} {:>9.4} {:>9.4} {:>9.4} {:>9.4}",
            fit.amp0, fit.phase0, fit.amp1, fit.phase1
        );
    }
    println!("\n(the fitted amplitudes are estimates, not closed-form constants)");
    Ok(())
}
