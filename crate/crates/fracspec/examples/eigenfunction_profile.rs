//! One eigenfunction three ways: discretized solver samples, the
//! closed-form approximation (oscillatory + boundary layer), and the
//! oscillatory term alone. The difference between the last two columns is
//! the boundary layer, which pushes the values to 0 at x = 0 and to
//! (-1)^n sqrt(2H+1) at x = 1.
//!
//! ```sh
//! cargo run --example eigenfunction_profile
//! ```

use fracspec::asymptotics::EigenfunApprox;
use fracspec::nystrom::{solve, vector_to_function, NystromGrid};
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    let spec = ProcessSpec::fou(0.75, -1.0)?;
    let n = 10;
    let l = 2000;
    let grid = NystromGrid::new(l)?;
    let estimates = solve(&spec, &grid, n, 1e-10)?;
    let phi = vector_to_function(&estimates[n - 1].vector, &grid, n);
    let approx = EigenfunApprox::new(&spec)?;

    println!("fOU, H = 0.75, beta = -1, eigenfunction n = {n}, L = {l}");
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "numeric", "asymptotic", "osc_only");
    let mut sup = 0.0_f64;
    for j in 0..=40 {
        let x = j as f64 / 40.0;
        let i = (x * l as f64).round() as usize;
        let asym = approx.value(n, x)?;
        println!(
            "{x:>6.3} {:>12.6} {asym:>12.6} {:>12.6}",
            phi[i],
            approx.oscillatory(n, x)?
        );
        sup = sup.max((phi[i] - asym).abs());
    }
    println!("\nsup |numeric - asymptotic| over the printed grid: {sup:.4}");
    println!(
        "endpoint target (-1)^n sqrt(2H+1) = {:+.6}",
        fracspec::asymptotics::endpoint_value(&spec, n)?
    );
    Ok(())
}
