//! Print every closed-form constant the asymptotic formulas use, for one
//! process of each kind, and re-verify the two routes to the frequency
//! correction `Delta` against each other.
//!
//! ```sh
//! cargo run --example process_constants
//! ```

use fracspec::asymptotics::{constants_for, delta_two_forms};
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    let specs = [
        ("fBm  H=0.75", ProcessSpec::fbm(0.75)?),
        ("fOU  H=0.75 beta=-1", ProcessSpec::fou(0.75, -1.0)?),
        ("ifBm H=0.25", ProcessSpec::ifbm(0.25)?),
        ("ifBm H=0.75", ProcessSpec::ifbm(0.75)?),
    ];
    for (label, spec) in specs {
        let c = constants_for(&spec)?;
        println!("== {label} ==");
        println!("  alpha       = {:+.12}", c.alpha);
        println!("  ell_H       = {:+.12}", c.ell_h);
        println!("  b_alpha     = {:+.12}", c.b_alpha);
        println!("  b0, b1, b2  = {:+.12}, {:+.12}, {:+.12}", c.b0, c.b1, c.b2);
        println!("  sigma1,2    = {:+.12}, {:+.12}", c.sigma1, c.sigma2);
        println!("  Delta       = {:+.12}", c.delta);
        println!("  c_exp,s_exp = {:+.12}, {:+.12}", c.c_exp, c.s_exp);
        println!("  c_mean      = {:+.12}", c.c_mean);
        if let Some(aux) = c.aux {
            println!("  A1,B1       = {:+.12}, {:+.12}", aux.a1, aux.b1);
            println!("  A2,B2       = {:+.12}, {:+.12}", aux.a2, aux.b2);
            println!("  A3,B3       = {:+.12}, {:+.12}", aux.a3, aux.b3);
        }
    }

    println!("\nDelta, two closed-form routes (must agree):");
    for alpha in [0.3, 0.8, 1.2, 1.7] {
        let (hurst_form, ab_form) = delta_two_forms(alpha)?;
        println!(
            "  alpha={alpha:4}: {hurst_form:+.14}  {ab_form:+.14}  |diff|={:.2e}",
            (hurst_form - ab_form).abs()
        );
    }
    Ok(())
}
