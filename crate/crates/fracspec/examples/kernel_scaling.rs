//! Covariance-kernel sanity checks: the scaling identities
//! `K_beta(sT, tT) = T^{2H} K_{beta T}(s, t)` (fOU) and
//! `K(sT, tT) = T^{2H+2} K(s, t)` (ifBm), and agreement between the two
//! independent fOU evaluation routes (closed form vs integration by parts)
//! where both exist.
//!
//! ```sh
//! cargo run --example kernel_scaling
//! ```

use fracspec::kernels::{check_scaling, cov_fou, cov_fou_by_parts, cov_ifbm};
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    println!("scaling-identity violations (max over a 16x16 grid):");
    for (label, spec, horizon) in [
        ("fOU  H=0.75 beta=-1, T=2.0", ProcessSpec::fou(0.75, -1.0)?, 2.0),
        ("fOU  H=0.60 beta=+0.5, T=1.7", ProcessSpec::fou(0.6, 0.5)?, 1.7),
        ("ifBm H=0.60, T=0.5", ProcessSpec::ifbm(0.6)?, 0.5),
        ("fBm  H=0.30, T=3.0", ProcessSpec::fbm(0.3)?, 3.0),
    ] {
        let violation = check_scaling(&spec, horizon, 16)?;
        println!("  {label}: {violation:.3e}");
    }

    println!("\nfOU closed form vs integration-by-parts quadrature:");
    for (s, t) in [(0.35, 0.8), (0.5, 0.5), (0.9, 0.15)] {
        let closed = cov_fou(s, t, 0.75, -1.0)?;
        let parts = cov_fou_by_parts(s, t, 0.75, -1.0)?;
        println!(
            "  K({s}, {t}) = {closed:.10}  (routes differ by {:.2e})",
            (closed - parts).abs()
        );
    }

    println!("\nintegrated-fBm closed form spot values:");
    for &(s, t, h) in &[(1.0, 1.0, 0.5), (0.5, 0.5, 0.75), (0.25, 0.9, 0.25)] {
        println!("  K({s}, {t}; H={h}) = {:.10}", cov_ifbm(s, t, h)?);
    }
    Ok(())
}
