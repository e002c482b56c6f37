//! Estimation error of a fractional Ornstein-Uhlenbeck signal in white
//! noise: the eigen-expansion series against the small-noise closed form,
//! over several decades of noise intensity, plus the fitted error-scaling
//! exponent (expected: 2H / (1 + 2H)).
//!
//! ```sh
//! cargo run --example filtering_error
//! ```

use fracspec::filtering::{mmse_asym, mmse_series, rate_exponent, ChannelModel, MmseMode};
use fracspec::ProcessSpec;

fn main() -> fracspec::Result<()> {
    let h = 0.75;
    let signal = ProcessSpec::fou(h, -1.0)?;

    println!("H = {h}, mu = 1, T = 1");
    println!(
        "{:>8} {:>10} {:>13} {:>13} {:>8} {:>8}",
        "eps", "mode", "series", "closed form", "ratio", "terms"
    );
    let mut endpoint_log = Vec::new();
    for k in 3..=9 {
        let eps = 10f64.powi(-k);
        let model = ChannelModel::new(1.0, eps, 1.0, signal)?;
        for (mode, label, x) in [
            (MmseMode::Interior, "interior", 0.5),
            (MmseMode::Endpoint, "endpoint", 1.0),
        ] {
            let series = mmse_series(&model, mode, x, None)?;
            let asym = mmse_asym(&model, mode)?;
            println!(
                "{eps:>8.0e} {label:>10} {:>13.6e} {:>13.6e} {:>8.4} {:>8}",
                series.value,
                asym.value,
                series.value / asym.value,
                series.n_terms.unwrap_or(0)
            );
            if mode == MmseMode::Endpoint {
                endpoint_log.push((eps.ln(), series.value.ln()));
            }
        }
    }

    let n = endpoint_log.len() as f64;
    let sx: f64 = endpoint_log.iter().map(|p| p.0).sum();
    let sy: f64 = endpoint_log.iter().map(|p| p.1).sum();
    let sxx: f64 = endpoint_log.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = endpoint_log.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    println!(
        "\nfitted log-log slope: {slope:.5}   (2H/(1+2H) = {:.5})",
        rate_exponent(h)
    );
    Ok(())
}
