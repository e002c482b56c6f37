//! Closed-form constants entering the second-order spectral asymptotics.
//!
//! Two families of `b`-constants occur. The Hurst-parameterized family
//!
//! ```text
//! b0 = sin((pi/2)(H+1/2)/(H+3/2)) / sin((pi/2)/(H+3/2)),  b1 = 1/2,
//! b2 = (1/3) sin((3pi/2)(H+1/2)/(H+3/2)) / sin((3pi/2)/(H+3/2))
//! ```
//!
//! feeds the frequency correction `Delta(H)` for integrated fBm and agrees
//! with the moments `(1/pi) int u^k theta0(u) du` of the limit phase on the
//! `H < 1/2` branch. On the `H > 1/2` branch those moments are instead
//!
//! ```text
//! b_k = -1/(k+1) sin((k+1)(1+alpha)/2 * pi/(5-alpha)) / sin((k+1) pi/(5-alpha))
//! ```
//!
//! and build the A/B auxiliaries of the boundary-layer polynomials. The two
//! routes to `Delta` are proved equal; [`delta_two_forms`] evaluates both so
//! the identity can be re-checked numerically.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::kernels::{ProcessKind, ProcessSpec};

/// Auxiliary constants of the `H > 1/2` integrated-fBm branch, built from the
/// phase-moment constants and `phi = (pi/2)(1-alpha)/(5-alpha)`.
#[derive(Clone, Copy, Debug)]
pub struct AuxAb {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub a3: f64,
    pub b3: f64,
}

/// Every Hurst-dependent constant the asymptotic formulas reference,
/// computed once per process specification.
#[derive(Clone, Copy, Debug)]
pub struct ProcessConstants {
    pub alpha: f64,
    /// Frequency-shift constant of the fBm/fOU branch.
    pub ell_h: f64,
    /// Limit value of the phase integral `(1/pi) int theta0`.
    pub b_alpha: f64,
    /// Branch `b`-constants (see module docs).
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    /// Frequency correction for integrated fBm.
    pub delta: f64,
    /// `sigma1 = b0^2/2 + b1`, `sigma2 = b0^3/6 + b0 b1 + b2`.
    pub sigma1: f64,
    pub sigma2: f64,
    /// Exponential-layer rates `cos(phase_angle)`, `sin(phase_angle)` for
    /// `H > 1/2`; the layer vanishes otherwise and the rates degenerate to
    /// (1, 0).
    pub c_exp: f64,
    pub s_exp: f64,
    /// `(pi/2)(1-alpha)/(5-alpha)`.
    pub phase_angle: f64,
    /// A/B auxiliaries, populated only for integrated fBm with `H > 1/2`.
    pub aux: Option<AuxAb>,
    /// Leading constant of `int_0^1 phi_n`, normalized so that the mean is
    /// `nu_n^{-1} sqrt(2H+1) c_mean` (fBm/fOU) or `nu_n^{-1} sqrt(2H+3) c_mean`
    /// (integrated fBm).
    pub c_mean: f64,
}

pub(crate) fn ell_h(h: f64) -> f64 {
    (FRAC_PI_2 * (h - 0.5) / (h + 0.5)).sin() / (FRAC_PI_2 / (h + 0.5)).sin()
}

pub(crate) fn b_alpha_closed(alpha: f64) -> f64 {
    (PI / (3.0 - alpha) * (1.0 - alpha) / 2.0).sin() / (PI / (3.0 - alpha)).sin()
}

/// Hurst-parameterized constants (valid for every `H` in (0,1)).
pub(crate) fn b_hurst(h: f64) -> (f64, f64, f64) {
    let b0 = (FRAC_PI_2 * (h + 0.5) / (h + 1.5)).sin() / (FRAC_PI_2 / (h + 1.5)).sin();
    let b1 = 0.5;
    let b2 = (1.5 * PI * (h + 0.5) / (h + 1.5)).sin() / (1.5 * PI / (h + 1.5)).sin() / 3.0;
    (b0, b1, b2)
}

/// Phase moments on the `H > 1/2` integrated-fBm branch (`alpha` in (0,1)).
pub(crate) fn b_alpha_branch(alpha: f64) -> (f64, f64, f64) {
    let bk = |k: f64| {
        -((k + 1.0) * (1.0 + alpha) / 2.0 * PI / (5.0 - alpha)).sin()
            / ((k + 1.0) * PI / (5.0 - alpha)).sin()
            / (k + 1.0)
    };
    (bk(0.0), bk(1.0), bk(2.0))
}

pub(crate) fn delta_from_b(b0: f64, b1: f64, b2: f64) -> f64 {
    (b0.powi(3) / 3.0 - b2)
        / (b1 - b1 * b1 + b0 * b0 / 2.0 + b2 * b0 - b0.powi(4) / 12.0)
}

fn sigmas(b0: f64, b1: f64, b2: f64) -> (f64, f64) {
    (b0 * b0 / 2.0 + b1, b0.powi(3) / 6.0 + b0 * b1 + b2)
}

pub(crate) fn aux_ab(alpha: f64) -> AuxAb {
    let (b0, b1, b2) = b_alpha_branch(alpha);
    let (s1, s2) = sigmas(b0, b1, b2);
    let phi = FRAC_PI_2 * (1.0 - alpha) / (5.0 - alpha);
    let c = |k: f64| (k * phi).cos();
    let s = |k: f64| (k * phi).sin();
    let a1 = s1 * c(1.0) + b0 * c(2.0) + c(3.0);
    let b1x = s2 * c(1.0) + s1 * c(2.0) + b0 * c(3.0) + c(4.0);
    let a2 = s1 * s(1.0) + b0 * s(2.0) + s(3.0);
    let b2x = s2 * s(1.0) + s1 * s(2.0) + b0 * s(3.0) + s(4.0);
    let a3 = a1 * b2x - a2 * b1x - a2 * (s1 - 1.0) + b2x * b0;
    let b3 = a2 * (s2 - b0) - b2x * (s1 - 1.0);
    AuxAb {
        a1,
        b1: b1x,
        a2,
        b2: b2x,
        a3,
        b3,
    }
}

/// Both closed forms of the frequency-correction constant `Delta`:
/// the Hurst-parameterized form and the A/B form of the `H > 1/2` branch.
/// They coincide for all `alpha` in (0, 2) away from 1.
pub fn delta_two_forms(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 2), got {alpha}")));
    }
    if alpha == 1.0 {
        return Err(Error::Domain("alpha = 1 degenerates both forms to 0/0".into()));
    }
    let h = 1.0 - alpha / 2.0;
    let (d0, d1, d2) = b_hurst(h);
    let hurst_form = delta_from_b(d0, d1, d2);
    let aux = aux_ab(alpha);
    Ok((hurst_form, aux.a3 / aux.b3))
}

/// All constants for one process specification.
pub fn constants_for(spec: &ProcessSpec) -> Result<ProcessConstants> {
    let h = spec.hurst();
    let alpha = spec.alpha();
    let ell = ell_h(h);
    let b_alpha = b_alpha_closed(alpha);
    let phase_angle = FRAC_PI_2 * (1.0 - alpha) / (5.0 - alpha);

    let ifbm_high = spec.kind() == ProcessKind::Ifbm && h > 0.5;
    let (b0, b1, b2) = if ifbm_high {
        b_alpha_branch(alpha)
    } else {
        b_hurst(h)
    };
    let (sigma1, sigma2) = sigmas(b0, b1, b2);
    let (dh0, dh1, dh2) = b_hurst(h);
    let delta = delta_from_b(dh0, dh1, dh2);

    let (c_exp, s_exp) = if h > 0.5 {
        (phase_angle.cos(), phase_angle.sin())
    } else {
        (1.0, 0.0)
    };
    let aux = ifbm_high.then(|| aux_ab(alpha));

    let c_mean = match spec.kind() {
        ProcessKind::Fbm | ProcessKind::Fou => -1.0 / (1.0 + ell * ell).sqrt(),
        ProcessKind::Ifbm if h == 0.5 => 0.0,
        ProcessKind::Ifbm if h < 0.5 => {
            delta / (delta * delta + 1.0).sqrt() * sigma2 / (sigma2 - b0 * sigma1)
        }
        ProcessKind::Ifbm => {
            let a = aux.expect("aux present on the H > 1/2 branch");
            -(a.b2 / a.a2) * 2.0 * phase_angle.cos() / a.a3.hypot(a.b3)
        }
    };

    Ok(ProcessConstants {
        alpha,
        ell_h: ell,
        b_alpha,
        b0,
        b1,
        b2,
        delta,
        sigma1,
        sigma2,
        c_exp,
        s_exp,
        phase_angle,
        aux,
        c_mean,
    })
}
