//! Second-order eigenvalue asymptotics and boundary-layer eigenfunction
//! approximations.
//!
//! Frequencies follow
//!
//! ```text
//! nu_n = (n - 1/2) pi + (1 - 2H) pi/4 + { arctan(ell_H)   fBm, fOU
//!                                       { arctan(Delta(H)) integrated fBm
//! ```
//!
//! and eigenvalues are `sin(pi H) Gamma(2H+1)` times `nu^{-2H-1}` (fBm),
//! `nu^{1-2H}/(nu^2 + beta^2)` (fOU) or `nu^{-2H-3}` (integrated fBm).
//!
//! Eigenfunctions are normalized so that the endpoint value carries the sign
//! `(-1)^n`, matching the discretized solver's convention; with that choice
//! the oscillatory and boundary-layer terms below are mutually consistent
//! with the endpoint and mean functionals, which fixes the printed sign of
//! each term.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{ProcessKind, ProcessSpec};
use crate::specfun::gamma_fn;

use super::constants::{constants_for, ProcessConstants};
use super::layer::BoundaryLayerDensity;

fn check_index(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("eigenpair indices are 1-based".into()));
    }
    Ok(())
}

fn parity(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn spectral_prefactor(h: f64) -> Result<f64> {
    Ok((PI * h).sin() * gamma_fn(2.0 * h + 1.0)?)
}

/// Second-order frequency `nu_n` (residual dropped).
pub fn nu_asym(spec: &ProcessSpec, n: usize) -> Result<f64> {
    check_index(n)?;
    let h = spec.hurst();
    let c = constants_for(spec)?;
    let shift = match spec.kind() {
        ProcessKind::Fbm | ProcessKind::Fou => c.ell_h.atan(),
        ProcessKind::Ifbm => c.delta.atan(),
    };
    Ok((n as f64 - 0.5) * PI + (1.0 - 2.0 * h) * PI / 4.0 + shift)
}

/// Eigenvalue from the second-order frequency.
pub fn lambda_asym(spec: &ProcessSpec, n: usize) -> Result<f64> {
    let nu = nu_asym(spec, n)?;
    lambda_from_nu(spec, nu)
}

/// The spectral map `nu -> lambda` for the given process.
pub fn lambda_from_nu(spec: &ProcessSpec, nu: f64) -> Result<f64> {
    let h = spec.hurst();
    let c = spectral_prefactor(h)?;
    Ok(match spec.kind() {
        ProcessKind::Fbm => c * nu.powf(-2.0 * h - 1.0),
        ProcessKind::Fou => {
            let beta = spec.drift();
            c * nu.powf(1.0 - 2.0 * h) / (nu * nu + beta * beta)
        }
        ProcessKind::Ifbm => c * nu.powf(-2.0 * h - 3.0),
    })
}

/// One closed-form pair.
#[derive(Clone, Copy, Debug)]
pub struct AsymEigenpair {
    pub n: usize,
    pub nu: f64,
    pub lambda: f64,
}

pub fn asym_pairs(spec: &ProcessSpec, n_max: usize) -> Result<Vec<AsymEigenpair>> {
    (1..=n_max)
        .map(|n| {
            Ok(AsymEigenpair {
                n,
                nu: nu_asym(spec, n)?,
                lambda: lambda_asym(spec, n)?,
            })
        })
        .collect()
}

/// Leading endpoint value `phi_n(1) = (-1)^n sqrt(2H+1)` (fBm/fOU) or
/// `(-1)^n sqrt(2H+3)` (integrated fBm).
pub fn endpoint_value(spec: &ProcessSpec, n: usize) -> Result<f64> {
    check_index(n)?;
    let h = spec.hurst();
    let amp = match spec.kind() {
        ProcessKind::Fbm | ProcessKind::Fou => (2.0 * h + 1.0).sqrt(),
        ProcessKind::Ifbm => (2.0 * h + 3.0).sqrt(),
    };
    Ok(parity(n) * amp)
}

/// Leading value of `int_0^1 phi_n(x) dx`.
pub fn mean_functional(spec: &ProcessSpec, n: usize) -> Result<f64> {
    check_index(n)?;
    let nu = nu_asym(spec, n)?;
    let c = constants_for(spec)?;
    let h = spec.hurst();
    let amp = match spec.kind() {
        ProcessKind::Fbm | ProcessKind::Fou => (2.0 * h + 1.0).sqrt(),
        ProcessKind::Ifbm => (2.0 * h + 3.0).sqrt(),
    };
    Ok(amp * c.c_mean / nu)
}

/// Fitted amplitudes and phases of the exponential boundary layer of
/// integrated fBm with `H > 1/2`. The decay and oscillation rates
/// `c_exp nu_n`, `s_exp nu_n` are exact; the four constants here are
/// least-squares estimates per `(n, H)`, not closed-form values.
#[derive(Clone, Copy, Debug)]
pub struct ExpLayerFit {
    pub amp0: f64,
    pub phase0: f64,
    pub amp1: f64,
    pub phase1: f64,
}

/// Eigenfunction approximation built from the oscillatory term and the
/// polynomial boundary layer, with the layer density cached per process.
pub struct EigenfunApprox {
    spec: ProcessSpec,
    constants: ProcessConstants,
    layer: BoundaryLayerDensity,
    amp: f64,
}

impl EigenfunApprox {
    pub fn new(spec: &ProcessSpec) -> Result<Self> {
        let constants = constants_for(spec)?;
        let layer = BoundaryLayerDensity::new(spec)?;
        let h = spec.hurst();
        let amp = match spec.kind() {
            ProcessKind::Fbm | ProcessKind::Fou => (2.0 * h + 1.0).sqrt(),
            ProcessKind::Ifbm => (2.0 * h + 3.0).sqrt(),
        };
        Ok(Self {
            spec: *spec,
            constants,
            layer,
            amp,
        })
    }

    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }

    pub fn constants(&self) -> &ProcessConstants {
        &self.constants
    }

    pub fn layer_density(&self) -> &BoundaryLayerDensity {
        &self.layer
    }

    /// The oscillatory term alone.
    pub fn oscillatory(&self, n: usize, x: f64) -> Result<f64> {
        check_index(n)?;
        let nu = nu_asym(&self.spec, n)?;
        let h = self.spec.hurst();
        Ok(match self.spec.kind() {
            ProcessKind::Fbm | ProcessKind::Fou => {
                let phase = (2.0 * h - 1.0) * PI / 8.0 - self.constants.ell_h.atan();
                -(2.0_f64).sqrt() * (nu * x + phase).sin()
            }
            ProcessKind::Ifbm => {
                let phase = (2.0 * h + 1.0) * PI / 8.0 - self.constants.delta.atan();
                (2.0_f64).sqrt() * (nu * x + phase).cos()
            }
        })
    }

    /// The polynomial boundary-layer term alone.
    pub fn layer_term(&self, n: usize, x: f64) -> Result<f64> {
        check_index(n)?;
        let nu = nu_asym(&self.spec, n)?;
        let left = self.layer.integral_q0(nu * x);
        let right = self.layer.integral_q1(nu * (1.0 - x));
        Ok(-self.amp / PI * (left - parity(n) * right))
    }

    /// Oscillatory term plus polynomial layer; the exponential layer of
    /// integrated fBm with `H > 1/2` is not included (see
    /// [`Self::fit_exp_layer`]).
    pub fn value(&self, n: usize, x: f64) -> Result<f64> {
        Ok(self.oscillatory(n, x)? + self.layer_term(n, x)?)
    }

    /// Evaluate the exponential layer with fitted amplitudes.
    pub fn exp_layer(&self, fit: &ExpLayerFit, n: usize, x: f64) -> Result<f64> {
        check_index(n)?;
        let nu = nu_asym(&self.spec, n)?;
        let c = self.constants.c_exp;
        let s = self.constants.s_exp;
        Ok(fit.amp0 * (-c * nu * x).exp() * (s * nu * x + fit.phase0).cos()
            + fit.amp1 * (-c * nu * (1.0 - x)).exp() * (s * nu * (1.0 - x) + fit.phase1).cos())
    }

    /// Least-squares fit of the exponential-layer template to the residual
    /// `numeric - (oscillatory + polynomial layer)` sampled at `xs`.
    /// Only meaningful for integrated fBm with `H > 1/2`.
    pub fn fit_exp_layer(&self, n: usize, xs: &[f64], numeric: &[f64]) -> Result<ExpLayerFit> {
        if self.spec.kind() != ProcessKind::Ifbm || self.spec.hurst() <= 0.5 {
            return Err(Error::Domain(
                "the exponential layer exists only for integrated fBm with H > 1/2".into(),
            ));
        }
        if xs.len() != numeric.len() || xs.len() < 8 {
            return Err(Error::Invalid(
                "exponential-layer fit needs matching sample arrays of length >= 8".into(),
            ));
        }
        let nu = nu_asym(&self.spec, n)?;
        let c = self.constants.c_exp;
        let s = self.constants.s_exp;

        // Linear model: e^{-c nu x}(a0 cos(s nu x) + b0 sin(s nu x)) + mirrored.
        let rows = xs.len();
        let mut design = nalgebra::DMatrix::<f64>::zeros(rows, 4);
        let mut rhs = nalgebra::DVector::<f64>::zeros(rows);
        for (i, (&x, &num)) in xs.iter().zip(numeric).enumerate() {
            let d0 = (-c * nu * x).exp();
            let d1 = (-c * nu * (1.0 - x)).exp();
            design[(i, 0)] = d0 * (s * nu * x).cos();
            design[(i, 1)] = d0 * (s * nu * x).sin();
            design[(i, 2)] = d1 * (s * nu * (1.0 - x)).cos();
            design[(i, 3)] = d1 * (s * nu * (1.0 - x)).sin();
            rhs[i] = num - self.value(n, x)?;
        }
        let normal = design.transpose() * &design;
        let moment = design.transpose() * rhs;
        let coef = normal
            .lu()
            .solve(&moment)
            .ok_or_else(|| Error::Invalid("singular normal equations in layer fit".into()))?;
        Ok(ExpLayerFit {
            amp0: coef[0].hypot(coef[1]),
            phase0: (-coef[1]).atan2(coef[0]),
            amp1: coef[2].hypot(coef[3]),
            phase1: (-coef[3]).atan2(coef[2]),
        })
    }
}

/// One-off eigenfunction evaluation. Building the layer cache dominates the
/// cost; use [`EigenfunApprox`] directly when evaluating on a grid.
pub fn eigfun_asym(spec: &ProcessSpec, n: usize, x: f64) -> Result<f64> {
    EigenfunApprox::new(spec)?.value(n, x)
}
