//! Closed-form second-order spectral asymptotics: frequencies, eigenvalues,
//! boundary-layer eigenfunction approximations, endpoint and mean
//! functionals, and every Hurst-dependent constant they reference.

mod constants;
mod eigenfun;
mod layer;

pub use constants::{constants_for, delta_two_forms, AuxAb, ProcessConstants};
pub use eigenfun::{
    asym_pairs, eigfun_asym, endpoint_value, lambda_asym, lambda_from_nu, mean_functional,
    nu_asym, AsymEigenpair, EigenfunApprox, ExpLayerFit,
};
pub use layer::{q_polynomials, BoundaryLayerDensity};

use crate::error::Result;
use crate::kernels::ProcessSpec;

/// Limit phase `theta0(u)` for the given process.
pub fn theta0(spec: &ProcessSpec, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(crate::error::Error::Domain(format!(
            "theta0 needs u > 0, got {u}"
        )));
    }
    Ok(layer::theta0_of(spec.kind(), spec.alpha(), u))
}

/// Canonical Riemann-problem factor `X0(-u)` evaluated by quadrature.
pub fn x0_at(spec: &ProcessSpec, u: f64) -> Result<f64> {
    layer::x0_neg_of(spec.kind(), spec.alpha(), u)
}

/// The complex value `X0(i)` as `(argument, modulus)`.
pub fn x0_at_i(spec: &ProcessSpec) -> Result<(f64, f64)> {
    layer::x0_at_i_of(spec.kind(), spec.alpha())
}

/// Boundary-layer density `rho0(u)`.
pub fn rho0(spec: &ProcessSpec, u: f64) -> Result<f64> {
    layer::rho0_of(spec.kind(), spec.alpha(), u)
}
