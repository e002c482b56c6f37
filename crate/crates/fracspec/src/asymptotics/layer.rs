//! Boundary-layer machinery: the limit phase `theta0`, the rescaled symbol
//! modulus `gamma0`, the canonical factor `X0(-u)` of the underlying Riemann
//! problem, the layer density `rho0`, and the layer polynomials.
//!
//! The eigenfunction approximations integrate `rho0(t) Q(t) exp(-t nu x)`
//! over (0, inf) once per evaluation point. Direct adaptive quadrature with a
//! nested `X0` integral per sample would be prohibitively slow, so the
//! density is tabulated once on fixed log-spaced Gauss-Legendre panels: after
//! construction each layer integral is a dot product against exponential
//! weights.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{ProcessKind, ProcessSpec};
use crate::specfun::{integrate_semiinf, QuadratureSpec, TailDecay};

use super::constants;

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_subdivisions: 4000,
    }
}

/// Limit phase of the symbol argument along the positive axis. The quadrant
/// is tracked through the signed numerator/denominator pair, not the
/// principal arctangent branch.
pub fn theta0_of(kind: ProcessKind, alpha: f64, u: f64) -> f64 {
    let psi = (1.0 - alpha) * PI / 2.0;
    match kind {
        ProcessKind::Fbm | ProcessKind::Fou => psi.sin().atan2(u.powf(3.0 - alpha) + psi.cos()),
        ProcessKind::Ifbm => (-psi.sin()).atan2(u.powf(5.0 - alpha) - psi.cos()),
    }
}

/// Modulus of the rescaled symbol.
pub fn gamma0_of(kind: ProcessKind, alpha: f64, u: f64) -> f64 {
    let psi = (1.0 - alpha) * PI / 2.0;
    match kind {
        ProcessKind::Fbm | ProcessKind::Fou => {
            // |u + u^(alpha-2) e^{i psi}|
            (u * u + 2.0 * u.powf(alpha - 1.0) * psi.cos() + u.powf(2.0 * alpha - 4.0)).sqrt()
        }
        ProcessKind::Ifbm => {
            // |u^2 - u^(alpha-3) e^{i psi}|
            (u.powf(4.0) - 2.0 * u.powf(alpha - 1.0) * psi.cos() + u.powf(2.0 * alpha - 6.0))
                .sqrt()
        }
    }
}

fn theta_tail_power(kind: ProcessKind, alpha: f64) -> f64 {
    match kind {
        ProcessKind::Fbm | ProcessKind::Fou => 3.0 - alpha,
        ProcessKind::Ifbm => 5.0 - alpha,
    }
}

/// `X0(-u) = exp( (1/pi) int_0^inf theta0(s)/(s+u) ds )` by direct
/// quadrature.
pub fn x0_neg_of(kind: ProcessKind, alpha: f64, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("X0(-u) needs u > 0, got {u}")));
    }
    let p = theta_tail_power(kind, alpha) + 1.0;
    let w = integrate_semiinf(
        |s| theta0_of(kind, alpha, s) / (s + u) / PI,
        &quad_spec(),
        TailDecay::Power(p),
    )?;
    Ok(w.exp())
}

/// The complex value `X0(i)` as `(argument, modulus)`, for cross-checking
/// against its closed forms.
pub fn x0_at_i_of(kind: ProcessKind, alpha: f64) -> Result<(f64, f64)> {
    let p = theta_tail_power(kind, alpha) + 1.0;
    let spec = quad_spec();
    // 1/(s - i) = (s + i)/(s^2 + 1)
    let re = integrate_semiinf(
        |s| theta0_of(kind, alpha, s) * s / (s * s + 1.0) / PI,
        &spec,
        TailDecay::Power(p),
    )?;
    let im = integrate_semiinf(
        |s| theta0_of(kind, alpha, s) / (s * s + 1.0) / PI,
        &spec,
        TailDecay::Power(p + 1.0),
    )?;
    Ok((im, re.exp()))
}

/// Layer density `rho0(u)`; sign follows the branch of `theta0`.
pub fn rho0_of(kind: ProcessKind, alpha: f64, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("rho0 needs u > 0, got {u}")));
    }
    let base = theta0_of(kind, alpha, u).sin() / gamma0_of(kind, alpha, u) * x0_neg_of(kind, alpha, u)?;
    Ok(match kind {
        ProcessKind::Fbm | ProcessKind::Fou => base,
        ProcessKind::Ifbm if alpha > 1.0 => base * u,
        ProcessKind::Ifbm => base / u,
    })
}

/// Coefficients (ascending degree) of the two layer polynomials for
/// integrated fBm. `H < 1/2`: quadratic `Q0`, `Q1 = 1`; `H > 1/2`: quartic
/// `Q0` and quadratic `Q1`. No layer exists at `H = 1/2`.
pub fn q_polynomials(hurst: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::Domain(format!("Hurst index out of range: {hurst}")));
    }
    if hurst == 0.5 {
        return Err(Error::Domain(
            "the boundary layer vanishes at H = 1/2; no polynomials exist".into(),
        ));
    }
    let spec = ProcessSpec::ifbm(hurst)?;
    let c = constants::constants_for(&spec)?;
    if hurst < 0.5 {
        let pref = c.delta / (c.delta * c.delta + 1.0).sqrt() * c.sigma1
            / (c.sigma2 - c.b0 * c.sigma1);
        let q0 = vec![
            pref * (c.sigma2 / c.sigma1 * c.b0 - c.sigma1),
            pref * (c.b0 - c.sigma2 / c.sigma1),
            -pref,
        ];
        Ok((q0, vec![1.0]))
    } else {
        let aux = c.aux.expect("aux present for H > 1/2");
        let cph = c.phase_angle.cos();
        let r = aux.b2 / aux.a2;
        let pref = 2.0 * cph / aux.a3.hypot(aux.b3);
        let q0 = vec![
            pref * (aux.a1 * r - aux.b1),
            pref * (r * c.sigma1 - c.sigma2),
            pref * (c.sigma1 - r * c.b0),
            pref * (r - c.b0),
            pref,
        ];
        // s(2phi)/s(phi) = 2 cos(phi)
        let q1 = vec![
            2.0 * cph * cph - (2.0 * c.phase_angle).cos(),
            2.0 * cph,
            1.0,
        ];
        Ok((q0, q1))
    }
}

fn poly_eval(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

// Fixed panel geometry for the cached layer rule.
const PANEL_LO: f64 = 1e-7;
const PANEL_HI: f64 = 1e3;
const PANELS_PER_DECADE: usize = 2;
const GL_POINTS: usize = 20;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// The layer density tabulated on fixed quadrature panels, with the two
/// polynomial weights premultiplied. Immutable after construction; all
/// evaluators are read-only.
pub struct BoundaryLayerDensity {
    kind: ProcessKind,
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    rho_q0: Vec<f64>,
    rho_q1: Vec<f64>,
    q0_coeffs: Vec<f64>,
    q1_coeffs: Vec<f64>,
}

impl BoundaryLayerDensity {
    pub fn new(spec: &ProcessSpec) -> Result<Self> {
        let alpha = spec.alpha();
        let kind = spec.kind();
        let constants = constants::constants_for(spec)?;

        let (q0_coeffs, q1_coeffs) = match kind {
            ProcessKind::Fbm | ProcessKind::Fou => {
                let l = constants.ell_h;
                let scale = (1.0 + l * l).sqrt();
                (vec![-l / scale, 1.0 / scale], vec![1.0])
            }
            ProcessKind::Ifbm if spec.hurst() == 0.5 => (vec![0.0], vec![0.0]),
            ProcessKind::Ifbm => q_polynomials(spec.hurst())?,
        };

        // Log-spaced panels with Gauss-Legendre nodes; resolves both the
        // fractional behaviour of rho0 at the origin and decay factors
        // exp(-c t) for c anywhere from 0 up to ~1e6.
        let decades = (PANEL_HI / PANEL_LO).log10();
        let n_panels = (decades * PANELS_PER_DECADE as f64).round() as usize;
        let ratio = (PANEL_HI / PANEL_LO).powf(1.0 / n_panels as f64);
        let (gl_x, gl_w) = gauss_legendre(GL_POINTS);

        let mut nodes = Vec::with_capacity(n_panels * GL_POINTS);
        let mut weights = Vec::with_capacity(n_panels * GL_POINTS);
        let mut lo = PANEL_LO;
        for _ in 0..n_panels {
            let hi = lo * ratio;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (x, w) in gl_x.iter().zip(&gl_w) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
            lo = hi;
        }

        let brownian = (kind != ProcessKind::Ifbm && alpha == 1.0)
            || (kind == ProcessKind::Ifbm && spec.hurst() == 0.5);
        let mut rho_q0 = vec![0.0; nodes.len()];
        let mut rho_q1 = vec![0.0; nodes.len()];
        if !brownian {
            for (i, &t) in nodes.iter().enumerate() {
                let rho = rho0_of(kind, alpha, t)?;
                rho_q0[i] = rho * poly_eval(&q0_coeffs, t);
                rho_q1[i] = rho * poly_eval(&q1_coeffs, t);
            }
        }

        Ok(Self {
            kind,
            alpha,
            nodes,
            weights,
            rho_q0,
            rho_q1,
            q0_coeffs,
            q1_coeffs,
        })
    }

    pub fn theta0(&self, u: f64) -> f64 {
        theta0_of(self.kind, self.alpha, u)
    }

    pub fn gamma0(&self, u: f64) -> f64 {
        gamma0_of(self.kind, self.alpha, u)
    }

    pub fn x0_neg(&self, u: f64) -> Result<f64> {
        x0_neg_of(self.kind, self.alpha, u)
    }

    pub fn rho0(&self, u: f64) -> Result<f64> {
        rho0_of(self.kind, self.alpha, u)
    }

    pub fn q0_coeffs(&self) -> &[f64] {
        &self.q0_coeffs
    }

    pub fn q1_coeffs(&self) -> &[f64] {
        &self.q1_coeffs
    }

    /// `int_0^inf rho0(t) Q0(t) exp(-c t) dt` from the cached tabulation.
    pub fn integral_q0(&self, c: f64) -> f64 {
        self.integral(&self.rho_q0, c)
    }

    /// `int_0^inf rho0(t) Q1(t) exp(-c t) dt` from the cached tabulation.
    pub fn integral_q1(&self, c: f64) -> f64 {
        self.integral(&self.rho_q1, c)
    }

    fn integral(&self, values: &[f64], c: f64) -> f64 {
        let mut acc = 0.0;
        for ((&t, &w), &v) in self.nodes.iter().zip(&self.weights).zip(values) {
            acc += w * v * (-c * t).exp();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn theta0_limits_and_branches() {
        // fOU: theta0 -> 0 at infinity, -> (1-alpha) pi/2 at the origin
        let a = 0.5;
        assert!(theta0_of(ProcessKind::Fou, a, 1e9).abs() < 1e-12);
        assert_relative_eq!(
            theta0_of(ProcessKind::Fou, a, 1e-12),
            (1.0 - a) * FRAC_PI_2,
            max_relative = 1e-6
        );
        // half-angle identity: arctan(sin x / (1 + cos x)) = x/2 at u = 1
        assert_relative_eq!(
            theta0_of(ProcessKind::Fou, 0.5, 1.0),
            (1.0 - 0.5) * PI / 4.0,
            max_relative = 1e-13
        );
        // ifBm, H < 1/2 (alpha = 1.5): decreasing from (3-alpha) pi/2
        let a = 1.5;
        assert_relative_eq!(
            theta0_of(ProcessKind::Ifbm, a, 1e-9),
            (3.0 - a) * FRAC_PI_2,
            max_relative = 1e-6
        );
        // ifBm, H > 1/2 (alpha = 0.5): increasing from -(1+alpha) pi/2
        let a = 0.5;
        assert_relative_eq!(
            theta0_of(ProcessKind::Ifbm, a, 1e-9),
            -(1.0 + a) * FRAC_PI_2,
            max_relative = 1e-6
        );
        assert!(theta0_of(ProcessKind::Ifbm, a, 1e9).abs() < 1e-12);
    }

    #[test]
    fn phase_moment_integrals_match_closed_forms() {
        let spec = quad_spec();
        // fOU: (1/pi) int theta0 = b_alpha for several Hurst values
        for &h in &[0.25, 0.6, 0.75, 0.9] {
            let a = 2.0 - 2.0 * h;
            let q = integrate_semiinf(
                |u| theta0_of(ProcessKind::Fou, a, u) / PI,
                &spec,
                TailDecay::Power(3.0 - a),
            )
            .unwrap();
            assert!(
                (q - constants::b_alpha_closed(a)).abs() <= 1e-8,
                "H={h}: quadrature {q} vs closed {}",
                constants::b_alpha_closed(a)
            );
        }
        // ifBm moments on both branches
        for &h in &[0.25_f64, 0.75] {
            let a = 2.0 - 2.0 * h;
            let closed = if h < 0.5 {
                constants::b_hurst(h)
            } else {
                constants::b_alpha_branch(a)
            };
            let closed = [closed.0, closed.1, closed.2];
            for (k, &cf) in closed.iter().enumerate() {
                let q = integrate_semiinf(
                    |u| u.powi(k as i32) * theta0_of(ProcessKind::Ifbm, a, u) / PI,
                    &spec,
                    TailDecay::Power(5.0 - a - k as f64),
                )
                .unwrap();
                assert!(
                    (q - cf).abs() <= 1e-7,
                    "H={h}, k={k}: quadrature {q} vs closed {cf}"
                );
            }
        }
    }

    #[test]
    fn x0_at_i_matches_closed_forms() {
        // ifBm H < 1/2: arg = (3-alpha) pi/8, |X0(i)| = sqrt((5-alpha)/2)
        let a = 1.5;
        let (arg, modulus) = x0_at_i_of(ProcessKind::Ifbm, a).unwrap();
        assert!((arg - (3.0 - a) * PI / 8.0).abs() <= 1e-6);
        assert!((modulus - ((5.0 - a) / 2.0).sqrt()).abs() <= 1e-6);

        // ifBm H > 1/2: arg = -(1+alpha) pi/8,
        // |X0(i)| = sqrt((5-alpha)/8) / cos((pi/2)(1-alpha)/(5-alpha))
        let a = 0.5;
        let (arg, modulus) = x0_at_i_of(ProcessKind::Ifbm, a).unwrap();
        assert!((arg + (1.0 + a) * PI / 8.0).abs() <= 1e-6);
        let expect = ((5.0 - a) / 8.0).sqrt() / (FRAC_PI_2 * (1.0 - a) / (5.0 - a)).cos();
        assert!((modulus - expect).abs() <= 1e-6);

        // fOU: arg = (1-alpha) pi/8, |X0(i)| = sqrt((3-alpha)/2)
        let a = 0.5;
        let (arg, modulus) = x0_at_i_of(ProcessKind::Fou, a).unwrap();
        assert!((arg - (1.0 - a) * PI / 8.0).abs() <= 1e-6);
        assert!((modulus - ((3.0 - a) / 2.0).sqrt()).abs() <= 1e-6);
    }

    #[test]
    fn x0_tends_to_one_far_from_the_cut() {
        for (kind, a) in [(ProcessKind::Fou, 0.5), (ProcessKind::Ifbm, 1.5)] {
            let v = x0_neg_of(kind, a, 1e8).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "{kind:?}: {v}");
        }
    }

    #[test]
    fn rho0_factors_at_unit_argument() {
        // fOU, H = 3/4: gamma0(1) = |1 + e^{i pi/4}| = sqrt(2 + sqrt 2)
        let a = 0.5;
        let g = gamma0_of(ProcessKind::Fou, a, 1.0);
        assert_relative_eq!(g, (2.0_f64 + 2.0_f64.sqrt()).sqrt(), max_relative = 1e-13);
        let x0 = x0_neg_of(ProcessKind::Fou, a, 1.0).unwrap();
        let rho = rho0_of(ProcessKind::Fou, a, 1.0).unwrap();
        assert_relative_eq!(rho, (PI / 8.0).sin() / g * x0, max_relative = 1e-10);
        assert!(rho > 0.0);
    }

    #[test]
    fn rho0_vanishes_in_brownian_case() {
        let spec = ProcessSpec::fou(0.5, -1.0).unwrap();
        let density = BoundaryLayerDensity::new(&spec).unwrap();
        assert_eq!(density.integral_q0(3.0), 0.0);
        assert_eq!(density.integral_q1(3.0), 0.0);
    }

    #[test]
    fn ifbm_rho0_tail_decays() {
        let rho_small = rho0_of(ProcessKind::Ifbm, 0.5, 50.0).unwrap().abs();
        let rho_smaller = rho0_of(ProcessKind::Ifbm, 0.5, 500.0).unwrap().abs();
        assert!(rho_smaller < rho_small * 1e-3);
    }

    #[test]
    fn q_polynomials_branches() {
        let (_q0, q1) = q_polynomials(0.25).unwrap();
        assert_eq!(q1, vec![1.0]);
        let (q0, q1) = q_polynomials(0.75).unwrap();
        assert_eq!(q0.len(), 5);
        assert_eq!(q1.len(), 3);
        // leading coefficient of Q0 is 2 cos(phi) / sqrt(A3^2 + B3^2)
        let c = constants::constants_for(&ProcessSpec::ifbm(0.75).unwrap()).unwrap();
        let aux = c.aux.unwrap();
        assert_relative_eq!(
            q0[4],
            2.0 * c.phase_angle.cos() / aux.a3.hypot(aux.b3),
            max_relative = 1e-13
        );
        assert!(q_polynomials(0.5).is_err());
    }

    #[test]
    fn layer_vanishes_near_brownian_for_fou_but_not_ifbm() {
        // For fBm/fOU the density carries sin(theta0) ~ sin((1-alpha) pi/2)
        // and the layer collapses near H = 1/2. For ifBm theta0 sweeps a full
        // arc whatever alpha is, and the layer survives: the classical
        // integrated Brownian motion keeps its endpoint structure.
        let fou = ProcessSpec::fou(0.501, -1.0).unwrap();
        let d = BoundaryLayerDensity::new(&fou).unwrap();
        assert!(d.integral_q0(0.5).abs() < 0.01);
        assert!(d.integral_q1(0.5).abs() < 0.01);

        let ifbm = ProcessSpec::ifbm(0.499).unwrap();
        let d = BoundaryLayerDensity::new(&ifbm).unwrap();
        assert!(d.integral_q1(0.5).abs() > 0.05, "ifBm edge structure should persist");
    }

    #[test]
    fn cached_rule_matches_adaptive_quadrature() {
        let spec = ProcessSpec::fou(0.75, -1.0).unwrap();
        let density = BoundaryLayerDensity::new(&spec).unwrap();
        let qspec = QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
        };
        for &c in &[0.5, 5.0, 50.0, 500.0] {
            let direct = integrate_semiinf(
                |t| {
                    let rho = rho0_of(ProcessKind::Fou, 0.5, t).unwrap();
                    let q0 = poly_eval(density.q0_coeffs(), t);
                    rho * q0 * (-c * t).exp()
                },
                &qspec,
                TailDecay::Power(3.0 - 0.5),
            )
            .unwrap();
            let cached = density.integral_q0(c);
            assert!(
                (cached - direct).abs() <= 1e-7 * direct.abs().max(1e-4),
                "c={c}: cached {cached} vs adaptive {direct}"
            );
        }
    }
}
