//! Covariance kernels K(s, t) on the unit square for fractional Brownian
//! motion (fBm), the fractional Ornstein-Uhlenbeck process (fOU) and
//! integrated fBm (ifBm), plus precomputed kernel tables for fast matrix
//! assembly on uniform grids.
//!
//! The fOU kernel has three evaluation regimes:
//!
//! * `H > 1/2`: closed form in terms of `Phi(., alpha, +-beta)` with
//!   `c_alpha = (1 - alpha/2)(1 - alpha)`, `alpha = 2 - 2H`;
//! * `H = 1/2`: the classical Ornstein-Uhlenbeck kernel;
//! * `H < 1/2`: the integration-by-parts representation
//!   `K = R + beta Int e^{beta(t-v)} R(s,v) dv + (sym.) + beta^2 Int Int ...`
//!   with `R` the fBm covariance, evaluated by nested quadrature.
//!
//! The two fractional regimes are cross-checked against each other on
//! `H > 1/2`, where both are defined.

use crate::error::{Error, Result};
use crate::specfun::{integrate_finite, phi_incgamma, QuadratureSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProcessKind {
    Fbm,
    Fou,
    Ifbm,
}

impl ProcessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProcessKind::Fbm => "fbm",
            ProcessKind::Fou => "fou",
            ProcessKind::Ifbm => "ifbm",
        }
    }
}

/// Which process, its Hurst index, and (for fOU) the drift. The working
/// parameter `alpha = 2 - 2H` is always derived, never stored.
#[derive(Clone, Copy, Debug)]
pub struct ProcessSpec {
    kind: ProcessKind,
    hurst: f64,
    drift: f64,
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, hurst: f64, drift: f64) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::Invalid(format!(
                "Hurst index must satisfy H in (0, 1), got {hurst}"
            )));
        }
        if !drift.is_finite() {
            return Err(Error::Invalid("drift must be finite".into()));
        }
        if kind != ProcessKind::Fou && drift != 0.0 {
            return Err(Error::Invalid(format!(
                "drift is meaningful only for the fOU process, got beta = {drift} for {}",
                kind.as_str()
            )));
        }
        Ok(Self { kind, hurst, drift })
    }

    pub fn fbm(hurst: f64) -> Result<Self> {
        Self::new(ProcessKind::Fbm, hurst, 0.0)
    }

    pub fn fou(hurst: f64, drift: f64) -> Result<Self> {
        Self::new(ProcessKind::Fou, hurst, drift)
    }

    pub fn ifbm(hurst: f64) -> Result<Self> {
        Self::new(ProcessKind::Ifbm, hurst, 0.0)
    }

    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    /// `alpha = 2 - 2H`, in (0, 2).
    pub fn alpha(&self) -> f64 {
        2.0 - 2.0 * self.hurst
    }

    /// Covariance at (s, t) in the unit square.
    pub fn cov(&self, s: f64, t: f64) -> Result<f64> {
        match self.kind {
            ProcessKind::Fbm => cov_fbm(s, t, self.hurst),
            ProcessKind::Fou => cov_fou(s, t, self.hurst, self.drift),
            ProcessKind::Ifbm => cov_ifbm(s, t, self.hurst),
        }
    }
}

fn check_unit_square(s: f64, t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!(
            "covariance arguments must lie in the unit square, got ({s}, {t})"
        )));
    }
    Ok(())
}

/// fBm covariance `(s^2H + t^2H - |s-t|^2H) / 2`.
pub fn cov_fbm(s: f64, t: f64, hurst: f64) -> Result<f64> {
    check_unit_square(s, t)?;
    Ok(fbm_raw(s, t, hurst))
}

/// Integrated-fBm covariance (the double integral of the fBm kernel, in
/// closed form).
pub fn cov_ifbm(s: f64, t: f64, hurst: f64) -> Result<f64> {
    check_unit_square(s, t)?;
    Ok(ifbm_raw(s, t, hurst))
}

/// fOU covariance with drift `beta` and zero initial condition.
pub fn cov_fou(s: f64, t: f64, hurst: f64, beta: f64) -> Result<f64> {
    check_unit_square(s, t)?;
    fou_raw(s, t, hurst, beta)
}

/// fOU covariance through the integration-by-parts route, independent of the
/// closed form; the two agree wherever both are defined (`H >= 1/2`), which
/// pins down the `H < 1/2` evaluation path.
pub fn cov_fou_by_parts(s: f64, t: f64, hurst: f64, beta: f64) -> Result<f64> {
    check_unit_square(s, t)?;
    fou_by_parts(s, t, hurst, beta)
}

pub(crate) fn fbm_raw(s: f64, t: f64, hurst: f64) -> f64 {
    let h2 = 2.0 * hurst;
    0.5 * (s.powf(h2) + t.powf(h2) - (s - t).abs().powf(h2))
}

pub(crate) fn ifbm_raw(s: f64, t: f64, hurst: f64) -> f64 {
    let p = 2.0 * hurst + 1.0;
    let q = 2.0 * hurst + 2.0;
    (t * s.powf(p) + s * t.powf(p)) / (2.0 * p)
        - (s.powf(q) + t.powf(q) - (t - s).abs().powf(q)) / (2.0 * p * q)
}

pub(crate) fn fou_raw(s: f64, t: f64, hurst: f64, beta: f64) -> Result<f64> {
    if beta == 0.0 {
        return Ok(fbm_raw(s, t, hurst));
    }
    if hurst == 0.5 {
        let m = s.min(t);
        if m == 0.0 {
            return Ok(0.0);
        }
        return Ok((beta * (s + t)).exp() * (1.0 - (-2.0 * beta * m).exp()) / (2.0 * beta));
    }
    if hurst > 0.5 {
        fou_closed_form(s, t, hurst, beta)
    } else {
        fou_by_parts(s, t, hurst, beta)
    }
}

/// Closed form for `H > 1/2`, stated for `t > s` and extended to the diagonal
/// by continuity (`Phi(0, ., .) = 0` makes the displayed expression well
/// defined there).
fn fou_closed_form(s: f64, t: f64, hurst: f64, beta: f64) -> Result<f64> {
    let (s, t) = if s <= t { (s, t) } else { (t, s) };
    let alpha = 2.0 - 2.0 * hurst;
    let c_alpha = (1.0 - 0.5 * alpha) * (1.0 - alpha);
    let c2b = c_alpha / (2.0 * beta);
    let d = t - s;

    let phi_t_p = phi_incgamma(t, alpha, beta)?;
    let phi_s_p = phi_incgamma(s, alpha, beta)?;
    let phi_t_m = phi_incgamma(t, alpha, -beta)?;
    let phi_d_m = phi_incgamma(d, alpha, -beta)?;
    let phi_d_p = phi_incgamma(d, alpha, beta)?;
    let phi_s_m = phi_incgamma(s, alpha, -beta)?;

    Ok(c2b
        * ((beta * (t + s)).exp() * (phi_t_p + phi_s_p)
            - (beta * (s - t)).exp() * (phi_t_m - phi_d_m)
            - (beta * (t - s)).exp() * (phi_d_p + phi_s_m)))
}

/// Integration-by-parts representation, valid for every `H`; used as the
/// evaluation path for `H < 1/2` and as a cross-check oracle on `H > 1/2`.
pub(crate) fn fou_by_parts(s: f64, t: f64, hurst: f64, beta: f64) -> Result<f64> {
    let spec = QuadratureSpec {
        abs_tol: 1e-11,
        rel_tol: 1e-10,
        max_subdivisions: 4000,
    };
    let r = |u: f64, v: f64| fbm_raw(u, v, hurst);

    // Kink of R(x, .) sits on the diagonal; split the range there.
    let int_kinked = |f: &dyn Fn(f64) -> f64, upper: f64, kink: f64| -> Result<f64> {
        if kink > 0.0 && kink < upper {
            Ok(integrate_finite(f, 0.0, kink, &spec)? + integrate_finite(f, kink, upper, &spec)?)
        } else {
            integrate_finite(f, 0.0, upper, &spec)
        }
    };

    let term_t = if t > 0.0 {
        beta * int_kinked(&|v| (beta * (t - v)).exp() * r(s, v), t, s)?
    } else {
        0.0
    };
    let term_s = if s > 0.0 {
        beta * int_kinked(&|u| (beta * (s - u)).exp() * r(u, t), s, t)?
    } else {
        0.0
    };
    let term_st = if s > 0.0 && t > 0.0 {
        let inner = |v: f64| -> f64 {
            let f = |u: f64| (beta * (s - u)).exp() * r(u, v);
            int_kinked(&f, s, v).unwrap_or(f64::NAN)
        };
        let outer = |v: f64| (beta * (t - v)).exp() * inner(v);
        let val = int_kinked(&outer, t, s)?;
        if !val.is_finite() {
            return Err(Error::QuadratureNoConverge {
                estimate: val,
                error_bound: f64::NAN,
                subdivisions: spec.max_subdivisions,
            });
        }
        beta * beta * val
    } else {
        0.0
    };
    Ok(r(s, t) + term_t + term_s + term_st)
}

/// Unrestricted kernel evaluation on `[0, inf)^2`, used by the scaling checks.
fn raw_cov(kind: ProcessKind, s: f64, t: f64, hurst: f64, drift: f64) -> Result<f64> {
    match kind {
        ProcessKind::Fbm => Ok(fbm_raw(s, t, hurst)),
        ProcessKind::Ifbm => Ok(ifbm_raw(s, t, hurst)),
        ProcessKind::Fou => fou_raw(s, t, hurst, drift),
    }
}

/// Maximum violation of the kernel scaling identity over a uniform grid:
/// `K_beta(sT, tT) = T^{2H} K_{beta T}(s, t)` for fOU,
/// `K(sT, tT) = T^{2H+2} K(s, t)` for ifBm, and `T^{2H}` self-similarity
/// for fBm.
pub fn check_scaling(spec: &ProcessSpec, horizon: f64, grid_size: usize) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(Error::Invalid("scaling horizon must be positive".into()));
    }
    if grid_size < 2 {
        return Err(Error::Invalid("scaling grid needs at least 2 points".into()));
    }
    let h = spec.hurst();
    let power = match spec.kind() {
        ProcessKind::Ifbm => 2.0 * h + 2.0,
        _ => 2.0 * h,
    };
    let scale = horizon.powf(power);
    let mut worst: f64 = 0.0;
    for i in 0..=grid_size {
        let s = i as f64 / grid_size as f64;
        for j in 0..=i {
            let t = j as f64 / grid_size as f64;
            let lhs = raw_cov(spec.kind(), s * horizon, t * horizon, h, spec.drift())?;
            let rhs = scale * raw_cov(spec.kind(), s, t, h, spec.drift() * horizon)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// Kernel values tabulated on the uniform grid `{i/L}`, with all transcendental
/// evaluations hoisted into O(L) tables so that a full matrix pass costs
/// O(L^2) arithmetic rather than O(L^2) quadratures.
pub struct GridKernel {
    spec: ProcessSpec,
    l: usize,
    data: GridData,
}

enum GridData {
    /// t2h[k] = (k/L)^{2H}
    Fbm { t2h: Vec<f64> },
    /// x[k] = k/L, u[k] = x^{2H+1}, v[k] = x^{2H+2}
    Ifbm { x: Vec<f64>, u: Vec<f64>, v: Vec<f64> },
    /// eplus[k] = e^{beta k/L} (k up to 2L), en2[k] = e^{-2 beta k/L}
    FouClassic { eplus: Vec<f64>, en2: Vec<f64> },
    /// Phi tables and exponentials for the H > 1/2 closed form
    FouFrac {
        eplus: Vec<f64>,
        ep: Vec<f64>,
        em: Vec<f64>,
        pb: Vec<f64>,
        pm: Vec<f64>,
        c2b: f64,
    },
    /// H < 1/2: densely tabulated kernel (packed lower triangle)
    FouDense { tri: Vec<f64> },
}

/// Largest grid for which the H < 1/2 fOU kernel is tabulated densely.
const FOU_DENSE_MAX_L: usize = 4000;

impl GridKernel {
    pub fn new(spec: &ProcessSpec, l: usize) -> Result<Self> {
        if l < 1 {
            return Err(Error::Invalid("grid needs at least one subinterval".into()));
        }
        let h = spec.hurst();
        let beta = spec.drift();
        let n = l + 1;
        let step = 1.0 / l as f64;

        let data = match spec.kind() {
            ProcessKind::Fbm => GridData::Fbm {
                t2h: (0..n).map(|k| (k as f64 * step).powf(2.0 * h)).collect(),
            },
            ProcessKind::Ifbm => GridData::Ifbm {
                x: (0..n).map(|k| k as f64 * step).collect(),
                u: (0..n).map(|k| (k as f64 * step).powf(2.0 * h + 1.0)).collect(),
                v: (0..n).map(|k| (k as f64 * step).powf(2.0 * h + 2.0)).collect(),
            },
            ProcessKind::Fou if beta == 0.0 => GridData::Fbm {
                t2h: (0..n).map(|k| (k as f64 * step).powf(2.0 * h)).collect(),
            },
            ProcessKind::Fou if h == 0.5 => GridData::FouClassic {
                eplus: (0..2 * n - 1).map(|k| (beta * k as f64 * step).exp()).collect(),
                en2: (0..n).map(|k| (-2.0 * beta * k as f64 * step).exp()).collect(),
            },
            ProcessKind::Fou if h > 0.5 => {
                let alpha = 2.0 - 2.0 * h;
                let c_alpha = (1.0 - 0.5 * alpha) * (1.0 - alpha);
                let mut pb = Vec::with_capacity(n);
                let mut pm = Vec::with_capacity(n);
                for k in 0..n {
                    let t = k as f64 * step;
                    pb.push(phi_incgamma(t, alpha, beta)?);
                    pm.push(phi_incgamma(t, alpha, -beta)?);
                }
                GridData::FouFrac {
                    eplus: (0..2 * n - 1).map(|k| (beta * k as f64 * step).exp()).collect(),
                    ep: (0..n).map(|k| (beta * k as f64 * step).exp()).collect(),
                    em: (0..n).map(|k| (-beta * k as f64 * step).exp()).collect(),
                    pb,
                    pm,
                    c2b: c_alpha / (2.0 * beta),
                }
            }
            ProcessKind::Fou => {
                if l > FOU_DENSE_MAX_L {
                    return Err(Error::Invalid(format!(
                        "fOU with H < 1/2 tabulates the kernel densely; L <= {FOU_DENSE_MAX_L} required, got {l}"
                    )));
                }
                GridData::FouDense {
                    tri: fou_dense_table(h, beta, l),
                }
            }
        };
        Ok(Self { spec: *spec, l, data })
    }

    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.l + 1
    }

    /// Kernel value K(i/L, j/L).
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        match &self.data {
            GridData::Fbm { t2h } => 0.5 * (t2h[hi] + t2h[lo] - t2h[d]),
            GridData::Ifbm { x, u, v } => {
                let p = 2.0 * self.spec.hurst() + 1.0;
                let q = p + 1.0;
                (x[lo] * u[hi] + x[hi] * u[lo]) / (2.0 * p) - (v[hi] + v[lo] - v[d]) / (2.0 * p * q)
            }
            GridData::FouClassic { eplus, en2 } => {
                if lo == 0 {
                    0.0
                } else {
                    eplus[hi + lo] * (1.0 - en2[lo]) / (2.0 * self.spec.drift())
                }
            }
            GridData::FouFrac {
                eplus,
                ep,
                em,
                pb,
                pm,
                c2b,
            } => {
                c2b * (eplus[hi + lo] * (pb[hi] + pb[lo]) - em[d] * (pm[hi] - pm[d])
                    - ep[d] * (pb[d] + pm[lo]))
            }
            GridData::FouDense { tri } => tri[hi * (hi + 1) / 2 + lo],
        }
    }

    /// `(1/L) sum_i K(x_i, x_i)` — the trace of the discretized operator.
    pub fn weighted_trace(&self) -> f64 {
        let w = 1.0 / self.l as f64;
        (0..self.dim()).map(|i| self.entry(i, i) * w).sum()
    }
}

/// Tabulate the H < 1/2 fOU kernel on the grid through cumulative-trapezoid
/// evaluation of the integration-by-parts representation. Accuracy is limited
/// by the diagonal kink of the fBm kernel to roughly O(L^{-(1+2H)}).
fn fou_dense_table(hurst: f64, beta: f64, l: usize) -> Vec<f64> {
    let n = l + 1;
    let step = 1.0 / l as f64;
    let t2h: Vec<f64> = (0..n).map(|k| (k as f64 * step).powf(2.0 * hurst)).collect();
    let r = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        0.5 * (t2h[i] + t2h[j] - t2h[d])
    };
    let edecay: Vec<f64> = (0..n).map(|k| (-beta * k as f64 * step).exp()).collect();
    let egrow: Vec<f64> = (0..n).map(|k| (beta * k as f64 * step).exp()).collect();

    // c[i][j] = int_0^{t_j} e^{-beta v} R(s_i, v) dv
    let mut c = vec![0.0_f64; n * n];
    for i in 0..n {
        let row = &mut c[i * n..(i + 1) * n];
        let mut acc = 0.0;
        let mut prev = edecay[0] * r(i, 0);
        for j in 1..n {
            let cur = edecay[j] * r(i, j);
            acc += 0.5 * step * (prev + cur);
            row[j] = acc;
            prev = cur;
        }
    }
    // v[i][j] = int_0^{s_i} e^{-beta u} c(u, t_j) du, cumulative down columns
    let mut vmat = vec![0.0_f64; n * n];
    for i in 1..n {
        for j in 0..n {
            let prev = edecay[i - 1] * c[(i - 1) * n + j];
            let cur = edecay[i] * c[i * n + j];
            vmat[i * n + j] = vmat[(i - 1) * n + j] + 0.5 * step * (prev + cur);
        }
    }

    let mut tri = vec![0.0_f64; n * (n + 1) / 2];
    for i in 0..n {
        for j in 0..=i {
            tri[i * (i + 1) / 2 + j] = r(i, j)
                + beta * egrow[i] * c[j * n + i]
                + beta * egrow[j] * c[i * n + j]
                + beta * beta * egrow[i] * egrow[j] * vmat[i * n + j];
        }
    }
    tri
}
