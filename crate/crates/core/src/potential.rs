//! Coleman–Weinberg effective potential and the Mexican-hat comparison.
//!
//! ```text
//! V(φ)  = φ²/(2αg²) + (φ²/32π²)(ln(φ²/μ̄⁴) − 3)
//! V'(φ) = φ/(αg²)   + (φ/16π²)(ln(φ²/μ̄⁴) − 2)
//! ```
//!
//! The stationary condition `V' = 0`, `φ ≠ 0`, solves to
//! `φ* = μ̄² exp(1 − 8π²/(αg²))`. For weak couplings `φ*` is far below
//! `μ̄²` (about `1e-34` at `α = g = 1`), so the logarithm is always formed
//! as `2 ln|φ| − 4 ln μ̄` to avoid underflow in `φ²`.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::numfmt::sci;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("the potential is undefined at phi = 0 (logarithm)")]
    DomainError,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no sign change of V' on phi in [{lo:e}, {hi:e}]")]
    NoMinimumFound { lo: f64, hi: f64 },
}

impl PotentialError {
    pub fn kind(&self) -> &'static str {
        match self {
            PotentialError::DomainError => "DomainError",
            PotentialError::InvalidParams(_) => "InvalidParams",
            PotentialError::NoMinimumFound { .. } => "NoMinimumFound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub alpha: f64,
    pub g: f64,
    pub mu_bar: f64,
}

impl PotentialParams {
    pub fn new(alpha: f64, g: f64, mu_bar: f64) -> Result<Self, PotentialError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(PotentialError::InvalidParams(format!("alpha must be positive, got {alpha}")));
        }
        if !(g.is_finite() && g != 0.0) {
            return Err(PotentialError::InvalidParams(format!("g must be nonzero, got {g}")));
        }
        if !(mu_bar.is_finite() && mu_bar > 0.0) {
            return Err(PotentialError::InvalidParams(format!("mu_bar must be positive, got {mu_bar}")));
        }
        Ok(PotentialParams { alpha, g, mu_bar })
    }

    fn coupling(&self) -> f64 {
        self.alpha * self.g * self.g
    }

    /// `ln(φ²/μ̄⁴)` without forming `φ²`.
    fn log_ratio(&self, phi: f64) -> f64 {
        2.0 * phi.abs().ln() - 4.0 * self.mu_bar.ln()
    }
}

/// Behaviour of [`v_eff`] at `φ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroLimit {
    /// `φ = 0` is a domain error.
    #[default]
    Reject,
    /// Use the removable limit `V(0) = 0`.
    Extend,
}

pub fn v_eff(phi: f64, p: &PotentialParams, zero: ZeroLimit) -> Result<f64, PotentialError> {
    if phi == 0.0 {
        return match zero {
            ZeroLimit::Reject => Err(PotentialError::DomainError),
            ZeroLimit::Extend => Ok(0.0),
        };
    }
    let phi2 = phi * phi;
    Ok(phi2 / (2.0 * p.coupling()) + phi2 / (32.0 * PI * PI) * (p.log_ratio(phi) - 3.0))
}

pub fn v_eff_prime(phi: f64, p: &PotentialParams) -> Result<f64, PotentialError> {
    if phi == 0.0 {
        return Err(PotentialError::DomainError);
    }
    Ok(phi * stationary_factor(phi, p))
}

/// `V'(φ)/φ = 1/(αg²) + (ln(φ²/μ̄⁴) − 2)/16π²`; its sign is the sign of
/// `V'` for `φ > 0`, and it never underflows.
fn stationary_factor(phi: f64, p: &PotentialParams) -> f64 {
    1.0 / p.coupling() + (p.log_ratio(phi) - 2.0) / (16.0 * PI * PI)
}

/// `V(sφ*)/φ*²`, finite even when `φ*²` underflows.
fn v_eff_scaled(t: f64, phi_star: f64, p: &PotentialParams) -> f64 {
    let log_ratio = p.log_ratio(phi_star) + 2.0 * t.abs().ln();
    t * t * (1.0 / (2.0 * p.coupling()) + (log_ratio - 3.0) / (32.0 * PI * PI))
}

/// `V''(φ) = 1/(αg²) + (ln(φ²/μ̄⁴) − 2)/16π² + 1/8π²`.
pub fn v_eff_second(phi: f64, p: &PotentialParams) -> Result<f64, PotentialError> {
    if phi == 0.0 {
        return Err(PotentialError::DomainError);
    }
    Ok(stationary_factor(phi, p) + 1.0 / (8.0 * PI * PI))
}

/// `μ̄² exp(1 − 8π²/(αg²))`.
pub fn closed_form_minimum(p: &PotentialParams) -> f64 {
    p.mu_bar * p.mu_bar * (1.0 - 8.0 * PI * PI / p.coupling()).exp()
}

/// The location as printed alongside the potential in the source:
/// `μ̄² exp(1 − 8π/(αg²μ̄²))`. It does not solve `V' = 0` in general.
pub fn printed_minimum(p: &PotentialParams) -> f64 {
    let mu2 = p.mu_bar * p.mu_bar;
    mu2 * (1.0 - 8.0 * PI / (p.coupling() * mu2)).exp()
}

/// Logarithmic scan grid for [`find_minima`], in units of `μ̄²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Default for ScanGrid {
    /// `[1e-300, 1e6]·μ̄²` with 10⁴ points. The lower end reaches the
    /// exponentially small minima of weak couplings: `α = g = 1/2` puts
    /// `φ*` near `1e-274·μ̄²`.
    fn default() -> Self {
        ScanGrid {
            lo: 1e-300,
            hi: 1e6,
            points: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub phi: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimaReport {
    pub params: PotentialParams,
    /// `(−φ*, V)` then `(+φ*, V)` for each root found on the positive axis.
    pub minima: Vec<Minimum>,
    pub closed_form: f64,
    pub printed_formula: f64,
    /// `|printed − closed|/closed`.
    pub rel_gap: f64,
    /// `V''(φ*)`.
    pub curvature: f64,
}

impl MinimaReport {
    pub fn phi_star(&self) -> f64 {
        self.minima.last().map(|m| m.phi).unwrap_or(f64::NAN)
    }

    pub fn v_star(&self) -> f64 {
        self.minima.last().map(|m| m.value).unwrap_or(f64::NAN)
    }
}

impl fmt::Display for MinimaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} g={} mu_bar={} phi_star={} v_star={} phi_closed_form={} printed_formula={} rel_gap={}",
            sci(self.params.alpha),
            sci(self.params.g),
            sci(self.params.mu_bar),
            sci(self.phi_star()),
            sci(self.v_star()),
            sci(self.closed_form),
            sci(self.printed_formula),
            sci(self.rel_gap),
        )
    }
}

/// Locates the nonzero minima of [`v_eff`].
///
/// Scans `V'` on a logarithmic grid of positive `φ`, bisects every sign
/// change from negative to positive (geometric midpoints, to full double
/// precision), and mirrors each root to `−φ` since `V` is even. Each root
/// satisfies `|V'(φ*)| ≤ tol·scale`, where `scale` is the magnitude of the
/// two terms of `V'`, and has a positive second difference of `V`.
pub fn find_minima(p: &PotentialParams, tol: f64, grid: ScanGrid) -> Result<MinimaReport, PotentialError> {
    if !(tol > 0.0) {
        return Err(PotentialError::InvalidParams(format!("tol must be positive, got {tol}")));
    }
    if !(grid.lo > 0.0 && grid.hi > grid.lo && grid.points >= 2) {
        return Err(PotentialError::InvalidParams("scan grid must satisfy 0 < lo < hi, points >= 2".into()));
    }
    let mu2 = p.mu_bar * p.mu_bar;
    let (ln_lo, ln_hi) = ((grid.lo * mu2).ln(), (grid.hi * mu2).ln());
    let at = |k: usize| (ln_lo + (ln_hi - ln_lo) * k as f64 / (grid.points - 1) as f64).exp();

    let mut roots = Vec::new();
    let mut prev_phi = at(0);
    let mut prev = stationary_factor(prev_phi, p);
    for k in 1..grid.points {
        let phi = at(k);
        let cur = stationary_factor(phi, p);
        if prev < 0.0 && cur >= 0.0 {
            roots.push(bisect(prev_phi, phi, p));
        }
        prev_phi = phi;
        prev = cur;
    }

    let mut minima = Vec::new();
    for root in roots {
        let scale = root / p.coupling() + root / (16.0 * PI * PI) * (p.log_ratio(root).abs() + 2.0);
        let slope = v_eff_prime(root, p)?;
        let delta = 1e-3;
        let second = v_eff_scaled(1.0 + delta, root, p) - 2.0 * v_eff_scaled(1.0, root, p)
            + v_eff_scaled(1.0 - delta, root, p);
        if slope.abs() > tol * scale || second <= 0.0 {
            continue;
        }
        let value = v_eff(root, p, ZeroLimit::Reject)?;
        minima.push(Minimum { phi: -root, value });
        minima.push(Minimum { phi: root, value });
    }
    if minima.is_empty() {
        return Err(PotentialError::NoMinimumFound {
            lo: grid.lo * mu2,
            hi: grid.hi * mu2,
        });
    }

    let closed_form = closed_form_minimum(p);
    let printed_formula = printed_minimum(p);
    let phi_star = minima.last().map(|m| m.phi).expect("nonempty");
    Ok(MinimaReport {
        params: *p,
        minima,
        closed_form,
        printed_formula,
        rel_gap: (printed_formula - closed_form).abs() / closed_form.abs(),
        curvature: v_eff_second(phi_star, p)?,
    })
}

/// Bisection on the sign of `V'` between `lo < hi`, `V'(lo) < 0 ≤ V'(hi)`.
fn bisect(mut lo: f64, mut hi: f64, p: &PotentialParams) -> f64 {
    for _ in 0..200 {
        // lo·hi itself underflows for the weakest couplings
        let mid = lo.sqrt() * hi.sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if stationary_factor(mid, p) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if stationary_factor(lo, p).abs() < stationary_factor(hi, p).abs() {
        lo
    } else {
        hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MexicanHatParams {
    pub mu_sq: f64,
}

/// `(φ² − μ²)²`, with the difference formed by a fused multiply-add so it
/// carries a single rounding.
pub fn mexican_hat(phi: f64, m: &MexicanHatParams) -> f64 {
    let d = phi.mul_add(phi, -m.mu_sq);
    d * d
}

/// Minima of [`mexican_hat`]: `±√μ²` with value 0 for `μ² > 0`, otherwise
/// the single point 0 with value `μ⁴`.
pub fn mexican_hat_minima(m: &MexicanHatParams) -> Vec<Minimum> {
    if m.mu_sq > 0.0 {
        let r = m.mu_sq.sqrt();
        vec![Minimum { phi: -r, value: 0.0 }, Minimum { phi: r, value: 0.0 }]
    } else {
        vec![Minimum {
            phi: 0.0,
            value: m.mu_sq * m.mu_sq,
        }]
    }
}

/// Second derivative `12φ² − 4μ²`.
pub fn mexican_hat_curvature(phi: f64, m: &MexicanHatParams) -> f64 {
    12.0 * phi * phi - 4.0 * m.mu_sq
}

/// Side-by-side line for the two symmetry-breaking potentials.
pub fn comparison_line(report: &MinimaReport, hat: &MexicanHatParams) -> String {
    let hat_min = mexican_hat_minima(hat);
    let top = hat_min.last().expect("at least one minimum");
    format!(
        "compare mu_sq={} hat_phi_min={} hat_v_min={} hat_curvature={} cw_phi_star={} cw_curvature={}",
        sci(hat.mu_sq),
        sci(top.phi),
        sci(top.value),
        sci(mexican_hat_curvature(top.phi, hat)),
        sci(report.phi_star()),
        sci(report.curvature),
    )
}
