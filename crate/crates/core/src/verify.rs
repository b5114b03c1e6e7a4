//! Finite-difference checks of a surface, independent of the coefficient
//! algebra: the wave equation, conformality of the Cartesian parameters, and
//! the sign of the metric determinant.
//!
//! `F` is sampled at Cartesian points `x + k'y` (converted back to polar form
//! for evaluation), so none of the derivative identities used to build the
//! surfaces are reused here.

use crate::error::{Error, Result};
use crate::geometry::{linner, LVec3, Metric, SplitCurve, Surface};
use crate::split::SplitComplex;

/// Step for first derivatives.
pub const DEFAULT_DELTA: f64 = 1e-4;
/// Step for second derivatives.
pub const DEFAULT_DELTA2: f64 = 1e-3;
/// `|det g|` at or below this counts as a singular point.
pub const DEFAULT_DET_TOL: f64 = 1e-8;

/// Tensor grid of `(ρ, θ)` sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub rhos: Vec<f64>,
    pub thetas: Vec<f64>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl Grid {
    pub fn new(rhos: Vec<f64>, thetas: Vec<f64>) -> Self {
        Self { rhos, thetas }
    }

    /// `ρ` log-uniform (so `ρ = 1` is hit for ranges symmetric in `log ρ`),
    /// `θ` uniform.
    pub fn log_uniform(rho: (f64, f64), n_rho: usize, theta: (f64, f64), n_theta: usize) -> Result<Self> {
        if n_rho == 0 || n_theta == 0 || !(rho.0 > 0.0) || rho.1 < rho.0 || theta.1 < theta.0 {
            return Err(Error::DomainError(format!(
                "bad grid {n_rho}x{n_theta} over ρ {rho:?}, θ {theta:?}"
            )));
        }
        let rhos = linspace(rho.0.ln(), rho.1.ln(), n_rho)
            .into_iter()
            .map(f64::exp)
            .collect();
        Ok(Self::new(rhos, linspace(theta.0, theta.1, n_theta)))
    }

    /// Default `n_rho × n_theta` grid over `ρ ∈ [max(ρ_min, e⁻¹), min(ρ_max, e)]`,
    /// `θ ∈ [-2, 2]`.
    pub fn default_for(surface: &Surface, n_rho: usize, n_theta: usize) -> Result<Self> {
        let lo = surface.domain.rho_min.max((-1f64).exp());
        let hi = surface.domain.rho_max.min(1f64.exp());
        Self::log_uniform((lo, hi), n_rho, (-2.0, 2.0), n_theta)
    }

    pub fn len(&self) -> usize {
        self.rhos.len() * self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rhos
            .iter()
            .flat_map(move |&r| self.thetas.iter().map(move |&t| (r, t)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceClass {
    Timelike,
    Degenerate,
    Mixed,
}

impl SurfaceClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SurfaceClass::Timelike => "Timelike",
            SurfaceClass::Degenerate => "Degenerate",
            SurfaceClass::Mixed => "Mixed",
        }
    }
}

/// Samples `F` around a base point in Cartesian coordinates.
struct Stencil<'a> {
    surface: &'a Surface,
    x: f64,
    y: f64,
}

impl<'a> Stencil<'a> {
    fn new(surface: &'a Surface, rho: f64, theta: f64) -> Result<Self> {
        if !surface.domain.contains(rho) {
            return Err(Error::GridOutsideDomain(format!(
                "ρ = {rho} outside [{}, {}]",
                surface.domain.rho_min, surface.domain.rho_max
            )));
        }
        let z = SplitComplex::from_polar(rho, theta)?;
        Ok(Self { surface, x: z.re, y: z.im })
    }

    fn at(&self, dx: f64, dy: f64) -> Result<LVec3> {
        self.surface
            .eval_cartesian(self.x + dx, self.y + dy)
            .map_err(|e| match e {
                Error::OutsideWedge(..) => Error::GridOutsideDomain(format!(
                    "stencil point ({}, {}) leaves the right wedge",
                    self.x + dx,
                    self.y + dy
                )),
                other => other,
            })
    }

    fn first(&self, d: f64) -> Result<(LVec3, LVec3)> {
        let fx = (self.at(d, 0.0)? - self.at(-d, 0.0)?) * (0.5 / d);
        let fy = (self.at(0.0, d)? - self.at(0.0, -d)?) * (0.5 / d);
        Ok((fx, fy))
    }

    fn wave(&self, d: f64) -> Result<LVec3> {
        let f0 = self.at(0.0, 0.0)?;
        let fxx = (self.at(d, 0.0)? - f0 * 2.0 + self.at(-d, 0.0)?) * (1.0 / (d * d));
        let fyy = (self.at(0.0, d)? - f0 * 2.0 + self.at(0.0, -d)?) * (1.0 / (d * d));
        Ok(fxx - fyy)
    }
}

fn check_step(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("step {delta} must be positive")))
    }
}

/// Max over the grid of the componentwise `|F_xx − F_yy|` by central differences.
pub fn fd_wave_residual(surface: &Surface, grid: &Grid, delta: f64) -> Result<f64> {
    check_step(delta)?;
    let mut worst: f64 = 0.0;
    for (rho, theta) in grid.points() {
        worst = worst.max(Stencil::new(surface, rho, theta)?.wave(delta)?.mag());
    }
    Ok(worst)
}

/// Max over the grid of `|⟨F_x,F_x⟩ + ⟨F_y,F_y⟩|` and `|⟨F_x,F_y⟩|`.
pub fn fd_conformality(surface: &Surface, grid: &Grid, delta: f64) -> Result<(f64, f64)> {
    check_step(delta)?;
    let (mut conformal, mut cross): (f64, f64) = (0.0, 0.0);
    for (rho, theta) in grid.points() {
        let (fx, fy) = Stencil::new(surface, rho, theta)?.first(delta)?;
        conformal = conformal.max((linner(fx, fx) + linner(fy, fy)).abs());
        cross = cross.max(linner(fx, fy).abs());
    }
    Ok((conformal, cross))
}

/// Finite-difference metric at one point.
pub fn fd_metric(surface: &Surface, rho: f64, theta: f64, delta: f64) -> Result<Metric> {
    let (fx, fy) = Stencil::new(surface, rho, theta)?.first(delta)?;
    Ok(Metric::from_tangents(fx, fy))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricScan {
    pub det_min: f64,
    pub det_max: f64,
    pub singular_points: Vec<(f64, f64)>,
    pub classification: SurfaceClass,
}

/// Sign pattern of `det g` over the grid.
pub fn metric_scan(surface: &Surface, grid: &Grid, delta: f64, det_tol: f64) -> Result<MetricScan> {
    check_step(delta)?;
    let mut det_min = f64::INFINITY;
    let mut det_max = f64::NEG_INFINITY;
    let mut singular_points = Vec::new();
    let mut all_timelike = true;
    for (rho, theta) in grid.points() {
        let det = fd_metric(surface, rho, theta, delta)?.det();
        det_min = det_min.min(det);
        det_max = det_max.max(det);
        if det.abs() <= det_tol {
            singular_points.push((rho, theta));
        }
        all_timelike &= det < -det_tol;
    }
    let classification = if all_timelike {
        SurfaceClass::Timelike
    } else if singular_points.len() == grid.len() {
        SurfaceClass::Degenerate
    } else {
        SurfaceClass::Mixed
    };
    Ok(MetricScan {
        det_min,
        det_max,
        singular_points,
        classification,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub grid: Grid,
    pub delta: f64,
    pub delta2: f64,
    pub det_tol: f64,
}

impl VerifyConfig {
    pub fn default_for(surface: &Surface) -> Result<Self> {
        Ok(Self {
            grid: Grid::default_for(surface, 33, 129)?,
            delta: DEFAULT_DELTA,
            delta2: DEFAULT_DELTA2,
            det_tol: DEFAULT_DET_TOL,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub wave_residual_max: f64,
    pub conformal_residual_max: f64,
    pub cross_residual_max: f64,
    pub det_min: f64,
    pub det_max: f64,
    pub singular_points: Vec<(f64, f64)>,
    pub classification: SurfaceClass,
    pub grid: Grid,
    pub delta: f64,
    pub delta2: f64,
}

impl VerificationReport {
    /// True when every PDE residual is at or below `tol`.
    pub fn residuals_within(&self, tol: f64) -> bool {
        self.wave_residual_max <= tol
            && self.conformal_residual_max <= tol
            && self.cross_residual_max <= tol
    }
}

pub fn verify_surface(surface: &Surface, config: &VerifyConfig) -> Result<VerificationReport> {
    let wave = fd_wave_residual(surface, &config.grid, config.delta2)?;
    let (conformal, cross) = fd_conformality(surface, &config.grid, config.delta)?;
    let scan = metric_scan(surface, &config.grid, config.delta, config.det_tol)?;
    Ok(VerificationReport {
        wave_residual_max: wave,
        conformal_residual_max: conformal,
        cross_residual_max: cross,
        det_min: scan.det_min,
        det_max: scan.det_max,
        singular_points: scan.singular_points,
        classification: scan.classification,
        grid: config.grid.clone(),
        delta: config.delta,
        delta2: config.delta2,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryReport {
    /// `sup |F(e^{k'θ}) − γ(θ)|`.
    pub position: f64,
    /// `sup |∂ρF(e^{k'θ}) − L(θ)|` by central differences, when `L` is given.
    pub drho: Option<f64>,
}

/// Boundary errors on the unit hyperbola over `n` samples of `θ ∈ [lo, hi]`.
pub fn boundary_report(
    surface: &Surface,
    gamma: &SplitCurve,
    field: Option<&SplitCurve>,
    theta_range: (f64, f64),
    n: usize,
    delta: f64,
) -> Result<BoundaryReport> {
    check_step(delta)?;
    let mut position: f64 = 0.0;
    let mut drho: f64 = 0.0;
    for theta in linspace(theta_range.0, theta_range.1, n.max(1)) {
        position = position.max((surface.eval(1.0, theta)? - gamma.eval(theta)?).mag());
        if let Some(field) = field {
            let d = (surface.eval(1.0 + delta, theta)? - surface.eval(1.0 - delta, theta)?)
                * (0.5 / delta);
            drho = drho.max((d - field.eval(theta)?).mag());
        }
    }
    Ok(BoundaryReport {
        position,
        drho: field.map(|_| drho),
    })
}
