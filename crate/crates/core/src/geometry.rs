//! Lorentz–Minkowski space `L^3 = C' × R` with metric `-dx1^2 + dx2^2 + dx3^2`,
//! split-Fourier curves and surfaces built from two Laurent maps.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::series::{LaurentMap, SplitFourierSeries};
use crate::split::SplitComplex;

/// Imaginary parts of real-valued quantities must stay below this (relative).
pub const REALNESS_TOL: f64 = 1e-9;
/// Coefficient threshold for exact (series-level) vanishing tests.
pub const LIGHTLIKE_TOL: f64 = 1e-10;

/// A point or vector of `L^3`; `x1` is the timelike coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LVec3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl LVec3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    /// Horizontal part as the split-complex number `x1 + k'x2`.
    pub fn horizontal(self) -> SplitComplex {
        SplitComplex::new(self.x1, self.x2)
    }

    /// Component sup-norm.
    pub fn mag(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }
}

impl Add for LVec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for LVec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<f64> for LVec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x1 * s, self.x2 * s, self.x3 * s)
    }
}

/// Lorentzian inner product `-a1 b1 + a2 b2 + a3 b3`.
pub fn linner(a: LVec3, b: LVec3) -> f64 {
    -a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3
}

/// A curve `θ ↦ (w(θ), u3(θ))` where `w` carries `x1 + k'x2` and `u3` is a
/// real-valued series for the third coordinate.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SplitCurve {
    pub w: SplitFourierSeries,
    pub u3: SplitFourierSeries,
}

impl SplitCurve {
    pub fn new(w: SplitFourierSeries, u3: SplitFourierSeries) -> Result<Self> {
        if !u3.is_real_valued(1e-12) {
            return Err(Error::RealnessViolation(format!(
                "third component is not real-valued (defect {:.3e})",
                u3.realness_defect()
            )));
        }
        Ok(Self { w, u3 })
    }

    pub fn constant(p: LVec3) -> Self {
        Self {
            w: SplitFourierSeries::constant(p.horizontal()),
            u3: SplitFourierSeries::constant(SplitComplex::real(p.x3)),
        }
    }

    pub fn eval(&self, theta: f64) -> Result<LVec3> {
        let w = self.w.eval(theta)?;
        let u3 = self.u3.eval(theta)?;
        if u3.im.abs() > REALNESS_TOL * (1.0 + u3.re.abs()) {
            return Err(Error::RealnessViolation(format!(
                "third component has imaginary part {} at θ = {theta}",
                u3.im
            )));
        }
        Ok(LVec3::new(w.re, w.im, u3.re))
    }

    pub fn derivative(&self) -> Self {
        Self {
            w: self.w.dtheta(),
            u3: self.u3.dtheta(),
        }
    }

    pub fn has_winding(&self) -> bool {
        self.w.has_winding() || self.u3.has_winding()
    }

    pub fn sup_norm(&self) -> f64 {
        self.w.sup_norm().max(self.u3.sup_norm())
    }

    /// `θ ↦ γ(θ + θ0)`; coefficients rotate by `e^{k'nθ0}`.
    pub fn shifted(&self, theta0: f64) -> Result<Self> {
        let shift = |s: &SplitFourierSeries| -> Result<SplitFourierSeries> {
            let mut coeffs = s.coeffs.clone();
            coeffs.add_at(0, s.winding * theta0);
            let mut out = crate::series::Coeffs::new();
            for (n, c) in coeffs.iter() {
                out.add_at(n, c * SplitComplex::exp_hyper(n as f64 * theta0)?);
            }
            Ok(SplitFourierSeries::new(s.winding, out.pruned()))
        };
        Ok(Self {
            w: shift(&self.w)?,
            u3: shift(&self.u3)?,
        })
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self {
            w: self.w.plus(&other.w),
            u3: self.u3.plus(&other.u3),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            w: self.w.scaled(SplitComplex::real(s)),
            u3: self.u3.scaled(SplitComplex::real(s)),
        }
    }
}

/// Exact series of `θ ↦ ⟨A(θ), B(θ)⟩`.
pub fn pairing_series(a: &SplitCurve, b: &SplitCurve) -> Result<SplitFourierSeries> {
    let horizontal = a.w.product(&b.w.conj())?.real_part();
    let vertical = a.u3.product(&b.u3)?;
    Ok(vertical.minus(&horizontal))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalCharacter {
    Lightlike,
    Spacelike,
    Timelike,
    Mixed,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CausalCharacter::Lightlike => "lightlike",
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Mixed => "mixed",
        };
        f.write_str(s)
    }
}

/// Sampling used by [`causal_character_default`].
pub const DEFAULT_THETA_RANGE: (f64, f64) = (-2.0, 2.0);
pub const DEFAULT_SAMPLES: usize = 401;

/// Causal character of the tangent `γ'`: lightlike is decided exactly on the
/// coefficients of `⟨γ', γ'⟩`, the other classes by sampling its sign.
pub fn causal_character(
    gamma: &SplitCurve,
    theta_range: (f64, f64),
    n_samples: usize,
) -> Result<CausalCharacter> {
    if n_samples < 2 {
        return Err(Error::DomainError("need at least two samples".into()));
    }
    let d = gamma.derivative();
    let q = pairing_series(&d, &d)?;
    classify_pairing(&q, theta_range, n_samples)
}

pub fn causal_character_default(gamma: &SplitCurve) -> Result<CausalCharacter> {
    causal_character(gamma, DEFAULT_THETA_RANGE, DEFAULT_SAMPLES)
}

fn classify_pairing(
    q: &SplitFourierSeries,
    (lo, hi): (f64, f64),
    n_samples: usize,
) -> Result<CausalCharacter> {
    let max_coef = q.sup_norm();
    if max_coef <= LIGHTLIKE_TOL {
        return Ok(CausalCharacter::Lightlike);
    }
    let tol = LIGHTLIKE_TOL * (1.0 + max_coef);
    let (mut pos, mut neg) = (true, true);
    for i in 0..n_samples {
        let theta = lo + (hi - lo) * i as f64 / (n_samples - 1) as f64;
        let v = q.eval(theta)?.re;
        pos &= v > tol;
        neg &= v < -tol;
    }
    Ok(match (pos, neg) {
        (true, _) => CausalCharacter::Spacelike,
        (_, true) => CausalCharacter::Timelike,
        _ => CausalCharacter::Mixed,
    })
}

/// True when `⟨L, L⟩` vanishes identically (coefficient test).
pub fn is_lightlike_field(field: &SplitCurve) -> Result<bool> {
    Ok(pairing_series(field, field)?.sup_norm() <= LIGHTLIKE_TOL)
}

/// The hyperbolic annulus `{x + k'y : x > 0, ρ_min^2 < x^2 - y^2 < ρ_max^2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub rho_min: f64,
    pub rho_max: f64,
}

impl Annulus {
    pub fn new(rho_min: f64, rho_max: f64) -> Result<Self> {
        if !(rho_min > 0.0 && rho_min < rho_max && rho_max.is_finite()) {
            return Err(Error::DomainError(format!(
                "annulus needs 0 < rho_min < rho_max, got ({rho_min}, {rho_max})"
            )));
        }
        Ok(Self { rho_min, rho_max })
    }

    /// `(e^{-1}, e)`, the default domain around the unit hyperbola.
    pub fn standard() -> Self {
        Self {
            rho_min: (-1f64).exp(),
            rho_max: 1f64.exp(),
        }
    }

    /// Closed containment; grids are allowed to touch the boundary.
    pub fn contains(&self, rho: f64) -> bool {
        rho >= self.rho_min && rho <= self.rho_max
    }
}

/// Candidate timelike minimal surface `F = (h, ω)` over an annulus.
#[derive(Clone, Debug, PartialEq)]
pub struct Surface {
    pub h: LaurentMap,
    pub omega: LaurentMap,
    pub domain: Annulus,
}

/// Result of evaluating a surface, with a flag for points outside the domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub point: LVec3,
    pub outside_domain: bool,
}

impl Surface {
    pub fn new(h: LaurentMap, omega: LaurentMap, domain: Annulus) -> Result<Self> {
        if !h.is_finite() || !omega.is_finite() {
            return Err(Error::OutOfRange("surface coefficients must be finite".into()));
        }
        if !omega.is_real_valued(1e-12) {
            return Err(Error::RealnessViolation(format!(
                "ω map is not real-valued (defect {:.3e})",
                omega.realness_defect()
            )));
        }
        Ok(Self { h, omega, domain })
    }

    /// The flat timelike plane `(x, y, 0)`.
    pub fn flat_plane() -> Self {
        Self {
            h: LaurentMap::identity(),
            omega: LaurentMap::zero(),
            domain: Annulus::standard(),
        }
    }

    pub fn eval_checked(&self, rho: f64, theta: f64) -> Result<SurfacePoint> {
        let h = self.h.eval(rho, theta)?;
        let w = self.omega.eval(rho, theta)?;
        if w.im.abs() > REALNESS_TOL * (1.0 + w.re.abs()) {
            return Err(Error::RealnessViolation(format!(
                "ω has imaginary part {} at (ρ, θ) = ({rho}, {theta})",
                w.im
            )));
        }
        Ok(SurfacePoint {
            point: LVec3::new(h.re, h.im, w.re),
            outside_domain: !self.domain.contains(rho),
        })
    }

    pub fn eval(&self, rho: f64, theta: f64) -> Result<LVec3> {
        Ok(self.eval_checked(rho, theta)?.point)
    }

    /// Evaluate at a Cartesian point `x + k'y` of the right wedge.
    pub fn eval_cartesian(&self, x: f64, y: f64) -> Result<LVec3> {
        let (rho, theta) = SplitComplex::new(x, y).to_polar()?;
        self.eval(rho, theta)
    }

    /// Boundary curve `θ ↦ F(r e^{k'θ})` as exact series.
    pub fn restrict_rho(&self, r: f64) -> Result<SplitCurve> {
        Ok(SplitCurve {
            w: self.h.restrict_rho(r)?,
            u3: self.omega.restrict_rho(r)?.real_part(),
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.h.sup_norm().max(self.omega.sup_norm())
    }

    /// Exact partial derivatives `(F_x, F_y)` from the Wirtinger derivatives,
    /// using `∂x = ∂z + ∂z̄` and `∂y = k'(∂z − ∂z̄)`.
    pub fn tangents(&self, rho: f64, theta: f64) -> Result<(LVec3, LVec3)> {
        let (hz, hzb) = (
            self.h.dz().eval_polar(rho, theta)?,
            self.h.dzbar().eval_polar(rho, theta)?,
        );
        let (wz, wzb) = (
            self.omega.dz().eval_polar(rho, theta)?,
            self.omega.dzbar().eval_polar(rho, theta)?,
        );
        let (hx, hy) = (hz + hzb, SplitComplex::K * (hz - hzb));
        let (wx, wy) = (wz + wzb, SplitComplex::K * (wz - wzb));
        Ok((
            LVec3::new(hx.re, hx.im, wx.re),
            LVec3::new(hy.re, hy.im, wy.re),
        ))
    }

    /// Induced metric in Cartesian parameters, from exact derivatives.
    pub fn metric(&self, rho: f64, theta: f64) -> Result<Metric> {
        let (fx, fy) = self.tangents(rho, theta)?;
        Ok(Metric::from_tangents(fx, fy))
    }
}

/// First fundamental form `g11 = ⟨F_x,F_x⟩`, `g12 = ⟨F_x,F_y⟩`, `g22 = ⟨F_y,F_y⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl Metric {
    pub fn from_tangents(fx: LVec3, fy: LVec3) -> Self {
        Self {
            g11: linner(fx, fx),
            g12: linner(fx, fy),
            g22: linner(fy, fy),
        }
    }

    pub fn det(&self) -> f64 {
        self.g11 * self.g22 - self.g12 * self.g12
    }
}
