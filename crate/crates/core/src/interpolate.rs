//! Surfaces spanning the unit hyperbola and the hyperbola `ρ = r`.
//!
//! For each frequency `n ≠ 0` the pair `(a_n, b_n)` is fixed by the two
//! boundary values, so the interpolant is exact for every `r > 1`. Whether it
//! is also conformal (hence minimal) is a separate question answered by the
//! minimality residual, and [`radius_search`] looks for radii where it vanishes.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{causal_character_default, Annulus, CausalCharacter, LVec3, SplitCurve, Surface};
use crate::series::{minimality_residual, HoloLaurent, LaurentMap, SplitFourierSeries};
use crate::split::SplitComplex;

/// Tolerance for the constant-term compatibility conditions.
pub const MEAN_TOL: f64 = 1e-10;
/// A radius is feasible when the residual norm is at or below this.
pub const FEASIBLE_NORM: f64 = 1e-9;

fn check_radius(r: f64) -> Result<()> {
    if r > 1.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::RadiusOutOfRange(r))
    }
}

/// Domain covering both boundary hyperbolae with some room on each side.
fn spanning_domain(r: f64) -> Annulus {
    let std = Annulus::standard();
    Annulus {
        rho_min: std.rho_min,
        rho_max: std.rho_max.max(r * r.sqrt()),
    }
}

fn support(a: &SplitFourierSeries, b: &SplitFourierSeries) -> BTreeSet<i32> {
    a.coeffs.indices().chain(b.coeffs.indices()).collect()
}

/// Point interpolant: `a_n = c_n r^n / (r^{2n} − 1)`, `b_n = −a_n`.
fn point_map(gamma: &SplitFourierSeries, p: SplitComplex, r: f64) -> LaurentMap {
    let mut map = LaurentMap::zero();
    for n in gamma.coeffs.indices().filter(|&n| n != 0) {
        let a = gamma.coeff(n) * r.powi(n) / (r.powi(2 * n) - 1.0);
        map.set_term(n, a, -a);
    }
    map.set_term(0, p, SplitComplex::ZERO);
    map
}

/// Surface with `F(e^{k'θ}) = p` and `F(r e^{k'θ}) = γ(θ)`.
///
/// The constant terms force `γ`'s mean to equal `p`; minimality is not checked.
pub fn point_interpolant(gamma: &SplitCurve, p: LVec3, r: f64) -> Result<Surface> {
    check_radius(r)?;
    if gamma.has_winding() {
        return Err(Error::WindingNotSupported);
    }
    let mean_gap = (gamma.w.coeff(0) - p.horizontal())
        .mag()
        .max((gamma.u3.coeff(0).re - p.x3).abs());
    if mean_gap > MEAN_TOL {
        return Err(Error::InfeasibleMean(format!(
            "curve mean differs from the point by {mean_gap:.3e}"
        )));
    }
    let h = point_map(&gamma.w, p.horizontal(), r);
    let omega = point_map(&gamma.u3, SplitComplex::real(p.x3), r);
    Surface::new(h, omega, spanning_domain(r))
}

/// Curve interpolant: `a_n = (r^n c_n − l_n)/(r^{2n} − 1)`, `b_n = l_n − a_n`.
fn curve_map(
    gamma: &SplitFourierSeries,
    alpha: &SplitFourierSeries,
    r: f64,
    allow_log: bool,
) -> Result<LaurentMap> {
    if (gamma.winding - alpha.winding).mag() > MEAN_TOL {
        return Err(Error::WindingMismatch);
    }
    let (c0, l0) = (gamma.coeff(0), alpha.coeff(0));
    let log_sum = if allow_log {
        (c0 - l0) / r.ln()
    } else {
        let gap = (c0 - l0).mag();
        if gap > MEAN_TOL {
            return Err(Error::MeanMismatch(format!(
                "constant terms differ by {gap:.3e}; enable the log extension to absorb it"
            )));
        }
        SplitComplex::ZERO
    };
    let log_diff = SplitComplex::K * alpha.winding;
    let mut map = LaurentMap::new((log_sum + log_diff) * 0.5, (log_sum - log_diff) * 0.5);
    for n in support(gamma, alpha).into_iter().filter(|&n| n != 0) {
        let l = alpha.coeff(n);
        let a = (gamma.coeff(n) * r.powi(n) - l) / (r.powi(2 * n) - 1.0);
        map.set_term(n, a, l - a);
    }
    map.set_term(0, l0, SplitComplex::ZERO);
    Ok(map)
}

/// Surface with `F(e^{k'θ}) = α(θ)` and `F(r e^{k'θ}) = γ(θ)`.
///
/// With `allow_log`, unequal means are absorbed by a `(λ + μ) log ρ` term.
pub fn curve_interpolant(
    gamma: &SplitCurve,
    alpha: &SplitCurve,
    r: f64,
    allow_log: bool,
) -> Result<Surface> {
    check_radius(r)?;
    let h = curve_map(&gamma.w, &alpha.w, r, allow_log)?;
    let omega = curve_map(&gamma.u3, &alpha.u3, r, allow_log)?;
    Surface::new(h, omega, spanning_domain(r))
}

/// The residual `h_z conj(h_z̄) − ω_z^2` and its coefficient sup-norm.
pub fn minimality_conditions(surface: &Surface) -> (HoloLaurent, f64) {
    let p = minimality_residual(&surface.h, &surface.omega);
    let norm = p.sup_norm();
    (p, norm)
}

/// What the curve is interpolated to on the unit hyperbola.
#[derive(Clone, Debug)]
pub enum Target {
    Point(LVec3),
    Curve(SplitCurve),
}

impl Target {
    fn build(&self, gamma: &SplitCurve, r: f64, allow_log: bool) -> Result<Surface> {
        match self {
            Target::Point(p) => point_interpolant(gamma, *p, r),
            Target::Curve(alpha) => curve_interpolant(gamma, alpha, r, allow_log),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub r: f64,
    pub norm: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    /// `(r, norm)` on the log-spaced scan grid.
    pub profile: Vec<(f64, f64)>,
    /// Refined local minima, sorted by norm.
    pub candidates: Vec<Candidate>,
}

impl SearchReport {
    pub fn best_feasible(&self) -> Option<Candidate> {
        self.candidates.iter().copied().find(|c| c.feasible)
    }
}

/// Scan the residual norm over `r ∈ [r_min, r_max]` and refine each local
/// minimum by golden-section search.
pub fn radius_search(
    gamma: &SplitCurve,
    target: &Target,
    r_min: f64,
    r_max: f64,
    grid_n: usize,
    allow_log: bool,
) -> Result<SearchReport> {
    if !(r_min > 1.0 && r_min < r_max && r_max.is_finite()) {
        return Err(Error::BadRange(format!(
            "need 1 < r_min < r_max, got ({r_min}, {r_max})"
        )));
    }
    if grid_n < 8 {
        return Err(Error::BadRange(format!("grid of {grid_n} points; need at least 8")));
    }
    // A constant curve has γ' ≡ 0; it is let through as the trivial case.
    let constant = gamma.derivative().w.is_zero() && gamma.derivative().u3.is_zero();
    if !constant {
        let character = causal_character_default(gamma)?;
        if !matches!(character, CausalCharacter::Spacelike | CausalCharacter::Timelike) {
            return Err(Error::NotSpaceOrTimelike(character.to_string()));
        }
    }

    let norm_at = |r: f64| -> Result<f64> {
        Ok(minimality_conditions(&target.build(gamma, r, allow_log)?).1)
    };
    // surface preconditions don't depend on r, so surface them up front
    norm_at(r_min)?;

    let ratio = r_max / r_min;
    let profile: Vec<(f64, f64)> = (0..grid_n)
        .map(|i| {
            let r = r_min * ratio.powf(i as f64 / (grid_n - 1) as f64);
            norm_at(r).map(|v| (r, v))
        })
        .collect::<Result<_>>()?;

    let f = |r: f64| norm_at(r).unwrap_or(f64::INFINITY);
    let mut candidates = Vec::new();
    for i in 0..grid_n {
        let v = profile[i].1;
        let left_ok = i == 0 || v < profile[i - 1].1;
        let right_ok = i + 1 == grid_n || v <= profile[i + 1].1;
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = profile[i.saturating_sub(1)].0;
        let hi = profile[(i + 1).min(grid_n - 1)].0;
        let (r, norm) = golden_section_minimize(f, lo, hi, 1e-10);
        let (r, norm) = if norm <= v { (r, norm) } else { profile[i] };
        candidates.push(Candidate {
            r,
            norm,
            feasible: norm <= FEASIBLE_NORM,
        });
    }
    candidates.sort_by(|a, b| a.norm.total_cmp(&b.norm).then(a.r.total_cmp(&b.r)));
    Ok(SearchReport {
        profile,
        candidates,
    })
}

/// Golden-section minimization of `f` on `[a, b]` until the bracket width is
/// below `rel_width` times its midpoint. Returns `(x_min, f_min)`.
pub fn golden_section_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, rel_width: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..200 {
        if (b - a) <= rel_width * 0.5 * (a + b).abs() {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bjorling::{solve_bjorling, DegeneracyPolicy};

    const K: SplitComplex = SplitComplex::K;

    fn r(x: f64) -> SplitComplex {
        SplitComplex::real(x)
    }

    fn paper_curve() -> SplitCurve {
        SplitCurve::new(
            SplitFourierSeries::from_coeffs([(1, r(1.0))]),
            SplitFourierSeries::from_coeffs([(1, K * 0.5), (-1, K * -0.5)]),
        )
        .unwrap()
    }

    fn nondegenerate_bjorling() -> Surface {
        let gamma = SplitCurve::new(
            SplitFourierSeries::from_coeffs([(1, K)]),
            SplitFourierSeries::winding_only(r(1.0)),
        )
        .unwrap();
        let field = SplitCurve::new(
            SplitFourierSeries::from_coeffs([(0, r(0.5)), (2, r(0.5))]),
            SplitFourierSeries::from_coeffs([(1, r(0.5)), (-1, r(0.5))]),
        )
        .unwrap();
        solve_bjorling(&gamma, &field, DegeneracyPolicy::Error)
            .unwrap()
            .surface
    }

    #[test]
    fn paper_curve_to_origin() {
        let s = point_interpolant(&paper_curve(), LVec3::ZERO, 2.0).unwrap();
        let t1 = s.h.term(1);
        assert!((t1.a - r(2.0 / 3.0)).mag() < 1e-15);
        assert!((t1.b - r(-2.0 / 3.0)).mag() < 1e-15);
        assert!((s.omega.term(1).a - K / 3.0).mag() < 1e-15);
        assert!((s.omega.term(-1).a - K / 3.0).mag() < 1e-15);
        assert!((s.omega.term(-1).b + K / 3.0).mag() < 1e-15);
        for i in 0..401 {
            let theta = -2.0 + 0.01 * i as f64;
            assert!(s.eval(1.0, theta).unwrap().mag() <= 1e-15);
            let gap = s.eval(2.0, theta).unwrap() - paper_curve().eval(theta).unwrap();
            assert!(gap.mag() <= 1e-10 * (1.0 + theta.cosh()));
        }
    }

    #[test]
    fn constant_curve_gives_constant_surface() {
        let p = LVec3::new(1.0, -2.0, 0.5);
        let s = point_interpolant(&SplitCurve::constant(p), p, 3.0).unwrap();
        assert_eq!(s.eval(1.7, 0.3).unwrap(), p);
        assert_eq!(minimality_conditions(&s).1, 0.0);
    }

    #[test]
    fn point_interpolant_errors() {
        let g = paper_curve();
        assert!(matches!(
            point_interpolant(&g, LVec3::ZERO, 1.0),
            Err(Error::RadiusOutOfRange(_))
        ));
        assert!(matches!(
            point_interpolant(&g, LVec3::new(1.0, 0.0, 0.0), 2.0),
            Err(Error::InfeasibleMean(_))
        ));
        let wound = SplitCurve::new(
            SplitFourierSeries::winding_only(r(1.0)),
            SplitFourierSeries::default(),
        )
        .unwrap();
        assert!(matches!(
            point_interpolant(&wound, LVec3::ZERO, 2.0),
            Err(Error::WindingNotSupported)
        ));
    }

    #[test]
    fn curve_interpolant_errors() {
        let g = paper_curve();
        let shifted = g.plus(&SplitCurve::constant(LVec3::new(0.0, 0.0, 1.0)));
        assert!(matches!(
            curve_interpolant(&g, &shifted, 2.0, false),
            Err(Error::MeanMismatch(_))
        ));
        assert!(curve_interpolant(&g, &shifted, 2.0, true).is_ok());
        let wound = SplitCurve::new(
            SplitFourierSeries::winding_only(r(1.0)),
            SplitFourierSeries::default(),
        )
        .unwrap();
        assert!(matches!(
            curve_interpolant(&g, &wound, 2.0, true),
            Err(Error::WindingMismatch)
        ));
        assert!(matches!(
            curve_interpolant(&g, &g, 0.5, true),
            Err(Error::RadiusOutOfRange(_))
        ));
    }

    #[test]
    fn round_trip_reconstructs_surface() {
        let s0 = nondegenerate_bjorling();
        let alpha = s0.restrict_rho(1.0).unwrap();
        let gamma = s0.restrict_rho(1.7).unwrap();
        let s = curve_interpolant(&gamma, &alpha, 1.7, true).unwrap();
        assert!(s.h.distance(&s0.h) <= 1e-10);
        assert!(s.omega.distance(&s0.omega) <= 1e-10);
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, fx) = golden_section_minimize(|x| (x - 1.3).powi(2), 1.0, 2.0, 1e-12);
        assert!((x - 1.3).abs() < 1e-6);
        assert!(fx < 1e-12);
    }

    #[test]
    fn search_rejects_bad_input() {
        let g = paper_curve();
        let t = Target::Point(LVec3::ZERO);
        assert!(matches!(radius_search(&g, &t, 0.5, 2.0, 20, false), Err(Error::BadRange(_))));
        assert!(matches!(radius_search(&g, &t, 2.0, 1.5, 20, false), Err(Error::BadRange(_))));
        assert!(matches!(radius_search(&g, &t, 1.1, 2.0, 4, false), Err(Error::BadRange(_))));
        let helix = SplitCurve::new(
            SplitFourierSeries::from_coeffs([(1, K)]),
            SplitFourierSeries::winding_only(r(1.0)),
        )
        .unwrap();
        assert!(matches!(
            radius_search(&helix, &t, 1.1, 2.0, 20, false),
            Err(Error::NotSpaceOrTimelike(_))
        ));
    }

    #[test]
    fn constant_curve_search_is_trivial() {
        let p = LVec3::new(0.5, 0.0, 0.0);
        let rep = radius_search(&SplitCurve::constant(p), &Target::Point(p), 1.01, 10.0, 16, false)
            .unwrap();
        assert!(rep.profile.iter().all(|&(_, v)| v == 0.0));
        assert_eq!(rep.candidates.len(), 1);
        assert!(rep.candidates[0].feasible);
    }
}
