//! Singular Björling problem for finite split-Fourier lightlike data.
//!
//! Given a lightlike curve `γ` and a lightlike field `L` along it with
//! `⟨γ', L⟩ = 0`, the surface is assembled term by term: on the unit hyperbola
//! `a_n + b_n` must reproduce `γ` and `n(a_n − b_n)` must reproduce `L`. The
//! mean of `L` and the winding of `γ` are carried by the `Log z`, `Log z̄` terms.

use crate::error::{Error, Result};
use crate::geometry::{
    causal_character_default, is_lightlike_field, pairing_series, Annulus, CausalCharacter,
    SplitCurve, Surface, LIGHTLIKE_TOL,
};
use crate::series::{LaurentMap, SplitFourierSeries};
use crate::split::SplitComplex;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DegeneracyPolicy {
    /// Reject data whose surface is metric-degenerate everywhere.
    #[default]
    Error,
    /// Return the surface and report the degeneracy.
    Warn,
}

/// Output of [`solve_bjorling`].
#[derive(Clone, Debug)]
pub struct BjorlingSolution {
    pub surface: Surface,
    /// Set when the metric determinant vanishes on the whole scan grid.
    pub totally_degenerate: bool,
    /// Largest `|det g|` seen on the scan grid.
    pub max_abs_det: f64,
}

/// Grid used for the total-degeneracy scan: `ρ` log-uniform over the domain,
/// `θ ∈ [-2, 2]`.
pub const DEGENERACY_GRID: (usize, usize) = (33, 129);

/// Build the Laurent map whose restriction to the unit hyperbola is `position`
/// and whose radial derivative there is `radial`.
pub fn bjorling_map(position: &SplitFourierSeries, radial: &SplitFourierSeries) -> Result<LaurentMap> {
    if radial.has_winding() {
        return Err(Error::WindingNotSupported);
    }
    let ell0 = radial.coeff(0);
    // λ + μ = ℓ0 and k'(λ − μ) = α, with k'^{-1} = k'
    let diff = SplitComplex::K * position.winding;
    let mut map = LaurentMap::new((ell0 + diff) * 0.5, (ell0 - diff) * 0.5);
    let indices: std::collections::BTreeSet<i32> = position
        .coeffs
        .indices()
        .chain(radial.coeffs.indices())
        .collect();
    for n in indices {
        let c = position.coeff(n);
        if n == 0 {
            map.set_term(0, c, SplitComplex::ZERO);
            continue;
        }
        let ell = radial.coeff(n) / n as f64;
        map.set_term(n, (c + ell) * 0.5, (c - ell) * 0.5);
    }
    Ok(map)
}

/// Check the hypotheses: `γ` lightlike, `L` lightlike, `⟨γ', L⟩ ≡ 0`.
pub fn check_bjorling_data(gamma: &SplitCurve, field: &SplitCurve) -> Result<()> {
    let character = causal_character_default(gamma)?;
    if character != CausalCharacter::Lightlike {
        return Err(Error::NotLightlikeCurve(format!("tangent is {character}")));
    }
    if field.has_winding() {
        return Err(Error::WindingNotSupported);
    }
    if !is_lightlike_field(field)? {
        let defect = pairing_series(field, field)?.sup_norm();
        return Err(Error::NotLightlikeField(format!(
            "⟨L, L⟩ has coefficient of size {defect:.3e}"
        )));
    }
    let cross = pairing_series(&gamma.derivative(), field)?.sup_norm();
    if cross > LIGHTLIKE_TOL {
        return Err(Error::NotOrthogonal(format!(
            "⟨γ', L⟩ has coefficient of size {cross:.3e}"
        )));
    }
    Ok(())
}

/// Largest `|det g|` over the degeneracy grid, using exact derivatives.
pub fn max_abs_metric_det(surface: &Surface) -> Result<f64> {
    let (n_rho, n_theta) = DEGENERACY_GRID;
    let (lo, hi) = (surface.domain.rho_min.ln(), surface.domain.rho_max.ln());
    let mut worst: f64 = 0.0;
    for i in 0..n_rho {
        let rho = (lo + (hi - lo) * i as f64 / (n_rho - 1) as f64).exp();
        for j in 0..n_theta {
            let theta = -2.0 + 4.0 * j as f64 / (n_theta - 1) as f64;
            worst = worst.max(surface.metric(rho, theta)?.det().abs());
        }
    }
    Ok(worst)
}

/// Solve the singular Björling problem on the default annulus `(e^{-1}, e)`.
pub fn solve_bjorling(
    gamma: &SplitCurve,
    field: &SplitCurve,
    policy: DegeneracyPolicy,
) -> Result<BjorlingSolution> {
    solve_bjorling_on(gamma, field, policy, Annulus::standard())
}

pub fn solve_bjorling_on(
    gamma: &SplitCurve,
    field: &SplitCurve,
    policy: DegeneracyPolicy,
    domain: Annulus,
) -> Result<BjorlingSolution> {
    check_bjorling_data(gamma, field)?;
    let h = bjorling_map(&gamma.w, &field.w)?;
    let omega = bjorling_map(&gamma.u3, &field.u3)?;
    let surface = Surface::new(h, omega, domain)?;

    let max_abs_det = max_abs_metric_det(&surface)?;
    let scale = 1.0 + surface.sup_norm().powi(2);
    let totally_degenerate = max_abs_det <= 1e-10 * scale;
    if totally_degenerate && policy == DegeneracyPolicy::Error {
        return Err(Error::TotallyDegenerate);
    }
    Ok(BjorlingSolution {
        surface,
        totally_degenerate,
        max_abs_det,
    })
}
