//! Finite split-Fourier series on the unit hyperbola and split-harmonic
//! Laurent maps on the right wedge.
//!
//! Everything here is exact coefficient algebra: derivatives, restrictions to
//! hyperbolae `ρ = const`, and products (by convolution). The only transcendental
//! calls happen at evaluation time.

use std::collections::btree_map::{self, BTreeMap};

use crate::error::{Error, Result};
use crate::split::SplitComplex;

/// Stored coefficients with magnitude at or below this are dropped.
pub const PRUNE_TOL: f64 = 1e-15;

/// Finite map `n -> c_n` with pruning of negligible entries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Coeffs(BTreeMap<i32, SplitComplex>);

impl Coeffs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: i32) -> SplitComplex {
        self.0.get(&n).copied().unwrap_or(SplitComplex::ZERO)
    }

    /// Accumulate `v` into entry `n`. Call [`prune`](Self::prune) when done.
    pub fn add_at(&mut self, n: i32, v: SplitComplex) {
        *self.0.entry(n).or_insert(SplitComplex::ZERO) += v;
    }

    pub fn set(&mut self, n: i32, v: SplitComplex) {
        if v.mag() > PRUNE_TOL {
            self.0.insert(n, v);
        } else {
            self.0.remove(&n);
        }
    }

    pub fn prune(&mut self) {
        self.0.retain(|_, v| v.mag() > PRUNE_TOL);
    }

    pub fn pruned(mut self) -> Self {
        self.prune();
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, SplitComplex)> + '_ {
        self.0.iter().map(|(&n, &v)| (n, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = i32> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest coefficient magnitude (component sup-norm), 0 when empty.
    pub fn sup_norm(&self) -> f64 {
        self.0.values().map(|v| v.mag()).fold(0.0, f64::max)
    }

    /// Cauchy product on exponents: `(f*g)_s = Σ_n f_n g_{s-n}`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Coeffs::new();
        for (&i, &a) in &self.0 {
            for (&j, &b) in &other.0 {
                out.add_at(i + j, a * b);
            }
        }
        out.pruned()
    }

    pub fn map(&self, f: impl Fn(i32, SplitComplex) -> SplitComplex) -> Self {
        Coeffs(self.0.iter().map(|(&n, &v)| (n, f(n, v))).collect()).pruned()
    }

    /// `c_n -> conj(c_{-n})`.
    pub fn conj_reflect(&self) -> Self {
        Coeffs(self.0.iter().map(|(&n, &v)| (-n, v.conj())).collect())
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, v) in other.iter() {
            out.add_at(n, v);
        }
        out.pruned()
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, v) in other.iter() {
            out.add_at(n, -v);
        }
        out.pruned()
    }

    pub fn scaled(&self, s: SplitComplex) -> Self {
        self.map(|_, v| v * s)
    }
}

impl FromIterator<(i32, SplitComplex)> for Coeffs {
    fn from_iter<I: IntoIterator<Item = (i32, SplitComplex)>>(iter: I) -> Self {
        let mut c = Coeffs::new();
        for (n, v) in iter {
            c.add_at(n, v);
        }
        c.pruned()
    }
}

impl<'a> IntoIterator for &'a Coeffs {
    type Item = (&'a i32, &'a SplitComplex);
    type IntoIter = btree_map::Iter<'a, i32, SplitComplex>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `f(θ) = αθ + Σ c_n e^{k'nθ}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SplitFourierSeries {
    pub winding: SplitComplex,
    pub coeffs: Coeffs,
}

impl SplitFourierSeries {
    pub fn new(winding: SplitComplex, coeffs: Coeffs) -> Self {
        Self { winding, coeffs }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i32, SplitComplex)>>(iter: I) -> Self {
        Self::new(SplitComplex::ZERO, iter.into_iter().collect())
    }

    pub fn constant(c: SplitComplex) -> Self {
        Self::from_coeffs([(0, c)])
    }

    pub fn winding_only(alpha: SplitComplex) -> Self {
        Self::new(alpha, Coeffs::new())
    }

    pub fn coeff(&self, n: i32) -> SplitComplex {
        self.coeffs.get(n)
    }

    pub fn has_winding(&self) -> bool {
        self.winding.mag() > PRUNE_TOL
    }

    pub fn is_zero(&self) -> bool {
        !self.has_winding() && self.coeffs.is_empty()
    }

    /// Sup-norm over the winding and all coefficients.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs.sup_norm().max(self.winding.mag())
    }

    pub fn eval(&self, theta: f64) -> Result<SplitComplex> {
        let mut acc = self.winding * theta;
        for (n, c) in self.coeffs.iter() {
            acc += c * SplitComplex::exp_hyper(n as f64 * theta)?;
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(Error::OutOfRange(format!("series overflows at θ = {theta}")))
        }
    }

    /// Term-wise θ-derivative; the result is always winding-free.
    pub fn dtheta(&self) -> Self {
        let mut c = self.coeffs.map(|n, v| SplitComplex::K * v * n as f64);
        c.add_at(0, self.winding);
        Self::new(SplitComplex::ZERO, c.pruned())
    }

    /// Exact product by coefficient convolution.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.has_winding() || other.has_winding() {
            return Err(Error::WindingNotSupported);
        }
        Ok(Self::new(SplitComplex::ZERO, self.coeffs.convolve(&other.coeffs)))
    }

    /// Pointwise conjugate, using `conj(e^{k'nθ}) = e^{-k'nθ}`.
    pub fn conj(&self) -> Self {
        Self::new(self.winding.conj(), self.coeffs.conj_reflect())
    }

    /// Series of the split-real part, `(f + conj f)/2`.
    pub fn real_part(&self) -> Self {
        let s = self.plus(&self.conj());
        Self::new(s.winding * 0.5, s.coeffs.scaled(SplitComplex::real(0.5)))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(self.winding + other.winding, self.coeffs.plus(&other.coeffs))
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self::new(self.winding - other.winding, self.coeffs.minus(&other.coeffs))
    }

    pub fn scaled(&self, s: SplitComplex) -> Self {
        Self::new(self.winding * s, self.coeffs.scaled(s))
    }

    /// Largest violation of the real-valuedness conditions
    /// (`Im α = 0`, `Im c_0 = 0`, `c_{-n} = conj(c_n)`).
    pub fn realness_defect(&self) -> f64 {
        let mut d = self.winding.im.abs().max(self.coeff(0).im.abs());
        for n in self.coeffs.indices().filter(|&n| n > 0) {
            d = d.max((self.coeff(-n) - self.coeff(n).conj()).mag());
        }
        for n in self.coeffs.indices().filter(|&n| n < 0) {
            d = d.max((self.coeff(n) - self.coeff(-n).conj()).mag());
        }
        d
    }

    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.realness_defect() <= tol * (1.0 + self.sup_norm())
    }
}

/// `p(z) = Σ p_n z^n` on the right wedge.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HoloLaurent(pub Coeffs);

/// `q(z) = Σ q_n z̄^n` on the right wedge.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AntiHoloLaurent(pub Coeffs);

impl HoloLaurent {
    pub fn coeffs(&self) -> &Coeffs {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.sup_norm()
    }

    pub fn product(&self, other: &Self) -> Self {
        HoloLaurent(self.0.convolve(&other.0))
    }

    pub fn minus(&self, other: &Self) -> Self {
        HoloLaurent(self.0.minus(&other.0))
    }

    /// Evaluate at `z = ρ e^{k'θ}`.
    pub fn eval_polar(&self, rho: f64, theta: f64) -> Result<SplitComplex> {
        check_rho(rho)?;
        let mut acc = SplitComplex::ZERO;
        for (n, p) in self.0.iter() {
            acc += p * SplitComplex::exp_hyper(n as f64 * theta)? * rho.powi(n);
        }
        finite(acc)
    }

    /// The restriction `θ ↦ p(e^{k'θ})`.
    pub fn restrict_unit(&self) -> SplitFourierSeries {
        SplitFourierSeries::new(SplitComplex::ZERO, self.0.clone())
    }
}

impl AntiHoloLaurent {
    pub fn coeffs(&self) -> &Coeffs {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Evaluate at `z = ρ e^{k'θ}`, so `z̄^n = ρ^n e^{-k'nθ}`.
    pub fn eval_polar(&self, rho: f64, theta: f64) -> Result<SplitComplex> {
        check_rho(rho)?;
        let mut acc = SplitComplex::ZERO;
        for (n, q) in self.0.iter() {
            acc += q * SplitComplex::exp_hyper(-(n as f64) * theta)? * rho.powi(n);
        }
        finite(acc)
    }

    /// The holomorphic map `z ↦ conj(q(z))`; since `conj(z̄^n) = z^n` this just
    /// conjugates every coefficient.
    pub fn conj_to_holo(&self) -> HoloLaurent {
        HoloLaurent(self.0.map(|_, q| q.conj()))
    }
}

fn finite(v: SplitComplex) -> Result<SplitComplex> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::OutOfRange("Laurent sum overflows".into()))
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("radius ρ = {rho} must be positive")))
    }
}

/// Pair of coefficients `(a_n, b_n)` multiplying `z^n` and `z̄^{-n}`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Term {
    pub a: SplitComplex,
    pub b: SplitComplex,
}

/// Split-harmonic map `λ Log z + μ Log z̄ + Σ a_n z^n + b_n z̄^{-n}`, with
/// `Log z = log ρ + k'θ` on the right wedge.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaurentMap {
    pub log_z: SplitComplex,
    pub log_zbar: SplitComplex,
    terms: BTreeMap<i32, Term>,
}

impl LaurentMap {
    pub fn new(log_z: SplitComplex, log_zbar: SplitComplex) -> Self {
        Self {
            log_z,
            log_zbar,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `z ↦ z`, the flat timelike plane's horizontal part.
    pub fn identity() -> Self {
        Self::zero().with_a(1, SplitComplex::ONE)
    }

    pub fn with_a(mut self, n: i32, a: SplitComplex) -> Self {
        let t = self.term(n);
        self.set_term(n, a, t.b);
        self
    }

    pub fn with_b(mut self, n: i32, b: SplitComplex) -> Self {
        let t = self.term(n);
        self.set_term(n, t.a, b);
        self
    }

    pub fn with_logs(mut self, log_z: SplitComplex, log_zbar: SplitComplex) -> Self {
        self.log_z = log_z;
        self.log_zbar = log_zbar;
        self
    }

    pub fn set_term(&mut self, n: i32, a: SplitComplex, b: SplitComplex) {
        if a.mag() > PRUNE_TOL || b.mag() > PRUNE_TOL {
            self.terms.insert(n, Term { a, b });
        } else {
            self.terms.remove(&n);
        }
    }

    pub fn term(&self, n: i32) -> Term {
        self.terms.get(&n).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Term)> + '_ {
        self.terms.iter().map(|(&n, &t)| (n, t))
    }

    pub fn sup_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|t| t.a.mag().max(t.b.mag()))
            .fold(self.log_z.mag().max(self.log_zbar.mag()), f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.log_z.is_finite()
            && self.log_zbar.is_finite()
            && self.terms.values().all(|t| t.a.is_finite() && t.b.is_finite())
    }

    pub fn eval(&self, rho: f64, theta: f64) -> Result<SplitComplex> {
        check_rho(rho)?;
        let log_rho = rho.ln();
        let mut acc = self.log_z * SplitComplex::new(log_rho, theta)
            + self.log_zbar * SplitComplex::new(log_rho, -theta);
        for (&n, t) in &self.terms {
            let radial = t.a * rho.powi(n) + t.b * rho.powi(-n);
            acc += radial * SplitComplex::exp_hyper(n as f64 * theta)?;
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(Error::OutOfRange(format!(
                "Laurent map overflows at (ρ, θ) = ({rho}, {theta})"
            )))
        }
    }

    /// Evaluate at a Cartesian point of the right wedge.
    pub fn eval_at(&self, z: SplitComplex) -> Result<SplitComplex> {
        let (rho, theta) = z.to_polar()?;
        self.eval(rho, theta)
    }

    /// `∂H/∂z`: `a_n z^n ↦ n a_n z^{n-1}` and `λ Log z ↦ λ z^{-1}`.
    pub fn dz(&self) -> HoloLaurent {
        let mut p = Coeffs::new();
        for (&n, t) in &self.terms {
            if n != 0 {
                p.add_at(n - 1, t.a * n as f64);
            }
        }
        p.add_at(-1, self.log_z);
        HoloLaurent(p.pruned())
    }

    /// `∂H/∂z̄`: `b_n z̄^{-n} ↦ -n b_n z̄^{-n-1}` and `μ Log z̄ ↦ μ z̄^{-1}`.
    pub fn dzbar(&self) -> AntiHoloLaurent {
        let mut q = Coeffs::new();
        for (&n, t) in &self.terms {
            if n != 0 {
                q.add_at(-n - 1, t.b * -(n as f64));
            }
        }
        q.add_at(-1, self.log_zbar);
        AntiHoloLaurent(q.pruned())
    }

    /// Winding of every restriction to a hyperbola `ρ = const`.
    pub fn winding(&self) -> SplitComplex {
        SplitComplex::K * (self.log_z - self.log_zbar)
    }

    pub fn restrict_unit(&self) -> SplitFourierSeries {
        let c = self.terms.iter().map(|(&n, t)| (n, t.a + t.b)).collect();
        SplitFourierSeries::new(self.winding(), c)
    }

    /// The boundary series `θ ↦ H(r e^{k'θ})`.
    pub fn restrict_rho(&self, r: f64) -> Result<SplitFourierSeries> {
        check_rho(r)?;
        let mut c: Coeffs = self
            .terms
            .iter()
            .map(|(&n, t)| (n, t.a * r.powi(n) + t.b * r.powi(-n)))
            .collect();
        c.add_at(0, (self.log_z + self.log_zbar) * r.ln());
        Ok(SplitFourierSeries::new(self.winding(), c.pruned()))
    }

    /// The series `θ ↦ ∂H/∂ρ (r e^{k'θ})`.
    pub fn drho_at(&self, r: f64) -> Result<SplitFourierSeries> {
        check_rho(r)?;
        let mut c: Coeffs = self
            .terms
            .iter()
            .filter(|(&n, _)| n != 0)
            .map(|(&n, t)| {
                let n_f = n as f64;
                (n, (t.a * r.powi(n - 1) - t.b * r.powi(-n - 1)) * n_f)
            })
            .collect();
        c.add_at(0, (self.log_z + self.log_zbar) / r);
        Ok(SplitFourierSeries::new(SplitComplex::ZERO, c.pruned()))
    }

    /// Largest violation of the conditions making `H` real-valued:
    /// `b_{-n} = conj(a_n)` for `n ≠ 0`, `a_0 + b_0` real, `λ = conj(μ)`.
    pub fn realness_defect(&self) -> f64 {
        let t0 = self.term(0);
        let mut d = (t0.a + t0.b)
            .im
            .abs()
            .max((self.log_z - self.log_zbar.conj()).mag());
        for &n in self.terms.keys().filter(|&&n| n != 0) {
            d = d.max((self.term(-n).b - self.term(n).a.conj()).mag());
        }
        d
    }

    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.realness_defect() <= tol * (1.0 + self.sup_norm())
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = LaurentMap::new(self.log_z * s, self.log_zbar * s);
        for (&n, t) in &self.terms {
            out.set_term(n, t.a * s, t.b * s);
        }
        out
    }

    /// Largest coefficient-wise difference between two maps.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut d = (self.log_z - other.log_z)
            .mag()
            .max((self.log_zbar - other.log_zbar).mag());
        for n in self.terms.keys().chain(other.terms.keys()) {
            let (x, y) = (self.term(*n), other.term(*n));
            d = d.max((x.a - y.a).mag()).max((x.b - y.b).mag());
        }
        d
    }
}

/// Laurent coefficients of `P = h_z · conj(h_z̄) − (ω_z)^2`. The pair `(h, ω)`
/// is conformal (hence a generalized timelike minimal surface when also
/// nondegenerate) exactly when `P` vanishes.
pub fn minimality_residual(h: &LaurentMap, omega: &LaurentMap) -> HoloLaurent {
    let hz = h.dz();
    let hzbar_conj = h.dzbar().conj_to_holo();
    let wz = omega.dz();
    hz.product(&hzbar_conj).minus(&wz.product(&wz))
}
