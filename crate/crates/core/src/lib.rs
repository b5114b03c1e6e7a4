//! Timelike minimal surfaces in Lorentz–Minkowski 3-space, built from
//! split-complex Fourier/Laurent coefficient algebra.
//!
//! A surface is a pair of Laurent maps `(h, ω)` on an annulus of the right
//! wedge of the split-complex plane; the point at `z` is
//! `(Re h, Im h, Re ω)`.

pub mod bjorling;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod interpolate;
pub mod io;
pub mod series;
pub mod split;
pub mod verify;

pub use bjorling::{solve_bjorling, BjorlingSolution, DegeneracyPolicy};
pub use error::{Error, Result};
pub use geometry::{Annulus, CausalCharacter, LVec3, SplitCurve, Surface};
pub use interpolate::{curve_interpolant, point_interpolant, radius_search, SearchReport, Target};
pub use series::{LaurentMap, SplitFourierSeries};
pub use split::SplitComplex;
pub use verify::{verify_surface, VerificationReport, VerifyConfig};
