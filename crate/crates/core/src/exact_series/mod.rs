//! Exact Laurent–Puiseux series over the rationals.

pub mod analytic;
pub mod error;
pub mod laurent;
pub mod poly2;
pub mod puiseux;
pub mod rational;
pub mod roots;
pub mod tri;

pub use error::{SeriesError, SeriesResult};
pub use laurent::{LaurentPoly, XPart};
pub use puiseux::PuiseuxSeries;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use roots::{puiseux_roots, quadratic_branch, RootSeries};
pub use tri::TriLaurent;
