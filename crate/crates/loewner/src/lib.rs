//! Loewner-framework identification of reduced descriptor models from
//! frequency-response data, including non-proper systems whose transfer
//! function grows like P0 + s·P1 at high frequencies.
//!
//! The pipeline: tangential samples are split into left and right sets
//! ([`data::partition`]), assembled into the Loewner and shifted Loewner
//! matrices ([`pencil::build_quadruple`]), and reduced to a descriptor
//! realization of the numerical rank ([`pencil::reduce`]). Plain rational
//! interpolation misrepresents data with polynomial growth, so two
//! extensions handle it:
//!
//! - [`poly`]: estimate P0 and P1 explicitly from a high-frequency window,
//!   subtract them, and fit the remainder ([`poly::fit_poly_loewner`]).
//! - [`barycentric`]: fit a barycentric form with a free numerator term
//!   that carries the growth implicitly ([`barycentric::fit_poly_aa`]).
//!
//! [`synth`] generates test systems with known polynomial parts, [`data`]
//! reads and writes the CSV/JSON sample formats, and [`cli`] wires it all
//! into the `loewner` binary (`fit`, `eval`, `compare`, `bench`).
//!
//! The `examples/` directory walks through each capability end to end:
//! `plain_fit`, `nonproper_fit`, `barycentric_fit`, `method_comparison`,
//! `mimo_tangential`, and `descriptor_dae`.

pub mod barycentric;
pub mod cli;
pub mod data;
pub mod error;
pub mod linalg;
pub mod pencil;
pub mod poly;
pub mod synth;

pub use error::{Error, Result};
