//! Geometry of a one-parameter class of Kähler (and Kähler–Einstein)
//! structures on the slit cotangent bundle of a round base.
//!
//! The base is a space of positive constant sectional curvature in a
//! conformal chart. On the slit cotangent bundle (zero section removed)
//! the crate builds, for a family of radial profiles, an almost complex
//! structure and a compatible metric of diagonal type in the adapted
//! local frame, and then certifies the claimed structure numerically at
//! arbitrary points:
//!
//! * the structure squares to minus the identity and is integrable
//!   exactly at the canonical antidiagonal scale;
//! * the metric is Hermitian and its fundamental form is closed exactly
//!   in the balanced mode, making the pair Kähler;
//! * the Levi-Civita connection of the lifted metric has explicit
//!   coefficient tables, verified against its defining properties;
//! * the curvature has a six-block closed form, checked against an
//!   independent coordinate-route evaluation;
//! * the Ricci form is block diagonal with scalar closed forms, and the
//!   Einstein condition reduces to a first-order equation in the
//!   antidiagonal profile, solved by an explicit quadrature;
//! * the resulting spaces have non-constant holomorphic sectional
//!   curvature and are not locally symmetric, which is certified
//!   through the covariant derivative of the curvature.
//!
//! Everything is evaluated with a small forward-mode automatic
//! differentiation core, so all differential identities are checked
//! honestly rather than symbolically.

pub mod ad;
pub mod base;
pub mod connection;
pub mod curvature;
pub mod curves;
pub mod einstein;
pub mod error;
pub mod frame;
pub mod lift;
pub mod quad;
pub mod ricci;
pub mod tensor;

pub use ad::{derive1, derive2, gradient, Dual, Real, Smooth1};
pub use base::BaseSpace;
pub use connection::{qps_explicit, qps_generic, ConnectionCoeffs};
pub use curvature::{curvature_blocks, curvature_frame, curvature_frame_direct, CurvatureBlocks};
pub use curves::{B1Curve, Curve, MuMode};
pub use einstein::SolvedB1;
pub use error::{GeometryError, Result};
pub use lift::{Family, FiberScalars};
pub use tensor::{Mat, T3, T4};
