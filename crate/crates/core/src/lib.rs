//! Noncommutative difference-quotient calculus over matrix scalars.
//!
//! The crate has three layers:
//!
//! * a symbolic layer: polynomials `B⟨X₁…Xₙ⟩` with `B = M_q(ℂ)`, tensor
//!   powers, partial difference quotients `∂ᵢ` with `∂ᵢXⱼ = δᵢⱼ 1⊗1`,
//!   degree-truncated series and corepresentations, and the reduction of a
//!   `p²`-variable ring to one matrix variable ([`ncalg`], [`tensor`],
//!   [`dq`], [`series`], [`matlift`]);
//! * a numerical layer: sites `(E = M_d, B ⊆ E, Y)`, full `B`-resolvents,
//!   fully matricial sets and functions, the matricial difference quotient
//!   read off block corners, Choi-matrix positivity, functionals on `E` and
//!   the full resolvent transform ([`resolvent`], [`fm`], [`fmdq`],
//!   [`positivity`], [`duality`]);
//! * a law-checking layer: every algebraic identity the library relies on is
//!   also a runnable randomized check producing a [`report::LawReport`].

pub mod dq;
pub mod duality;
pub mod error;
pub mod fm;
pub mod fmdq;
pub mod linalg;
pub mod matlift;
pub mod ncalg;
pub mod positivity;
pub mod report;
pub mod resolvent;
pub mod sampler;
pub mod series;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{CMat, C64};
pub use ncalg::{BasisWord, Context, NCPoly};
pub use report::LawReport;
pub use resolvent::{ResolventPoint, Site};
pub use sampler::{Sampler, SamplerConfig};
pub use series::{MatSeries, NCSeries};
pub use tensor::TensorPoly;
