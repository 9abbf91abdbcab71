// SPDX-License-Identifier: Apache-2.0

//! Exact arithmetic for orders in quadratic fields.
//!
//! The crate computes the invariants that control factorization in the order
//! `O_f = Z + f·τ_D·Z` of conductor `f` inside a quadratic field `Q(√D)`:
//!
//! * the pre-class group `PreCl(O_f) = (O_K/fO_K)^× / (Z/fZ)^×`, its order
//!   `ψ(f)`, the lcm `L(f)` of its prime-power orders, and its structure;
//! * the image `𝒰_f` of the unit group and its size `ℓ(f)`, and the quotient
//!   `PrinCl(O_f)`;
//! * Davenport constants of finite abelian groups (exact or bounded);
//! * elasticity intervals, half-factoriality verdicts and the campaign
//!   drivers that check the surrounding theory at desk scale.
//!
//! All verdicts use integer or exact rational arithmetic.

pub mod abelian;
pub mod arith;
pub mod classnum;
pub mod elasticity;
mod error;
pub mod experiments;
pub mod quadfield;
pub mod residue;

pub use abelian::{AbelianGroup, DavenportMethod, DavenportResult, Presentation};
pub use arith::{FactoredInteger, PartialFactorization, Primality};
pub use elasticity::{ElasticityInterval, HfdCondition, HfdVerdict, UpperBound, Verdict};
pub use error::{Error, Result};
pub use experiments::{PellRecord, ScanReport, VerifyConfig};
pub use quadfield::{FundamentalUnit, QuadField, SplittingType, TauKind};
pub use residue::{PreClElement, ResidueElement, ResidueRing};

/// Version string stamped into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
