//! # quadforge
//!
//! Discovery, verification and export of quadrature rules that integrate
//! products of 2D/3D trunk (serendipity) polynomial spaces exactly with
//! fewer points than tensor-product Gaussian quadrature.
//!
//! The pipeline:
//!
//! 1. [`polyspace`] builds the downward-closed exponent set of a trunk
//!    space, its Minkowski-square product set, and an orthonormal
//!    shifted-Legendre basis with known exact integrals.
//! 2. [`quadrature`] scores candidate rules by the exactness loss
//!    `L² = Σᵢ eᵢ²` over the product basis and supplies its analytic
//!    gradient.
//! 3. [`optimizer`] runs restarted Yogi gradient descent over point
//!    coordinates and weights until `L²` falls below threshold, adaptively
//!    incrementing the point count when a restart budget is exhausted.
//!    Restarts execute in parallel when the `parallel` feature (default) is
//!    enabled, with results identical to a sequential run.
//! 4. [`verifier`] re-checks every discovered rule against an independent
//!    tensor-product Gauss oracle and validates the cardinality formulas.
//! 5. [`ruleio`] and [`plot`] persist rules as canonical JSON, CSV or plain
//!    text, and render them as SVG.
//!
//! ```
//! use quadforge::{optimizer, polyspace::Dim, verifier};
//!
//! let config = optimizer::SearchConfig {
//!     max_restarts_per_q: 50,
//!     ..Default::default()
//! };
//! let report = optimizer::search(Dim::Two, 1, &config).unwrap();
//! let rule = report.rule.expect("the bilinear case converges quickly");
//! let check = verifier::verify_rule(&rule, 1, verifier::DEFAULT_VERIFY_TOLERANCE).unwrap();
//! assert_eq!(check.verdict, verifier::Verdict::Exact);
//! ```

pub mod error;
pub mod optimizer;
pub mod plot;
pub mod polyspace;
pub mod quadrature;
pub mod ruleio;
pub mod verifier;

pub use error::{Error, Result};
pub use optimizer::{search, SearchConfig, SearchReport};
pub use polyspace::{Dim, ExponentSet, MultiIndex, SpaceBasis};
pub use quadrature::{
    gaussian_point_count, integration_errors, loss, q_lower_bound, savings, QuadratureRule,
};
pub use ruleio::RuleFile;
pub use verifier::{verify_rule, VerificationReport, Verdict};
