//! Exact invariants of defectless polynomials over the p-adic rationals.
//!
//! Given an optimal MacLane chain of an inductive valuation on `Q_p[x]` and a
//! monic irreducible `F` that is a key polynomial of its last valuation, this
//! crate computes the weight `w(F)`, the distances `delta_i` to an Okutsu
//! frame, the main invariant, the Krasner constant and the multiset `Omega`
//! of root distances, and cross-checks every closed formula against a
//! Newton-polygon computation of `Omega` from `F(x + theta)`.
//!
//! ```
//! use okutsu_core::{ground::rat, GroundContext, Level, MacLaneChain, OkutsuReport, Polynomial};
//!
//! let ctx = GroundContext::new(5).unwrap();
//! let chain = MacLaneChain::new(ctx, vec![
//!     Level::new("x".parse().unwrap(), rat(1, 2)),
//!     Level::new("x^2 - 5".parse().unwrap(), rat(5, 4)),
//! ]).unwrap();
//! let f: Polynomial = "(x^2 - 5)^2 - 25*x".parse().unwrap();
//! let report = OkutsuReport::new(&chain, &f).unwrap();
//! assert_eq!(report.weight, rat(5, 8));
//! assert_eq!(report.krasner, rat(3, 4));
//! ```

pub mod error;
pub mod generate;
pub mod ground;
pub mod maclane;
pub mod okutsu;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
pub use ground::{ExtRat, GroundContext, Rat, ValueGroup};
pub use maclane::{ChainInvariants, CheckReport, Level, MacLaneChain, NewtonPolygon, ValidationReport};
pub use okutsu::{OkutsuReport, ReportFlag, Tameness, ValueMultiset};
pub use oracle::{crosscheck, omega_via_newton, sample_weight, CrosscheckReport, SampleParams, Verdict};
pub use poly::Polynomial;
