//! Constructive synthesis of bump functions and Borel extension operators.
//!
//! The central engineering decision: compactly supported bumps are built as
//! iterated convolutions of normalized boxes u = B_{a_1} * ... * B_{a_K},
//! computed through the spectral product of box transforms (each box
//! contributes a phase times a cardinal sine, and the K-fold product decays
//! like |omega|^{-K}, so the neglected spectral tail is far below 1e-10 at the
//! grid sizes used). The plateau profile psi(y) = 1 - int_{-L}^y u is obtained
//! by exact antidifferentiation of the band-limited synthesis and then
//! *snapped*: samples that are provably 1 (or 0) to numerical precision are
//! stored as exactly 1.0 (or 0.0), keeping the flatness at zero structural
//! rather than numerically incidental. High-order derivative checks at 0
//! depend on that exactness.
//!
//! A synthesized function is stored as a smooth cofactor (samples + spectrum)
//! together with an optional analytic monomial factor applied in the spatial
//! domain; differentiation combines the two by the Leibniz rule so that the
//! numerically hostile part (the monomial) is handled exactly.

mod bump;
mod chi;
mod deriv;
mod extend;
mod rep;
mod vanish;

pub use bump::{build_bump, build_bump_on, Bump, BumpPlan};
pub use chi::{build_chi, choose_parameters, Chi};
pub use deriv::{derivative_at_zero, derivative_at_zero_lenient, sup_derivative, DerivAtZero, SupDeriv};
pub use extend::{
    extend, BoundLedgerEntry, ExtensionOperator, ExtensionParams, ExtensionResult,
    TruncationReport,
};
pub use rep::{FunctionRep, Grid, MonomialFactor};
pub use vanish::{vanishing_bound_check, VanishingLedger};
