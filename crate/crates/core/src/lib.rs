//! Finite, executable content of Hindman-type partition relations on abelian
//! groups: adequate-pattern search, the explicit colourings that defeat
//! monochromatic finite-sum sets, and exhaustive certificates for them.

pub mod colouring;
pub mod group;
mod parallel;
pub mod pattern;
pub mod search;
pub mod token;
pub mod verify;

pub use colouring::{ColourError, ColourMap, Colouring};
pub use group::{Element, FactorSpec, GroupError, GroupSpec, Order};
pub use pattern::{AdequacyReport, Pattern, PatternError};
pub use search::{search, search_with, Engine, SearchConfig, SearchError, SearchOutcome, SearchStatus};
pub use token::{ColourToken, MatrixEntry, Scalar};
pub use verify::{CertStatus, Certificate, VerifyConfig, VerifyError};
