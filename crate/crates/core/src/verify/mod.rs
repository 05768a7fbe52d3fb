//! Exhaustive oracles over bounded domains. Each returns a [`Certificate`];
//! counterexample witnesses are re-evaluated with direct colouring calls
//! before they are reported.

mod delta_system;
mod fs;
mod groups;

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::colouring::ColourError;
use crate::group::{Element, GroupError, GroupSpec};
use crate::pattern::PatternError;

pub use delta_system::{
    delta_system_exhaustive, delta_system_find, delta_system_greedy, prime_exponent_extract, DeltaSystem,
    Extraction, ExtractError, ExtractStage, EXHAUSTIVE_THRESHOLD,
};
pub use fs::{
    check_fs_matrix_identities, delta_descent_check, find_monochromatic_fs, fs_support_growth_check, MatrixSplit,
};
pub use groups::{
    find_monochromatic_ap, find_monochromatic_span, find_monochromatic_subgroup, find_monochromatic_subgroup_in,
    no_seven_norms, LATTICE_LIMIT,
};

/// Version of the enumeration orders that certificates refer to.
pub const ORDER_VERSION: u32 = 1;
/// Default enumeration budget (nodes, tuples or elements, per oracle).
pub const DEFAULT_BUDGET: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("witness failed re-verification: {0}")]
    Witness(String),
    #[error(transparent)]
    Colour(#[from] ColourError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

pub(crate) fn precondition<T>(s: impl Into<String>) -> Result<T, VerifyError> {
    Err(VerifyError::Precondition(s.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertStatus {
    Verified,
    Counterexample,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub domain: Value,
    pub status: CertStatus,
    pub enumerated: u64,
    pub witness: Option<Value>,
    pub order_version: u32,
}

impl Certificate {
    pub(crate) fn new(claim: &str, domain: Value, status: CertStatus, enumerated: u64, witness: Option<Value>) -> Self {
        Certificate { claim: claim.to_string(), domain, status, enumerated, witness, order_version: ORDER_VERSION }
    }

    pub fn is_verified(&self) -> bool {
        self.status == CertStatus::Verified
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificates always serialize")
    }
}

/// Enumeration budget and worker count for the sharded oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub budget: u64,
    pub threads: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { budget: DEFAULT_BUDGET, threads: 1 }
    }
}

/// A finite list of elements to search, with a description for certificates.
#[derive(Debug, Clone)]
pub struct Domain {
    pub description: Value,
    pub elements: Vec<Element>,
}

pub(crate) fn spec_json(spec: &GroupSpec) -> Value {
    serde_json::from_str(&spec.to_canonical_json()).expect("group specs serialize")
}

impl Domain {
    pub fn new(description: Value, elements: Vec<Element>) -> Self {
        Domain { description, elements }
    }

    /// All nonzero elements of `spec`, in enumeration order.
    pub fn nonzero(spec: &Arc<GroupSpec>) -> Result<Self, VerifyError> {
        let elements = spec.elements()?.into_iter().filter(|x| !x.is_zero()).collect();
        Ok(Domain { description: json!({"group": spec_json(spec), "nonzero": true}), elements })
    }

    /// Branch sets of size `1..=max_set` over `2^kappa` branches, as
    /// elements of `(Z/2)^(2^kappa)` in enumeration order.
    pub fn branch_sets(kappa: usize, max_set: usize) -> Result<Self, VerifyError> {
        if kappa == 0 || kappa > 4 {
            return precondition(format!("kappa {kappa} outside 1..=4"));
        }
        let spec = GroupSpec::cyclic_power(2, 1 << kappa)?;
        let elements = spec
            .elements()?
            .into_iter()
            .filter(|x| (1..=max_set).contains(&x.supp().len()))
            .collect();
        Ok(Domain { description: json!({"kappa": kappa, "max_set": max_set}), elements })
    }
}

pub(crate) fn elements_json(xs: &[Element]) -> Value {
    Value::Array(xs.iter().map(Element::to_json).collect())
}
