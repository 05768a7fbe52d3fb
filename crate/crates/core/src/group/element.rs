use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::Value;

use super::spec::{Coord, GroupSpec};
use super::GroupError;
use crate::token::{ColourToken, Scalar};

/// An element of a [`GroupSpec`]: one canonical coordinate per factor.
#[derive(Clone)]
pub struct Element {
    spec: Arc<GroupSpec>,
    coords: Vec<Coord>,
}

/// Order of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Element {
    pub(crate) fn from_parts(spec: Arc<GroupSpec>, coords: Vec<Coord>) -> Self {
        Element { spec, coords }
    }

    /// Validating constructor.
    pub fn new(spec: Arc<GroupSpec>, coords: Vec<Coord>) -> Result<Self, GroupError> {
        if coords.len() != spec.rank() {
            return Err(GroupError::Parse(format!(
                "{} coordinates for a rank-{} group",
                coords.len(),
                spec.rank()
            )));
        }
        for (i, (f, c)) in spec.factors().iter().zip(&coords).enumerate() {
            if !f.check(c) {
                return Err(GroupError::Parse(format!("coordinate {i} ({c:?}) is not canonical for {f:?}")));
            }
        }
        Ok(Element { spec, coords })
    }

    /// Builds an element from integer coordinates, reducing residues.
    pub fn from_ints(spec: &Arc<GroupSpec>, values: &[i64]) -> Result<Self, GroupError> {
        if values.len() != spec.rank() {
            return Err(GroupError::Parse(format!(
                "{} coordinates for a rank-{} group",
                values.len(),
                spec.rank()
            )));
        }
        let coords = spec
            .factors()
            .iter()
            .zip(values)
            .map(|(f, v)| f.coord_from_int(&BigInt::from(*v)))
            .collect();
        Ok(Element { spec: spec.clone(), coords })
    }

    pub fn spec(&self) -> &Arc<GroupSpec> {
        &self.spec
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn same_group(&self, other: &Element) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec
    }

    fn ensure_same(&self, other: &Element) -> Result<(), GroupError> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(GroupError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, GroupError> {
        self.ensure_same(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Element) -> Element {
        let coords = self
            .spec
            .factors()
            .iter()
            .zip(self.coords.iter().zip(&other.coords))
            .map(|(f, (a, b))| f.add(a, b))
            .collect();
        Element { spec: self.spec.clone(), coords }
    }

    pub fn neg(&self) -> Element {
        let coords = self
            .spec
            .factors()
            .iter()
            .zip(&self.coords)
            .map(|(f, a)| f.neg(a))
            .collect();
        Element { spec: self.spec.clone(), coords }
    }

    pub fn sub(&self, other: &Element) -> Result<Element, GroupError> {
        self.add(&other.neg())
    }

    /// `k * self`.
    pub fn scale(&self, k: i64) -> Element {
        self.scale_big(&BigInt::from(k))
    }

    pub fn scale_big(&self, k: &BigInt) -> Element {
        let coords = self
            .spec
            .factors()
            .iter()
            .zip(&self.coords)
            .map(|(f, a)| f.scale(k, a))
            .collect();
        Element { spec: self.spec.clone(), coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Coord::is_zero)
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn supp(&self) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// The nonzero coordinates in increasing factor order.
    pub fn sigma(&self) -> Vec<Scalar> {
        self.coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(Coord::to_scalar)
            .collect()
    }

    pub fn sigma_token(&self) -> ColourToken {
        ColourToken::Seq(self.sigma())
    }

    /// `π_p`: zero every coordinate outside `I_p`.
    pub fn project(&self, p: u64) -> Element {
        let coords = self
            .spec
            .factors()
            .iter()
            .zip(&self.coords)
            .map(|(f, c)| if f.prime_class() == p { c.clone() } else { f.zero() })
            .collect();
        Element { spec: self.spec.clone(), coords }
    }

    /// Restriction to a set of factor indices (others zeroed).
    pub fn restrict(&self, indices: &[usize]) -> Element {
        let coords = self
            .spec
            .factors()
            .iter()
            .zip(&self.coords)
            .enumerate()
            .map(|(i, (f, c))| if indices.contains(&i) { c.clone() } else { f.zero() })
            .collect();
        Element { spec: self.spec.clone(), coords }
    }

    pub fn order(&self) -> Order {
        let mut acc = 1u64;
        for (f, c) in self.spec.factors().iter().zip(&self.coords) {
            match c {
                Coord::Residue(a) => {
                    let m = f.modulus().unwrap();
                    let o = m / a.gcd(&m);
                    acc = acc.lcm(&o);
                }
                other if other.is_zero() => {}
                _ => return Order::Infinite,
            }
        }
        Order::Finite(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(Coord::to_json).collect())
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.same_group(other)
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords).then_with(|| {
            if Arc::ptr_eq(&self.spec, &other.spec) {
                Ordering::Equal
            } else {
                self.spec.cmp(&other.spec)
            }
        })
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}
