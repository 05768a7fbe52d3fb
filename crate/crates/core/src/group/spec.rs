use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Element, GroupError};
use crate::token::{int_json, rational_json, Scalar};

/// Upper bound on the number of elements `GroupSpec::elements` will materialize.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// One direct summand of the ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorSpec {
    /// Residues modulo `m`.
    Cyclic { m: u64 },
    /// `{a / p^k mod 1}` inside the torus, stored as numerators `a` in `[0, p^k)`.
    PrimePower { p: u64, k: u32 },
    /// The integers; enumeration is clipped to `[-bound, bound]`.
    IntBox { bound: u64 },
    /// Rationals `a / den`; enumeration is clipped to `|a| <= bound * den`.
    RatBox { den: u64, bound: u64 },
}

impl FactorSpec {
    pub fn validate(&self) -> Result<(), GroupError> {
        let bad = |what: String| Err(GroupError::InvalidSpec(what));
        match *self {
            FactorSpec::Cyclic { m } if m < 2 => bad(format!("cyclic modulus {m} < 2")),
            FactorSpec::PrimePower { p, .. } if !is_prime(p) => bad(format!("{p} is not prime")),
            FactorSpec::PrimePower { k: 0, .. } => bad("prime power exponent must be >= 1".into()),
            FactorSpec::PrimePower { p, k } if p.checked_pow(k).is_none() => {
                bad(format!("{p}^{k} overflows"))
            }
            FactorSpec::IntBox { bound: 0 } => bad("integer box bound must be >= 1".into()),
            FactorSpec::RatBox { den: 0, .. } => bad("rational denominator must be >= 1".into()),
            FactorSpec::RatBox { bound: 0, .. } => bad("rational box bound must be >= 1".into()),
            _ => Ok(()),
        }
    }

    /// Group exponent of a torsion factor.
    pub fn modulus(&self) -> Option<u64> {
        match *self {
            FactorSpec::Cyclic { m } => Some(m),
            FactorSpec::PrimePower { p, k } => Some(p.pow(k)),
            _ => None,
        }
    }

    pub fn is_torsion(&self) -> bool {
        self.modulus().is_some()
    }

    /// The `p` with this factor's index in `I_p`; `0` for torsion-free factors.
    /// Cyclic factors are filed under the smallest prime dividing the modulus.
    pub fn prime_class(&self) -> u64 {
        match *self {
            FactorSpec::Cyclic { m } => smallest_prime_factor(m),
            FactorSpec::PrimePower { p, .. } => p,
            FactorSpec::IntBox { .. } | FactorSpec::RatBox { .. } => 0,
        }
    }

    /// Number of values the enumeration visits.
    pub fn enumeration_len(&self) -> u128 {
        match *self {
            FactorSpec::Cyclic { .. } | FactorSpec::PrimePower { .. } => {
                self.modulus().unwrap() as u128
            }
            FactorSpec::IntBox { bound } => 2 * bound as u128 + 1,
            FactorSpec::RatBox { den, bound } => 2 * bound as u128 * den as u128 + 1,
        }
    }

    pub fn zero(&self) -> Coord {
        match self {
            FactorSpec::Cyclic { .. } | FactorSpec::PrimePower { .. } => Coord::Residue(0),
            FactorSpec::IntBox { .. } => Coord::Int(BigInt::zero()),
            FactorSpec::RatBox { .. } => Coord::Rational(BigRational::zero()),
        }
    }

    /// Enumerated values in increasing canonical order.
    pub fn values(&self) -> Vec<Coord> {
        match *self {
            FactorSpec::Cyclic { .. } | FactorSpec::PrimePower { .. } => {
                (0..self.modulus().unwrap()).map(Coord::Residue).collect()
            }
            FactorSpec::IntBox { bound } => {
                let b = bound as i64;
                (-b..=b).map(|v| Coord::Int(BigInt::from(v))).collect()
            }
            FactorSpec::RatBox { den, bound } => {
                let top = (bound * den) as i64;
                let d = BigInt::from(den);
                (-top..=top)
                    .map(|a| Coord::Rational(BigRational::new(BigInt::from(a), d.clone())))
                    .collect()
            }
        }
    }

    /// Brings an integer into canonical form for this factor.
    pub fn coord_from_int(&self, v: &BigInt) -> Coord {
        match self.modulus() {
            Some(m) => Coord::Residue(v.mod_floor(&BigInt::from(m)).to_u64().unwrap()),
            None => match self {
                FactorSpec::IntBox { .. } => Coord::Int(v.clone()),
                _ => Coord::Rational(BigRational::from_integer(v.clone())),
            },
        }
    }

    pub(crate) fn check(&self, c: &Coord) -> bool {
        match (self, c) {
            (FactorSpec::Cyclic { .. } | FactorSpec::PrimePower { .. }, Coord::Residue(a)) => {
                *a < self.modulus().unwrap()
            }
            (FactorSpec::IntBox { .. }, Coord::Int(_)) => true,
            (FactorSpec::RatBox { .. }, Coord::Rational(_)) => true,
            _ => false,
        }
    }

    pub(crate) fn add(&self, a: &Coord, b: &Coord) -> Coord {
        match (a, b) {
            (Coord::Residue(x), Coord::Residue(y)) => {
                let m = self.modulus().unwrap() as u128;
                Coord::Residue(((*x as u128 + *y as u128) % m) as u64)
            }
            (Coord::Int(x), Coord::Int(y)) => Coord::Int(x + y),
            (Coord::Rational(x), Coord::Rational(y)) => Coord::Rational(x + y),
            _ => unreachable!("coordinate kinds are validated on construction"),
        }
    }

    pub(crate) fn scale(&self, k: &BigInt, a: &Coord) -> Coord {
        match a {
            Coord::Residue(x) => {
                let m = BigInt::from(self.modulus().unwrap());
                let v = (k.mod_floor(&m) * BigInt::from(*x)) % &m;
                Coord::Residue(v.to_u64().unwrap())
            }
            Coord::Int(x) => Coord::Int(k * x),
            Coord::Rational(x) => Coord::Rational(BigRational::from_integer(k.clone()) * x),
        }
    }

    pub(crate) fn neg(&self, a: &Coord) -> Coord {
        match a {
            Coord::Residue(0) => Coord::Residue(0),
            Coord::Residue(x) => Coord::Residue(self.modulus().unwrap() - x),
            Coord::Int(x) => Coord::Int(-x),
            Coord::Rational(x) => Coord::Rational(-x),
        }
    }
}

/// A canonical coordinate value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Residue(u64),
    Int(BigInt),
    Rational(BigRational),
}

impl Coord {
    pub fn is_zero(&self) -> bool {
        match self {
            Coord::Residue(a) => *a == 0,
            Coord::Int(x) => x.is_zero(),
            Coord::Rational(x) => x.is_zero(),
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            Coord::Residue(a) => Scalar::Int(BigInt::from(*a)),
            Coord::Int(x) => Scalar::Int(x.clone()),
            Coord::Rational(x) => Scalar::from_rational(x.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Coord::Residue(a) => Value::from(*a),
            Coord::Int(x) => int_json(x),
            Coord::Rational(x) => rational_json(x),
        }
    }
}

/// The ambient group: a finite direct sum of cyclic, Prüfer-truncation and
/// (enumeration-bounded) torsion-free factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawGroupSpec")]
pub struct GroupSpec {
    factors: Vec<FactorSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupSpec {
    factors: Vec<FactorSpec>,
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = GroupError;

    fn try_from(raw: RawGroupSpec) -> Result<Self, Self::Error> {
        GroupSpec::new(raw.factors)
    }
}

impl GroupSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::InvalidSpec("a group needs at least one factor".into()));
        }
        for f in &factors {
            f.validate()?;
        }
        Ok(GroupSpec { factors })
    }

    /// `(Z/mZ)^rank`.
    pub fn cyclic_power(m: u64, rank: usize) -> Result<Arc<Self>, GroupError> {
        Self::new(vec![FactorSpec::Cyclic { m }; rank]).map(Arc::new)
    }

    /// `rank` copies of `PrimePower(p, k)`.
    pub fn prime_power_power(p: u64, k: u32, rank: usize) -> Result<Arc<Self>, GroupError> {
        Self::new(vec![FactorSpec::PrimePower { p, k }; rank]).map(Arc::new)
    }

    /// `Z^rank` with enumeration clipped to `[-bound, bound]`.
    pub fn int_box(bound: u64, rank: usize) -> Result<Arc<Self>, GroupError> {
        Self::new(vec![FactorSpec::IntBox { bound }; rank]).map(Arc::new)
    }

    pub fn from_json_str(s: &str) -> Result<Arc<Self>, GroupError> {
        serde_json::from_str::<GroupSpec>(s)
            .map(Arc::new)
            .map_err(|e| GroupError::Parse(e.to_string()))
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("group specs always serialize")
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(FactorSpec::is_torsion)
    }

    pub fn cardinality(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        self.factors
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.enumeration_len()))
    }

    /// Size of the (clipped) enumeration, saturating on overflow.
    pub fn enumeration_len(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, f| acc.saturating_mul(f.enumeration_len()))
    }

    /// Distinct values of `p` with nonempty `I_p`, ascending (so `0` first).
    pub fn prime_classes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(FactorSpec::prime_class).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// `I_p`: factor indices whose prime class is `p`.
    pub fn index_set(&self, p: u64) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.prime_class() == p)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn zero(self: &Arc<Self>) -> Element {
        let coords = self.factors.iter().map(FactorSpec::zero).collect();
        Element::from_parts(self.clone(), coords)
    }

    /// The `i`-th standard generator (1 in factor `i`). For prime-power
    /// factors this is `1/p^k`.
    pub fn basis(self: &Arc<Self>, i: usize) -> Element {
        let mut coords: Vec<Coord> = self.factors.iter().map(FactorSpec::zero).collect();
        coords[i] = self.factors[i].coord_from_int(&BigInt::from(1));
        Element::from_parts(self.clone(), coords)
    }

    pub fn standard_basis(self: &Arc<Self>) -> Vec<Element> {
        (0..self.rank()).map(|i| self.basis(i)).collect()
    }

    /// All enumerated elements, lexicographic on canonical coordinate tuples.
    pub fn elements(self: &Arc<Self>) -> Result<Vec<Element>, GroupError> {
        let total = self.enumeration_len();
        if total > ENUMERATION_LIMIT {
            return Err(GroupError::SizeLimit {
                what: "group enumeration",
                size: total,
                limit: ENUMERATION_LIMIT,
            });
        }
        let per_factor: Vec<Vec<Coord>> = self.factors.iter().map(FactorSpec::values).collect();
        let mut out = Vec::with_capacity(total as usize);
        let mut digits = vec![0usize; self.rank()];
        loop {
            let coords = digits
                .iter()
                .zip(&per_factor)
                .map(|(&d, vals)| vals[d].clone())
                .collect();
            out.push(Element::from_parts(self.clone(), coords));
            // odometer, last factor fastest
            let mut pos = self.rank();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < per_factor[pos].len() {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    /// Parses an element: a JSON array with one entry per factor, integers for
    /// cyclic/prime-power/integer factors and `[num, den]` (or an integer) for
    /// rational factors. Residues are reduced into canonical range.
    pub fn element_from_json(self: &Arc<Self>, v: &Value) -> Result<Element, GroupError> {
        let arr = v
            .as_array()
            .ok_or_else(|| GroupError::Parse("element must be a JSON array".into()))?;
        if arr.len() != self.rank() {
            return Err(GroupError::Parse(format!(
                "element has {} coordinates, group has {} factors",
                arr.len(),
                self.rank()
            )));
        }
        let coords = arr
            .iter()
            .zip(&self.factors)
            .map(|(entry, f)| parse_coord(f, entry))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Element::from_parts(self.clone(), coords))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fac| match fac {
                FactorSpec::Cyclic { m } => format!("Z/{m}"),
                FactorSpec::PrimePower { p, k } => format!("Z[{p}^{k}]"),
                FactorSpec::IntBox { bound } => format!("Z|{bound}"),
                FactorSpec::RatBox { den, bound } => format!("Q/{den}|{bound}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn json_int(v: &Value) -> Option<BigInt> {
    if let Some(i) = v.as_i64() {
        return Some(BigInt::from(i));
    }
    if let Some(u) = v.as_u64() {
        return Some(BigInt::from(u));
    }
    v.as_str().and_then(|s| s.parse().ok())
}

fn parse_coord(f: &FactorSpec, v: &Value) -> Result<Coord, GroupError> {
    let bad = || GroupError::Parse(format!("cannot read {v} as a coordinate of {f:?}"));
    match f {
        FactorSpec::RatBox { .. } => {
            if let Some(i) = json_int(v) {
                return Ok(Coord::Rational(BigRational::from_integer(i)));
            }
            let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let num = json_int(&pair[0]).ok_or_else(bad)?;
            let den = json_int(&pair[1]).ok_or_else(bad)?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Coord::Rational(BigRational::new(num, den)))
        }
        _ => json_int(v).map(|i| f.coord_from_int(&i)).ok_or_else(bad),
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

/// `ord_p(v)` for a nonzero integer.
pub fn int_valuation(v: &BigInt, p: u64) -> u32 {
    debug_assert!(!v.is_zero());
    let p = BigInt::from(p);
    let mut v = v.abs();
    let mut k = 0;
    while (&v % &p).is_zero() {
        v /= &p;
        k += 1;
    }
    k
}

/// `ord_p(q)` for a nonzero rational: `q = p^i a/b` with `a, b` coprime to `p`.
pub fn rational_valuation(q: &BigRational, p: u64) -> i64 {
    int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64
}
