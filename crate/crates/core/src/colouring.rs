//! The explicit colourings: Δ-matrices on Boolean groups, sum of squares on
//! integer boxes, product-σ, the ord₂-parity colouring, the valuation
//! colouring, plain σ, and seeded random colourings for identity checks.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::group::{is_prime, int_valuation, rational_valuation, Coord, Element, FactorSpec, GroupError};
use crate::token::{ColourToken, MatrixEntry};

/// Longest branch accepted (so that `2^kappa` branches index a `u64`).
pub const MAX_KAPPA: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColourError {
    #[error("unknown colouring id {0:?}")]
    UnknownId(String),
    #[error("colouring {id} is undefined here: {reason}")]
    Domain { id: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn domain<T>(id: &str, reason: impl Into<String>) -> Result<T, ColourError> {
    Err(ColourError::Domain { id: id.to_string(), reason: reason.into() })
}

/// A branch through the binary tree of height `kappa`: a 0/1 string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryBranch {
    bits: Vec<u8>,
}

impl BinaryBranch {
    pub fn new(bits: Vec<u8>) -> Result<Self, ColourError> {
        if bits.iter().any(|&b| b > 1) {
            return Err(ColourError::Parse("branch bits must be 0 or 1".into()));
        }
        Ok(BinaryBranch { bits })
    }

    /// Parses a string such as `"010"`.
    pub fn parse(s: &str) -> Result<Self, ColourError> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(ColourError::Parse(format!("bad branch {s:?}"))),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Ok(BinaryBranch { bits })
    }

    /// Branch number `j` of `2^kappa`, most significant bit first.
    pub fn from_index(kappa: usize, j: u64) -> Self {
        let bits = (0..kappa).map(|a| (j >> (kappa - 1 - a) & 1) as u8).collect();
        BinaryBranch { bits }
    }

    pub fn index(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| acc << 1 | b as u64)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

impl fmt::Display for BinaryBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// `Δ(f, g)`: the least index where the branches differ, `Top` if equal.
pub fn delta(f: &BinaryBranch, g: &BinaryBranch) -> Result<MatrixEntry, ColourError> {
    if f.len() != g.len() {
        return Err(ColourError::Parse(format!("branch lengths {} and {} differ", f.len(), g.len())));
    }
    Ok(match f.bits.iter().zip(&g.bits).position(|(a, b)| a != b) {
        Some(i) => MatrixEntry::Ordinal(i as u32),
        None => MatrixEntry::Top,
    })
}

/// A finite set of branches of one length, kept sorted; the group operation
/// is symmetric difference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchSet {
    kappa: usize,
    elems: Vec<BinaryBranch>,
}

impl BranchSet {
    pub fn new(kappa: usize, mut elems: Vec<BinaryBranch>) -> Result<Self, ColourError> {
        if elems.iter().any(|b| b.len() != kappa) {
            return Err(ColourError::Parse(format!("every branch must have length {kappa}")));
        }
        elems.sort();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(ColourError::Parse("repeated branch".into()));
        }
        Ok(BranchSet { kappa, elems })
    }

    /// Parses branch strings; the length is taken from the first one.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self, ColourError> {
        let elems = items
            .iter()
            .map(|s| BinaryBranch::parse(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        let kappa = elems.first().map_or(0, BinaryBranch::len);
        BranchSet::new(kappa, elems)
    }

    /// The set whose members are the branches numbered by the set bits of `mask`.
    pub fn from_mask(kappa: usize, mask: u64) -> Self {
        let elems = (0..1u64 << kappa)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| BinaryBranch::from_index(kappa, j))
            .collect();
        BranchSet { kappa, elems }
    }

    pub fn mask(&self) -> u64 {
        self.elems.iter().fold(0, |acc, b| acc | 1 << b.index())
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn elems(&self) -> &[BinaryBranch] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn sym_diff(&self, other: &BranchSet) -> BranchSet {
        let mut elems = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.elems, &other.elems);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Less => {
                        elems.push(x.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        elems.push(y.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                },
                (Some(x), None) => {
                    elems.push(x.clone());
                    i += 1;
                }
                (None, Some(y)) => {
                    elems.push(y.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        BranchSet { kappa: self.kappa, elems }
    }

    /// Reads an element of `(Z/2)^(2^kappa)`: member branches are the support.
    pub fn from_element(x: &Element) -> Result<Self, ColourError> {
        let rank = x.spec().rank();
        let boolean = x.spec().factors().iter().all(|f| f.modulus() == Some(2));
        if !boolean || !rank.is_power_of_two() || rank.trailing_zeros() as usize > MAX_KAPPA {
            return domain("delta", "needs a group (Z/2)^(2^kappa)");
        }
        let kappa = rank.trailing_zeros() as usize;
        let elems = x
            .supp()
            .into_iter()
            .map(|j| BinaryBranch::from_index(kappa, j as u64))
            .collect();
        Ok(BranchSet { kappa, elems })
    }
}

/// The Δ-matrix of a branch set, rows and columns in sorted order.
pub fn delta_colouring(x: &BranchSet) -> ColourToken {
    let rows = x
        .elems
        .iter()
        .map(|f| {
            x.elems
                .iter()
                .map(|g| delta(f, g).expect("branches of one set share a length"))
                .collect()
        })
        .collect();
    ColourToken::Matrix(rows)
}

/// `sum_a x(a)^2` for elements of torsion-free groups.
pub fn sum_squares(x: &Element) -> Result<ColourToken, ColourError> {
    let mut acc = BigRational::zero();
    for c in x.coords() {
        match c {
            Coord::Int(v) => acc += BigRational::from_integer(v * v),
            Coord::Rational(q) => acc += q * q,
            Coord::Residue(_) => return domain("sum_squares", "torsion factor present"),
        }
    }
    Ok(ColourToken::from_rational(acc))
}

/// `(sigma(pi_p(x)) | p)` over the prime classes of the group, `0` first.
pub fn product_sigma(x: &Element) -> ColourToken {
    let parts = x
        .spec()
        .prime_classes()
        .into_iter()
        .map(|p| x.project(p).sigma_token())
        .collect();
    ColourToken::Tuple(parts)
}

/// The value of a coordinate as an exact rational: residues of a factor with
/// exponent `m` read as `a / m` in `[0, 1)`.
fn coord_value(f: &FactorSpec, c: &Coord) -> BigRational {
    match c {
        Coord::Residue(a) => BigRational::new(BigInt::from(*a), BigInt::from(f.modulus().unwrap())),
        Coord::Int(v) => BigRational::from_integer(v.clone()),
        Coord::Rational(q) => q.clone(),
    }
}

/// Parity of `ord_2(q_x)`, where `q_x` is the first nonzero coordinate of the
/// least odd-or-zero prime class on which `x` is nonzero. Zero gets `Bit(0)`.
pub fn subgroup_parity(x: &Element) -> Result<ColourToken, ColourError> {
    if x.is_zero() {
        return Ok(ColourToken::Bit(0));
    }
    let spec = x.spec();
    for p in spec.prime_classes().into_iter().filter(|&p| p != 2) {
        let part = x.project(p);
        if let Some(&alpha) = part.supp().first() {
            let q = coord_value(&spec.factors()[alpha], &x.coords()[alpha]);
            let parity = rational_valuation(&q, 2).rem_euclid(2);
            return Ok(ColourToken::Bit(parity as u8));
        }
    }
    domain("subgroup_parity", "element is supported only on 2-primary factors")
}

/// Parity of the `a`-adic valuation of the first nonzero coordinate.
pub fn valuation(x: &Element, a: u64) -> Result<ColourToken, ColourError> {
    let id = format!("valuation:a={a}");
    if !is_prime(a) {
        return domain(&id, format!("{a} is not prime"));
    }
    let mut first = None;
    for c in x.coords() {
        match c {
            Coord::Int(v) => {
                if first.is_none() && !v.is_zero() {
                    first = Some(v);
                }
            }
            _ => return domain(&id, "needs integer coordinates"),
        }
    }
    match first {
        Some(v) => Ok(ColourToken::Bit((int_valuation(v, a) % 2) as u8)),
        None => domain(&id, "zero has no valuation colour"),
    }
}

/// Anything that colours group elements.
pub trait ColourMap: Sync {
    fn id(&self) -> String;
    fn colour(&self, x: &Element) -> Result<ColourToken, ColourError>;
}

/// A colouring addressable by its string id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Colouring {
    Delta,
    SumSquares,
    ProductSigma,
    SubgroupParity,
    Valuation { a: u64 },
    Sigma,
    Random(RandomColouring),
}

impl Colouring {
    /// Accepts `delta`, `sum_squares`, `product_sigma`, `subgroup_parity`,
    /// `valuation:a=<prime>`, `sigma` and `random:seed=<u64>,colours=<k>`.
    pub fn parse(id: &str) -> Result<Self, ColourError> {
        let unknown = || ColourError::UnknownId(id.to_string());
        Ok(match id {
            "delta" => Colouring::Delta,
            "sum_squares" => Colouring::SumSquares,
            "product_sigma" => Colouring::ProductSigma,
            "subgroup_parity" => Colouring::SubgroupParity,
            "sigma" => Colouring::Sigma,
            _ => {
                if let Some(a) = id.strip_prefix("valuation:a=") {
                    let a: u64 = a.parse().map_err(|_| unknown())?;
                    if !is_prime(a) {
                        return Err(ColourError::Parse(format!("valuation base {a} is not prime")));
                    }
                    Colouring::Valuation { a }
                } else if let Some(rest) = id.strip_prefix("random:") {
                    let mut seed = None;
                    let mut colours = None;
                    for kv in rest.split(',') {
                        match kv.split_once('=') {
                            Some(("seed", v)) => seed = v.parse().ok(),
                            Some(("colours", v)) => colours = v.parse().ok(),
                            _ => return Err(unknown()),
                        }
                    }
                    let (Some(seed), Some(colours)) = (seed, colours) else {
                        return Err(unknown());
                    };
                    Colouring::Random(RandomColouring::new(seed, colours)?)
                } else {
                    return Err(unknown());
                }
            }
        })
    }
}

impl ColourMap for Colouring {
    fn id(&self) -> String {
        match self {
            Colouring::Delta => "delta".into(),
            Colouring::SumSquares => "sum_squares".into(),
            Colouring::ProductSigma => "product_sigma".into(),
            Colouring::SubgroupParity => "subgroup_parity".into(),
            Colouring::Valuation { a } => format!("valuation:a={a}"),
            Colouring::Sigma => "sigma".into(),
            Colouring::Random(r) => r.id(),
        }
    }

    fn colour(&self, x: &Element) -> Result<ColourToken, ColourError> {
        match self {
            Colouring::Delta => Ok(delta_colouring(&BranchSet::from_element(x)?)),
            Colouring::SumSquares => sum_squares(x),
            Colouring::ProductSigma => Ok(product_sigma(x)),
            Colouring::SubgroupParity => subgroup_parity(x),
            Colouring::Valuation { a } => valuation(x, *a),
            Colouring::Sigma => Ok(x.sigma_token()),
            Colouring::Random(r) => r.colour(x),
        }
    }
}

/// A reproducible pseudo-random colouring of a finite group with `colours`
/// colours: the colour of `x` depends only on the seed and the position of
/// `x` in the group's enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomColouring {
    seed: u64,
    colours: u64,
}

impl RandomColouring {
    pub fn new(seed: u64, colours: u64) -> Result<Self, ColourError> {
        if colours == 0 {
            return Err(ColourError::Parse("a colouring needs at least one colour".into()));
        }
        Ok(RandomColouring { seed, colours })
    }
}

impl ColourMap for RandomColouring {
    fn id(&self) -> String {
        format!("random:seed={},colours={}", self.seed, self.colours)
    }

    fn colour(&self, x: &Element) -> Result<ColourToken, ColourError> {
        let mut rank: u128 = 0;
        for (f, c) in x.spec().factors().iter().zip(x.coords()) {
            match (f.modulus(), c) {
                (Some(m), Coord::Residue(a)) => rank = rank * m as u128 + *a as u128,
                _ => return domain(&self.id(), "needs a finite group"),
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(rank.to_u64().unwrap_or(u64::MAX));
        Ok(ColourToken::Int(BigInt::from(rng.random_range(0..self.colours))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use std::sync::Arc;

    fn br(s: &str) -> BinaryBranch {
        BinaryBranch::parse(s).unwrap()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&br("000"), &br("010")).unwrap(), MatrixEntry::Ordinal(1));
        assert_eq!(delta(&br("011"), &br("011")).unwrap(), MatrixEntry::Top);
        assert_eq!(delta(&br("011"), &br("100")).unwrap(), MatrixEntry::Ordinal(0));
        assert!(delta(&br("01"), &br("011")).is_err());
    }

    #[test]
    fn delta_matrices() {
        let x = BranchSet::parse(&["000", "010"]).unwrap();
        assert_eq!(delta_colouring(&x).to_string(), r#"[["TOP",1],[1,"TOP"]]"#);
        let one = BranchSet::parse(&["101"]).unwrap();
        assert_eq!(delta_colouring(&one).to_string(), r#"[["TOP"]]"#);
        // hand evaluation: Δ(000,001)=2, Δ(000,011)=1, Δ(001,011)=1
        let three = BranchSet::parse(&["011", "000", "001"]).unwrap();
        assert_eq!(
            delta_colouring(&three).to_string(),
            r#"[["TOP",2,1],[2,"TOP",1],[1,1,"TOP"]]"#
        );
        assert_eq!(delta_colouring(&BranchSet::parse::<&str>(&[]).unwrap()).to_string(), "[]");
    }

    #[test]
    fn branch_sets_and_masks() {
        let x = BranchSet::parse(&["000", "010"]).unwrap();
        assert_eq!(x.mask(), 0b101);
        assert_eq!(BranchSet::from_mask(3, 0b101), x);
        let y = BranchSet::parse(&["010", "111"]).unwrap();
        assert_eq!(x.sym_diff(&y), BranchSet::parse(&["000", "111"]).unwrap());
        assert!(BranchSet::parse(&["01", "01"]).is_err());
        assert!(BranchSet::parse(&["01", "011"]).is_err());
        let g = GroupSpec::cyclic_power(2, 8).unwrap();
        let e = Element::from_ints(&g, &[1, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(BranchSet::from_element(&e).unwrap(), x);
        assert!(BranchSet::from_element(&GroupSpec::cyclic_power(2, 6).unwrap().zero()).is_err());
    }

    #[test]
    fn sum_squares_examples() {
        let z = GroupSpec::int_box(5, 3).unwrap();
        let c = |v: &[i64]| sum_squares(&Element::from_ints(&z, v).unwrap()).unwrap().to_string();
        assert_eq!(c(&[1, -1, 0]), "2");
        assert_eq!(c(&[0, 0, 0]), "0");
        assert_eq!(c(&[3, 4, 0]), "25");
        let q = GroupSpec::from_json_str(r#"{"factors":[{"kind":"rat_box","den":2,"bound":2}]}"#).unwrap();
        let half = q.element_from_json(&serde_json::json!([[1, 2]])).unwrap();
        assert_eq!(sum_squares(&half).unwrap().to_string(), "[1,4]");
        assert!(sum_squares(&GroupSpec::cyclic_power(3, 1).unwrap().zero()).is_err());
    }

    fn pp(parts: &[(u64, u32)]) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::new(parts.iter().map(|&(p, k)| FactorSpec::PrimePower { p, k }).collect()).unwrap())
    }

    #[test]
    fn product_sigma_examples() {
        let g = pp(&[(3, 1), (3, 1), (5, 1)]);
        let x = Element::from_ints(&g, &[1, 0, 2]).unwrap();
        assert_eq!(product_sigma(&x).to_string(), "[[1],[2]]");
        assert_eq!(product_sigma(&g.zero()).to_string(), "[[],[]]");
        let mixed = GroupSpec::from_json_str(
            r#"{"factors":[{"kind":"rat_box","den":3,"bound":1},{"kind":"prime_power","p":3,"k":1}]}"#,
        )
        .unwrap();
        let y = mixed.element_from_json(&serde_json::json!([[2, 3], 0])).unwrap();
        assert_eq!(product_sigma(&y).to_string(), "[[[2,3]],[]]");
    }

    #[test]
    fn subgroup_parity_examples() {
        let g = pp(&[(3, 2)]);
        let bit = |a: i64| subgroup_parity(&Element::from_ints(&g, &[a]).unwrap()).unwrap();
        assert_eq!(bit(1), ColourToken::Bit(0));
        assert_eq!(bit(2), ColourToken::Bit(1));
        assert_eq!(bit(0), ColourToken::Bit(0));
        let q = GroupSpec::from_json_str(r#"{"factors":[{"kind":"rat_box","den":4,"bound":1}]}"#).unwrap();
        let x = q.element_from_json(&serde_json::json!([[3, 4]])).unwrap();
        assert_eq!(subgroup_parity(&x).unwrap(), ColourToken::Bit(0));
        let two = pp(&[(2, 2)]);
        assert!(subgroup_parity(&Element::from_ints(&two, &[1]).unwrap()).is_err());
    }

    #[test]
    fn valuation_examples() {
        let z = GroupSpec::int_box(10, 3).unwrap();
        let c = |v: &[i64], a| valuation(&Element::from_ints(&z, v).unwrap(), a).unwrap();
        assert_eq!(c(&[4, 3, 0], 2), ColourToken::Bit(0));
        assert_eq!(c(&[6, 0, 0], 2), ColourToken::Bit(1));
        assert_eq!(c(&[0, 9, 0], 3), ColourToken::Bit(0));
        assert!(valuation(&z.zero(), 2).is_err());
        assert!(valuation(&Element::from_ints(&z, &[1, 0, 0]).unwrap(), 4).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for id in [
            "delta",
            "sum_squares",
            "product_sigma",
            "subgroup_parity",
            "valuation:a=3",
            "sigma",
            "random:seed=7,colours=3",
        ] {
            assert_eq!(Colouring::parse(id).unwrap().id(), id);
        }
        assert!(matches!(Colouring::parse("rainbow"), Err(ColourError::UnknownId(_))));
        assert!(Colouring::parse("valuation:a=6").is_err());
    }

    #[test]
    fn random_colouring_is_reproducible() {
        let g = GroupSpec::cyclic_power(5, 3).unwrap();
        let c = RandomColouring::new(11, 4).unwrap();
        let first: Vec<_> = g.elements().unwrap().iter().map(|x| c.colour(x).unwrap()).collect();
        let again: Vec<_> = g.elements().unwrap().iter().map(|x| c.colour(x).unwrap()).collect();
        assert_eq!(first, again);
        let distinct: std::collections::BTreeSet<_> = first.iter().collect();
        assert_eq!(distinct.len(), 4);
        assert!(c.colour(&GroupSpec::int_box(1, 1).unwrap().zero()).is_err());
    }
}
