//! Adequate patterns: `n` rows in `(Z/mZ)^l` (or `Z^l` when `m = 0`) whose
//! nonempty subset-sums all share one nonempty sigma value.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{
    first_dependence, fs_formal, Element, FactorSpec, GroupError, GroupSpec, Order, DEFAULT_FS_LIMIT,
};

/// Largest row count accepted; subset-sums are enumerated by bitmask.
pub const MAX_ROWS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid pattern: {0}")]
    Invalid(String),
    #[error("lift precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct Pattern {
    n: usize,
    m: u64,
    l: usize,
    rows: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawPattern {
    n: usize,
    m: u64,
    l: usize,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<RawPattern> for Pattern {
    type Error = PatternError;

    fn try_from(raw: RawPattern) -> Result<Self, Self::Error> {
        let p = Pattern::new(raw.m, raw.rows)?;
        if p.n != raw.n || p.l != raw.l {
            return Err(PatternError::Invalid(format!(
                "declared {}x{} but rows are {}x{}",
                raw.n, raw.l, p.n, p.l
            )));
        }
        Ok(p)
    }
}

impl Pattern {
    /// Rows must be nonzero, pairwise distinct, of one common length, and
    /// reduced into `[0, m)` when `m >= 2`. `m = 1` is rejected.
    pub fn new(m: u64, rows: Vec<Vec<i64>>) -> Result<Self, PatternError> {
        let bad = |s: String| Err(PatternError::Invalid(s));
        if m == 1 {
            return bad("modulus 1 has no nonzero entries".into());
        }
        let n = rows.len();
        if n == 0 || n > MAX_ROWS {
            return bad(format!("row count {n} outside 1..={MAX_ROWS}"));
        }
        let l = rows[0].len();
        if l == 0 {
            return bad("rows must have at least one column".into());
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != l {
                return bad(format!("row {i} has length {}, expected {l}", row.len()));
            }
            if m >= 2 && row.iter().any(|&v| v < 0 || v as u64 >= m) {
                return bad(format!("row {i} has entries outside [0, {m})"));
            }
            if row.iter().all(|&v| v == 0) {
                return bad(format!("row {i} is zero"));
            }
            if rows[..i].contains(row) {
                return bad(format!("row {i} repeats an earlier row"));
            }
        }
        Ok(Pattern { n, m, l, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("patterns always serialize")
    }

    /// Coordinatewise sum of two rows in this pattern's arithmetic.
    pub fn add_rows(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| reduce(x + y, self.m)).collect()
    }

    /// Rows permuted so that row `i` of the result is `rows[perm[i]]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Pattern, PatternError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&i| i >= self.n || std::mem::replace(&mut seen[i], true)) {
            return Err(PatternError::Invalid("not a permutation of the rows".into()));
        }
        Pattern::new(self.m, perm.iter().map(|&i| self.rows[i].clone()).collect())
    }

    /// Every entry multiplied by the unit `u`.
    pub fn scale(&self, u: i64) -> Result<Pattern, PatternError> {
        if !units(self.m).contains(&reduce(u, self.m)) {
            return Err(PatternError::Invalid(format!("{u} is not a unit modulo {}", self.m)));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| reduce(v * u, self.m)).collect())
            .collect();
        Pattern::new(self.m, rows)
    }

    pub fn append_zero_column(&self) -> Pattern {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().copied().chain([0]).collect())
            .collect();
        Pattern { n: self.n, m: self.m, l: self.l + 1, rows }
    }

    /// Columns that are zero in every row.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.l)
            .filter(|&j| self.rows.iter().all(|r| r[j] == 0))
            .collect()
    }
}

/// Canonical representative of `v` in `Z/mZ`; identity when `m = 0`.
pub fn reduce(v: i64, m: u64) -> i64 {
    if m == 0 {
        v
    } else {
        v.rem_euclid(m as i64)
    }
}

/// Units of `Z/mZ` in `[1, m)`; `{1, -1}` for the integers.
pub fn units(m: u64) -> Vec<i64> {
    match m {
        0 => vec![1, -1],
        1 => vec![0],
        _ => (1..m).filter(|u| u.gcd(&m) == 1).map(|u| u as i64).collect(),
    }
}

pub fn sigma_of(row: &[i64]) -> Vec<i64> {
    row.iter().copied().filter(|&v| v != 0).collect()
}

/// A subset of rows (by index) and the sigma of its sum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetSigma {
    pub subset: Vec<usize>,
    pub sigma: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdequacyReport {
    pub adequate: bool,
    /// The common sigma value when adequate.
    pub signature: Option<Vec<i64>>,
    /// Two subset-sums with differing sigma when inadequate.
    pub witness: Option<(SubsetSigma, SubsetSigma)>,
}

/// Checks all `2^n - 1` nonempty subset-sums against the sigma of row 0. The
/// witness is the first disagreeing subset in mask order.
pub fn is_adequate(p: &Pattern) -> AdequacyReport {
    let n = p.n;
    let mut sums: Vec<Vec<i64>> = Vec::with_capacity(1 << n);
    sums.push(vec![0; p.l]);
    let reference = sigma_of(&p.rows[0]);
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let s = p.add_rows(&sums[mask & (mask - 1)], &p.rows[low]);
        let sig = sigma_of(&s);
        if sig != reference || sig.is_empty() {
            let subset = |mk: usize| (0..n).filter(|i| mk >> i & 1 == 1).collect();
            return AdequacyReport {
                adequate: false,
                signature: None,
                witness: Some((
                    SubsetSigma { subset: subset(1), sigma: reference },
                    SubsetSigma { subset: subset(mask), sigma: sig },
                )),
            };
        }
        sums.push(s);
    }
    AdequacyReport { adequate: true, signature: Some(reference), witness: None }
}

/// `((1, -1, 0), (0, 1, -1))`, with `-1` written `m - 1` when `m >= 2`.
pub fn canonical_2_adequate(m: u64) -> Pattern {
    let minus = reduce(-1, m);
    Pattern::new(m, vec![vec![1, minus, 0], vec![0, 1, minus]])
        .expect("the two rows are distinct and nonzero for every m != 1")
}

/// Closure cap used when certifying independence of lifting generators.
pub const LIFT_CLOSURE_CAP: usize = 1 << 16;

/// Certifies that `g` is an independent sequence: nonzero generators with
/// pairwise-disjoint supports are independent outright, anything else is
/// checked by subgroup closure with at most `cap` elements.
pub(crate) fn certify_independent(
    spec: &Arc<GroupSpec>,
    g: &[Element],
    cap: usize,
) -> Result<(), PatternError> {
    let supports: Vec<Vec<usize>> = g.iter().map(Element::supp).collect();
    let disjoint = supports
        .iter()
        .enumerate()
        .all(|(i, a)| !a.is_empty() && supports[..i].iter().all(|b| a.iter().all(|x| !b.contains(x))));
    if disjoint {
        return Ok(());
    }
    match first_dependence(spec, g, cap) {
        Ok(None) => Ok(()),
        Ok(Some(i)) => Err(PatternError::Precondition(format!(
            "generator {i} lies in the subgroup generated by its predecessors"
        ))),
        Err(GroupError::ClosureOverflow { .. }) => Err(PatternError::Precondition(
            "independence could not be certified: closure too large and supports overlap".into(),
        )),
        Err(e) => Err(e.into()),
    }
}

/// Lifts a pattern into a group: `y_i = sum_j rows[i][j] * g[beta[j]]`, with
/// rows zero-padded on the right when `beta` is longer than the pattern.
pub fn lift(p: &Pattern, g: &[Element], beta: &[usize]) -> Result<Vec<Element>, PatternError> {
    let pre = |s: String| Err(PatternError::Precondition(s));
    let Some(first) = g.first() else {
        return pre("no generators".into());
    };
    let spec = first.spec().clone();
    if g.iter().any(|x| !x.same_group(first)) {
        return Err(GroupError::SpecMismatch.into());
    }
    if beta.len() < p.l {
        return pre(format!("{} positions for {} columns", beta.len(), p.l));
    }
    if beta.windows(2).any(|w| w[0] >= w[1]) || beta.iter().any(|&b| b >= g.len()) {
        return pre("positions must be strictly increasing indices into g".into());
    }
    for (i, x) in g.iter().enumerate() {
        let ok = match (p.m, x.order()) {
            (0, Order::Infinite) => true,
            (0, _) => false,
            (m, Order::Finite(o)) => o == m,
            _ => false,
        };
        if !ok {
            return pre(format!("generator {i} has order {:?}, pattern modulus is {}", x.order(), p.m));
        }
    }
    certify_independent(&spec, g, LIFT_CLOSURE_CAP)?;
    let zero = spec.zero();
    Ok(p.rows
        .iter()
        .map(|row| {
            row.iter().zip(beta).fold(zero.clone(), |acc, (&k, &b)| {
                if k == 0 {
                    acc
                } else {
                    acc.add_unchecked(&g[b].scale(k))
                }
            })
        })
        .collect())
}

/// Brute force over `n`-subsets of `G \ {0}` (lexicographic order) for one
/// whose finite sums share a single sigma value. `G` must be `(Z/mZ)^l`.
pub fn sigma_colouring_check(spec: &Arc<GroupSpec>, n: usize) -> Result<Option<Pattern>, PatternError> {
    let m = match spec.factors().first() {
        Some(FactorSpec::Cyclic { m }) if spec.factors().iter().all(|f| *f == FactorSpec::Cyclic { m: *m }) => *m,
        _ => return Err(PatternError::Invalid("sigma check needs a group (Z/mZ)^l".into())),
    };
    if n == 0 || n > MAX_ROWS {
        return Err(PatternError::Invalid(format!("row count {n} outside 1..={MAX_ROWS}")));
    }
    let nonzero: Vec<Element> = spec.elements()?.into_iter().filter(|x| !x.is_zero()).collect();
    let mut found = None;
    for_each_combination(nonzero.len(), n, |idx| {
        let xs: Vec<Element> = idx.iter().map(|&i| nonzero[i].clone()).collect();
        let formal = fs_formal(&xs, DEFAULT_FS_LIMIT).expect("distinct elements within the size limit");
        let s0 = formal[0].value.sigma();
        if formal.iter().all(|f| f.value.sigma() == s0) {
            found = Some(xs);
            return false;
        }
        true
    });
    let Some(xs) = found else {
        return Ok(None);
    };
    let rows = xs
        .iter()
        .map(|x| x.coords().iter().map(|c| c.to_scalar()).map(|s| scalar_to_i64(&s)).collect())
        .collect();
    let p = Pattern::new(m, rows)?;
    debug_assert!(is_adequate(&p).adequate);
    Ok(Some(p))
}

fn scalar_to_i64(s: &crate::token::Scalar) -> i64 {
    use num_traits::ToPrimitive;
    match s {
        crate::token::Scalar::Int(i) => i.to_i64().expect("residues fit in i64"),
        crate::token::Scalar::Rational(_) => unreachable!("cyclic coordinates are integers"),
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::fs_set;

    #[test]
    fn canonical_pattern_mod_three() {
        let p = Pattern::new(3, vec![vec![1, 2, 0], vec![0, 1, 2]]).unwrap();
        let r = is_adequate(&p);
        assert!(r.adequate);
        assert_eq!(r.signature, Some(vec![1, 2]));
        assert!(r.witness.is_none());
        assert_eq!(p, canonical_2_adequate(3));
    }

    #[test]
    fn unit_vectors_mod_two_are_inadequate() {
        let p = Pattern::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let r = is_adequate(&p);
        assert!(!r.adequate);
        let (a, b) = r.witness.unwrap();
        assert_eq!(a.sigma, vec![1]);
        assert_eq!(b.sigma, vec![1, 1]);
        assert_eq!(b.subset, vec![0, 1]);
    }

    #[test]
    fn canonical_constructors() {
        assert_eq!(canonical_2_adequate(2).rows(), &[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(canonical_2_adequate(5).rows(), &[vec![1, 4, 0], vec![0, 1, 4]]);
        let z = canonical_2_adequate(0);
        assert_eq!(z.rows(), &[vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(is_adequate(&z).signature, Some(vec![1, -1]));
    }

    #[test]
    fn structural_validation() {
        assert!(Pattern::new(3, vec![vec![0, 0]]).is_err());
        assert!(Pattern::new(3, vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(Pattern::new(3, vec![vec![3, 0]]).is_err());
        assert!(Pattern::new(3, vec![vec![1, 0], vec![1]]).is_err());
        assert!(Pattern::new(1, vec![vec![1]]).is_err());
        let json = r#"{"n":2,"m":3,"l":3,"rows":[[1,2,0],[0,1,2]]}"#;
        let p: Pattern = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), json);
        assert!(serde_json::from_str::<Pattern>(r#"{"n":3,"m":3,"l":3,"rows":[[1,2,0],[0,1,2]]}"#).is_err());
    }

    #[test]
    fn basis_lift_reproduces_rows() {
        let g = GroupSpec::cyclic_power(3, 3).unwrap();
        let ys = lift(&canonical_2_adequate(3), &g.standard_basis(), &[0, 1, 2]).unwrap();
        assert_eq!(ys[0].to_json().to_string(), "[1,2,0]");
        assert_eq!(ys[1].to_json().to_string(), "[0,1,2]");
    }

    #[test]
    fn lift_keeps_sigma_constant() {
        let p = canonical_2_adequate(5);
        let g = GroupSpec::cyclic_power(5, 6).unwrap();
        let basis = g.standard_basis();
        let ys = lift(&p, &basis, &[1, 3, 4, 5]).unwrap();
        let sig = is_adequate(&p).signature.unwrap();
        for s in fs_set(&ys).unwrap() {
            let got: Vec<i64> = s.sigma().iter().map(scalar_to_i64).collect();
            assert_eq!(got, sig);
        }
    }

    #[test]
    fn lift_rejects_bad_generators() {
        let p = canonical_2_adequate(3);
        let g9 = GroupSpec::prime_power_power(3, 2, 3).unwrap();
        assert!(matches!(
            lift(&p, &g9.standard_basis(), &[0, 1, 2]),
            Err(PatternError::Precondition(_))
        ));
        let g = GroupSpec::cyclic_power(3, 3).unwrap();
        let b = g.standard_basis();
        let dependent = vec![b[0].clone(), b[1].clone(), b[0].add(&b[1]).unwrap()];
        assert!(matches!(lift(&p, &dependent, &[0, 1, 2]), Err(PatternError::Precondition(_))));
        assert!(matches!(lift(&p, &b, &[0, 2, 1]), Err(PatternError::Precondition(_))));
    }

    #[test]
    fn integer_lift_uses_disjoint_supports() {
        let p = canonical_2_adequate(0);
        let z = GroupSpec::int_box(1, 3).unwrap();
        let ys = lift(&p, &z.standard_basis(), &[0, 1, 2]).unwrap();
        assert_eq!(ys[0].to_json().to_string(), "[1,-1,0]");
    }

    #[test]
    fn sigma_check_cases() {
        let g = GroupSpec::cyclic_power(3, 3).unwrap();
        let p = sigma_colouring_check(&g, 2).unwrap().unwrap();
        assert!(is_adequate(&p).adequate);
        let b = GroupSpec::cyclic_power(2, 2).unwrap();
        assert_eq!(sigma_colouring_check(&b, 3).unwrap(), None);
        let one = sigma_colouring_check(&b, 1).unwrap().unwrap();
        assert_eq!(one.n(), 1);
        assert!(sigma_colouring_check(&GroupSpec::int_box(1, 2).unwrap(), 2).is_err());
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut count = 0;
        for_each_combination(7, 3, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 35);
    }
}
