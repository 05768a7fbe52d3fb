//! Δ-systems (sunflowers) and prime-order extraction from them.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{precondition, VerifyError};
use crate::group::{is_prime, smallest_prime_factor, Element, Order};

/// Families up to this size are searched exhaustively first.
pub const EXHAUSTIVE_THRESHOLD: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaSystem {
    /// Positions of the chosen members in the input family, ascending.
    pub members: Vec<usize>,
    pub root: BTreeSet<usize>,
}

impl DeltaSystem {
    /// Whether every pair of the chosen members meets exactly in `root`.
    pub fn is_valid(&self, family: &[BTreeSet<usize>]) -> bool {
        self.members.iter().enumerate().all(|(i, &a)| {
            self.members[i + 1..]
                .iter()
                .all(|&b| family[a].intersection(&family[b]).copied().collect::<BTreeSet<_>>() == self.root)
        })
    }
}

fn check_family(family: &[BTreeSet<usize>]) -> Result<(), VerifyError> {
    if let Some(first) = family.first() {
        if family.iter().any(|s| s.len() != first.len()) {
            return precondition("family members must have equal cardinality");
        }
    }
    Ok(())
}

/// Finds `n` members pairwise intersecting in a common root: exhaustively for
/// families of at most [`EXHAUSTIVE_THRESHOLD`] sets, otherwise greedily with
/// an exhaustive fallback.
pub fn delta_system_find(family: &[BTreeSet<usize>], n: usize) -> Result<Option<DeltaSystem>, VerifyError> {
    check_family(family)?;
    if family.len() > EXHAUSTIVE_THRESHOLD {
        if let Some(ds) = greedy(family, n) {
            return Ok(Some(ds));
        }
    }
    Ok(exhaustive(family, n, &|_, _| true))
}

/// The lexicographically first `n`-member Δ-subsystem, by backtracking.
pub fn delta_system_exhaustive(family: &[BTreeSet<usize>], n: usize) -> Result<Option<DeltaSystem>, VerifyError> {
    check_family(family)?;
    Ok(exhaustive(family, n, &|_, _| true))
}

/// Tries each pairwise intersection as root and collects members with
/// disjoint petals greedily. May miss systems that exist.
pub fn delta_system_greedy(family: &[BTreeSet<usize>], n: usize) -> Result<Option<DeltaSystem>, VerifyError> {
    check_family(family)?;
    Ok(greedy(family, n))
}

fn trivial(family: &[BTreeSet<usize>], n: usize) -> Option<Option<DeltaSystem>> {
    match n {
        0 => Some(Some(DeltaSystem { members: vec![], root: BTreeSet::new() })),
        1 => Some(family.first().map(|s| DeltaSystem { members: vec![0], root: s.clone() })),
        _ if family.len() < n => Some(None),
        _ => None,
    }
}

fn greedy(family: &[BTreeSet<usize>], n: usize) -> Option<DeltaSystem> {
    if let Some(t) = trivial(family, n) {
        return t;
    }
    let mut roots_tried: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            let root: BTreeSet<usize> = family[i].intersection(&family[j]).copied().collect();
            if !roots_tried.insert(root.clone()) {
                continue;
            }
            let mut used: BTreeSet<usize> = BTreeSet::new();
            let mut members = Vec::new();
            for (l, s) in family.iter().enumerate() {
                if !s.is_superset(&root) || s.difference(&root).any(|e| used.contains(e)) {
                    continue;
                }
                used.extend(s.difference(&root).copied());
                members.push(l);
                if members.len() == n {
                    return Some(DeltaSystem { members, root });
                }
            }
        }
    }
    None
}

/// Backtracking over ascending member tuples; the first two members fix the
/// root. `accept(chosen, candidate)` can impose an extra condition.
fn exhaustive(
    family: &[BTreeSet<usize>],
    n: usize,
    accept: &dyn Fn(&[usize], usize) -> bool,
) -> Option<DeltaSystem> {
    if let Some(t) = trivial(family, n) {
        return t;
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if !accept(&[i], j) {
                continue;
            }
            let root: BTreeSet<usize> = family[i].intersection(&family[j]).copied().collect();
            let mut used: BTreeSet<usize> = family[i].difference(&root).copied().collect();
            if family[j].difference(&root).any(|e| used.contains(e)) {
                continue;
            }
            used.extend(family[j].difference(&root).copied());
            let mut chosen = vec![i, j];
            if extend(family, n, &root, &mut chosen, &mut used, accept) {
                return Some(DeltaSystem { members: chosen, root });
            }
        }
    }
    None
}

fn extend(
    family: &[BTreeSet<usize>],
    n: usize,
    root: &BTreeSet<usize>,
    chosen: &mut Vec<usize>,
    used: &mut BTreeSet<usize>,
    accept: &dyn Fn(&[usize], usize) -> bool,
) -> bool {
    if chosen.len() == n {
        return true;
    }
    let last = *chosen.last().unwrap();
    for l in last + 1..family.len() {
        if family.len() - l < n - chosen.len() {
            break;
        }
        let s = &family[l];
        if !s.is_superset(root) || s.difference(root).any(|e| used.contains(e)) || !accept(chosen, l) {
            continue;
        }
        let petal: Vec<usize> = s.difference(root).copied().collect();
        used.extend(petal.iter().copied());
        chosen.push(l);
        if extend(family, n, root, chosen, used, accept) {
            return true;
        }
        chosen.pop();
        for e in petal {
            used.remove(&e);
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractStage {
    Precondition,
    DeltaSystem,
    Order,
    Distinct,
}

impl fmt::Display for ExtractStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtractStage::Precondition => "precondition",
            ExtractStage::DeltaSystem => "delta_system",
            ExtractStage::Order => "order",
            ExtractStage::Distinct => "distinct",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("extraction failed at stage {stage}: {detail}")]
pub struct ExtractError {
    pub stage: ExtractStage,
    pub detail: String,
}

fn fail<T>(stage: ExtractStage, detail: impl Into<String>) -> Result<T, ExtractError> {
    Err(ExtractError { stage, detail: detail.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub elements: Vec<Element>,
    /// Common order of the inputs.
    pub m: u64,
    pub p: u64,
    pub k: u64,
    /// Input positions summed into each output.
    pub blocks: Vec<Vec<usize>>,
    pub root: BTreeSet<usize>,
}

/// From elements of common order `m`, extracts `t` distinct elements of prime
/// order `p | m` (default: the least prime factor). Finds a Δ-system of
/// supports whose members agree on the root, sums disjoint blocks of `m`
/// members (the root part cancels) and multiplies by `k = m / p`. When `m` is
/// already prime the blocks are single members and `k = 1`.
pub fn prime_exponent_extract(elements: &[Element], t: usize, p: Option<u64>) -> Result<Extraction, ExtractError> {
    use ExtractStage::{DeltaSystem, Distinct, Precondition};
    let Some(first) = elements.first() else {
        return fail(Precondition, "no elements");
    };
    if elements.iter().any(|x| !x.same_group(first)) {
        return fail(Precondition, "elements belong to different groups");
    }
    let m = match first.order() {
        Order::Finite(m) => m,
        Order::Infinite => return fail(Precondition, "elements must have finite order"),
    };
    if elements.iter().any(|x| x.order() != Order::Finite(m)) {
        return fail(Precondition, "elements must share one order");
    }
    if m == 1 {
        return fail(Precondition, "order 1: there is no prime to extract");
    }
    let p = match p {
        Some(p) if !is_prime(p) || m % p != 0 => return fail(Precondition, format!("{p} is not a prime dividing {m}")),
        Some(p) => p,
        None => smallest_prime_factor(m),
    };
    let k = m / p;
    let block = if k == 1 { 1 } else { m as usize };
    let need = t.saturating_mul(block);
    let family: Vec<BTreeSet<usize>> = elements.iter().map(|x| x.supp().into_iter().collect()).collect();
    let agrees_on_root = |chosen: &[usize], cand: usize| {
        let a = &elements[chosen[0]];
        let b = &elements[cand];
        let root: Vec<usize> = family[chosen[0]].intersection(&family[cand]).copied().collect();
        a.restrict(&root) == b.restrict(&root)
    };
    let Some(ds) = exhaustive(&family, need, &agrees_on_root) else {
        return fail(DeltaSystem, format!("no Δ-system of {need} supports agreeing on the root"));
    };
    let mut out = Vec::with_capacity(t);
    let mut blocks = Vec::with_capacity(t);
    for chunk in ds.members.chunks(block) {
        let y = chunk[1..]
            .iter()
            .fold(elements[chunk[0]].clone(), |acc, &i| acc.add_unchecked(&elements[i]));
        let z = y.scale(k as i64);
        if z.order() != Order::Finite(p) {
            return fail(ExtractStage::Order, format!("block {chunk:?} gives {z} of order {:?}", z.order()));
        }
        out.push(z);
        blocks.push(chunk.to_vec());
    }
    let distinct: BTreeSet<&Element> = out.iter().collect();
    if distinct.len() != out.len() {
        return fail(Distinct, "extracted elements coincide");
    }
    Ok(Extraction { elements: out, m, p, k, blocks, root: ds.root })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(sets: &[&[usize]]) -> Vec<BTreeSet<usize>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn singletons_are_disjoint() {
        let f = fam(&[&[1], &[2], &[3], &[4]]);
        let ds = delta_system_find(&f, 4).unwrap().unwrap();
        assert_eq!(ds.members, vec![0, 1, 2, 3]);
        assert!(ds.root.is_empty());
    }

    #[test]
    fn common_kernel() {
        let f = fam(&[&[1, 2], &[1, 3], &[1, 4]]);
        let ds = delta_system_find(&f, 3).unwrap().unwrap();
        assert_eq!(ds.root, [1].into());
        assert!(ds.is_valid(&f));
    }

    #[test]
    fn triangle_has_no_sunflower() {
        let f = fam(&[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(delta_system_find(&f, 3).unwrap(), None);
        assert!(delta_system_find(&f, 2).unwrap().is_some());
    }

    #[test]
    fn unequal_sizes_rejected() {
        let f = fam(&[&[1, 2], &[3]]);
        assert!(matches!(delta_system_find(&f, 2), Err(VerifyError::Precondition(_))));
    }

    #[test]
    fn greedy_misses_are_caught_by_exhaustion() {
        // greedy with root {} grabs {0,1} and then cannot place {0,2},{1,3};
        // the root {} system {0,2},{1,3},{4,5} exists
        let f = fam(&[&[0, 1], &[0, 2], &[1, 3], &[4, 5]]);
        let ex = delta_system_exhaustive(&f, 3).unwrap().unwrap();
        assert!(ex.is_valid(&f));
        assert_eq!(ex.members, vec![1, 2, 3]);
    }
}
