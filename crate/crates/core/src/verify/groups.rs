//! Oracles over whole finite groups and integer boxes: equal-norm triples,
//! three-term progressions, monochromatic subgroups and spans.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use super::{elements_json, precondition, spec_json, CertStatus, Certificate, VerifyConfig, VerifyError};
use crate::colouring::{valuation, ColourMap};
use crate::group::{is_prime, Element, GroupSpec, Order};
use crate::token::ColourToken;

/// Largest group for which the full subgroup lattice is enumerated.
pub const LATTICE_LIMIT: usize = 1 << 10;

fn inconclusive(claim: &str, description: Value, cfg: VerifyConfig) -> Certificate {
    let d = json!({"search": description, "budget": cfg.budget});
    Certificate::new(claim, d, CertStatus::Inconclusive, 0, None)
}

/// No three distinct integer vectors in `[-bound, bound]^dim` have
/// `|x| = |y| = |z| = |x+y| = |x+z| = |y+z| = |x+y+z|`. Triples are split by
/// the common squared norm first; `enumerated` is the number of triples
/// covered.
pub fn no_seven_norms(dim: usize, bound: u64, cfg: VerifyConfig) -> Result<Certificate, VerifyError> {
    if dim == 0 || bound == 0 || bound > 1000 {
        return precondition("need dim >= 1 and 1 <= bound <= 1000");
    }
    let description = json!({"dim": dim, "bound": bound});
    let side = 2 * bound + 1;
    let count = match side.checked_pow(dim as u32).filter(|&c| c <= 1 << 22) {
        Some(c) => c,
        None => return Ok(inconclusive("lemma3.1", description, cfg)),
    };
    let triples = (count as u128) * (count as u128 - 1) * (count as u128).saturating_sub(2) / 6;
    if triples > cfg.budget as u128 {
        return Ok(inconclusive("lemma3.1", description, cfg));
    }
    let b = bound as i64;
    let mut buckets: BTreeMap<i64, Vec<Vec<i64>>> = BTreeMap::new();
    let mut v = vec![-b; dim];
    for _ in 0..count {
        buckets.entry(v.iter().map(|x| x * x).sum()).or_default().push(v.clone());
        for j in (0..dim).rev() {
            v[j] += 1;
            if v[j] <= b {
                break;
            }
            v[j] = -b;
        }
    }
    let norm = |parts: &[&Vec<i64>]| -> i64 {
        (0..dim).map(|j| parts.iter().map(|p| p[j]).sum::<i64>().pow(2)).sum()
    };
    for (&r, vs) in &buckets {
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if norm(&[&vs[i], &vs[j]]) != r {
                    continue;
                }
                for k in j + 1..vs.len() {
                    let (x, y, z) = (&vs[i], &vs[j], &vs[k]);
                    if norm(&[x, z]) == r && norm(&[y, z]) == r && norm(&[x, y, z]) == r {
                        let witness = json!({"triple": [x, y, z], "norm_squared": r});
                        return Ok(Certificate::new(
                            "lemma3.1",
                            description,
                            CertStatus::Counterexample,
                            triples as u64,
                            Some(witness),
                        ));
                    }
                }
            }
        }
    }
    Ok(Certificate::new("lemma3.1", description, CertStatus::Verified, triples as u64, None))
}

struct Indexed {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    colour_ids: Vec<usize>,
}

impl Indexed {
    fn new(c: &dyn ColourMap, elements: Vec<Element>) -> Result<Self, VerifyError> {
        let mut palette: BTreeMap<ColourToken, usize> = BTreeMap::new();
        let mut colour_ids = Vec::with_capacity(elements.len());
        for x in &elements {
            let t = c.colour(x)?;
            let next = palette.len();
            colour_ids.push(*palette.entry(t).or_insert(next));
        }
        let index = elements.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        Ok(Indexed { elements, index, colour_ids })
    }

    fn add(&self, a: usize, b: usize) -> Result<usize, VerifyError> {
        let s = self.elements[a].add(&self.elements[b])?;
        self.index
            .get(&s)
            .copied()
            .ok_or_else(|| VerifyError::Precondition("the element list is not closed under addition".into()))
    }
}

fn finite_elements(spec: &Arc<GroupSpec>) -> Result<Vec<Element>, VerifyError> {
    if !spec.is_finite() {
        return precondition("needs a finite group");
    }
    Ok(spec.elements()?)
}

/// Searches all `(a, b)` with `b != 0` for a monochromatic `{a, a+b, a+2b}`.
pub fn find_monochromatic_ap(
    c: &dyn ColourMap,
    spec: &Arc<GroupSpec>,
    cfg: VerifyConfig,
) -> Result<Certificate, VerifyError> {
    let description = json!({"group": spec_json(spec), "colouring": c.id()});
    if let Some(n) = spec.cardinality() {
        if n.saturating_mul(n) > cfg.budget as u128 {
            return Ok(inconclusive("thm5.4", description, cfg));
        }
    }
    let g = Indexed::new(c, finite_elements(spec)?)?;
    let mut checked = 0u64;
    for a in 0..g.elements.len() {
        for b in 0..g.elements.len() {
            if g.elements[b].is_zero() {
                continue;
            }
            checked += 1;
            let ab = g.add(a, b)?;
            let abb = g.add(ab, b)?;
            let k = g.colour_ids[a];
            if g.colour_ids[ab] == k && g.colour_ids[abb] == k {
                let (x, y) = (&g.elements[a], &g.elements[b]);
                let terms = [x.clone(), x.add(y)?, x.add(y)?.add(y)?];
                let colours: BTreeSet<ColourToken> = terms.iter().map(|t| c.colour(t)).collect::<Result<_, _>>()?;
                if colours.len() != 1 {
                    return Err(VerifyError::Witness(format!("a = {x}, b = {y}")));
                }
                let witness = json!({
                    "a": x.to_json(),
                    "b": y.to_json(),
                    "progression": elements_json(&terms),
                    "colour": colours.into_iter().next().unwrap().to_json(),
                });
                return Ok(Certificate::new("thm5.4", description, CertStatus::Counterexample, checked, Some(witness)));
            }
        }
    }
    Ok(Certificate::new("thm5.4", description, CertStatus::Verified, checked, None))
}

/// Every nontrivial cyclic subgroup (and, with `lattice`, every nontrivial
/// subgroup) must meet at least two colours outside zero.
pub fn find_monochromatic_subgroup(
    c: &dyn ColourMap,
    spec: &Arc<GroupSpec>,
    lattice: bool,
    cfg: VerifyConfig,
) -> Result<Certificate, VerifyError> {
    let description = json!({"group": spec_json(spec), "colouring": c.id(), "all_subgroups": lattice});
    if spec.cardinality().is_none_or(|n| n > cfg.budget as u128) {
        return Ok(inconclusive("thm5.5", description, cfg));
    }
    find_monochromatic_subgroup_in(c, description, finite_elements(spec)?, lattice)
}

/// As [`find_monochromatic_subgroup`] for a group given by its element list,
/// which must be closed under addition (the trivial group is `[0]`).
pub fn find_monochromatic_subgroup_in(
    c: &dyn ColourMap,
    description: Value,
    elements: Vec<Element>,
    lattice: bool,
) -> Result<Certificate, VerifyError> {
    if elements.is_empty() {
        return precondition("empty element list");
    }
    if lattice && elements.len() > LATTICE_LIMIT {
        return precondition(format!("subgroup lattice limited to {LATTICE_LIMIT} elements"));
    }
    let g = Indexed::new(c, elements)?;
    let zero = match g.elements.iter().position(Element::is_zero) {
        Some(z) => z,
        None => return precondition("element list does not contain zero"),
    };
    let mut cyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut checked = 0u64;
    for x in 0..g.elements.len() {
        checked += 1;
        if x == zero {
            continue;
        }
        if matches!(g.elements[x].order(), Order::Infinite) {
            return precondition("element of infinite order");
        }
        let mut members = vec![x];
        let mut cur = x;
        loop {
            cur = g.add(cur, x)?;
            if cur == zero {
                break;
            }
            members.push(cur);
        }
        if let Some(w) = monochromatic_witness(c, &g, &members)? {
            return Ok(Certificate::new("thm5.5", description, CertStatus::Counterexample, checked, Some(w)));
        }
        members.push(zero);
        members.sort_unstable();
        cyclic.insert(members);
    }
    if lattice {
        let mut all: BTreeSet<Vec<usize>> = cyclic.clone();
        let mut frontier: Vec<Vec<usize>> = cyclic.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for k in &cyclic {
                let joined = join(&g, &h, k)?;
                if all.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        for h in all.difference(&cyclic) {
            checked += 1;
            let nonzero: Vec<usize> = h.iter().copied().filter(|&i| i != zero).collect();
            if let Some(w) = monochromatic_witness(c, &g, &nonzero)? {
                return Ok(Certificate::new("thm5.5", description, CertStatus::Counterexample, checked, Some(w)));
            }
        }
    }
    Ok(Certificate::new("thm5.5", description, CertStatus::Verified, checked, None))
}

/// The subgroup generated by two subgroups, as sorted indices.
fn join(g: &Indexed, h: &[usize], k: &[usize]) -> Result<Vec<usize>, VerifyError> {
    let mut set: BTreeSet<usize> = h.iter().copied().collect();
    let mut frontier: Vec<usize> = h.to_vec();
    while let Some(a) = frontier.pop() {
        for &b in k {
            let s = g.add(a, b)?;
            if set.insert(s) {
                frontier.push(s);
            }
        }
    }
    Ok(set.into_iter().collect())
}

fn monochromatic_witness(
    c: &dyn ColourMap,
    g: &Indexed,
    nonzero: &[usize],
) -> Result<Option<Value>, VerifyError> {
    let first = g.colour_ids[nonzero[0]];
    if nonzero.iter().any(|&i| g.colour_ids[i] != first) {
        return Ok(None);
    }
    let members: Vec<Element> = nonzero.iter().map(|&i| g.elements[i].clone()).collect();
    let colours: BTreeSet<ColourToken> = members.iter().map(|m| c.colour(m)).collect::<Result<_, _>>()?;
    if colours.len() != 1 {
        return Err(VerifyError::Witness(format!("subgroup {}", elements_json(&members))));
    }
    Ok(Some(json!({
        "nonzero_members": elements_json(&members),
        "colour": colours.into_iter().next().unwrap().to_json(),
    })))
}

/// For every nonzero `x` in `[-bound, bound]^dim`, the valuation colouring
/// must separate `x` from `a x`; both lie in every span containing `x`.
pub fn find_monochromatic_span(
    a: u64,
    dim: usize,
    bound: u64,
    cfg: VerifyConfig,
) -> Result<Certificate, VerifyError> {
    if !is_prime(a) {
        return precondition(format!("{a} is not prime"));
    }
    let spec = GroupSpec::int_box(bound, dim)?;
    let description = json!({"prime": a, "dim": dim, "bound": bound});
    if spec.enumeration_len() > cfg.budget as u128 {
        return Ok(inconclusive("thm5.6", description, cfg));
    }
    let mut checked = 0u64;
    for x in spec.elements()?.into_iter().filter(|x| !x.is_zero()) {
        checked += 1;
        let ax = x.scale(a as i64);
        let (cx, cax) = (valuation(&x, a)?, valuation(&ax, a)?);
        if cx == cax {
            let witness = json!({"x": x.to_json(), "ax": ax.to_json(), "colour": cx.to_json()});
            return Ok(Certificate::new("thm5.6", description, CertStatus::Counterexample, checked, Some(witness)));
        }
    }
    Ok(Certificate::new("thm5.6", description, CertStatus::Verified, checked, None))
}
