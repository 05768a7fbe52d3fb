//! Finite-sum oracles: monochromatic FS sets, the FS_matrix identities, the
//! Δ-matrix descent check and the support-growth shadow.

use std::collections::{BTreeSet, HashMap};

use serde_json::json;

use super::{
    delta_system_find, elements_json, precondition, spec_json, CertStatus, Certificate, Domain, VerifyConfig,
    VerifyError,
};
use crate::colouring::{delta_colouring, product_sigma, BranchSet, ColourMap};
use crate::group::{fs_formal, fs_set, Element, IndexedMatrix, DEFAULT_FS_LIMIT};
use crate::parallel::{Cancel, Workers};
use crate::pattern::certify_independent;
use crate::token::ColourToken;

const CANCEL_POLL: u64 = 1 << 10;

struct FsShard {
    nodes: u64,
    capped: bool,
    found: Option<Vec<usize>>,
}

struct FsSearch<'a> {
    c: &'a dyn ColourMap,
    xs: &'a [Element],
    colours: &'a [ColourToken],
    n: usize,
    budget: u64,
}

impl FsSearch<'_> {
    fn shard(&self, first: usize, cancel: &Cancel) -> Result<Option<FsShard>, VerifyError> {
        let mut st = FsShard { nodes: 1, capped: false, found: None };
        if self.n == 1 {
            st.found = Some(vec![first]);
            return Ok(Some(st));
        }
        let mut cache: HashMap<Element, ColourToken> = HashMap::new();
        let mut chosen = vec![first];
        let mut sums = vec![self.xs[first].clone()];
        let target = &self.colours[first];
        match self.dfs(target, &mut chosen, &mut sums, &mut cache, &mut st, cancel)? {
            Some(false) => Ok(None),
            _ => Ok(Some(st)),
        }
    }

    /// `Some(false)` when cancelled, `Some(true)` when found or capped.
    fn dfs(
        &self,
        target: &ColourToken,
        chosen: &mut Vec<usize>,
        sums: &mut Vec<Element>,
        cache: &mut HashMap<Element, ColourToken>,
        st: &mut FsShard,
        cancel: &Cancel,
    ) -> Result<Option<bool>, VerifyError> {
        let last = *chosen.last().unwrap();
        for j in last + 1..self.xs.len() {
            st.nodes += 1;
            if st.nodes > self.budget {
                st.capped = true;
                return Ok(Some(true));
            }
            if st.nodes.is_multiple_of(CANCEL_POLL) && cancel.is_set() {
                return Ok(Some(false));
            }
            if &self.colours[j] != target {
                continue;
            }
            let x = &self.xs[j];
            let base = sums.len();
            let mut ok = true;
            for i in 0..base {
                let s = sums[i].add_unchecked(x);
                let col = match cache.get(&s) {
                    Some(col) => col.clone(),
                    None => {
                        let col = self.c.colour(&s)?;
                        cache.insert(s.clone(), col.clone());
                        col
                    }
                };
                if &col != target {
                    ok = false;
                    break;
                }
                sums.push(s);
            }
            if ok {
                chosen.push(j);
                if chosen.len() == self.n {
                    st.found = Some(chosen.clone());
                    return Ok(Some(true));
                }
                sums.push(x.clone());
                let r = self.dfs(target, chosen, sums, cache, st, cancel)?;
                if r.is_some() {
                    return Ok(r);
                }
                chosen.pop();
            }
            sums.truncate(base);
        }
        Ok(None)
    }
}

/// Searches the `n`-subsets of the domain, in lexicographic order of element
/// positions, for one whose finite sums all receive one colour. Prefixes whose
/// sums are already bichromatic are pruned; `enumerated` counts the prefixes
/// visited.
pub fn find_monochromatic_fs(
    claim: &str,
    c: &dyn ColourMap,
    domain: &Domain,
    n: usize,
    cfg: VerifyConfig,
) -> Result<Certificate, VerifyError> {
    if n == 0 || n > DEFAULT_FS_LIMIT {
        return precondition(format!("set size {n} outside 1..={DEFAULT_FS_LIMIT}"));
    }
    let xs = &domain.elements;
    let colours = xs.iter().map(|x| c.colour(x)).collect::<Result<Vec<_>, _>>()?;
    let description = json!({"domain": domain.description, "colouring": c.id(), "n": n});
    let search = FsSearch { c, xs, colours: &colours, n, budget: cfg.budget };
    let workers = Workers::new(cfg.threads);
    let results = workers.scan(xs.len(), true, |i, cancel| match search.shard(i, cancel) {
        Ok(Some(st)) => {
            let hit = st.found.is_some() || st.capped;
            Some((Ok(st), hit))
        }
        Ok(None) => None,
        Err(e) => Some((Err(e), true)),
    });
    let mut total = 0u64;
    for (res, _) in results {
        let st = res?;
        if st.capped || total + st.nodes > cfg.budget {
            let d = json!({"search": description, "budget": cfg.budget});
            return Ok(Certificate::new(claim, d, CertStatus::Inconclusive, cfg.budget, None));
        }
        total += st.nodes;
        if let Some(idx) = st.found {
            let set: Vec<Element> = idx.iter().map(|&i| xs[i].clone()).collect();
            let colour = recheck_monochromatic(c, &set)?;
            let witness = json!({"set": elements_json(&set), "colour": colour.to_json()});
            return Ok(Certificate::new(claim, description, CertStatus::Counterexample, total, Some(witness)));
        }
    }
    Ok(Certificate::new(claim, description, CertStatus::Verified, total, None))
}

/// Independent re-evaluation: colour every element of `FS(set)` directly.
fn recheck_monochromatic(c: &dyn ColourMap, set: &[Element]) -> Result<ColourToken, VerifyError> {
    let values = fs_set(set)?;
    let colours: BTreeSet<ColourToken> = values.iter().map(|v| c.colour(v)).collect::<Result<_, _>>()?;
    if colours.len() != 1 {
        return Err(VerifyError::Witness(format!("{} has {} colours", elements_json(set), colours.len())));
    }
    Ok(colours.into_iter().next().unwrap())
}

/// Index split for the FS_matrix construction: `alphas[ξ] < beta < gammas[ξ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSplit {
    pub alphas: Vec<usize>,
    pub beta: usize,
    pub gammas: Vec<usize>,
}

impl MatrixSplit {
    /// `alphas = 0..k`, `beta = k`, `gammas = k+1..=2k`.
    pub fn contiguous(k: usize) -> Self {
        MatrixSplit { alphas: (0..k).collect(), beta: k, gammas: (k + 1..=2 * k).collect() }
    }
}

/// Builds the `k x 2` matrix `x[ξ][0] = g_β - g_{α_ξ}`, `x[ξ][1] = g_{γ_ξ} - g_β`
/// and checks, for all `ξ, η`, that `c(x[ξ][0]) = d(α_ξ, β)`,
/// `c(x[η][1]) = d(β, γ_η)` and `c(x[ξ][0] + x[η][1]) = d(α_ξ, γ_η)`, where
/// `d(a, b) = c(g_b - g_a)` is evaluated on the difference computed directly.
/// Also requires the matrix entries to be pairwise distinct.
pub fn check_fs_matrix_identities(
    c: &dyn ColourMap,
    g: &[Element],
    split: &MatrixSplit,
) -> Result<Certificate, VerifyError> {
    let MatrixSplit { alphas, beta, gammas } = split;
    let beta = *beta;
    if alphas.is_empty() || alphas.len() != gammas.len() {
        return precondition("need equally many alphas and gammas, at least one");
    }
    let strictly_increasing = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
    if !strictly_increasing(alphas) || !strictly_increasing(gammas) {
        return precondition("alphas and gammas must be strictly increasing");
    }
    if *alphas.last().unwrap() >= beta || gammas[0] <= beta {
        return precondition("need max alpha < beta < min gamma");
    }
    if *gammas.last().unwrap() >= g.len() {
        return precondition(format!("index {} out of range for {} generators", gammas.last().unwrap(), g.len()));
    }
    let spec = g[0].spec().clone();
    certify_independent(&spec, g, crate::pattern::LIFT_CLOSURE_CAP).map_err(|e| match e {
        crate::pattern::PatternError::Precondition(s) => VerifyError::Precondition(s),
        other => other.into(),
    })?;
    let d = |a: usize, b: usize| -> Result<ColourToken, VerifyError> { Ok(c.colour(&g[b].sub(&g[a])?)?) };
    let k = alphas.len();
    let mut entries = Vec::with_capacity(2 * k);
    for xi in 0..k {
        entries.push(g[beta].sub(&g[alphas[xi]])?);
        entries.push(g[gammas[xi]].sub(&g[beta])?);
    }
    let matrix = IndexedMatrix::new(k, 2, entries)?;
    let description = json!({
        "group": spec_json(&spec),
        "colouring": c.id(),
        "alphas": alphas,
        "beta": beta,
        "gammas": gammas,
    });
    if !matrix.entries_distinct() {
        let witness = json!({"matrix": elements_json(matrix.entries()), "failure": "entries not distinct"});
        return Ok(Certificate::new("thm2.3", description, CertStatus::Counterexample, 0, Some(witness)));
    }
    let mut checked = 0u64;
    for xi in 0..k {
        for eta in 0..k {
            let a = matrix.get(xi, 0);
            let b = matrix.get(eta, 1);
            let sum = a.add(b)?;
            let direct = g[gammas[eta]].sub(&g[alphas[xi]])?;
            let checks = [
                ("c(x[xi][0]) = d(alpha, beta)", c.colour(a)?, d(alphas[xi], beta)?),
                ("c(x[eta][1]) = d(beta, gamma)", c.colour(b)?, d(beta, gammas[eta])?),
                ("c(x[xi][0] + x[eta][1]) = d(alpha, gamma)", c.colour(&sum)?, d(alphas[xi], gammas[eta])?),
            ];
            for (name, lhs, rhs) in checks {
                checked += 1;
                if lhs != rhs {
                    let witness = json!({"xi": xi, "eta": eta, "identity": name});
                    return Ok(Certificate::new("thm2.3", description, CertStatus::Counterexample, checked, Some(witness)));
                }
            }
            checked += 1;
            if sum != direct {
                let witness = json!({"xi": xi, "eta": eta, "identity": "x[xi][0] + x[eta][1] = g_gamma - g_alpha"});
                return Ok(Certificate::new("thm2.3", description, CertStatus::Counterexample, checked, Some(witness)));
            }
        }
    }
    Ok(Certificate::new("thm2.3", description, CertStatus::Verified, checked, None))
}

/// Over all unordered pairs of distinct branch sets of size `1..=max_set`,
/// checks that `x`, `y` and `x △ y` never share one Δ-matrix colour.
pub fn delta_descent_check(kappa: usize, max_set: usize, cfg: VerifyConfig) -> Result<Certificate, VerifyError> {
    if kappa == 0 || kappa > 5 {
        return precondition(format!("kappa {kappa} outside 1..=5"));
    }
    let branches = 1u32 << kappa;
    let masks: Vec<u64> = (1u64..1 << branches)
        .filter(|m| (m.count_ones() as usize) <= max_set)
        .collect();
    let description = json!({"kappa": kappa, "max_set": max_set});
    let pairs = (masks.len() as u64).saturating_mul(masks.len().saturating_sub(1) as u64) / 2;
    if pairs > cfg.budget {
        let d = json!({"search": description, "budget": cfg.budget});
        return Ok(Certificate::new("thm4.1", d, CertStatus::Inconclusive, 0, None));
    }
    let colour = |m: u64| delta_colouring(&BranchSet::from_mask(kappa, m));
    let colours: Vec<ColourToken> = masks.iter().map(|&m| colour(m)).collect();
    let mut checked = 0u64;
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            checked += 1;
            if colours[i] != colours[j] {
                continue;
            }
            let z = masks[i] ^ masks[j];
            if colour(z) == colours[i] {
                let show = |m: u64| {
                    BranchSet::from_mask(kappa, m).elems().iter().map(|b| b.to_string()).collect::<Vec<_>>()
                };
                let witness = json!({"x": show(masks[i]), "y": show(masks[j]), "colour": colours[i].to_json()});
                return Ok(Certificate::new("thm4.1", description, CertStatus::Counterexample, checked, Some(witness)));
            }
        }
    }
    Ok(Certificate::new("thm4.1", description, CertStatus::Verified, checked, None))
}

/// Finite shadow of the product-σ argument: given `X` with `FS(X)`
/// monochromatic under product-σ and common support size `s`, the supports of
/// `X` contain no Δ-system with `s + 1` members. A non-monochromatic `X` is a
/// precondition error.
pub fn fs_support_growth_check(xs: &[Element]) -> Result<Certificate, VerifyError> {
    let Some(first) = xs.first() else {
        return precondition("X is empty");
    };
    if xs.iter().any(Element::is_zero) {
        return precondition("X contains zero");
    }
    let formal = fs_formal(xs, DEFAULT_FS_LIMIT)?;
    let colour = product_sigma(first);
    for f in &formal {
        if product_sigma(&f.value) != colour {
            return precondition(format!(
                "FS(X) is not monochromatic: the sum over {:?} has colour {}",
                f.indices,
                product_sigma(&f.value)
            ));
        }
    }
    let s = first.supp().len();
    let family: Vec<BTreeSet<usize>> = xs.iter().map(|x| x.supp().into_iter().collect()).collect();
    let description = json!({"group": spec_json(first.spec()), "set": elements_json(xs), "support_size": s});
    let enumerated = formal.len() as u64;
    match delta_system_find(&family, s + 1)? {
        None => Ok(Certificate::new("thm5.1-shadow", description, CertStatus::Verified, enumerated, None)),
        Some(ds) => {
            let witness = json!({"members": ds.members, "root": ds.root});
            Ok(Certificate::new("thm5.1-shadow", description, CertStatus::Counterexample, enumerated, Some(witness)))
        }
    }
}
