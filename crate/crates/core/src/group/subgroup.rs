//! Subgroup closure and independent sequences.

use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Element, GroupError, GroupSpec};

/// Smallest set containing `gens` and zero that is closed under `+` and `-`.
/// Fails with [`GroupError::ClosureOverflow`] once more than `cap` elements
/// have been generated, which is how infinite subgroups show up.
pub fn subgroup_closure(
    spec: &Arc<GroupSpec>,
    gens: &[Element],
    cap: usize,
) -> Result<BTreeSet<Element>, GroupError> {
    if gens.iter().any(|g| g.spec() != spec) {
        return Err(GroupError::SpecMismatch);
    }
    let negs: Vec<Element> = gens.iter().map(Element::neg).collect();
    let mut set = BTreeSet::new();
    set.insert(spec.zero());
    let mut frontier = vec![spec.zero()];
    while let Some(e) = frontier.pop() {
        for step in gens.iter().chain(&negs) {
            let next = e.add_unchecked(step);
            if !set.contains(&next) {
                set.insert(next.clone());
                if set.len() > cap {
                    return Err(GroupError::ClosureOverflow { cap });
                }
                frontier.push(next);
            }
        }
    }
    Ok(set)
}

/// Greedy scan of `pool`, keeping every element outside the subgroup
/// generated by the ones already kept, until `target` are kept.
pub fn independent_sequence(
    spec: &Arc<GroupSpec>,
    pool: &[Element],
    target: usize,
    cap: usize,
) -> Result<Vec<Element>, GroupError> {
    let mut kept: Vec<Element> = Vec::with_capacity(target);
    if target == 0 {
        return Ok(kept);
    }
    let mut closure = subgroup_closure(spec, &[], cap)?;
    for x in pool {
        if closure.contains(x) {
            continue;
        }
        kept.push(x.clone());
        if kept.len() == target {
            return Ok(kept);
        }
        closure = subgroup_closure(spec, &kept, cap)?;
    }
    Err(GroupError::Shortfall { achieved: kept.len(), target })
}

/// First index `α` with `g[α]` inside the subgroup generated by `g[..α]`, if any.
pub fn first_dependence(
    spec: &Arc<GroupSpec>,
    seq: &[Element],
    cap: usize,
) -> Result<Option<usize>, GroupError> {
    for alpha in 0..seq.len() {
        if subgroup_closure(spec, &seq[..alpha], cap)?.contains(&seq[alpha]) {
            return Ok(Some(alpha));
        }
    }
    Ok(None)
}

pub fn is_independent(spec: &Arc<GroupSpec>, seq: &[Element], cap: usize) -> Result<bool, GroupError> {
    first_dependence(spec, seq, cap).map(|d| d.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(g: &Arc<GroupSpec>, v: &[i64]) -> Element {
        Element::from_ints(g, v).unwrap()
    }

    #[test]
    fn trivial_and_cyclic_closures() {
        let g = GroupSpec::cyclic_power(3, 2).unwrap();
        assert_eq!(subgroup_closure(&g, &[], 100).unwrap(), [g.zero()].into());
        let c = subgroup_closure(&g, &[el(&g, &[1, 0])], 100).unwrap();
        assert_eq!(c, [el(&g, &[0, 0]), el(&g, &[1, 0]), el(&g, &[2, 0])].into());
    }

    #[test]
    fn integers_overflow() {
        let z = GroupSpec::int_box(5, 1).unwrap();
        assert_eq!(
            subgroup_closure(&z, &[el(&z, &[1])], 100),
            Err(GroupError::ClosureOverflow { cap: 100 })
        );
    }

    #[test]
    fn greedy_basis_of_boolean_cube() {
        let g = GroupSpec::cyclic_power(2, 3).unwrap();
        let pool: Vec<Element> = g.elements().unwrap().into_iter().skip(1).collect();
        let seq = independent_sequence(&g, &pool, 3, 64).unwrap();
        assert_eq!(seq, vec![el(&g, &[0, 0, 1]), el(&g, &[0, 1, 0]), el(&g, &[1, 0, 0])]);
        // oracle: each term lies outside the closure of its predecessors
        for a in 0..seq.len() {
            assert!(!subgroup_closure(&g, &seq[..a], 64).unwrap().contains(&seq[a]));
        }
    }

    #[test]
    fn shortfall_reports_progress() {
        let g = GroupSpec::cyclic_power(5, 1).unwrap();
        let x = el(&g, &[1]);
        let r = independent_sequence(&g, &[x.clone(), x.scale(2)], 2, 10);
        assert_eq!(r, Err(GroupError::Shortfall { achieved: 1, target: 2 }));
        assert_eq!(independent_sequence(&g, &[x], 0, 10).unwrap(), vec![]);
    }

    #[test]
    fn dependence_detection() {
        let g = GroupSpec::cyclic_power(5, 2).unwrap();
        let a = el(&g, &[1, 0]);
        assert_eq!(first_dependence(&g, &[a.clone(), a.scale(2)], 100).unwrap(), Some(1));
        assert!(is_independent(&g, &g.standard_basis(), 100).unwrap());
    }
}
