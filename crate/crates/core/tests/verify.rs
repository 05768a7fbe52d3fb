use std::collections::BTreeSet;
use std::sync::Arc;

use pattern_forge::colouring::{sum_squares, ColourMap, Colouring, RandomColouring};
use pattern_forge::group::{fs_matrix, FactorSpec, IndexedMatrix};
use pattern_forge::verify::{
    check_fs_matrix_identities, delta_descent_check, find_monochromatic_ap, find_monochromatic_fs,
    find_monochromatic_span, find_monochromatic_subgroup, find_monochromatic_subgroup_in, fs_support_growth_check,
    no_seven_norms, prime_exponent_extract, Domain, ExtractStage, MatrixSplit,
};
use pattern_forge::{CertStatus, ColourError, ColourToken, Element, GroupSpec, Order, VerifyConfig, VerifyError};
use serde_json::json;

fn cfg() -> VerifyConfig {
    VerifyConfig::default()
}

fn parse(id: &str) -> Colouring {
    Colouring::parse(id).unwrap()
}

fn elem(spec: &Arc<GroupSpec>, v: &[i64]) -> Element {
    Element::from_ints(spec, v).unwrap()
}

#[test]
fn delta_colouring_has_no_monochromatic_pair_for_kappa_2() {
    let domain = Domain::branch_sets(2, 2).unwrap();
    let cert = find_monochromatic_fs("thm4.1", &parse("delta"), &domain, 2, cfg()).unwrap();
    assert_eq!(cert.status, CertStatus::Verified);
}

#[test]
fn sum_squares_defeats_triples_but_not_pairs() {
    let spec = GroupSpec::int_box(2, 3).unwrap();
    let domain = Domain::nonzero(&spec).unwrap();
    let c = parse("sum_squares");
    let three = find_monochromatic_fs("thm3.2", &c, &domain, 3, cfg()).unwrap();
    assert_eq!(three.status, CertStatus::Verified);

    let two = find_monochromatic_fs("thm3.2", &c, &domain, 2, cfg()).unwrap();
    assert_eq!(two.status, CertStatus::Counterexample);
    let w = two.witness.unwrap();
    let set: Vec<Element> = w["set"].as_array().unwrap().iter().map(|v| spec.element_from_json(v).unwrap()).collect();
    let (x, y) = (&set[0], &set[1]);
    let colours: BTreeSet<ColourToken> =
        [x.clone(), y.clone(), x.add(y).unwrap()].iter().map(|e| sum_squares(e).unwrap()).collect();
    assert_eq!(colours.len(), 1);

    // the canonical pair is also monochromatic
    let a = elem(&spec, &[1, -1, 0]);
    let b = elem(&spec, &[0, 1, -1]);
    for e in [&a, &b, &a.add(&b).unwrap()] {
        assert_eq!(sum_squares(e).unwrap(), ColourToken::Int(2.into()));
    }
}

#[test]
fn fs_budget_gives_inconclusive() {
    let spec = GroupSpec::int_box(2, 3).unwrap();
    let domain = Domain::nonzero(&spec).unwrap();
    let tight = VerifyConfig { budget: 50, threads: 1 };
    let cert = find_monochromatic_fs("thm3.2", &parse("sum_squares"), &domain, 3, tight).unwrap();
    assert_eq!(cert.status, CertStatus::Inconclusive);
}

#[test]
fn fs_counts_do_not_depend_on_threads() {
    let spec = GroupSpec::int_box(2, 3).unwrap();
    let domain = Domain::nonzero(&spec).unwrap();
    let c = parse("sum_squares");
    for n in [2, 3] {
        let one = find_monochromatic_fs("thm3.2", &c, &domain, n, cfg()).unwrap();
        let four = find_monochromatic_fs("thm3.2", &c, &domain, n, VerifyConfig { threads: 4, ..cfg() }).unwrap();
        assert_eq!(one, four);
    }
}

#[test]
fn matrix_identities_hold_for_any_colouring() {
    let spec = GroupSpec::cyclic_power(5, 5).unwrap();
    let g = spec.standard_basis();
    let split = MatrixSplit { alphas: vec![0, 1], beta: 2, gammas: vec![3, 4] };
    let mut colourings: Vec<Box<dyn ColourMap>> = vec![Box::new(parse("sigma")), Box::new(parse("product_sigma"))];
    for seed in 0..10 {
        colourings.push(Box::new(RandomColouring::new(seed, 3).unwrap()));
    }
    for c in &colourings {
        let cert = check_fs_matrix_identities(c.as_ref(), &g, &split).unwrap();
        assert_eq!(cert.status, CertStatus::Verified, "{}", c.id());
        assert_eq!(cert.enumerated, 16);
    }
}

/// Colours an element 0 when it is a difference `g_b - g_a` with `a < b`.
struct DifferenceColouring(BTreeSet<Element>);

impl ColourMap for DifferenceColouring {
    fn id(&self) -> String {
        "differences".into()
    }

    fn colour(&self, x: &Element) -> Result<ColourToken, ColourError> {
        Ok(ColourToken::Bit(u8::from(!self.0.contains(x))))
    }
}

#[test]
fn constant_d_makes_the_matrix_monochromatic() {
    let spec = GroupSpec::cyclic_power(5, 5).unwrap();
    let g = spec.standard_basis();
    let split = MatrixSplit::contiguous(2);
    let mut diffs = BTreeSet::new();
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            diffs.insert(g[b].sub(&g[a]).unwrap());
        }
    }
    let c = DifferenceColouring(diffs);
    assert!(check_fs_matrix_identities(&c, &g, &split).unwrap().is_verified());
    let rows = (0..2)
        .map(|xi| vec![g[2].sub(&g[xi]).unwrap(), g[3 + xi].sub(&g[2]).unwrap()])
        .collect();
    let sums = fs_matrix(&IndexedMatrix::from_rows(rows).unwrap()).unwrap();
    let colours: BTreeSet<ColourToken> = sums.iter().map(|x| c.colour(x).unwrap()).collect();
    assert_eq!(colours.into_iter().collect::<Vec<_>>(), vec![ColourToken::Bit(0)]);
}

#[test]
fn dependent_generators_are_rejected() {
    let spec = GroupSpec::cyclic_power(5, 5).unwrap();
    let mut g = spec.standard_basis();
    g[1] = g[0].scale(2);
    let split = MatrixSplit { alphas: vec![0, 1], beta: 2, gammas: vec![3, 4] };
    let err = check_fs_matrix_identities(&parse("sigma"), &g, &split).unwrap_err();
    assert!(matches!(err, VerifyError::Precondition(_)), "{err:?}");
}

#[test]
fn matrix_split_order_is_checked() {
    let spec = GroupSpec::cyclic_power(5, 5).unwrap();
    let g = spec.standard_basis();
    let split = MatrixSplit { alphas: vec![0, 3], beta: 2, gammas: vec![1, 4] };
    assert!(matches!(check_fs_matrix_identities(&parse("sigma"), &g, &split), Err(VerifyError::Precondition(_))));
}

#[test]
fn no_seven_norms_small_boxes() {
    for (d, b) in [(1, 1), (2, 2), (3, 3)] {
        let cert = no_seven_norms(d, b, cfg()).unwrap();
        assert_eq!(cert.status, CertStatus::Verified, "d={d} B={b}");
    }
    let n = 7u64 * 7 * 7;
    assert_eq!(no_seven_norms(3, 3, cfg()).unwrap().enumerated, n * (n - 1) * (n - 2) / 6);
}

#[test]
fn no_seven_norms_budget() {
    let cert = no_seven_norms(3, 3, VerifyConfig { budget: 1000, threads: 1 }).unwrap();
    assert_eq!(cert.status, CertStatus::Inconclusive);
}

fn prime_powers(p: u64, k: u32, rank: usize) -> Arc<GroupSpec> {
    GroupSpec::prime_power_power(p, k, rank).unwrap()
}

#[test]
fn product_sigma_progressions() {
    let c = parse("product_sigma");
    for spec in [prime_powers(3, 1, 3), prime_powers(5, 1, 2), prime_powers(3, 2, 2)] {
        assert!(find_monochromatic_ap(&c, &spec, cfg()).unwrap().is_verified());
    }
    let boolean = GroupSpec::cyclic_power(2, 2).unwrap();
    let cert = find_monochromatic_ap(&c, &boolean, cfg()).unwrap();
    assert_eq!(cert.status, CertStatus::Counterexample);
    let w = cert.witness.unwrap();
    let a = boolean.element_from_json(&w["a"]).unwrap();
    let b = boolean.element_from_json(&w["b"]).unwrap();
    assert!(!b.is_zero());
    let terms = [a.clone(), a.add(&b).unwrap(), a.add(&b).unwrap().add(&b).unwrap()];
    let colours: BTreeSet<ColourToken> = terms.iter().map(|t| c.colour(t).unwrap()).collect();
    assert_eq!(colours.len(), 1);
}

#[test]
fn subgroup_parity_cyclic_subgroups() {
    let c = parse("subgroup_parity");
    for (p, k) in [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2)] {
        let spec = prime_powers(p, k, 1);
        let cert = find_monochromatic_subgroup(&c, &spec, false, cfg()).unwrap();
        assert!(cert.is_verified(), "p={p} k={k}");
        assert_eq!(cert.enumerated, p.pow(k));
    }
}

#[test]
fn subgroup_parity_full_lattice() {
    let c = parse("subgroup_parity");
    let spec = prime_powers(3, 1, 2);
    assert!(find_monochromatic_subgroup(&c, &spec, true, cfg()).unwrap().is_verified());
}

#[test]
fn trivial_group_is_vacuous() {
    let spec = prime_powers(3, 1, 1);
    let cert = find_monochromatic_subgroup_in(&parse("subgroup_parity"), json!("trivial"), vec![spec.zero()], true).unwrap();
    assert!(cert.is_verified());
}

#[test]
fn monochromatic_subgroup_is_reported() {
    // on Z/2 x Z/2 every nonzero element spans {0, x}, a single colour
    let spec = GroupSpec::cyclic_power(2, 2).unwrap();
    let cert = find_monochromatic_subgroup(&parse("sigma"), &spec, false, cfg()).unwrap();
    assert_eq!(cert.status, CertStatus::Counterexample);
}

#[test]
fn valuation_spans() {
    for (a, d, b) in [(2, 3, 5), (3, 2, 5), (2, 1, 1)] {
        let cert = find_monochromatic_span(a, d, b, cfg()).unwrap();
        assert!(cert.is_verified(), "a={a} d={d} B={b}");
        assert_eq!(cert.enumerated, (2 * b + 1).pow(d as u32) - 1);
    }
    assert!(matches!(find_monochromatic_span(4, 1, 1, cfg()), Err(VerifyError::Precondition(_))));
}

#[test]
fn delta_descent_kappa_3() {
    let cert = delta_descent_check(3, 3, cfg()).unwrap();
    assert!(cert.is_verified());
    // 8 + 28 + 56 sets of size 1..=3
    assert_eq!(cert.enumerated, 92 * 91 / 2);
}

#[test]
fn support_growth_singleton_is_vacuous() {
    let spec = GroupSpec::cyclic_power(3, 6).unwrap();
    let x = elem(&spec, &[1, 2, 0, 0, 0, 0]);
    assert!(fs_support_growth_check(&[x]).unwrap().is_verified());
}

#[test]
fn support_growth_disjoint_equal_sigma_breaks_monochromaticity() {
    let spec = GroupSpec::cyclic_power(3, 6).unwrap();
    let xs = [elem(&spec, &[1, 2, 0, 0, 0, 0]), elem(&spec, &[0, 0, 1, 2, 0, 0]), elem(&spec, &[0, 0, 0, 0, 1, 2])];
    assert_eq!(xs[0].sigma(), xs[1].sigma());
    let err = fs_support_growth_check(&xs).unwrap_err();
    assert!(matches!(err, VerifyError::Precondition(_)));
}

#[test]
fn support_growth_nested_supports_rejected() {
    let spec = GroupSpec::cyclic_power(3, 6).unwrap();
    let xs = [elem(&spec, &[1, 0, 0, 0, 0, 0]), elem(&spec, &[1, 1, 0, 0, 0, 0])];
    assert!(matches!(fs_support_growth_check(&xs), Err(VerifyError::Precondition(_))));
}

#[test]
fn support_growth_monochromatic_pair() {
    let spec = GroupSpec::cyclic_power(3, 3).unwrap();
    let x = elem(&spec, &[1, 2, 0]);
    let y = elem(&spec, &[0, 1, 2]);
    assert_eq!(x.add(&y).unwrap().sigma(), x.sigma());
    let cert = fs_support_growth_check(&[x, y]).unwrap();
    assert!(cert.is_verified());
    assert_eq!(cert.domain["support_size"], 2);
}

fn order_six_group(count: usize) -> Arc<GroupSpec> {
    let factors = (0..count)
        .flat_map(|_| [FactorSpec::PrimePower { p: 2, k: 1 }, FactorSpec::PrimePower { p: 3, k: 1 }])
        .collect();
    Arc::new(GroupSpec::new(factors).unwrap())
}

#[test]
fn extract_order_two_from_order_six() {
    let spec = order_six_group(9);
    let xs: Vec<Element> = (0..9)
        .map(|i| {
            let mut v = vec![0i64; 18];
            v[2 * i] = 1;
            v[2 * i + 1] = 1;
            elem(&spec, &v)
        })
        .collect();
    assert!(xs.iter().all(|x| x.order() == Order::Finite(6)));
    let ex = prime_exponent_extract(&xs, 1, Some(2)).unwrap();
    assert_eq!((ex.m, ex.p, ex.k), (6, 2, 3));
    assert_eq!(ex.elements.len(), 1);
    assert_eq!(ex.elements[0].order(), Order::Finite(2));
    assert_eq!(ex.blocks, vec![vec![0, 1, 2, 3, 4, 5]]);
}

#[test]
fn extract_prime_order_inputs_returns_them() {
    let spec = GroupSpec::cyclic_power(5, 4).unwrap();
    let xs = spec.standard_basis();
    let ex = prime_exponent_extract(&xs, 4, None).unwrap();
    assert_eq!(ex.k, 1);
    assert_eq!(ex.elements, xs);
    assert!(ex.elements.iter().all(|x| x.order() == Order::Finite(5)));
}

#[test]
fn extract_reports_the_failing_stage() {
    let spec = order_six_group(9);
    let xs: Vec<Element> = (0..9)
        .map(|i| {
            let mut v = vec![0i64; 18];
            v[2 * i] = 1;
            v[2 * i + 1] = 2;
            elem(&spec, &v)
        })
        .collect();
    let err = prime_exponent_extract(&xs, 2, Some(3)).unwrap_err();
    assert_eq!(err.stage, ExtractStage::DeltaSystem);

    let trivial = GroupSpec::cyclic_power(5, 1).unwrap().zero();
    let err = prime_exponent_extract(&[trivial], 1, None).unwrap_err();
    assert_eq!(err.stage, ExtractStage::Precondition);

    let err = prime_exponent_extract(&xs, 1, Some(5)).unwrap_err();
    assert_eq!(err.stage, ExtractStage::Precondition);
}

#[test]
fn certificate_json_shape() {
    let cert = no_seven_norms(1, 1, cfg()).unwrap();
    let v = cert.to_json();
    assert_eq!(v["claim"], "lemma3.1");
    assert_eq!(v["status"], "verified");
    assert_eq!(v["witness"], serde_json::Value::Null);
    assert_eq!(v["enumerated"], 1);
    assert_eq!(v["order_version"], 1);
}
