use std::collections::BTreeMap;

use morass::chain::{
    chain_leq, default_chain_sets, generic_chain, merge_conditions, p_beta_family, thinned_membership, ChainCondition,
    ChainGenericConfig, ChainHierarchy,
};
use morass::{fixtures, Error};
use proptest::prelude::*;

fn cond(cols: &[usize], rows: &[usize], ones: &[(usize, usize)]) -> ChainCondition {
    let cells: Vec<(usize, usize, bool)> =
        rows.iter().flat_map(|&r| cols.iter().map(move |&c| (c, r, ones.contains(&(c, r))))).collect();
    ChainCondition::new(cols, rows, &cells).unwrap()
}

/// Cells as a map, read back through the JSON form.
fn cells(p: &ChainCondition) -> BTreeMap<(usize, usize), bool> {
    let v = serde_json::to_value(p).unwrap();
    v["values"].as_array().unwrap().iter().map(|c| ((c[0].as_u64().unwrap() as usize, c[1].as_u64().unwrap() as usize), c[2] == 1)).collect()
}

/// `p ≤ q` straight from the definition: `q ⊆ p` as triples, new rows
/// nondecreasing on `a_q`.
fn leq_oracle(p: &ChainCondition, q: &ChainCondition) -> bool {
    let (pc, qc) = (cells(p), cells(q));
    let sub = |x: Vec<usize>, y: Vec<usize>| x.iter().all(|i| y.contains(i));
    if !sub(q.cols(), p.cols()) || !sub(q.rows(), p.rows()) {
        return false;
    }
    if !qc.iter().all(|(k, v)| pc.get(k) == Some(v)) {
        return false;
    }
    let new_rows: Vec<usize> = p.rows().into_iter().filter(|r| !q.has_row(*r)).collect();
    let aq = q.cols();
    new_rows.iter().all(|&b| {
        aq.iter().all(|&a1| aq.iter().filter(|&&a2| a1 < a2).all(|&a2| pc[&(a1, b)] <= pc[&(a2, b)]))
    })
}

#[test]
fn leq_with_same_rows_is_inclusion() {
    let p = cond(&[0, 1, 2], &[0], &[(0, 0)]);
    let q = cond(&[0, 1], &[0], &[(0, 0)]);
    assert!(chain_leq(&p, &q));
}

#[test]
fn leq_rejects_descent_in_new_row() {
    let q = cond(&[0, 1], &[], &[]);
    let p = cond(&[0, 1], &[3], &[(0, 3)]);
    assert!(!chain_leq(&p, &q));
    let p_up = cond(&[0, 1], &[3], &[(1, 3)]);
    assert!(chain_leq(&p_up, &q));
}

#[test]
fn merge_example_fills_by_delta_rule() {
    let p1 = cond(&[1, 2], &[0], &[(2, 0)]);
    let p2 = cond(&[1, 3], &[1], &[(1, 1), (3, 1)]);
    let m = merge_conditions(&p1, &p2, &[1]).unwrap();
    // δ_0 = 1 (p1(1,0) = 0), so (3,0) > 1 is 1; δ_1 = 0 (no zero on Δ1), so (2,1) is 1
    let mut want = BTreeMap::new();
    for ((c, r), v) in cells(&p1).into_iter().chain(cells(&p2)) {
        want.insert((c, r), v);
    }
    want.insert((3, 0), true);
    want.insert((2, 1), true);
    assert_eq!(cells(&m), want);
    assert!(chain_leq(&m, &p1) && chain_leq(&m, &p2));
    assert!(leq_oracle(&m, &p1) && leq_oracle(&m, &p2));
}

#[test]
fn merge_edge_cases() {
    let p1 = cond(&[1, 2], &[0], &[(2, 0)]);
    assert_eq!(merge_conditions(&p1, &ChainCondition::EMPTY, &[]).unwrap(), p1);
    let clash = cond(&[1], &[0], &[(1, 0)]);
    assert!(matches!(merge_conditions(&p1, &clash, &[1]), Err(Error::Inconsistent(_))));
    let outside_root = cond(&[2], &[1], &[]);
    assert!(matches!(merge_conditions(&p1, &outside_root, &[1]), Err(Error::Precondition(_))));
}

#[test]
fn single_column_is_always_thinned() {
    let m = fixtures::chain("small").unwrap();
    let p = cond(&[1], &[0, 1], &[(1, 0)]);
    assert_eq!(thinned_membership(&p, &m).unwrap(), None);
}

#[test]
fn p_beta_is_excluded_with_identity_witness() {
    let m = fixtures::chain("h3").unwrap();
    for (beta, p) in p_beta_family(m.height()).iter().enumerate() {
        let v = thinned_membership(p, &m).unwrap().expect("p_β is not thinned");
        assert_eq!(v.row, beta);
        assert_eq!(v.pair, (0, 1));
        assert!(m.family(beta + 1, m.height()).contains(&v.map));
        assert!(v.map.images().contains(&0) && v.map.images().contains(&1));
    }
}

#[test]
fn membership_outside_the_box_is_an_error() {
    let m = fixtures::chain("small").unwrap();
    assert!(thinned_membership(&cond(&[5], &[], &[]), &m).is_err());
}

#[test]
fn local_star_on_one_column() {
    let h = ChainHierarchy::build(&fixtures::chain("small").unwrap()).unwrap();
    let p = cond(&[0], &[], &[]);
    let s = h.local_star(&p, &[0]).unwrap();
    assert_eq!(s.alpha0, 0);
    assert_eq!(s.support.iter().copied().collect::<Vec<_>>(), vec![0]);
}

#[test]
fn local_star_on_m3_columns_0_and_2() {
    let h = ChainHierarchy::build(&fixtures::m3()).unwrap();
    let p = cond(&[0, 2], &[], &[(2, 0)]);
    let s = h.local_star(&p, &[0, 2]).unwrap();
    assert_eq!(s.alpha0, 1);
    assert_eq!(s.values[&2], p);
    assert_eq!(s.support.iter().copied().collect::<Vec<_>>(), vec![1]);

    // a row at level 1 is invisible at α = 1, so level 2 joins the support
    let q = cond(&[0, 2], &[1], &[(2, 1)]);
    let s = h.local_star(&q, &[0, 2]).unwrap();
    assert!(s.values[&1].rows().is_empty());
    assert_eq!(s.values[&2], q);
    assert_eq!(s.support.iter().copied().collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn local_star_rejects_columns_outside_delta() {
    let h = ChainHierarchy::build(&fixtures::m3()).unwrap();
    let p = cond(&[0, 1], &[], &[]);
    assert!(matches!(h.local_star(&p, &[0]), Err(Error::Precondition(_))));
}

#[test]
fn two_column_generic_chain() {
    let h = ChainHierarchy::build(&fixtures::chain("two-column").unwrap()).unwrap();
    let cfg = ChainGenericConfig { start: ChainCondition::EMPTY, sets: default_chain_sets(&h), seed: None };
    let g = generic_chain(&h, &cfg).unwrap();
    // one row, and D″_{0,1,0} asks for p(0,0) = 0, p(1,0) = 1
    assert_eq!(g.chain[&0], Vec::<usize>::new());
    assert_eq!(g.chain[&1], vec![0]);
    assert!(g.report.all_pass(), "{}", g.report.to_json());
    for w in g.steps.windows(2) {
        assert!(chain_leq(&w[1], &w[0]));
    }
    assert!(h.in_forcing(&g.condition));
}

#[test]
fn empty_seed_adds_nothing() {
    let h = ChainHierarchy::build(&fixtures::chain("small").unwrap()).unwrap();
    let cfg = ChainGenericConfig { start: ChainCondition::EMPTY, sets: vec![], seed: Some(3) };
    let g = generic_chain(&h, &cfg).unwrap();
    assert!(g.chain.values().all(Vec::is_empty));
    assert_eq!(g.condition, ChainCondition::EMPTY);
}

#[test]
fn seeded_generic_chain_is_reproducible() {
    let h = ChainHierarchy::build(&fixtures::chain("h3").unwrap()).unwrap();
    let run = |seed| {
        let cfg = ChainGenericConfig { start: ChainCondition::EMPTY, sets: default_chain_sets(&h), seed: Some(seed) };
        serde_json::to_string(&generic_chain(&h, &cfg).unwrap()).unwrap()
    };
    assert_eq!(run(11), run(11));
}

#[test]
fn start_outside_the_forcing_is_rejected() {
    let h = ChainHierarchy::build(&fixtures::chain("small").unwrap()).unwrap();
    let cfg = ChainGenericConfig { start: p_beta_family(1)[0], sets: vec![], seed: None };
    assert!(matches!(generic_chain(&h, &cfg), Err(Error::Seed(_))));
}

#[test]
fn limit_levels_are_refused() {
    let m = fixtures::gap1("m3-limit").unwrap();
    assert!(matches!(ChainHierarchy::build(&m), Err(Error::Precondition(_))));
}

fn arb_condition(max_cols: usize, max_rows: usize) -> impl Strategy<Value = ChainCondition> {
    (0u8..1 << max_cols, 0u8..1 << max_rows, any::<u64>()).prop_map(|(cm, rm, v)| {
        let cols: Vec<usize> = (0..8).filter(|i| cm >> i & 1 == 1).collect();
        let rows: Vec<usize> = (0..8).filter(|i| rm >> i & 1 == 1).collect();
        let cells: Vec<(usize, usize, bool)> =
            rows.iter().flat_map(|&r| cols.iter().map(move |&c| (c, r, v >> (8 * r + c) & 1 == 1))).collect();
        ChainCondition::new(&cols, &rows, &cells).unwrap()
    })
}

proptest! {
    #[test]
    fn leq_matches_the_definition(p in arb_condition(4, 3), keep_c in 0u8..16, keep_r in 0u8..8, other in arb_condition(4, 3)) {
        let q = p.restrict(keep_c, keep_r);
        prop_assert_eq!(chain_leq(&p, &q), leq_oracle(&p, &q));
        prop_assert_eq!(chain_leq(&p, &other), leq_oracle(&p, &other));
    }

    #[test]
    fn leq_is_reflexive_and_antisymmetric(p in arb_condition(4, 3), q in arb_condition(4, 3)) {
        prop_assert!(chain_leq(&p, &p));
        if chain_leq(&p, &q) && chain_leq(&q, &p) {
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn leq_is_transitive_along_restrictions(p in arb_condition(4, 3), c1 in 0u8..16, r1 in 0u8..8, c2 in 0u8..16, r2 in 0u8..8) {
        let q = p.restrict(c1, r1);
        let r = q.restrict(c2, r2);
        if chain_leq(&p, &q) && chain_leq(&q, &r) {
            prop_assert!(chain_leq(&p, &r));
        }
    }

    #[test]
    fn merge_lies_below_both(p1 in arb_condition(4, 3), p2 in arb_condition(4, 3)) {
        let shared = p1.col_mask() & p2.col_mask();
        let root: Vec<usize> = (0..8).filter(|i| shared >> i & 1 == 1).collect();
        match merge_conditions(&p1, &p2, &root) {
            Ok(m) => {
                prop_assert!(p1.is_sub(&m) && p2.is_sub(&m));
                prop_assert_eq!(m.col_mask(), p1.col_mask() | p2.col_mask());
                prop_assert_eq!(m.row_mask(), p1.row_mask() | p2.row_mask());
            }
            Err(_) => prop_assert!(!p1.agrees_with(&p2)),
        }
    }

    #[test]
    fn json_round_trip(p in arb_condition(5, 4)) {
        let s = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<ChainCondition>(&s).unwrap(), p);
    }
}
