use morass::fs::{is_complete_embedding, max_antichain};
use morass::order::OrdMap;
use morass::topology::{generic_space, DenseSet, GenericConfig, Rect, TensorMap, TopCondition, TopologyHierarchy};
use morass::{fixtures, Error};
use proptest::prelude::*;

fn hierarchy(name: &str) -> TopologyHierarchy {
    TopologyHierarchy::build(&fixtures::topology(name).unwrap()).unwrap()
}

fn all_conditions(r: Rect) -> Vec<TopCondition> {
    let n = r.cells();
    let mut out = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let mut entries = Vec::new();
        for cell in 0..n {
            let (g, mu) = r.coords(cell);
            match c % 3 {
                1 => entries.push((g, mu, false)),
                2 => entries.push((g, mu, true)),
                _ => {}
            }
            c /= 3;
        }
        out.push(r.condition(&entries).unwrap());
    }
    out
}

#[test]
fn tensor_moves_a_cell_into_the_image_block() {
    let r = Rect::new(2, 6, 2).unwrap();
    let t = TensorMap::new(OrdMap::new(1, 2, vec![1]).unwrap(), OrdMap::new(1, 3, vec![2]).unwrap(), 2);
    // ⟨0, 2·0+1⟩ ↦ ⟨1, 2·2+1⟩
    assert_eq!(t.apply(0, 1), Some((1, 5)));
    assert_eq!(t.apply(0, 0), Some((1, 4)));
    assert_eq!(t.apply(0, 2), None);
    let p = r.condition(&[(0, 0, false), (0, 1, true)]).unwrap();
    assert_eq!(t.image(&p).unwrap(), r.condition(&[(1, 4, false), (1, 5, true)]).unwrap());
}

#[test]
fn identity_is_a_complete_embedding() {
    let conds = all_conditions(Rect::new(2, 1, 1).unwrap());
    assert_eq!(conds.len(), 9);
    let compat = |a: &TopCondition, b: &TopCondition| a.union(b).is_some();
    let leq = |a: &TopCondition, b: &TopCondition| a.leq(b);
    let (r, w) = is_complete_embedding(&conds, &conds, |p| *p, leq, leq, compat, compat);
    assert!(r.all_pass(), "{}", r.to_json());
    // each q is its own reduction, or something weaker found first
    for (i, wi) in w.iter().enumerate() {
        let p = &conds[wi.expect("reduction exists")];
        assert!(conds.iter().filter(|r| r.leq(p)).all(|r| compat(r, &conds[i])));
    }
}

#[test]
fn dropping_a_cell_is_not_complete() {
    // forgetting point 1 keeps order but not incompatibility
    let r = Rect::new(2, 1, 1).unwrap();
    let conds = all_conditions(r);
    let keep = r.box_mask(1, 1);
    let compat = |a: &TopCondition, b: &TopCondition| a.union(b).is_some();
    let leq = |a: &TopCondition, b: &TopCondition| a.leq(b);
    let (rep, _) = is_complete_embedding(&conds, &conds, |p| p.restrict(keep), leq, leq, compat, compat);
    assert!(rep.passed("order"));
    assert!(!rep.passed("incompatibility"));
}

#[test]
fn stars_have_finite_decreasing_support() {
    let h = hierarchy("minimal-b1");
    for p in h.forcing() {
        let s = h.star(p).expect("every condition of ℙ has a star");
        assert_eq!(*s.gammas.last().unwrap(), 0);
        assert!(s.gammas.windows(2).all(|w| w[0] > w[1]));
        let supp = s.support();
        assert_eq!(supp.len(), s.gammas.len());
        assert_eq!(supp.iter().max(), Some(&s.gammas[0]));
        assert_eq!(s.values.len(), h.top_level() + 1);
        assert_eq!(&s.values[h.top_level()], p);
    }
}

#[test]
fn separating_from_the_empty_condition() {
    for name in ["minimal-b1", "two-step-b1"] {
        let h = hierarchy(name);
        let empty = h.rect().empty();
        let n = h.rect().points;
        for g in 0..n {
            for d in g + 1..n {
                let s = h.separate(&empty, g, d).unwrap();
                assert!(s.separates(g, d), "{name}: {g} {d} {:?}", s);
                assert!(h.in_forcing(&s.q));
                assert!(s.q.leq(&empty));
            }
        }
        assert!(matches!(h.separate(&empty, 0, 0), Err(Error::Precondition(_))));
        assert!(matches!(h.separate(&empty, 0, n), Err(Error::OutOfRange(_))));
    }
}

#[test]
fn no_dense_sets_leave_the_coloring_partial() {
    let h = hierarchy("minimal-b1");
    let cfg = GenericConfig { start: h.rect().empty(), sets: vec![], seed: None };
    let g = generic_space(&h, &cfg).unwrap();
    assert!(g.condition.is_empty());
    assert!(g.coloring.iter().flatten().all(Option::is_none));
    assert!(!g.report.passed("F total"));
}

#[test]
fn one_separation_set_is_met() {
    let h = hierarchy("two-step-b1");
    let sets = vec![DenseSet::Separate { gamma: 1, delta: 2 }];
    let cfg = GenericConfig { start: h.rect().empty(), sets: sets.clone(), seed: Some(5) };
    let g = generic_space(&h, &cfg).unwrap();
    assert!(sets[0].contains(&g.condition, h.rect().colors));
    assert!(h.in_forcing(&g.condition));
}

/// Largest pairwise incompatible subset, by brute force.
fn antichain_oracle(n: usize, edge: &dyn Fn(usize, usize) -> bool) -> usize {
    (0u32..1 << n)
        .filter(|s| (0..n).all(|i| (i + 1..n).all(|j| s >> i & 1 == 0 || s >> j & 1 == 0 || edge(i, j))))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

proptest! {
    #[test]
    fn antichain_search_matches_brute_force(n in 1usize..10, bits in any::<u64>()) {
        let idx = |i: usize, j: usize| {
            let (a, b) = (i.min(j), i.max(j));
            b * (b - 1) / 2 + a
        };
        let edge = |i: usize, j: usize| bits >> idx(i, j) & 1 == 1;
        let a = max_antichain(n, edge, 1_000_000);
        prop_assert!(a.exact);
        prop_assert_eq!(a.size, antichain_oracle(n, &edge));
        prop_assert_eq!(a.witness.len(), a.size);
        for (k, &i) in a.witness.iter().enumerate() {
            for &j in &a.witness[k + 1..] {
                prop_assert!(edge(i, j));
            }
        }
    }

    #[test]
    fn tensor_image_respects_union(
        cells_p in proptest::collection::vec((0usize..2, 0usize..4, any::<bool>()), 0..5),
        cells_q in proptest::collection::vec((0usize..2, 0usize..4, any::<bool>()), 0..5),
        shift in 0usize..2,
    ) {
        let r = Rect::new(4, 8, 2).unwrap();
        let dedup = |v: &[(usize, usize, bool)]| {
            let mut out: Vec<(usize, usize, bool)> = Vec::new();
            for &c in v {
                if !out.iter().any(|o| (o.0, o.1) == (c.0, c.1)) {
                    out.push(c);
                }
            }
            out
        };
        let p = r.condition(&dedup(&cells_p)).unwrap();
        let q = r.condition(&dedup(&cells_q)).unwrap();
        let t = TensorMap::new(
            OrdMap::new(2, 4, vec![shift, shift + 2]).unwrap(),
            OrdMap::new(2, 4, vec![shift, 3]).unwrap(),
            2,
        );
        let (tp, tq) = (t.image(&p).unwrap(), t.image(&q).unwrap());
        prop_assert_eq!(t.preimage(&tp), p);
        prop_assert_eq!(tp.len(), p.len());
        prop_assert!(t.covers(&tp));
        // injective tensors preserve and reflect compatibility
        prop_assert_eq!(p.union(&q).is_some(), tp.union(&tq).is_some());
        if let Some(u) = p.union(&q) {
            prop_assert_eq!(t.image(&u).unwrap(), tp.union(&tq).unwrap());
        }
    }
}
