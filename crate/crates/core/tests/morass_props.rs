use std::collections::BTreeSet;

use morass::gap2::{gfam, Gap1Embedding};
use morass::order::{all_maps, OrdMap};
use morass::suites::gap1_report;
use morass::{fixtures, FakeGap1Morass, FakeGap2Morass, MorassTree};
use proptest::prelude::*;

fn arb_map(max: usize) -> impl Strategy<Value = OrdMap> {
    (0..=max, 0..=max).prop_flat_map(|(d, extra)| {
        let cod = d + extra;
        proptest::sample::subsequence((0..cod).collect::<Vec<_>>(), d).prop_map(move |img| OrdMap::new(d, cod, img).unwrap())
    })
}

/// Three composable maps `a → b → c → d`.
fn arb_chain3() -> impl Strategy<Value = (OrdMap, OrdMap, OrdMap)> {
    (0usize..=4, 0usize..=2, 0usize..=2, 0usize..=2).prop_flat_map(|(a, x, y, z)| {
        let (b, c, d) = (a + x, a + x + y, a + x + y + z);
        let pick = |n: usize, m: usize| {
            proptest::sample::subsequence((0..m).collect::<Vec<_>>(), n).prop_map(move |img| OrdMap::new(n, m, img).unwrap())
        };
        (pick(a, b), pick(b, c), pick(c, d))
    })
}

/// Legal split sequences: each split lies below the current top.
fn arb_splits(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(any::<u16>(), 0..=max_len).prop_map(|raw| {
        let mut theta = 1usize;
        raw.iter()
            .map(|&r| {
                let d = r as usize % theta;
                theta = 2 * theta - d;
                d
            })
            .collect()
    })
}

/// `F_{αβ}` by composing the step families by hand, on image lists.
fn closure_oracle(m: &FakeGap1Morass, alpha: usize, beta: usize) -> BTreeSet<Vec<usize>> {
    let mut cur: BTreeSet<Vec<usize>> = BTreeSet::from([(0..m.theta(alpha)).collect()]);
    for g in alpha..beta {
        let d = m.split(g).unwrap();
        let t = m.theta(g);
        let shift = |x: usize| if x < d { x } else { t + x - d };
        let mut next = BTreeSet::new();
        for f in &cur {
            next.insert(f.clone());
            next.insert(f.iter().map(|&x| shift(x)).collect());
        }
        cur = next;
    }
    cur
}

#[test]
fn associativity_exhaustive_small() {
    for a in 0..=3 {
        for b in a..=4 {
            for c in b..=5 {
                for d in c..=5 {
                    for f in all_maps(a, b) {
                        for g in all_maps(b, c) {
                            for h in all_maps(c, d) {
                                let l = h.compose(&g.compose(&f).unwrap()).unwrap();
                                let r = h.compose(&g).unwrap().compose(&f).unwrap();
                                assert_eq!(l, r);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn closure_matches_hand_composition_on_fixtures() {
    for name in fixtures::GAP1_NAMES.iter().chain(fixtures::CHAIN_NAMES) {
        let m = fixtures::gap1(name).or_else(|_| fixtures::chain(name)).unwrap();
        if !m.limits().is_empty() {
            continue;
        }
        for b in 0..=m.height() {
            for a in 0..=b {
                let have: BTreeSet<Vec<usize>> = m.family(a, b).iter().map(|f| f.images().to_vec()).collect();
                assert_eq!(have, closure_oracle(&m, a, b), "{name} F_{{{a},{b}}}");
            }
        }
    }
}

#[test]
fn every_mutation_is_caught_by_its_axiom() {
    for m in morass::mutate::MUTATIONS {
        let d = m.detect().unwrap();
        assert!(d.attributed, "{} expected {} among {:?}", m.name, d.expected, d.failed);
    }
}

#[test]
fn gap2_fixtures_validate_and_decompose() {
    for name in fixtures::GAP2_NAMES {
        let g = fixtures::gap2(name).unwrap();
        let r = g.validate();
        assert!(r.all_pass(), "{name}: {}", r.to_json());
        let bars = g.bar_report();
        assert!(bars.all_pass(), "{name}: {}", bars.to_json());
        assert!(gap1_report(&g.theta_morass()).all_pass());
    }
}

#[test]
fn embedding_identity_is_neutral() {
    let g = fixtures::gap2("two-step").unwrap();
    for f in g.family(0, 2) {
        let left = Gap1Embedding::identity(g.inner(), f.dst_top()).compose(&f).unwrap();
        let right = f.compose(&Gap1Embedding::identity(g.inner(), f.src_top())).unwrap();
        assert_eq!(left, f);
        assert_eq!(right, f);
    }
}

proptest! {
    #[test]
    fn compose_is_associative((f, g, h) in arb_chain3()) {
        prop_assert_eq!(h.compose(&g.compose(&f).unwrap()).unwrap(), h.compose(&g).unwrap().compose(&f).unwrap());
    }

    #[test]
    fn identity_is_neutral(f in arb_map(6)) {
        prop_assert_eq!(OrdMap::identity(f.cod()).compose(&f).unwrap(), f.clone());
        prop_assert_eq!(f.compose(&OrdMap::identity(f.dom())).unwrap(), f);
    }

    #[test]
    fn maps_are_injective_and_ssup_bounded(f in arb_map(7)) {
        let set: BTreeSet<usize> = f.images().iter().copied().collect();
        prop_assert_eq!(set.len(), f.dom());
        for z in 0..f.dom() {
            prop_assert!(f.ssup_image(z).unwrap() <= f.apply(z).unwrap());
            prop_assert_eq!(f.preimage(f.apply(z).unwrap()), Some(z));
        }
        prop_assert_eq!(f.ssup_image(f.dom()).unwrap(), f.images().last().map_or(0, |x| x + 1));
    }

    #[test]
    fn restrict_then_compose_commutes((f, g, _h) in arb_chain3(), k in 0usize..5) {
        let k = k.min(f.dom());
        prop_assert_eq!(g.compose(&f.restrict(k).unwrap()).unwrap(), g.compose(&f).unwrap().restrict(k).unwrap());
    }

    #[test]
    fn random_amalgamations_validate(splits in arb_splits(4)) {
        let m = FakeGap1Morass::from_splits(&splits).unwrap();
        let r = gap1_report(&m);
        prop_assert!(r.all_pass(), "{}", r.to_json());
        for b in 0..=m.height() {
            for a in 0..=b {
                let have: BTreeSet<Vec<usize>> = m.family(a, b).iter().map(|f| f.images().to_vec()).collect();
                prop_assert_eq!(have, closure_oracle(&m, a, b));
            }
        }
    }

    #[test]
    fn tree_projections_compose(splits in arb_splits(4)) {
        let m = FakeGap1Morass::from_splits(&splits).unwrap();
        let t = MorassTree::build(&m).unwrap();
        let top = m.height();
        for x in 0..m.top_theta() {
            let v = (top, x);
            let branch: Vec<_> = (0..=top).map(|a| t.predecessor_at(v, a).expect("branch reaches every level")).collect();
            for (i, &r) in branch.iter().enumerate() {
                for &s in &branch[i..] {
                    prop_assert!(t.prec(r, s) || r == s);
                    let via = t.pi(s, v).unwrap().compose(&t.pi(r, s).unwrap()).unwrap();
                    prop_assert_eq!(via, t.pi(r, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_round_trip(splits in arb_splits(3)) {
        let m = FakeGap1Morass::from_splits(&splits).unwrap();
        let back: FakeGap1Morass = serde_json::from_str(&m.to_json()).unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_gap2_amalgamations_validate(choices in proptest::collection::vec((any::<u16>(), any::<u16>()), 1..=2)) {
        let inner = FakeGap1Morass::from_splits(&[0, 1, 2, 3]).unwrap();
        let mut g = FakeGap2Morass::new(inner.clone()).unwrap();
        for (i, (e, f)) in choices.into_iter().enumerate() {
            let th = g.top_theta();
            let eta = e as usize % th;
            let fam = gfam(&inner, eta, th);
            prop_assume!(!fam.is_empty());
            match g.amalgamate(eta, &fam[f as usize % fam.len()]) {
                Ok(next) => g = next,
                // not every f_η admits a right-branching member
                Err(_) => {
                    prop_assume!(i > 0);
                    break;
                }
            }
        }
        prop_assert!(g.height() >= 1);
        let r = g.validate();
        prop_assert!(r.all_pass(), "{}", r.to_json());
        prop_assert!(g.bar_report().all_pass());
    }
}
