//! Property tests for the antichain-pair machinery: meet laws, the
//! natural-sum height gate, randomized extension steps, gluing of local
//! moves, and the bounded shift search.

mod support;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankforge_core::fusion::{
    extend_requirement, glue_system, in_f, nhat, star_check, FPair, FusionError, TNode,
};
use rankforge_core::{ConditionalShift, Ordinal, Position, SymAutomorphism, ZElement};
use support::gen::rand_extension_instance;

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).unwrap()
}

fn node(height: &str, support: &[(&str, i64)]) -> TNode {
    TNode::new(o(height), support.iter().map(|(p, v)| (o(p), *v)).collect()).unwrap()
}

fn elem(pairs: &[(&str, i64)]) -> ZElement {
    ZElement::new(pairs.iter().map(|(p, v)| (Position::Ord(o(p)), *v)).collect())
}

#[test]
fn meet_is_the_least_common_truncation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6002);
    for _ in 0..2_000 {
        let make = |rng: &mut ChaCha8Rng| {
            let h = rng.gen_range(0..=4u64);
            let support = (0..rng.gen_range(0..=3usize))
                .map(|_| {
                    let p = rng.gen_range(h..=8);
                    let mut v = 0;
                    while v == 0 {
                        v = rng.gen_range(-2..=2);
                    }
                    (Ordinal::from_nat(p), v)
                })
                .collect();
            TNode::new(Ordinal::from_nat(h), support).unwrap()
        };
        let s = make(&mut rng);
        let t = make(&mut rng);
        let m = s.meet(&t);
        assert_eq!(m, t.meet(&s));
        assert_eq!(s.meet(&s), s);
        assert!(TNode::extends(&s, &m));
        assert!(TNode::extends(&t, &m));
        // No lower truncation height works: below the meet the two still
        // disagree somewhere.
        let floor = s.height().max(t.height()).as_nat().unwrap();
        let top = m.height().as_nat().unwrap();
        for h in floor..top {
            let cut = Ordinal::from_nat(h);
            assert_ne!(s.restrict(&cut), t.restrict(&cut), "{s:?} vs {t:?} at {h}");
        }
    }
}

#[test]
fn the_height_gate_uses_the_natural_sum() {
    let mu = o("w^2");
    // Heights 1 and w meeting at w+1: the natural sum 1 # w = w+1 is not
    // strictly below the meet, while the ordinary sum 1 + w = w would be.
    let s = node("1", &[("w", 1)]);
    let t = node("w", &[("w", 2)]);
    assert_eq!(*s.meet(&t).height(), o("w+1"));
    assert_eq!(o("1").nat_add(&o("w")), o("w+1"));
    assert_eq!(o("1").add(&o("w")), o("w"));
    let pair = FPair { f0: vec![s], f1: vec![t] };
    assert!(matches!(in_f(&mu, &pair), Err(FusionError::HeightSumTooLarge(_))));

    // One level deeper the same heights clear the gate: w+1 < w+2.
    let s2 = node("1", &[("w+1", 1)]);
    let t2 = node("w", &[("w+1", 2)]);
    assert_eq!(*s2.meet(&t2).height(), o("w+2"));
    let pair2 = FPair { f0: vec![s2], f1: vec![t2] };
    assert!(in_f(&mu, &pair2).is_ok());
}

#[test]
fn extension_steps_enlarge_one_side_and_stay_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(6001);
    for _ in 0..400 {
        let inst = rand_extension_instance(&mut rng);
        in_f(&inst.mu, &inst.pair).expect("generated pairs are valid");
        let step =
            extend_requirement(&inst.mu, &inst.pair, &inst.s, &inst.r, inst.i, &inst.beta, &inst.c)
                .expect("generated instances satisfy the preconditions");
        in_f(&inst.mu, &step.pair).expect("extended pairs stay valid");
        assert_eq!(step.pair.side(1 - inst.i), inst.pair.side(1 - inst.i));
        let old = inst.pair.side(inst.i);
        assert_eq!(&step.pair.side(inst.i)[..old.len()], old);
        if inst.c.is_empty() {
            assert_eq!(step.n, 0);
            assert_eq!(step.pair, inst.pair);
            continue;
        }
        assert!(step.n >= 1);
        assert!(step.gamma >= inst.beta);
        assert!(step.gamma < *inst.r.height());
        assert!(step.delta_combined >= inst.beta);
        assert!(step.delta_combined < *inst.r.height());
        let shift = nhat(&inst.r, step.n, &step.gamma, &step.delta_combined).unwrap();
        for x in &inst.c {
            let moved = shift.apply(x);
            assert!(
                step.pair
                    .side(inst.i)
                    .iter()
                    .any(|t| *t.height() >= inst.beta && t.covers_element(&moved)),
                "a shifted element must land under the extended side"
            );
        }
    }
}

#[test]
fn gluing_applies_each_local_move_on_its_own_patch() {
    let r1 = node("2", &[("2", 1)]);
    let r2 = node("2", &[("2", 2)]);
    let m1 = ConditionalShift {
        agreement: None,
        targets: vec![Position::Ord(o("0"))],
        amount: 3,
        scope: None,
    };
    let m2 = ConditionalShift {
        agreement: None,
        targets: vec![Position::Ord(o("1"))],
        amount: -1,
        scope: None,
    };
    let phi = glue_system(&[
        (r1.clone(), SymAutomorphism { moves: vec![m1.clone()] }),
        (r2.clone(), SymAutomorphism { moves: vec![m2] }),
    ])
    .unwrap();

    let x1 = elem(&[("0", 5), ("2", 1)]);
    assert_eq!(phi.apply(&x1), elem(&[("0", 8), ("2", 1)]));
    let x2 = elem(&[("2", 2)]);
    assert_eq!(phi.apply(&x2), elem(&[("1", -1), ("2", 2)]));
    let x3 = elem(&[("2", 3)]);
    assert_eq!(phi.apply(&x3), x3);

    // Comparable scopes are rejected.
    let deep = node("0", &[("2", 1)]);
    let conflict = glue_system(&[
        (r1.clone(), SymAutomorphism { moves: vec![m1.clone()] }),
        (deep, SymAutomorphism::identity()),
    ]);
    assert!(matches!(conflict, Err(FusionError::GlueConflict(_))));

    // A move reaching up to its own scope height is rejected.
    let high = ConditionalShift {
        agreement: None,
        targets: vec![Position::Ord(o("2"))],
        amount: 1,
        scope: None,
    };
    let bad = glue_system(&[(r1, SymAutomorphism { moves: vec![high] })]);
    assert!(matches!(bad, Err(FusionError::GlueConflict(_))));
}

#[test]
fn shift_search_fixes_anchors_and_settles_targets() {
    let j = vec![node("3", &[("3", 1), ("5", 2)]), node("3", &[("3", 2)])];
    let alpha = o("3");
    let beta = o("1");
    let anchors = vec![elem(&[("3", 1), ("5", 2)])];
    let targets = vec![elem(&[("1", 7), ("3", 5)])];
    let phi = star_check(&j, &alpha, &anchors, &targets, &beta, 5).unwrap();
    assert_eq!(phi.apply(&anchors[0]), anchors[0]);
    let moved = phi.apply(&targets[0]);
    assert!(j.iter().any(|t| *t.height() >= beta && t.covers_element(&moved)));
    assert_eq!(moved, elem(&[("1", 7), ("3", 2)]));

    // A target too far from every node is inconclusive, not an error.
    let stray = vec![elem(&[("3", 9), ("5", 9), ("6", 9)])];
    assert_eq!(
        star_check(&j, &alpha, &anchors, &stray, &beta, 5),
        Err(FusionError::StarNotFound)
    );

    // Precondition failures are named.
    assert!(matches!(
        star_check(&j, &alpha, &anchors, &targets, &o("4"), 5),
        Err(FusionError::Precondition(_))
    ));
    let uncovered = vec![elem(&[("3", 7)])];
    assert!(matches!(
        star_check(&j, &alpha, &uncovered, &targets, &beta, 5),
        Err(FusionError::Precondition(_))
    ));
}

#[test]
fn node_and_pair_json_round_trip() {
    let n = TNode::new(o("3"), vec![(o("5"), -2)]).unwrap();
    let js = serde_json::to_string(&n).unwrap();
    assert_eq!(js, r#"{"height":[[[],3]],"support":[[[[[],5]],-2]]}"#);
    assert_eq!(serde_json::from_str::<TNode>(&js).unwrap(), n);

    // Reading normalizes: unsorted support, merged duplicates, dropped zeros.
    let messy = r#"{"height":[],"support":[[[[[],4]],1],[[[[],2]],0],[[[[],1]],2]]}"#;
    let parsed: TNode = serde_json::from_str(messy).unwrap();
    assert_eq!(parsed, TNode::new(o("0"), vec![(o("1"), 2), (o("4"), 1)]).unwrap());

    // Support below the height is rejected on read.
    let low = r#"{"height":[[[],3]],"support":[[[],5]]}"#;
    assert!(serde_json::from_str::<TNode>(low).is_err());

    let pair = FPair { f0: vec![TNode::new(o("1"), vec![]).unwrap()], f1: vec![] };
    let pj = serde_json::to_string(&pair).unwrap();
    assert_eq!(pj, r#"{"F0":[{"height":[[[],1]],"support":[]}],"F1":[]}"#);
    assert_eq!(serde_json::from_str::<FPair>(&pj).unwrap(), pair);
}
