//! Deterministic fixtures for the criterion benchmarks: mid-size ordinals,
//! a dense open game, a synthesis instance with equal types, a valid
//! fusion-extension input, and a marked group for the rank table.

use std::collections::BTreeSet;

use rankforge_core::fusion::{FPair, TNode};
use rankforge_core::gamerank::{FiniteTree, OpenGame};
use rankforge_core::oracle::{small_groups, FiniteGroup, FiniteStructure, Relation};
use rankforge_core::{ConditionalShift, IndexOrder, Ordinal, Position, SymAutomorphism, ZElement};

fn o(s: &str) -> Ordinal {
    Ordinal::parse(s).unwrap()
}

/// Two ordinals with a handful of CNF terms each, the workhorse size for
/// arithmetic timings.
pub fn mid_ordinal_pair() -> (Ordinal, Ordinal) {
    (o("w^(w^2*2+3)*4+w^(w+1)*2+w*5+7"), o("w^(w^2+w)*3+w^2*6+w+2"))
}

/// The tower stage exercised by the profile benchmark.
pub fn tower_stage() -> Ordinal {
    o("w^2+w+3")
}

/// Alphabet-2 horizon-4 game of rank exactly 2: opening with 0 wins at once
/// against the reply 0 and within one more round against the reply 1, while
/// the subtree under 1,1 stays lost.
pub fn dense_game() -> OpenGame {
    let wins: BTreeSet<Vec<u32>> = [
        vec![0, 0],
        vec![0, 1, 0, 0],
        vec![0, 1, 0, 1],
        vec![0, 1, 1, 0],
        vec![1, 0, 0, 0],
        vec![1, 0, 0, 1],
    ]
    .into_iter()
    .collect();
    OpenGame::new(2, 4, wins).unwrap()
}

/// Perfect tree: every node above the leaves has `width` children.
pub fn balanced_tree(depth: usize, width: usize) -> FiniteTree {
    if depth == 0 {
        return FiniteTree(Vec::new());
    }
    FiniteTree(vec![balanced_tree(depth - 1, width); width])
}

/// A synthesis instance over the well order below `w^2`: the target pair is
/// related by a hidden conditional shift that fixes both context elements,
/// so the types match and a solution exists.
pub fn synthesis_instance() -> (IndexOrder, Vec<ZElement>, ZElement, ZElement) {
    let ambient = IndexOrder::Well { bound: o("w^2") };
    let p = |s: &str| Position::Ord(o(s));
    let anchor = ZElement::new(vec![(p("w+1"), 1)]);
    let hidden = SymAutomorphism {
        moves: vec![ConditionalShift {
            agreement: Some((anchor, p("w"))),
            targets: vec![p("w")],
            amount: 2,
            scope: None,
        }],
    };
    let a = ZElement::new(vec![(p("0"), 3), (p("2"), -1), (p("w+1"), 1)]);
    let b = hidden.apply(&a);
    // Fixed by the hidden shift: they disagree with the anchor above w.
    let context = vec![
        ZElement::new(vec![(p("1"), 2)]),
        ZElement::new(vec![(p("w"), 1), (p("w+2"), 1)]),
    ];
    (ambient, context, a, b)
}

/// A valid input bundle for one fusion extension step over `w`.
pub fn extension_instance() -> (Ordinal, FPair, TNode, TNode, usize, Ordinal, Vec<ZElement>) {
    let fin = Ordinal::from_nat;
    let s = TNode::new(fin(2), vec![(fin(2), 2)]).unwrap();
    let r = TNode::new(fin(2), vec![(fin(2), 1)]).unwrap();
    let pair = FPair { f0: vec![s.clone()], f1: Vec::new() };
    let c = vec![ZElement::new(vec![
        (Position::Ord(Ordinal::zero()), 2),
        (Position::Ord(fin(2)), 1),
    ])];
    (Ordinal::omega(), pair, s, r, 0, fin(1), c)
}

/// The dihedral group on the square with a symmetric marked subset.
pub fn dihedral_marked() -> (FiniteGroup, u64) {
    let g = small_groups()
        .into_iter()
        .find(|(name, _)| *name == "D4")
        .expect("catalog has the dihedral group")
        .1;
    let mut v = 1u64;
    for i in 1..g.order() {
        if i % 3 == 0 {
            v |= 1 << i;
        }
    }
    (g.clone(), g.inv_mask(v) | v)
}

/// A 4-point structure with one asymmetric edge relation.
pub fn probe_structure() -> FiniteStructure {
    let tuples: BTreeSet<Vec<usize>> =
        [vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![0, 2]].into_iter().collect();
    FiniteStructure::new(
        4,
        vec![Relation { name: "e".to_string(), arity: 2, tuples }],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankforge_core::gamerank::GameRank;
    use rankforge_core::zline::{qf_equal, synth_automorphism};
    use rankforge_core::{fusion, oracle};

    #[test]
    fn fixtures_are_valid() {
        let (a, b) = mid_ordinal_pair();
        assert!(a > b);

        assert_eq!(dense_game().grk(&[]).unwrap(), GameRank::Finite(2));

        let (ambient, context, x, y) = synthesis_instance();
        let mut with_x = context.clone();
        with_x.push(x.clone());
        let mut with_y = context.clone();
        with_y.push(y.clone());
        assert!(qf_equal(&ambient, &with_x, &with_y).unwrap());
        let psi = synth_automorphism(&ambient, &context, &x, &y).unwrap();
        assert_eq!(psi.apply(&x), y);

        let (mu, pair, s, r, i, beta, c) = extension_instance();
        fusion::in_f(&mu, &pair).unwrap();
        let step = fusion::extend_requirement(&mu, &pair, &s, &r, i, &beta, &c).unwrap();
        fusion::in_f(&mu, &step.pair).unwrap();

        let (g, v) = dihedral_marked();
        assert_eq!(g.inv_mask(v), v);
        oracle::rk_table(&g, v).unwrap();
        oracle::aut_group(&probe_structure()).unwrap();
    }
}
