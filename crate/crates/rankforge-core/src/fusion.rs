//! Fusion of antichain pairs over a well-ordered index w^lambda.
//!
//! Elements of the ambient group are glued from two partial specifications
//! indexed by trees of truncations. A truncation (`TNode`) fixes an element
//! on a final segment `[height, mu)` of the index order and is silent below;
//! an antichain pair (`FPair`) is two antichains of truncations whose
//! members combine heights slowly enough (the Hessenberg condition `P2`)
//! that both sides can always be extended and eventually fused into a single
//! conditional-shift automorphism.

use crate::ordinal::Ordinal;
use crate::zline::{ConditionalShift, Position, SymAutomorphism, ZElement};
use serde::{Deserialize, Deserializer, Serialize};

/// A truncation: the restriction of some element to the final segment
/// `[height, mu)`. Support positions sit at or above the height; values are
/// nonzero; the node says nothing about positions below its height.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TNode {
    height: Ordinal,
    support: Vec<(Ordinal, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("support position below the node height")]
    SupportBelowHeight,
    #[error("position at or above the index bound")]
    PositionOutsideIndex,
    #[error("element uses a position outside the ambient order")]
    ElementOutsideIndex,
    #[error("the index bound must be additively indecomposable")]
    IndexNotIndecomposable,
    #[error("the two sides of the pair are not disjoint")]
    SidesNotDisjoint,
    #[error("truncations within the pair are comparable")]
    SidesNotAntichains,
    #[error("height sum condition fails: {0}")]
    HeightSumTooLarge(String),
    #[error("element is covered by both sides of the pair")]
    CoveredByBothSides,
    #[error("{0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("local moves are incompatible: {0}")]
    GlueConflict(String),
    #[error("no combination of single shifts settles the target set")]
    StarNotFound,
}

impl TNode {
    /// Normalizing constructor: sorts the support, merges duplicate
    /// positions, drops zeros, and rejects positions below the height.
    pub fn new(height: Ordinal, support: Vec<(Ordinal, i64)>) -> Result<TNode, FusionError> {
        let mut merged: Vec<(Ordinal, i64)> = Vec::new();
        let mut support = support;
        support.sort_by(|a, b| a.0.compare(&b.0));
        for (p, v) in support {
            match merged.last_mut() {
                Some((q, acc)) if *q == p => *acc += v,
                _ => merged.push((p, v)),
            }
        }
        merged.retain(|(_, v)| *v != 0);
        if merged.iter().any(|(p, _)| p < &height) {
            return Err(FusionError::SupportBelowHeight);
        }
        Ok(TNode {
            height,
            support: merged,
        })
    }

    /// The truncation of `x` to `[height, mu)`. `x` must live in a
    /// well-ordered ambient, i.e. use only ordinal positions.
    pub fn from_element(x: &ZElement, height: Ordinal) -> Result<TNode, FusionError> {
        let mut support = Vec::new();
        for (pos, v) in x.support() {
            let Position::Ord(o) = pos else {
                return Err(FusionError::ElementOutsideIndex);
            };
            if *o >= height {
                support.push((o.clone(), *v));
            }
        }
        Ok(TNode { height, support })
    }

    pub fn height(&self) -> &Ordinal {
        &self.height
    }

    pub fn support(&self) -> &[(Ordinal, i64)] {
        &self.support
    }

    pub fn value_at(&self, p: &Ordinal) -> i64 {
        self.support
            .binary_search_by(|(q, _)| q.compare(p))
            .map(|i| self.support[i].1)
            .unwrap_or(0)
    }

    /// Further truncation to `[from, mu)`; `from` must be at or above the
    /// current height.
    pub fn restrict(&self, from: &Ordinal) -> TNode {
        debug_assert!(*from >= self.height);
        TNode {
            height: from.clone(),
            support: self
                .support
                .iter()
                .filter(|(p, _)| p >= from)
                .cloned()
                .collect(),
        }
    }

    /// Whether `other` extends `self`: `other` is defined lower down and
    /// agrees with `self` on all of `[self.height, mu)`.
    pub fn extends(other: &TNode, base: &TNode) -> bool {
        other.height <= base.height && other.restrict(&base.height) == *base
    }

    /// Whether the element `x`, seen as a height-0 truncation, extends
    /// `self`.
    pub fn covers_element(&self, x: &ZElement) -> bool {
        for (p, v) in &self.support {
            if x.get(&Position::Ord(p.clone())) != *v {
                return false;
            }
        }
        for (pos, v) in x.support() {
            let Position::Ord(o) = pos else {
                return false;
            };
            if *o >= self.height && self.value_at(o) != *v {
                return false;
            }
        }
        true
    }

    /// Greatest common truncation: the restriction of either node to
    /// `[delta, mu)` where `delta` is the least height at which the two
    /// agree from there on up.
    pub fn meet(&self, other: &TNode) -> TNode {
        let mut delta = self.height.clone().max(other.height.clone());
        for (p, _) in self.support.iter().chain(other.support.iter()) {
            if *p >= delta && self.value_at(p) != other.value_at(p) {
                let above = p.successor();
                if above > delta {
                    delta = above;
                }
            }
        }
        self.restrict(&delta)
    }

    pub fn comparable(&self, other: &TNode) -> bool {
        let m = self.meet(other);
        m == *self || m == *other
    }

    fn check_bound(&self, mu: &Ordinal) -> Result<(), FusionError> {
        if self.height >= *mu || self.support.iter().any(|(p, _)| p >= mu) {
            return Err(FusionError::PositionOutsideIndex);
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for TNode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<TNode, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            height: Ordinal,
            support: Vec<(Ordinal, i64)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        TNode::new(raw.height, raw.support).map_err(serde::de::Error::custom)
    }
}

/// A pair of finite antichains of truncations with disjoint unions, subject
/// to the height condition: for `s` on one side and `t` on the other, the
/// natural sum of their heights stays strictly below the height of their
/// meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPair {
    #[serde(rename = "F0")]
    pub f0: Vec<TNode>,
    #[serde(rename = "F1")]
    pub f1: Vec<TNode>,
}

impl FPair {
    pub fn side(&self, i: usize) -> &[TNode] {
        if i == 0 {
            &self.f0
        } else {
            &self.f1
        }
    }

    pub fn members(&self) -> impl Iterator<Item = &TNode> {
        self.f0.iter().chain(self.f1.iter())
    }
}

/// Checks that `pair` is a valid antichain pair over the index `mu`, which
/// must be additively indecomposable (`w^lambda`). Verifies node bounds,
/// disjointness, both antichain conditions, and the height sum condition.
pub fn in_f(mu: &Ordinal, pair: &FPair) -> Result<(), FusionError> {
    if !mu.analyze().indecomposable {
        return Err(FusionError::IndexNotIndecomposable);
    }
    for node in pair.members() {
        node.check_bound(mu)?;
    }
    for s in &pair.f0 {
        if pair.f1.contains(s) {
            return Err(FusionError::SidesNotDisjoint);
        }
    }
    let all: Vec<&TNode> = pair.members().collect();
    for (i, s) in all.iter().enumerate() {
        for t in all.iter().skip(i + 1) {
            if s != t && s.comparable(t) {
                return Err(FusionError::SidesNotAntichains);
            }
        }
    }
    for s in &pair.f0 {
        for t in &pair.f1 {
            let bound = s.height().nat_add(t.height());
            if bound >= *s.meet(t).height() {
                return Err(FusionError::HeightSumTooLarge(format!(
                    "heights {} and {} against meet height {}",
                    s.height(),
                    t.height(),
                    s.meet(t).height()
                )));
            }
        }
    }
    Ok(())
}

/// Which side of the pair covers `x`: `Some(0)`, `Some(1)`, or `None` when
/// neither does. Covered by both is an invariant violation.
pub fn fuse_side(pair: &FPair, x: &ZElement) -> Result<Option<usize>, FusionError> {
    let c0 = pair.f0.iter().any(|s| s.covers_element(x));
    let c1 = pair.f1.iter().any(|s| s.covers_element(x));
    match (c0, c1) {
        (true, true) => Err(FusionError::CoveredByBothSides),
        (true, false) => Ok(Some(0)),
        (false, true) => Ok(Some(1)),
        (false, false) => Ok(None),
    }
}

/// Fused map: applies `x0` on elements covered by the first side, `x1` on
/// the second side, and `default_rule` elsewhere.
pub fn fuse_value<T>(
    pair: &FPair,
    x: &ZElement,
    x0: impl FnOnce(&ZElement) -> T,
    x1: impl FnOnce(&ZElement) -> T,
    default_rule: impl FnOnce(&ZElement) -> T,
) -> Result<T, FusionError> {
    Ok(match fuse_side(pair, x)? {
        Some(0) => x0(x),
        Some(_) => x1(x),
        None => default_rule(x),
    })
}

/// The single conditional shift `n̂` that subtracts `n` at the coordinates
/// `gamma` and `delta_combined`, scoped to elements covered by `r`. With
/// `n = 0` the move list is empty.
pub fn nhat(
    r: &TNode,
    n: i64,
    gamma: &Ordinal,
    delta_combined: &Ordinal,
) -> Result<SymAutomorphism, FusionError> {
    if gamma >= r.height() || delta_combined >= r.height() {
        return Err(FusionError::Precondition(
            "shift coordinates must lie strictly below the scope height".to_string(),
        ));
    }
    if n == 0 {
        return Ok(SymAutomorphism { moves: Vec::new() });
    }
    let mut targets = vec![Position::Ord(gamma.clone())];
    let delta_pos = Position::Ord(delta_combined.clone());
    if !targets.contains(&delta_pos) {
        targets.push(delta_pos);
    }
    targets.sort();
    Ok(SymAutomorphism {
        moves: vec![ConditionalShift {
            agreement: None,
            targets,
            amount: -n,
            scope: Some(r.clone()),
        }],
    })
}

/// Report of one extension step: the enlarged pair plus the shift data
/// `(n, gamma, delta_combined)` that moved the new requirements into place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionStep {
    pub pair: FPair,
    pub n: i64,
    pub gamma: Ordinal,
    pub delta_combined: Ordinal,
}

/// Extends side `i` of the pair below the marker `s` so that every element
/// of `C` (a finite set of elements covered by `r`) becomes covered by the
/// new side after a single scoped shift. Preconditions: `pair` is a valid
/// antichain pair; `s` is on side `i` with height above `beta`; the meet of
/// `r` and `s` sits exactly one level above `r`; no member of the pair
/// extends `r`; every element of `C` is covered by `r`.
pub fn extend_requirement(
    mu: &Ordinal,
    pair: &FPair,
    s: &TNode,
    r: &TNode,
    i: usize,
    beta: &Ordinal,
    c: &[ZElement],
) -> Result<ExtensionStep, FusionError> {
    in_f(mu, pair)?;
    if i > 1 {
        return Err(FusionError::Precondition("side index must be 0 or 1".to_string()));
    }
    if !pair.side(i).contains(s) {
        return Err(FusionError::Precondition(
            "marker node is not on the requested side".to_string(),
        ));
    }
    if s.height() <= beta {
        return Err(FusionError::Precondition(
            "marker height must exceed the extension height".to_string(),
        ));
    }
    if *r.meet(s).height() != r.height().successor() {
        return Err(FusionError::Precondition(
            "the meet of the base and the marker must sit one level above the base".to_string(),
        ));
    }
    if pair.members().any(|t| TNode::extends(r, t)) {
        return Err(FusionError::Precondition(
            "a member of the pair already extends below the base".to_string(),
        ));
    }
    for x in c {
        if !r.covers_element(x) {
            return Err(FusionError::Precondition(
                "every listed element must be covered by the base".to_string(),
            ));
        }
    }
    if c.is_empty() {
        return Ok(ExtensionStep {
            pair: pair.clone(),
            n: 0,
            gamma: beta.clone(),
            delta_combined: beta.clone(),
        });
    }

    let rho = r.height();
    // Nodes of the pair strictly extending r; their heights are < rho.
    let extenders: Vec<&TNode> = pair
        .members()
        .filter(|q| TNode::extends(q, r) && *q != r)
        .collect();
    let mut gamma = beta.clone();
    for q in &extenders {
        if *q.height() > gamma {
            gamma = q.height().clone();
        }
    }
    let delta = pair
        .side(1 - i)
        .iter()
        .filter(|t| TNode::extends(t, r))
        .map(|t| t.height().clone())
        .max()
        .unwrap_or_else(Ordinal::zero);
    let delta_combined = beta.nat_add(&delta);
    if gamma >= *rho || delta_combined >= *rho {
        return Err(FusionError::Internal(
            "extension coordinates escaped the base height".to_string(),
        ));
    }

    // Smallest shift that steers every element of C clear of the values the
    // existing extenders pin at the two coordinates.
    let gamma_pos = Position::Ord(gamma.clone());
    let delta_pos = Position::Ord(delta_combined.clone());
    let opposite: Vec<&TNode> = pair
        .side(1 - i)
        .iter()
        .filter(|t| TNode::extends(t, r))
        .collect();
    let mut n: i64 = 1;
    'search: loop {
        for x in c {
            for q in &extenders {
                if x.get(&gamma_pos) - n == q.value_at(&gamma) {
                    n += 1;
                    continue 'search;
                }
            }
            for t in &opposite {
                if x.get(&delta_pos) - n == t.value_at(&delta_combined) {
                    n += 1;
                    continue 'search;
                }
            }
        }
        break;
    }

    let shift = nhat(r, n, &gamma, &delta_combined)?;
    let mut new_side = pair.side(i).to_vec();
    for x in c {
        let moved = shift.apply(x);
        let node = TNode::from_element(&moved, beta.clone())?;
        if !new_side.contains(&node) {
            new_side.push(node);
        }
    }
    let extended = if i == 0 {
        FPair {
            f0: new_side,
            f1: pair.f1.clone(),
        }
    } else {
        FPair {
            f0: pair.f0.clone(),
            f1: new_side,
        }
    };
    in_f(mu, &extended)?;
    Ok(ExtensionStep {
        pair: extended,
        n,
        gamma,
        delta_combined,
    })
}

/// Concatenates local automorphisms with pairwise incomparable scopes into
/// one global automorphism. Each local move must act strictly below its
/// node's height and either carry no scope (it is then scoped to the node)
/// or a scope already confined to the node.
pub fn glue_system(system: &[(TNode, SymAutomorphism)]) -> Result<SymAutomorphism, FusionError> {
    for (i, (r, _)) in system.iter().enumerate() {
        for (t, _) in system.iter().skip(i + 1) {
            if r.comparable(t) {
                return Err(FusionError::GlueConflict(format!(
                    "scopes at heights {} and {} are comparable",
                    r.height(),
                    t.height()
                )));
            }
        }
    }
    let mut moves = Vec::new();
    for (r, local) in system {
        for mv in &local.moves {
            for target in &mv.targets {
                let below = matches!(target, Position::Ord(o) if o < r.height());
                if !below {
                    return Err(FusionError::GlueConflict(format!(
                        "a move targets a position not strictly below the scope height {}",
                        r.height()
                    )));
                }
            }
            let scope = match &mv.scope {
                None => r.clone(),
                Some(t) if TNode::extends(t, r) => t.clone(),
                Some(_) => {
                    return Err(FusionError::GlueConflict(
                        "a move carries a scope outside its node".to_string(),
                    ))
                }
            };
            moves.push(ConditionalShift {
                scope: Some(scope),
                ..mv.clone()
            });
        }
    }
    Ok(SymAutomorphism { moves })
}

/// Searches for an automorphism that fixes every element of `a` and moves
/// every element of `b` onto a truncation of `j` of height at least `beta`,
/// using single scoped shifts of magnitude at most `bound`. Preconditions:
/// `beta < alpha` and every element of `a` is covered by some member of `j`
/// at height at least `alpha`. A [`FusionError::StarNotFound`] outcome is
/// inconclusive, not a refutation.
pub fn star_check(
    j: &[TNode],
    alpha: &Ordinal,
    a: &[ZElement],
    b: &[ZElement],
    beta: &Ordinal,
    bound: i64,
) -> Result<SymAutomorphism, FusionError> {
    if beta >= alpha {
        return Err(FusionError::Precondition(
            "the target height must be strictly below the anchor height".to_string(),
        ));
    }
    for x in a {
        let ok = j
            .iter()
            .any(|t| t.height() >= alpha && t.covers_element(x));
        if !ok {
            return Err(FusionError::Precondition(
                "an anchored element is not covered at the anchor height".to_string(),
            ));
        }
    }
    let covered = |x: &ZElement| {
        j.iter()
            .any(|t| t.height() >= beta && t.covers_element(x))
    };
    let mut system: Vec<(TNode, SymAutomorphism)> = Vec::new();
    'targets: for x in b {
        if covered(x) {
            continue;
        }
        'candidates: for t in j {
            if t.height() < beta {
                continue;
            }
            // Positions at or above the candidate height where x misses t.
            let mut diffs: Vec<(Ordinal, i64)> = Vec::new();
            for (p, v) in t.support() {
                let d = x.get(&Position::Ord(p.clone())) - v;
                if d != 0 {
                    diffs.push((p.clone(), d));
                }
            }
            for (pos, v) in x.support() {
                let Position::Ord(o) = pos else {
                    return Err(FusionError::ElementOutsideIndex);
                };
                if o >= t.height() && t.value_at(o) == 0 {
                    diffs.push((o.clone(), *v));
                }
            }
            if diffs.is_empty() || diffs.len() > 2 {
                continue;
            }
            let n = diffs[0].1;
            if n == 0 || n.abs() > bound || diffs.iter().any(|(_, d)| *d != n) {
                continue;
            }
            let x_node = TNode::from_element(x, Ordinal::zero())?;
            let scope = x_node.meet(t);
            if diffs.iter().any(|(p, _)| p >= scope.height()) {
                continue;
            }
            for anchored in a {
                if scope.covers_element(anchored) {
                    continue 'candidates;
                }
            }
            let mv = ConditionalShift {
                agreement: None,
                targets: diffs.iter().map(|(p, _)| Position::Ord(p.clone())).collect(),
                amount: -n,
                scope: None,
            };
            // Merge into the system, keeping scopes pairwise incomparable.
            for (existing, local) in &mut system {
                if *existing == scope {
                    if !local.moves.contains(&mv) {
                        local.moves.push(mv.clone());
                    }
                    continue 'targets;
                }
                if existing.comparable(&scope) {
                    continue 'candidates;
                }
            }
            system.push((
                scope,
                SymAutomorphism {
                    moves: vec![mv],
                },
            ));
            continue 'targets;
        }
        return Err(FusionError::StarNotFound);
    }
    let phi = glue_system(&system)?;
    for x in a {
        if phi.apply(x) != *x {
            return Err(FusionError::StarNotFound);
        }
    }
    for x in b {
        if !covered(&phi.apply(x)) {
            return Err(FusionError::StarNotFound);
        }
    }
    Ok(phi)
}
