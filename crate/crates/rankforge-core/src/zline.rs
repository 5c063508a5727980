//! The back-lexicographic group order on finitely supported integer
//! sequences over a linear index order.
//!
//! Elements are functions from the index order into Z with finite support,
//! compared at the greatest position where they differ. The module carries
//! the order itself, the quantifier-free type data of finite tuples, a
//! synthesizer producing an order automorphism sending one tuple to another
//! whenever their quantifier-free types agree, and the rank calculators
//! (Hausdorff-style agreement relations and the two-step upper bound for
//! the definability rank of a pair).

use crate::fusion::TNode;
use crate::ordinal::Ordinal;
use serde::{Deserialize, Deserializer, Serialize};
use std::cmp::Ordering;

/// Index orders: a well order given as an ordinal bound (positions are the
/// ordinals below it), the negative integers with their usual order, and
/// binary concatenation (everything on the left below everything on the
/// right).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "snake_case")]
pub enum IndexOrder {
    Well { bound: Ordinal },
    OmegaStar,
    Sum {
        left: Box<IndexOrder>,
        right: Box<IndexOrder>,
    },
}

/// A position inside an [`IndexOrder`]. Which variants are meaningful
/// depends on the ambient order; `contains` checks membership.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "t", content = "v", rename_all = "snake_case")]
pub enum Position {
    Ord(Ordinal),
    Neg(i64),
    #[serde(rename = "l")]
    Left(Box<Position>),
    #[serde(rename = "r")]
    Right(Box<Position>),
}

impl Position {
    fn tag_rank(&self) -> u8 {
        match self {
            Position::Ord(_) => 0,
            Position::Neg(_) => 1,
            Position::Left(_) => 2,
            Position::Right(_) => 3,
        }
    }
}

impl PartialOrd for Position {
    fn partial_cmp(&self, other: &Position) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Position {
    // Total on all of Position so supports can always be sorted; only
    // comparisons between positions of one ambient order are meaningful.
    fn cmp(&self, other: &Position) -> Ordering {
        match (self, other) {
            (Position::Ord(a), Position::Ord(b)) => a.compare(b),
            (Position::Neg(a), Position::Neg(b)) => a.cmp(b),
            (Position::Left(a), Position::Left(b)) => a.cmp(b),
            (Position::Right(a), Position::Right(b)) => a.cmp(b),
            _ => self.tag_rank().cmp(&other.tag_rank()),
        }
    }
}

impl IndexOrder {
    pub fn contains(&self, p: &Position) -> bool {
        match (self, p) {
            (IndexOrder::Well { bound }, Position::Ord(o)) => o < bound,
            (IndexOrder::OmegaStar, Position::Neg(k)) => *k <= 0,
            (IndexOrder::Sum { left, .. }, Position::Left(q)) => left.contains(q),
            (IndexOrder::Sum { right, .. }, Position::Right(q)) => right.contains(q),
            _ => false,
        }
    }

    /// Some position of the order, if it is nonempty.
    pub fn any_position(&self) -> Option<Position> {
        match self {
            IndexOrder::Well { bound } => {
                (!bound.is_zero()).then(|| Position::Ord(Ordinal::zero()))
            }
            IndexOrder::OmegaStar => Some(Position::Neg(0)),
            IndexOrder::Sum { left, right } => left
                .any_position()
                .map(|p| Position::Left(Box::new(p)))
                .or_else(|| right.any_position().map(|p| Position::Right(Box::new(p)))),
        }
    }

    /// A position strictly below `p`, if the order has one.
    pub fn position_below(&self, p: &Position) -> Option<Position> {
        match (self, p) {
            (IndexOrder::Well { .. }, Position::Ord(o)) => {
                (!o.is_zero()).then(|| Position::Ord(Ordinal::zero()))
            }
            (IndexOrder::OmegaStar, Position::Neg(k)) => Some(Position::Neg(k - 1)),
            (IndexOrder::Sum { left, .. }, Position::Left(q)) => left
                .position_below(q)
                .map(|x| Position::Left(Box::new(x))),
            (IndexOrder::Sum { left, right }, Position::Right(q)) => right
                .position_below(q)
                .map(|x| Position::Right(Box::new(x)))
                .or_else(|| left.any_position().map(|x| Position::Left(Box::new(x)))),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZlineError {
    #[error("element uses a position outside the ambient order")]
    PositionOutsideAmbient,
    #[error("elements are equal")]
    EqualElements,
    #[error("tuples have different quantifier-free types")]
    QfMismatch,
    #[error("the operation requires a well-ordered ambient")]
    NotWellOrdered,
    #[error("left element must come strictly first in the back-lexicographic order")]
    NotStrictlyLess,
    #[error("ambient order has a minimum here")]
    NoRoomBelow,
}

/// A finitely supported integer sequence. The support is kept sorted by
/// position with nonzero values only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZElement {
    support: Vec<(Position, i64)>,
}

impl ZElement {
    /// Normalizing constructor: sorts, merges duplicate positions, drops
    /// zeros.
    pub fn new(pairs: Vec<(Position, i64)>) -> ZElement {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut support: Vec<(Position, i64)> = Vec::new();
        for (p, v) in pairs {
            match support.last_mut() {
                Some((q, acc)) if *q == p => *acc += v,
                _ => support.push((p, v)),
            }
        }
        support.retain(|(_, v)| *v != 0);
        ZElement { support }
    }

    pub fn zero() -> ZElement {
        ZElement { support: Vec::new() }
    }

    pub fn support(&self) -> &[(Position, i64)] {
        &self.support
    }

    pub fn get(&self, p: &Position) -> i64 {
        self.support
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.support[i].1)
            .unwrap_or(0)
    }

    /// The element with `delta` added at position `p`.
    pub fn with_delta(&self, p: &Position, delta: i64) -> ZElement {
        let mut pairs = self.support.clone();
        pairs.push((p.clone(), delta));
        ZElement::new(pairs)
    }

    pub fn validate_in(&self, ambient: &IndexOrder) -> Result<(), ZlineError> {
        if self.support.iter().all(|(p, _)| ambient.contains(p)) {
            Ok(())
        } else {
            Err(ZlineError::PositionOutsideAmbient)
        }
    }
}

impl Serialize for ZElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.support.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ZElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ZElement, D::Error> {
        Ok(ZElement::new(Vec::<(Position, i64)>::deserialize(
            deserializer,
        )?))
    }
}

// Scans two supports from the top; the first position where the values
// differ decides everything below.
fn greatest_difference<'a>(a: &'a ZElement, b: &'a ZElement) -> Option<(&'a Position, i64, i64)> {
    let (mut i, mut j) = (a.support.len(), b.support.len());
    loop {
        match (i, j) {
            (0, 0) => return None,
            (_, 0) => return Some((&a.support[i - 1].0, a.support[i - 1].1, 0)),
            (0, _) => return Some((&b.support[j - 1].0, 0, b.support[j - 1].1)),
            _ => {}
        }
        let (pa, va) = &a.support[i - 1];
        let (pb, vb) = &b.support[j - 1];
        match pa.cmp(pb) {
            Ordering::Greater => return Some((pa, *va, 0)),
            Ordering::Less => return Some((pb, 0, *vb)),
            Ordering::Equal => {
                if va != vb {
                    return Some((pa, *va, *vb));
                }
                i -= 1;
                j -= 1;
            }
        }
    }
}

/// Back-lexicographic comparison: the sign of `a - b` at the greatest
/// position where the two differ.
pub fn compare_backlex(
    ambient: &IndexOrder,
    a: &ZElement,
    b: &ZElement,
) -> Result<Ordering, ZlineError> {
    a.validate_in(ambient)?;
    b.validate_in(ambient)?;
    Ok(backlex_cmp(a, b))
}

pub(crate) fn backlex_cmp(a: &ZElement, b: &ZElement) -> Ordering {
    match greatest_difference(a, b) {
        None => Ordering::Equal,
        Some((_, va, vb)) => va.cmp(&vb),
    }
}

/// The atomic order witness for a distinct pair: the greatest position
/// where the two differ, with the gap `b - a` there.
pub fn e_rel(
    ambient: &IndexOrder,
    a: &ZElement,
    b: &ZElement,
) -> Result<(Position, i64), ZlineError> {
    a.validate_in(ambient)?;
    b.validate_in(ambient)?;
    match greatest_difference(a, b) {
        None => Err(ZlineError::EqualElements),
        Some((p, va, vb)) => Ok((p.clone(), vb - va)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    Lt,
    Eq,
    Gt,
}

impl From<Ordering> for Rel {
    fn from(o: Ordering) -> Rel {
        match o {
            Ordering::Less => Rel::Lt,
            Ordering::Equal => Rel::Eq,
            Ordering::Greater => Rel::Gt,
        }
    }
}

/// Order relation and atomic witness for one ordered pair of a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFact {
    pub i: usize,
    pub j: usize,
    pub rel: Rel,
    /// Greatest differing position and the gap there; absent for equal
    /// entries.
    pub witness: Option<(Position, i64)>,
}

/// The quantifier-free type of a tuple: one [`PairFact`] per ordered pair
/// `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QfType {
    pub len: usize,
    pub pairs: Vec<PairFact>,
}

pub fn qf_type(ambient: &IndexOrder, tuple: &[ZElement]) -> Result<QfType, ZlineError> {
    for x in tuple {
        x.validate_in(ambient)?;
    }
    let mut pairs = Vec::new();
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            let witness = greatest_difference(&tuple[i], &tuple[j])
                .map(|(p, va, vb)| (p.clone(), vb - va));
            pairs.push(PairFact {
                i,
                j,
                rel: backlex_cmp(&tuple[i], &tuple[j]).into(),
                witness,
            });
        }
    }
    Ok(QfType {
        len: tuple.len(),
        pairs,
    })
}

/// Whether two tuples of the same length realize the same quantifier-free
/// type.
pub fn qf_equal(
    ambient: &IndexOrder,
    a: &[ZElement],
    b: &[ZElement],
) -> Result<bool, ZlineError> {
    Ok(a.len() == b.len() && qf_type(ambient, a)? == qf_type(ambient, b)?)
}

/// One conditional move: adds `amount` at each target position, to exactly
/// those elements that (a) agree with the anchor everywhere strictly above
/// the threshold, when an agreement guard is present, and (b) extend the
/// scope truncation, when a scope is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalShift {
    pub agreement: Option<(ZElement, Position)>,
    pub targets: Vec<Position>,
    pub amount: i64,
    pub scope: Option<TNode>,
}

impl ConditionalShift {
    pub fn applies_to(&self, x: &ZElement) -> bool {
        if let Some((anchor, threshold)) = &self.agreement {
            if let Some((p, _, _)) = greatest_difference(x, anchor) {
                if p > threshold {
                    return false;
                }
            }
        }
        if let Some(scope) = &self.scope {
            if !scope.covers_element(x) {
                return false;
            }
        }
        true
    }

    pub fn apply(&self, x: &ZElement) -> ZElement {
        if !self.applies_to(x) {
            return x.clone();
        }
        let mut moved = x.clone();
        for t in &self.targets {
            moved = moved.with_delta(t, self.amount);
        }
        moved
    }

    pub fn inverse(&self) -> ConditionalShift {
        ConditionalShift {
            amount: -self.amount,
            ..self.clone()
        }
    }
}

/// A finite composition of conditional shifts, applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymAutomorphism {
    pub moves: Vec<ConditionalShift>,
}

impl SymAutomorphism {
    pub fn identity() -> SymAutomorphism {
        SymAutomorphism { moves: Vec::new() }
    }

    pub fn apply(&self, x: &ZElement) -> ZElement {
        self.moves.iter().fold(x.clone(), |y, m| m.apply(&y))
    }

    pub fn inverse(&self) -> SymAutomorphism {
        SymAutomorphism {
            moves: self.moves.iter().rev().map(ConditionalShift::inverse).collect(),
        }
    }
}

/// Builds an order automorphism fixing every context element and sending
/// `a` to `b`, provided the two extended tuples `context + [a]` and
/// `context + [b]` have the same quantifier-free type. One shift per
/// position where `a` and `b` differ, working upward from the least one.
pub fn synth_automorphism(
    ambient: &IndexOrder,
    context: &[ZElement],
    a: &ZElement,
    b: &ZElement,
) -> Result<SymAutomorphism, ZlineError> {
    let mut with_a = context.to_vec();
    with_a.push(a.clone());
    let mut with_b = context.to_vec();
    with_b.push(b.clone());
    if !qf_equal(ambient, &with_a, &with_b)? {
        return Err(ZlineError::QfMismatch);
    }
    let mut moves = Vec::new();
    let mut cur = a.clone();
    while cur != *b {
        // Least position where the current image still misses b.
        let (target, gap) = {
            let mut best: Option<(&Position, i64)> = None;
            for (p, v) in cur.support() {
                if b.get(p) != *v {
                    best = Some((p, b.get(p) - v));
                    break;
                }
            }
            for (p, v) in b.support() {
                if cur.get(p) != *v {
                    let cand = (p, v - cur.get(p));
                    best = match best {
                        Some((q, _)) if q <= p => best,
                        _ => Some(cand),
                    };
                    break;
                }
            }
            let (p, gap) = best.expect("cur != b yields a difference");
            (p.clone(), gap)
        };
        let mv = ConditionalShift {
            agreement: Some((cur.clone(), target.clone())),
            targets: vec![target.clone()],
            amount: gap,
            scope: None,
        };
        cur = mv.apply(&cur);
        moves.push(mv);
    }
    Ok(SymAutomorphism { moves })
}

/// Agreement from `beta` on up: the defining relation of the Hausdorff
/// analysis on a well-ordered ambient.
pub fn h_rel(
    ambient: &IndexOrder,
    a: &ZElement,
    b: &ZElement,
    beta: &Ordinal,
) -> Result<bool, ZlineError> {
    let IndexOrder::Well { .. } = ambient else {
        return Err(ZlineError::NotWellOrdered);
    };
    a.validate_in(ambient)?;
    b.validate_in(ambient)?;
    let agree = |x: &ZElement, y: &ZElement| {
        x.support().iter().all(|(p, v)| match p {
            Position::Ord(o) if o >= beta => y.get(p) == *v,
            _ => true,
        })
    };
    Ok(agree(a, b) && agree(b, a))
}

/// The closure ordinal of the agreement filtration: for the well order with
/// ordinal bound `alpha` it is exactly `alpha`.
pub fn hausdorff_rank(ambient: &IndexOrder) -> Result<Ordinal, ZlineError> {
    match ambient {
        IndexOrder::Well { bound } => Ok(bound.clone()),
        _ => Err(ZlineError::NotWellOrdered),
    }
}

/// Upper bound for the definability rank of the pair: 0 for equal elements,
/// otherwise read off the greatest differing position `p` — `p` itself when
/// finite, `p + 1` from `w` on up.
pub fn drk_upper(
    ambient: &IndexOrder,
    a: &ZElement,
    b: &ZElement,
) -> Result<Ordinal, ZlineError> {
    let IndexOrder::Well { .. } = ambient else {
        return Err(ZlineError::NotWellOrdered);
    };
    a.validate_in(ambient)?;
    b.validate_in(ambient)?;
    match greatest_difference(a, b) {
        None => Ok(Ordinal::zero()),
        Some((Position::Ord(o), _, _)) => {
            if o.as_nat().is_some() {
                Ok(o.clone())
            } else {
                Ok(o.successor())
            }
        }
        Some(_) => Err(ZlineError::PositionOutsideAmbient),
    }
}

/// A witness that the order is dense at `(a, b)`: an element strictly
/// between them, built by bumping `a` at a position below both supports.
/// Fails with [`ZlineError::NoRoomBelow`] when the ambient order has a
/// minimum below the supports, and such ambients do have endpoints of
/// intervals with nothing in between.
pub fn density_witness(
    ambient: &IndexOrder,
    a: &ZElement,
    b: &ZElement,
) -> Result<ZElement, ZlineError> {
    a.validate_in(ambient)?;
    b.validate_in(ambient)?;
    if backlex_cmp(a, b) != Ordering::Less {
        return Err(ZlineError::NotStrictlyLess);
    }
    let least = a
        .support()
        .iter()
        .chain(b.support().iter())
        .map(|(p, _)| p)
        .min()
        .expect("distinct elements have support");
    let below = ambient
        .position_below(least)
        .ok_or(ZlineError::NoRoomBelow)?;
    Ok(a.with_delta(&below, 1))
}
