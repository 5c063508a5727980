//! Open two-player games of perfect information truncated to a finite
//! horizon. The first player wins a run when some even-length prefix enters
//! the win set; everything else is a win for the second player. The module
//! computes the ordinal game rank by backward induction, extracts winning
//! strategies, builds the rank-comparison games between two games, encodes
//! the neighborhood-basis game of a finite group, and computes the
//! Cantor-Bendixson rank of a finite tree.
//!
//! Positions are move sequences; the first player moves at even indices. A
//! position is *decided* when every continuation of it eventually extends a
//! win, i.e. the cylinder above it lies inside the payoff set.

use crate::oracle::{FiniteGroup, OracleError};
use crate::ordinal::Ordinal;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("horizon must be a positive even number")]
    BadHorizon,
    #[error("win entries must be even-length sequences over the alphabet, within the horizon")]
    BadWin,
    #[error("move outside the alphabet")]
    MoveOutOfRange,
    #[error("the first player moves at even-length positions")]
    OddPosition,
    #[error("position exceeds the horizon")]
    PositionTooLong,
    #[error("the second player wins this game; no first-player strategy exists")]
    SecondPlayerWins,
    #[error("V must be closed under inverses")]
    NotSymmetric,
    #[error("V must contain the identity")]
    MissingIdentity,
    #[error("the symmetric-subset basis is too large to materialize")]
    BasisTooLarge,
    #[error(transparent)]
    Group(#[from] OracleError),
}

/// A truncated open game: `alphabet` moves per turn, runs of even length
/// `horizon`, and a set of even-length winning prefixes for the first player.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawGame", try_from = "RawGame")]
pub struct OpenGame {
    alphabet: u32,
    horizon: u32,
    wins: BTreeSet<Vec<u32>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawGame {
    alphabet: u32,
    horizon: u32,
    wins: Vec<Vec<u32>>,
}

impl From<OpenGame> for RawGame {
    fn from(g: OpenGame) -> RawGame {
        RawGame { alphabet: g.alphabet, horizon: g.horizon, wins: g.wins.into_iter().collect() }
    }
}

impl TryFrom<RawGame> for OpenGame {
    type Error = GameError;
    fn try_from(raw: RawGame) -> Result<OpenGame, GameError> {
        OpenGame::new(raw.alphabet, raw.horizon, raw.wins.into_iter().collect())
    }
}

/// Rank of a position: the number of rounds the first player may need before
/// the play is decided, or infinite when the second player can escape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GameRank {
    Finite(u32),
    Infinite,
}

impl fmt::Display for GameRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameRank::Finite(n) => write!(f, "{n}"),
            GameRank::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for GameRank {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GameRank::Finite(n) => s.serialize_u32(*n),
            GameRank::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for GameRank {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<GameRank, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = GameRank;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a natural number or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<GameRank, E> {
                u32::try_from(v)
                    .map(GameRank::Finite)
                    .map_err(|_| E::custom("rank out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<GameRank, E> {
                if v == "inf" {
                    Ok(GameRank::Infinite)
                } else {
                    Err(E::custom("expected \"inf\""))
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    #[serde(rename = "I")]
    First,
    #[serde(rename = "II")]
    Second,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winner::First => write!(f, "I"),
            Winner::Second => write!(f, "II"),
        }
    }
}

/// A positional first-player strategy on the even positions it can reach,
/// sorted by position. Serializes as a list of `[position, move]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Strategy {
    moves: Vec<(Vec<u32>, u32)>,
}

impl Strategy {
    pub fn moves(&self) -> &[(Vec<u32>, u32)] {
        &self.moves
    }

    pub fn get(&self, pos: &[u32]) -> Option<u32> {
        self.moves
            .binary_search_by(|(p, _)| p.as_slice().cmp(pos))
            .ok()
            .map(|i| self.moves[i].1)
    }
}

impl OpenGame {
    pub fn new(
        alphabet: u32,
        horizon: u32,
        wins: BTreeSet<Vec<u32>>,
    ) -> Result<OpenGame, GameError> {
        if alphabet == 0 {
            return Err(GameError::EmptyAlphabet);
        }
        if horizon == 0 || !horizon.is_multiple_of(2) {
            return Err(GameError::BadHorizon);
        }
        for w in &wins {
            if w.len() % 2 != 0
                || w.len() > horizon as usize
                || w.iter().any(|&m| m >= alphabet)
            {
                return Err(GameError::BadWin);
            }
        }
        Ok(OpenGame { alphabet, horizon, wins })
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn wins(&self) -> &BTreeSet<Vec<u32>> {
        &self.wins
    }

    fn extends_win(&self, pos: &[u32]) -> bool {
        (0..=pos.len()).step_by(2).any(|l| self.wins.contains(&pos[..l]))
    }

    fn decided_raw(&self, pos: &[u32]) -> bool {
        if self.extends_win(pos) {
            return true;
        }
        if pos.len() >= self.horizon as usize {
            return false;
        }
        let mut next = pos.to_vec();
        (0..self.alphabet).all(|m| {
            next.push(m);
            let d = self.decided_raw(&next);
            next.pop();
            d
        })
    }

    /// Whether the cylinder above `pos` lies inside the first player's payoff
    /// set: every continuation extends a win. `pos` may have any length.
    pub fn decided(&self, pos: &[u32]) -> Result<bool, GameError> {
        if pos.iter().any(|&m| m >= self.alphabet) {
            return Err(GameError::MoveOutOfRange);
        }
        Ok(self.decided_raw(pos))
    }

    fn grk_raw(&self, pos: &[u32]) -> GameRank {
        if self.decided_raw(pos) {
            return GameRank::Finite(0);
        }
        if pos.len() >= self.horizon as usize {
            return GameRank::Infinite;
        }
        let mut next = pos.to_vec();
        let mut best = GameRank::Infinite;
        for a in 0..self.alphabet {
            next.push(a);
            let mut worst = GameRank::Finite(0);
            for b in 0..self.alphabet {
                next.push(b);
                worst = worst.max(self.grk_raw(&next));
                next.pop();
                if worst == GameRank::Infinite {
                    break;
                }
            }
            next.pop();
            best = best.min(worst);
        }
        match best {
            GameRank::Finite(n) => GameRank::Finite(n + 1),
            GameRank::Infinite => GameRank::Infinite,
        }
    }

    /// Game rank of an even-length position: 0 when decided, otherwise
    /// `1 + min` over first-player moves of the `max` over replies, with the
    /// infinite rank absorbing.
    pub fn grk(&self, pos: &[u32]) -> Result<GameRank, GameError> {
        if pos.iter().any(|&m| m >= self.alphabet) {
            return Err(GameError::MoveOutOfRange);
        }
        if !pos.len().is_multiple_of(2) {
            return Err(GameError::OddPosition);
        }
        if pos.len() > self.horizon as usize {
            return Err(GameError::PositionTooLong);
        }
        Ok(self.grk_raw(pos))
    }

    /// The first player wins iff the root has finite rank.
    pub fn winner(&self) -> Winner {
        match self.grk_raw(&[]) {
            GameRank::Finite(_) => Winner::First,
            GameRank::Infinite => Winner::Second,
        }
    }

    /// A winning first-player strategy: at every reachable undecided even
    /// position, the smallest move whose worst reply minimizes the rank.
    /// Following it, the rank drops by one per round, so play is decided
    /// within the horizon.
    pub fn extract_strategy(&self) -> Result<Strategy, GameError> {
        if self.winner() == Winner::Second {
            return Err(GameError::SecondPlayerWins);
        }
        let mut moves = Vec::new();
        let mut queue: Vec<Vec<u32>> = vec![Vec::new()];
        while let Some(pos) = queue.pop() {
            if self.decided_raw(&pos) {
                continue;
            }
            let mut best: Option<(GameRank, u32)> = None;
            for a in 0..self.alphabet {
                let mut next = pos.clone();
                next.push(a);
                let mut worst = GameRank::Finite(0);
                for b in 0..self.alphabet {
                    next.push(b);
                    worst = worst.max(self.grk_raw(&next));
                    next.pop();
                }
                if best.is_none_or(|(w, _)| worst < w) {
                    best = Some((worst, a));
                }
            }
            let (worst, a) = best.expect("nonempty alphabet");
            assert!(worst != GameRank::Infinite, "a won game has a rank-decreasing move");
            moves.push((pos.clone(), a));
            for b in 0..self.alphabet {
                let mut next = pos.clone();
                next.push(a);
                next.push(b);
                queue.push(next);
            }
        }
        moves.sort();
        Ok(Strategy { moves })
    }
}

/// Shared construction of the rank-comparison games. A move in the product
/// game encodes a pair `(a, b)` as `a * k_b + b`; the first coordinates replay
/// game `a_game`, the second coordinates — shifted one round, the very first
/// being a throwaway — replay game `b_game`. A full run is scored by
/// comparing the stages `g` and `f` at which the two replays first become
/// decided: the lax game pays the first player when `g ≤ f` (vacuously when
/// `f` never arrives), the strict one when `g < f` (never when `g` does not
/// arrive). The win set is the set of minimal even prefixes all of whose
/// completions score for the first player.
struct CmpCtx {
    a: OpenGame,
    b: OpenGame,
    ka: u32,
    kb: u32,
    d: usize,
    strict: bool,
}

impl CmpCtx {
    fn leaf_verdict(&self, g: Option<usize>, f: Option<usize>) -> bool {
        if self.strict {
            match (g, f) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(g), Some(f)) => g < f,
            }
        } else {
            match (g, f) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(g), Some(f)) => g <= f,
            }
        }
    }

    /// Whether the verdict is already forced for every completion of the
    /// current path. `g` can only still appear with value `> a_len`, `f` with
    /// value `> b_len`, and both may stay absent.
    fn resolved(&self, g: Option<usize>, f: Option<usize>, b_len: usize) -> Option<bool> {
        match (g, f) {
            (Some(g0), Some(f0)) => {
                Some(if self.strict { g0 < f0 } else { g0 <= f0 })
            }
            // Any future g exceeds a_len = b_len + 1 > f, and a missing g
            // loses both comparisons.
            (None, Some(_)) => Some(false),
            (Some(g0), None) => {
                if self.strict {
                    // A future f is at least b_len + 1, so g0 ≤ b_len already
                    // wins; g0 = b_len + 1 still hinges on whether f lands
                    // exactly there.
                    if g0 <= b_len {
                        Some(true)
                    } else {
                        None
                    }
                } else {
                    // g0 ≤ a_len = b_len + 1 ≤ any future f, and f = never is
                    // a win too.
                    Some(true)
                }
            }
            (None, None) => None,
        }
    }

    /// Walks the product prefix tree carrying the first-decided stages of the
    /// two replays. Returns whether the node is decided and accumulates the
    /// minimal decided even prefixes: a decided even node reports itself and
    /// discards anything deeper.
    #[allow(clippy::too_many_arguments)]
    fn scan(
        &self,
        run: &mut Vec<u32>,
        a_run: &mut Vec<u32>,
        b_run: &mut Vec<u32>,
        g: Option<usize>,
        f: Option<usize>,
        wins: &mut Vec<Vec<u32>>,
    ) -> bool {
        if let Some(verdict) = self.resolved(g, f, b_run.len()) {
            if verdict {
                if run.len().is_multiple_of(2) {
                    wins.push(run.clone());
                } else {
                    // The minimal decided even prefixes are the immediate
                    // children.
                    for m in 0..self.ka * self.kb {
                        let mut w = run.clone();
                        w.push(m);
                        wins.push(w);
                    }
                }
            }
            return verdict;
        }
        if run.len() == self.d {
            let verdict = self.leaf_verdict(g, f);
            if verdict {
                wins.push(run.clone());
            }
            return verdict;
        }
        let mark = wins.len();
        let mut all = true;
        for m in 0..self.ka * self.kb {
            run.push(m);
            a_run.push(m / self.kb);
            let g2 = g.or_else(|| self.a.decided_raw(a_run).then_some(a_run.len()));
            let (f2, grew_b) = if run.len() >= 2 {
                b_run.push(m % self.kb);
                (f.or_else(|| self.b.decided_raw(b_run).then_some(b_run.len())), true)
            } else {
                (f, false)
            };
            all &= self.scan(run, a_run, b_run, g2, f2, wins);
            if grew_b {
                b_run.pop();
            }
            a_run.pop();
            run.pop();
        }
        if all && run.len().is_multiple_of(2) {
            wins.truncate(mark);
            wins.push(run.clone());
        }
        all
    }
}

fn comparison_game(a_game: &OpenGame, b_game: &OpenGame, strict: bool) -> OpenGame {
    let (ka, kb) = (a_game.alphabet, b_game.alphabet);
    let d = (a_game.horizon.max(b_game.horizon) + 2) as usize;
    let ctx = CmpCtx { a: a_game.clone(), b: b_game.clone(), ka, kb, d, strict };
    let mut wins = Vec::new();
    let g0 = ctx.a.decided_raw(&[]).then_some(0);
    let f0 = ctx.b.decided_raw(&[]).then_some(0);
    ctx.scan(&mut Vec::new(), &mut Vec::new(), &mut Vec::new(), g0, f0, &mut wins);
    OpenGame::new(ka * kb, d as u32, wins.into_iter().collect())
        .expect("comparison games are well-formed")
}

/// The game the first player wins exactly when `grk(a) ≤ grk(b)`.
pub fn le_game(a: &OpenGame, b: &OpenGame) -> OpenGame {
    comparison_game(a, b, false)
}

/// The strict variant: first player wins exactly when `grk(a) < grk(b)`.
pub fn lt_game(a: &OpenGame, b: &OpenGame) -> OpenGame {
    comparison_game(a, b, true)
}

/// The neighborhood-basis game of a finite group with target set `v`
/// (a symmetric, identity-containing subset mask). Moves index the basis of
/// all symmetric identity-containing subsets; the first player proposes `U`,
/// the second must reply with a conjugate `gUg⁻¹` — any other reply loses on
/// the spot — and the reply wins for the first player when it lands inside
/// `v`. One round decides everything on a finite discrete group, so the
/// horizon is 2. Returns the game together with the basis, so that moves can
/// be decoded back into subsets.
pub fn cli_game(group: &FiniteGroup, v: u64) -> Result<(OpenGame, Vec<u64>), GameError> {
    if group.order() > 16 {
        return Err(GameError::BasisTooLarge);
    }
    let full = group.full_mask();
    if v & !full != 0 {
        return Err(GameError::Group(OracleError::SubsetOutOfRange));
    }
    if v & 1 == 0 {
        return Err(GameError::MissingIdentity);
    }
    if group.inv_mask(v) != v {
        return Err(GameError::NotSymmetric);
    }
    let basis: Vec<u64> =
        (0..=full).filter(|&m| m & 1 == 1 && group.inv_mask(m) == m).collect();
    if basis.len() > 512 {
        return Err(GameError::BasisTooLarge);
    }
    let mut wins = BTreeSet::new();
    for (ui, &u) in basis.iter().enumerate() {
        let legal: BTreeSet<u64> = (0..group.order()).map(|g| group.conj_mask(g, u)).collect();
        for (wi, &w) in basis.iter().enumerate() {
            if !legal.contains(&w) || w & !v == 0 {
                wins.insert(vec![ui as u32, wi as u32]);
            }
        }
    }
    let game = OpenGame::new(basis.len() as u32, 2, wins)?;
    Ok((game, basis))
}

/// A finite rooted tree as nested child lists; a leaf is `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteTree(pub Vec<FiniteTree>);

fn node_rank(t: &FiniteTree) -> u64 {
    t.0.iter().map(|c| 1 + node_rank(c)).max().unwrap_or(0)
}

/// Cantor-Bendixson rank of a finite tree: leaves have node rank 0, an inner
/// node exceeds all of its descendants by one, and the tree rank is the root
/// rank plus one (ranks of a finite tree are reached, not approached).
pub fn cb_rank(t: &FiniteTree) -> Ordinal {
    Ordinal::from_nat(node_rank(t) + 1)
}
