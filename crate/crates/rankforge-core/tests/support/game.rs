//! Minimax reference for truncated open games, deliberately structured
//! unlike the library: decidedness via path quantifiers, winner via plain
//! game quantifiers, rank via iterative deepening on a budgeted unfolding.

use rand::Rng;
use rankforge_core::gamerank::OpenGame;

pub struct RawGame {
    pub k: u32,
    pub d: u32,
    pub wins: Vec<Vec<u32>>,
}

impl RawGame {
    fn hits_win(&self, pos: &[u32]) -> bool {
        self.wins.iter().any(|w| pos.len() >= w.len() && &pos[..w.len()] == w.as_slice())
    }

    /// Some full-length path through `pos` avoids every win.
    pub fn can_avoid(&self, pos: &mut Vec<u32>) -> bool {
        if self.hits_win(pos) {
            return false;
        }
        if pos.len() >= self.d as usize {
            return true;
        }
        (0..self.k).any(|m| {
            pos.push(m);
            let r = self.can_avoid(pos);
            pos.pop();
            r
        })
    }

    /// The first player can force a win from `pos` (existential at even
    /// depths, universal at odd).
    pub fn first_wins(&self, pos: &mut Vec<u32>) -> bool {
        if self.hits_win(pos) {
            return true;
        }
        if pos.len() >= self.d as usize {
            return false;
        }
        if pos.len().is_multiple_of(2) {
            (0..self.k).any(|m| {
                pos.push(m);
                let r = self.first_wins(pos);
                pos.pop();
                r
            })
        } else {
            (0..self.k).all(|m| {
                pos.push(m);
                let r = self.first_wins(pos);
                pos.pop();
                r
            })
        }
    }

    fn rank_le(&self, pos: &mut Vec<u32>, budget: u32) -> bool {
        if !self.can_avoid(pos) {
            return true;
        }
        if pos.len() >= self.d as usize || budget == 0 {
            return false;
        }
        (0..self.k).any(|a| {
            pos.push(a);
            let r = (0..self.k).all(|b| {
                pos.push(b);
                let r = self.rank_le(pos, budget - 1);
                pos.pop();
                r
            });
            pos.pop();
            r
        })
    }

    /// Iterative-deepening rank of an even-length position; `None` when the
    /// second player escapes.
    pub fn rank(&self, pos: &[u32]) -> Option<u32> {
        let mut pos = pos.to_vec();
        (0..=(self.d / 2)).find(|&n| self.rank_le(&mut pos, n))
    }

    pub fn to_open(&self) -> OpenGame {
        OpenGame::new(self.k, self.d, self.wins.iter().cloned().collect()).unwrap()
    }
}

/// Random game: alphabet in `1..=max_k`, even horizon in `2..=max_d`, and a
/// small batch of random even-length wins (occasionally dense).
pub fn rand_game<R: Rng>(rng: &mut R, max_k: u32, max_d: u32) -> RawGame {
    let k = rng.gen_range(1..=max_k);
    let d = 2 * rng.gen_range(1..=max_d / 2);
    let count = if rng.gen_ratio(1, 6) {
        rng.gen_range(6..=14)
    } else {
        rng.gen_range(0..=5)
    };
    let wins = (0..count)
        .map(|_| {
            let len = 2 * rng.gen_range(1..=d / 2);
            (0..len).map(|_| rng.gen_range(0..k)).collect()
        })
        .collect();
    RawGame { k, d, wins }
}
