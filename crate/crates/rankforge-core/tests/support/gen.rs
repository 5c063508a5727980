//! Seeded random generators shared by the property suites.

use rand::Rng;
use rankforge_core::fusion::{FPair, TNode};
use rankforge_core::{ConditionalShift, Ordinal, Position, SymAutomorphism, ZElement};

/// Random ordinal with nesting depth `level`: level 0 draws a natural number
/// at most 2, level k builds up to three CNF terms whose exponents are
/// level k-1 ordinals. Level 2 stays below `w^(w^3)`.
pub fn rand_ordinal<R: Rng>(rng: &mut R, level: u32) -> Ordinal {
    if level == 0 {
        return Ordinal::from_nat(rng.gen_range(0..=2));
    }
    let mut exps: Vec<Ordinal> = (0..rng.gen_range(0..=3))
        .map(|_| rand_ordinal(rng, level - 1))
        .collect();
    exps.sort();
    exps.dedup();
    exps.reverse();
    let terms = exps
        .into_iter()
        .map(|e| (e, rng.gen_range(1..=3)))
        .collect();
    Ordinal::from_terms(terms).unwrap()
}

/// The positions `w*a + b` for `a < rows`, `b < cols`: a grid of ordinal
/// positions below `w^2`.
pub fn grid_pool(rows: u64, cols: u64) -> Vec<Position> {
    let w = Ordinal::omega();
    let mut pool = Vec::new();
    for a in 0..rows {
        for b in 0..cols {
            let o = w.mul(&Ordinal::from_nat(a)).add(&Ordinal::from_nat(b));
            pool.push(Position::Ord(o));
        }
    }
    pool
}

/// The positions `0, -1, ..., -(n-1)` of the negative half-line.
pub fn omega_star_pool(n: i64) -> Vec<Position> {
    (0..n).map(|k| Position::Neg(-k)).collect()
}

/// Random element with support drawn from `pool` (up to `max_support`
/// entries, values in `[-max_abs, max_abs]` without 0).
pub fn rand_zelement<R: Rng>(
    rng: &mut R,
    pool: &[Position],
    max_support: usize,
    max_abs: i64,
) -> ZElement {
    let k = rng.gen_range(0..=max_support.min(pool.len()));
    let mut pairs = Vec::new();
    for _ in 0..k {
        let p = pool[rng.gen_range(0..pool.len())].clone();
        let mut v = 0;
        while v == 0 {
            v = rng.gen_range(-max_abs..=max_abs);
        }
        pairs.push((p, v));
    }
    ZElement::new(pairs)
}

/// Random single-coordinate shift in automorphism shape: the target is the
/// agreement threshold itself, so order comparisons through it are
/// untouched.
pub fn rand_psi_shift<R: Rng>(rng: &mut R, pool: &[Position], max_abs: i64) -> ConditionalShift {
    let anchor = rand_zelement(rng, pool, 3, max_abs);
    let threshold = pool[rng.gen_range(0..pool.len())].clone();
    let mut amount = 0;
    while amount == 0 {
        amount = rng.gen_range(-max_abs..=max_abs);
    }
    ConditionalShift {
        agreement: Some((anchor, threshold.clone())),
        targets: vec![threshold],
        amount,
        scope: None,
    }
}

/// Composition of up to `max_moves` random single-coordinate shifts.
pub fn rand_psi_automorphism<R: Rng>(
    rng: &mut R,
    pool: &[Position],
    max_moves: usize,
    max_abs: i64,
) -> SymAutomorphism {
    let moves = (0..rng.gen_range(1..=max_moves))
        .map(|_| rand_psi_shift(rng, pool, max_abs))
        .collect();
    SymAutomorphism { moves }
}

fn nonzero<R: Rng>(rng: &mut R, hi: i64) -> i64 {
    let mut v = 0;
    while v == 0 {
        v = rng.gen_range(-hi..=hi);
    }
    v
}

/// A valid input bundle for the antichain-pair extension step over `mu`.
pub struct ExtensionInstance {
    pub mu: Ordinal,
    pub pair: FPair,
    pub s: TNode,
    pub r: TNode,
    pub i: usize,
    pub beta: Ordinal,
    pub c: Vec<ZElement>,
}

/// Random well-formed extension instance over `w` or `w^2`: a marker `s`
/// whose meet with the base `r` sits exactly one level above the base,
/// optionally one opposite-side node extending the base, and up to two
/// elements covered by the base. Heights are arranged so that the marker
/// clears the extension height and the natural-sum condition holds.
pub fn rand_extension_instance<R: Rng>(rng: &mut R) -> ExtensionInstance {
    let square = rng.gen_bool(0.5);
    let mu = if square { Ordinal::omega_pow(&Ordinal::from_nat(2)) } else { Ordinal::omega() };
    let fin = Ordinal::from_nat;

    let beta = if square && rng.gen_bool(0.3) {
        Ordinal::omega().add(&fin(rng.gen_range(0..=1)))
    } else {
        fin(rng.gen_range(0..=2))
    };
    let opp_height: Option<Ordinal> =
        if rng.gen_bool(0.6) { Some(fin(rng.gen_range(0..=2))) } else { None };
    let dt = opp_height.clone().unwrap_or_else(Ordinal::zero);
    let extra =
        if square && rng.gen_bool(0.3) { Ordinal::omega() } else { fin(rng.gen_range(0..=2)) };
    let rho = beta.nat_add(&dt).add(&fin(1)).add(&extra);

    let mut high_pool: Vec<Ordinal> = (0..=3u64).map(|k| rho.add(&fin(k))).collect();
    if square {
        high_pool.push(rho.add(&Ordinal::omega()));
        high_pool.push(rho.add(&Ordinal::omega()).add(&fin(1)));
    }
    let mut r_support: Vec<(Ordinal, i64)> = Vec::new();
    for _ in 0..rng.gen_range(0..=2usize) {
        let p = high_pool[rng.gen_range(0..high_pool.len())].clone();
        let v = nonzero(rng, 3);
        r_support.push((p, v));
    }
    let r = TNode::new(rho.clone(), r_support).expect("base support sits above the base height");

    // Marker height: above beta, at most rho, and low enough that its
    // natural sum with the opposite height stays at or below rho.
    let mut hs_cands =
        vec![beta.successor(), beta.successor().successor(), rho.clone()];
    hs_cands.retain(|h| *h <= rho && h.nat_add(&dt) <= rho);
    let hs = hs_cands[rng.gen_range(0..hs_cands.len())].clone();

    // The marker disagrees with the base exactly at rho and copies it above.
    let d = nonzero(rng, 2);
    let mut s_support: Vec<(Ordinal, i64)> = vec![(rho.clone(), r.value_at(&rho) + d)];
    for (p, v) in r.support() {
        if *p > rho {
            s_support.push((p.clone(), *v));
        }
    }
    let s = TNode::new(hs, s_support).expect("marker support sits above the marker height");

    let t = opp_height.map(|h| {
        let mut sup: Vec<(Ordinal, i64)> = r.support().to_vec();
        if rng.gen_bool(0.4) {
            let cands: Vec<Ordinal> =
                (0..=2u64).map(|k| h.add(&fin(k))).filter(|p| *p < rho).collect();
            if !cands.is_empty() {
                let p = cands[rng.gen_range(0..cands.len())].clone();
                let v = nonzero(rng, 3);
                sup.push((p, v));
            }
        }
        TNode::new(h, sup).expect("opposite support sits above its height")
    });

    let i = rng.gen_range(0..=1usize);
    let marked = vec![s.clone()];
    let opposite: Vec<TNode> = t.into_iter().collect();
    let pair = if i == 0 {
        FPair { f0: marked, f1: opposite }
    } else {
        FPair { f0: opposite, f1: marked }
    };

    let low_pool: Vec<Ordinal> = (0..=3u64)
        .map(fin)
        .chain(square.then(Ordinal::omega))
        .filter(|p| *p < rho)
        .collect();
    let c: Vec<ZElement> = (0..rng.gen_range(0..=2usize))
        .map(|_| {
            let mut pairs: Vec<(Position, i64)> =
                r.support().iter().map(|(p, v)| (Position::Ord(p.clone()), *v)).collect();
            for _ in 0..rng.gen_range(0..=2usize) {
                if low_pool.is_empty() {
                    break;
                }
                let p = low_pool[rng.gen_range(0..low_pool.len())].clone();
                let v = nonzero(rng, 4);
                pairs.push((Position::Ord(p), v));
            }
            ZElement::new(pairs)
        })
        .collect();

    ExtensionInstance { mu, pair, s, r, i, beta, c }
}
