//! Exhaustive brute-force engines on finite data: automorphism groups of
//! small relational structures, orbit-based definability rank, balanced and
//! weak rank over a finite discrete group, and the dynamical back-and-forth
//! relations on a finite action. Everything here quantifies literally over
//! its finite search space, so these functions serve as ground truth for the
//! symbolic modules.
//!
//! Conventions: permutations are stored as image vectors (`p[x]` is the image
//! of `x`), composition is `(f * g)(x) = f(g(x))`, and subsets of a group are
//! bitmasks over element indices with the identity always at index 0. In the
//! finite discrete topology every identity-containing subset is an open
//! neighborhood of 1 and every subset of the space is open, so topological
//! closures collapse to plain orbit images.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

/// Largest domain for which automorphism groups are enumerated (7! = 5040).
pub const MAX_DOMAIN: usize = 7;
/// Largest space on which the dynamical relations are evaluated.
pub const MAX_SPACE: usize = 6;
/// Depth guard for the quantifier towers of `squiggle` / `sim`.
pub const MAX_ALPHA: u32 = 3;
/// Default cap on generated group closures.
pub const GROUP_BOUND: usize = 64;

/// Largest group order representable as a `u64` subset mask.
const MASK_BITS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("domain size must be between 1 and {MAX_DOMAIN}")]
    DomainOutOfRange,
    #[error("relation arity must be between 1 and 3")]
    ArityOutOfRange,
    #[error("relation tuple does not fit its declared arity and domain")]
    BadTuple,
    #[error("permutation is not a bijection of the domain")]
    BadPermutation,
    #[error("element list is not closed under composition and inverse")]
    NotAGroup,
    #[error("group closure exceeds the bound of {0} elements")]
    ClosureTooLarge(usize),
    #[error("group order {0} exceeds the {MASK_BITS}-bit subset mask")]
    MaskOverflow(usize),
    #[error("space size must be between 1 and {MAX_SPACE}")]
    SpaceOutOfRange,
    #[error("action axioms fail: {0}")]
    BadAction(String),
    #[error("subset must contain the identity")]
    MissingIdentity,
    #[error("subset mask uses bits beyond the group order")]
    SubsetOutOfRange,
    #[error("point outside the space")]
    PointOutOfRange,
    #[error("tuple entry outside the domain")]
    EntryOutOfRange,
    #[error("rank parameter exceeds the exhaustive-search bound of {MAX_ALPHA}")]
    AlphaOutOfRange,
}

/// A permutation of `{0, …, n-1}` as its image vector.
pub type Perm = Vec<usize>;

fn is_perm(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn compose(f: &[usize], g: &[usize]) -> Perm {
    g.iter().map(|&x| f[x]).collect()
}

fn invert(p: &[usize]) -> Perm {
    let mut q = vec![0; p.len()];
    for (x, &y) in p.iter().enumerate() {
        q[y] = x;
    }
    q
}

/// A finite permutation group: the sorted element list (the identity sorts
/// first), an index lookup, and a precomputed inverse table. Products are
/// composed on demand so that large automorphism groups stay cheap to hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawGroup", try_from = "RawGroup")]
pub struct FiniteGroup {
    degree: usize,
    elems: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inv: Vec<usize>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawGroup {
    degree: usize,
    elements: Vec<Perm>,
}

impl From<FiniteGroup> for RawGroup {
    fn from(g: FiniteGroup) -> RawGroup {
        RawGroup { degree: g.degree, elements: g.elems }
    }
}

impl TryFrom<RawGroup> for FiniteGroup {
    type Error = OracleError;
    fn try_from(raw: RawGroup) -> Result<FiniteGroup, OracleError> {
        FiniteGroup::from_elements(raw.degree, raw.elements)
    }
}

impl FiniteGroup {
    /// Closes the generators under composition. The identity is always
    /// included; the closure must stay within `bound` elements.
    pub fn from_generators(
        degree: usize,
        gens: &[Perm],
        bound: usize,
    ) -> Result<FiniteGroup, OracleError> {
        if degree == 0 {
            return Err(OracleError::BadPermutation);
        }
        for g in gens {
            if !is_perm(g, degree) {
                return Err(OracleError::BadPermutation);
            }
        }
        let mut seen: BTreeSet<Perm> = BTreeSet::new();
        seen.insert((0..degree).collect());
        let mut queue: Vec<Perm> = seen.iter().cloned().collect();
        for g in gens {
            if seen.insert(g.clone()) {
                queue.push(g.clone());
            }
        }
        while let Some(p) = queue.pop() {
            for g in gens {
                for q in [compose(g, &p), compose(&p, g)] {
                    if !seen.contains(&q) {
                        if seen.len() >= bound {
                            return Err(OracleError::ClosureTooLarge(bound));
                        }
                        seen.insert(q.clone());
                        queue.push(q);
                    }
                }
            }
        }
        FiniteGroup::from_elements(degree, seen.into_iter().collect())
    }

    /// Builds a group from an explicit element list, checking closure. The
    /// identity image vector is the lexicographic minimum, so sorting puts it
    /// at index 0.
    pub fn from_elements(degree: usize, elems: Vec<Perm>) -> Result<FiniteGroup, OracleError> {
        if degree == 0 {
            return Err(OracleError::BadPermutation);
        }
        let mut elems: Vec<Perm> = {
            let mut set = BTreeSet::new();
            for p in elems {
                if !is_perm(&p, degree) {
                    return Err(OracleError::BadPermutation);
                }
                set.insert(p);
            }
            set.into_iter().collect()
        };
        let identity: Perm = (0..degree).collect();
        if elems.is_empty() {
            elems.push(identity.clone());
        }
        if elems[0] != identity {
            return Err(OracleError::NotAGroup);
        }
        let index: HashMap<Perm, usize> =
            elems.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        for a in &elems {
            for b in &elems {
                if !index.contains_key(&compose(a, b)) {
                    return Err(OracleError::NotAGroup);
                }
            }
        }
        let inv = elems
            .iter()
            .map(|p| index.get(&invert(p)).copied().ok_or(OracleError::NotAGroup))
            .collect::<Result<Vec<usize>, OracleError>>()?;
        Ok(FiniteGroup { degree, elems, index, inv })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    /// Index of the identity element.
    pub const IDENTITY: usize = 0;

    pub fn elems(&self) -> &[Perm] {
        &self.elems
    }

    pub fn perm(&self, i: usize) -> &Perm {
        &self.elems[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.index[&compose(&self.elems[i], &self.elems[j])]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    /// `g h g⁻¹` as an element index.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    fn check_mask(&self, set: u64) -> Result<(), OracleError> {
        if self.order() > MASK_BITS {
            return Err(OracleError::MaskOverflow(self.order()));
        }
        if self.order() < MASK_BITS && set >> self.order() != 0 {
            return Err(OracleError::SubsetOutOfRange);
        }
        Ok(())
    }

    /// Mask of the whole group.
    pub fn full_mask(&self) -> u64 {
        if self.order() == MASK_BITS {
            u64::MAX
        } else {
            (1u64 << self.order()) - 1
        }
    }

    /// `{g h g⁻¹ : h ∈ set}`.
    pub fn conj_mask(&self, g: usize, set: u64) -> u64 {
        let mut out = 0u64;
        for h in mask_iter(set) {
            out |= 1u64 << self.conj(g, h);
        }
        out
    }

    /// `{a b : a ∈ s, b ∈ t}`.
    pub fn mul_masks(&self, s: u64, t: u64) -> u64 {
        let mut out = 0u64;
        for a in mask_iter(s) {
            for b in mask_iter(t) {
                out |= 1u64 << self.mul(a, b);
            }
        }
        out
    }

    /// `{g⁻¹ : g ∈ set}`.
    pub fn inv_mask(&self, set: u64) -> u64 {
        let mut out = 0u64;
        for g in mask_iter(set) {
            out |= 1u64 << self.inv(g);
        }
        out
    }
}

/// Iterates the set bits of a subset mask.
pub fn mask_iter(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A relational structure on `{0, …, n-1}` with at most ternary relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawStructure", try_from = "RawStructure")]
pub struct FiniteStructure {
    n: usize,
    relations: Vec<Relation>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawStructure {
    n: usize,
    relations: Vec<Relation>,
}

impl From<FiniteStructure> for RawStructure {
    fn from(m: FiniteStructure) -> RawStructure {
        RawStructure { n: m.n, relations: m.relations }
    }
}

impl TryFrom<RawStructure> for FiniteStructure {
    type Error = OracleError;
    fn try_from(raw: RawStructure) -> Result<FiniteStructure, OracleError> {
        FiniteStructure::new(raw.n, raw.relations)
    }
}

impl FiniteStructure {
    pub fn new(n: usize, relations: Vec<Relation>) -> Result<FiniteStructure, OracleError> {
        if n == 0 || n > MAX_DOMAIN {
            return Err(OracleError::DomainOutOfRange);
        }
        for rel in &relations {
            if rel.arity == 0 || rel.arity > 3 {
                return Err(OracleError::ArityOutOfRange);
            }
            for t in &rel.tuples {
                if t.len() != rel.arity || t.iter().any(|&x| x >= n) {
                    return Err(OracleError::BadTuple);
                }
            }
        }
        Ok(FiniteStructure { n, relations })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    fn preserved_by(&self, p: &Perm) -> bool {
        self.relations.iter().all(|rel| {
            rel.tuples
                .iter()
                .all(|t| rel.tuples.contains(&t.iter().map(|&x| p[x]).collect::<Vec<usize>>()))
        })
    }
}

/// A finite group action: `act[g][x]` is `g · x`. The axioms (identity acts
/// trivially, `act[gh] = act[g] ∘ act[h]`) are checked exhaustively on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawAction", try_from = "RawAction")]
pub struct FiniteAction {
    group: FiniteGroup,
    space: usize,
    act: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawAction {
    group: FiniteGroup,
    space: usize,
    action: Vec<Vec<usize>>,
}

impl From<FiniteAction> for RawAction {
    fn from(a: FiniteAction) -> RawAction {
        RawAction { group: a.group, space: a.space, action: a.act }
    }
}

impl TryFrom<RawAction> for FiniteAction {
    type Error = OracleError;
    fn try_from(raw: RawAction) -> Result<FiniteAction, OracleError> {
        FiniteAction::new(raw.group, raw.space, raw.action)
    }
}

impl FiniteAction {
    pub fn new(
        group: FiniteGroup,
        space: usize,
        act: Vec<Vec<usize>>,
    ) -> Result<FiniteAction, OracleError> {
        if space == 0 || space > MAX_SPACE {
            return Err(OracleError::SpaceOutOfRange);
        }
        if act.len() != group.order() {
            return Err(OracleError::BadAction("one row per group element".into()));
        }
        for row in &act {
            if !is_perm(row, space) {
                return Err(OracleError::BadAction("rows must permute the space".into()));
            }
        }
        if act[FiniteGroup::IDENTITY] != (0..space).collect::<Vec<usize>>() {
            return Err(OracleError::BadAction("identity must act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                for x in 0..space {
                    if act[gh][x] != act[g][act[h][x]] {
                        return Err(OracleError::BadAction(format!(
                            "compatibility fails at g={g}, h={h}, x={x}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteAction { group, space, act })
    }

    /// The group acting on its own points. Skips the exhaustive axiom check:
    /// for a closed permutation set the axioms hold by construction.
    pub fn natural(group: FiniteGroup) -> Result<FiniteAction, OracleError> {
        if group.degree() == 0 || group.degree() > MAX_SPACE {
            return Err(OracleError::SpaceOutOfRange);
        }
        let space = group.degree();
        let act = group.elems.clone();
        debug_assert!(act[FiniteGroup::IDENTITY] == (0..space).collect::<Vec<usize>>());
        Ok(FiniteAction { group, space, act })
    }

    /// Coordinatewise action of the product group on the product space. The
    /// point `(x, y)` is encoded as `x * b.space + y`, the group pair `(g, h)`
    /// as the block permutation fixing each factor.
    pub fn product(a: &FiniteAction, b: &FiniteAction) -> Result<FiniteAction, OracleError> {
        let degree = a.group.degree() + b.group.degree();
        let mut elems = Vec::new();
        for p in a.group.elems() {
            for q in b.group.elems() {
                let mut r: Perm = p.clone();
                r.extend(q.iter().map(|&x| x + a.group.degree()));
                elems.push(r);
            }
        }
        let group = FiniteGroup::from_elements(degree, elems)?;
        let space = a.space * b.space;
        let mut act = vec![vec![0; space]; group.order()];
        for (i, r) in group.elems().iter().enumerate() {
            let p: Perm = r[..a.group.degree()].to_vec();
            let q: Perm = r[a.group.degree()..].iter().map(|&x| x - a.group.degree()).collect();
            let gi = a.group.index_of(&p).expect("projection stays in the factor");
            let hi = b.group.index_of(&q).expect("projection stays in the factor");
            for x in 0..a.space {
                for y in 0..b.space {
                    act[i][x * b.space + y] = a.apply(gi, x) * b.space + b.apply(hi, y);
                }
            }
        }
        FiniteAction::new(group, space, act)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> usize {
        self.space
    }

    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g][x]
    }

    /// The image set `{g · x : g ∈ set}` as a mask over the space.
    pub fn orbit_mask(&self, set: u64, x: usize) -> u64 {
        let mut out = 0u64;
        for g in mask_iter(set) {
            out |= 1u64 << self.act[g][x];
        }
        out
    }
}

/// All permutations of the domain preserving every relation, acting
/// naturally. Exhaustive over `n!` candidates, so `n ≤ 7`.
pub fn aut_group(m: &FiniteStructure) -> Result<FiniteAction, OracleError> {
    let n = m.n();
    let mut autos = Vec::new();
    let mut p: Perm = (0..n).collect();
    // Heap's algorithm over all n! image vectors.
    let mut c = vec![0usize; n];
    if m.preserved_by(&p) {
        autos.push(p.clone());
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            if m.preserved_by(&p) {
                autos.push(p.clone());
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    // A preservation-closed set of bijections on a finite set is a group.
    let group = FiniteGroup::from_elements(n, autos)?;
    if n > MAX_SPACE {
        // The natural action of a degree-7 automorphism group still makes
        // sense for rank computations even though the dynamical relations cap
        // the space at 6; bypass only the size gate, not the group check.
        let space = group.degree();
        let act = group.elems.clone();
        return Ok(FiniteAction { group, space, act });
    }
    FiniteAction::natural(group)
}

/// Pointwise stabilizer of a tuple inside the subgroup `h` (element indices
/// sorted ascending) of the acting group.
fn stab_in(act: &FiniteAction, h: &[usize], tuple: &[usize]) -> Vec<usize> {
    h.iter().copied().filter(|&g| tuple.iter().all(|&x| act.apply(g, x) == x)).collect()
}

fn tuple_orbit(act: &FiniteAction, h: &[usize], tuple: &[usize]) -> BTreeSet<Vec<usize>> {
    h.iter().map(|&g| tuple.iter().map(|&x| act.apply(g, x)).collect()).collect()
}

fn tuples_of_len(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut s = t.clone();
                    s.push(x);
                    s
                })
            })
            .collect();
    }
    out
}

/// Orbit-form definability rank of `ā` over `b̄`: 0 when the pointwise
/// stabilizer of `b̄` already fixes the orbit of `ā`, and otherwise the least
/// `1 + max` over the branches of some witness tuple `c̄`. Candidate tuples
/// range over lengths `1..=n`; longer tuples repeat entries and so add no new
/// stabilizers (asserted below by comparing each tuple stabilizer with the
/// stabilizer of its entry set).
pub fn drk_bruteforce(
    m: &FiniteStructure,
    abar: &[usize],
    bbar: &[usize],
) -> Result<u32, OracleError> {
    let n = m.n();
    if abar.iter().chain(bbar.iter()).any(|&x| x >= n) {
        return Err(OracleError::EntryOutOfRange);
    }
    let act = aut_group(m)?;
    let all: Vec<usize> = (0..act.group().order()).collect();
    let h0 = stab_in(&act, &all, bbar);
    let candidates: Vec<Vec<usize>> =
        (1..=n).flat_map(|len| tuples_of_len(n, len)).collect();
    let mut memo: HashMap<Vec<usize>, u32> = HashMap::new();
    let rank = drk_rank(&act, abar, &candidates, h0, &mut memo);
    Ok(rank)
}

fn drk_rank(
    act: &FiniteAction,
    abar: &[usize],
    candidates: &[Vec<usize>],
    h: Vec<usize>,
    memo: &mut HashMap<Vec<usize>, u32>,
) -> u32 {
    if let Some(&r) = memo.get(&h) {
        return r;
    }
    let orbit = tuple_orbit(act, &h, abar);
    if orbit.len() == 1 {
        memo.insert(h, 0);
        return 0;
    }
    let mut best: Option<u32> = None;
    'cand: for c in candidates {
        let mut set: Vec<usize> = c.clone();
        set.sort_unstable();
        set.dedup();
        assert_eq!(
            stab_in(act, &h, c),
            stab_in(act, &h, &set),
            "a tuple stabilizer must equal the stabilizer of its entry set"
        );
        let mut worst = 0u32;
        for d in tuple_orbit(act, &h, c) {
            let h2 = stab_in(act, &h, &d);
            if h2.len() == h.len() {
                // A branch that fails to shrink the stabilizer loops on the
                // same state; such a candidate can never realize the minimum
                // because the full-domain tuple always shrinks a nontrivial
                // stabilizer.
                continue 'cand;
            }
            worst = worst.max(drk_rank(act, abar, candidates, h2, memo));
        }
        best = Some(best.map_or(worst, |b: u32| b.min(worst)));
    }
    let rank = 1 + best.expect("the full-domain tuple is always an admissible witness");
    memo.insert(h, rank);
    rank
}

fn check_subset(g: &FiniteGroup, set: u64) -> Result<(), OracleError> {
    g.check_mask(set)?;
    if set & 1 == 0 {
        return Err(OracleError::MissingIdentity);
    }
    Ok(())
}

/// Ranks of every identity-containing subset `S` against the fixed left set
/// `v`, indexed by subset mask: `rank(S) = 0` iff `S ⊆ v`, and otherwise the
/// least `β + 1` such that some identity-containing `W` has
/// `rank(g W g⁻¹) ≤ β` for every `g ∈ S`. Entries at masks without the
/// identity bit are unused.
pub fn rk_table(g: &FiniteGroup, v: u64) -> Result<Vec<u32>, OracleError> {
    check_subset(g, v)?;
    let states: Vec<u64> = (0..=g.full_mask()).filter(|m| m & 1 == 1).collect();
    let unranked = u32::MAX;
    let mut rank = vec![unranked; (g.full_mask() + 1) as usize];
    for &s in &states {
        if s & !v == 0 {
            rank[s as usize] = 0;
        }
    }
    let mut beta = 0u32;
    loop {
        let mut changed = false;
        for &s in &states {
            if rank[s as usize] != unranked {
                continue;
            }
            let witnessed = states.iter().any(|&w| {
                mask_iter(s).all(|h| {
                    let conj = g.conj_mask(h, w);
                    rank[conj as usize] <= beta
                })
            });
            if witnessed {
                rank[s as usize] = beta + 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        beta += 1;
    }
    // W = {1} always witnesses the successor clause on a discrete group, so
    // every subset is ranked and no rank exceeds 1.
    assert!(states.iter().all(|&s| rank[s as usize] <= 1));
    Ok(rank)
}

/// Balanced rank of the pair `(v, u)` over a finite discrete group.
pub fn rk_bruteforce(g: &FiniteGroup, v: u64, u: u64) -> Result<u32, OracleError> {
    check_subset(g, u)?;
    let table = rk_table(g, v)?;
    Ok(table[u as usize])
}

/// Weak-rank variant: the base case asks for a covering `u ⊆ F v` by finitely
/// many translates. On a finite group `F = G` (indeed `F = u`) always covers,
/// so the recursion never engages and the rank is 0; the covering is still
/// checked literally.
pub fn rkstar_bruteforce(g: &FiniteGroup, v: u64, u: u64) -> Result<u32, OracleError> {
    check_subset(g, v)?;
    check_subset(g, u)?;
    let cover = g.mul_masks(u, v);
    assert!(u & !cover == 0, "u ⊆ uV must hold, since 1 ∈ V");
    Ok(0)
}

/// Least `α` with `rk(V, G) < α` for every identity-containing `V`; equals
/// `1 + max_V rk(V, G)`. Exponential in the group order — intended for the
/// small catalog groups.
pub fn group_rank_bruteforce(g: &FiniteGroup) -> Result<u32, OracleError> {
    let full = g.full_mask();
    let mut worst = 0u32;
    // Identity-containing subsets are exactly the odd masks.
    let mut v = 1u64;
    loop {
        worst = worst.max(rk_bruteforce(g, v, full)?);
        if v == full {
            break;
        }
        v += 2;
    }
    Ok(worst + 1)
}

/// Memoized evaluator for the dynamical relations `↭` and `∼` on one finite
/// action. Sharing the cache across queries keeps the exhaustive quantifier
/// towers affordable.
pub struct RelationCache<'a> {
    act: &'a FiniteAction,
    squiggle: HashMap<(u64, u32, usize, usize), bool>,
    sim_le: HashMap<(u64, u32, usize, usize), bool>,
}

impl<'a> RelationCache<'a> {
    pub fn new(act: &'a FiniteAction) -> RelationCache<'a> {
        RelationCache { act, squiggle: HashMap::new(), sim_le: HashMap::new() }
    }

    fn check(&self, v: u64, alpha: u32, x: usize, y: usize) -> Result<(), OracleError> {
        check_subset(self.act.group(), v)?;
        if alpha > MAX_ALPHA {
            return Err(OracleError::AlphaOutOfRange);
        }
        if x >= self.act.space() || y >= self.act.space() {
            return Err(OracleError::PointOutOfRange);
        }
        Ok(())
    }

    /// `x ↭^α_V y`: at level 0 each point lies in the other's `V`-image; at
    /// successor levels, for every identity-containing `W` and every subset
    /// `U` of the space meeting `{x, y}` there are `gˣ, gʸ ∈ V` pushing both
    /// points into `U` while all lower levels hold over `W`.
    pub fn squiggle(&mut self, v: u64, alpha: u32, x: usize, y: usize) -> Result<bool, OracleError> {
        self.check(v, alpha, x, y)?;
        Ok(self.squiggle_inner(v, alpha, x, y))
    }

    fn squiggle_inner(&mut self, v: u64, alpha: u32, x: usize, y: usize) -> bool {
        if let Some(&b) = self.squiggle.get(&(v, alpha, x, y)) {
            return b;
        }
        let value = if alpha == 0 {
            let xo = self.act.orbit_mask(v, x);
            let yo = self.act.orbit_mask(v, y);
            yo >> x & 1 == 1 && xo >> y & 1 == 1
        } else {
            let group_states: Vec<u64> =
                (0..=self.act.group().full_mask()).filter(|m| m & 1 == 1).collect();
            let space_full: u64 = (1u64 << self.act.space()) - 1;
            let vs: Vec<usize> = mask_iter(v).collect();
            'outer: {
                for &w in &group_states {
                    for u in 0..=space_full {
                        if u >> x & 1 == 0 && u >> y & 1 == 0 {
                            continue;
                        }
                        let found = vs.iter().any(|&gx| {
                            let xx = self.act.apply(gx, x);
                            if u >> xx & 1 == 0 {
                                return false;
                            }
                            vs.iter().any(|&gy| {
                                let yy = self.act.apply(gy, y);
                                u >> yy & 1 == 1
                                    && (0..alpha).all(|beta| self.squiggle_inner(w, beta, xx, yy))
                            })
                        });
                        if !found {
                            break 'outer false;
                        }
                    }
                }
                true
            }
        };
        self.squiggle.insert((v, alpha, x, y), value);
        value
    }

    /// `x ⪯^α_V y`: at level 0, `x` lies in the `V`-image of `y`; at
    /// successor levels, for every identity-containing `W` some `v ∈ V` has
    /// `v·y ∼^β_W x` for all `β < α`.
    pub fn sim_le(&mut self, v: u64, alpha: u32, x: usize, y: usize) -> Result<bool, OracleError> {
        self.check(v, alpha, x, y)?;
        Ok(self.sim_le_inner(v, alpha, x, y))
    }

    fn sim_le_inner(&mut self, v: u64, alpha: u32, x: usize, y: usize) -> bool {
        if let Some(&b) = self.sim_le.get(&(v, alpha, x, y)) {
            return b;
        }
        let value = if alpha == 0 {
            self.act.orbit_mask(v, y) >> x & 1 == 1
        } else {
            let group_states: Vec<u64> =
                (0..=self.act.group().full_mask()).filter(|m| m & 1 == 1).collect();
            group_states.iter().all(|&w| {
                mask_iter(v).any(|g| {
                    let vy = self.act.apply(g, y);
                    (0..alpha).all(|beta| self.sim_inner(w, beta, vy, x))
                })
            })
        };
        self.sim_le.insert((v, alpha, x, y), value);
        value
    }

    fn sim_inner(&mut self, v: u64, alpha: u32, x: usize, y: usize) -> bool {
        self.sim_le_inner(v, alpha, x, y) && self.sim_le_inner(v, alpha, y, x)
    }

    /// `x ∼^α_V y`: both `⪯^α_V` directions.
    pub fn sim(&mut self, v: u64, alpha: u32, x: usize, y: usize) -> Result<bool, OracleError> {
        self.check(v, alpha, x, y)?;
        Ok(self.sim_inner(v, alpha, x, y))
    }
}

/// One-shot `↭` query; use [`RelationCache`] for batches.
pub fn squiggle_bruteforce(
    act: &FiniteAction,
    v: u64,
    alpha: u32,
    x: usize,
    y: usize,
) -> Result<bool, OracleError> {
    RelationCache::new(act).squiggle(v, alpha, x, y)
}

/// One-shot `∼` query; use [`RelationCache`] for batches.
pub fn sim_bruteforce(
    act: &FiniteAction,
    v: u64,
    alpha: u32,
    x: usize,
    y: usize,
) -> Result<bool, OracleError> {
    RelationCache::new(act).sim(v, alpha, x, y)
}

/// Every group of order at most 8, up to isomorphism, as a permutation group.
pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let cyc = |n: usize| -> Vec<Perm> {
        vec![(0..n).map(|x| (x + 1) % n).collect()]
    };
    let specs: Vec<(&'static str, usize, Vec<Perm>)> = vec![
        ("C1", 1, vec![]),
        ("C2", 2, cyc(2)),
        ("C3", 3, cyc(3)),
        ("C4", 4, cyc(4)),
        ("C2xC2", 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        ("C5", 5, cyc(5)),
        ("C6", 6, cyc(6)),
        ("S3", 3, vec![vec![1, 2, 0], vec![1, 0, 2]]),
        ("C7", 7, cyc(7)),
        ("C8", 8, cyc(8)),
        ("C4xC2", 6, vec![vec![1, 2, 3, 0, 4, 5], vec![0, 1, 2, 3, 5, 4]]),
        ("C2xC2xC2", 6, vec![vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]]),
        ("D4", 4, vec![vec![1, 2, 3, 0], vec![0, 3, 2, 1]]),
        // Quaternions in the regular representation; points are
        // 1, -1, i, -i, j, -j, k, -k and the generators are left
        // multiplication by i and by j.
        ("Q8", 8, vec![vec![2, 3, 1, 0, 6, 7, 5, 4], vec![4, 5, 7, 6, 1, 0, 2, 3]]),
    ];
    specs
        .into_iter()
        .map(|(name, degree, gens)| {
            let g = FiniteGroup::from_generators(degree, &gens, GROUP_BOUND)
                .expect("catalog generators close within the bound");
            (name, g)
        })
        .collect()
}

/// Natural actions with group order ≤ 6 and space ≤ 5, inside the exhaustive
/// bounds of the dynamical relations.
pub fn small_actions() -> Vec<(&'static str, FiniteAction)> {
    let cyc = |n: usize| -> Vec<Perm> {
        vec![(0..n).map(|x| (x + 1) % n).collect()]
    };
    let specs: Vec<(&'static str, usize, Vec<Perm>)> = vec![
        ("C1 on 1", 1, vec![]),
        ("C2 on 2", 2, cyc(2)),
        ("C3 on 3", 3, cyc(3)),
        ("C4 on 4", 4, cyc(4)),
        ("C5 on 5", 5, cyc(5)),
        ("C6 on 5", 5, vec![vec![1, 0, 3, 4, 2]]),
        ("S3 on 3", 3, vec![vec![1, 2, 0], vec![1, 0, 2]]),
        ("C2xC2 on 4", 4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        ("C2 on 3", 3, vec![vec![1, 0, 2]]),
    ];
    specs
        .into_iter()
        .map(|(name, degree, gens)| {
            let g = FiniteGroup::from_generators(degree, &gens, GROUP_BOUND)
                .expect("catalog generators close within the bound");
            let act = FiniteAction::natural(g).expect("catalog degrees fit the space bound");
            (name, act)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure(n: usize, rels: Vec<(&str, usize, Vec<Vec<usize>>)>) -> FiniteStructure {
        let relations = rels
            .into_iter()
            .map(|(name, arity, tuples)| Relation {
                name: name.to_string(),
                arity,
                tuples: tuples.into_iter().collect(),
            })
            .collect();
        FiniteStructure::new(n, relations).unwrap()
    }

    #[test]
    fn automorphisms_of_basic_structures() {
        let two = structure(2, vec![]);
        assert_eq!(aut_group(&two).unwrap().group().order(), 2);

        let cycle = structure(3, vec![("E", 2, vec![vec![0, 1], vec![1, 2], vec![2, 0]])]);
        let aut = aut_group(&cycle).unwrap();
        assert_eq!(aut.group().order(), 3);

        let order = structure(3, vec![("L", 2, vec![vec![0, 1], vec![0, 2], vec![1, 2]])]);
        assert_eq!(aut_group(&order).unwrap().group().order(), 1);
    }

    #[test]
    fn definability_rank_examples() {
        let two = structure(2, vec![]);
        assert_eq!(drk_bruteforce(&two, &[0], &[0]).unwrap(), 0);
        assert_eq!(drk_bruteforce(&two, &[0], &[]).unwrap(), 1);

        let order = structure(3, vec![("L", 2, vec![vec![0, 1], vec![0, 2], vec![1, 2]])]);
        assert_eq!(drk_bruteforce(&order, &[0], &[]).unwrap(), 0);
    }

    #[test]
    fn balanced_rank_examples() {
        let c2 = FiniteGroup::from_generators(2, &[vec![1, 0]], GROUP_BOUND).unwrap();
        let full = c2.full_mask();
        assert_eq!(rk_bruteforce(&c2, full, full).unwrap(), 0);
        assert_eq!(rk_bruteforce(&c2, 1, full).unwrap(), 1);
        assert_eq!(rk_bruteforce(&c2, 1, 1).unwrap(), 0);
        assert_eq!(rkstar_bruteforce(&c2, 1, full).unwrap(), 0);
        assert_eq!(group_rank_bruteforce(&c2).unwrap(), 2);

        let c1 = FiniteGroup::from_elements(1, vec![vec![0]]).unwrap();
        assert_eq!(group_rank_bruteforce(&c1).unwrap(), 1);
    }

    #[test]
    fn dynamical_relation_examples() {
        let c1 = FiniteGroup::from_elements(1, vec![vec![0]]).unwrap();
        let trivial = FiniteAction::new(c1, 2, vec![vec![0, 1]]).unwrap();
        assert!(squiggle_bruteforce(&trivial, 1, 0, 0, 0).unwrap());
        assert!(!squiggle_bruteforce(&trivial, 1, 0, 0, 1).unwrap());

        let c2 = FiniteGroup::from_generators(2, &[vec![1, 0]], GROUP_BOUND).unwrap();
        let swap = FiniteAction::natural(c2).unwrap();
        assert!(squiggle_bruteforce(&swap, swap.group().full_mask(), 0, 0, 1).unwrap());
        assert!(sim_bruteforce(&swap, swap.group().full_mask(), 0, 0, 1).unwrap());
        assert!(!sim_bruteforce(&swap, 1, 0, 0, 1).unwrap());
    }

    #[test]
    fn catalog_orders() {
        let orders: Vec<usize> = small_groups().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]);
        for (name, g) in small_groups() {
            for i in 0..g.order() {
                assert_eq!(g.mul(i, g.inv(i)), FiniteGroup::IDENTITY, "{name}");
            }
        }
        let q8 = &small_groups()[13].1;
        // Q8 has a unique element of order 2.
        let involutions = (1..q8.order()).filter(|&i| q8.mul(i, i) == 0).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn action_validation_rejects_bad_tables() {
        let c2 = FiniteGroup::from_generators(2, &[vec![1, 0]], GROUP_BOUND).unwrap();
        // An involution cannot act as a 3-cycle.
        let err = FiniteAction::new(c2.clone(), 3, vec![vec![0, 1, 2], vec![1, 2, 0]]);
        assert!(matches!(err, Err(OracleError::BadAction(_))));
        let err = FiniteAction::new(c2.clone(), 2, vec![vec![0, 1], vec![0, 0]]);
        assert!(matches!(err, Err(OracleError::BadAction(_))));
        let ok = FiniteAction::new(c2, 2, vec![vec![0, 1], vec![1, 0]]);
        assert!(ok.is_ok());
    }

    #[test]
    fn group_json_round_trip() {
        let s3 = FiniteGroup::from_generators(3, &[vec![1, 2, 0], vec![1, 0, 2]], GROUP_BOUND)
            .unwrap();
        let json = serde_json::to_string(&s3).unwrap();
        let back: FiniteGroup = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s3);
        let bad = r#"{"degree":2,"elements":[[0,1],[0,0]]}"#;
        assert!(serde_json::from_str::<FiniteGroup>(bad).is_err());
    }
}
