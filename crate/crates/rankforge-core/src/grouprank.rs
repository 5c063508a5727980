//! Symbolic group constructions and their balanced-rank profiles.
//!
//! A `GroupExpr` is an abstract syntax tree over the constructions that the
//! rank calculus is closed under: products, local direct products with
//! marked open subgroups, and the Z-wreath jump. `eval_rank` folds the
//! closure rules into an exact ordinal profile, and `tower` builds, for any
//! ordinal, an expression whose rank is exactly that ordinal.

use crate::ordinal::Ordinal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "lowercase")]
pub enum GroupExpr {
    /// The one-element group; the unique rank-1 group.
    Trivial,
    /// Any nontrivial discrete group; rank 2 with marked subgroup {1}.
    #[serde(rename = "discrete")]
    DiscreteNontrivial,
    /// Full direct product of the family.
    Product { family: FamilySpec },
    /// Local direct product with respect to the members' marked subgroups.
    #[serde(rename = "ldp")]
    LocalDirectProduct { family: FamilySpec },
    /// The wreath product Z Wr G, with the product of copies of the inner
    /// marked subgroup as the new marked subgroup.
    #[serde(rename = "zwr")]
    ZWreath { inner: Box<GroupExpr> },
}

/// A family of groups: explicit finite list, or the symbolic family of all
/// tower stages below a limit bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "t", rename_all = "lowercase")]
pub enum FamilySpec {
    Explicit { members: Vec<GroupExpr> },
    #[serde(rename = "tower")]
    TowerFamily { bound: Ordinal },
}

/// The two ordinals the calculus tracks: the balanced rank of the group and
/// the rank of its marked pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub rank: Ordinal,
    pub marked_pair_rank: Ordinal,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupRankError {
    #[error("no 0-balanced groups exist")]
    ZeroRank,
    #[error("invalid group expression: {0}")]
    Invalid(String),
}

/// Structural well-formedness violations, empty iff the expression is valid.
pub fn validate(g: &GroupExpr) -> Vec<String> {
    let mut out = Vec::new();
    collect_violations(g, &mut out);
    out
}

fn collect_violations(g: &GroupExpr, out: &mut Vec<String>) {
    match g {
        GroupExpr::Trivial | GroupExpr::DiscreteNontrivial => {}
        GroupExpr::Product { family } | GroupExpr::LocalDirectProduct { family } => {
            match family {
                FamilySpec::Explicit { members } => {
                    if members.is_empty() {
                        out.push("empty family".to_string());
                    }
                    for m in members {
                        collect_violations(m, out);
                    }
                }
                FamilySpec::TowerFamily { bound } => {
                    if !bound.is_limit() {
                        out.push("tower family bound must be a limit ordinal".to_string());
                    }
                }
            }
        }
        GroupExpr::ZWreath { inner } => collect_violations(inner, out),
    }
}

/// Rank and pair-rank suprema over a family. For the symbolic tower family
/// below a limit `bound`, both suprema are `bound`: stage ranks are cofinal
/// by construction, and successor-stage pair ranks (one less than the stage
/// rank) are cofinal too.
fn family_sups(f: &FamilySpec) -> Result<(Ordinal, Ordinal), GroupRankError> {
    match f {
        FamilySpec::Explicit { members } => {
            let mut rank = Ordinal::zero();
            let mut pair = Ordinal::zero();
            for m in members {
                let p = eval_rank(m)?;
                rank = rank.max(p.rank);
                pair = pair.max(p.marked_pair_rank);
            }
            Ok((rank, pair))
        }
        FamilySpec::TowerFamily { bound } => Ok((bound.clone(), bound.clone())),
    }
}

/// Exact rank profile of a valid expression.
///
/// Closure rules: products take suprema in both coordinates; a local direct
/// product takes the pair-rank supremum and pushes the group rank to one
/// above it when the plain supremum does not already exceed that; the
/// Z-wreath jump raises a successor rank by one, fixes a limit rank, and
/// always raises the pair rank by one.
pub fn eval_rank(g: &GroupExpr) -> Result<RankProfile, GroupRankError> {
    let violations = validate(g);
    if let Some(first) = violations.into_iter().next() {
        return Err(GroupRankError::Invalid(first));
    }
    eval_valid(g)
}

fn eval_valid(g: &GroupExpr) -> Result<RankProfile, GroupRankError> {
    Ok(match g {
        GroupExpr::Trivial => RankProfile {
            rank: Ordinal::one(),
            marked_pair_rank: Ordinal::zero(),
        },
        GroupExpr::DiscreteNontrivial => RankProfile {
            rank: Ordinal::from_nat(2),
            marked_pair_rank: Ordinal::one(),
        },
        GroupExpr::Product { family } => {
            let (rank, pair) = family_sups(family)?;
            RankProfile {
                rank,
                marked_pair_rank: pair,
            }
        }
        GroupExpr::LocalDirectProduct { family } => {
            let (rank, pair) = family_sups(family)?;
            RankProfile {
                rank: rank.max(pair.successor()),
                marked_pair_rank: pair,
            }
        }
        GroupExpr::ZWreath { inner } => {
            let p = eval_valid(inner)?;
            RankProfile {
                rank: if p.rank.is_successor() {
                    p.rank.successor()
                } else {
                    p.rank
                },
                marked_pair_rank: p.marked_pair_rank.successor(),
            }
        }
    })
}

/// Whether the group is TSI (rank at most 2) and CLI (rank an ordinal at
/// all — always true in this algebra).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub tsi: bool,
    pub cli: bool,
}

pub fn classify(g: &GroupExpr) -> Result<Classification, GroupRankError> {
    let p = eval_rank(g)?;
    Ok(Classification {
        tsi: p.rank <= Ordinal::from_nat(2),
        cli: true,
    })
}

/// The stage-`alpha` group of the rank tower: an expression of rank exactly
/// `alpha`. Stage 1 is trivial; limit stages are full products of all
/// earlier stages; a stage after a limit is the local direct product of the
/// earlier stages; a stage after a successor is the Z-wreath jump.
pub fn tower(alpha: &Ordinal) -> Result<GroupExpr, GroupRankError> {
    if alpha.is_zero() {
        return Err(GroupRankError::ZeroRank);
    }
    if alpha.as_nat() == Some(1) {
        return Ok(GroupExpr::Trivial);
    }
    if alpha.is_limit() {
        return Ok(GroupExpr::Product {
            family: FamilySpec::TowerFamily {
                bound: alpha.clone(),
            },
        });
    }
    let beta = alpha.predecessor().expect("successor case");
    if beta.is_limit() {
        Ok(GroupExpr::LocalDirectProduct {
            family: FamilySpec::TowerFamily { bound: beta },
        })
    } else {
        Ok(GroupExpr::ZWreath {
            inner: Box::new(tower(&beta)?),
        })
    }
}
