//! Command-line front end for the rankforge calculators.
//!
//! Every subcommand reads plain arguments or one JSON input document,
//! invokes one core operation (or a short documented pipeline around it),
//! and prints a single result line. JSON is the interchange format; the
//! default text mode prints the same data, unquoting bare strings.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use rankforge_core::fusion::{
    self, ExtensionStep, FPair, TNode,
};
use rankforge_core::gamerank::{self, FiniteTree, GameRank, OpenGame, Strategy, Winner};
use rankforge_core::grouprank::{self, GroupExpr};
use rankforge_core::oracle::{self, FiniteAction, FiniteGroup, FiniteStructure, GROUP_BOUND};
use rankforge_core::zline;
use rankforge_core::{IndexOrder, Ordinal, SymAutomorphism, ZElement};

/// Failure modes of a dispatch: domain errors exit 1, usage errors exit 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Domain(String),
    Usage(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Usage(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "rankforge",
    version,
    about = "Ordinal-valued rank calculators: ordinal arithmetic, scattered \
             order analysis, group rank algebra, open games, antichain \
             fusion, and finite brute-force oracles"
)]
pub struct Cli {
    /// Print the result as JSON (text mode prints the same data, with bare
    /// strings unquoted).
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for randomized subcommands; deterministic subcommands accept and
    /// ignore it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Search bound for subcommands that scan shift magnitudes (default 8).
    #[arg(long, global = true)]
    pub bound: Option<i64>,

    /// Read the input document from this file instead of the positional
    /// argument.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Ordinal arithmetic in Cantor normal form.
    #[command(subcommand)]
    Ord(OrdCmd),
    /// Finitely supported sequences over a scattered index order.
    #[command(subcommand)]
    Zorder(ZorderCmd),
    /// The balanced-rank algebra of group constructions.
    #[command(subcommand)]
    Rank(RankCmd),
    /// Open games of fixed even horizon and their ranks.
    #[command(subcommand)]
    Game(GameCmd),
    /// Antichain pairs of truncation requirements and shift witnesses.
    #[command(subcommand)]
    Fusion(FusionCmd),
    /// Brute-force reference computations on finite groups and actions.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// The committed invocation corpus.
    #[command(subcommand)]
    Corpus(CorpusCmd),
}

#[derive(Debug, Subcommand)]
pub enum OrdCmd {
    /// Compare two ordinals: prints lt, eq, or gt.
    Cmp { a: String, b: String },
    /// Ordinal sum a + b.
    Add { a: String, b: String },
    /// Ordinal product a * b.
    Mul { a: String, b: String },
    /// Hessenberg natural sum.
    Natadd { a: String, b: String },
    /// w raised to the given exponent.
    Pow { exponent: String },
    /// Kind, CNF length, and indecomposability of an ordinal.
    Analyze { a: String },
}

#[derive(Debug, Subcommand)]
pub enum ZorderCmd {
    /// Back-lexicographic comparison of two elements.
    Cmp { input: Option<String> },
    /// Greatest differing position and the gap there.
    Erel { input: Option<String> },
    /// Quantifier-free type of a tuple, or type equality of two tuples.
    Qf { input: Option<String> },
    /// Automorphism fixing the context and mapping a to b.
    Auto { input: Option<String> },
    /// Agreement of two elements from a threshold position on up.
    Hrel { input: Option<String> },
    /// Closure ordinal of the agreement filtration.
    Hrank { input: Option<String> },
    /// An element strictly between a given pair.
    Density { input: Option<String> },
    /// Upper bound for the definability rank of a pair.
    Drkbound { input: Option<String> },
}

#[derive(Debug, Subcommand)]
pub enum RankCmd {
    /// Rank and marked-pair rank of a group expression.
    Eval { input: Option<String> },
    /// The stage of the rank tower at a given ordinal.
    Tower {
        alpha: String,
        /// Evaluate the stage and print its rank instead of the expression.
        #[arg(long)]
        eval: bool,
    },
    /// TSI/CLI classification of a group expression.
    Classify { input: Option<String> },
    /// Structural well-formedness report for a group expression.
    Validate { input: Option<String> },
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// Winner and rank of an open game.
    Solve { input: Option<String> },
    /// Rank of an open game: a natural number or inf.
    Rank { input: Option<String> },
    /// Winning first-player strategy as [position, move] pairs.
    Strategy { input: Option<String> },
    /// The comparison game deciding rank(a) <= rank(b).
    Le { input: Option<String> },
    /// The comparison game deciding rank(a) < rank(b).
    Lt { input: Option<String> },
    /// The conjugacy game of a finite group with a marked subset.
    Cligame { input: Option<String> },
    /// Pruning rank of a finite well-founded tree.
    Cbrank { input: Option<String> },
}

#[derive(Debug, Subcommand)]
pub enum FusionCmd {
    /// Least common truncation of two requirement nodes.
    Meet { input: Option<String> },
    /// Whether a pair of requirement sets is a valid antichain pair.
    Infcheck { input: Option<String> },
    /// Extend one side of a pair below a marker so a set becomes covered.
    Extend { input: Option<String> },
    /// Which side of a pair covers an element, with the fused value.
    Fuse { input: Option<String> },
    /// Combine scoped local moves into one automorphism.
    Glue { input: Option<String> },
    /// Search for a shift fixing the anchors and settling the targets.
    Star { input: Option<String> },
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Automorphism group of a finite relational structure.
    Aut { input: Option<String> },
    /// Brute-force definability rank of a tuple pair in a structure.
    Drk { input: Option<String> },
    /// Brute-force rank of a marked subset pair in a finite group.
    Rk { input: Option<String> },
    /// Weak variant of the subset-pair rank.
    Rkstar { input: Option<String> },
    /// Level-alpha back-and-forth relation between two points.
    Squiggle { input: Option<String> },
    /// Level-alpha similarity quasi-order between two points.
    Sim { input: Option<String> },
}

#[derive(Debug, Subcommand)]
pub enum CorpusCmd {
    /// Re-run every committed invocation and diff against expected output.
    Verify,
}

/// Dispatch table: one row per subcommand with the core operations it
/// reaches. The coverage test checks this against the parser tree and the
/// public module surface.
pub const DISPATCH: &[(&str, &[&str])] = &[
    ("ord cmp", &["ordinal::compare"]),
    ("ord add", &["ordinal::add"]),
    ("ord mul", &["ordinal::mul"]),
    ("ord natadd", &["ordinal::nat_add"]),
    ("ord pow", &["ordinal::omega_pow"]),
    ("ord analyze", &["ordinal::analyze", "ordinal::parse"]),
    ("zorder cmp", &["zline::compare_backlex"]),
    ("zorder erel", &["zline::e_rel"]),
    ("zorder qf", &["zline::qf_type", "zline::qf_equal"]),
    ("zorder auto", &["zline::synth_automorphism"]),
    ("zorder hrel", &["zline::h_rel"]),
    ("zorder hrank", &["zline::hausdorff_rank"]),
    ("zorder density", &["zline::density_witness"]),
    ("zorder drkbound", &["zline::drk_upper"]),
    ("rank eval", &["grouprank::eval_rank"]),
    ("rank tower", &["grouprank::tower"]),
    ("rank classify", &["grouprank::classify"]),
    ("rank validate", &["grouprank::validate"]),
    ("game solve", &["gamerank::winner", "gamerank::grk"]),
    ("game rank", &["gamerank::grk"]),
    ("game strategy", &["gamerank::extract_strategy"]),
    ("game le", &["gamerank::le_game"]),
    ("game lt", &["gamerank::lt_game"]),
    ("game cligame", &["gamerank::cli_game"]),
    ("game cbrank", &["gamerank::cb_rank"]),
    ("fusion meet", &["fusion::meet"]),
    ("fusion infcheck", &["fusion::in_f"]),
    ("fusion extend", &["fusion::extend_requirement", "fusion::nhat"]),
    ("fusion fuse", &["fusion::fuse_side", "fusion::fuse_value"]),
    ("fusion glue", &["fusion::glue_system"]),
    ("fusion star", &["fusion::star_check"]),
    ("oracle aut", &["oracle::aut_group"]),
    ("oracle drk", &["oracle::drk_bruteforce"]),
    ("oracle rk", &["oracle::rk_bruteforce"]),
    ("oracle rkstar", &["oracle::rkstar_bruteforce"]),
    ("oracle squiggle", &["oracle::squiggle_bruteforce"]),
    ("oracle sim", &["oracle::sim_bruteforce"]),
    ("corpus verify", &["cli::corpus_verify"]),
];

/// The clap command tree, exposed for the coverage test.
pub fn command() -> clap::Command {
    use clap::CommandFactory;
    Cli::command()
}

/// A result in both output modes. `text` equals `json` except for bare
/// string results, which text mode prints unquoted.
pub struct Rendered {
    pub text: String,
    pub json: String,
}

fn scalar(s: impl Into<String>) -> Rendered {
    let s = s.into();
    Rendered {
        json: serde_json::to_string(&s).expect("strings encode"),
        text: s,
    }
}

fn record<T: Serialize>(v: &T) -> Result<Rendered, CliError> {
    let json = serde_json::to_string(v).map_err(domain)?;
    Ok(Rendered {
        text: json.clone(),
        json,
    })
}

/// Numbers and booleans print identically in both modes.
fn plain(v: impl std::fmt::Display) -> Rendered {
    let s = v.to_string();
    Rendered {
        text: s.clone(),
        json: s,
    }
}

/// Runs a full argument vector (including the program name) and returns the
/// stdout payload without its trailing newline.
pub fn run_from<I, S>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.render().to_string()))?;
    run(cli)
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    let rendered = dispatch(&cli)?;
    Ok(if cli.json {
        rendered.json
    } else {
        rendered.text
    })
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.cmd {
        Cmd::Ord(c) => ord_cmd(c),
        Cmd::Zorder(c) => zorder_cmd(cli, c),
        Cmd::Rank(c) => rank_cmd(cli, c),
        Cmd::Game(c) => game_cmd(cli, c),
        Cmd::Fusion(c) => fusion_cmd(cli, c),
        Cmd::Oracle(c) => oracle_cmd(cli, c),
        Cmd::Corpus(CorpusCmd::Verify) => corpus_verify(),
    }
}

// ---------------------------------------------------------------- input

/// Resolves the input document: `--file` wins; otherwise the positional is
/// inline JSON when it starts like JSON, and a file path when it does not.
fn input_text(cli: &Cli, inline: &Option<String>) -> Result<String, CliError> {
    if let Some(p) = &cli.file {
        return fs::read_to_string(p)
            .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", p.display())));
    }
    match inline {
        Some(s) if s.trim_start().starts_with(['{', '[', '"']) => Ok(s.clone()),
        Some(s) => fs::read_to_string(s)
            .map_err(|e| CliError::Domain(format!("cannot read {s}: {e}"))),
        None => Err(CliError::Usage(
            "missing input: pass inline JSON, a file path, or --file <path>".to_string(),
        )),
    }
}

/// Decodes JSON, reporting the path of the failing element.
fn decode<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Domain(format!(
            "cannot decode {what} at {path}: {msg}",
            path = e.path(),
            msg = e.inner()
        ))
    })
}

fn read_doc<T: serde::de::DeserializeOwned>(
    cli: &Cli,
    inline: &Option<String>,
    what: &str,
) -> Result<T, CliError> {
    decode(what, &input_text(cli, inline)?)
}

fn parse_ord(s: &str) -> Result<Ordinal, CliError> {
    Ordinal::parse(s).map_err(|e| CliError::Domain(format!("bad ordinal {s:?}: {e}")))
}

fn rel_str(o: std::cmp::Ordering) -> &'static str {
    match o {
        std::cmp::Ordering::Less => "lt",
        std::cmp::Ordering::Equal => "eq",
        std::cmp::Ordering::Greater => "gt",
    }
}

/// Element indices into a group's sorted element list, as a bit mask.
fn mask_from_indices(order: usize, idx: &[usize], what: &str) -> Result<u64, CliError> {
    let mut m = 0u64;
    for &i in idx {
        if i >= order {
            return Err(CliError::Domain(format!(
                "{what}: element index {i} out of range for a group of order {order}"
            )));
        }
        m |= 1 << i;
    }
    Ok(m)
}

// ------------------------------------------------------------- handlers

fn ord_cmd(c: &OrdCmd) -> Result<Rendered, CliError> {
    match c {
        OrdCmd::Cmp { a, b } => Ok(scalar(rel_str(parse_ord(a)?.compare(&parse_ord(b)?)))),
        OrdCmd::Add { a, b } => Ok(scalar(parse_ord(a)?.add(&parse_ord(b)?).to_string())),
        OrdCmd::Mul { a, b } => Ok(scalar(parse_ord(a)?.mul(&parse_ord(b)?).to_string())),
        OrdCmd::Natadd { a, b } => Ok(scalar(parse_ord(a)?.nat_add(&parse_ord(b)?).to_string())),
        OrdCmd::Pow { exponent } => {
            Ok(scalar(Ordinal::omega_pow(&parse_ord(exponent)?).to_string()))
        }
        OrdCmd::Analyze { a } => record(&parse_ord(a)?.analyze()),
    }
}

#[derive(Deserialize)]
struct ZPairDoc {
    ambient: IndexOrder,
    a: ZElement,
    b: ZElement,
}

#[derive(Deserialize)]
struct QfDoc {
    ambient: IndexOrder,
    left: Vec<ZElement>,
    #[serde(default)]
    right: Option<Vec<ZElement>>,
}

#[derive(Deserialize)]
struct AutoDoc {
    ambient: IndexOrder,
    #[serde(default)]
    context: Vec<ZElement>,
    a: ZElement,
    b: ZElement,
}

#[derive(Deserialize)]
struct HrelDoc {
    ambient: IndexOrder,
    a: ZElement,
    b: ZElement,
    beta: Ordinal,
}

#[derive(Deserialize)]
struct AmbientDoc {
    ambient: IndexOrder,
}

#[derive(Serialize)]
struct ErelOut {
    position: zline::Position,
    gap: i64,
}

fn zorder_cmd(cli: &Cli, c: &ZorderCmd) -> Result<Rendered, CliError> {
    match c {
        ZorderCmd::Cmp { input } => {
            let d: ZPairDoc = read_doc(cli, input, "order input")?;
            let r = zline::compare_backlex(&d.ambient, &d.a, &d.b).map_err(domain)?;
            Ok(scalar(rel_str(r)))
        }
        ZorderCmd::Erel { input } => {
            let d: ZPairDoc = read_doc(cli, input, "order input")?;
            let (position, gap) = zline::e_rel(&d.ambient, &d.a, &d.b).map_err(domain)?;
            record(&ErelOut { position, gap })
        }
        ZorderCmd::Qf { input } => {
            let d: QfDoc = read_doc(cli, input, "type input")?;
            match &d.right {
                None => record(&serde_json::json!({
                    "type": zline::qf_type(&d.ambient, &d.left).map_err(domain)?
                })),
                Some(right) => record(&serde_json::json!({
                    "equal": zline::qf_equal(&d.ambient, &d.left, right).map_err(domain)?
                })),
            }
        }
        ZorderCmd::Auto { input } => {
            let d: AutoDoc = read_doc(cli, input, "synthesis input")?;
            record(&zline::synth_automorphism(&d.ambient, &d.context, &d.a, &d.b).map_err(domain)?)
        }
        ZorderCmd::Hrel { input } => {
            let d: HrelDoc = read_doc(cli, input, "agreement input")?;
            Ok(plain(
                zline::h_rel(&d.ambient, &d.a, &d.b, &d.beta).map_err(domain)?,
            ))
        }
        ZorderCmd::Hrank { input } => {
            let d: AmbientDoc = read_doc(cli, input, "ambient input")?;
            Ok(scalar(
                zline::hausdorff_rank(&d.ambient).map_err(domain)?.to_string(),
            ))
        }
        ZorderCmd::Density { input } => {
            let d: ZPairDoc = read_doc(cli, input, "order input")?;
            record(&zline::density_witness(&d.ambient, &d.a, &d.b).map_err(domain)?)
        }
        ZorderCmd::Drkbound { input } => {
            let d: ZPairDoc = read_doc(cli, input, "order input")?;
            Ok(scalar(
                zline::drk_upper(&d.ambient, &d.a, &d.b)
                    .map_err(domain)?
                    .to_string(),
            ))
        }
    }
}

#[derive(Serialize)]
struct EvalOut {
    rank: String,
    marked_pair_rank: String,
}

#[derive(Serialize)]
struct ValidateOut {
    valid: bool,
    violations: Vec<String>,
}

fn rank_cmd(cli: &Cli, c: &RankCmd) -> Result<Rendered, CliError> {
    match c {
        RankCmd::Eval { input } => {
            let g: GroupExpr = read_doc(cli, input, "group expression")?;
            let p = grouprank::eval_rank(&g).map_err(domain)?;
            record(&EvalOut {
                rank: p.rank.to_string(),
                marked_pair_rank: p.marked_pair_rank.to_string(),
            })
        }
        RankCmd::Tower { alpha, eval } => {
            let g = grouprank::tower(&parse_ord(alpha)?).map_err(domain)?;
            if *eval {
                Ok(scalar(
                    grouprank::eval_rank(&g).map_err(domain)?.rank.to_string(),
                ))
            } else {
                record(&g)
            }
        }
        RankCmd::Classify { input } => {
            let g: GroupExpr = read_doc(cli, input, "group expression")?;
            record(&grouprank::classify(&g).map_err(domain)?)
        }
        RankCmd::Validate { input } => {
            let g: GroupExpr = read_doc(cli, input, "group expression")?;
            let violations = grouprank::validate(&g);
            record(&ValidateOut {
                valid: violations.is_empty(),
                violations,
            })
        }
    }
}

#[derive(Serialize)]
struct SolveOut {
    winner: Winner,
    grk: GameRank,
}

#[derive(Deserialize)]
struct GamePairDoc {
    a: OpenGame,
    b: OpenGame,
}

#[derive(Serialize)]
struct CmpGameOut {
    winner: Winner,
    game: OpenGame,
}

#[derive(Deserialize)]
struct MarkedGroupDoc {
    degree: usize,
    generators: Vec<Vec<usize>>,
    #[serde(rename = "V")]
    v: Vec<usize>,
}

#[derive(Serialize)]
struct CligameOut {
    grk: GameRank,
    basis: Vec<u64>,
    game: OpenGame,
}

fn marked_group(d: &MarkedGroupDoc) -> Result<(FiniteGroup, u64), CliError> {
    let g = FiniteGroup::from_generators(d.degree, &d.generators, GROUP_BOUND).map_err(domain)?;
    let v = mask_from_indices(g.order(), &d.v, "V")?;
    Ok((g, v))
}

fn game_cmd(cli: &Cli, c: &GameCmd) -> Result<Rendered, CliError> {
    match c {
        GameCmd::Solve { input } => {
            let g: OpenGame = read_doc(cli, input, "game")?;
            record(&SolveOut {
                winner: g.winner(),
                grk: g.grk(&[]).map_err(domain)?,
            })
        }
        GameCmd::Rank { input } => {
            let g: OpenGame = read_doc(cli, input, "game")?;
            let r = g.grk(&[]).map_err(domain)?;
            Ok(Rendered {
                text: r.to_string(),
                json: serde_json::to_string(&r).map_err(domain)?,
            })
        }
        GameCmd::Strategy { input } => {
            let g: OpenGame = read_doc(cli, input, "game")?;
            let s: Strategy = g.extract_strategy().map_err(domain)?;
            record(&s)
        }
        GameCmd::Le { input } => {
            let d: GamePairDoc = read_doc(cli, input, "game pair")?;
            let game = gamerank::le_game(&d.a, &d.b);
            record(&CmpGameOut {
                winner: game.winner(),
                game,
            })
        }
        GameCmd::Lt { input } => {
            let d: GamePairDoc = read_doc(cli, input, "game pair")?;
            let game = gamerank::lt_game(&d.a, &d.b);
            record(&CmpGameOut {
                winner: game.winner(),
                game,
            })
        }
        GameCmd::Cligame { input } => {
            let d: MarkedGroupDoc = read_doc(cli, input, "marked group")?;
            let (g, v) = marked_group(&d)?;
            let (game, basis) = gamerank::cli_game(&g, v).map_err(domain)?;
            record(&CligameOut {
                grk: game.grk(&[]).map_err(domain)?,
                basis,
                game,
            })
        }
        GameCmd::Cbrank { input } => {
            let t: FiniteTree = read_doc(cli, input, "tree")?;
            Ok(scalar(gamerank::cb_rank(&t).to_string()))
        }
    }
}

#[derive(Deserialize)]
struct MeetDoc {
    a: TNode,
    b: TNode,
}

#[derive(Deserialize)]
struct PairDoc {
    mu: Ordinal,
    pair: FPair,
}

#[derive(Deserialize)]
struct ExtendDoc {
    mu: Ordinal,
    pair: FPair,
    s: TNode,
    r: TNode,
    side: usize,
    beta: Ordinal,
    c: Vec<ZElement>,
}

#[derive(Deserialize)]
struct FuseDoc {
    pair: FPair,
    x: ZElement,
    #[serde(default)]
    labels: Option<[String; 3]>,
}

#[derive(Serialize)]
struct MemberOut {
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct FuseOut {
    side: Option<usize>,
    value: String,
}

#[derive(Deserialize)]
struct GlueDoc {
    system: Vec<(TNode, SymAutomorphism)>,
}

#[derive(Deserialize)]
struct StarDoc {
    j: Vec<TNode>,
    alpha: Ordinal,
    a: Vec<ZElement>,
    b: Vec<ZElement>,
    beta: Ordinal,
}

fn fusion_cmd(cli: &Cli, c: &FusionCmd) -> Result<Rendered, CliError> {
    match c {
        FusionCmd::Meet { input } => {
            let d: MeetDoc = read_doc(cli, input, "node pair")?;
            record(&d.a.meet(&d.b))
        }
        FusionCmd::Infcheck { input } => {
            let d: PairDoc = read_doc(cli, input, "antichain pair")?;
            record(&match fusion::in_f(&d.mu, &d.pair) {
                Ok(()) => MemberOut {
                    member: true,
                    reason: None,
                },
                Err(e) => MemberOut {
                    member: false,
                    reason: Some(e.to_string()),
                },
            })
        }
        FusionCmd::Extend { input } => {
            let d: ExtendDoc = read_doc(cli, input, "extension request")?;
            let step: ExtensionStep =
                fusion::extend_requirement(&d.mu, &d.pair, &d.s, &d.r, d.side, &d.beta, &d.c)
                    .map_err(domain)?;
            record(&step)
        }
        FusionCmd::Fuse { input } => {
            let d: FuseDoc = read_doc(cli, input, "fusion query")?;
            let side = fusion::fuse_side(&d.pair, &d.x).map_err(domain)?;
            let [l0, l1, free] = d
                .labels
                .clone()
                .unwrap_or_else(|| ["F0".into(), "F1".into(), "free".into()]);
            let value = fusion::fuse_value(&d.pair, &d.x, |_| l0, |_| l1, |_| free)
                .map_err(domain)?;
            record(&FuseOut { side, value })
        }
        FusionCmd::Glue { input } => {
            let d: GlueDoc = read_doc(cli, input, "scoped move system")?;
            record(&fusion::glue_system(&d.system).map_err(domain)?)
        }
        FusionCmd::Star { input } => {
            let d: StarDoc = read_doc(cli, input, "shift search instance")?;
            let bound = cli.bound.unwrap_or(8);
            record(
                &fusion::star_check(&d.j, &d.alpha, &d.a, &d.b, &d.beta, bound)
                    .map_err(domain)?,
            )
        }
    }
}

#[derive(Deserialize)]
struct DrkDoc {
    structure: FiniteStructure,
    a: Vec<usize>,
    b: Vec<usize>,
}

#[derive(Deserialize)]
struct GroupPairDoc {
    degree: usize,
    generators: Vec<Vec<usize>>,
    #[serde(rename = "V")]
    v: Vec<usize>,
    #[serde(rename = "U")]
    u: Vec<usize>,
}

#[derive(Deserialize)]
struct RelQueryDoc {
    action: FiniteAction,
    #[serde(rename = "V")]
    v: Vec<usize>,
    alpha: u32,
    x: usize,
    y: usize,
}

fn group_pair(d: &GroupPairDoc) -> Result<(FiniteGroup, u64, u64), CliError> {
    let g = FiniteGroup::from_generators(d.degree, &d.generators, GROUP_BOUND).map_err(domain)?;
    let v = mask_from_indices(g.order(), &d.v, "V")?;
    let u = mask_from_indices(g.order(), &d.u, "U")?;
    Ok((g, v, u))
}

fn oracle_cmd(cli: &Cli, c: &OracleCmd) -> Result<Rendered, CliError> {
    match c {
        OracleCmd::Aut { input } => {
            let m: FiniteStructure = read_doc(cli, input, "structure")?;
            record(&oracle::aut_group(&m).map_err(domain)?)
        }
        OracleCmd::Drk { input } => {
            let d: DrkDoc = read_doc(cli, input, "definability query")?;
            Ok(plain(
                oracle::drk_bruteforce(&d.structure, &d.a, &d.b).map_err(domain)?,
            ))
        }
        OracleCmd::Rk { input } => {
            let d: GroupPairDoc = read_doc(cli, input, "subset pair")?;
            let (g, v, u) = group_pair(&d)?;
            Ok(plain(oracle::rk_bruteforce(&g, v, u).map_err(domain)?))
        }
        OracleCmd::Rkstar { input } => {
            let d: GroupPairDoc = read_doc(cli, input, "subset pair")?;
            let (g, v, u) = group_pair(&d)?;
            Ok(plain(oracle::rkstar_bruteforce(&g, v, u).map_err(domain)?))
        }
        OracleCmd::Squiggle { input } => {
            let d: RelQueryDoc = read_doc(cli, input, "relation query")?;
            let v = mask_from_indices(d.action.group().order(), &d.v, "V")?;
            Ok(plain(
                oracle::squiggle_bruteforce(&d.action, v, d.alpha, d.x, d.y).map_err(domain)?,
            ))
        }
        OracleCmd::Sim { input } => {
            let d: RelQueryDoc = read_doc(cli, input, "relation query")?;
            let v = mask_from_indices(d.action.group().order(), &d.v, "V")?;
            Ok(plain(
                oracle::sim_bruteforce(&d.action, v, d.alpha, d.x, d.y).map_err(domain)?,
            ))
        }
    }
}

// --------------------------------------------------------------- corpus

#[derive(Deserialize)]
struct Case {
    name: String,
    args: Vec<String>,
    expected: String,
}

/// Corpus location: `RANKFORGE_CORPUS` when set, the committed corpus
/// directory otherwise.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os("RANKFORGE_CORPUS") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

/// Re-runs every committed invocation in-process and compares the output
/// byte-for-byte against the expected files. Any drift is a domain error
/// naming the stale cases.
fn corpus_verify() -> Result<Rendered, CliError> {
    let dir = corpus_dir();
    let cases_path = dir.join("cases.json");
    let text = fs::read_to_string(&cases_path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", cases_path.display())))?;
    let cases: Vec<Case> = decode("corpus case list", &text)?;
    let dir_str = dir.to_string_lossy();

    let mut bad: Vec<String> = Vec::new();
    for case in &cases {
        if case.args.first().map(String::as_str) == Some("corpus") {
            return Err(CliError::Domain(format!(
                "case {:?} recurses into the corpus",
                case.name
            )));
        }
        let argv = std::iter::once("rankforge".to_string())
            .chain(case.args.iter().map(|a| a.replace("$CORPUS", &dir_str)));
        let expected_path = dir.join("expected").join(&case.expected);
        let expected = fs::read_to_string(&expected_path).map_err(|e| {
            CliError::Domain(format!("cannot read {}: {e}", expected_path.display()))
        })?;
        match run_from(argv) {
            Ok(out) if format!("{out}\n") == expected => {}
            Ok(_) => bad.push(format!("{} (expected/{})", case.name, case.expected)),
            Err(e) => bad.push(format!("{} (failed: {})", case.name, e.message())),
        }
    }
    if bad.is_empty() {
        Ok(scalar(format!("corpus ok: {} case(s)", cases.len())))
    } else {
        Err(CliError::Domain(format!(
            "corpus drift in {} of {} case(s): {}",
            bad.len(),
            cases.len(),
            bad.join(", ")
        )))
    }
}
