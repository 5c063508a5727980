//! The dispatch table, the parser tree, and the core operation surface must
//! agree: every leaf subcommand is in the table, and every public operation
//! of the core modules is reachable from some subcommand.

use std::collections::BTreeSet;

/// The operation surface of the core crate, one entry per public function
/// that computes something (constructors and accessors excluded).
const MODULE_OPS: &[&str] = &[
    "ordinal::parse",
    "ordinal::compare",
    "ordinal::add",
    "ordinal::mul",
    "ordinal::nat_add",
    "ordinal::omega_pow",
    "ordinal::analyze",
    "zline::compare_backlex",
    "zline::e_rel",
    "zline::qf_type",
    "zline::qf_equal",
    "zline::synth_automorphism",
    "zline::h_rel",
    "zline::hausdorff_rank",
    "zline::drk_upper",
    "zline::density_witness",
    "grouprank::eval_rank",
    "grouprank::tower",
    "grouprank::classify",
    "grouprank::validate",
    "gamerank::grk",
    "gamerank::winner",
    "gamerank::extract_strategy",
    "gamerank::le_game",
    "gamerank::lt_game",
    "gamerank::cli_game",
    "gamerank::cb_rank",
    "fusion::meet",
    "fusion::in_f",
    "fusion::fuse_side",
    "fusion::fuse_value",
    "fusion::nhat",
    "fusion::extend_requirement",
    "fusion::glue_system",
    "fusion::star_check",
    "oracle::aut_group",
    "oracle::drk_bruteforce",
    "oracle::rk_bruteforce",
    "oracle::rkstar_bruteforce",
    "oracle::squiggle_bruteforce",
    "oracle::sim_bruteforce",
];

#[test]
fn every_module_operation_is_reachable_from_a_subcommand() {
    let covered: BTreeSet<&str> = rankforge_cli::DISPATCH
        .iter()
        .flat_map(|(_, ops)| ops.iter().copied())
        .collect();
    for op in MODULE_OPS {
        assert!(covered.contains(op), "no subcommand reaches {op}");
    }
    // Nothing in the table points at an operation outside the surface.
    let surface: BTreeSet<&str> = MODULE_OPS.iter().copied().collect();
    for (path, ops) in rankforge_cli::DISPATCH {
        for op in *ops {
            assert!(
                surface.contains(op) || *op == "cli::corpus_verify",
                "{path} claims unknown operation {op}"
            );
        }
    }
}

#[test]
fn dispatch_table_matches_the_parser_tree() {
    let cmd = rankforge_cli::command();
    let mut leaves: BTreeSet<String> = BTreeSet::new();
    for group in cmd.get_subcommands() {
        if group.get_name() == "help" {
            continue;
        }
        let mut any = false;
        for leaf in group.get_subcommands() {
            if leaf.get_name() == "help" {
                continue;
            }
            leaves.insert(format!("{} {}", group.get_name(), leaf.get_name()));
            any = true;
        }
        assert!(any, "group {} has no leaf subcommands", group.get_name());
    }
    let table: BTreeSet<String> = rankforge_cli::DISPATCH
        .iter()
        .map(|(path, _)| path.to_string())
        .collect();
    assert_eq!(leaves, table, "parser tree and dispatch table diverge");
}
