//! The golden-transcript cases shared by the CLI tests and the acceptance run.

#![allow(dead_code)]

use std::process::Command;

/// Name of the golden file and the arguments passed to `xlab`.
pub const CASES: &[(&str, &[&str])] = &[
    ("eval_and", &["eval", "b1&b2", "11"]),
    ("eval_out_of_range", &["eval", "b3", "11"]),
    ("eval_syntax", &["eval", "b1&&", "11"]),
    ("eval_bad_pattern", &["eval", "b1", "1x"]),
    ("eval_missing_pattern", &["eval", "b1"]),
    ("canon_absorb", &["canon", "b2&b1|b1&!b2", "--width", "2"]),
    ("canon_tautology", &["canon", "b1|!b1"]),
    ("canon_xor", &["canon", "!(b1&b2|!b1&!b2)"]),
    ("canon_syntax", &["canon", "b1|(b2"]),
    ("canon_no_args", &["canon"]),
    ("tt_json", &["tt", "b1|!b2", "--width", "2"]),
    ("tt_table", &["tt", "b1|!b2", "--width", "2", "--format", "table"]),
    ("tt_too_narrow", &["tt", "b1|b3", "--width", "2"]),
    ("tt_bad_format", &["tt", "b1", "--format", "xml"]),
    ("suff_no_target", &["suff", "tests/data/and.jsonl"]),
    (
        "suff_minimal_subset",
        &["suff", "tests/data/and.jsonl", "--target", "b1&b2", "--class", "dnf:1", "--minimal-subset"],
    ),
    ("suff_witness_limit", &["suff", "tests/data/partial3.jsonl", "--witness-limit", "3"]),
    ("suff_list_class", &["suff", "tests/data/partial3.jsonl", "--class", "list:b2;b2&!b1;b1|b2|b3", "--target", "b2"]),
    ("suff_table", &["suff", "tests/data/partial3.jsonl", "--format", "table"]),
    ("suff_conflict", &["suff", "tests/data/conflict.jsonl"]),
    ("suff_missing_file", &["suff", "tests/data/absent.jsonl"]),
    ("suff_subset_without_target", &["suff", "tests/data/and.jsonl", "--minimal-subset"]),
    ("learn_given", &["learn", "tests/data/and.jsonl"]),
    ("learn_seeded", &["learn", "tests/data/partial3.jsonl", "--order", "seeded", "--seed", "4"]),
    ("learn_lex_table", &["learn", "tests/data/partial3.jsonl", "--order", "lex", "--format", "table"]),
    ("learn_conflict", &["learn", "tests/data/conflict.jsonl"]),
    ("learn_bad_order", &["learn", "tests/data/and.jsonl", "--order", "sideways"]),
    ("learn_dnf_class", &["learn", "tests/data/and.jsonl", "--class", "dnf:1", "--order", "lex"]),
    ("nn_and_seed7", &["nn-trace", "tests/data/and.jsonl", "--shape", "2,1", "--seed", "7"]),
    ("nn_frozen", &["nn-trace", "tests/data/and.jsonl", "--shape", "2,1", "--lr", "0", "--epochs", "5"]),
    ("nn_bad_shape", &["nn-trace", "tests/data/and.jsonl", "--shape", "2"]),
    ("nn_too_wide", &["nn-trace", "tests/data/and.jsonl", "--shape", "5,1"]),
    ("unknown_subcommand", &["frobnicate"]),
];

pub fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_xlab"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("spawn xlab");
    format!(
        "$ xlab {}\n{}--- stderr\n{}--- exit {}\n",
        args.join(" "),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1)
    )
}
