//! Golden outputs of the CLI. Set `UPDATE_GOLDEN=1` to rewrite them.

mod common;

use std::fs;

use common::{golden_dir, run_cli, GOLDEN_CASES};

#[test]
fn outputs_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut stale = Vec::new();
    for (stem, args) in GOLDEN_CASES {
        let out = run_cli(args, 1);
        let path = golden_dir().join(format!("{stem}.txt"));
        if update {
            fs::write(&path, &out).unwrap();
        } else if fs::read_to_string(&path).ok().as_deref() != Some(out.as_str()) {
            stale.push(*stem);
        }
    }
    assert!(stale.is_empty(), "outputs differ from golden files: {stale:?}");
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    for (stem, args) in GOLDEN_CASES {
        let one = run_cli(args, 1);
        assert_eq!(one, run_cli(args, 8), "{stem}");
        assert_eq!(one, run_cli(args, 3), "{stem}");
    }
}

#[test]
fn quotient_modes_agree() {
    let a = run_cli("quotient @/cycle8.json --projection @/cycle8-fold.json --mode limit", 1);
    let b = run_cli("quotient @/cycle8.json --projection @/cycle8-fold.json --mode pstop", 1);
    assert_eq!(a, b);
}

#[test]
fn bad_input_exits_with_3() {
    let out = run_cli("validate @/does-not-exist.json", 1);
    assert!(out.ends_with("exit: 3\n"), "{out}");
    let out = run_cli("frobnicate", 1);
    assert!(out.ends_with("exit: 3\n"), "{out}");
}
