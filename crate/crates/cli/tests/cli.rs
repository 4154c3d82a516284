use std::path::PathBuf;
use std::process::Command;

use mobius_cli::{run, Outcome, EXIT_INPUT};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn mobius(args: &[&str]) -> Outcome {
    run(std::iter::once("mobius").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let out = mobius(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}

#[test]
fn dirichlet_table() {
    let out = ok(&["dirichlet", "--n", "30"]);
    assert!(out.lines().any(|l| l == "30  mu=-1  phi=8"), "{out}");
    assert_eq!(out.lines().count(), 31);
    let tsv = ok(&["dirichlet", "--n", "12", "--format", "tsv"]);
    assert_eq!(tsv.lines().next(), Some("n\tmu\tphi"));
    assert!(tsv.lines().any(|l| l == "12\t0\t4"));
    let checked = ok(&["dirichlet", "--n", "50", "--check"]);
    assert_eq!(
        checked.lines().last(),
        Some("check: mu * zeta = e for n <= 50")
    );
}

#[test]
fn poset_tables() {
    let chain = data("chain3.poset");
    let one = ok(&["poset", &chain, "--interval", "0", "2"]);
    assert_eq!(
        rows(&one),
        vec![vec!["lo", "hi", "mu"], vec!["0", "2", "0"]]
    );
    let all = ok(&["poset", &data("diamond.poset"), "--format", "tsv"]);
    assert!(all.lines().any(|l| l == "a\td\t1"));
    assert!(all.lines().any(|l| l == "a\tb\t-1"));
    assert_eq!(all.lines().count(), 10);
}

#[test]
fn bphz_table() {
    let out = ok(&[
        "renorm",
        "bphz",
        "--char",
        &data("simple.chr"),
        "--max-degree",
        "2",
    ]);
    let table = rows(&out);
    assert_eq!(
        table[0],
        vec!["forest", "phi", "phi_minus", "phi_plus", "value"]
    );
    let ladder = table.iter().find(|r| r[0] == "[[]]").expect("ladder row");
    assert_eq!(ladder[1..], ["e^-2", "0", "0", "0"]);

    let shifted = ok(&[
        "renorm",
        "bphz",
        "--char",
        &data("shifted.chr"),
        "--max-degree",
        "2",
        "--format",
        "tsv",
    ]);
    assert!(
        shifted.lines().any(|l| l == "[]\te^-1 + 1\t-e^-1\t1\t1"),
        "{shifted}"
    );
    assert!(
        shifted.lines().any(|l| l == "[[]]\te^-2\te^-1\t0\t0"),
        "{shifted}"
    );
}

#[test]
fn counterterm_methods_print_the_same_table() {
    let char_file = data("shifted.chr");
    let base = [
        "renorm",
        "bphz",
        "--char",
        char_file.as_str(),
        "--max-degree",
        "2",
    ];
    let bog = ok(&base);
    let mut atk_args = base.to_vec();
    atk_args.push("--atkinson");
    assert_eq!(bog, ok(&atk_args));
}

#[test]
fn evenodd_prints_the_same_values() {
    let poset = format!("poset:{}", data("diamond.poset"));
    let phi = format!("file:{}", data("nat.phi"));
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "abstract",
            "--coalgebra",
            "nat",
            "--phi",
            "zeta",
            "--max-degree",
            "8",
        ],
        vec![
            "abstract",
            "--coalgebra",
            "nat",
            "--phi",
            &phi,
            "--max-degree",
            "8",
        ],
        vec![
            "abstract",
            "--coalgebra",
            "divisors",
            "--phi",
            "zeta",
            "--n",
            "360",
        ],
        vec!["abstract", "--coalgebra", &poset, "--phi", "zeta"],
        vec![
            "abstract",
            "--coalgebra",
            "forest",
            "--phi",
            "zeta",
            "--max-degree",
            "4",
        ],
    ];
    for args in cases {
        let rec = ok(&args);
        let mut eo_args = args.clone();
        eo_args.push("--evenodd");
        assert_eq!(rec, ok(&eo_args), "{args:?}");
        assert!(rec.lines().count() > 1);
    }
}

#[test]
fn abstract_values() {
    let out = ok(&[
        "abstract",
        "--coalgebra",
        "divisors",
        "--phi",
        "zeta",
        "--n",
        "30",
        "--format",
        "tsv",
    ]);
    assert!(out.lines().any(|l| l == "30\t3\t-1"), "{out}");
    assert!(out.lines().any(|l| l == "12\t3\t0"));
    let out = ok(&[
        "abstract",
        "--coalgebra",
        "nat",
        "--phi",
        "zeta",
        "--max-degree",
        "3",
    ]);
    let psi: Vec<String> = rows(&out)[1..].iter().map(|r| r[2].clone()).collect();
    assert_eq!(psi, ["1", "-1", "0", "0"]);
}

#[test]
fn antipode_table() {
    let out = ok(&["antipode", "--max-degree", "2", "--format", "tsv"]);
    assert!(out.lines().any(|l| l == "[]\t-1*[]"));
    assert!(out.lines().any(|l| l == "[[]]\t-1*[[]] + 1*[][]"));
}

#[test]
fn output_is_deterministic() {
    let chr = data("shifted.chr");
    for args in [
        vec![
            "renorm",
            "bphz",
            "--char",
            chr.as_str(),
            "--max-degree",
            "2",
        ],
        vec!["antipode", "--max-degree", "4"],
        vec!["dirichlet", "--n", "100"],
    ] {
        assert_eq!(ok(&args), ok(&args));
    }
}

#[test]
fn input_errors() {
    for args in [
        vec!["bogus"],
        vec!["dirichlet"],
        vec!["dirichlet", "--n", "0"],
        vec!["dirichlet", "--n", "5", "--unknown"],
        vec!["poset", "no/such/file"],
        vec!["abstract", "--coalgebra", "reals", "--phi", "zeta"],
    ] {
        let out = mobius(&args);
        assert_eq!(out.code, EXIT_INPUT, "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    let chain = data("chain3.poset");
    let out = mobius(&["poset", &chain, "--interval", "2", "0"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = mobius(&["poset", &chain, "--interval", "0", "9"]);
    assert!(out.stderr.contains("unknown element 9"));
    let out = mobius(&[
        "renorm",
        "bphz",
        "--char",
        &data("partial.chr"),
        "--max-degree",
        "2",
    ]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("[[]]"), "{}", out.stderr);
}

#[test]
fn help_goes_to_stdout() {
    let out = mobius(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("dirichlet"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mobius");
    let out = Command::new(bin)
        .args(["dirichlet", "--n", "30"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("30  mu=-1  phi=8"));
    let out = Command::new(bin)
        .args(["poset", "missing.poset"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
