//! End-to-end runs of the `natspec` binary.

use std::path::Path;
use std::process::{Command, Output};

use natspec::exactcore::{Rational, Spectrum};
use natspec::graphlab::random::{random_permutation, sample_rng};
use natspec::graphlab::{enumerate_graphs, graph6_emit, Graph};
use serde_json::Value;

const PETERSEN: &str = "IheA@GUAo";

fn natspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_natspec")).args(args).env_remove("NATSPEC_THREADS").output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = natspec(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    natspec(args).status.code().unwrap()
}

fn spectrum_of(report: &Value) -> Spectrum {
    serde_json::from_value(report["spectrum"].clone()).unwrap()
}

fn roots(rs: &[i64]) -> Spectrum {
    Spectrum::from_roots(&rs.iter().map(|&r| Rational::from_integer(r)).collect::<Vec<_>>())
}

fn write_corpus(path: &Path, graphs: &[Graph]) {
    let text: String = graphs.iter().map(|g| graph6_emit(g) + "\n").collect();
    std::fs::write(path, text).unwrap();
}

#[test]
fn analyze_examples() {
    assert_eq!(graph6_emit(&Graph::petersen()), PETERSEN);
    let k2 = ok_json(&["analyze", "A_"]);
    assert_eq!(k2["dim"], 2);
    assert_eq!(k2["full"], false);
    assert_eq!(k2["reconstruct"], "failed |V_a|=1");
    let p = ok_json(&["analyze", PETERSEN]);
    assert_eq!(p["dim"], 3);
    assert_eq!(p["diam"], 2);
    assert_eq!(p["lower_bound_tight"], true);
    assert_eq!(p["srg"]["k"], 3);
    assert_eq!(p["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(code(&["analyze", "not graph6 ~~"]), 2);
}

#[test]
fn spectrum_examples() {
    assert_eq!(spectrum_of(&ok_json(&["spectrum", "A_", "--poly", "x"])), roots(&[1, -1]));
    assert_eq!(spectrum_of(&ok_json(&["spectrum", "A_", "--poly", "(x*x).I - x"])), roots(&[0, 2]));
    for g in [Graph::cycle(5), Graph::petersen(), Graph::empty(3)] {
        let n = g.n() as i64;
        let mut want = vec![0; g.n() - 1];
        want.push(n);
        assert_eq!(spectrum_of(&ok_json(&["spectrum", &graph6_emit(&g), "--poly", "J"])), roots(&want));
    }
    // graph errors and polynomial errors are told apart
    assert_eq!(code(&["spectrum", "A_", "--poly", "x +"]), 3);
    assert_eq!(code(&["spectrum", "A_", "--poly", "y"]), 3);
    assert_eq!(code(&["spectrum", "A_", "--poly", "2"]), 3);
    assert_eq!(code(&["spectrum", "~", "--poly", "x"]), 2);
}

#[test]
fn reconstruct_exit_codes() {
    let out = natspec(&["reconstruct", PETERSEN]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["diagonal_idempotents"], 1);
    let full = enumerate_graphs(6).unwrap().into_iter().find(|g| natspec::closure::is_full(&g.adjacency())).unwrap();
    let ok = ok_json(&["reconstruct", &graph6_emit(&full)]);
    assert_eq!(ok["mismatches"], 0);
}

#[test]
fn ds_build_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("four.g6");
    let bundle = dir.path().join("four.json");
    let family = enumerate_graphs(4).unwrap();
    write_corpus(&corpus, &family);
    let built = ok_json(&["ds-build", "--corpus", corpus.to_str().unwrap(), "--out", bundle.to_str().unwrap()]);
    assert_eq!(built["members"], 11);

    let g = &family[7];
    let h = g.permuted(&random_permutation(4, &mut sample_rng(3, 0)));
    let (g6, h6) = (graph6_emit(g), graph6_emit(&h));
    let check = ok_json(&["ds-check", bundle.to_str().unwrap(), &g6, &h6, "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(check["verdict"], "equal_spectrum");
    assert_eq!(check["isomorphic"], true);
    let other = graph6_emit(&family[3]);
    let differ = ok_json(&["ds-check", bundle.to_str().unwrap(), &g6, &other]);
    assert_eq!(differ["verdict"], "different_spectrum");
    assert_eq!(differ["isomorphic"], false);

    // a bundle checked against a different corpus
    let corpus3 = dir.path().join("three.g6");
    write_corpus(&corpus3, &enumerate_graphs(3).unwrap());
    let out = natspec(&["ds-check", bundle.to_str().unwrap(), &g6, &h6, "--corpus", corpus3.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fingerprint"));

    // mixed sizes
    let mixed = dir.path().join("mixed.g6");
    write_corpus(&mixed, &[Graph::complete(2), Graph::complete(3)]);
    assert_eq!(code(&["ds-build", "--corpus", mixed.to_str().unwrap(), "--out", bundle.to_str().unwrap()]), 2);
    assert_eq!(code(&["ds-check", bundle.to_str().unwrap(), "A_", "A_"]), 2);
}

#[test]
fn experiments_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.json", "b.json"].iter().map(|f| dir.path().join(f)).collect();
    for (p, threads) in paths.iter().zip(["1", "3"]) {
        let args = ["experiment", "--mode", "certify_and_confirm", "--n", "16", "--trials", "50", "--seed", "7", "--threads", threads];
        let out = natspec(&[&args[..], &["--out", p.to_str().unwrap()]].concat());
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    let report: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["results"][0]["counterexamples"], 0);

    let bes = ok_json(&["experiment", "--mode", "bes_frequency", "--n", "64,256", "--trials", "5"]);
    assert_eq!(bes["results"].as_array().unwrap().len(), 2);
    assert_eq!(code(&["experiment", "--mode", "bes_frequency", "--n", "64", "--trials", "0"]), 2);
    assert_eq!(code(&["experiment", "--mode", "certify_and_confirm", "--n", "17"]), 2);
}
