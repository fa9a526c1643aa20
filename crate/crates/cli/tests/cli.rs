use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn hyperlim(args: &[&std::ffi::OsStr]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlim")).args(args).output().unwrap()
}

macro_rules! run {
    ($($a:expr),* $(,)?) => {
        hyperlim(&[$(std::ffi::OsStr::new(&$a)),*])
    };
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hom_examples() {
    assert_eq!(stdout(&run!("hom", fixture("k2.hg"), fixture("triangle.hg"))), "hom=6 t=2/3\n");
    assert_eq!(stdout(&run!("hom", fixture("edgeless.hg"), fixture("triangle.hg"))), "hom=9 t=1\n");
    let mismatch = run!("hom", fixture("triple.hg"), fixture("triangle.hg"));
    assert_eq!(mismatch.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("arity"));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hg");
    std::fs::write(&bad, "HG 2 3 1\n0 3\n").unwrap();
    let o = run!("hom", fixture("k2.hg"), bad);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(run!("hom", fixture("k2.hg"), dir.path().join("missing.hg")).status.code(), Some(2));
}

#[test]
fn density_exact_and_mc() {
    assert_eq!(
        stdout(&run!("density", fixture("triangle.hg"), fixture("const_half_2.hgon"))),
        "0.12500000000000000\n"
    );
    let w = fixture("w_pairs.hgon");
    let mc = || run!("density", fixture("two_triples.hg"), w, "--mode", "mc", "--samples", "40000", "--seed", "17");
    let (a, b) = (mc(), mc());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let estimate: f64 = stdout(&a).trim().parse().unwrap();
    let err = String::from_utf8(a.stderr).unwrap();
    let se: f64 = err
        .split_whitespace()
        .find_map(|f| f.strip_prefix("standard_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((estimate - 0.078125).abs() <= 4.0 * se);
}

#[test]
fn density_budget_exit_code() {
    let o = run!("density", fixture("tetrahedron.hg"), fixture("w_pairs.hgon"), "--budget", "10");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sample_constant_and_latents() {
    let full = stdout(&run!("sample", fixture("const_one_3.hgon"), "--n", "6"));
    assert!(full.starts_with("HG 3 6 20\n"));
    let none = stdout(&run!("sample", fixture("const_zero_3.hgon"), "--n", "6"));
    assert_eq!(none, "HG 3 6 0\n");

    let dir = tempfile::tempdir().unwrap();
    let lat = dir.path().join("s.lat");
    let hg = dir.path().join("s.hg");
    stdout(&run!("sample", fixture("w_pairs.hgon"), "--n", "10", "--seed", "4", "--out", hg, "--latents", lat));
    let lat_text = std::fs::read_to_string(&lat).unwrap();
    let parsed = hyperlim::LatentSample::parse(&lat_text).unwrap();
    assert_eq!(parsed.to_lat_string(), lat_text);
    let h = hyperlim::UniformHypergraph::parse(&std::fs::read_to_string(&hg).unwrap()).unwrap();
    assert_eq!(parsed.hypergraph(), &h);
}

#[test]
fn cells_csv() {
    let dir = tempfile::tempdir().unwrap();
    let p = hyperlim::regularity::random_hyperpartition(2, 3, 2, 1).unwrap();
    let path = dir.path().join("p.hp");
    std::fs::write(&path, p.to_hp_string()).unwrap();
    let out = stdout(&run!("cells", fixture("triangle.hg"), path));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("profile,size,edges,density"));
    let sizes: u64 = lines.map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(sizes, 3);
}

#[test]
fn regularity_report() {
    let out = stdout(&run!("regularity", fixture("triangle.hg"), "--eps", "0.1", "--exhaustive"));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("mode,r,tested,admitted,max_deviation,epsilon,regular"));
    // the complete graph has density 1 in every cylinder
    assert!(lines.next().unwrap().ends_with(",0,0.10000000000000001,true"));
}

#[test]
fn removal_rows() {
    let out = stdout(&run!("removal", fixture("k2.hg"), fixture("triangle.hg")));
    assert_eq!(
        out,
        "instance,edges,images,method,removed,fraction,residual,verified\ntriangle,3,3,exact,3,1,0,true\n"
    );
    let one = stdout(&run!("removal", fixture("triple.hg"), fixture("triple.hg"), "--mode", "greedy", "--instance", "self"));
    assert!(one.ends_with("self,1,1,greedy,1,1,0,true\n"));
    let dir = tempfile::tempdir().unwrap();
    let spread = dir.path().join("spread.hg");
    std::fs::write(&spread, "HG 3 6 2\n0 1 2\n3 4 5\n").unwrap();
    assert!(stdout(&run!("removal", fixture("tetrahedron.hg"), spread)).ends_with(",0,0,true\n"));
    let truncated = run!("removal", fixture("k2.hg"), fixture("triangle.hg"), "--cap", "1");
    assert_eq!(truncated.status.code(), Some(4));
}

#[test]
fn convergence_with_full_w_has_no_error() {
    let out = stdout(&run!(
        "experiment",
        "convergence",
        fixture("const_one_3.hgon"),
        fixture("triple.hg"),
        "--ns",
        "5,7",
        "--reps",
        "2"
    ));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("K,n,rep,t_H,t_W,abs_diff"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().any(|r| r.starts_with("triple,7,mean,")));
    // only injective maps hit the complete hypergraph, so t_H = n(n-1)(n-2)/n^3
    assert!(rows[0].starts_with("triple,5,0,0.47999999999999998,1.0000000000000000,0.52000000000000002"));
}

#[test]
fn regularity_experiment_output() {
    let out = stdout(&run!("experiment", "regularity", fixture("const_one_3.hgon"), "--n", "8", "--M", "10"));
    assert!(out.starts_with("metric,r,class,value\nequitability,1,,0\n"));
    assert!(out.contains("cell_error,,,0\n"));
    let pure = stdout(&run!("experiment", "regularity", fixture("w_pairs.hgon"), "--n", "12", "--M", "10", "--seed", "3"));
    assert!(pure.contains("impure_cells,,,0\n"));
    assert!(pure.contains("cell_error,,,0\n"));
}

#[test]
fn bad_thread_setting_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_hyperlim"))
        .env("HYPERLIM_THREADS", "zero")
        .args(["hom"])
        .arg(fixture("k2.hg"))
        .arg(fixture("triangle.hg"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
