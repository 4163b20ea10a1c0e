use std::path::PathBuf;
use std::process::{Command, Output};

const REGISTRY: [&str; 12] = [
    "Thm-1.2", "Thm-2.1", "Cor-2.2", "Cor-2.3", "Prop-2.4", "Thm-3.1", "Thm-4.1", "Thm-5.1", "Def-5.2", "Prop-5.3",
    "Prop-6.3", "Thm-6.4",
];

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logsurf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn query(question: &str, file: &str, args: &[&str]) -> (i32, String) {
    let path = fixture(file);
    let mut all = vec!["query", question, path.as_str()];
    all.extend_from_slice(args);
    let o = run(&all);
    (o.status.code().unwrap(), stdout(&o))
}

/// Exactly one tag from the registry.
fn assert_tagged(line: &str) {
    let tags: Vec<&str> = REGISTRY.iter().copied().filter(|t| line.contains(&format!("[{t}]"))).collect();
    assert_eq!(tags.len(), 1, "{line}");
}

#[test]
fn validate_exit_codes() {
    let o = run(&["validate", &fixture("p2.surface")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ok: rank 1, 1 curves\n");

    let o = run(&["validate", &fixture("asymmetric.surface")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l == "gram not symmetric (1,2)"));

    let o = run(&["validate", &fixture("garbage.surface")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column"));

    assert_eq!(run(&["validate", "/nonexistent.surface"]).status.code(), Some(2));
}

#[test]
fn every_valid_fixture_validates() {
    for name in [
        "p2", "f1", "f2", "p1xp1", "cxc_p5", "cxc_char0", "rational_elliptic_i3", "p2_cubic_boundary", "p2_a1",
        "gt_a1", "gt_elliptic",
    ] {
        let o = run(&["validate", &fixture(&format!("{name}.surface"))]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
    }
}

#[test]
fn mmp_outcomes_and_reports() {
    let dir = std::env::temp_dir().join(format!("logsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        ("f1", "MoriFiberSpaceOverPoint after 1 step "),
        ("p1xp1", "MoriFiberSpaceOverCurve after 0 steps"),
        ("p2_cubic_boundary", "MinimalModel after 0 steps"),
    ];
    for (name, expect) in cases {
        let out = dir.join(format!("{name}.report"));
        let o = run(&["mmp", &fixture(&format!("{name}.surface")), "--trace", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        assert!(text.contains(expect), "{name}: {text}");
        text.lines().for_each(assert_tagged);
        let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        for c in report["citations"].as_array().unwrap() {
            assert!(REGISTRY.contains(&c["tag"].as_str().unwrap()), "{name}: {c}");
        }
    }
    let o = run(&["mmp", &fixture("p2_cubic_boundary.surface"), "--trace", dir.join("k.report").to_str().unwrap()]);
    assert!(stdout(&o).contains("kappa = 0 [Thm-5.1]"));

    // Without --trace the report goes to stdout, byte-identical across runs.
    let a = run(&["mmp", &fixture("rational_elliptic_i3.surface"), "--mode", "b", "--strict-extremal"]);
    let b = run(&["mmp", &fixture("rational_elliptic_i3.surface"), "--mode", "b", "--strict-extremal"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn query_examples() {
    let (code, out) = query("semiample", "cxc_p5.surface", &["2,0,1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("SemiAmple [Thm-2.1]"), "{out}");
    assert!(out.contains("witness contracts {δ}"));

    let (_, out) = query("semiample", "cxc_char0.surface", &["2,0,1"]);
    assert!(out.starts_with("Undecidable [Prop-2.4]") && out.contains("Prop 2.4"), "{out}");

    assert_eq!(query("eh", "cxc_p5.surface", &["2,0,1"]).1, "δ [Thm-2.1]\n");

    let (_, out) = query("sing", "cusp.cluster", &[]);
    let first = out.lines().next().unwrap();
    assert!(first.starts_with("LC (cusp), a = (-1,-1,-1), not numerically-dlt(approx)"), "{first}");
    out.lines().for_each(assert_tagged);

    let (_, out) = query("sing", "cone_over_cubic.cluster", &[]);
    assert!(out.contains("rational: no"), "{out}");
    let (_, out) = query("sing", "p2_a1.surface", &["c"]);
    assert!(out.starts_with("Canonical (A1), a = (0)"), "{out}");

    assert_eq!(query("nef", "f1.surface", &["2,-1"]).1, "nef [Thm-1.2]\n");
    assert!(query("nef", "f1.surface", &["0,1"]).1.starts_with("not nef"));
    assert!(query("ample", "p2.surface", &["1"]).1.starts_with("ample: d² = 1"));
    assert_eq!(query("big", "f1.surface", &["1,-1"]).1, "not big [Thm-1.2]\n");
    assert_eq!(query("pseff", "p2.surface", &["-3"]).1, "not pseudo-effective [Thm-1.2]\n");
    assert_eq!(query("zariski", "f1.surface", &["1,2"]).1, "P = (1, 0), N = 2·e [Thm-1.2]\n");
    assert_eq!(query("zariski", "f1.surface", &["1/2,0"]).1, "P = (1/2, 0), N = 0 [Thm-1.2]\n");
    let (_, out) = query("kappa", "rational_elliptic_i3.surface", &["3,-1,-1,-1,-1,-1,-1,-1,-1,-1"]);
    assert!(out.starts_with("kappa = 1") && out.contains("I0smooth"), "{out}");
}

#[test]
fn every_query_line_is_tagged() {
    for q in ["nef", "ample", "big", "pseff", "eh", "zariski", "semiample", "kappa"] {
        for (file, class) in [("f1.surface", "2,-1"), ("cxc_p5.surface", "2,0,1"), ("gt_a1.surface", "1,0")] {
            let (code, out) = query(q, file, &[class]);
            if code == 0 {
                out.lines().for_each(assert_tagged);
            }
        }
    }
}

#[test]
fn malformed_classes_exit_2() {
    assert_eq!(query("nef", "f1.surface", &["1,x"]).0, 2);
    assert_eq!(query("nef", "f1.surface", &["1"]).0, 2);
    assert_eq!(query("nef", "f1.surface", &["0.5,1"]).0, 2);
    assert_eq!(query("nef", "f1.surface", &[]).0, 2);
    assert_eq!(run(&["query", "colour", &fixture("f1.surface"), "1,0"]).status.code(), Some(2));
}

#[test]
fn dot_graphs() {
    let o = run(&["dot", &fixture("rational_elliptic_i3.surface"), "y1", "y2", "y3"]);
    let text = stdout(&o);
    assert!(text.starts_with("graph dual {"));
    assert_eq!(text.matches(" -- ").count(), 3);
    assert!(text.contains("\"y1\" [label=\"y1 [-2, 0]\"];"));

    let text = stdout(&run(&["dot", &fixture("a2.cluster")]));
    assert_eq!(text.matches(" -- ").count(), 1);
    assert_eq!(text.matches("[label=\"E").count(), 2);

    let text = stdout(&run(&["dot", &fixture("p2.surface")]));
    assert_eq!((text.matches("label=").count(), text.matches(" -- ").count()), (1, 0));

    assert_ne!(run(&["dot", &fixture("p2.surface"), "nope"]).status.code(), Some(0));
}
