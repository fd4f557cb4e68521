use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const S2: &str = r#"{"name":"S2","points":["a","b"],"opens":[[],["a"],["a","b"]]}"#;
const D2: &str = r#"{"name":"D2","points":["0","1"],"opens":[[],["0"],["1"],["0","1"]]}"#;
const D3: &str = r#"{"name":"D3","points":["x","y","z"],"opens":[[],["x"],["y"],["z"],["x","y"],["x","z"],["y","z"],["x","y","z"]]}"#;

fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("S2.json", S2),
        ("D2.json", D2),
        ("D3.json", D3),
        ("f.json", r#"{"domain":"S2","codomain":"D2","map":{"a":"0","b":"1"}}"#),
        ("g.json", r#"{"domain":"D2","codomain":"S2","map":{"0":"a","1":"b"}}"#),
        ("h.json", r#"{"domain":"D3","codomain":"D3","map":{"x":"y","y":"z","z":"x"}}"#),
        ("F.json", r#"{"domain":"S2","codomain":"D2","map":{"a":["0"],"b":["0","1"]}}"#),
        ("G.json", r#"{"domain":"S2","codomain":"D2","map":{"a":["0"],"b":["1"]}}"#),
        ("dangling.json", r#"{"domain":"S2","codomain":"Nowhere","map":{"a":"0","b":"0"}}"#),
        ("bad.json", r#"{"name":"B","points":["a","b","c"],"opens":[[],["a"],["b"],["a","b","c"]]}"#),
    ];
    for (name, text) in files {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn msplit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msplit"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn evsets_record_for_the_sierpinski_fixture() {
    let d = fixtures();
    let o = msplit(d.path(), &["evsets", "--fn", "f.json", "--point", "b", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"point\":\"b\",\"sets\":[[\"0\",\"1\"]],\"minimal\":[[\"0\",\"1\"]],\"continuous_at\":false,\"split_at\":true}\n"
    );
    let o = msplit(d.path(), &["evsets", "--fn", "g.json", "--point", "0", "--format", "record"]);
    let r = &records(&o)[0];
    assert_eq!(r["sets"], serde_json::json!([["a"], ["b"], ["a", "b"]]));
    assert_eq!(r["minimal"], serde_json::json!([["a"], ["b"]]));
}

#[test]
fn star_needs_a_hausdorff_codomain() {
    let d = fixtures();
    let o = msplit(d.path(), &["star", "--fn", "g.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not Hausdorff"));
    let o = msplit(d.path(), &["star", "--fn", "f.json", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["star"]["b"], serde_json::json!(["0", "1"]));
}

#[test]
fn input_errors_exit_with_two() {
    let d = fixtures();
    let o = msplit(d.path(), &["validate", "--space", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("{a}") && err.contains("{b}"), "{err}");

    let o = msplit(d.path(), &["msc", "--fn", "dangling.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown space `Nowhere`"));

    assert_eq!(msplit(d.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(msplit(d.path(), &["validate", "--space", "missing.json"]).status.code(), Some(2));
    assert_eq!(msplit(d.path(), &["evsets", "--fn", "S2.json"]).status.code(), Some(2));
    assert_eq!(msplit(d.path(), &["evsets", "--fn", "f.json", "--point", "q"]).status.code(), Some(2));
}

#[test]
fn verdicts_map_to_exit_codes() {
    let d = fixtures();
    let o = msplit(d.path(), &["usc", "--multimap", "G.json", "--format", "record"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(records(&o)[0]["witness"]["point"], "b");

    let o = msplit(d.path(), &["usco", "--multimap", "F.json", "--minimal", "--format", "record"]);
    assert_eq!(o.status.code(), Some(1));
    let r = &records(&o)[0];
    assert_eq!(r["usco"], true);
    assert_eq!(r["minimal"], false);

    let o = msplit(d.path(), &["prems", "--multimap", "F.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = msplit(d.path(), &["msc", "--fn", "f.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("continuous: false"));
}

#[test]
fn separation_closure_and_graph() {
    let d = fixtures();
    let o = msplit(d.path(), &["separation", "--space", "S2.json", "--format", "record"]);
    assert_eq!(stdout(&o), "{\"name\":\"S2\",\"t0\":true,\"hausdorff\":false,\"regular\":false}\n");
    let o = msplit(d.path(), &["closure", "--space", "S2.json", "--set", "a", "--format", "record"]);
    let r = &records(&o)[0];
    assert_eq!(r["closure"], serde_json::json!(["a", "b"]));
    assert_eq!(r["boundary"], serde_json::json!(["b"]));
    let o = msplit(d.path(), &["graphclosure", "--fn", "f.json", "--format", "record"]);
    let r = &records(&o)[0];
    assert_eq!(r["closure"], serde_json::json!(["(a,0)", "(b,0)", "(b,1)"]));
    assert_eq!(r["closure_is_star_graph"], true);
}

#[test]
fn splithomeo_search_and_check() {
    let d = fixtures();
    let o = msplit(d.path(), &["splithomeo", "--spaces", "S2.json", "D2.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = msplit(d.path(), &["splithomeo", "--spaces", "S2.json", "D3.json"]);
    assert_eq!(o.status.code(), Some(1));
    let o = msplit(d.path(), &["splithomeo", "--fn", "h.json"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn reglue_files_round_trip() {
    let d = fixtures();
    let o = msplit(d.path(), &["reglue-build", "--fn", "h.json", "--out", "out", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(records(&o)[0]["derived"], serde_json::json!({"x": "y", "y": "z", "z": "x"}));

    let o = msplit(d.path(), &["reglue-verify", "--reglue", "out/h_reglue.json", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["valid"], true);

    let o = msplit(
        d.path(),
        &["reglue-compose", "--reglue", "out/h_reglue.json", "--reglue", "out/h_reglue.json", "--format", "record"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0]["derived"], serde_json::json!({"x": "z", "y": "x", "z": "y"}));

    let o = msplit(d.path(), &["reglue-compose", "--reglue", "out/h_reglue.json", "--reverse", "--format", "record"]);
    assert_eq!(records(&o)[0]["derived"], serde_json::json!({"x": "z", "y": "x", "z": "y"}));

    // Not a split homeomorphism of discrete spaces.
    let o = msplit(d.path(), &["reglue-build", "--fn", "f.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gallery_commands() {
    let d = fixtures();
    let o = msplit(d.path(), &["gallery", "weird", "--n", "4", "--depth", "20", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = records(&o);
    assert_eq!(rs.len(), 5);
    assert_eq!(rs[4]["star_size"], 5);
    let o = msplit(d.path(), &["gallery", "divergence", "--example", "one_over_n", "--depth", "50", "--scalar", "big"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("consistent at depth"));
    assert_eq!(msplit(d.path(), &["gallery", "divergence", "--example", "nope"]).status.code(), Some(2));
    assert_eq!(msplit(d.path(), &["gallery", "circle", "--n", "6"]).status.code(), Some(0));
    assert_eq!(msplit(d.path(), &["gallery", "circle", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn suite_runs_and_replays() {
    let d = fixtures();
    let o = msplit(d.path(), &["suite", "--exhaustive-max", "3", "--trials", "100", "--format", "record"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(records(&o).iter().all(|r| r["verdict"] == "pass"));

    let args = ["suite", "run", "--property", "P_ev_agree", "--trials", "0", "--check", "drop-cover", "--format", "record"];
    let o = msplit(d.path(), &args);
    assert_eq!(o.status.code(), Some(1));
    // Identical inputs give identical records.
    assert_eq!(stdout(&o), stdout(&msplit(d.path(), &args)));

    let failure = records(&o)[0]["failures"][0].clone();
    std::fs::write(d.path().join("fail.json"), failure.to_string()).unwrap();
    let replay = |check: &str| {
        msplit(
            d.path(),
            &["suite", "replay", "--property", "P_ev_agree", "--record", "fail.json", "--check", check],
        )
        .status
        .code()
    };
    assert_eq!(replay("drop-cover"), Some(1));
    assert_eq!(replay("fast"), Some(0));

    assert_eq!(msplit(d.path(), &["suite", "run", "--property", "P_nope"]).status.code(), Some(2));
    assert_eq!(msplit(d.path(), &["suite", "--exhaustive-max", "9"]).status.code(), Some(2));
}
