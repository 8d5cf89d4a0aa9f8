use mgr_core::certify::Certificate;
use mgr_core::designs::OocCode;
use mgr_core::search::Spectrum;
use mgr_core::{verify_mgr, Ruler};
use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn mgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgr")).args(args).env_remove("MGR_THREADS").env_remove("MGR_CACHE").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn search_21_5_finds_a_ruler() {
    let o = mgr(&["search", "--v", "21", "--k", "5", "--mode", "first"]);
    assert_eq!(code(&o), 0);
    let j = json(&o);
    assert_eq!(j["status"], "found");
    let r: Ruler = serde_json::from_value(j["witness"].clone()).unwrap();
    assert!(verify_mgr(&r).valid && r.v() == 21 && r.k() == 5);
    // field order of the ruler record is fixed
    assert!(stdout(&o).contains(r#"{"v":21,"k":5,"residues":["#));
}

#[test]
fn search_exit_codes() {
    assert_eq!(code(&mgr(&["search", "--v", "22", "--k", "5"])), 1);
    assert_eq!(code(&mgr(&["search", "--v", "120", "--k", "11", "--budget", "500"])), 4);
    let all = mgr(&["search", "--v", "13", "--k", "4", "--mode", "all"]);
    assert_eq!(code(&all), 0);
    assert_eq!(json(&all)["solutions"], 2);
    assert_eq!(code(&mgr(&["search", "--v", "5", "--k", "4"])), 1);
    assert_eq!(code(&mgr(&["search", "--v", "3", "--k", "4"])), 2);
}

#[test]
fn certify_94_10_is_counting2() {
    let o = mgr(&["certify", "mgr", "--v", "94", "--k", "10"]);
    assert_eq!(code(&o), 0);
    let j = json(&o);
    assert_eq!(j["verdict"], "nonexistent");
    assert_eq!(j["rule"], "counting2");
    let values: Vec<i64> = j["trace"]["candidates"].as_array().unwrap().iter().map(|c| c["value"].as_i64().unwrap()).collect();
    assert_eq!(values, vec![8, 12]);
    let c: Certificate = serde_json::from_value(j).unwrap();
    mgr_core::certify::validate_mgr(&c, 94, 10).unwrap();
    let text = mgr(&["certify", "mgr", "--v", "94", "--k", "10", "--trace", "--format", "text"]);
    assert!(stdout(&text).contains("counting2") && stdout(&text).contains("candidates"));
}

#[test]
fn certify_inconclusive_exits_3() {
    let o = mgr(&["certify", "mgr", "--v", "91", "--k", "10"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["verdict"], "inconclusive");
    assert_eq!(code(&mgr(&["certify", "mgr", "--v", "91", "--k", "2"])), 2);
}

const TABLE_3_5: &str = "v,k,status,residues,length
7,3,ruler,0 1 3,3
8,3,lemma-double,0 1 3,3
13,4,ruler,0 1 3 9,9
14,4,lemma-double,0 1 4 6,6
21,5,ruler,0 1 4 14 16,16
22,5,nonexistent,,
23,5,lemma-double,0 2 7 8 11,11
";

#[test]
fn table_reproduce_3_to_5() {
    let o = mgr(&["table", "reproduce", "--k", "3..5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), TABLE_3_5);
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    for rec in rd.records() {
        let rec = rec.unwrap();
        if &rec[2] == "ruler" || &rec[2] == "lemma-double" {
            let xs: Vec<u32> = rec[3].split(' ').map(|x| x.parse().unwrap()).collect();
            assert_eq!(xs.last().copied(), Some(rec[4].parse().unwrap()));
            if &rec[2] == "ruler" {
                let r = Ruler::new(rec[0].parse().unwrap(), xs).unwrap();
                assert!(verify_mgr(&r).valid);
            }
        }
    }
}

#[test]
fn table_is_byte_stable() {
    let a = mgr(&["table", "reproduce", "--k", "3..7"]);
    let b = mgr(&["table", "reproduce", "--k", "3..7"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = mgr(&["table", "reproduce", "--k", "3..7", "--threads", "3"]);
    let d = mgr(&["table", "reproduce", "--k", "3..7", "--threads", "3"]);
    assert_eq!(c.stdout, d.stdout);
    let j = mgr(&["table", "reproduce", "--k", "3..7", "--format", "json"]);
    let rows = json(&j);
    assert_eq!(rows.as_array().unwrap().len(), stdout(&a).lines().count() - 1);
}

#[test]
fn thread_count_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mgr"))
        .args(["search", "--v", "48", "--k", "7"])
        .env("MGR_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let base = mgr(&["search", "--v", "48", "--k", "7"]);
    assert_eq!(json(&o)["witness"], json(&base)["witness"]);
}

fn temp_json(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

#[test]
fn malformed_json_exits_2_with_position() {
    let f = temp_json("{\"v\": 7,\n \"k\": 3,\n \"residues\": [0, 1, }");
    let o = mgr(&["verify", "--file", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("line 3") && e.contains("column"), "{e}");
    let f = temp_json(r#"{"v":62,"lambda_a":1,"lambda_c":1,"blocks":[[0,1,3],[0,2"#);
    let o = mgr(&["ooc", "verify", "--file", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 1 column"));
    // well-formed but not a ruler
    let f = temp_json(r#"{"v":7,"k":3,"residues":[0,1,9]}"#);
    assert_eq!(code(&mgr(&["verify", "--file", f.path().to_str().unwrap()])), 2);
    assert_eq!(code(&mgr(&["verify", "--file", "/nonexistent/ruler.json"])), 2);
}

#[test]
fn verify_reports_validity() {
    let good = temp_json(r#"{"v":7,"k":3,"residues":[0,1,3]}"#);
    assert_eq!(code(&mgr(&["verify", "--file", good.path().to_str().unwrap()])), 0);
    let bad = temp_json(r#"{"v":14,"k":4,"residues":[0,1,3,7]}"#);
    let o = mgr(&["verify", "--file", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["report"]["witness"]["d"], 7);
}

#[test]
fn emitted_json_round_trips() {
    for args in [
        vec!["construct", "--method", "bose", "--q", "7"],
        vec!["construct", "--method", "ruzsa", "--p", "11"],
        vec!["construct", "--method", "singer", "--q", "4"],
        vec!["construct", "--method", "exist-any", "--k", "5", "--v", "80"],
        vec!["construct", "--method", "exist-small", "--k", "12", "--delete", "1"],
        vec!["min-length", "--k", "6"],
    ] {
        let o = mgr(&args);
        assert_eq!(code(&o), 0, "{args:?}");
        let j = json(&o);
        let j = if j.get("witness").is_some() { j["witness"].clone() } else { j };
        let r: Ruler = serde_json::from_value(j.clone()).unwrap();
        assert!(verify_mgr(&r).valid);
        assert_eq!(serde_json::to_value(&r).unwrap(), j);
    }
    for args in [
        vec!["certify", "mgr", "--v", "94", "--k", "10"],
        vec!["ooc", "certify", "--v", "62", "--k", "6"],
        vec!["steiner", "check", "--k", "14", "--n", "3"],
        vec!["rdf", "check", "--v", "66", "--w", "6", "--k", "6", "--lambda", "1"],
    ] {
        let o = mgr(&args);
        let line = stdout(&o);
        let c: Certificate = serde_json::from_str(&line).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap() + "\n", line, "{args:?}");
        mgr_core::certify::validate(&c).unwrap();
    }
    let o = mgr(&["spectrum", "--k", "6"]);
    let s: Spectrum = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(s.sporadic, vec![31]);
    assert_eq!(s.tail_start, 35);
    assert_eq!(serde_json::to_string(&s).unwrap() + "\n", stdout(&o));
}

#[test]
fn ooc_search_output_verifies() {
    let o = mgr(&["ooc", "search", "--v", "50", "--k", "3"]);
    assert_eq!(code(&o), 0);
    let c: OocCode = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(serde_json::to_string(&c).unwrap() + "\n", stdout(&o));
    let f = temp_json(&stdout(&o));
    let v = mgr(&["ooc", "verify", "--file", f.path().to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    assert_eq!(json(&v)["optimal"], true);
    // 20 mod 24: certified nonexistent, search runs dry
    assert_eq!(code(&mgr(&["ooc", "certify", "--v", "44", "--k", "3"])), 0);
    assert_eq!(code(&mgr(&["ooc", "search", "--v", "44", "--k", "3"])), 1);
}

#[test]
fn cyclic_steiner_verification() {
    let fano = temp_json(r#"{"v":7,"lambda_a":1,"lambda_c":1,"blocks":[[0,1,3]]}"#);
    let o = mgr(&["ooc", "verify", "--steiner", "--file", fano.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let wrong = temp_json(r#"{"v":16,"lambda_a":1,"lambda_c":1,"blocks":[[0,1,3],[0,4,9]]}"#);
    let p = wrong.path().to_str().unwrap();
    assert_eq!(code(&mgr(&["ooc", "verify", "--file", p])), 0);
    assert_eq!(code(&mgr(&["ooc", "verify", "--steiner", "--file", p])), 1);
}

#[test]
fn design_checks() {
    assert_eq!(code(&mgr(&["steiner", "check", "--k", "6", "--n", "2"])), 0);
    assert_eq!(code(&mgr(&["steiner", "check", "--k", "10", "--n", "2"])), 3);
    assert_eq!(code(&mgr(&["rdf", "check", "--v", "14", "--w", "2", "--k", "4", "--lambda", "1"])), 3);
    // n = λ(v − w)/(k(k − 1)) is not an integer
    assert_eq!(code(&mgr(&["rdf", "check", "--v", "15", "--w", "1", "--k", "4", "--lambda", "1"])), 2);
    let fam = mgr(&["ooc", "family", "thm43", "--k", "5", "--v-max", "200"]);
    assert_eq!(code(&fam), 0);
    let vs: Vec<u64> = json(&fam).as_array().unwrap().iter().map(|m| m["v"].as_u64().unwrap()).collect();
    assert_eq!(vs, vec![22, 62, 102, 142, 182]);
    let fam = mgr(&["certify", "family", "main-nonexist", "--t", "3", "--format", "csv"]);
    assert_eq!(code(&fam), 0);
    assert!(stdout(&fam).lines().any(|l| l.starts_with("2454,50,nonexistent")));
}

#[test]
fn number_theory_predicates() {
    let o = mgr(&["nt", "two-squares", "50"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["witness"], serde_json::json!([1, 7]));
    assert_eq!(code(&mgr(&["nt", "two-squares", "21"])), 1);
    assert_eq!(code(&mgr(&["nt", "three-squares", "7"])), 1);
    assert_eq!(code(&mgr(&["nt", "consecutive-non-three-squares", "111"])), 0);
    assert_eq!(json(&mgr(&["nt", "consecutive-non-two-squares", "2"]))["s"], 5);
    assert_eq!(code(&mgr(&["nt", "ternary", "--a", "3", "--b", "3"])), 1);
    assert_eq!(code(&mgr(&["nt", "ternary", "--a", "1", "--b", "-3"])), 0);
    assert_eq!(code(&mgr(&["nt", "sum-squares", "--target", "12", "--n", "3", "--bound", "2", "--parity", "even"])), 0);
    let f = mgr(&["nt", "factor", "360", "--format", "text"]);
    assert_eq!(stdout(&f), "360 = 2^3 * 3^2 * 5\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&mgr(&["search", "--v", "21"])), 2);
    assert_eq!(code(&mgr(&["frobnicate"])), 2);
    assert_eq!(code(&mgr(&["construct", "--method", "bose"])), 2);
    assert_eq!(code(&mgr(&["construct", "--method", "bose", "--q", "6"])), 2);
    assert_eq!(code(&mgr(&["table", "reproduce", "--k", "5..3"])), 2);
    assert_eq!(code(&mgr(&["search", "--v", "21", "--k", "5", "--budget", "-1"])), 2);
}

#[test]
fn cache_reuses_results() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let p = path.to_str().unwrap();
    let first = mgr(&["search", "--v", "48", "--k", "7", "--cache", p]);
    assert_eq!(code(&first), 0);
    assert!(!stderr(&first).contains("cache hit"));
    let second = mgr(&["search", "--v", "48", "--k", "7", "--cache", p]);
    assert!(stderr(&second).contains("cache hit: search v=48 k=7 mode=first"));
    assert_eq!(first.stdout, second.stdout);
    // a different mode is a different key
    let prove = mgr(&["search", "--v", "48", "--k", "7", "--mode", "prove", "--cache", p]);
    assert!(!stderr(&prove).contains("cache hit"));
    // budget-limited runs are not stored
    let cut = mgr(&["search", "--v", "120", "--k", "11", "--budget", "100", "--cache", p]);
    assert_eq!(code(&cut), 4);
    let cut = mgr(&["search", "--v", "120", "--k", "11", "--budget", "100", "--cache", p]);
    assert!(!stderr(&cut).contains("cache hit"));
    // corrupt lines are skipped with a warning
    std::fs::OpenOptions::new().append(true).open(&path).unwrap().write_all(b"{not json\n").unwrap();
    let third = mgr(&["search", "--v", "48", "--k", "7", "--cache", p]);
    assert!(stderr(&third).contains("warning") && stderr(&third).contains("cache hit"));
    assert_eq!(first.stdout, third.stdout);
    let t1 = mgr(&["table", "reproduce", "--k", "3..6", "--cache", p]);
    let t2 = mgr(&["table", "reproduce", "--k", "3..6", "--cache", p]);
    assert!(stderr(&t2).contains("cache hit: spectrum k=6"));
    assert_eq!(t1.stdout, t2.stdout);
}
