use mgr_cli::cache::{Cache, CacheRecord, TOOL_VERSION};
use serde_json::json;
use std::io::Write;

#[test]
fn put_then_get_returns_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let c = Cache::open(&dir.path().join("c.jsonl")).unwrap();
    let r = CacheRecord::new("search v=21 k=5 mode=first", json!({"status": "found", "nodes_visited": 13}));
    c.put(&r).unwrap();
    assert_eq!(c.get("search v=21 k=5 mode=first").unwrap(), Some(r.clone()));
    assert_eq!(c.get("search v=21 k=5 mode=all").unwrap(), None);
    // the latest record for a key wins
    let r2 = CacheRecord::new("search v=21 k=5 mode=first", json!({"status": "found", "nodes_visited": 14}));
    c.put(&r2).unwrap();
    assert_eq!(c.get("search v=21 k=5 mode=first").unwrap(), Some(r2));
}

#[test]
fn empty_cache_has_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let c = Cache::open(&dir.path().join("empty.jsonl")).unwrap();
    let l = c.lookup("spectrum k=5", TOOL_VERSION).unwrap();
    assert!(l.record.is_none() && l.warnings.is_empty());
}

#[test]
fn version_mismatch_misses() {
    let dir = tempfile::tempdir().unwrap();
    let c = Cache::open(&dir.path().join("c.jsonl")).unwrap();
    c.put(&CacheRecord::with_version("spectrum k=5", "0.0.0-old", json!({"k": 5}))).unwrap();
    assert_eq!(c.get("spectrum k=5").unwrap(), None);
    assert!(c.lookup("spectrum k=5", "0.0.0-old").unwrap().record.is_some());
}

#[test]
fn corrupt_and_tampered_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let good = CacheRecord::new("a", json!([1, 2, 3]));
    let mut tampered = CacheRecord::new("b", json!(1));
    tampered.payload = json!(2);
    {
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "{}", serde_json::to_string(&good).unwrap()).unwrap();
        writeln!(f, "garbage").unwrap();
        writeln!(f).unwrap();
        writeln!(f, "{}", serde_json::to_string(&tampered).unwrap()).unwrap();
        write!(f, "{{\"key\":\"a\",\"vers").unwrap();
    }
    let c = Cache::open(&path).unwrap();
    let l = c.lookup("a", TOOL_VERSION).unwrap();
    assert_eq!(l.record, Some(good));
    assert_eq!(l.warnings.len(), 3, "{:?}", l.warnings);
    assert!(l.warnings[0].contains(":2:"));
    assert!(c.lookup("b", TOOL_VERSION).unwrap().record.is_none());
    // appending after a torn final line still yields readable records
    let fresh = CacheRecord::new("c", json!(null));
    c.put(&fresh).unwrap();
    assert_eq!(c.get("c").unwrap(), Some(fresh));
    assert_eq!(c.lookup("a", TOOL_VERSION).unwrap().warnings.len(), 3);
}
