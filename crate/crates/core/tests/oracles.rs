use mgr_core::certify::{certify_mgr, validate_mgr, Verdict};
use mgr_core::constructions::{bose, delete_points, exist_any, exist_small, ruzsa, singer};
use mgr_core::field::FieldCtx;
use mgr_core::numtheory::{
    consecutive_non_two_squares, is_sum_three_squares, is_sum_two_squares, prime_power,
};
use mgr_core::search::{search, spectrum, SearchMode, SearchOptions, SearchStatus};
use mgr_core::{canonicalize, diff_profile, embed, verify_mgr, Ruler};
use std::collections::HashSet;

const N: usize = 100_000;

fn sieve(parts: usize) -> Vec<bool> {
    let mut hit = vec![false; N + 1];
    fn rec(hit: &mut [bool], left: usize, lo: usize, acc: usize) {
        if left == 0 {
            hit[acc] = true;
            return;
        }
        let mut a = lo;
        while acc + a * a < hit.len() {
            rec(hit, left - 1, a, acc + a * a);
            a += 1;
        }
    }
    rec(&mut hit, parts, 0, 0);
    hit
}

#[test]
fn square_predicates_match_brute_force() {
    let two = sieve(2);
    let three = sieve(3);
    for n in 0..=N {
        assert_eq!(is_sum_two_squares(n as u64), two[n], "two squares, n = {n}");
        assert_eq!(is_sum_three_squares(n as u64), three[n], "three squares, n = {n}");
    }
}

#[test]
fn consecutive_runs_are_runs() {
    for t in 1..=6 {
        let s = consecutive_non_two_squares(t);
        assert!((1..=t as u64).all(|i| !is_sum_two_squares(s + i)), "t = {t}");
    }
}

#[test]
fn antilog_tables_are_permutations() {
    for q in 2u64..=256 {
        let Some((p, m)) = prime_power(q) else { continue };
        let f = FieldCtx::new(p, m).unwrap();
        let mut seen = vec![0u32; q as usize];
        for &a in f.antilog_table().iter().take(q as usize - 1) {
            seen[a as usize] += 1;
        }
        assert_eq!(seen[0], 0, "q = {q}");
        assert!(seen[1..].iter().all(|&c| c == 1), "q = {q}");
    }
}

#[test]
fn constructions_verify() {
    for q in 2u64..=64 {
        if prime_power(q).is_none() {
            continue;
        }
        let s = singer(q).unwrap();
        assert!(verify_mgr(&s).valid, "singer {q}");
        let p = diff_profile(&s);
        assert_eq!(p.leave, vec![0], "singer {q} is planar");
        if q == 2 {
            // two marks only
            assert!(bose(q).is_err());
            continue;
        }
        let b = bose(q).unwrap();
        assert!(verify_mgr(&b).valid && b.v() as u64 == q * q - 1, "bose {q}");
        for delta in 0..3.min(q as usize - 2) {
            assert!(verify_mgr(&delete_points(&b, delta).unwrap()).valid);
        }
    }
    for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
        let r = ruzsa(p).unwrap();
        assert!(verify_mgr(&r).valid && r.v() as u64 == p * p - p && r.k() as u64 == p - 1, "ruzsa {p}");
    }
}

#[test]
fn existence_bounds() {
    for k in 3..=200usize {
        let r = exist_small(k).unwrap();
        assert_eq!(r.k(), k);
        assert!(verify_mgr(&r).valid, "k = {k}");
        assert!(r.v() as usize <= 3 * k * k / 2, "k = {k}: v = {}", r.v());
    }
    for k in 3..=60usize {
        let v = (3 * k * k - 1) as u32;
        for extra in [0, 1, 17] {
            let r = exist_any(k, v + extra).unwrap();
            assert!(verify_mgr(&r).valid && r.k() == k && r.v() == v + extra, "k = {k}");
        }
    }
}

fn subsets(v: u32, k: usize, from: u32, cur: &mut Vec<u32>, out: &mut HashSet<Ruler>) {
    if cur.len() == k {
        let r = Ruler::new(v, cur.clone()).unwrap();
        if verify_mgr(&r).valid {
            out.insert(canonicalize(&r));
        }
        return;
    }
    for x in from..v {
        if cur.is_empty() && x > 0 {
            break;
        }
        cur.push(x);
        subsets(v, k, x + 1, cur, out);
        cur.pop();
    }
}

#[test]
fn mode_all_matches_subset_enumeration() {
    for k in [3usize, 4] {
        for v in k as u32..=40 {
            let mut classes = HashSet::new();
            subsets(v, k, 0, &mut Vec::new(), &mut classes);
            let o = search(v, k, SearchMode::All, SearchOptions::default()).unwrap();
            assert_eq!(o.solutions, Some(classes.len() as u64), "v = {v}, k = {k}");
            let least = classes.iter().min_by(|a, b| a.residues().cmp(b.residues()));
            assert_eq!(o.witness.as_ref(), least, "v = {v}, k = {k}");
            let first = search(v, k, SearchMode::First, SearchOptions::default()).unwrap();
            assert_eq!(first.witness.as_ref(), least);
        }
    }
}

#[test]
fn certificates_never_contradict_search() {
    for k in 3u64..=8 {
        for v in k * k - k + 1..=80 {
            let cert = certify_mgr(v, k);
            let o = search(v as u32, k as usize, SearchMode::Prove, SearchOptions::default()).unwrap();
            assert_ne!(o.status, SearchStatus::BudgetExceeded);
            if let Some(w) = &o.witness {
                assert!(verify_mgr(w).valid);
                assert_ne!(cert.verdict, Verdict::Nonexistent, "v = {v}, k = {k} has {w:?}");
            }
            if cert.verdict == Verdict::Nonexistent {
                validate_mgr(&cert, v, k).unwrap();
                assert_eq!(o.status, SearchStatus::Exhausted, "v = {v}, k = {k}");
            }
        }
    }
}

#[test]
fn parallel_runs_agree() {
    for (v, k) in [(21u32, 5usize), (22, 5), (34, 6), (48, 7), (50, 7), (57, 8), (60, 8), (66, 8)] {
        let base = search(v, k, SearchMode::Prove, SearchOptions::default()).unwrap();
        for threads in [2, 3, 4] {
            let o = search(v, k, SearchMode::Prove, SearchOptions { budget: None, threads }).unwrap();
            assert_eq!(o.status, base.status, "v = {v}, k = {k}, threads = {threads}");
            assert_eq!(o.witness, base.witness, "v = {v}, k = {k}, threads = {threads}");
            let all = search(v, k, SearchMode::All, SearchOptions { budget: None, threads }).unwrap();
            let all1 = search(v, k, SearchMode::All, SearchOptions::default()).unwrap();
            assert_eq!(all.solutions, all1.solutions);
        }
    }
}

#[test]
fn spectrum_tails_are_covered_by_embedding() {
    for k in 3..=8 {
        let s = spectrum(k, SearchOptions::default()).unwrap();
        assert!(s.complete);
        let best = s.shortest.as_ref().unwrap();
        let lo = 2 * best.length() + 1;
        assert!(lo <= s.embed_from);
        for v in lo..lo + 300 {
            let r = embed(best, v).unwrap();
            assert!(verify_mgr(&r).valid && s.contains(v));
        }
        for e in &s.trail {
            assert_eq!(e.witness.is_some(), e.status == SearchStatus::Found);
            assert_eq!(s.contains(e.v), e.status == SearchStatus::Found, "k = {k}, v = {}", e.v);
        }
        for v in s.tail_start..s.embed_from {
            assert!(s.trail.iter().any(|e| e.v == v && e.status == SearchStatus::Found));
        }
    }
}
