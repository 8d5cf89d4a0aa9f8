use crate::args::*;
use crate::cache::{Cache, CacheRecord};
use crate::output::{join, opt, Doc, Emitted};
use crate::{table, CliError, EXIT_AFFIRMATIVE, EXIT_BUDGET, EXIT_INCONCLUSIVE, EXIT_NEGATIVE};
use mgr_core::certify::{certify_mgr, family_scan, Certificate, Family, FamilyMember, Verdict};
use mgr_core::constructions::{bose, delete_points, exist_any, exist_small, ruzsa, singer, ConstructionError};
use mgr_core::designs::{
    certify_optimal_ooc, family_scan_ooc, ooc_size_bound, rdf_check, steiner_check, verify_cyclic_steiner, verify_ooc,
    DesignError, OocCode, OocFamily, OocFamilyMember,
};
use mgr_core::numtheory::{self as nt, Parity};
use mgr_core::search::{
    difference_packing, min_length_below, optimal_golomb, search, spectrum, SearchError, SearchMode, SearchOptions,
    SearchOutcome, SearchStatus, Spectrum,
};
use mgr_core::{diff_profile, verify_mgr, Ruler};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use std::path::Path;

struct Ctx<'a> {
    g: &'a Global,
    cache: Option<Cache>,
}

impl Ctx<'_> {
    fn opts(&self) -> SearchOptions {
        SearchOptions { budget: self.g.budget, threads: self.g.threads.max(1) }
    }

    /// Runs `compute` unless the cache already holds `key`; stores results
    /// that `keep` accepts.
    fn cached<T: Serialize + DeserializeOwned>(
        &self,
        key: String,
        compute: impl FnOnce() -> Result<T, CliError>,
        keep: impl Fn(&T) -> bool,
    ) -> Result<T, CliError> {
        let Some(c) = &self.cache else { return compute() };
        let io = |source| CliError::Io { path: c.path().display().to_string(), source };
        if let Some(r) = c.get(&key).map_err(io)? {
            match serde_json::from_value(r.payload) {
                Ok(x) => {
                    eprintln!("cache hit: {key}");
                    return Ok(x);
                }
                Err(e) => eprintln!("warning: cached payload for {key:?} unreadable ({e}), recomputing"),
            }
        }
        let x = compute()?;
        if keep(&x) {
            let payload = serde_json::to_value(&x).expect("results serialize");
            c.put(&CacheRecord::new(key, payload)).map_err(io)?;
        }
        Ok(x)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn search_err(e: SearchError) -> CliError {
    match e {
        SearchError::BudgetExceeded => CliError::Budget,
        e => usage(e.to_string()),
    }
}

fn design_err(e: DesignError) -> CliError {
    usage(e.to_string())
}

fn construction_err(e: ConstructionError) -> CliError {
    usage(e.to_string())
}

fn need<T>(x: Option<T>, flag: &str, method: &str) -> Result<T, CliError> {
    x.ok_or_else(|| usage(format!("--method {method} needs {flag}")))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: p.clone(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: p, source })
}

fn status_code(s: SearchStatus) -> i32 {
    match s {
        SearchStatus::Found => EXIT_AFFIRMATIVE,
        SearchStatus::Exhausted => EXIT_NEGATIVE,
        SearchStatus::BudgetExceeded => EXIT_BUDGET,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Nonexistent => EXIT_AFFIRMATIVE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn status_str(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Found => "found",
        SearchStatus::Exhausted => "exhausted",
        SearchStatus::BudgetExceeded => "budget-exceeded",
    }
}

fn bool_code(b: bool) -> i32 {
    if b {
        EXIT_AFFIRMATIVE
    } else {
        EXIT_NEGATIVE
    }
}

/// Runs one command and renders its output in the requested format.
pub fn run(cli: &Cli) -> Result<Emitted, CliError> {
    let cache = match &cli.global.cache {
        Some(p) => Some(Cache::open(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?),
        None => None,
    };
    let ctx = Ctx { g: &cli.global, cache };
    let (code, doc) = dispatch(&ctx, &cli.command)?;
    Ok(Emitted { code, body: doc.render(cli.global.format) })
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<(i32, Doc), CliError> {
    match cmd {
        Command::Search { v, k, mode } => cmd_search(ctx, *v, *k, *mode),
        Command::Spectrum { k } => {
            let s = cached_spectrum(ctx, *k)?;
            let rows = table::rows(&s);
            let code = if s.complete { EXIT_AFFIRMATIVE } else { EXIT_BUDGET };
            let text = format!(
                "MGR({}) = {{{}}} + {{v >= {}}}\n{}",
                s.k,
                s.sporadic.iter().map(u32::to_string).collect::<Vec<_>>().join(", "),
                s.tail_start,
                table::text(&rows)
            );
            let doc = Doc::new(&s).csv(table::HEADER.to_vec(), rows.iter().map(table::Row::fields).collect()).text(text);
            Ok((code, doc))
        }
        Command::MinLength { v, k } => cmd_min_length(ctx, *v, *k),
        Command::Verify { file } => {
            let r: Ruler = read_json(file)?;
            let report = verify_mgr(&r);
            let p = diff_profile(&r);
            let out = json!({ "ruler": r, "report": report, "leave": p.leave });
            let text = match &report.witness {
                None => format!("valid ({}, {})-MGR", r.v(), r.k()),
                Some(w) => format!(
                    "invalid: difference {} occurs as {} - {} and {} - {}",
                    w.d, w.first.0, w.first.1, w.second.0, w.second.1
                ),
            };
            let rows = vec![vec![r.v().to_string(), r.k().to_string(), join(r.residues()), report.valid.to_string()]];
            Ok((bool_code(report.valid), Doc::new(&out).csv(vec!["v", "k", "residues", "valid"], rows).text(text)))
        }
        Command::Construct { method, q, p, k, v, delete } => {
            let r = match method {
                Method::Singer => singer(need(*q, "--q", "singer")?),
                Method::Bose => bose(need(*q, "--q", "bose")?),
                Method::Ruzsa => ruzsa(need(*p, "--p", "ruzsa")?),
                Method::ExistSmall => exist_small(need(*k, "--k", "exist-small")?),
                Method::ExistAny => exist_any(need(*k, "--k", "exist-any")?, need(*v, "--v", "exist-any")?),
            }
            .map_err(construction_err)?;
            let r = match delete {
                Some(d) => delete_points(&r, *d).map_err(construction_err)?,
                None => r,
            };
            Ok((EXIT_AFFIRMATIVE, ruler_doc(&r)))
        }
        Command::Certify(CertifyCmd::Mgr { v, k, trace }) => {
            if *k < 3 {
                return Err(usage("certify mgr needs k >= 3"));
            }
            let c = certify_mgr(*v, *k);
            Ok((verdict_code(c.verdict), certificate_doc(&c, *trace)))
        }
        Command::Certify(CertifyCmd::Family(f)) => {
            let family = match f {
                MgrFamilyCmd::MainNonexist { t } => Family::MainNonexist { t: *t },
                MgrFamilyCmd::New35 { n, ell } => Family::New35Cor { n: *n, ell: *ell },
            };
            Ok(members_doc(&family_scan(family), |m: &FamilyMember| (m.v, m.k, None, &m.certificate)))
        }
        Command::Ooc(c) => cmd_ooc(ctx, c),
        Command::Steiner(SteinerCmd::Check { k, n }) => {
            let c = steiner_check(*k, *n).map_err(design_err)?;
            Ok((verdict_code(c.verdict), certificate_doc(&c, true)))
        }
        Command::Rdf(RdfCmd::Check { v, w, k, lambda }) => {
            let c = rdf_check(*v, *w, *k, *lambda).map_err(design_err)?;
            Ok((verdict_code(c.verdict), certificate_doc(&c, true)))
        }
        Command::Nt(c) => cmd_nt(c),
        Command::Table(TableCmd::Reproduce { k }) => {
            let mut rows = Vec::new();
            let mut complete = true;
            for k in k.clone() {
                let s = cached_spectrum(ctx, k)?;
                rows.extend(table::rows(&s));
                if !s.complete {
                    complete = false;
                    break;
                }
            }
            let text = table::text(&rows);
            let doc = Doc::new(&rows)
                .csv(table::HEADER.to_vec(), rows.iter().map(table::Row::fields).collect())
                .text(text)
                .default_format(Format::Csv);
            Ok((if complete { EXIT_AFFIRMATIVE } else { EXIT_BUDGET }, doc))
        }
    }
}

fn ruler_doc(r: &Ruler) -> Doc {
    let v = r.modulus().map_or(String::new(), |v| v.to_string());
    let text = match r.modulus() {
        Some(v) => format!("({v}, {})-MGR: {}", r.k(), join(r.residues())),
        None => format!("{}-mark Golomb ruler of length {}: {}", r.k(), r.length(), join(r.residues())),
    };
    Doc::new(r).csv(vec!["v", "k", "residues"], vec![vec![v, r.k().to_string(), join(r.residues())]]).text(text)
}

fn certificate_doc(c: &Certificate, trace: bool) -> Doc {
    let verdict = match c.verdict {
        Verdict::Nonexistent => "nonexistent",
        Verdict::Inconclusive => "inconclusive",
    };
    let rule = c.evidence.rule();
    let mut text = format!("v = {}, k = {}: {verdict} ({rule})", c.v, c.k);
    if trace {
        let j = serde_json::to_value(c).expect("certificates serialize");
        if let Some(t) = j.get("trace") {
            text.push('\n');
            text.push_str(&serde_json::to_string_pretty(t).expect("json values serialize"));
        }
    }
    let row = vec![c.v.to_string(), c.k.to_string(), verdict.to_string(), rule.to_string()];
    Doc::new(c).csv(vec!["v", "k", "verdict", "rule"], vec![row]).text(text)
}

/// Exit 0 when every member is certified, 3 otherwise.
fn members_doc<M: Serialize>(
    members: &[M],
    view: impl Fn(&M) -> (u64, u64, Option<&Vec<i64>>, &Certificate),
) -> (i32, Doc) {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for m in members {
        let (v, k, r, c) = view(m);
        all &= c.verdict == Verdict::Nonexistent;
        let verdict = if c.verdict == Verdict::Nonexistent { "nonexistent" } else { "inconclusive" };
        let r = r.map(|r| join(r)).unwrap_or_default();
        text.push_str(&format!("v = {v}, k = {k}: {verdict} ({})\n", c.evidence.rule()));
        rows.push(vec![v.to_string(), k.to_string(), verdict.to_string(), c.evidence.rule().to_string(), r]);
    }
    if members.is_empty() {
        text.push_str("no members\n");
    }
    let code = if all { EXIT_AFFIRMATIVE } else { EXIT_INCONCLUSIVE };
    (code, Doc::new(&members).csv(vec!["v", "k", "verdict", "rule", "r"], rows).text(text))
}

fn cached_spectrum(ctx: &Ctx, k: usize) -> Result<Spectrum, CliError> {
    ctx.cached(format!("spectrum k={k}"), || spectrum(k, ctx.opts()).map_err(search_err), |s: &Spectrum| s.complete)
}

fn cmd_search(ctx: &Ctx, v: u32, k: usize, mode: Mode) -> Result<(i32, Doc), CliError> {
    let (m, name) = match mode {
        Mode::First => (SearchMode::First, "first"),
        Mode::All => (SearchMode::All, "all"),
        Mode::Prove => (SearchMode::Prove, "prove"),
    };
    let o = ctx.cached(
        format!("search v={v} k={k} mode={name}"),
        || search(v, k, m, ctx.opts()).map_err(search_err),
        |o: &SearchOutcome| o.status != SearchStatus::BudgetExceeded,
    )?;
    let code = match (mode, o.solutions) {
        (Mode::All, Some(n)) if o.status != SearchStatus::BudgetExceeded => bool_code(n > 0),
        _ => status_code(o.status),
    };
    let residues = o.witness.as_ref().map(|w| join(w.residues())).unwrap_or_default();
    let mut text = match &o.witness {
        Some(w) => format!("({v}, {k})-MGR: {}", join(w.residues())),
        None if o.status == SearchStatus::Exhausted => format!("no ({v}, {k})-MGR exists"),
        None => format!("({v}, {k}): budget exceeded"),
    };
    if let Some(n) = o.solutions {
        text.push_str(&format!("\n{n} classes up to translation and reflection"));
    }
    text.push_str(&format!("\nnodes: {}", o.nodes_visited));
    let row = vec![
        v.to_string(),
        k.to_string(),
        status_str(o.status).to_string(),
        residues,
        opt(o.witness.as_ref().map(Ruler::length)),
        opt(o.solutions),
        o.nodes_visited.to_string(),
    ];
    let doc = Doc::new(&o).csv(vec!["v", "k", "status", "residues", "length", "solutions", "nodes"], vec![row]).text(text);
    Ok((code, doc))
}

fn cmd_min_length(ctx: &Ctx, v: Option<u32>, k: usize) -> Result<(i32, Doc), CliError> {
    let Some(v) = v else {
        let r = ctx.cached(format!("golomb k={k}"), || optimal_golomb(k, ctx.opts()).map_err(search_err), |_| true)?;
        let out = json!({ "k": k, "length": r.length(), "witness": r });
        let text = format!("L*({k}) = {}: {}", r.length(), join(r.residues()));
        let row = vec![String::new(), k.to_string(), join(r.residues()), r.length().to_string()];
        return Ok((EXIT_AFFIRMATIVE, Doc::new(&out).csv(vec!["v", "k", "residues", "length"], vec![row]).text(text)));
    };
    let o = ctx.cached(
        format!("min-length v={v} k={k}"),
        || min_length_below(v, k, None, ctx.opts()).map_err(search_err),
        |o: &mgr_core::search::MinLengthOutcome| o.status != SearchStatus::BudgetExceeded,
    )?;
    let text = match (&o.witness, o.status) {
        (Some(w), _) => format!("shortest ({v}, {k})-MGR rotation has length {}: {}", w.length(), join(w.residues())),
        (None, SearchStatus::BudgetExceeded) => format!("({v}, {k}): budget exceeded"),
        (None, _) => format!("no ({v}, {k})-MGR exists"),
    };
    let residues = o.witness.as_ref().map(|w| join(w.residues())).unwrap_or_default();
    let row = vec![v.to_string(), k.to_string(), residues, opt(o.length)];
    Ok((status_code(o.status), Doc::new(&o).csv(vec!["v", "k", "residues", "length"], vec![row]).text(text)))
}

fn cmd_ooc(ctx: &Ctx, c: &OocCmd) -> Result<(i32, Doc), CliError> {
    match c {
        OocCmd::Verify { file, steiner } => {
            let code: OocCode = read_json(file)?;
            let (valid, doc_json, text) = if *steiner {
                let r = verify_cyclic_steiner(&code);
                let text = format!(
                    "cyclic S(2, {}, {}): {} (leave {})",
                    code.k(),
                    code.v,
                    if r.valid { "valid" } else { "invalid" },
                    join(&r.leave)
                );
                (r.valid, serde_json::to_value(&r).unwrap(), text)
            } else {
                let r = verify_ooc(&code);
                let text = format!(
                    "({}, {}, {}, {})-OOC of size {}: {}; auto {} cross {}; bound {}{}",
                    code.v,
                    code.k(),
                    code.lambda_a,
                    code.lambda_c,
                    r.size,
                    if r.valid { "valid" } else { "invalid" },
                    r.max_auto,
                    r.max_cross,
                    r.size_bound,
                    match r.optimal {
                        Some(true) => ", optimal",
                        _ => "",
                    }
                );
                (r.valid, serde_json::to_value(&r).unwrap(), text)
            };
            let row = vec![code.v.to_string(), code.k().to_string(), code.size().to_string(), valid.to_string()];
            Ok((bool_code(valid), Doc::new(&doc_json).csv(vec!["v", "k", "size", "valid"], vec![row]).text(text)))
        }
        OocCmd::Certify { v, k } => {
            let c = certify_optimal_ooc(*v, *k).map_err(design_err)?;
            Ok((verdict_code(c.verdict), certificate_doc(&c, true)))
        }
        OocCmd::Search { v, k } => {
            if *k < 2 || *v as usize <= *k {
                return Err(usage("ooc search needs v > k >= 2"));
            }
            let n = ooc_size_bound(*v as u64, *k as u64) as usize;
            let o = difference_packing(*v, *k, n, ctx.opts()).map_err(search_err)?;
            let code = status_code(o.status);
            match &o.blocks {
                Some(b) => {
                    let blocks = b.iter().map(|b| b.iter().map(|&x| x as u64).collect()).collect();
                    let c = OocCode::packing(*v as u64, blocks).map_err(|e| usage(e.to_string()))?;
                    let rows = c.blocks.iter().map(|b| vec![c.v.to_string(), c.k().to_string(), join(b)]).collect();
                    let text = format!(
                        "optimal ({v}, {k}, 1)-OOC of size {n}:\n{}",
                        c.blocks.iter().map(|b| join(b)).collect::<Vec<_>>().join("\n")
                    );
                    Ok((code, Doc::new(&c).csv(vec!["v", "k", "block"], rows).text(text)))
                }
                None => {
                    let text = match o.status {
                        SearchStatus::BudgetExceeded => format!("({v}, {k}): budget exceeded after {} nodes", o.nodes_visited),
                        _ => format!("no ({v}, {k}, 1)-OOC of size {n}"),
                    };
                    let row = vec![v.to_string(), k.to_string(), status_str(o.status).to_string()];
                    Ok((code, Doc::new(&o).csv(vec!["v", "k", "status"], vec![row]).text(text)))
                }
            }
        }
        OocCmd::Family(f) => {
            let family = match *f {
                OocFamilyCmd::Thm43 { k, v_max } => OocFamily::Thm43 { k, v_max },
                OocFamilyCmd::RSet { ell, k_min, k_max } => OocFamily::RSet { ell, k_min, k_max },
                OocFamilyCmd::N3Ell1 { k_max } => OocFamily::N3Ell1 { k_max },
                OocFamilyCmd::N3Ell2 { k_max } => OocFamily::N3Ell2 { k_max },
                OocFamilyCmd::KHalf { k_min, k_max } => OocFamily::KHalf { k_min, k_max },
                OocFamilyCmd::Infinite { ell, count } => OocFamily::Infinite { ell, count },
            };
            let members = family_scan_ooc(family).map_err(design_err)?;
            Ok(members_doc(&members, |m: &OocFamilyMember| (m.v, m.k, m.r.as_ref(), &m.certificate)))
        }
    }
}

fn predicate(name: &str, n: impl ToString, holds: bool, extra: serde_json::Value) -> (i32, Doc) {
    let mut j = json!({ "predicate": name, "input": n.to_string(), "holds": holds });
    if let (Some(obj), serde_json::Value::Object(more)) = (j.as_object_mut(), extra) {
        obj.extend(more);
    }
    let text = format!("{name}({}) = {holds}", n.to_string());
    let row = vec![name.to_string(), n.to_string(), holds.to_string()];
    (bool_code(holds), Doc::new(&j).csv(vec!["predicate", "input", "holds"], vec![row]).text(text))
}

fn cmd_nt(c: &NtCmd) -> Result<(i32, Doc), CliError> {
    Ok(match *c {
        NtCmd::TwoSquares { n } => {
            let w = nt::two_squares_witness(n);
            predicate("two-squares", n, w.is_some(), json!({ "witness": w.map(|w| w.parts) }))
        }
        NtCmd::ThreeSquares { n } => predicate("three-squares", n, nt::is_sum_three_squares(n), json!({})),
        NtCmd::SumSquares { target, n, bound, parity } => {
            let parity = parity.map(|p| match p {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            });
            let w = nt::sum_n_squares_bounded(target, n, bound, parity);
            let input = format!("{target}; n={n}, bound={bound}");
            predicate("sum-squares", input, w.is_some(), json!({ "witness": w.map(|w| w.parts) }))
        }
        NtCmd::ConsecutiveNonTwoSquares { t, crt } => {
            if t == 0 {
                return Err(usage("t must be at least 1"));
            }
            let s = if crt {
                nt::consecutive_non_two_squares_crt(t).map_err(|e| usage(e.to_string()))?
            } else {
                nt::consecutive_non_two_squares(t)
            };
            let j = json!({ "t": t, "s": s, "method": if crt { "crt" } else { "scan" } });
            let text = format!("s = {s}: {}..={} are not sums of two squares", s + 1, s + t as u64);
            (EXIT_AFFIRMATIVE, Doc::new(&j).csv(vec!["t", "s"], vec![vec![t.to_string(), s.to_string()]]).text(text))
        }
        NtCmd::ConsecutiveNonThreeSquares { n } => {
            predicate("consecutive-non-three-squares", n, nt::consecutive_non_three_squares(n), json!({}))
        }
        NtCmd::Ternary { a, b } => {
            let s = nt::ternary_form_solvable(a, b).map_err(|e| usage(e.to_string()))?;
            predicate("ternary", format!("{a} {b}"), s.is_some(), json!({ "solution": s }))
        }
        NtCmd::Factor { n } => {
            if n == 0 {
                return Err(usage("cannot factor 0"));
            }
            let f = nt::factorize(n);
            let text = f.pairs().iter().map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") });
            let text = format!("{n} = {}", text.collect::<Vec<_>>().join(" * "));
            let rows = f.pairs().iter().map(|(p, e)| vec![p.to_string(), e.to_string()]).collect();
            let j = json!({ "n": n, "factors": f });
            (EXIT_AFFIRMATIVE, Doc::new(&j).csv(vec!["prime", "exponent"], rows).text(text))
        }
        NtCmd::Prime { n } => predicate("prime", n, nt::is_prime(n), json!({})),
    })
}
