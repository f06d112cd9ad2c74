//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails if
//! any criterion failed.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower::ServiceExt;

use swarm_debugging::fixtures;
use swarm_debugging::graph::*;
use swarm_debugging::ingestion::*;
use swarm_debugging::metrics::*;
use swarm_debugging::model::*;
use swarm_debugging::search::*;
use swarm_debugging::service::{self, AppState};
use swarm_debugging::{cli, QueryFilter, Store};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).join(fixtures::LOG_FILE)
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("swarm").chain(args.iter().copied());
    let code = cli::dispatch(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    String::from_utf8(out).map_err(|e| e.to_string())
}

fn distribution(csv_text: &str) -> BTreeMap<String, (u64, u64)> {
    csv_text
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            Some((f.first()?.to_string(), (f.get(1)?.parse().ok()?, f.get(2)?.parse().ok()?)))
        })
        .collect()
}

fn statement_tables() -> Outcome {
    let classes = ["call", "if_statement", "assignment", "return", "while_loop"];
    let mut timings = Vec::new();
    for (name, counts, percents) in [
        ("study1", [111, 39, 36, 18, 3], Some([53, 19, 17, 10, 1])),
        ("study2", [43, 22, 27, 4, 4], None),
    ] {
        let log = shipped(name);
        let t = Instant::now();
        let text = run_cli(&["analyze", "table3", "--filter", "task=all", "--log", log.to_str().unwrap()])?;
        let took = t.elapsed();
        ensure!(took < Duration::from_secs(1), "{name} took {took:?}");
        timings.push(took);
        let d = distribution(&text);
        for (i, class) in classes.iter().enumerate() {
            let (count, pct) = d.get(*class).copied().unwrap_or((0, 0));
            ensure!(count == counts[i], "{name} {class}: count {count}, expected {}", counts[i]);
            if let Some(p) = percents {
                ensure!(pct.abs_diff(p[i]) <= 1, "{name} {class}: {pct}%, expected {}% ±1", p[i]);
            }
        }
        let other = d.get("other").map(|r| r.0).unwrap_or(0);
        ensure!(other == 0, "{name}: {other} unclassified lines");
    }
    Ok(format!("counts and percents match; runtimes {timings:?}"))
}

fn power_law() -> Outcome {
    let points: Vec<(f64, f64)> = (1..=100).map(|i| (i as f64, 12.0 / (i as f64).powf(0.44))).collect();
    let fit = fit_power_law(&points).map_err(|e| e.to_string())?;
    ensure!((fit.alpha - 12.0).abs() <= 1e-6, "alpha {}", fit.alpha);
    ensure!((fit.beta - 0.44).abs() <= 1e-6, "beta {}", fit.beta);
    let store = fixtures::study1().load().map_err(|e| e.to_string())?;
    let metrics = all_session_metrics(&store.snapshot(), &QueryFilter::all());
    let study = fit_power_law(&fit_points(&metrics)).map_err(|e| e.to_string())?;
    ensure!(study.rho < 0.0, "rho {}", study.rho);
    Ok(format!("alpha {:.9} beta {:.9}; study rho {:.3}", fit.alpha, fit.beta, study.rho))
}

fn first_breakpoint_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let store = Store::in_memory();
    store.create_product("p").unwrap();
    store.create_task("p", "t", "").unwrap();
    store
        .declare_type("p", &TypeDeclaration { full_name: "x.A".into(), source_path: None, methods: vec![] })
        .unwrap();
    let mut expected: BTreeMap<SessionId, (i64, Option<i64>)> = BTreeMap::new();
    for i in 0..10_000 {
        let st = rng.gen_range(0..1_000_000_000_000i64);
        let et = rng.gen_range(1..10_000_000i64);
        let s = store
            .open_session(&OpenSession {
                developer: format!("d{}", i % 50),
                product: "p".into(),
                task: "t".into(),
                label: String::new(),
                started_at: Some(Timestamp(st)),
            })
            .unwrap();
        let mut offsets: Vec<i64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..=et)).collect();
        offsets.sort();
        for off in &offsets {
            let bp = NewBreakpoint {
                type_full_name: "x.A".into(),
                line_number: rng.gen_range(1..500),
                kind: BreakpointKind::Line,
                condition: None,
                created_at: Some(Timestamp(st + off)),
            };
            store.record_breakpoint(&s.id, &bp).unwrap();
        }
        store.close_session(&s.id, SessionOutcome::FaultFound, Some(Timestamp(st + et))).unwrap();
        expected.insert(s.id, (et, offsets.first().copied()));
    }
    let snap = store.snapshot();
    let metrics = all_session_metrics(&snap, &QueryFilter::all());
    ensure!(metrics.len() == 10_000, "{} sessions measured", metrics.len());
    for m in &metrics {
        let (et, ef) = expected[&m.session_id];
        ensure!(m.et == et && m.ef == ef, "session {}: et/ef {:?}/{:?}", m.session_id, m.et, m.ef);
        match (m.mfb, m.ef) {
            (Some(f), Some(ef)) => {
                ensure!(f.times(m.et) == Some(ef), "mfb·et != ef for {}", m.session_id);
                ensure!(f.numer() as i128 * m.et as i128 == ef as i128 * f.denom() as i128, "cross product");
            }
            (None, None) => {}
            other => return Err(format!("mfb/ef mismatch {other:?}")),
        }
    }
    let calibrated = fixtures::study1().load().map_err(|e| e.to_string())?;
    let stats = first_breakpoint_stats(&all_session_metrics(&calibrated.snapshot(), &QueryFilter::all()))
        .map_err(|e| e.to_string())?;
    ensure!((stats.mean_mfb - 0.27).abs() <= 0.005, "mean mfb {}", stats.mean_mfb);
    ensure!((stats.sd_mfb - 0.17).abs() <= 0.005, "sd mfb {}", stats.sd_mfb);
    Ok(format!("10000 sessions exact; fixture mean {:.4} sd {:.4}", stats.mean_mfb, stats.sd_mfb))
}

fn study_rows() -> Outcome {
    let store = fixtures::study1().load().map_err(|e| e.to_string())?;
    let snap = store.snapshot();
    let same = colocated_breakpoints(&snap, &QueryFilter::all(), ColocationMode::SameTask);
    let authors = same
        .iter()
        .find(|r| r.type_name == "AuthorsFormatter" && r.location.line_number == 43)
        .ok_or("no AuthorsFormatter:43 row")?;
    ensure!(authors.count == 5 && authors.tasks == ["318"], "AuthorsFormatter:43 {authors:?}");
    let across = colocated_breakpoints(&snap, &QueryFilter::all(), ColocationMode::AcrossTasks);
    let base = across
        .iter()
        .find(|r| r.type_name == "BasePanel" && r.location.line_number == 969)
        .ok_or("no BasePanel:969 row")?;
    ensure!(base.count == 5 && base.tasks.len() == 3, "BasePanel:969 {base:?}");
    let classes = class_task_matrix(&snap, &QueryFilter::all());
    let parser = classes.iter().find(|r| r.type_name == "BibtexParser").ok_or("no BibtexParser row")?;
    ensure!(parser.breakpoints == 44, "BibtexParser {}", parser.breakpoints);
    let total: usize = classes.iter().map(|r| r.breakpoints).sum();
    ensure!(classes.len() == 10 && total == 160, "class matrix {} rows, {total} breakpoints", classes.len());
    let spots = method_hotspots(&snap, &QueryFilter::all(), 5);
    let count = |label: &str| spots.iter().find(|h| h.label() == label).map(|h| h.breakpoint_count);
    ensure!(count("EntryEditor.storeSource()") == Some(24), "storeSource {:?}", count("EntryEditor.storeSource()"));
    ensure!(
        count("BibtexParser.parseFileContent()") == Some(20),
        "parseFileContent {:?}",
        count("BibtexParser.parseFileContent()")
    );
    ensure!(spots.len() == 13, "{} methods with five or more", spots.len());
    Ok("cited rows present with the cited counts".into())
}

fn starting_ending() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = Instant::now();
    let names: Vec<String> = (0..12).map(|i| format!("n{i}")).collect();
    for case in 0..1000 {
        let n = rng.gen_range(1..=12);
        let m = rng.gen_range(0..=n * 3);
        let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let g = CallGraph::from_triples(
            Granularity::MethodLevel,
            edges.iter().map(|&(a, b)| (names[a].as_str(), names[b].as_str(), "t")),
        );
        let got = starting_and_ending_methods(&g);
        let mut starting = BTreeSet::new();
        let mut ending = BTreeSet::new();
        for v in 0..n {
            let invokes = edges.iter().any(|&(a, _)| a == v);
            let invoked = edges.iter().any(|&(_, b)| b == v);
            if invokes && !invoked {
                starting.insert(names[v].clone());
            }
            if invoked && !invokes {
                ending.insert(names[v].clone());
            }
        }
        ensure!(got.starting == starting, "case {case}: starting {:?} vs {:?}", got.starting, starting);
        ensure!(got.ending == ending, "case {case}: ending {:?} vs {:?}", got.ending, ending);
        ensure!(got.starting.is_disjoint(&got.ending), "case {case}: overlap");
    }
    let took = t.elapsed();
    ensure!(took < Duration::from_secs(5), "took {took:?}");
    Ok(format!("1000 digraphs in {took:?}"))
}

fn ingestion_determinism() -> Outcome {
    for f in fixtures::all() {
        let text = std::fs::read_to_string(shipped(f.name)).map_err(|e| format!("{}: {e}", f.name))?;
        let a = Store::in_memory();
        let b = Store::in_memory();
        let sa = a.import_session_log(text.as_bytes()).map_err(|e| e.to_string())?;
        let sb = b.import_session_log(text.as_bytes()).map_err(|e| e.to_string())?;
        ensure!(sa == sb && sa.rejected == 0, "{}: summaries {sa:?} / {sb:?}", f.name);
        ensure!(
            common::canonical(&a.snapshot()) == common::canonical(&b.snapshot()),
            "{}: imports are not isomorphic",
            f.name
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..200 {
        let store = common::seeded_store(&["t"]);
        let s = common::open(&store, "dev", "t", 1_000);
        let steps = rng.gen_range(1..30);
        let stream = common::drive_stream(&store, &s.id, &mut rng, steps);
        let want = common::adjacent_frame_oracle(&stream);
        let got = common::stored_invocations(&store.snapshot(), &s.id);
        ensure!(got == want, "stream {case}: derived {got:?}, oracle {want:?}");
    }
    Ok(format!("{} fixture logs isomorphic; 200 streams match the oracle", fixtures::all().len()))
}

/// Optimal string alignment distance, by the textbook recurrence.
fn osa(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut v = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            if i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                v = v.min(d[i - 2][j - 2] + 1);
            }
            d[i][j] = v;
        }
    }
    d[a.len()][b.len()]
}

fn random_word(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(2..9);
    (0..len).map(|_| (b'a' + rng.gen_range(0..6u8)) as char).collect()
}

fn capitalized(w: &str) -> String {
    let mut c = w.chars();
    c.next().map(|f| f.to_ascii_uppercase().to_string() + c.as_str()).unwrap_or_default()
}

fn mutate(rng: &mut impl Rng, w: &str) -> String {
    let mut c: Vec<char> = w.chars().collect();
    for _ in 0..rng.gen_range(0..3) {
        match rng.gen_range(0..4) {
            0 if !c.is_empty() => {
                let i = rng.gen_range(0..c.len());
                c[i] = (b'a' + rng.gen_range(0..6u8)) as char;
            }
            1 => c.insert(rng.gen_range(0..=c.len()), (b'a' + rng.gen_range(0..6u8)) as char),
            2 if c.len() > 1 => {
                c.remove(rng.gen_range(0..c.len()));
            }
            _ if c.len() > 1 => {
                let i = rng.gen_range(0..c.len() - 1);
                c.swap(i, i + 1);
            }
            _ => {}
        }
    }
    c.into_iter().collect()
}

fn search_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total_hits = 0;
    for corpus in 0..100 {
        let store = Store::in_memory();
        store.create_product("p").unwrap();
        store.create_task("p", "t", "").unwrap();
        let s = store
            .open_session(&OpenSession {
                developer: "d".into(),
                product: "p".into(),
                task: "t".into(),
                label: String::new(),
                started_at: Some(Timestamp(0)),
            })
            .unwrap();
        let identifiers = rng.gen_range(1..=500);
        // tokens of each breakpoint's fields, known by construction
        let mut fields: BTreeMap<BreakpointId, Vec<Vec<String>>> = BTreeMap::new();
        let mut words_seen = Vec::new();
        let mut made = 0;
        let mut ty_index = 0;
        while made < identifiers {
            let type_words: Vec<String> = (0..rng.gen_range(1..3)).map(|_| random_word(&mut rng)).collect();
            let method_words: Vec<String> = (0..rng.gen_range(1..4)).map(|_| random_word(&mut rng)).collect();
            let simple: String = type_words.iter().map(|w| capitalized(w)).collect();
            let signature = format!(
                "{}{}()",
                method_words[0],
                method_words[1..].iter().map(|w| capitalized(w)).collect::<String>()
            );
            let full = format!("pkg{ty_index}.{simple}");
            ty_index += 1;
            store
                .declare_type(
                    "p",
                    &TypeDeclaration {
                        full_name: full.clone(),
                        source_path: None,
                        methods: vec![MethodDeclaration { signature: signature.clone(), declared_line: Some(10) }],
                    },
                )
                .unwrap();
            made += 2;
            for _ in 0..rng.gen_range(1..3) {
                let with_method = rng.gen_bool(0.7);
                let bp = store
                    .record_breakpoint(
                        &s.id,
                        &NewBreakpoint {
                            type_full_name: full.clone(),
                            line_number: if with_method { rng.gen_range(11..50) } else { rng.gen_range(1..10) },
                            kind: BreakpointKind::Line,
                            condition: None,
                            created_at: None,
                        },
                    )
                    .unwrap();
                let mut f = vec![type_words.clone()];
                if with_method {
                    f.push(method_words.clone());
                }
                fields.insert(bp.id, f);
            }
            words_seen.extend(type_words);
            words_seen.extend(method_words);
        }
        let snap = store.snapshot();
        for _ in 0..5 {
            let base = words_seen[rng.gen_range(0..words_seen.len())].clone();
            let query = mutate(&mut rng, &base);
            if query.is_empty() {
                continue;
            }
            let bound = if query.chars().count() <= 5 { 1 } else { 2 };
            let mut want: BTreeMap<BreakpointId, f64> = BTreeMap::new();
            let mut want_match: BTreeSet<BreakpointId> = BTreeSet::new();
            for (id, fs) in &fields {
                let best = fs.iter().flatten().map(|t| osa(t, &query)).min().unwrap();
                if best <= bound {
                    want.insert(id.clone(), 1.0 - best as f64 / (bound as f64 + 1.0));
                }
                if fs.iter().flatten().any(|t| *t == query) {
                    want_match.insert(id.clone());
                }
            }
            let fuzzy = search_breakpoints(&snap, &SearchQuery::new(&query, SearchMode::Fuzzy)).unwrap();
            let got: BTreeMap<BreakpointId, f64> = fuzzy.iter().map(|h| (h.breakpoint.id.clone(), h.score)).collect();
            ensure!(got.len() == fuzzy.len(), "corpus {corpus}: duplicate hits for {query:?}");
            ensure!(
                got.keys().eq(want.keys()),
                "corpus {corpus} query {query:?}: {} hits, oracle {}",
                got.len(),
                want.len()
            );
            for (id, score) in &want {
                ensure!((got[id] - score).abs() < 1e-12, "corpus {corpus}: score {} vs {score}", got[id]);
            }
            let matched: BTreeSet<BreakpointId> = search_breakpoints(&snap, &SearchQuery::new(&query, SearchMode::Match))
                .unwrap()
                .into_iter()
                .map(|h| h.breakpoint.id)
                .collect();
            ensure!(matched == want_match, "corpus {corpus}: match set differs for {query:?}");
            ensure!(matched.iter().all(|id| got.contains_key(id)), "corpus {corpus}: match not within fuzzy");
            total_hits += got.len();
        }
    }
    Ok(format!("100 corpora agree with the brute-force oracle ({total_hits} hits)"))
}

fn weight_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let task_keys = ["t1", "t2", "t3"];
    for case in 0..100 {
        let store = common::seeded_store(&task_keys);
        common::random_invocations(&store, &task_keys, &mut rng);
        let snap = store.snapshot();
        let pid = snap.product_named("p").unwrap().id.clone();
        let ids: Vec<TaskId> = task_keys.iter().map(|k| snap.task_by_key(&pid, k).unwrap().id.clone()).collect();
        let mut filters = vec![QueryFilter::all(), QueryFilter::product(pid.clone())];
        for mask in 1..(1u32 << ids.len()) {
            let chosen = ids.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, t)| t.clone());
            filters.push(QueryFilter::product(pid.clone()).with_tasks(chosen));
        }
        for filter in &filters {
            let rows = snap.query_invocations(filter).len() as u64;
            for granularity in [Granularity::MethodLevel, Granularity::TypeLevel] {
                let w = build_call_graph(&snap, filter, granularity).total_weight();
                ensure!(w == rows, "case {case} {granularity:?}: weight {w}, rows {rows}");
            }
        }
    }
    Ok("100 invocation sets, 9 filters each, both granularities".into())
}

async fn get(app: &axum::Router, uri: &str) -> (StatusCode, Vec<u8>) {
    let resp = app
        .clone()
        .oneshot(Request::builder().uri(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

fn api_equivalence() -> Outcome {
    let store = Store::in_memory();
    for f in fixtures::all() {
        store.import_session_log(f.log_text().as_bytes()).map_err(|e| e.to_string())?;
    }
    let store = Arc::new(store);
    let app = service::router(AppState { store: store.clone(), project_root: None });
    let snap = store.snapshot();
    let product = |name: &str| snap.product_named(name).unwrap().id.clone();
    let gv = product(fixtures::GV_PRODUCT);
    let jabref = product(fixtures::STUDY1_PRODUCT);
    let across = product(fixtures::ACROSS_PRODUCT);
    let stepping = snap
        .sessions()
        .find(|s| !snap.session_invocations(&s.id).is_empty() && !s.is_open())
        .ok_or("no session with invocations")?
        .id
        .clone();
    let some_type = snap.type_named(&jabref, "net.sf.jabref.gui.BasePanel").ok_or("no BasePanel type")?.id.clone();
    let developer = snap.developers().next().ok_or("no developers")?.name.clone();
    let task_filter = |p: &ProductId, keys: &[&str]| {
        let mut f = QueryFilter::product(p.clone());
        for k in keys {
            f.task_ids.insert(snap.task_by_key(p, k).unwrap().id.clone());
        }
        f
    };
    let json = |v: serde_json::Result<Vec<u8>>| v.unwrap();

    let cases: Vec<(String, Vec<u8>)> = vec![
        (
            format!("/api/products/{gv}/globalview?tasks=318"),
            export_graph(&build_call_graph(&snap, &task_filter(&gv, &["318"]), Granularity::TypeLevel), GraphFormat::Gvjson),
        ),
        (
            format!("/api/products/{}/globalview", fixtures::GV_PRODUCT),
            export_graph(&build_call_graph(&snap, &QueryFilter::product(gv.clone()), Granularity::TypeLevel), GraphFormat::Gvjson),
        ),
        (
            format!("/api/products/{gv}/globalview?tasks=318,667&granularity=method"),
            export_graph(
                &build_call_graph(&snap, &task_filter(&gv, &["318", "667"]), Granularity::MethodLevel),
                GraphFormat::Gvjson,
            ),
        ),
        (
            format!("/api/products/{gv}/globalview?tasks=667&format=dot"),
            export_graph(&build_call_graph(&snap, &task_filter(&gv, &["667"]), Granularity::TypeLevel), GraphFormat::Dot),
        ),
        (
            format!("/api/products/{across}/recommendations?k=5"),
            json(serde_json::to_vec(&recommend_breakpoints(&snap, &across, None, 5))),
        ),
        (
            format!("/api/products/{jabref}/hotspots"),
            json(serde_json::to_vec(&method_hotspots(&snap, &QueryFilter::product(jabref.clone()), 5))),
        ),
        (
            format!("/api/products/{jabref}/colocated?mode=across_tasks"),
            json(serde_json::to_vec(&colocated_breakpoints(
                &snap,
                &QueryFilter::product(jabref.clone()),
                ColocationMode::AcrossTasks,
            ))),
        ),
        (
            format!("/api/products/{jabref}/classes"),
            json(serde_json::to_vec(&class_task_matrix(&snap, &QueryFilter::product(jabref.clone())))),
        ),
        (
            format!("/api/sessions/{stepping}/metrics"),
            json(serde_json::to_vec(&session_metrics(&snap, &stepping).unwrap())),
        ),
        (
            format!("/api/sessions/{stepping}/sequence-rows"),
            json(serde_json::to_vec(&sequence_stack_rows(&snap, &stepping).unwrap())),
        ),
        (
            "/api/breakpoints/search?q=parser&mode=match".to_owned(),
            json(serde_json::to_vec(
                &search_breakpoints(&snap, &SearchQuery::new("parser", SearchMode::Match)).unwrap(),
            )),
        ),
        (
            format!("/api/breakpoints/search?q=facotry&product={}", fixtures::STUDY1_PRODUCT),
            json(serde_json::to_vec(
                &search_breakpoints(&snap, &{
                    let mut q = SearchQuery::new("facotry", SearchMode::Fuzzy);
                    q.filter = QueryFilter::product(jabref.clone());
                    q
                })
                .unwrap(),
            )),
        ),
        (
            format!("/api/developers/search/findByName?name={developer}"),
            json(serde_json::to_vec(&snap.find_developer_by_name(&developer))),
        ),
        (
            format!("/api/types/{some_type}"),
            json(serde_json::to_vec(&service::type_view(&snap, &some_type, None).unwrap())),
        ),
    ];
    let rt = tokio::runtime::Runtime::new().unwrap();
    for (uri, want) in &cases {
        let (status, body) = rt.block_on(get(&app, uri));
        ensure!(status == StatusCode::OK, "{uri}: status {status}");
        ensure!(body == *want, "{uri}: body differs from the library result");
        let (_, again) = rt.block_on(get(&app, uri));
        ensure!(again == body, "{uri}: repeated read differs");
    }
    Ok(format!("{} endpoints byte-equal", cases.len()))
}

fn group_ratios() -> Outcome {
    let store = fixtures::table10().load().map_err(|e| e.to_string())?;
    let per_task = compare_groups_by_task(&store.snapshot(), &QueryFilter::all(), "control", "experiment")
        .map_err(|e| e.to_string())?;
    let by: BTreeMap<&str, &GroupComparison> = per_task.iter().map(|(t, c)| (t.as_str(), c)).collect();
    let elapsed = by.get("0993").ok_or("no task 0993")?.ratio.elapsed_pct;
    let first = by.get("1026").ok_or("no task 1026")?.ratio.first_breakpoint_pct;
    ensure!(elapsed == Some(53), "0993 elapsed ratio {elapsed:?}");
    ensure!(first == Some(177), "1026 first-breakpoint ratio {first:?}");
    Ok("0993 elapsed 53%, 1026 first breakpoint 177%".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("statement distribution tables", statement_tables),
        ("power-law recovery", power_law),
        ("first-breakpoint identity", first_breakpoint_identity),
        ("co-location, class and method tables", study_rows),
        ("starting/ending oracle", starting_ending),
        ("ingestion determinism", ingestion_determinism),
        ("search soundness and completeness", search_oracle),
        ("weight conservation", weight_conservation),
        ("API equivalence", api_equivalence),
        ("group comparison ratios", group_ratios),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                println!("FAIL  {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
