//! The analysis tables over the shipped study corpora.

use std::collections::BTreeMap;

use swarm_debugging::fixtures;
use swarm_debugging::metrics::*;
use swarm_debugging::QueryFilter;

fn rows(rows: &[ColocatedRow]) -> Vec<(String, String, u32, usize)> {
    rows.iter()
        .map(|r| (r.tasks.join(";"), r.type_name.clone(), r.location.line_number, r.count))
        .collect()
}

fn owned(xs: &[(&str, &str, u32, usize)]) -> Vec<(String, String, u32, usize)> {
    let mut v: Vec<_> = xs.iter().map(|&(t, c, l, n)| (t.to_owned(), c.to_owned(), l, n)).collect();
    v.sort_by(|a, b| (&a.1, a.2, &a.0).cmp(&(&b.1, b.2, &b.0)));
    v
}

#[test]
fn same_line_same_task_study1() {
    let store = fixtures::study1().load().unwrap();
    let got = colocated_breakpoints(&store.snapshot(), &QueryFilter::all(), ColocationMode::SameTask);
    let expected = owned(&[
        ("318", "AuthorsFormatter", 43, 5),
        ("318", "AuthorsFormatter", 131, 3),
        ("667", "BasePanel", 935, 2),
        ("667", "BasePanel", 969, 3),
        ("667", "JabRefDesktop", 430, 2),
        ("669", "OpenDatabaseAction", 268, 2),
        ("669", "OpenDatabaseAction", 433, 4),
        ("669", "OpenDatabaseAction", 451, 4),
        ("993", "EntryEditor", 717, 2),
        ("993", "EntryEditor", 720, 2),
        ("993", "EntryEditor", 723, 2),
        ("993", "BibDatabase", 187, 2),
        ("993", "BibDatabase", 456, 2),
        ("1026", "EntryEditor", 1184, 2),
        ("1026", "BibtexParser", 160, 2),
    ]);
    assert_eq!(rows(&got), expected);
}

#[test]
fn same_line_same_task_study2() {
    let store = fixtures::study2().load().unwrap();
    let got = colocated_breakpoints(&store.snapshot(), &QueryFilter::all(), ColocationMode::SameTask);
    let expected = owned(&[
        ("PdfSam", "PdfReader", 230, 2),
        ("PdfSam", "PdfReader", 806, 2),
        ("PdfSam", "PdfReader", 1923, 2),
        ("PdfSam", "ConsoleServicesFacade", 89, 2),
        ("PdfSam", "ConsoleClient", 81, 2),
        ("PdfSam", "PdfUtility", 94, 2),
        ("PdfSam", "PdfUtility", 96, 2),
        ("PdfSam", "PdfUtility", 102, 2),
        ("Raptor", "icsUtils", 333, 3),
        ("Raptor", "Game", 1751, 2),
        ("Raptor", "ExamineController", 41, 2),
        ("Raptor", "ExamineController", 84, 3),
        ("Raptor", "ExamineController", 87, 2),
        ("Raptor", "ExamineController", 92, 2),
    ]);
    assert_eq!(rows(&got), expected);
}

#[test]
fn same_line_across_tasks_study1() {
    let store = fixtures::study1().load().unwrap();
    let got = colocated_breakpoints(&store.snapshot(), &QueryFilter::all(), ColocationMode::AcrossTasks);
    let got: BTreeMap<(String, u32), usize> =
        got.iter().map(|r| ((r.type_name.clone(), r.location.line_number), r.count)).collect();
    let table: &[(&str, &[(u32, usize)])] = &[
        ("BibtexParser", &[(138, 2), (151, 2), (159, 2), (160, 3), (165, 2), (168, 3), (176, 2), (198, 2), (199, 2), (299, 2)]),
        ("EntryEditor", &[(717, 3), (720, 4), (721, 2), (723, 2), (837, 3), (842, 2), (1184, 3), (1393, 2)]),
        ("BibDatabase", &[(175, 2), (187, 3), (223, 2), (456, 6)]),
        ("OpenDatabaseAction", &[(433, 4), (450, 2), (451, 4)]),
        ("JabRefDesktop", &[(40, 2), (84, 2), (430, 3)]),
        ("SaveDatabaseAction", &[(177, 4), (188, 2)]),
        ("BasePanel", &[(935, 2), (969, 5)]),
        ("AuthorsFormatter", &[(43, 5)]),
        ("JabRefMain", &[(8, 5)]),
        ("URLUtil", &[(95, 2)]),
    ];
    let mut expected = BTreeMap::new();
    for (ty, lines) in table {
        for &(l, n) in *lines {
            expected.insert((ty.to_string(), l), n);
        }
    }
    // rows the printed table cannot satisfy together with the per-task table
    expected.insert(("AuthorsFormatter".into(), 131), 3);
    expected.insert(("OpenDatabaseAction".into(), 268), 2);
    assert_eq!(got, expected);
}

#[test]
fn base_panel_969_spans_three_tasks() {
    let store = fixtures::study1().load().unwrap();
    let got = colocated_breakpoints(&store.snapshot(), &QueryFilter::all(), ColocationMode::AcrossTasks);
    let row = got.iter().find(|r| r.type_name == "BasePanel" && r.location.line_number == 969).unwrap();
    assert_eq!((row.count, row.developers, row.tasks.len()), (5, 5, 3));
}

#[test]
fn classes_across_tasks() {
    let store = fixtures::study1().load().unwrap();
    let got: Vec<(String, String, usize, usize)> = class_task_matrix(&store.snapshot(), &QueryFilter::all())
        .into_iter()
        .map(|r| (r.type_name, r.tasks.join(","), r.breakpoints, r.developers))
        .collect();
    let mut expected: Vec<(String, String, usize, usize)> = [
        ("SaveDatabaseAction", "1026,669,993", 7, 2),
        ("BasePanel", "1026,318,667,669", 14, 7),
        ("JabRefDesktop", "318,667", 9, 4),
        ("EntryEditor", "1026,669,993", 36, 4),
        ("BibtexParser", "1026,669,993", 44, 6),
        ("OpenDatabaseAction", "1026,669,993", 19, 13),
        ("JabRef", "318,667,669", 3, 3),
        ("JabRefMain", "318,667,669,993", 5, 4),
        ("URLUtil", "318,667", 4, 2),
        ("BibDatabase", "1026,669,993", 19, 4),
    ]
    .iter()
    .map(|&(a, b, c, d)| (a.to_owned(), b.to_owned(), c, d))
    .collect();
    expected.sort();
    assert_eq!(got, expected);
    let covered: usize = got.iter().map(|r| r.2).sum();
    assert_eq!(covered, 160);
}

#[test]
fn methods_with_five_or_more() {
    let store = fixtures::study1().load().unwrap();
    let spots = method_hotspots(&store.snapshot(), &QueryFilter::all(), 5);
    assert_eq!(spots.len(), 13);
    assert_eq!(spots[0].label(), "EntryEditor.storeSource()");
    assert_eq!(spots[0].breakpoint_count, 24);
    let parse = spots.iter().find(|h| h.label() == "BibtexParser.parseFileContent()").unwrap();
    assert_eq!(parse.breakpoint_count, 20);
    let two_or_more = method_hotspots(&store.snapshot(), &QueryFilter::all(), 2);
    assert!(two_or_more.len() >= 13);
}

#[test]
fn statement_distributions() {
    let f = fixtures::study1();
    let store = f.load().unwrap();
    let d = statement_type_distribution(&store.snapshot(), &QueryFilter::all(), &f.source_resolver()).unwrap();
    let got: Vec<(StatementClass, usize)> = d.iter().map(|r| (r.statement_class, r.count)).collect();
    use StatementClass::*;
    assert_eq!(got, vec![(Call, 111), (IfStatement, 39), (Assignment, 36), (Return, 18), (WhileLoop, 3)]);
    let pct: Vec<u32> = d.iter().map(|r| r.percent).collect();
    for (p, printed) in pct.iter().zip([53, 19, 17, 10, 1]) {
        assert!(p.abs_diff(printed) <= 1, "{pct:?}");
    }

    let f = fixtures::study2();
    let store = f.load().unwrap();
    let d = statement_type_distribution(&store.snapshot(), &QueryFilter::all(), &f.source_resolver()).unwrap();
    let got: BTreeMap<StatementClass, (usize, u32)> = d.iter().map(|r| (r.statement_class, (r.count, r.percent))).collect();
    assert_eq!(got[&Call], (43, 43));
    assert_eq!(got[&IfStatement], (22, 22));
    assert_eq!(got[&Assignment], (27, 27));
    assert_eq!(got[&Return], (4, 4));
    assert_eq!(got[&WhileLoop], (4, 4));
}

#[test]
fn elapsed_by_task_and_first_breakpoint() {
    let store = fixtures::study1().load().unwrap();
    let metrics = all_session_metrics(&store.snapshot(), &QueryFilter::all());
    assert_eq!(metrics.len(), 35);
    let stats = first_breakpoint_stats(&metrics).unwrap();
    assert!((stats.mean_mfb - 0.27).abs() <= 0.005, "{}", stats.mean_mfb);
    assert!((stats.sd_mfb - 0.17).abs() <= 0.005, "{}", stats.sd_mfb);
    let minutes: BTreeMap<&str, (i64, i64)> = stats
        .per_task
        .iter()
        .map(|t| (t.task.as_str(), ((t.mean_et_ms / 60_000.0).round() as i64, (t.sd_et_ms / 60_000.0).round() as i64)))
        .collect();
    assert_eq!(minutes["318"], (44, 64));
    assert_eq!(minutes["667"], (28, 29));
    assert_eq!(minutes["669"], (22, 25));
    assert_eq!(minutes["993"], (25, 25));
    assert_eq!(minutes["1026"], (25, 17));

    let fit = fit_power_law(&fit_points(&metrics)).unwrap();
    assert!(fit.rho < 0.0);

    let store = fixtures::study2().load().unwrap();
    let metrics = all_session_metrics(&store.snapshot(), &QueryFilter::all());
    let stats = first_breakpoint_stats(&metrics).unwrap();
    assert!((stats.mean_mfb - 0.23).abs() <= 0.005);
    assert!((stats.sd_mfb - 0.17).abs() <= 0.005);
    let minutes: BTreeMap<&str, (i64, i64)> = stats
        .per_task
        .iter()
        .map(|t| (t.task.as_str(), ((t.mean_et_ms / 60_000.0).round() as i64, (t.sd_et_ms / 60_000.0).round() as i64)))
        .collect();
    assert_eq!(minutes["PdfSam"], (54, 18));
    assert_eq!(minutes["Raptor"], (59, 13));
}

#[test]
fn control_versus_experiment() {
    let store = fixtures::table10().load().unwrap();
    let per_task = compare_groups_by_task(&store.snapshot(), &QueryFilter::all(), "control", "experiment").unwrap();
    let by: BTreeMap<&str, &GroupComparison> = per_task.iter().map(|(t, c)| (t.as_str(), c)).collect();
    let t993 = by["0993"];
    assert_eq!(t993.ratio.first_breakpoint_pct, Some(126));
    assert_eq!(t993.ratio.time_to_start_pct, Some(112));
    assert_eq!(t993.ratio.elapsed_pct, Some(53));
    assert_eq!(t993.control.elapsed_s, 1808.0);
    assert_eq!(t993.experiment.elapsed_s, 965.0);
    assert_eq!(t993.delta.elapsed_s, 843.0);
    let t1026 = by["1026"];
    assert_eq!(t1026.ratio.first_breakpoint_pct, Some(177));
    assert_eq!(t1026.ratio.time_to_start_pct, Some(92));
    assert_eq!(t1026.ratio.elapsed_pct, Some(83));
    assert_eq!(t1026.delta.first_breakpoint_s.map(f64::round), Some(-126.0));
    assert_eq!(t1026.delta.time_to_start_s, Some(19.0));
    assert_eq!(t1026.delta.elapsed_s, 257.0);
}

#[test]
fn recommendations_start_with_the_shared_line() {
    let store = fixtures::across_tasks().load().unwrap();
    let snap = store.snapshot();
    let product = snap.product_named(fixtures::ACROSS_PRODUCT).unwrap().id.clone();
    let recs = recommend_breakpoints(&snap, &product, None, 20);
    assert_eq!(recs[0].label(), "BasePanel:969");
    assert_eq!((recs[0].breakpoint_count, recs[0].distinct_developers, recs[0].distinct_tasks), (5, 5, 3));
    for i in 0..recs.len() {
        for j in i + 1..recs.len() {
            assert_ne!(recommendation_order(&recs[i], &recs[j]), std::cmp::Ordering::Greater);
        }
    }
}
