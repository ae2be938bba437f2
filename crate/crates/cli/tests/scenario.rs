use cake_cli::report::{CheckReport, Outcome, Verdict};
use cake_cli::scenario::{Baseline, Misreport, Player, PlayerMeasure, Probe};
use cake_cli::{
    builtin_counterexample, parse_scenario, run_scenario, Check, ProcedureSpec, Scenario,
    ScenarioError,
};
use cake_core::rational::{int, rat, ParseRationalError};
use cake_core::{
    Allocation, Axis, MeasureError, PiecewiseDensity, Rational, Rect2DMeasure, ValueMeasure,
};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn players_json(extra: &str) -> String {
    format!(
        r#"{{
  "name": "t",
  "players": [
    {{"name": "alice", "measure": {{"breakpoints": ["0", "1"], "densities": ["1"]}}}},
    {{"name": "bob", "measure": {{"breakpoints": ["0", "1/2", "1"], "densities": ["1", "1"]}}}}
  ],
  "procedures": [{{"name": "cut-and-choose"}}]{extra}
}}"#
    )
}

#[test]
fn builtin_two_parses_back() {
    let s = builtin_counterexample(2).unwrap();
    let parsed = parse_scenario(&s.to_json()).unwrap();
    assert_eq!(parsed, s);
    assert_eq!(parsed.players.len(), 2);
    let PlayerMeasure::Interval(p1) = &parsed.players[0].measure else {
        panic!("interval expected")
    };
    let PlayerMeasure::Interval(p2) = &parsed.players[1].measure else {
        panic!("interval expected")
    };
    assert_eq!(p1.density().values(), &[int(1)]);
    assert_eq!(
        p2.density().breakpoints(),
        &[int(0), rat(1, 4), rat(3, 4), int(1)]
    );
    assert_eq!(p2.density().values(), &[int(2), int(0), int(2)]);
}

#[test]
fn all_builtins_round_trip() {
    for id in 1..=3 {
        let s = builtin_counterexample(id).unwrap();
        s.validate().unwrap();
        assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
    }
    assert!(builtin_counterexample(0).is_err());
    assert!(builtin_counterexample(4).is_err());
}

#[test]
fn mass_error_names_player_and_mass() {
    let text = players_json("").replace(r#"["1", "1"]"#, r#"["1", "1/2"]"#);
    let err = parse_scenario(&text).unwrap_err();
    match &err {
        ScenarioError::Measure { player, source } => {
            assert_eq!(player, "bob");
            assert_eq!(*source, MeasureError::Mass(rat(3, 4)));
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(
        err.to_string(),
        "player 'bob': total mass is 3/4, expected 1"
    );
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let text = players_json("").replace(r#"["1", "1"]"#, r#"["1/0", "1"]"#);
    match parse_scenario(&text).unwrap_err() {
        ScenarioError::Rational { field, source } => {
            assert_eq!(field, "players[1].measure.densities[0]");
            assert_eq!(source, ParseRationalError::ZeroDenominator("1/0".into()));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn syntax_error_has_position() {
    let err = parse_scenario("{\n  \"name\": \"t\",\n  \"players\": [,]\n}").unwrap_err();
    match err {
        ScenarioError::Syntax { line, column, .. } => {
            assert_eq!(line, 3);
            assert_eq!(column, 15);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        parse_scenario(r#"{"name": "t", "players": [], "colour": 1}"#),
        Err(ScenarioError::Syntax { .. })
    ));
}

#[test]
fn unknown_names_are_rejected() {
    let text = players_json("").replace("cut-and-choose", "divide-and-conquer");
    assert!(matches!(
        parse_scenario(&text),
        Err(ScenarioError::UnknownProcedure(p)) if p == "divide-and-conquer"
    ));
    let text = players_json(r#", "checks": ["pareto", "envy"]"#);
    assert!(matches!(
        parse_scenario(&text),
        Err(ScenarioError::UnknownCheck(c)) if c == "envy"
    ));
}

#[test]
fn overlapping_breakpoints_are_rejected() {
    let text = players_json("").replace(r#"["0", "1/2", "1"]"#, r#"["0", "1/2", "1/2"]"#);
    assert!(matches!(
        parse_scenario(&text),
        Err(ScenarioError::Measure {
            source: MeasureError::BadBreakpoints,
            ..
        })
    ));
}

#[test]
fn structural_errors() {
    let one_player = r#"{"name": "t", "players": [
        {"name": "a", "measure": {"breakpoints": ["0", "1"], "densities": ["1"]}}],
        "procedures": [{"name": "ep"}]}"#;
    assert!(matches!(
        parse_scenario(one_player),
        Err(ScenarioError::Invalid(_))
    ));

    let bad_order = players_json("").replace(
        r#"{"name": "cut-and-choose"}"#,
        r#"{"name": "ep", "order": [1, 1]}"#,
    );
    assert!(matches!(
        parse_scenario(&bad_order),
        Err(ScenarioError::Invalid(_))
    ));

    let gap = players_json(
        r#", "baseline": {"portions": [{"intervals": [["0", "1/2"]]}, {"intervals": [["3/4", "1"]]}]}"#,
    );
    assert!(matches!(
        parse_scenario(&gap),
        Err(ScenarioError::Baseline(_))
    ));

    let square_without_axis = r#"{"name": "t", "players": [
        {"name": "a", "square": {"x_breakpoints": ["0", "1"], "y_breakpoints": ["0", "1"], "densities": [["1"]]}},
        {"name": "b", "square": {"x_breakpoints": ["0", "1"], "y_breakpoints": ["0", "1"], "densities": [["1"]]}}],
        "procedures": [{"name": "cut-and-choose"}]}"#;
    assert!(matches!(
        parse_scenario(square_without_axis),
        Err(ScenarioError::Invalid(_))
    ));
    let bad_axis = square_without_axis.replace(r#""procedures""#, r#""axes": ["z"], "procedures""#);
    assert!(matches!(
        parse_scenario(&bad_axis),
        Err(ScenarioError::UnknownAxis(a)) if a == "z"
    ));
}

fn only(s: &mut Scenario, procedure: ProcedureSpec, checks: Vec<Check>) {
    s.procedures = vec![procedure];
    s.checks = checks;
}

#[test]
fn counterexample_two_cut_and_choose_is_dominated() {
    let mut s = builtin_counterexample(2).unwrap();
    only(&mut s, ProcedureSpec::CutAndChoose, vec![Check::Pareto]);
    let report = run_scenario(&s);
    assert_eq!(report.runs.len(), 1);
    let run = &report.runs[0];
    let Outcome::Ok { cuts, payoffs, .. } = &run.outcome else {
        panic!("cut-and-choose cannot fail")
    };
    assert_eq!(cuts, &["1/2"]);
    assert_eq!(payoffs, &["1/2", "1/2"]);
    let CheckReport::Pareto(d) = &run.checks[0] else {
        panic!("pareto check expected")
    };
    assert_eq!(d.verdict, Verdict::Dominated);
    let cert = d.certificate.as_ref().unwrap();
    assert_eq!(cert.utilities_before, ["1/2", "1/2"]);
}

#[test]
fn counterexample_two_surplus_reports_flat_median() {
    let mut s = builtin_counterexample(2).unwrap();
    only(&mut s, ProcedureSpec::Surplus, vec![Check::Pareto]);
    let report = run_scenario(&s);
    let run = &report.runs[0];
    let Outcome::Error { kind, details, .. } = &run.outcome else {
        panic!("sp must fail here")
    };
    assert_eq!(kind, "NonUniqueMedian");
    assert_eq!(details[0].value, "2");
    assert_eq!(details[1].value, "[1/4, 3/4]");
    assert!(run.checks.is_empty());
}

#[test]
fn three_uniform_players_under_ep_are_fair() {
    let uniform = |name: &str| Player {
        name: name.into(),
        measure: PlayerMeasure::Interval(ValueMeasure::uniform()),
    };
    let s = Scenario {
        name: "thirds".into(),
        description: None,
        players: vec![uniform("a"), uniform("b"), uniform("c")],
        axes: vec![],
        procedures: vec![ProcedureSpec::Equitability { order: None }],
        checks: vec![Check::Fairness],
        baseline: None,
        misreports: vec![],
        probe: None,
    };
    s.validate().unwrap();
    let report = run_scenario(&s);
    let Outcome::Ok { cuts, payoffs, .. } = &report.runs[0].outcome else {
        panic!("ep solvable")
    };
    assert_eq!(cuts, &["1/3", "2/3"]);
    assert_eq!(payoffs, &["1/3", "1/3", "1/3"]);
    let CheckReport::Fairness(f) = &report.runs[0].checks[0] else {
        panic!("fairness expected")
    };
    assert!(f.proportional && f.envy_free && f.equitable);
    assert!(f.witnesses.is_empty());
}

#[test]
fn reports_are_deterministic() {
    for id in 1..=3 {
        let s = builtin_counterexample(id).unwrap();
        let a = run_scenario(&s);
        let b = run_scenario(&parse_scenario(&s.to_json()).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_text(), b.to_text());
    }
}

// Random valid scenarios for the round-trip property.

fn q(k: i64) -> Rational {
    rat(k, 24)
}

fn measure_from(cuts: Vec<i64>, weights: Vec<i64>, atoms: Vec<(i64, i64)>) -> ValueMeasure {
    let mut bps: Vec<i64> = cuts;
    bps.push(0);
    bps.push(24);
    bps.sort_unstable();
    bps.dedup();
    let bps: Vec<Rational> = bps.into_iter().map(q).collect();
    let mut ws: Vec<Rational> = (0..bps.len() - 1)
        .map(|i| int(weights[i % weights.len()]))
        .collect();
    let mut atom_map: BTreeMap<Rational, Rational> = BTreeMap::new();
    for (at, w) in atoms {
        *atom_map.entry(q(at)).or_insert_with(|| int(0)) += int(w);
    }
    let mut total: Rational = bps
        .windows(2)
        .zip(&ws)
        .fold(int(0), |acc, (b, w)| acc + (&b[1] - &b[0]) * w);
    total += atom_map.values().fold(int(0), |acc, m| acc + m);
    if total == int(0) {
        ws[0] = int(1);
        total = &bps[1] - &bps[0];
    }
    let ws = ws.into_iter().map(|w| w / &total).collect();
    let atom_map = atom_map.into_iter().map(|(k, m)| (k, m / &total)).collect();
    ValueMeasure::new(PiecewiseDensity::new(bps, ws).unwrap(), atom_map).unwrap()
}

fn measure() -> impl Strategy<Value = ValueMeasure> {
    (
        prop::collection::vec(1i64..24, 0..4),
        prop::collection::vec(0i64..5, 1..5),
        prop::collection::vec((0i64..=24, 1i64..4), 0..3),
    )
        .prop_map(|(c, w, a)| measure_from(c, w, a))
}

fn square() -> impl Strategy<Value = Rect2DMeasure> {
    (1usize..3, 1usize..3, prop::collection::vec(0i64..4, 4)).prop_map(|(nx, ny, w)| {
        let axis =
            |n: usize| -> Vec<Rational> { (0..=n).map(|k| rat(k as i64, n as i64)).collect() };
        let (xs, ys) = (axis(nx), axis(ny));
        let mut cells: Vec<Vec<Rational>> = (0..nx)
            .map(|i| (0..ny).map(|j| int(w[(i * ny + j) % 4])).collect())
            .collect();
        let area = rat(1, (nx * ny) as i64);
        let mut total = cells.iter().flatten().fold(int(0), |acc, v| acc + v) * &area;
        if total == int(0) {
            cells[0][0] = int(1);
            total = area;
        }
        let cells = cells
            .into_iter()
            .map(|row| row.into_iter().map(|v| v / &total).collect())
            .collect();
        Rect2DMeasure::new(xs, ys, cells).unwrap()
    })
}

fn subset<T: Clone>(all: &[T], mask: u32) -> Vec<T> {
    all.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, x)| x.clone())
        .collect()
}

fn interval_scenario() -> impl Strategy<Value = Scenario> {
    (
        prop::collection::vec(measure(), 2..4),
        0u32..16,
        0u32..16,
        prop::option::of(prop::collection::vec(1i64..24, 3)),
        prop::option::of((0usize..3, measure())),
        any::<bool>(),
        prop::option::of("[a-z ]{0,12}"),
    )
        .prop_map(|(ms, pmask, cmask, base, mis, probe, description)| {
            let n = ms.len();
            let mut procedures = vec![
                ProcedureSpec::Equitability { order: None },
                ProcedureSpec::Equitability {
                    order: Some((0..n).rev().collect()),
                },
                ProcedureSpec::EquitabilityBestOrder,
            ];
            if n == 2 {
                procedures.push(ProcedureSpec::CutAndChoose);
                procedures.push(ProcedureSpec::Surplus);
            }
            let mut procedures = subset(&procedures, pmask | 1);
            let shift = pmask as usize % procedures.len();
            procedures.rotate_left(shift);
            let mut checks = subset(&Check::ALL, cmask);
            checks.reverse();
            let baseline = base.map(|c| {
                let mut cuts: Vec<Rational> = c[..n - 1].iter().map(|k| q(*k)).collect();
                cuts.sort();
                let order: Vec<usize> = (0..n).rev().collect();
                Baseline {
                    axis: None,
                    allocation: Allocation::from_cuts(&cuts, &order),
                }
            });
            let misreports = mis
                .map(|(p, m)| {
                    vec![Misreport {
                        player: p % n,
                        measure: m,
                    }]
                })
                .unwrap_or_default();
            let probe = probe.then(|| Probe {
                marks: (1..n).map(|k| rat(k as i64, n as i64)).collect(),
            });
            Scenario {
                name: "random".into(),
                description,
                players: ms
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| Player {
                        name: format!("p{i}"),
                        measure: PlayerMeasure::Interval(m),
                    })
                    .collect(),
                axes: vec![],
                procedures,
                checks,
                baseline,
                misreports,
                probe,
            }
        })
}

fn square_scenario() -> impl Strategy<Value = Scenario> {
    (square(), square(), any::<bool>(), any::<bool>(), 1i64..24).prop_map(
        |(a, b, both, with_baseline, cut)| {
            let axes = if both {
                vec![Axis::Y, Axis::X]
            } else {
                vec![Axis::X]
            };
            Scenario {
                name: "square".into(),
                description: None,
                players: vec![
                    Player {
                        name: "a".into(),
                        measure: PlayerMeasure::Square(a),
                    },
                    Player {
                        name: "b".into(),
                        measure: PlayerMeasure::Square(b),
                    },
                ],
                axes,
                procedures: vec![ProcedureSpec::CutAndChoose],
                checks: vec![Check::Pareto],
                baseline: with_baseline.then(|| Baseline {
                    axis: Some(Axis::Y),
                    allocation: Allocation::from_cuts(&[q(cut)], &[0, 1]),
                }),
                misreports: vec![],
                probe: None,
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scenarios_round_trip(s in prop_oneof![interval_scenario(), square_scenario()]) {
        prop_assert!(s.validate().is_ok());
        let text = s.to_json();
        let back = parse_scenario(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json(), text);
    }
}
