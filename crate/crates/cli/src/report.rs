//! Running scenarios and rendering reports.
//!
//! A [`Report`] holds only strings, booleans and small integers, so the JSON
//! and text renderings are both deterministic. Player numbers in reports
//! start at 1.

use std::fmt::Write as _;

use cake_core::{
    check_fairness, cut_and_choose, ep_best_order, equitability_procedure, find_dominating,
    find_dominating_contiguous, find_dominating_contiguous_utilities, find_dominating_utilities,
    identical_reports_floor, payoffs_under_reports, rightward_shift_probe, surplus_procedure,
    utilities, Allocation, Axis, DominanceCertificate, EfficiencyError, Procedure, ProcedureError,
    Rational, ShiftProbe, Unsolvable, ValueMeasure,
};
use serde::Serialize;

use crate::scenario::{Check, ProcedureSpec, Scenario};

/// Printed with every probe result.
pub const PROBE_NOTE: &str = "marks move rightward only; pieces go left to right to players \
                              1..n; looks for cuts giving every player the same value above 1/n";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub players: Vec<String>,
    pub runs: Vec<RunReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub procedure: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Detail {
    pub name: String,
    pub value: String,
}

fn detail(name: &str, value: impl ToString) -> Detail {
    Detail {
        name: name.into(),
        value: value.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Ok {
        cuts: Vec<String>,
        /// Owners of the pieces from left to right.
        #[serde(skip_serializing_if = "Option::is_none")]
        order: Option<Vec<usize>>,
        details: Vec<Detail>,
        #[serde(skip_serializing_if = "Option::is_none")]
        degeneracy: Option<String>,
        allocation: Vec<String>,
        payoffs: Vec<String>,
    },
    Error {
        kind: String,
        message: String,
        details: Vec<Detail>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum CheckReport {
    Pareto(DominanceReport),
    ParetoContiguous(DominanceReport),
    Fairness(FairnessSection),
    StrategyFloor(FloorSection),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Dominated,
    Undominated,
    Unavailable,
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Self::Dominated => "DOMINATED",
            Self::Undominated => "UNDOMINATED",
            Self::Unavailable => "UNAVAILABLE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub verdict: Verdict,
    /// Projections searched, for square scenarios.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub searched: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    pub allocation: Vec<String>,
    pub utilities_before: Vec<String>,
    pub utilities_after: Vec<String>,
    pub improvements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairnessSection {
    pub proportional: bool,
    pub envy_free: bool,
    pub equitable: bool,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FloorSection {
    pub identical_reports: Vec<FloorEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub misreports: Vec<MisreportEntry>,
}

/// Every player reports the measure of `measure_of`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FloorEntry {
    pub measure_of: usize,
    pub result: FloorResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum FloorResult {
    Ok {
        payoffs: Vec<String>,
        min: String,
        share: String,
        holds: bool,
    },
    Error {
        kind: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MisreportEntry {
    pub player: usize,
    pub result: MisreportResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MisreportResult {
    Ok {
        allocation: Vec<String>,
        reported_payoffs: Vec<String>,
        true_payoffs: Vec<String>,
        /// The misreporting player's payoff when everyone is truthful.
        #[serde(skip_serializing_if = "Option::is_none")]
        truthful_payoff: Option<String>,
    },
    Error {
        kind: String,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaselineReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<String>,
    pub allocation: Vec<String>,
    pub utilities: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub note: String,
    pub marks: Vec<String>,
    pub result: ProbeResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ProbeResult {
    Witness {
        cuts: Vec<String>,
        value: String,
        allocation: Vec<String>,
    },
    Exhausted {
        #[serde(skip_serializing_if = "Option::is_none")]
        best_cuts: Option<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        best_value: Option<String>,
    },
    Error {
        kind: String,
        message: String,
    },
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn portions(a: &Allocation) -> Vec<String> {
    a.portions.iter().map(ToString::to_string).collect()
}

fn one_based(xs: &[usize]) -> Vec<usize> {
    xs.iter().map(|k| k + 1).collect()
}

fn error_kind(e: &ProcedureError) -> &'static str {
    match e {
        ProcedureError::NonUniqueMedian { .. } => "NonUniqueMedian",
        ProcedureError::NoSolution(_) => "NoSolution",
        ProcedureError::InvalidInput(_) => "InvalidInput",
    }
}

fn error_details(e: &ProcedureError) -> Vec<Detail> {
    match e {
        ProcedureError::NonUniqueMedian { player, lo, hi } => vec![
            detail("player", player + 1),
            detail("flat interval", format!("[{lo}, {hi}]")),
        ],
        ProcedureError::NoSolution(u) => match u {
            Unsolvable::ResidualJump { t, left, right } => vec![
                detail("reason", "ResidualJump"),
                detail("t", t),
                detail("left", left),
                detail("right", right),
            ],
            Unsolvable::PieceSkips {
                t,
                piece,
                player,
                cut,
                without_atom,
                with_atom,
            } => vec![
                detail("reason", "PieceSkips"),
                detail("t", t),
                detail("piece", piece + 1),
                detail("player", player + 1),
                detail("cut", cut),
                detail("without atom", without_atom),
                detail("with atom", with_atom),
            ],
            Unsolvable::SurplusJump { at, left, right } => vec![
                detail("reason", "SurplusJump"),
                detail("at", at),
                detail("left", left),
                detail("right", right),
            ],
        },
        ProcedureError::InvalidInput(_) => Vec::new(),
    }
}

fn error_outcome(e: &ProcedureError) -> Outcome {
    Outcome::Error {
        kind: error_kind(e).into(),
        message: e.to_string(),
        details: error_details(e),
    }
}

/// Allocation and payoffs of a successful run.
struct Ran {
    allocation: Allocation,
    payoffs: Vec<Rational>,
}

fn run_procedure(spec: &ProcedureSpec, ms: &[ValueMeasure]) -> (Outcome, Option<Ran>) {
    let sep = |xs: &[Rational]| {
        xs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    match spec {
        ProcedureSpec::CutAndChoose => {
            let r = cut_and_choose(&ms[0], &ms[1]);
            let outcome = Outcome::Ok {
                cuts: vec![r.cut.to_string()],
                order: Some(if r.chooser_took_left {
                    vec![r.chooser + 1, r.cutter + 1]
                } else {
                    vec![r.cutter + 1, r.chooser + 1]
                }),
                details: vec![
                    detail("cutter player", r.cutter + 1),
                    detail("cutter median", &r.cutter_median),
                    detail(
                        "chooser takes",
                        if r.chooser_took_left { "left" } else { "right" },
                    ),
                ],
                degeneracy: r.degeneracy.as_ref().map(ToString::to_string),
                allocation: portions(&r.allocation),
                payoffs: strings(&r.payoffs),
            };
            let ran = Ran {
                allocation: r.allocation,
                payoffs: r.payoffs,
            };
            (outcome, Some(ran))
        }
        ProcedureSpec::Surplus => match surplus_procedure(&ms[0], &ms[1]) {
            Ok(r) => {
                let props: Vec<String> = r
                    .surplus_proportions
                    .iter()
                    .map(|p| p.as_ref().map_or_else(|| "-".into(), ToString::to_string))
                    .collect();
                let outcome = Outcome::Ok {
                    cuts: vec![r.cut.to_string()],
                    order: Some(vec![r.left_player + 1, 2 - r.left_player]),
                    details: vec![
                        detail("medians", sep(&r.medians)),
                        detail("surplus", format!("[{}, {})", r.surplus.0, r.surplus.1)),
                        detail("left player", r.left_player + 1),
                        detail("surplus values", sep(&r.surplus_values)),
                        detail("surplus proportions", props.join(", ")),
                    ],
                    degeneracy: r.degeneracy.as_ref().map(ToString::to_string),
                    allocation: portions(&r.allocation),
                    payoffs: strings(&r.payoffs),
                };
                let ran = Ran {
                    allocation: r.allocation,
                    payoffs: r.payoffs,
                };
                (outcome, Some(ran))
            }
            Err(e) => (error_outcome(&e), None),
        },
        ProcedureSpec::Equitability { .. } | ProcedureSpec::EquitabilityBestOrder => {
            let result = match spec {
                ProcedureSpec::Equitability { order } => {
                    let order = order.clone().unwrap_or_else(|| (0..ms.len()).collect());
                    equitability_procedure(ms, &order)
                }
                _ => ep_best_order(ms),
            };
            match result {
                Ok(r) => {
                    let outcome = Outcome::Ok {
                        cuts: strings(&r.cuts),
                        order: Some(one_based(&r.order)),
                        details: vec![detail("common value", &r.common_value)],
                        degeneracy: None,
                        allocation: portions(&r.allocation),
                        payoffs: strings(&r.payoffs),
                    };
                    let ran = Ran {
                        allocation: r.allocation,
                        payoffs: r.payoffs,
                    };
                    (outcome, Some(ran))
                }
                Err(e) => (error_outcome(&e), None),
            }
        }
    }
}

fn certificate_report(c: &DominanceCertificate, axis: Option<Axis>) -> CertificateReport {
    CertificateReport {
        axis: axis.map(|a| a.to_string()),
        cuts: c.contiguous.as_ref().map(|cc| strings(&cc.cuts)),
        order: c.contiguous.as_ref().map(|cc| one_based(&cc.order)),
        allocation: portions(&c.allocation),
        utilities_before: strings(&c.utilities_before),
        utilities_after: strings(&c.utilities_after),
        improvements: strings(&c.improvements),
    }
}

/// Searches the allocation's own projection first, then every other
/// declared projection against the same utilities.
fn dominance(
    s: &Scenario,
    own_axis: Option<Axis>,
    allocation: &Allocation,
    baseline: &[Rational],
    contiguous: bool,
) -> DominanceReport {
    let mut axes = vec![own_axis];
    axes.extend(
        s.axes
            .iter()
            .copied()
            .filter(|a| Some(*a) != own_axis)
            .map(Some),
    );
    let mut errors: Vec<String> = Vec::new();
    for (k, axis) in axes.iter().enumerate() {
        let ms = s.measures_on(*axis);
        let found: Result<Option<DominanceCertificate>, EfficiencyError> =
            match (k == 0, contiguous) {
                (true, false) => find_dominating(allocation, &ms),
                (true, true) => find_dominating_contiguous(allocation, &ms),
                (false, false) => find_dominating_utilities(baseline, &ms),
                (false, true) => find_dominating_contiguous_utilities(baseline, &ms),
            };
        match found {
            Ok(Some(c)) => {
                return DominanceReport {
                    verdict: Verdict::Dominated,
                    searched: axes
                        .iter()
                        .take(k + 1)
                        .flatten()
                        .map(ToString::to_string)
                        .collect(),
                    reason: None,
                    certificate: Some(certificate_report(&c, *axis)),
                }
            }
            Ok(None) => {}
            Err(e) => errors.push(match axis {
                Some(a) => format!("{a}: {e}"),
                None => e.to_string(),
            }),
        }
    }
    let searched = axes.iter().flatten().map(ToString::to_string).collect();
    if errors.is_empty() {
        DominanceReport {
            verdict: Verdict::Undominated,
            searched,
            reason: None,
            certificate: None,
        }
    } else {
        DominanceReport {
            verdict: Verdict::Unavailable,
            searched,
            reason: Some(errors.join("; ")),
            certificate: None,
        }
    }
}

fn fairness(allocation: &Allocation, ms: &[ValueMeasure]) -> FairnessSection {
    let f = check_fairness(allocation, ms);
    FairnessSection {
        proportional: f.proportional,
        envy_free: f.envy_free,
        equitable: f.equitable,
        witnesses: f.witnesses.iter().map(ToString::to_string).collect(),
    }
}

fn strategy_floor(s: &Scenario, spec: &ProcedureSpec, ms: &[ValueMeasure]) -> FloorSection {
    let n = ms.len();
    let procedure: Procedure = spec.to_procedure(n);
    let mut identical_reports = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        if ms[..i].contains(m) {
            continue;
        }
        let result = match identical_reports_floor(&procedure, m, n) {
            Ok(f) => FloorResult::Ok {
                payoffs: strings(&f.payoffs),
                min: f.min.to_string(),
                share: f.share.to_string(),
                holds: f.holds,
            },
            Err(e) => FloorResult::Error {
                kind: error_kind(&e).into(),
                message: e.to_string(),
            },
        };
        identical_reports.push(FloorEntry {
            measure_of: i + 1,
            result,
        });
    }
    let truthful = procedure.run(ms).ok();
    let misreports = s
        .misreports
        .iter()
        .map(|r| {
            let mut reports = ms.to_vec();
            reports[r.player] = r.measure.clone();
            let result = match payoffs_under_reports(&procedure, ms, &reports) {
                Ok(o) => MisreportResult::Ok {
                    allocation: portions(&o.allocation),
                    reported_payoffs: strings(&o.reported_payoffs),
                    true_payoffs: strings(&o.true_payoffs),
                    truthful_payoff: truthful.as_ref().map(|(_, p)| p[r.player].to_string()),
                },
                Err(e) => MisreportResult::Error {
                    kind: error_kind(&e).into(),
                    message: e.to_string(),
                },
            };
            MisreportEntry {
                player: r.player + 1,
                result,
            }
        })
        .collect();
    FloorSection {
        identical_reports,
        misreports,
    }
}

pub fn run_scenario(s: &Scenario) -> Report {
    let axes: Vec<Option<Axis>> = if s.is_square() {
        s.axes.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let mut runs = Vec::new();
    for spec in &s.procedures {
        for &axis in &axes {
            let ms = s.measures_on(axis);
            let (outcome, ran) = run_procedure(spec, &ms);
            let mut checks = Vec::new();
            for &check in &s.checks {
                let section = match (check, &ran) {
                    (Check::Pareto, Some(r)) => {
                        CheckReport::Pareto(dominance(s, axis, &r.allocation, &r.payoffs, false))
                    }
                    (Check::ParetoContiguous, Some(r)) => CheckReport::ParetoContiguous(dominance(
                        s,
                        axis,
                        &r.allocation,
                        &r.payoffs,
                        true,
                    )),
                    (Check::Fairness, Some(r)) => {
                        CheckReport::Fairness(fairness(&r.allocation, &ms))
                    }
                    (Check::StrategyFloor, _) => {
                        CheckReport::StrategyFloor(strategy_floor(s, spec, &ms))
                    }
                    (_, None) => continue,
                };
                checks.push(section);
            }
            runs.push(RunReport {
                procedure: spec.name().into(),
                axis: axis.map(|a| a.to_string()),
                outcome,
                checks,
            });
        }
    }

    let baseline =
        s.baseline.as_ref().map(|b| {
            let ms = s.measures_on(b.axis);
            let utils = utilities(&b.allocation, &ms).expect("baseline validated");
            let mut checks = Vec::new();
            for &check in &s.checks {
                match check {
                    Check::Pareto => checks.push(CheckReport::Pareto(dominance(
                        s,
                        b.axis,
                        &b.allocation,
                        &utils,
                        false,
                    ))),
                    Check::ParetoContiguous => checks.push(CheckReport::ParetoContiguous(
                        dominance(s, b.axis, &b.allocation, &utils, true),
                    )),
                    Check::Fairness => {
                        checks.push(CheckReport::Fairness(fairness(&b.allocation, &ms)))
                    }
                    Check::StrategyFloor => {}
                }
            }
            BaselineReport {
                axis: b.axis.map(|a| a.to_string()),
                allocation: portions(&b.allocation),
                utilities: strings(&utils),
                checks,
            }
        });

    let probe = s.probe.as_ref().map(|p| {
        let result = match rightward_shift_probe(&s.measures_on(None), &p.marks) {
            Ok(ShiftProbe::Witness {
                cuts,
                value,
                allocation,
            }) => ProbeResult::Witness {
                cuts: strings(&cuts),
                value: value.to_string(),
                allocation: portions(&allocation),
            },
            Ok(ShiftProbe::Exhausted { best }) => ProbeResult::Exhausted {
                best_cuts: best.as_ref().map(|(c, _)| strings(c)),
                best_value: best.as_ref().map(|(_, t)| t.to_string()),
            },
            Err(e) => ProbeResult::Error {
                kind: error_kind(&e).into(),
                message: e.to_string(),
            },
        };
        ProbeReport {
            note: PROBE_NOTE.into(),
            marks: strings(&p.marks),
            result,
        }
    });

    Report {
        scenario: s.name.clone(),
        description: s.description.clone(),
        players: s.players.iter().map(|p| p.name.clone()).collect(),
        runs,
        baseline,
        probe,
    }
}

impl Report {
    /// Pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "scenario: {}", self.scenario);
        if let Some(d) = &self.description {
            let _ = writeln!(w, "description: {d}");
        }
        let _ = writeln!(w, "players:");
        for (i, name) in self.players.iter().enumerate() {
            let _ = writeln!(w, "  {}: {name}", i + 1);
        }
        for (k, run) in self.runs.iter().enumerate() {
            let _ = write!(w, "\nrun {}: {}", k + 1, run.procedure);
            if let Some(axis) = &run.axis {
                let _ = write!(w, " on the {axis} axis");
            }
            let _ = writeln!(w);
            self.outcome_text(w, &run.outcome);
            for c in &run.checks {
                self.check_text(w, c);
            }
        }
        if let Some(b) = &self.baseline {
            let _ = write!(w, "\nbaseline audit");
            if let Some(axis) = &b.axis {
                let _ = write!(w, " on the {axis} axis");
            }
            let _ = writeln!(w);
            self.allocation_text(w, "  ", &b.allocation);
            let _ = writeln!(w, "  utilities: {}", b.utilities.join(", "));
            for c in &b.checks {
                self.check_text(w, c);
            }
        }
        if let Some(p) = &self.probe {
            let _ = writeln!(w, "\nrightward-shift probe");
            let _ = writeln!(w, "  note: {}", p.note);
            let _ = writeln!(w, "  marks: {}", p.marks.join(", "));
            match &p.result {
                ProbeResult::Witness {
                    cuts,
                    value,
                    allocation,
                } => {
                    let _ = writeln!(w, "  result: WITNESS");
                    let _ = writeln!(w, "  cuts: {}", cuts.join(", "));
                    let _ = writeln!(w, "  common value: {value}");
                    self.allocation_text(w, "  ", allocation);
                }
                ProbeResult::Exhausted {
                    best_cuts,
                    best_value,
                } => {
                    let _ = writeln!(w, "  result: EXHAUSTED");
                    if let (Some(c), Some(t)) = (best_cuts, best_value) {
                        let _ = writeln!(
                            w,
                            "  best equal split: cuts {} with value {t}",
                            c.join(", ")
                        );
                    } else {
                        let _ = writeln!(w, "  no equal split at or right of the marks");
                    }
                }
                ProbeResult::Error { kind, message } => {
                    let _ = writeln!(w, "  result: ERROR {kind}: {message}");
                }
            }
        }
        out
    }

    fn allocation_text(&self, w: &mut String, indent: &str, allocation: &[String]) {
        let _ = writeln!(w, "{indent}allocation:");
        for (name, portion) in self.players.iter().zip(allocation) {
            let _ = writeln!(w, "{indent}  {name}: {portion}");
        }
    }

    fn outcome_text(&self, w: &mut String, outcome: &Outcome) {
        match outcome {
            Outcome::Ok {
                cuts,
                order,
                details,
                degeneracy,
                allocation,
                payoffs,
            } => {
                let _ = writeln!(w, "  status: ok");
                let _ = writeln!(w, "  cuts: {}", cuts.join(", "));
                if let Some(order) = order {
                    let order: Vec<String> = order.iter().map(ToString::to_string).collect();
                    let _ = writeln!(w, "  pieces left to right: players {}", order.join(", "));
                }
                for d in details {
                    let _ = writeln!(w, "  {}: {}", d.name, d.value);
                }
                if let Some(d) = degeneracy {
                    let _ = writeln!(w, "  degeneracy: {d}");
                }
                self.allocation_text(w, "  ", allocation);
                let _ = writeln!(w, "  payoffs: {}", payoffs.join(", "));
            }
            Outcome::Error {
                kind,
                message,
                details,
            } => {
                let _ = writeln!(w, "  status: error {kind}");
                let _ = writeln!(w, "  message: {message}");
                for d in details {
                    let _ = writeln!(w, "  {}: {}", d.name, d.value);
                }
            }
        }
    }

    fn check_text(&self, w: &mut String, check: &CheckReport) {
        match check {
            CheckReport::Pareto(d) => self.dominance_text(w, "pareto", d),
            CheckReport::ParetoContiguous(d) => self.dominance_text(w, "pareto-contiguous", d),
            CheckReport::Fairness(f) => {
                let yes = |b: bool| if b { "yes" } else { "no" };
                let _ = writeln!(
                    w,
                    "  check fairness: proportional {}, envy-free {}, equitable {}",
                    yes(f.proportional),
                    yes(f.envy_free),
                    yes(f.equitable)
                );
                for x in &f.witnesses {
                    let _ = writeln!(w, "    {x}");
                }
            }
            CheckReport::StrategyFloor(f) => {
                let _ = writeln!(w, "  check strategy-floor:");
                for e in &f.identical_reports {
                    let _ = write!(
                        w,
                        "    everyone reports player {}'s measure: ",
                        e.measure_of
                    );
                    match &e.result {
                        FloorResult::Ok {
                            payoffs,
                            min,
                            share,
                            holds,
                        } => {
                            let _ = writeln!(
                                w,
                                "payoffs {}, min {min} {} 1/n = {share}",
                                payoffs.join(", "),
                                if *holds { "<=" } else { ">" }
                            );
                        }
                        FloorResult::Error { kind, message } => {
                            let _ = writeln!(w, "error {kind}: {message}");
                        }
                    }
                }
                for m in &f.misreports {
                    let _ = writeln!(w, "    player {} misreports:", m.player);
                    match &m.result {
                        MisreportResult::Ok {
                            allocation,
                            reported_payoffs,
                            true_payoffs,
                            truthful_payoff,
                        } => {
                            self.allocation_text(w, "      ", allocation);
                            let _ = writeln!(
                                w,
                                "      reported payoffs: {}",
                                reported_payoffs.join(", ")
                            );
                            let _ = writeln!(w, "      true payoffs: {}", true_payoffs.join(", "));
                            if let Some(t) = truthful_payoff {
                                let _ = writeln!(w, "      truthful payoff: {t}");
                            }
                        }
                        MisreportResult::Error { kind, message } => {
                            let _ = writeln!(w, "      error {kind}: {message}");
                        }
                    }
                }
            }
        }
    }

    fn dominance_text(&self, w: &mut String, name: &str, d: &DominanceReport) {
        let _ = write!(w, "  check {name}: {}", d.verdict.label());
        if !d.searched.is_empty() {
            let _ = write!(w, " (searched {})", d.searched.join(", "));
        }
        let _ = writeln!(w);
        if let Some(r) = &d.reason {
            let _ = writeln!(w, "    reason: {r}");
        }
        if let Some(c) = &d.certificate {
            if let Some(axis) = &c.axis {
                let _ = writeln!(w, "    on the {axis} axis");
            }
            if let Some(cuts) = &c.cuts {
                let _ = writeln!(w, "    cuts: {}", cuts.join(", "));
            }
            if let Some(order) = &c.order {
                let order: Vec<String> = order.iter().map(ToString::to_string).collect();
                let _ = writeln!(w, "    pieces left to right: players {}", order.join(", "));
            }
            self.allocation_text(w, "    ", &c.allocation);
            let _ = writeln!(w, "    utilities before: {}", c.utilities_before.join(", "));
            let _ = writeln!(w, "    utilities after: {}", c.utilities_after.join(", "));
            let _ = writeln!(w, "    improvements: {}", c.improvements.join(", "));
        }
    }
}
