//! Scenario documents: parsing, validation and serialization.
//!
//! A scenario is a JSON document. Every number is an exact rational written
//! as a string, `"p/q"` or `"p"`. Players are numbered from 1 in documents
//! and from 0 in memory.

use std::collections::{BTreeMap, BTreeSet};

use cake_core::rational::{parse_rational, ParseRationalError};
use cake_core::{
    project_2d, Allocation, AllocationError, Axis, IntervalSet, MeasureError, PiecewiseDensity,
    Procedure, Rational, Rect2DMeasure, ValueMeasure,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {source}")]
    Rational {
        field: String,
        source: ParseRationalError,
    },
    #[error("player '{player}': {source}")]
    Measure {
        player: String,
        source: MeasureError,
    },
    #[error("baseline: {0}")]
    Baseline(AllocationError),
    #[error("unknown procedure '{0}' (expected cut-and-choose, sp, ep or ep-best-order)")]
    UnknownProcedure(String),
    #[error(
        "unknown check '{0}' (expected pareto, pareto-contiguous, fairness or strategy-floor)"
    )]
    UnknownCheck(String),
    #[error("unknown axis '{0}' (expected x or y)")]
    UnknownAxis(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlayerMeasure {
    Interval(ValueMeasure),
    Square(Rect2DMeasure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Player {
    pub name: String,
    pub measure: PlayerMeasure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProcedureSpec {
    CutAndChoose,
    Surplus,
    /// `None` runs the players in their listed order.
    Equitability {
        order: Option<Vec<usize>>,
    },
    EquitabilityBestOrder,
}

impl ProcedureSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CutAndChoose => "cut-and-choose",
            Self::Surplus => "sp",
            Self::Equitability { .. } => "ep",
            Self::EquitabilityBestOrder => "ep-best-order",
        }
    }

    /// Parses a bare procedure name; `ep` gets the listed order.
    pub fn from_name(name: &str) -> Result<Self, ScenarioError> {
        match name {
            "cut-and-choose" => Ok(Self::CutAndChoose),
            "sp" => Ok(Self::Surplus),
            "ep" => Ok(Self::Equitability { order: None }),
            "ep-best-order" => Ok(Self::EquitabilityBestOrder),
            other => Err(ScenarioError::UnknownProcedure(other.into())),
        }
    }

    pub fn to_procedure(&self, players: usize) -> Procedure {
        match self {
            Self::CutAndChoose => Procedure::CutAndChoose,
            Self::Surplus => Procedure::Surplus,
            Self::Equitability { order } => Procedure::Equitability {
                order: order.clone().unwrap_or_else(|| (0..players).collect()),
            },
            Self::EquitabilityBestOrder => Procedure::EquitabilityBestOrder,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Check {
    Pareto,
    ParetoContiguous,
    Fairness,
    StrategyFloor,
}

impl Check {
    pub const ALL: [Check; 4] = [
        Check::Pareto,
        Check::ParetoContiguous,
        Check::Fairness,
        Check::StrategyFloor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Pareto => "pareto",
            Self::ParetoContiguous => "pareto-contiguous",
            Self::Fairness => "fairness",
            Self::StrategyFloor => "strategy-floor",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ScenarioError> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| ScenarioError::UnknownCheck(name.into()))
    }
}

pub fn axis_from_name(name: &str) -> Result<Axis, ScenarioError> {
    match name {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        other => Err(ScenarioError::UnknownAxis(other.into())),
    }
}

/// An explicit allocation to audit. On the square it lives on the
/// projection along `axis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Baseline {
    pub axis: Option<Axis>,
    pub allocation: Allocation,
}

/// `player` reports `measure` instead of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Misreport {
    pub player: usize,
    pub measure: ValueMeasure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub marks: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    pub players: Vec<Player>,
    /// Cut axes, run in this order. Empty for interval scenarios.
    pub axes: Vec<Axis>,
    pub procedures: Vec<ProcedureSpec>,
    pub checks: Vec<Check>,
    pub baseline: Option<Baseline>,
    pub misreports: Vec<Misreport>,
    pub probe: Option<Probe>,
}

impl Scenario {
    pub fn is_square(&self) -> bool {
        self.players
            .iter()
            .any(|p| matches!(p.measure, PlayerMeasure::Square(_)))
    }

    /// Interval measures of all players; on the square, their projections
    /// along `axis`.
    pub fn measures_on(&self, axis: Option<Axis>) -> Vec<ValueMeasure> {
        self.players
            .iter()
            .map(|p| match (&p.measure, axis) {
                (PlayerMeasure::Interval(m), _) => m.clone(),
                (PlayerMeasure::Square(m), Some(axis)) => project_2d(m, axis),
                (PlayerMeasure::Square(_), None) => {
                    panic!("square measure of '{}' needs an axis", p.name)
                }
            })
            .collect()
    }

    /// Structural checks that the measures themselves cannot express.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |msg: String| Err(ScenarioError::Invalid(msg));
        let n = self.players.len();
        if n < 2 {
            return invalid(format!("need at least 2 players, got {n}"));
        }
        let mut names = BTreeSet::new();
        for p in &self.players {
            if p.name.is_empty() {
                return invalid("player names must not be empty".into());
            }
            if !names.insert(p.name.as_str()) {
                return invalid(format!("duplicate player name '{}'", p.name));
            }
        }
        let square = self.is_square();
        if square
            && self
                .players
                .iter()
                .any(|p| matches!(p.measure, PlayerMeasure::Interval(_)))
        {
            return invalid("players mix interval and square measures".into());
        }
        if square && self.axes.is_empty() {
            return invalid("square scenarios must declare at least one axis".into());
        }
        if !square && !self.axes.is_empty() {
            return invalid("axes only apply to square scenarios".into());
        }
        if self.axes.iter().collect::<BTreeSet<_>>().len() != self.axes.len() {
            return invalid("duplicate axis".into());
        }
        if self.checks.iter().collect::<BTreeSet<_>>().len() != self.checks.len() {
            return invalid("duplicate check".into());
        }
        if self.procedures.is_empty() && self.baseline.is_none() {
            return invalid("nothing to do: no procedures and no baseline".into());
        }
        for proc in &self.procedures {
            match proc {
                ProcedureSpec::CutAndChoose | ProcedureSpec::Surplus if n != 2 => {
                    return invalid(format!("{} needs exactly 2 players, got {n}", proc.name()));
                }
                ProcedureSpec::Equitability { order: Some(order) } => {
                    let mut sorted = order.clone();
                    sorted.sort_unstable();
                    if sorted != (0..n).collect::<Vec<_>>() {
                        return invalid(format!("ep order must list each of players 1..{n} once"));
                    }
                }
                _ => {}
            }
        }
        if let Some(b) = &self.baseline {
            if square != b.axis.is_some() {
                return invalid(if square {
                    "a baseline on the square needs an axis".into()
                } else {
                    "a baseline on the interval takes no axis".into()
                });
            }
            b.allocation
                .check_partition(&self.measures_on(b.axis))
                .map_err(ScenarioError::Baseline)?;
        }
        let mut seen = BTreeSet::new();
        for r in &self.misreports {
            if square {
                return invalid("misreports only apply to interval scenarios".into());
            }
            if r.player >= n {
                return invalid(format!(
                    "misreport names player {}, but there are {n}",
                    r.player + 1
                ));
            }
            if !seen.insert(r.player) {
                return invalid(format!("two misreports for player {}", r.player + 1));
            }
        }
        if let Some(p) = &self.probe {
            if square {
                return invalid("the shift probe only applies to interval scenarios".into());
            }
            let zero = cake_core::rational::zero();
            let one = cake_core::rational::one();
            if p.marks.len() + 1 != n
                || p.marks.iter().any(|x| *x < zero || *x > one)
                || p.marks.windows(2).any(|w| w[0] > w[1])
            {
                return invalid(format!(
                    "probe needs {} nondecreasing marks in [0, 1]",
                    n - 1
                ));
            }
        }
        Ok(())
    }

    /// Pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let doc = ScenarioDoc::from(self);
        let mut text = serde_json::to_string_pretty(&doc).expect("scenario serializes");
        text.push('\n');
        text
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = match full.rsplit_once(" at line ") {
            Some((msg, _)) => msg.to_string(),
            None => full,
        };
        ScenarioError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    let scenario = doc.into_scenario()?;
    scenario.validate()?;
    Ok(scenario)
}

// Document shapes.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    players: Vec<PlayerDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    axes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    procedures: Vec<ProcedureDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    checks: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    baseline: Option<BaselineDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    misreports: Vec<MisreportDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlayerDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    measure: Option<MeasureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    square: Option<SquareDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureDoc {
    breakpoints: Vec<String>,
    densities: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    atoms: Vec<AtomDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    at: String,
    mass: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareDoc {
    x_breakpoints: Vec<String>,
    y_breakpoints: Vec<String>,
    /// `densities[i][j]` covers x-cell `i` and y-cell `j`.
    densities: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcedureDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaselineDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axis: Option<String>,
    portions: Vec<PortionDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PortionDoc {
    #[serde(default)]
    intervals: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    points: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    excluded: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MisreportDoc {
    player: usize,
    measure: MeasureDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeDoc {
    marks: Vec<String>,
}

fn q(text: &str, field: impl FnOnce() -> String) -> Result<Rational, ScenarioError> {
    parse_rational(text).map_err(|source| ScenarioError::Rational {
        field: field(),
        source,
    })
}

fn qs(texts: &[String], field: &str) -> Result<Vec<Rational>, ScenarioError> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| q(t, || format!("{field}[{i}]")))
        .collect()
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

impl MeasureDoc {
    fn into_measure(self, field: &str, player: &str) -> Result<ValueMeasure, ScenarioError> {
        let bps = qs(&self.breakpoints, &format!("{field}.breakpoints"))?;
        let vals = qs(&self.densities, &format!("{field}.densities"))?;
        let mut atoms = BTreeMap::new();
        for (i, a) in self.atoms.iter().enumerate() {
            let at = q(&a.at, || format!("{field}.atoms[{i}].at"))?;
            let mass = q(&a.mass, || format!("{field}.atoms[{i}].mass"))?;
            if atoms.insert(at.clone(), mass).is_some() {
                return Err(ScenarioError::Invalid(format!(
                    "{field}: two atoms at {at}"
                )));
            }
        }
        let measure_err = |source| ScenarioError::Measure {
            player: player.to_string(),
            source,
        };
        let density = PiecewiseDensity::new(bps, vals).map_err(measure_err)?;
        ValueMeasure::new(density, atoms).map_err(measure_err)
    }

    fn from_measure(m: &ValueMeasure) -> Self {
        Self {
            breakpoints: strings(m.density().breakpoints()),
            densities: strings(m.density().values()),
            atoms: m
                .atoms()
                .iter()
                .map(|(at, mass)| AtomDoc {
                    at: at.to_string(),
                    mass: mass.to_string(),
                })
                .collect(),
        }
    }
}

impl PortionDoc {
    fn into_portion(self, field: &str) -> Result<IntervalSet, ScenarioError> {
        let mut pieces = Vec::with_capacity(self.intervals.len());
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            let a = q(a, || format!("{field}.intervals[{i}][0]"))?;
            let b = q(b, || format!("{field}.intervals[{i}][1]"))?;
            if a >= b {
                return Err(ScenarioError::Invalid(format!(
                    "{field}.intervals[{i}]: [{a}, {b}) is empty"
                )));
            }
            pieces.push((a, b));
        }
        let mut portion = IntervalSet::from_pieces(pieces).map_err(ScenarioError::Baseline)?;
        for x in qs(&self.points, &format!("{field}.points"))? {
            portion = portion.with_point(x);
        }
        for x in qs(&self.excluded, &format!("{field}.excluded"))? {
            portion = portion.without_point(x);
        }
        Ok(portion)
    }

    fn from_portion(p: &IntervalSet) -> Self {
        Self {
            intervals: p
                .pieces()
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            points: p.extra_points().map(ToString::to_string).collect(),
            excluded: p.excluded_points().map(ToString::to_string).collect(),
        }
    }
}

impl ScenarioDoc {
    fn into_scenario(self) -> Result<Scenario, ScenarioError> {
        let mut players = Vec::with_capacity(self.players.len());
        for (i, p) in self.players.into_iter().enumerate() {
            let field = format!("players[{i}]");
            let measure = match (p.measure, p.square) {
                (Some(m), None) => {
                    PlayerMeasure::Interval(m.into_measure(&format!("{field}.measure"), &p.name)?)
                }
                (None, Some(s)) => {
                    let xs = qs(&s.x_breakpoints, &format!("{field}.square.x_breakpoints"))?;
                    let ys = qs(&s.y_breakpoints, &format!("{field}.square.y_breakpoints"))?;
                    let mut cells = Vec::with_capacity(s.densities.len());
                    for (r, row) in s.densities.iter().enumerate() {
                        cells.push(qs(row, &format!("{field}.square.densities[{r}]"))?);
                    }
                    let m = Rect2DMeasure::new(xs, ys, cells).map_err(|source| {
                        ScenarioError::Measure {
                            player: p.name.clone(),
                            source,
                        }
                    })?;
                    PlayerMeasure::Square(m)
                }
                _ => {
                    return Err(ScenarioError::Invalid(format!(
                        "{field}: give exactly one of 'measure' or 'square'"
                    )))
                }
            };
            players.push(Player {
                name: p.name,
                measure,
            });
        }
        let axes = self
            .axes
            .iter()
            .map(|a| axis_from_name(a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut procedures = Vec::with_capacity(self.procedures.len());
        for (i, p) in self.procedures.into_iter().enumerate() {
            let spec = match (ProcedureSpec::from_name(&p.name)?, p.order) {
                (ProcedureSpec::Equitability { .. }, Some(order)) => {
                    if order.contains(&0) {
                        return Err(ScenarioError::Invalid(format!(
                            "procedures[{i}].order: players are numbered from 1"
                        )));
                    }
                    ProcedureSpec::Equitability {
                        order: Some(order.into_iter().map(|k| k - 1).collect()),
                    }
                }
                (spec, None) => spec,
                (spec, Some(_)) => {
                    return Err(ScenarioError::Invalid(format!(
                        "procedures[{i}]: {} takes no order",
                        spec.name()
                    )))
                }
            };
            procedures.push(spec);
        }
        let checks = self
            .checks
            .iter()
            .map(|c| Check::from_name(c))
            .collect::<Result<Vec<_>, _>>()?;
        let baseline = match self.baseline {
            None => None,
            Some(b) => {
                let axis = b.axis.as_deref().map(axis_from_name).transpose()?;
                let portions = b
                    .portions
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| p.into_portion(&format!("baseline.portions[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Baseline {
                    axis,
                    allocation: Allocation::new(portions),
                })
            }
        };
        let mut misreports = Vec::with_capacity(self.misreports.len());
        for (i, r) in self.misreports.into_iter().enumerate() {
            if r.player == 0 {
                return Err(ScenarioError::Invalid(format!(
                    "misreports[{i}].player: players are numbered from 1"
                )));
            }
            let label = match players.get(r.player - 1) {
                Some(p) => format!("{} (misreport)", p.name),
                None => format!("misreport {}", i + 1),
            };
            let measure = r
                .measure
                .into_measure(&format!("misreports[{i}].measure"), &label)?;
            misreports.push(Misreport {
                player: r.player - 1,
                measure,
            });
        }
        let probe = match self.probe {
            None => None,
            Some(p) => Some(Probe {
                marks: qs(&p.marks, "probe.marks")?,
            }),
        };
        Ok(Scenario {
            name: self.name,
            description: self.description,
            players,
            axes,
            procedures,
            checks,
            baseline,
            misreports,
            probe,
        })
    }
}

impl From<&Scenario> for ScenarioDoc {
    fn from(s: &Scenario) -> Self {
        Self {
            name: s.name.clone(),
            description: s.description.clone(),
            players: s
                .players
                .iter()
                .map(|p| match &p.measure {
                    PlayerMeasure::Interval(m) => PlayerDoc {
                        name: p.name.clone(),
                        measure: Some(MeasureDoc::from_measure(m)),
                        square: None,
                    },
                    PlayerMeasure::Square(m) => PlayerDoc {
                        name: p.name.clone(),
                        measure: None,
                        square: Some(SquareDoc {
                            x_breakpoints: strings(m.x_breakpoints()),
                            y_breakpoints: strings(m.y_breakpoints()),
                            densities: m.cells().iter().map(|row| strings(row)).collect(),
                        }),
                    },
                })
                .collect(),
            axes: s.axes.iter().map(ToString::to_string).collect(),
            procedures: s
                .procedures
                .iter()
                .map(|p| ProcedureDoc {
                    name: p.name().into(),
                    order: match p {
                        ProcedureSpec::Equitability { order } => {
                            order.as_ref().map(|o| o.iter().map(|k| k + 1).collect())
                        }
                        _ => None,
                    },
                })
                .collect(),
            checks: s.checks.iter().map(|c| c.name().into()).collect(),
            baseline: s.baseline.as_ref().map(|b| BaselineDoc {
                axis: b.axis.map(|a| a.to_string()),
                portions: b
                    .allocation
                    .portions
                    .iter()
                    .map(PortionDoc::from_portion)
                    .collect(),
            }),
            misreports: s
                .misreports
                .iter()
                .map(|r| MisreportDoc {
                    player: r.player + 1,
                    measure: MeasureDoc::from_measure(&r.measure),
                })
                .collect(),
            probe: s.probe.as_ref().map(|p| ProbeDoc {
                marks: strings(&p.marks),
            }),
        }
    }
}
