//! Text formats: instance tables, branch tables, persisted models and reports.
//!
//! Instance and branch tables are comma-separated with an optional header row.
//! Models and reports are JSON. Currents are written as plain integers when
//! they are integral and with shortest round-trip precision otherwise.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::balancing::{exact_balance, greedy_balance};
use crate::error::BalanceError;
use crate::grnn::{classify_outcome, repair_assignment, GrnnModel, Outcome};
use crate::harness::{OutcomeCounts, OutcomePercentages};
use crate::model::{BalanceReport, Branch, LoadSet, PhaseAssignment};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("no instances in input")]
    NoInstances,
    #[error("no branches in input")]
    NoBranches,
    #[error("row {row}: {message}")]
    MalformedRow { row: usize, message: String },
    #[error("row {row}: {count} columns is not a multiple of 3")]
    ColumnCount { row: usize, count: usize },
    #[error("row {row}: expected {expected} columns, found {found}")]
    InconsistentColumns {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}: voltage magnitude is zero")]
    ZeroVoltage { row: usize },
    #[error("model has {model} loads per instance but input row {row} has {input}")]
    ModelMismatch {
        row: usize,
        model: usize,
        input: usize,
    },
    #[error("invalid model file: {0}")]
    Model(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Balance(#[from] BalanceError),
}

/// An ampere (or derived) value serialized without a trailing `.0` when it is
/// a whole number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Amps(pub f64);

const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

impl Amps {
    fn as_integer(&self) -> Option<i64> {
        (self.0.fract() == 0.0 && self.0.abs() < EXACT_INT_LIMIT).then_some(self.0 as i64)
    }
}

impl Serialize for Amps {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.as_integer() {
            Some(i) => serializer.serialize_i64(i),
            None => serializer.serialize_f64(self.0),
        }
    }
}

impl<'de> Deserialize<'de> for Amps {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Amps)
    }
}

impl fmt::Display for Amps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // f64's Display is the shortest round-trip form and omits ".0"
        write!(f, "{}", self.0)
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

/// Numeric rows of a comma-separated table, tagged with 1-based line numbers.
/// A first row with no numeric field is taken as a header and skipped.
fn numeric_rows(text: &str) -> Result<Vec<(usize, Vec<f64>)>, IoError> {
    let mut rows = Vec::new();
    for (i, record) in reader(text).records().enumerate() {
        let record = record.map_err(|e| IoError::MalformedRow {
            row: e.position().map_or(i + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: Vec<Option<f64>> = record.iter().map(|f| f.parse::<f64>().ok()).collect();
        if rows.is_empty() && i == 0 && parsed.iter().all(Option::is_none) {
            continue;
        }
        let values = parsed
            .iter()
            .zip(record.iter())
            .enumerate()
            .map(|(col, (v, raw))| {
                v.ok_or_else(|| IoError::MalformedRow {
                    row,
                    message: format!("column {} is not a number: `{raw}`", col + 1),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push((row, values));
    }
    Ok(rows)
}

/// One load set per row; every row must have the same number of columns, a
/// multiple of three.
pub fn parse_instances(text: &str) -> Result<Vec<LoadSet<f64>>, IoError> {
    let rows = numeric_rows(text)?;
    let Some((first_row, first)) = rows.first() else {
        return Err(IoError::NoInstances);
    };
    let width = first.len();
    if width % 3 != 0 {
        return Err(IoError::ColumnCount {
            row: *first_row,
            count: width,
        });
    }
    rows.into_iter()
        .map(|(row, values)| {
            if values.len() != width {
                return Err(IoError::InconsistentColumns {
                    row,
                    expected: width,
                    found: values.len(),
                });
            }
            LoadSet::new(values).map_err(|e| IoError::MalformedRow {
                row,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn read_instances(path: &Path) -> Result<Vec<LoadSet<f64>>, IoError> {
    parse_instances(&read_text(path)?)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Inverse of [`parse_instances`], without a header.
pub fn format_instances(instances: &[LoadSet<f64>]) -> String {
    let mut out = String::new();
    for loads in instances {
        let row: Vec<String> = loads.currents().iter().map(|&c| Amps(c).to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Branch table with columns `r_ohm, p_watt, q_var, v_mag`.
pub fn parse_branches(text: &str) -> Result<Vec<Branch<f64>>, IoError> {
    let rows = numeric_rows(text)?;
    if rows.is_empty() {
        return Err(IoError::NoBranches);
    }
    rows.into_iter()
        .map(|(row, v)| {
            if v.len() != 4 {
                return Err(IoError::InconsistentColumns {
                    row,
                    expected: 4,
                    found: v.len(),
                });
            }
            if v[3] == 0.0 {
                return Err(IoError::ZeroVoltage { row });
            }
            let branch = Branch::new(v[0], v[1], v[2], v[3]);
            crate::model::total_power_loss(&[branch]).map_err(|e| IoError::MalformedRow {
                row,
                message: e.to_string(),
            })?;
            Ok(branch)
        })
        .collect()
}

pub const MODEL_FORMAT: &str = "phasebal-grnn";
pub const MODEL_VERSION: u32 = 1;

/// Persisted form of a [`GrnnModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub spread: f64,
    pub n_loads: usize,
    pub inputs: Vec<Vec<Amps>>,
    pub targets: Vec<PhaseAssignment>,
}

impl ModelFile {
    pub fn from_model(model: &GrnnModel<f64>) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            spread: model.spread(),
            n_loads: model.n_loads(),
            inputs: model
                .inputs()
                .iter()
                .map(|x| x.iter().copied().map(Amps).collect())
                .collect(),
            targets: model
                .targets()
                .iter()
                .map(|t| PhaseAssignment::new(t.iter().map(|&v| v as u8).collect()))
                .collect(),
        }
    }

    pub fn into_model(self) -> Result<GrnnModel<f64>, IoError> {
        if self.format != MODEL_FORMAT || self.version != MODEL_VERSION {
            return Err(IoError::Model(format!(
                "unsupported format {} version {}",
                self.format, self.version
            )));
        }
        if self.inputs.iter().any(|x| x.len() != self.n_loads) {
            return Err(IoError::Model("input length differs from n_loads".into()));
        }
        let inputs = self
            .inputs
            .into_iter()
            .map(|x| x.into_iter().map(|a| a.0).collect())
            .collect();
        let targets = self
            .targets
            .into_iter()
            .map(|t| t.labels().iter().map(|&l| f64::from(l)).collect())
            .collect();
        GrnnModel::from_parts(inputs, targets, self.spread).map_err(|e| IoError::Model(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String, IoError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Solver used by the `balance` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
        }
    }

    pub fn solve(&self, loads: &LoadSet<f64>) -> Result<PhaseAssignment, BalanceError> {
        match self {
            Method::Exact => exact_balance(loads),
            Method::Greedy => Ok(greedy_balance(loads)),
        }
    }
}

/// Phase currents of one assignment inside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub assignment: PhaseAssignment,
    pub valid: bool,
    /// Set when the assignment is emitted even though it is not balanced-valid.
    pub raw_invalid: bool,
    pub phase_sums: [Amps; 3],
    pub pairwise_diffs: [Amps; 3],
    pub max_diff: Amps,
    pub total_abs_deviation: Amps,
}

impl MethodReport {
    pub fn new(loads: &LoadSet<f64>, assignment: PhaseAssignment) -> Result<Self, BalanceError> {
        let report = BalanceReport::new(loads, &assignment)?;
        let valid = assignment.is_balanced_valid(loads.len());
        Ok(Self {
            assignment,
            valid,
            raw_invalid: !valid,
            phase_sums: report.phase_sums.map(Amps),
            pairwise_diffs: report.pairwise_diffs.map(Amps),
            max_diff: Amps(report.max_diff),
            total_abs_deviation: Amps(report.total_abs_deviation),
        })
    }

    fn balance_report(&self) -> BalanceReport<f64> {
        BalanceReport {
            phase_sums: self.phase_sums.map(|a| a.0),
            pairwise_diffs: self.pairwise_diffs.map(|a| a.0),
            max_diff: self.max_diff.0,
            total_abs_deviation: self.total_abs_deviation.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    /// Position in the input, starting at 1.
    pub instance: usize,
    pub loads: Vec<Amps>,
    pub methods: BTreeMap<String, MethodReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outcome: Option<Outcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub instances: usize,
    pub mean_max_diff: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub outcomes: Option<OutcomeCounts>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub percentages: Option<OutcomePercentages>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: String,
    pub instances: Vec<InstanceReport>,
    pub summary: ReportSummary,
}

impl ReportFile {
    fn new(command: &str, instances: Vec<InstanceReport>) -> Self {
        let mut totals: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for inst in &instances {
            for (name, m) in &inst.methods {
                let entry = totals.entry(name.clone()).or_insert((0.0, 0));
                entry.0 += m.max_diff.0;
                entry.1 += 1;
            }
        }
        let outcomes: Vec<Outcome> = instances.iter().filter_map(|i| i.outcome).collect();
        let (outcomes, percentages) = if outcomes.is_empty() {
            (None, None)
        } else {
            let counts = OutcomeCounts::tally(&outcomes);
            let pct = OutcomePercentages::from_counts(&counts);
            (Some(counts), Some(pct))
        };
        Self {
            command: command.to_string(),
            summary: ReportSummary {
                instances: instances.len(),
                mean_max_diff: totals
                    .into_iter()
                    .map(|(k, (sum, n))| (k, sum / n as f64))
                    .collect(),
                outcomes,
                percentages,
            },
            instances,
        }
    }

    pub fn to_json(&self) -> Result<String, IoError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn load_amps(loads: &LoadSet<f64>) -> Vec<Amps> {
    loads.currents().iter().copied().map(Amps).collect()
}

/// Solves every instance with `method`.
pub fn balance_report(instances: &[LoadSet<f64>], method: Method) -> Result<ReportFile, IoError> {
    if instances.is_empty() {
        return Err(IoError::NoInstances);
    }
    let reports = instances
        .iter()
        .enumerate()
        .map(|(i, loads)| {
            let assignment = method.solve(loads)?;
            let mut methods = BTreeMap::new();
            methods.insert(method.name().to_string(), MethodReport::new(loads, assignment)?);
            Ok(InstanceReport {
                instance: i + 1,
                loads: load_amps(loads),
                methods,
                outcome: None,
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(ReportFile::new("balance", reports))
}

/// Network predictions next to the greedy heuristic. With `repair` the `nn`
/// column holds the repaired assignment and `nn_raw` the decoded output.
pub fn predict_report(
    model: &GrnnModel<f64>,
    instances: &[LoadSet<f64>],
    repair: bool,
) -> Result<ReportFile, IoError> {
    if instances.is_empty() {
        return Err(IoError::NoInstances);
    }
    let reports = instances
        .iter()
        .enumerate()
        .map(|(i, loads)| {
            if loads.len() != model.n_loads() {
                return Err(IoError::ModelMismatch {
                    row: i + 1,
                    model: model.n_loads(),
                    input: loads.len(),
                });
            }
            let raw = model.predict_assignment(loads)?;
            let greedy = MethodReport::new(loads, greedy_balance(loads))?;
            let mut methods = BTreeMap::new();
            let nn = if repair {
                let repaired = repair_assignment(&raw, loads)?;
                methods.insert("nn_raw".to_string(), MethodReport::new(loads, raw)?);
                MethodReport::new(loads, repaired)?
            } else {
                MethodReport::new(loads, raw)?
            };
            let outcome = classify_outcome(&nn.balance_report(), &greedy.balance_report(), nn.valid);
            methods.insert("greedy".to_string(), greedy);
            methods.insert("nn".to_string(), nn);
            Ok(InstanceReport {
                instance: i + 1,
                loads: load_amps(loads),
                methods,
                outcome: Some(outcome),
            })
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(ReportFile::new("predict", reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = "I1,I2,I3,I4,I5,I6\n89,85,74,38,56,45\n35,0,90,21,87,112\n45,67,87,64,30,90\n";

    #[test]
    fn parses_with_header() {
        let instances = parse_instances(TABLE1).unwrap();
        assert_eq!(instances.len(), 3);
        assert_eq!(instances[1].currents(), &[35., 0., 90., 21., 87., 112.]);
    }

    #[test]
    fn parses_without_header_and_blank_lines() {
        let instances = parse_instances("1,2,3\n\n4.5, 5 ,6\n").unwrap();
        assert_eq!(instances.len(), 2);
        assert_eq!(instances[1].currents(), &[4.5, 5.0, 6.0]);
    }

    #[test]
    fn empty_input_has_no_instances() {
        assert!(matches!(parse_instances(""), Err(IoError::NoInstances)));
        assert!(matches!(parse_instances("a,b,c\n"), Err(IoError::NoInstances)));
    }

    #[test]
    fn bad_rows_are_named() {
        let err = parse_instances("1,2,3,4,5,6,7\n").unwrap_err();
        assert!(matches!(err, IoError::ColumnCount { row: 1, count: 7 }));
        assert_eq!(err.to_string(), "row 1: 7 columns is not a multiple of 3");

        let err = parse_instances("1,2,3\n4,5,6,7\n").unwrap_err();
        assert!(matches!(err, IoError::InconsistentColumns { row: 2, .. }));

        let err = parse_instances("h1,h2,h3\n1,2,3\n4,x,6\n").unwrap_err();
        assert!(matches!(err, IoError::MalformedRow { row: 3, .. }), "{err}");

        let err = parse_instances("1,-2,3\n").unwrap_err();
        assert!(matches!(err, IoError::MalformedRow { row: 1, .. }));
    }

    #[test]
    fn instances_format_plainly() {
        let instances = parse_instances("89,85,74\n0.5,1e-3,2\n").unwrap();
        assert_eq!(format_instances(&instances), "89,85,74\n0.5,0.001,2\n");
    }

    #[test]
    fn branch_table() {
        let branches = parse_branches("r_ohm,p_watt,q_var,v_mag\n1,100,0,10\n2,0,50,10\n").unwrap();
        assert_eq!(branches.len(), 2);
        assert_eq!(crate::model::total_power_loss(&branches).unwrap(), 150.0);
        let err = parse_branches("1,100,0,10\n1,1,1,0\n").unwrap_err();
        assert!(matches!(err, IoError::ZeroVoltage { row: 2 }));
        assert!(matches!(
            parse_branches("1,2,3\n"),
            Err(IoError::InconsistentColumns { row: 1, .. })
        ));
        assert!(matches!(parse_branches(""), Err(IoError::NoBranches)));
    }

    #[test]
    fn amps_serialize_integers_plainly() {
        let json = serde_json::to_string(&[Amps(127.0), Amps(0.5), Amps(-3.0)]).unwrap();
        assert_eq!(json, "[127,0.5,-3]");
        let back: Vec<Amps> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Amps(127.0), Amps(0.5), Amps(-3.0)]);
    }

    #[test]
    fn model_file_round_trip() {
        let instances = parse_instances(TABLE1).unwrap();
        let labelled: Vec<_> = instances
            .iter()
            .map(|l| (l.clone(), greedy_balance(l)))
            .collect();
        let model = GrnnModel::train(&labelled, 3.5).unwrap();
        let file = ModelFile::from_model(&model);
        let json = file.to_json().unwrap();
        let back = ModelFile::from_json(&json).unwrap().into_model().unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn model_file_rejects_bad_content() {
        let mut file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: 1,
            spread: 1.0,
            n_loads: 3,
            inputs: vec![vec![Amps(1.0), Amps(2.0), Amps(3.0)]],
            targets: vec![PhaseAssignment::new(vec![1, 2, 4])],
        };
        assert!(file.clone().into_model().is_err());
        file.targets = vec![PhaseAssignment::new(vec![1, 2, 3])];
        assert!(file.clone().into_model().is_ok());
        file.version = 2;
        assert!(file.into_model().is_err());
    }

    #[test]
    fn balance_report_greedy() {
        let instances = parse_instances(TABLE1).unwrap();
        let report = balance_report(&instances, Method::Greedy).unwrap();
        let mut sums = report.instances[0].methods["greedy"].phase_sums.map(|a| a.0);
        sums.sort_by(f64::total_cmp);
        assert_eq!(sums, [127.0, 130.0, 130.0]);
        assert!(report.instances.iter().all(|i| i.methods["greedy"].valid));
        assert_eq!(report.summary.instances, 3);
        assert!(matches!(balance_report(&[], Method::Exact), Err(IoError::NoInstances)));
    }

    #[test]
    fn predict_report_mismatch() {
        let instances = parse_instances(TABLE1).unwrap();
        let labelled: Vec<_> = instances
            .iter()
            .map(|l| (l.clone(), greedy_balance(l)))
            .collect();
        let model = GrnnModel::train(&labelled, 1.0).unwrap();
        let other = parse_instances("1,2,3\n").unwrap();
        assert!(matches!(
            predict_report(&model, &other, false),
            Err(IoError::ModelMismatch { row: 1, model: 6, input: 3 })
        ));
        let report = predict_report(&model, &instances, true).unwrap();
        for inst in &report.instances {
            assert!(inst.methods["nn"].valid);
            assert!(inst.methods["nn_raw"].valid || inst.methods["nn_raw"].raw_invalid);
        }
        let pct = report.summary.percentages.unwrap();
        assert!((pct.sum() - 100.0).abs() < 0.01);
    }
}
