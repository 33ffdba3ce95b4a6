//! Simulated experiments and recomputation of the reference result tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balancing::{exact_balance, greedy_balance, EXACT_LIMIT};
use crate::error::{BalanceError, Result};
use crate::grnn::{classify_outcome, default_spread, repair_assignment, GrnnModel, Outcome};
use crate::io::Amps;
use crate::model::{pairwise_diffs, phase_sums, BalanceReport, LoadSet, PhaseAssignment, PHASES};

/// Which solver labels the training set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelSource {
    Greedy,
    Exact,
}

impl LabelSource {
    pub fn label(&self, loads: &LoadSet<f64>) -> Result<PhaseAssignment> {
        match self {
            LabelSource::Greedy => Ok(greedy_balance(loads)),
            LabelSource::Exact => exact_balance(loads),
        }
    }
}

impl std::str::FromStr for LabelSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(LabelSource::Greedy),
            "exact" => Ok(LabelSource::Exact),
            other => Err(format!("unknown label source `{other}` (expected greedy or exact)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n_loads: usize,
    pub train_count: usize,
    pub test_count: usize,
    /// Inclusive bounds of the integer current draws, amperes.
    pub current_min: u32,
    pub current_max: u32,
    pub seed: u64,
    /// `None` selects [`default_spread`] over the training inputs.
    pub spread: Option<f64>,
    pub label_source: LabelSource,
    pub repair: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_loads: 6,
            train_count: 400,
            test_count: 100,
            current_min: 0,
            current_max: 120,
            seed: 42,
            spread: None,
            label_source: LabelSource::Greedy,
            repair: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(BalanceError::Config(msg.to_string()));
        if self.n_loads == 0 || !self.n_loads.is_multiple_of(PHASES) {
            return fail("n_loads must be a positive multiple of 3");
        }
        if self.train_count == 0 || self.test_count == 0 {
            return fail("train and test counts must be at least 1");
        }
        if self.current_min >= self.current_max {
            return fail("current_min must be below current_max");
        }
        if let Some(s) = self.spread {
            if !(s > 0.0 && s.is_finite()) {
                return fail("spread must be positive and finite");
            }
        }
        if self.label_source == LabelSource::Exact && self.n_loads > EXACT_LIMIT {
            return fail("exact labels need n_loads <= 15");
        }
        Ok(())
    }

    pub fn total_instances(&self) -> usize {
        self.train_count + self.test_count
    }
}

/// Instance `index` of the simulated corpus. Depends only on the seed, the
/// index and the draw range.
pub fn generate_instance(config: &ExperimentConfig, index: usize) -> LoadSet<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let currents = (0..config.n_loads)
        .map(|_| f64::from(rng.gen_range(config.current_min..=config.current_max)))
        .collect();
    LoadSet::new(currents).expect("draws are nonnegative and n_loads is a multiple of 3")
}

/// Training instances first, then test instances.
pub fn generate_instances(config: &ExperimentConfig) -> Result<Vec<LoadSet<f64>>> {
    config.validate()?;
    Ok((0..config.total_instances())
        .map(|i| generate_instance(config, i))
        .collect())
}

/// Per-test-instance result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub loads: Vec<Amps>,
    pub greedy: PhaseAssignment,
    /// Decoded network output before any repair.
    pub nn_raw: PhaseAssignment,
    /// Assignment that was scored: `nn_raw`, or its repair when enabled.
    pub nn: PhaseAssignment,
    pub nn_valid: bool,
    pub greedy_max_diff: Amps,
    pub nn_max_diff: Amps,
    pub exact_max_diff: Option<Amps>,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub better: usize,
    pub same: usize,
    pub worse: usize,
    pub fail: usize,
}

impl OutcomeCounts {
    pub fn tally<'a>(outcomes: impl IntoIterator<Item = &'a Outcome>) -> Self {
        let mut counts = Self {
            better: 0,
            same: 0,
            worse: 0,
            fail: 0,
        };
        for outcome in outcomes {
            match outcome {
                Outcome::Better => counts.better += 1,
                Outcome::Same => counts.same += 1,
                Outcome::Worse => counts.worse += 1,
                Outcome::Fail => counts.fail += 1,
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.better + self.same + self.worse + self.fail
    }

    pub fn get(&self, outcome: Outcome) -> usize {
        match outcome {
            Outcome::Better => self.better,
            Outcome::Same => self.same,
            Outcome::Worse => self.worse,
            Outcome::Fail => self.fail,
        }
    }
}

/// Percentages of each outcome, in `[0, 100]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomePercentages {
    pub better: f64,
    pub same: f64,
    pub worse: f64,
    pub fail: f64,
}

impl OutcomePercentages {
    pub fn from_counts(counts: &OutcomeCounts) -> Self {
        let total = counts.total().max(1) as f64;
        let pct = |c: usize| 100.0 * c as f64 / total;
        Self {
            better: pct(counts.better),
            same: pct(counts.same),
            worse: pct(counts.worse),
            fail: pct(counts.fail),
        }
    }

    pub fn sum(&self) -> f64 {
        self.better + self.same + self.worse + self.fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanMaxDiff {
    pub greedy: f64,
    pub nn: f64,
    /// Present when the load count is within the exhaustive search limit.
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    /// Kernel width actually used.
    pub spread: f64,
    pub counts: OutcomeCounts,
    pub percentages: OutcomePercentages,
    pub mean_max_diff: MeanMaxDiff,
    pub records: Vec<InstanceRecord>,
}

impl ExperimentSummary {
    /// One row per test instance: index, then max phase difference per method.
    pub fn plot_table(&self) -> String {
        let mut out = String::from("index,greedy_max_diff,nn_max_diff,exact_max_diff,outcome\n");
        for r in &self.records {
            let exact = r.exact_max_diff.map(|a| a.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.index, r.greedy_max_diff, r.nn_max_diff, exact, r.outcome
            ));
        }
        out
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Generates the corpus, labels and trains on the training part, then scores
/// the network against the greedy heuristic on every test instance.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let instances = generate_instances(config)?;
    let (train_set, test_set) = instances.split_at(config.train_count);

    let labelled = train_set
        .par_iter()
        .map(|loads| Ok((loads.clone(), config.label_source.label(loads)?)))
        .collect::<Result<Vec<_>>>()?;
    let spread = match config.spread {
        Some(s) => s,
        None => default_spread(
            &labelled
                .iter()
                .map(|(l, _)| l.currents().to_vec())
                .collect::<Vec<_>>(),
        ),
    };
    let model = GrnnModel::train(&labelled, spread)?;

    let records = test_set
        .par_iter()
        .enumerate()
        .map(|(offset, loads)| {
            evaluate_instance(config, &model, config.train_count + offset, loads)
        })
        .collect::<Result<Vec<_>>>()?;

    let counts = OutcomeCounts::tally(records.iter().map(|r| &r.outcome));
    let exact = if config.n_loads <= EXACT_LIMIT {
        Some(mean(records.iter().filter_map(|r| r.exact_max_diff.map(|a| a.0))))
    } else {
        None
    };
    Ok(ExperimentSummary {
        config: config.clone(),
        spread,
        percentages: OutcomePercentages::from_counts(&counts),
        counts,
        mean_max_diff: MeanMaxDiff {
            greedy: mean(records.iter().map(|r| r.greedy_max_diff.0)),
            nn: mean(records.iter().map(|r| r.nn_max_diff.0)),
            exact,
        },
        records,
    })
}

fn evaluate_instance(
    config: &ExperimentConfig,
    model: &GrnnModel<f64>,
    index: usize,
    loads: &LoadSet<f64>,
) -> Result<InstanceRecord> {
    let n = loads.len();
    let greedy = greedy_balance(loads);
    let greedy_report = BalanceReport::new(loads, &greedy)?;

    let nn_raw = model.predict_assignment(loads)?;
    let nn = if config.repair {
        repair_assignment(&nn_raw, loads)?
    } else {
        nn_raw.clone()
    };
    let nn_valid = nn.is_balanced_valid(n);
    let nn_report = BalanceReport::new(loads, &nn)?;

    let exact_max_diff = if n <= EXACT_LIMIT {
        let exact = exact_balance(loads)?;
        Some(Amps(BalanceReport::new(loads, &exact)?.max_diff))
    } else {
        None
    };

    Ok(InstanceRecord {
        index,
        loads: loads.currents().iter().copied().map(Amps).collect(),
        outcome: classify_outcome(&nn_report, &greedy_report, nn_valid),
        greedy,
        nn_raw,
        nn,
        nn_valid,
        greedy_max_diff: Amps(greedy_report.max_diff),
        nn_max_diff: Amps(nn_report.max_diff),
        exact_max_diff,
    })
}

/// One published example: six load currents, the network and heuristic
/// switching sequences, and the phase currents and differences they yield.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCase {
    pub name: &'static str,
    pub loads: [f64; 6],
    pub nn_labels: [u8; 6],
    pub heuristic_labels: [u8; 6],
    pub nn_sums: [f64; 3],
    pub heuristic_sums: [f64; 3],
    pub nn_diffs: [f64; 3],
    pub heuristic_diffs: [f64; 3],
}

pub const REFERENCE_CASES: [ReferenceCase; 3] = [
    ReferenceCase {
        name: "Data 1",
        loads: [89.0, 85.0, 74.0, 38.0, 56.0, 45.0],
        nn_labels: [1, 2, 3, 1, 3, 2],
        heuristic_labels: [1, 2, 3, 1, 3, 2],
        nn_sums: [127.0, 130.0, 130.0],
        heuristic_sums: [127.0, 130.0, 130.0],
        nn_diffs: [3.0, 0.0, 3.0],
        heuristic_diffs: [3.0, 0.0, 3.0],
    },
    ReferenceCase {
        name: "Data 2",
        loads: [35.0, 0.0, 90.0, 21.0, 87.0, 112.0],
        nn_labels: [1, 2, 1, 3, 3, 2],
        heuristic_labels: [1, 3, 2, 1, 2, 3],
        nn_sums: [125.0, 112.0, 108.0],
        heuristic_sums: [56.0, 177.0, 112.0],
        nn_diffs: [13.0, 4.0, 17.0],
        heuristic_diffs: [121.0, 65.0, 56.0],
    },
    ReferenceCase {
        name: "Data 3",
        loads: [45.0, 67.0, 87.0, 64.0, 30.0, 90.0],
        nn_labels: [1, 2, 3, 2, 3, 1],
        heuristic_labels: [1, 2, 1, 2, 3, 3],
        nn_sums: [135.0, 131.0, 117.0],
        heuristic_sums: [132.0, 131.0, 120.0],
        nn_diffs: [4.0, 14.0, 18.0],
        heuristic_diffs: [1.0, 11.0, 12.0],
    },
];

/// Recomputed phase currents and differences for one method on one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodCheck {
    pub labels: PhaseAssignment,
    pub phase_sums: [Amps; 3],
    pub pairwise_diffs: [Amps; 3],
    pub expected_sums: [Amps; 3],
    pub expected_diffs: [Amps; 3],
    pub matches: bool,
}

/// A solver's answer next to the published heuristic result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverCheck {
    pub labels: PhaseAssignment,
    pub phase_sums: [Amps; 3],
    pub max_diff: Amps,
    /// Whether the phase-sum multiset equals the published heuristic one.
    pub matches_heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub loads: Vec<Amps>,
    pub nn: MethodCheck,
    pub heuristic: MethodCheck,
    pub greedy: SolverCheck,
    pub exact: SolverCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesReport {
    pub cases: Vec<CaseReport>,
    /// Number of recomputed values compared (phase currents plus differences).
    pub values_checked: usize,
    /// One entry per value that differs from the published tables.
    pub mismatches: Vec<String>,
}

impl TablesReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn amps3(v: [f64; 3]) -> [Amps; 3] {
    v.map(Amps)
}

fn sorted(mut v: [f64; 3]) -> [f64; 3] {
    v.sort_by(f64::total_cmp);
    v
}

fn check_method(
    case: &str,
    method: &str,
    loads: &LoadSet<f64>,
    labels: [u8; 6],
    expected_sums: [f64; 3],
    expected_diffs: [f64; 3],
    mismatches: &mut Vec<String>,
) -> Result<MethodCheck> {
    let assignment = PhaseAssignment::new(labels.to_vec());
    let sums = phase_sums(loads, &assignment)?;
    let diffs = pairwise_diffs(&sums);
    let names = ["phase 1", "phase 2", "phase 3"];
    let diff_names = ["phase 1-2", "phase 2-3", "phase 3-1"];
    let before = mismatches.len();
    for p in 0..PHASES {
        if sums[p] != expected_sums[p] {
            mismatches.push(format!(
                "{case} {method} {} current: computed {} expected {}",
                names[p], sums[p], expected_sums[p]
            ));
        }
        if diffs[p] != expected_diffs[p] {
            mismatches.push(format!(
                "{case} {method} {} difference: computed {} expected {}",
                diff_names[p], diffs[p], expected_diffs[p]
            ));
        }
    }
    Ok(MethodCheck {
        labels: assignment,
        phase_sums: amps3(sums),
        pairwise_diffs: amps3(diffs),
        expected_sums: amps3(expected_sums),
        expected_diffs: amps3(expected_diffs),
        matches: mismatches.len() == before,
    })
}

fn check_solver(
    loads: &LoadSet<f64>,
    labels: PhaseAssignment,
    heuristic_sums: [f64; 3],
) -> Result<SolverCheck> {
    let report = BalanceReport::new(loads, &labels)?;
    Ok(SolverCheck {
        matches_heuristic: sorted(report.phase_sums) == sorted(heuristic_sums),
        phase_sums: amps3(report.phase_sums),
        max_diff: Amps(report.max_diff),
        labels,
    })
}

/// Recomputes the published phase currents and differences from the published
/// loads and switching sequences, and runs both solvers on each case.
pub fn reproduce_tables() -> Result<TablesReport> {
    reproduce_cases(&REFERENCE_CASES)
}

pub fn reproduce_cases(cases: &[ReferenceCase]) -> Result<TablesReport> {
    let mut mismatches = Vec::new();
    let mut reports = Vec::with_capacity(cases.len());
    for case in cases {
        let loads = LoadSet::new(case.loads.to_vec())?;
        let nn = check_method(
            case.name,
            "NN",
            &loads,
            case.nn_labels,
            case.nn_sums,
            case.nn_diffs,
            &mut mismatches,
        )?;
        let heuristic = check_method(
            case.name,
            "HEU",
            &loads,
            case.heuristic_labels,
            case.heuristic_sums,
            case.heuristic_diffs,
            &mut mismatches,
        )?;
        reports.push(CaseReport {
            name: case.name.to_string(),
            loads: case.loads.iter().copied().map(Amps).collect(),
            nn,
            heuristic,
            greedy: check_solver(&loads, greedy_balance(&loads), case.heuristic_sums)?,
            exact: check_solver(&loads, exact_balance(&loads)?, case.heuristic_sums)?,
        });
    }
    Ok(TablesReport {
        values_checked: cases.len() * 2 * 2 * PHASES,
        cases: reports,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            train_count: 30,
            test_count: 10,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn instances_stay_in_range() {
        let config = small_config();
        let all = generate_instances(&config).unwrap();
        assert_eq!(all.len(), 40);
        for loads in &all {
            assert_eq!(loads.len(), 6);
            assert!(loads.currents().iter().all(|&c| (0.0..=120.0).contains(&c) && c.fract() == 0.0));
        }
    }

    #[test]
    fn instances_are_deterministic_per_seed() {
        let config = small_config();
        assert_eq!(generate_instances(&config).unwrap(), generate_instances(&config).unwrap());
        let other = ExperimentConfig { seed: 43, ..config.clone() };
        let a = generate_instances(&config).unwrap();
        let b = generate_instances(&other).unwrap();
        assert!(a.iter().zip(&b).take(10).any(|(x, y)| x != y));
        // instance i does not depend on how many others are drawn
        let longer = ExperimentConfig { train_count: 300, ..config.clone() };
        assert_eq!(generate_instance(&longer, 7), a[7]);
    }

    #[test]
    fn config_validation() {
        let bad = [
            ExperimentConfig { n_loads: 7, ..Default::default() },
            ExperimentConfig { test_count: 0, ..Default::default() },
            ExperimentConfig { current_min: 5, current_max: 5, ..Default::default() },
            ExperimentConfig { spread: Some(0.0), ..Default::default() },
            ExperimentConfig {
                n_loads: 18,
                label_source: LabelSource::Exact,
                ..Default::default()
            },
        ];
        for config in bad {
            assert!(config.validate().is_err(), "{config:?}");
        }
        assert!(ExperimentConfig::default().validate().is_ok());
    }

    #[test]
    fn repair_never_fails() {
        let config = ExperimentConfig { repair: true, ..small_config() };
        let summary = run_experiment(&config).unwrap();
        assert_eq!(summary.counts.fail, 0);
        assert!(summary.records.iter().all(|r| r.nn_valid));
    }

    #[test]
    fn train_equals_test_interpolates() {
        // the test instances are the training instances when the seed stream
        // is shared: train on all 40, then test on the last 10 of them
        let config = small_config();
        let instances = generate_instances(&config).unwrap();
        let labelled: Vec<_> = instances
            .iter()
            .map(|l| (l.clone(), greedy_balance(l)))
            .collect();
        let inputs: Vec<_> = instances.iter().map(|l| l.currents().to_vec()).collect();
        let spread = 1e-3 * crate::grnn::min_pairwise_distance(&inputs).unwrap();
        let model = GrnnModel::train(&labelled, spread).unwrap();
        for (loads, label) in &labelled {
            let record = evaluate_instance(&config, &model, 0, loads).unwrap();
            assert_eq!(&record.nn, label);
            assert_ne!(record.outcome, Outcome::Fail);
            assert_ne!(record.outcome, Outcome::Worse);
        }
    }

    #[test]
    fn summary_percentages_sum_to_100() {
        let summary = run_experiment(&small_config()).unwrap();
        assert_eq!(summary.counts.total(), 10);
        assert!((summary.percentages.sum() - 100.0).abs() <= 0.01);
        let exact = summary.mean_max_diff.exact.unwrap();
        assert!(exact <= summary.mean_max_diff.greedy);
        assert_eq!(summary.plot_table().lines().count(), 11);
    }

    #[test]
    fn tables_reproduce() {
        let report = reproduce_tables().unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.values_checked, 36);
        assert_eq!(report.cases[1].nn.phase_sums, amps3([125.0, 112.0, 108.0]));
        assert_eq!(report.cases[1].nn.pairwise_diffs, amps3([13.0, 4.0, 17.0]));
        assert_eq!(report.cases[2].heuristic.phase_sums, amps3([132.0, 131.0, 120.0]));
        assert_eq!(report.cases[2].heuristic.pairwise_diffs, amps3([1.0, 11.0, 12.0]));
        assert!(report.cases[0].greedy.matches_heuristic);
        assert!(!report.cases[1].greedy.matches_heuristic);
        assert!(report.cases[2].greedy.matches_heuristic);
    }

    #[test]
    fn tables_flag_corrupted_values() {
        let mut cases = REFERENCE_CASES;
        cases[1].nn_sums[2] = 109.0;
        cases[2].heuristic_diffs[0] = 2.0;
        let report = reproduce_cases(&cases).unwrap();
        assert!(!report.passed());
        assert_eq!(report.mismatches.len(), 2);
        assert!(report.mismatches[0].starts_with("Data 2 NN phase 3 current"));
        assert!(report.mismatches[1].starts_with("Data 3 HEU phase 1-2 difference"));
    }
}
