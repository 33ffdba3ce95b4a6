//! Feeder domain types and evaluation of a phase assignment.
//!
//! Loads are real current magnitudes. An assignment gives each load a phase
//! label in `{1, 2, 3}`; the equivalent switch matrix closes exactly one of the
//! three phase switches per load.

use serde::{Deserialize, Serialize};

use crate::error::{BalanceError, Result};
use crate::scalar::{max_of, Current};

/// Number of phases on the feeder.
pub const PHASES: usize = 3;

/// Load currents at the connection points of one feeder snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadSet<T> {
    currents: Vec<T>,
}

impl<T: Current> LoadSet<T> {
    /// Checks that there is a positive multiple of three loads and that every
    /// current is finite and nonnegative.
    pub fn new(currents: Vec<T>) -> Result<Self> {
        if currents.is_empty() {
            return Err(BalanceError::Empty);
        }
        if !currents.len().is_multiple_of(PHASES) {
            return Err(BalanceError::NotDivisibleByThree(currents.len()));
        }
        for (index, value) in currents.iter().enumerate() {
            if !value.is_finite_value() || value.is_negative() {
                return Err(BalanceError::InvalidCurrent {
                    index,
                    value: value.to_string(),
                });
            }
        }
        Ok(Self { currents })
    }

    pub fn currents(&self) -> &[T] {
        &self.currents
    }

    pub fn len(&self) -> usize {
        self.currents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.currents.is_empty()
    }

    /// Loads per phase in a balanced assignment.
    pub fn group_size(&self) -> usize {
        self.currents.len() / PHASES
    }

    pub fn total(&self) -> T {
        self.currents.iter().fold(T::zero(), |acc, &c| acc + c)
    }

    pub fn into_inner(self) -> Vec<T> {
        self.currents
    }

    /// Multiplies every current by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(self.currents.iter().map(|&c| c * factor).collect())
    }
}

/// The target current per phase: a third of the total load.
pub fn ideal_current<T: Current>(loads: &LoadSet<T>) -> T {
    loads.total() / T::three()
}

/// A switching sequence: one phase label per load.
///
/// Labels are stored as given; use [`validate_assignment`] to check them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseAssignment {
    labels: Vec<u8>,
}

impl PhaseAssignment {
    pub fn new(labels: Vec<u8>) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Loads carrying label 1, 2 and 3. Out-of-range labels are not counted.
    pub fn counts(&self) -> [usize; PHASES] {
        let mut counts = [0; PHASES];
        for &label in &self.labels {
            if (1..=3).contains(&label) {
                counts[usize::from(label - 1)] += 1;
            }
        }
        counts
    }

    /// Applies a relabelling: load with label `p` gets `perm[p - 1]`.
    pub fn relabel(&self, perm: [u8; PHASES]) -> Result<Self> {
        self.labels
            .iter()
            .enumerate()
            .map(|(index, &label)| match label {
                1..=3 => Ok(perm[usize::from(label - 1)]),
                _ => Err(BalanceError::LabelOutOfRange { index, label }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// Number of positions at which the two assignments differ.
    pub fn hamming_distance(&self, other: &Self) -> usize {
        self.labels
            .iter()
            .zip(&other.labels)
            .filter(|(a, b)| a != b)
            .count()
            + self.labels.len().abs_diff(other.labels.len())
    }

    pub fn is_balanced_valid(&self, n_loads: usize) -> bool {
        validate_assignment(self, n_loads).is_valid()
    }
}

impl From<Vec<u8>> for PhaseAssignment {
    fn from(labels: Vec<u8>) -> Self {
        Self::new(labels)
    }
}

/// Outcome of [`validate_assignment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignmentVerdict {
    Valid,
    LabelOutOfRange { index: usize, label: u8 },
    LengthMismatch { expected: usize, actual: usize },
    UnequalCounts { counts: [usize; PHASES] },
}

impl AssignmentVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, AssignmentVerdict::Valid)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            AssignmentVerdict::Valid => Ok(()),
            AssignmentVerdict::LabelOutOfRange { index, label } => {
                Err(BalanceError::LabelOutOfRange { index, label })
            }
            AssignmentVerdict::LengthMismatch { expected, actual } => {
                Err(BalanceError::Dimension { expected, actual })
            }
            AssignmentVerdict::UnequalCounts { counts } => Err(BalanceError::Unbalanced { counts }),
        }
    }
}

/// Checks labels, length and the equal per-phase count rule, in that order.
pub fn validate_assignment(assignment: &PhaseAssignment, n_loads: usize) -> AssignmentVerdict {
    if let Some((index, &label)) = assignment
        .labels()
        .iter()
        .enumerate()
        .find(|(_, l)| !(1..=3).contains(*l))
    {
        return AssignmentVerdict::LabelOutOfRange { index, label };
    }
    if assignment.len() != n_loads {
        return AssignmentVerdict::LengthMismatch {
            expected: n_loads,
            actual: assignment.len(),
        };
    }
    let counts = assignment.counts();
    if !n_loads.is_multiple_of(PHASES) || counts.iter().any(|&c| c != n_loads / PHASES) {
        return AssignmentVerdict::UnequalCounts { counts };
    }
    AssignmentVerdict::Valid
}

fn check_labels(assignment: &PhaseAssignment, n_loads: usize) -> Result<()> {
    match validate_assignment(assignment, n_loads) {
        AssignmentVerdict::UnequalCounts { .. } => Ok(()),
        other => other.into_result(),
    }
}

/// Sum of the load currents connected to each phase.
///
/// Labels must be in range; the per-phase counts need not be equal.
pub fn phase_sums<T: Current>(
    loads: &LoadSet<T>,
    assignment: &PhaseAssignment,
) -> Result<[T; PHASES]> {
    check_labels(assignment, loads.len())?;
    let mut sums = [T::zero(); PHASES];
    for (&current, &label) in loads.currents().iter().zip(assignment.labels()) {
        let slot = &mut sums[usize::from(label - 1)];
        *slot = *slot + current;
    }
    Ok(sums)
}

/// `(|s1 - s2|, |s2 - s3|, |s3 - s1|)`.
pub fn pairwise_diffs<T: Current>(sums: &[T; PHASES]) -> [T; PHASES] {
    [
        (sums[0] - sums[1]).abs(),
        (sums[1] - sums[2]).abs(),
        (sums[2] - sums[0]).abs(),
    ]
}

/// `Σ_p |S_p - total/3|`, evaluated as `Σ_p |3·S_p - total| / 3` so that
/// integer-valued inputs are scored exactly.
pub(crate) fn abs_deviation<T: Current>(sums: &[T; PHASES], total: T) -> T {
    let three = T::three();
    sums.iter()
        .fold(T::zero(), |acc, &s| acc + (three * s - total).abs())
        / three
}

/// Phase-current summary of one assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport<T> {
    pub phase_sums: [T; PHASES],
    pub pairwise_diffs: [T; PHASES],
    pub max_diff: T,
    pub total_abs_deviation: T,
}

impl<T: Current> BalanceReport<T> {
    /// Labels must be in range and the length must match; unequal counts are
    /// reported, not rejected.
    pub fn new(loads: &LoadSet<T>, assignment: &PhaseAssignment) -> Result<Self> {
        let sums = phase_sums(loads, assignment)?;
        Ok(Self::from_sums(sums, loads.total()))
    }

    pub fn from_sums(phase_sums: [T; PHASES], total: T) -> Self {
        let pairwise_diffs = pairwise_diffs(&phase_sums);
        let max_diff = pairwise_diffs.iter().copied().fold(T::zero(), max_of);
        Self {
            phase_sums,
            pairwise_diffs,
            max_diff,
            total_abs_deviation: abs_deviation(&phase_sums, total),
        }
    }
}

/// Binary `N × 3` switch states; row `i` closes the switch of load `i`'s phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchMatrix {
    rows: Vec<[u8; PHASES]>,
}

fn check_switch_row(row: usize, states: &[u8; PHASES]) -> Result<()> {
    if states.iter().any(|&s| s > 1) {
        return Err(BalanceError::InvalidSwitchRow {
            row,
            reason: "switch states must be 0 or 1",
        });
    }
    if states.iter().map(|&s| u32::from(s)).sum::<u32>() != 1 {
        return Err(BalanceError::InvalidSwitchRow {
            row,
            reason: "exactly one switch per load must be closed",
        });
    }
    Ok(())
}

impl SwitchMatrix {
    pub fn from_rows(rows: Vec<[u8; PHASES]>) -> Result<Self> {
        for (row, states) in rows.iter().enumerate() {
            check_switch_row(row, states)?;
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[[u8; PHASES]] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<u8> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> [usize; PHASES] {
        let mut sums = [0; PHASES];
        for row in &self.rows {
            for (sum, &state) in sums.iter_mut().zip(row) {
                *sum += usize::from(state);
            }
        }
        sums
    }

    pub fn to_assignment(&self) -> PhaseAssignment {
        self.rows
            .iter()
            .map(|row| row.iter().position(|&s| s == 1).map_or(0, |c| c as u8 + 1))
            .collect::<Vec<_>>()
            .into()
    }
}

pub fn assignment_to_switch_matrix(assignment: &PhaseAssignment) -> Result<SwitchMatrix> {
    let rows = assignment
        .labels()
        .iter()
        .enumerate()
        .map(|(index, &label)| match label {
            1..=3 => {
                let mut row = [0; PHASES];
                row[usize::from(label - 1)] = 1;
                Ok(row)
            }
            _ => Err(BalanceError::LabelOutOfRange { index, label }),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SwitchMatrix { rows })
}

/// Line section data for the loss evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch<T> {
    /// Ohms.
    pub resistance: T,
    /// Watts.
    pub active_power: T,
    /// Volt-amperes reactive.
    pub reactive_power: T,
    /// Volts.
    pub voltage_magnitude: T,
}

impl<T: Current> Branch<T> {
    pub fn new(resistance: T, active_power: T, reactive_power: T, voltage_magnitude: T) -> Self {
        Self {
            resistance,
            active_power,
            reactive_power,
            voltage_magnitude,
        }
    }

    fn loss(&self, branch: usize) -> Result<T> {
        let fields = [
            self.resistance,
            self.active_power,
            self.reactive_power,
            self.voltage_magnitude,
        ];
        if fields.iter().any(|f| !f.is_finite_value()) {
            return Err(BalanceError::InvalidBranch {
                branch,
                reason: "values must be finite",
            });
        }
        if self.resistance.is_negative() {
            return Err(BalanceError::InvalidBranch {
                branch,
                reason: "resistance must be nonnegative",
            });
        }
        if self.voltage_magnitude.is_zero() {
            return Err(BalanceError::SingularVoltage { branch });
        }
        if self.voltage_magnitude.is_negative() {
            return Err(BalanceError::InvalidBranch {
                branch,
                reason: "voltage magnitude must be positive",
            });
        }
        let p = self.active_power;
        let q = self.reactive_power;
        let v = self.voltage_magnitude;
        Ok(self.resistance * (p * p + q * q) / (v * v))
    }
}

/// Real power lost in the line branches: `Σ r (P² + Q²) / |V|²`, in watts.
pub fn total_power_loss<T: Current>(branches: &[Branch<T>]) -> Result<T> {
    branches
        .iter()
        .enumerate()
        .try_fold(T::zero(), |acc, (i, b)| Ok(acc + b.loss(i)?))
}

/// One connection point on a radial feeder: up to three loads, each with its
/// own row of phase switches.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionPoint<T> {
    loads: Vec<T>,
    switches: Vec<[u8; PHASES]>,
}

impl<T: Current> ConnectionPoint<T> {
    pub fn new(loads: Vec<T>, switches: Vec<[u8; PHASES]>) -> Result<Self> {
        if loads.len() > PHASES {
            return Err(BalanceError::TooManyLoads { count: loads.len() });
        }
        if loads.len() != switches.len() {
            return Err(BalanceError::Dimension {
                expected: loads.len(),
                actual: switches.len(),
            });
        }
        for (index, value) in loads.iter().enumerate() {
            if !value.is_finite_value() || value.is_negative() {
                return Err(BalanceError::InvalidCurrent {
                    index,
                    value: value.to_string(),
                });
            }
        }
        for (row, states) in switches.iter().enumerate() {
            check_switch_row(row, states)?;
        }
        Ok(Self { loads, switches })
    }

    /// Builds the switch rows from phase labels.
    pub fn with_labels(loads: Vec<T>, labels: &[u8]) -> Result<Self> {
        let matrix = assignment_to_switch_matrix(&PhaseAssignment::new(labels.to_vec()))?;
        Self::new(loads, matrix.rows)
    }

    pub fn loads(&self) -> &[T] {
        &self.loads
    }

    pub fn switches(&self) -> &[[u8; PHASES]] {
        &self.switches
    }

    fn local_currents(&self) -> [T; PHASES] {
        let mut out = [T::zero(); PHASES];
        for (&load, row) in self.loads.iter().zip(&self.switches) {
            for (phase, &state) in out.iter_mut().zip(row) {
                if state == 1 {
                    *phase = *phase + load;
                }
            }
        }
        out
    }
}

/// Connection points ordered from the transformer (index 0) outwards.
#[derive(Debug, Clone, PartialEq)]
pub struct FeederChain<T> {
    points: Vec<ConnectionPoint<T>>,
}

impl<T: Current> FeederChain<T> {
    pub fn new(points: Vec<ConnectionPoint<T>>) -> Self {
        Self { points }
    }

    pub fn points(&self) -> &[ConnectionPoint<T>] {
        &self.points
    }

    /// Concatenates the loads and their labels from the head outwards.
    pub fn flatten(&self) -> Result<(LoadSet<T>, PhaseAssignment)> {
        let mut loads = Vec::new();
        let mut switches = Vec::new();
        for point in &self.points {
            loads.extend_from_slice(&point.loads);
            switches.extend_from_slice(&point.switches);
        }
        let assignment = SwitchMatrix::from_rows(switches)?.to_assignment();
        Ok((LoadSet::new(loads)?, assignment))
    }
}

/// Per-phase current flowing just upstream of each connection point.
///
/// Computed from the far end inwards: the current past point `k` is its own
/// switched loads plus everything past point `k + 1`. Entry 0 is the feeder
/// head.
pub fn feeder_phase_currents<T: Current>(chain: &FeederChain<T>) -> Vec<[T; PHASES]> {
    let mut currents = vec![[T::zero(); PHASES]; chain.points.len()];
    let mut downstream = [T::zero(); PHASES];
    for (k, point) in chain.points.iter().enumerate().rev() {
        let local = point.local_currents();
        for p in 0..PHASES {
            downstream[p] = local[p] + downstream[p];
        }
        currents[k] = downstream;
    }
    currents
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn loads(v: &[f64]) -> LoadSet<f64> {
        LoadSet::new(v.to_vec()).unwrap()
    }

    fn labels(v: &[u8]) -> PhaseAssignment {
        PhaseAssignment::new(v.to_vec())
    }

    #[test]
    fn load_set_rejects_bad_input() {
        assert_eq!(LoadSet::<f64>::new(vec![]), Err(BalanceError::Empty));
        assert_eq!(
            LoadSet::new(vec![1.0, 2.0]),
            Err(BalanceError::NotDivisibleByThree(2))
        );
        assert!(matches!(
            LoadSet::new(vec![1.0, -2.0, 3.0]),
            Err(BalanceError::InvalidCurrent { index: 1, .. })
        ));
        assert!(matches!(
            LoadSet::new(vec![1.0, 2.0, f64::NAN]),
            Err(BalanceError::InvalidCurrent { index: 2, .. })
        ));
        assert!(LoadSet::new(vec![0.0; 6]).is_ok());
    }

    #[test]
    fn ideal_current_examples() {
        assert_eq!(ideal_current(&loads(&[89., 85., 74., 38., 56., 45.])), 129.0);
        assert_eq!(ideal_current(&loads(&[0.0; 6])), 0.0);
        assert_eq!(ideal_current(&loads(&[35., 0., 90., 21., 87., 112.])), 115.0);
        let exact = LoadSet::new(vec![Rational64::from(1); 3]).unwrap();
        assert_eq!(ideal_current(&exact), Rational64::from(1));
    }

    #[test]
    fn phase_sums_examples() {
        let sums = phase_sums(&loads(&[89., 85., 74., 38., 56., 45.]), &labels(&[1, 2, 3, 1, 3, 2]));
        assert_eq!(sums.unwrap(), [127.0, 130.0, 130.0]);
        let sums = phase_sums(&loads(&[45., 67., 87., 64., 30., 90.]), &labels(&[1, 2, 3, 2, 3, 1]));
        assert_eq!(sums.unwrap(), [135.0, 131.0, 117.0]);
        let sums = phase_sums(&loads(&[0.0; 6]), &labels(&[3, 3, 1, 2, 1, 2]));
        assert_eq!(sums.unwrap(), [0.0; 3]);
    }

    #[test]
    fn phase_sums_length_mismatch() {
        let err = phase_sums(&loads(&[1., 2., 3.]), &labels(&[1, 2])).unwrap_err();
        assert_eq!(
            err,
            BalanceError::Dimension {
                expected: 3,
                actual: 2
            }
        );
    }

    #[test]
    fn pairwise_diff_examples() {
        assert_eq!(pairwise_diffs(&[127.0, 130.0, 130.0]), [3.0, 0.0, 3.0]);
        assert_eq!(pairwise_diffs(&[125.0, 112.0, 108.0]), [13.0, 4.0, 17.0]);
        assert_eq!(pairwise_diffs(&[7.5, 7.5, 7.5]), [0.0; 3]);
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            validate_assignment(&labels(&[1, 2, 3, 1, 3, 2]), 6),
            AssignmentVerdict::Valid
        );
        assert_eq!(
            validate_assignment(&labels(&[1, 1, 1, 2, 2, 3]), 6),
            AssignmentVerdict::UnequalCounts { counts: [3, 2, 1] }
        );
        assert_eq!(
            validate_assignment(&labels(&[1, 2, 4, 1, 3, 2]), 6),
            AssignmentVerdict::LabelOutOfRange { index: 2, label: 4 }
        );
        assert_eq!(
            validate_assignment(&labels(&[1, 2, 3]), 6),
            AssignmentVerdict::LengthMismatch {
                expected: 6,
                actual: 3
            }
        );
    }

    #[test]
    fn switch_matrix_examples() {
        let m = assignment_to_switch_matrix(&labels(&[1, 2, 3])).unwrap();
        assert_eq!(m.rows(), &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let m = assignment_to_switch_matrix(&labels(&[2, 2, 2])).unwrap();
        assert_eq!(m.rows(), &[[0, 1, 0]; 3]);
        let m = assignment_to_switch_matrix(&labels(&[1, 2, 3, 1, 3, 2])).unwrap();
        assert_eq!(m.column_sums(), [2, 2, 2]);
        assert!(m.row_sums().iter().all(|&s| s == 1));
        assert!(assignment_to_switch_matrix(&labels(&[0, 1, 2])).is_err());
    }

    #[test]
    fn switch_rows_must_close_one_switch() {
        assert!(SwitchMatrix::from_rows(vec![[1, 1, 0]]).is_err());
        assert!(SwitchMatrix::from_rows(vec![[0, 0, 0]]).is_err());
        assert!(SwitchMatrix::from_rows(vec![[0, 2, 0]]).is_err());
        assert!(ConnectionPoint::new(vec![1.0], vec![[0, 1, 1]]).is_err());
    }

    #[test]
    fn feeder_single_point() {
        let point = ConnectionPoint::with_labels(vec![89.0, 85.0, 74.0], &[1, 2, 3]).unwrap();
        let chain = FeederChain::new(vec![point]);
        assert_eq!(feeder_phase_currents(&chain), vec![[89.0, 85.0, 74.0]]);
    }

    #[test]
    fn feeder_two_points() {
        let head = ConnectionPoint::new(vec![5.0, 0.0, 0.0], vec![[0, 1, 0]; 3]).unwrap();
        let tail = ConnectionPoint::new(vec![10.0, 0.0, 0.0], vec![[1, 0, 0]; 3]).unwrap();
        let chain = FeederChain::new(vec![head, tail]);
        let currents = feeder_phase_currents(&chain);
        assert_eq!(currents[0], [10.0, 5.0, 0.0]);
        assert_eq!(currents[1], [10.0, 0.0, 0.0]);
    }

    #[test]
    fn feeder_one_load_per_point() {
        let data = [89.0, 85.0, 74.0, 38.0, 56.0, 45.0];
        let heu = [1, 2, 3, 1, 3, 2];
        let points = data
            .iter()
            .zip(heu)
            .map(|(&l, p)| ConnectionPoint::with_labels(vec![l], &[p]).unwrap())
            .collect();
        let chain = FeederChain::new(points);
        assert_eq!(feeder_phase_currents(&chain)[0], [127.0, 130.0, 130.0]);
    }

    #[test]
    fn too_many_loads_at_point() {
        assert!(matches!(
            ConnectionPoint::with_labels(vec![1.0; 4], &[1, 2, 3, 1]),
            Err(BalanceError::TooManyLoads { count: 4, .. })
        ));
    }

    #[test]
    fn power_loss_examples() {
        let zero_r = vec![Branch::new(0.0, 100.0, 30.0, 10.0); 3];
        assert_eq!(total_power_loss(&zero_r).unwrap(), 0.0);
        let one = [Branch::new(1.0, 100.0, 0.0, 10.0)];
        assert_eq!(total_power_loss(&one).unwrap(), 100.0);
        let two = [Branch::new(1.0, 100.0, 0.0, 10.0), Branch::new(2.0, 0.0, 50.0, 10.0)];
        assert_eq!(total_power_loss(&two).unwrap(), 150.0);
        assert_eq!(total_power_loss::<f64>(&[]).unwrap(), 0.0);
    }

    #[test]
    fn power_loss_rejects_zero_voltage() {
        let branches = [Branch::new(1.0, 1.0, 1.0, 10.0), Branch::new(1.0, 1.0, 1.0, 0.0)];
        assert_eq!(
            total_power_loss(&branches),
            Err(BalanceError::SingularVoltage { branch: 1 })
        );
        assert!(total_power_loss(&[Branch::new(-1.0, 1.0, 1.0, 1.0)]).is_err());
    }

    #[test]
    fn report_fields() {
        let report = BalanceReport::new(
            &loads(&[35., 0., 90., 21., 87., 112.]),
            &labels(&[1, 3, 2, 1, 2, 3]),
        )
        .unwrap();
        assert_eq!(report.phase_sums, [56.0, 177.0, 112.0]);
        assert_eq!(report.pairwise_diffs, [121.0, 65.0, 56.0]);
        assert_eq!(report.max_diff, 121.0);
        // |56-115| + |177-115| + |112-115|
        assert_eq!(report.total_abs_deviation, 124.0);
    }

    #[test]
    fn relabel_and_hamming() {
        let a = labels(&[1, 2, 3, 1, 3, 2]);
        let b = a.relabel([2, 3, 1]).unwrap();
        assert_eq!(b.labels(), &[2, 3, 1, 2, 1, 3]);
        assert_eq!(a.hamming_distance(&b), 6);
        assert_eq!(a.hamming_distance(&a), 0);
    }
}
