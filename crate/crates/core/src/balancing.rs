//! Phase-assignment solvers.
//!
//! Both solvers score assignments with [`BalanceObjective`]: the largest
//! pairwise phase-current difference first, then the total absolute deviation
//! of the phase sums from the ideal current. Ties are always broken towards
//! the lexicographically smallest label sequence or index set.

use itertools::Itertools;

use crate::error::{BalanceError, Result};
use crate::model::{
    validate_assignment, BalanceReport, LoadSet, PhaseAssignment, PHASES,
};
use crate::scalar::Current;

/// Largest load count [`exact_balance`] will enumerate.
pub const EXACT_LIMIT: usize = 15;

/// Balance quality of an assignment. Smaller is better; the derived ordering
/// compares `max_diff` first.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BalanceObjective<T> {
    pub max_diff: T,
    pub total_abs_deviation: T,
}

impl<T: Current> BalanceObjective<T> {
    fn from_sums(sums: &[T; PHASES], total: T) -> Self {
        let report = BalanceReport::from_sums(*sums, total);
        Self {
            max_diff: report.max_diff,
            total_abs_deviation: report.total_abs_deviation,
        }
    }
}

impl<T: Current> From<&BalanceReport<T>> for BalanceObjective<T> {
    fn from(report: &BalanceReport<T>) -> Self {
        Self {
            max_diff: report.max_diff,
            total_abs_deviation: report.total_abs_deviation,
        }
    }
}

/// Scores a balanced-valid assignment.
pub fn objective_value<T: Current>(
    loads: &LoadSet<T>,
    assignment: &PhaseAssignment,
) -> Result<BalanceObjective<T>> {
    validate_assignment(assignment, loads.len()).into_result()?;
    let report = BalanceReport::new(loads, assignment)?;
    Ok(BalanceObjective::from(&report))
}

/// Exhaustive optimum over all assignments with `N/3` loads per phase.
///
/// Returns the lexicographically smallest label sequence among the minimizers.
/// Relabelling phases leaves the objective unchanged, and the smallest member
/// of each relabelling class introduces labels in the order 1, 2, 3, so only
/// those sequences are visited.
pub fn exact_balance<T: Current>(loads: &LoadSet<T>) -> Result<PhaseAssignment> {
    if loads.len() > EXACT_LIMIT {
        return Err(BalanceError::Capacity {
            limit: EXACT_LIMIT,
            actual: loads.len(),
        });
    }
    let mut search = ExactSearch {
        currents: loads.currents(),
        group: loads.group_size(),
        total: loads.total(),
        labels: vec![0; loads.len()],
        counts: [0; PHASES],
        sums: [T::zero(); PHASES],
        best: None,
    };
    search.descend(0, 0);
    let (_, labels) = search.best.expect("at least one balanced assignment exists");
    Ok(PhaseAssignment::new(labels))
}

struct ExactSearch<'a, T> {
    currents: &'a [T],
    group: usize,
    total: T,
    labels: Vec<u8>,
    counts: [usize; PHASES],
    sums: [T; PHASES],
    best: Option<(BalanceObjective<T>, Vec<u8>)>,
}

impl<T: Current> ExactSearch<'_, T> {
    fn descend(&mut self, index: usize, used: usize) {
        if index == self.currents.len() {
            let objective = BalanceObjective::from_sums(&self.sums, self.total);
            let improves = match &self.best {
                None => true,
                Some((best, _)) => objective < *best,
            };
            if improves {
                self.best = Some((objective, self.labels.clone()));
            }
            return;
        }
        let current = self.currents[index];
        for phase in 0..(used + 1).min(PHASES) {
            if self.counts[phase] == self.group {
                continue;
            }
            self.counts[phase] += 1;
            self.sums[phase] = self.sums[phase] + current;
            self.labels[index] = phase as u8 + 1;
            self.descend(index + 1, used.max(phase + 1));
            self.sums[phase] = self.sums[phase] - current;
            self.counts[phase] -= 1;
        }
    }
}

/// Greedy group selection around the ideal phase current.
///
/// Picks, among the unassigned loads, the group of `N/3` whose sum is closest
/// to the ideal current and gives it the next phase label; the last group is
/// whatever remains. Ties go to the lexicographically smallest index set.
pub fn greedy_balance<T: Current>(loads: &LoadSet<T>) -> PhaseAssignment {
    let currents = loads.currents();
    let group = loads.group_size();
    let total = loads.total();
    let three = T::three();
    let mut labels = vec![PHASES as u8; currents.len()];
    let mut remaining: Vec<usize> = (0..currents.len()).collect();

    for label in 1..PHASES as u8 {
        let mut best: Option<(T, Vec<usize>)> = None;
        // combinations() yields index sets in lexicographic order
        for candidate in remaining.iter().copied().combinations(group) {
            let sum = candidate
                .iter()
                .fold(T::zero(), |acc, &i| acc + currents[i]);
            // |sum - total/3| scaled by 3, exact for integer currents
            let deviation = (three * sum - total).abs();
            if best.as_ref().is_none_or(|(d, _)| deviation < *d) {
                best = Some((deviation, candidate));
            }
        }
        let (_, chosen) = best.expect("remaining loads cover at least one group");
        for &i in &chosen {
            labels[i] = label;
        }
        remaining.retain(|i| !chosen.contains(i));
    }
    PhaseAssignment::new(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::phase_sums;
    use num_rational::Rational64;

    fn loads(v: &[f64]) -> LoadSet<f64> {
        LoadSet::new(v.to_vec()).unwrap()
    }

    fn sorted_sums(l: &LoadSet<f64>, a: &PhaseAssignment) -> Vec<f64> {
        let mut s = phase_sums(l, a).unwrap().to_vec();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s
    }

    #[test]
    fn objective_examples() {
        let data1 = loads(&[89., 85., 74., 38., 56., 45.]);
        let heu1 = PhaseAssignment::new(vec![1, 2, 3, 1, 3, 2]);
        assert_eq!(objective_value(&data1, &heu1).unwrap().max_diff, 3.0);

        let data2 = loads(&[35., 0., 90., 21., 87., 112.]);
        let heu2 = PhaseAssignment::new(vec![1, 3, 2, 1, 2, 3]);
        assert_eq!(objective_value(&data2, &heu2).unwrap().max_diff, 121.0);

        let equal = loads(&[7.0; 6]);
        let any = PhaseAssignment::new(vec![3, 1, 2, 2, 3, 1]);
        assert_eq!(objective_value(&equal, &any).unwrap().max_diff, 0.0);
    }

    #[test]
    fn objective_rejects_unbalanced() {
        let l = loads(&[1.0; 6]);
        let bad = PhaseAssignment::new(vec![1, 1, 1, 2, 2, 3]);
        assert!(matches!(
            objective_value(&l, &bad),
            Err(BalanceError::Unbalanced { .. })
        ));
    }

    #[test]
    fn objective_orders_lexicographically() {
        let a = BalanceObjective { max_diff: 3.0, total_abs_deviation: 10.0 };
        let b = BalanceObjective { max_diff: 4.0, total_abs_deviation: 0.0 };
        let c = BalanceObjective { max_diff: 3.0, total_abs_deviation: 11.0 };
        assert!(a < b);
        assert!(a < c);
    }

    #[test]
    fn exact_examples() {
        let data2 = loads(&[35., 0., 90., 21., 87., 112.]);
        let a = exact_balance(&data2).unwrap();
        assert_eq!(sorted_sums(&data2, &a), vec![111.0, 112.0, 122.0]);
        assert_eq!(objective_value(&data2, &a).unwrap().max_diff, 11.0);

        let data1 = loads(&[89., 85., 74., 38., 56., 45.]);
        let a = exact_balance(&data1).unwrap();
        assert_eq!(sorted_sums(&data1, &a), vec![127.0, 130.0, 130.0]);

        let equal = loads(&[10.0; 6]);
        let a = exact_balance(&equal).unwrap();
        assert_eq!(phase_sums(&equal, &a).unwrap(), [20.0; 3]);
        assert_eq!(a.labels(), &[1, 1, 2, 2, 3, 3]);
    }

    #[test]
    fn exact_capacity_guard() {
        let big = loads(&[1.0; 18]);
        assert_eq!(
            exact_balance(&big),
            Err(BalanceError::Capacity { limit: 15, actual: 18 })
        );
        assert!(exact_balance(&loads(&[1.0; 15])).is_ok());
    }

    #[test]
    fn greedy_examples() {
        let data1 = loads(&[89., 85., 74., 38., 56., 45.]);
        let a = greedy_balance(&data1);
        assert_eq!(sorted_sums(&data1, &a), vec![127.0, 130.0, 130.0]);
        // (85, 45) and (74, 56) tie at 130; the smaller index set {1, 5} wins
        assert_eq!(a.labels(), &[3, 1, 2, 3, 2, 1]);

        let data3 = loads(&[45., 67., 87., 64., 30., 90.]);
        let a = greedy_balance(&data3);
        assert_eq!(sorted_sums(&data3, &a), vec![120.0, 131.0, 132.0]);

        let data2 = loads(&[35., 0., 90., 21., 87., 112.]);
        let a = greedy_balance(&data2);
        assert_eq!(a.labels(), &[3, 1, 2, 2, 3, 1]);
        assert_eq!(phase_sums(&data2, &a).unwrap(), [112.0, 111.0, 122.0]);
    }

    #[test]
    fn greedy_three_loads() {
        let l = loads(&[5.0, 1.0, 3.0]);
        let a = greedy_balance(&l);
        assert_eq!(a.labels(), &[2, 3, 1]);
    }

    #[test]
    fn exact_rational_matches_float() {
        let raw = [35i64, 0, 90, 21, 87, 112];
        let exact = LoadSet::new(raw.iter().map(|&v| Rational64::from(v)).collect()).unwrap();
        let float = loads(&raw.map(|v| v as f64));
        assert_eq!(exact_balance(&exact).unwrap(), exact_balance(&float).unwrap());
        assert_eq!(greedy_balance(&exact), greedy_balance(&float));
    }
}
