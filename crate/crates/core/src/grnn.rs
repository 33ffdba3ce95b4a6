//! Generalized regression network mapping load vectors to switching sequences.
//!
//! The network stores every training pair. A query is scored against each
//! stored input with a Gaussian radial basis unit, and the output is the
//! weight-normalized average of the stored target label vectors. Outputs are
//! decoded to phase labels by rounding.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::balancing::BalanceObjective;
use crate::error::{BalanceError, Result};
use crate::model::{validate_assignment, BalanceReport, LoadSet, PhaseAssignment, PHASES};
use crate::scalar::Current;

/// A trained network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct GrnnModel<T> {
    inputs: Vec<Vec<T>>,
    targets: Vec<Vec<T>>,
    spread: T,
}

impl<T: Current + Float> GrnnModel<T> {
    /// Stores the solved instances. Every assignment must be balanced-valid.
    pub fn train(instances: &[(LoadSet<T>, PhaseAssignment)], spread: T) -> Result<Self> {
        let (inputs, targets) = instances
            .iter()
            .map(|(loads, assignment)| {
                validate_assignment(assignment, loads.len()).into_result()?;
                let target = assignment
                    .labels()
                    .iter()
                    .map(|&l| T::from(l).expect("label fits any float"))
                    .collect();
                Ok((loads.currents().to_vec(), target))
            })
            .collect::<Result<(Vec<_>, Vec<_>)>>()?;
        Self::from_parts(inputs, targets, spread)
    }

    /// Builds a model from raw stored vectors, checking every invariant.
    pub fn from_parts(inputs: Vec<Vec<T>>, targets: Vec<Vec<T>>, spread: T) -> Result<Self> {
        if inputs.is_empty() {
            return Err(BalanceError::EmptyTrainingSet);
        }
        if !(spread > T::zero()) || !spread.is_finite() {
            return Err(BalanceError::InvalidSpread);
        }
        if targets.len() != inputs.len() {
            return Err(BalanceError::Dimension {
                expected: inputs.len(),
                actual: targets.len(),
            });
        }
        let n = inputs[0].len();
        for (input, target) in inputs.iter().zip(&targets) {
            for v in [input, target] {
                if v.len() != n {
                    return Err(BalanceError::Dimension {
                        expected: n,
                        actual: v.len(),
                    });
                }
            }
            LoadSet::new(input.clone())?;
            if let Some((index, &bad)) = target
                .iter()
                .enumerate()
                .find(|(_, t)| ![1.0, 2.0, 3.0].contains(&t.as_f64()))
            {
                return Err(BalanceError::LabelOutOfRange {
                    index,
                    label: bad.to_u8().unwrap_or(u8::MAX),
                });
            }
        }
        Ok(Self {
            inputs,
            targets,
            spread,
        })
    }

    pub fn inputs(&self) -> &[Vec<T>] {
        &self.inputs
    }

    pub fn targets(&self) -> &[Vec<T>] {
        &self.targets
    }

    pub fn spread(&self) -> T {
        self.spread
    }

    /// Input (and output) dimension.
    pub fn n_loads(&self) -> usize {
        self.inputs[0].len()
    }

    /// Number of stored training instances.
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Kernel-weighted mean of the stored targets.
    ///
    /// If every weight underflows to zero the target of the nearest stored
    /// input (lowest index on ties) is returned instead.
    pub fn predict_raw(&self, loads: &LoadSet<T>) -> Result<Vec<T>> {
        let n = self.n_loads();
        if loads.len() != n {
            return Err(BalanceError::Dimension {
                expected: n,
                actual: loads.len(),
            });
        }
        let query = loads.currents();
        let two_var = (self.spread * self.spread) + (self.spread * self.spread);
        let distances: Vec<T> = self
            .inputs
            .iter()
            .map(|x| squared_distance(x, query))
            .collect();
        let weights: Vec<T> = distances.iter().map(|&d| (-d / two_var).exp()).collect();
        let weight_sum = weights.iter().fold(T::zero(), |acc, &w| acc + w);

        if !(weight_sum > T::zero()) || !weight_sum.is_finite() {
            let nearest = distances
                .iter()
                .enumerate()
                .fold(0, |best, (i, &d)| if d < distances[best] { i } else { best });
            return Ok(self.targets[nearest].clone());
        }

        let mut out = vec![T::zero(); n];
        for (target, &w) in self.targets.iter().zip(&weights) {
            let w = w / weight_sum;
            for (o, &y) in out.iter_mut().zip(target) {
                *o = *o + w * y;
            }
        }
        // a convex combination stays inside the target range; clamp off rounding
        for (j, o) in out.iter_mut().enumerate() {
            let (lo, hi) = self.targets.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), t| {
                (lo.min(t[j]), hi.max(t[j]))
            });
            *o = o.max(lo).min(hi);
        }
        Ok(out)
    }

    /// Raw prediction decoded with [`decode_outputs`]. The result may not be
    /// balanced-valid.
    pub fn predict_assignment(&self, loads: &LoadSet<T>) -> Result<PhaseAssignment> {
        Ok(decode_outputs(&self.predict_raw(loads)?))
    }
}

fn squared_distance<T: Float>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

/// Default kernel width: mean pairwise input distance over `sqrt(2 ln 2)`, so
/// a typical neighbor sits at the kernel's half maximum.
///
/// Falls back to 1 when fewer than two distinct inputs exist.
pub fn default_spread<T: Current + Float>(inputs: &[Vec<T>]) -> T {
    let mut sum = T::zero();
    let mut pairs = 0usize;
    for (i, a) in inputs.iter().enumerate() {
        for b in &inputs[i + 1..] {
            sum = sum + squared_distance(a, b).sqrt();
            pairs += 1;
        }
    }
    let mean = if pairs == 0 {
        T::zero()
    } else {
        sum / T::from(pairs).expect("pair count fits a float")
    };
    if !(mean > T::zero()) {
        return T::one();
    }
    let half_max = T::from(2.0 * std::f64::consts::LN_2)
        .expect("constant fits any float")
        .sqrt();
    mean / half_max
}

/// Smallest distance between two stored inputs, or `None` for fewer than two.
pub fn min_pairwise_distance<T: Current + Float>(inputs: &[Vec<T>]) -> Option<T> {
    let mut best: Option<T> = None;
    for (i, a) in inputs.iter().enumerate() {
        for b in &inputs[i + 1..] {
            let d = squared_distance(a, b).sqrt();
            if best.is_none_or(|m| d < m) {
                best = Some(d);
            }
        }
    }
    best
}

/// Rounds each output half away from zero and clamps it to `1..=3`.
pub fn decode_outputs<T: Float>(raw: &[T]) -> PhaseAssignment {
    raw.iter()
        .map(|&v| {
            let r = v.round();
            if r.is_nan() || r <= T::one() {
                1
            } else if r >= T::from(3.0).unwrap() {
                3
            } else {
                2
            }
        })
        .collect::<Vec<u8>>()
        .into()
}

/// Nearest balanced-valid assignment to `assignment`.
///
/// Minimizes the number of changed labels first, then the balance objective,
/// then picks the lexicographically smallest label sequence. Labels outside
/// `1..=3` always change. The search only visits assignments at the minimal
/// distance, which is still exponential in the number of surplus loads.
pub fn repair_assignment<T: Current>(
    assignment: &PhaseAssignment,
    loads: &LoadSet<T>,
) -> Result<PhaseAssignment> {
    let n = loads.len();
    if assignment.len() != n {
        return Err(BalanceError::Dimension {
            expected: n,
            actual: assignment.len(),
        });
    }
    if assignment.is_balanced_valid(n) {
        return Ok(assignment.clone());
    }
    let group = loads.group_size();
    let counts = assignment.counts();
    let mut surplus = [0; PHASES];
    let mut deficit = [0; PHASES];
    for p in 0..PHASES {
        surplus[p] = counts[p].saturating_sub(group);
        deficit[p] = group.saturating_sub(counts[p]);
    }
    let mut search = RepairSearch {
        currents: loads.currents(),
        original: assignment.labels(),
        total: loads.total(),
        group,
        surplus,
        deficit,
        kept: [0; PHASES],
        moved: [0; PHASES],
        filled: [0; PHASES],
        sums: [T::zero(); PHASES],
        labels: vec![0; n],
        best: None,
    };
    search.descend(0);
    let (_, labels) = search.best.expect("a minimal repair always exists");
    Ok(PhaseAssignment::new(labels))
}

struct RepairSearch<'a, T> {
    currents: &'a [T],
    original: &'a [u8],
    total: T,
    group: usize,
    surplus: [usize; PHASES],
    deficit: [usize; PHASES],
    kept: [usize; PHASES],
    moved: [usize; PHASES],
    filled: [usize; PHASES],
    sums: [T; PHASES],
    labels: Vec<u8>,
    best: Option<(BalanceObjective<T>, Vec<u8>)>,
}

impl<T: Current> RepairSearch<'_, T> {
    fn descend(&mut self, index: usize) {
        if index == self.currents.len() {
            let report = BalanceReport::from_sums(self.sums, self.total);
            let objective = BalanceObjective::from(&report);
            if self.best.as_ref().is_none_or(|(b, _)| objective < *b) {
                self.best = Some((objective, self.labels.clone()));
            }
            return;
        }
        let origin = match self.original[index] {
            l @ 1..=3 => Some(usize::from(l - 1)),
            _ => None,
        };
        for phase in 0..PHASES {
            let keep = origin == Some(phase);
            let allowed = if keep {
                self.kept[phase] < self.group
            } else {
                let may_leave = match origin {
                    // loads of phases without surplus never move
                    Some(o) => self.moved[o] < self.surplus[o],
                    None => true,
                };
                may_leave && self.filled[phase] < self.deficit[phase]
            };
            if !allowed {
                continue;
            }
            if keep {
                self.kept[phase] += 1;
            } else {
                if let Some(o) = origin {
                    self.moved[o] += 1;
                }
                self.filled[phase] += 1;
            }
            let current = self.currents[index];
            self.sums[phase] = self.sums[phase] + current;
            self.labels[index] = phase as u8 + 1;

            self.descend(index + 1);

            self.sums[phase] = self.sums[phase] - current;
            if keep {
                self.kept[phase] -= 1;
            } else {
                if let Some(o) = origin {
                    self.moved[o] -= 1;
                }
                self.filled[phase] -= 1;
            }
        }
    }
}

/// How the network's answer compares to the heuristic on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Better,
    Same,
    Worse,
    /// The network's assignment is not balanced-valid.
    Fail,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::Better, Outcome::Same, Outcome::Worse, Outcome::Fail];

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Better => "BETTER",
            Outcome::Same => "SAME",
            Outcome::Worse => "WORSE",
            Outcome::Fail => "FAIL",
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares maximum phase differences; equal within the scalar's tie tolerance
/// counts as `Same`.
pub fn classify_outcome<T: Current>(
    nn_report: &BalanceReport<T>,
    heuristic_report: &BalanceReport<T>,
    nn_valid: bool,
) -> Outcome {
    if !nn_valid {
        return Outcome::Fail;
    }
    let gap = nn_report.max_diff - heuristic_report.max_diff;
    if gap.abs() <= T::tie_tolerance() {
        Outcome::Same
    } else if gap < T::zero() {
        Outcome::Better
    } else {
        Outcome::Worse
    }
}
