use super::SweepPoint;
use crate::protocol::{Decision, ShotOutcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("no shot outcomes to aggregate")]
    Empty,
    #[error("outcomes mix loyal and traitorous commanders")]
    MixedCommander,
}

/// Aggregated statistics of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub point: SweepPoint,
    pub shots: usize,
    /// Loyal lieutenant decisions observed, the denominator of the
    /// lieutenant-level rates.
    pub loyal_samples: usize,
    pub lieutenant_errors: usize,
    pub aborts: usize,
    pub wrong_values: usize,
    pub shots_with_error: usize,
    pub lieutenant_error_rate: f64,
    pub shot_error_rate: f64,
    pub abort_rate: f64,
    pub wrong_value_rate: f64,
}

fn rate(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

/// Binomial standard error of a rate estimated from `samples` trials.
pub fn standard_error(rate: f64, samples: usize) -> f64 {
    if samples == 0 {
        0.0
    } else {
        (rate * (1.0 - rate) / samples as f64).sqrt()
    }
}

impl MetricsRow {
    pub fn lieutenant_error_se(&self) -> f64 {
        standard_error(self.lieutenant_error_rate, self.loyal_samples)
    }

    pub fn abort_se(&self) -> f64 {
        standard_error(self.abort_rate, self.loyal_samples)
    }

    pub fn shot_error_se(&self) -> f64 {
        standard_error(self.shot_error_rate, self.shots)
    }
}

/// Folds the outcomes of one sweep point into rates.
///
/// Wrong value means a loyal lieutenant committed to a bit it should not
/// have: the opposite of the order under a loyal commander, any bit under a
/// traitorous one.
pub fn aggregate_metrics(
    point: &SweepPoint,
    outcomes: &[ShotOutcome],
) -> Result<MetricsRow, MetricsError> {
    let first = outcomes.first().ok_or(MetricsError::Empty)?;
    if outcomes.iter().any(|o| o.commander_loyal != first.commander_loyal) {
        return Err(MetricsError::MixedCommander);
    }
    let (mut samples, mut errors, mut aborts, mut wrong, mut bad_shots) = (0, 0, 0, 0, 0);
    for o in outcomes {
        let mut shot_err = false;
        for l in o.loyal() {
            samples += 1;
            if l.error {
                errors += 1;
                shot_err = true;
            }
            if l.decision == Decision::Abort {
                aborts += 1;
            } else if !o.commander_loyal || l.decision != Decision::from_bit(l.sent_order) {
                wrong += 1;
            }
        }
        bad_shots += usize::from(shot_err);
    }
    Ok(MetricsRow {
        point: point.clone(),
        shots: outcomes.len(),
        loyal_samples: samples,
        lieutenant_errors: errors,
        aborts,
        wrong_values: wrong,
        shots_with_error: bad_shots,
        lieutenant_error_rate: rate(errors, samples),
        shot_error_rate: rate(bad_shots, outcomes.len()),
        abort_rate: rate(aborts, samples),
        wrong_value_rate: rate(wrong, samples),
    })
}
