use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trial::TrialResult;

/// How trials that stopped early contribute to later iterations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvePadding {
    /// A stopped trial keeps contributing its final best fitness.
    #[default]
    HoldLast,
    /// Average only the trials still running; the curve ends when all stop.
    ActiveOnly,
}

/// Per-iteration mean of the best-fitness curves up to `horizon` iterations.
pub fn average_curve(
    results: &[TrialResult],
    horizon: usize,
    padding: CurvePadding,
) -> Result<Vec<f64>> {
    if results.is_empty() {
        return Err(Error::Contract("cannot average zero curves".into()));
    }
    if let Some(r) = results.iter().find(|r| r.curve.is_empty()) {
        return Err(Error::Contract(format!(
            "trial with empty curve (evaluations {})",
            r.evaluations
        )));
    }
    let mut out = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let value = match padding {
            CurvePadding::HoldLast => {
                results
                    .iter()
                    .map(|r| r.curve[t.min(r.curve.len() - 1)])
                    .sum::<f64>()
                    / results.len() as f64
            }
            CurvePadding::ActiveOnly => {
                let live: Vec<f64> = results
                    .iter()
                    .filter_map(|r| r.curve.get(t).copied())
                    .collect();
                if live.is_empty() {
                    break;
                }
                live.iter().sum::<f64>() / live.len() as f64
            }
        };
        out.push(value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antibody::Antibody;

    fn trial(curve: Vec<f64>) -> TrialResult {
        TrialResult {
            converged: true,
            iterations_used: Some(curve.len()),
            best: Antibody {
                position: vec![0.0],
                fitness: *curve.last().unwrap(),
            },
            evaluations: 0,
            init_evaluations: 0,
            curve,
        }
    }

    #[test]
    fn hold_last_two_trials() {
        // Converged at 15 and 17: curves 30-t for t=1..15, 40-t for t=1..17.
        let a: Vec<f64> = (1..=15).map(|t| 30.0 - t as f64).collect();
        let b: Vec<f64> = (1..=17).map(|t| 40.0 - t as f64).collect();
        let avg = average_curve(&[trial(a), trial(b)], 20, CurvePadding::HoldLast).unwrap();
        assert_eq!(avg.len(), 20);
        // t = 1
        assert_eq!(avg[0], (29.0 + 39.0) / 2.0);
        // t = 16, 17: held 15 with live 24, 23
        assert_eq!(avg[15], (15.0 + 24.0) / 2.0);
        assert_eq!(avg[16], (15.0 + 23.0) / 2.0);
        // t = 18..20: both held
        assert_eq!(avg[19], (15.0 + 23.0) / 2.0);
    }

    #[test]
    fn active_only_drops_finished() {
        let avg = average_curve(
            &[trial(vec![4.0, 2.0]), trial(vec![6.0, 5.0, 1.0])],
            5,
            CurvePadding::ActiveOnly,
        )
        .unwrap();
        assert_eq!(avg, vec![5.0, 3.5, 1.0]);
    }

    #[test]
    fn identical_trials() {
        let t = trial(vec![3.0, 2.0, 1.0]);
        let avg = average_curve(&[t.clone(), t.clone(), t], 5, CurvePadding::HoldLast).unwrap();
        assert_eq!(avg, vec![3.0, 2.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn empty_results_rejected() {
        assert!(average_curve(&[], 10, CurvePadding::HoldLast).is_err());
    }
}
