//! Matching detected events against ground-truth intervals.

use crate::detector::PostureEvent;

/// Counts and ratios from matching a prediction list against truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalReport {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    /// TP / (TP + FP); 1.0 when nothing was predicted.
    pub precision: f64,
    /// TP / (TP + FN); 1.0 when there is no truth.
    pub recall: f64,
    /// Mean |predicted start - true start| over matched pairs, ms;
    /// 0 when nothing matched.
    pub mean_start_error_ms: f64,
}

/// Greedy one-to-one matching in time order.
///
/// A predicted event matches a truth interval when their spans overlap
/// or their starts differ by at most `match_tol_ms`. Each side is used
/// at most once; unmatched predictions are false positives, unmatched
/// truth intervals false negatives. Unconfirmed events are not counted
/// as predictions.
pub fn eval_events(
    predicted: &[PostureEvent],
    truth: &[(i64, i64)],
    match_tol_ms: i64,
) -> EvalReport {
    let confirmed: Vec<&PostureEvent> = predicted.iter().filter(|e| e.confirmed).collect();
    let mut truth_used = vec![false; truth.len()];
    let mut true_positives = 0;
    let mut start_error_sum = 0i64;

    for event in &confirmed {
        let matched = truth.iter().enumerate().find(|(i, t)| {
            !truth_used[*i] && spans_match(event.start_ms, event.end_ms, t.0, t.1, match_tol_ms)
        });
        if let Some((i, t)) = matched {
            truth_used[i] = true;
            true_positives += 1;
            start_error_sum += (event.start_ms - t.0).abs();
        }
    }

    let false_positives = confirmed.len() - true_positives;
    let false_negatives = truth.len() - true_positives;
    let ratio = |num: usize, denom: usize| {
        if denom == 0 {
            1.0
        } else {
            num as f64 / denom as f64
        }
    };
    EvalReport {
        true_positives,
        false_positives,
        false_negatives,
        precision: ratio(true_positives, true_positives + false_positives),
        recall: ratio(true_positives, true_positives + false_negatives),
        mean_start_error_ms: if true_positives == 0 {
            0.0
        } else {
            start_error_sum as f64 / true_positives as f64
        },
    }
}

fn spans_match(p_start: i64, p_end: i64, t_start: i64, t_end: i64, tol_ms: i64) -> bool {
    let overlap = p_start <= t_end && t_start <= p_end;
    overlap || (p_start - t_start).abs() <= tol_ms
}
