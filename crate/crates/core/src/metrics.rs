use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const CLAMP: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub log_loss: f64,
    pub auroc: f64,
    pub n: usize,
}

fn check_aligned<T>(y: &[u8], p: &[T]) -> Result<()> {
    if y.len() != p.len() {
        return Err(Error::SchemaMismatch(format!(
            "{} targets for {} predictions",
            y.len(),
            p.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::InsufficientData("metrics need at least one row".into()));
    }
    Ok(())
}

/// Mean binary cross-entropy with probabilities clamped to `[1e-15, 1 - 1e-15]`.
pub fn log_loss<T: Scalar>(y: &[u8], p: &[T]) -> Result<f64> {
    check_aligned(y, p)?;
    let total: f64 = y
        .iter()
        .zip(p)
        .map(|(&y, &p)| {
            let p = p.as_f64().clamp(CLAMP, 1.0 - CLAMP);
            if y == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    Ok(total / y.len() as f64)
}

/// Area under the ROC curve via the Mann-Whitney statistic; tied scores
/// contribute one half.
pub fn auroc<T: Scalar>(y: &[u8], p: &[T]) -> Result<f64> {
    check_aligned(y, p)?;
    let n_pos = y.iter().filter(|&&v| v == 1).count();
    let n_neg = y.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::AurocUndefined);
    }
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&a, &b| p[a].as_f64().total_cmp(&p[b].as_f64()));
    // midranks (1-based) summed over positives
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && p[order[j + 1]].as_f64() == p[order[i]].as_f64() {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += mid * order[i..=j].iter().filter(|&&k| y[k] == 1).count() as f64;
        i = j + 1;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

pub fn evaluate<T: Scalar>(y: &[u8], p: &[T]) -> Result<EvalResult> {
    Ok(EvalResult {
        log_loss: log_loss(y, p)?,
        auroc: auroc(y, p)?,
        n: y.len(),
    })
}
