use super::MlError;

/// F1 of `positive`: harmonic mean of precision and recall, 0 when both are 0.
pub fn f1_score<S: AsRef<str>>(
    predictions: &[S],
    truth: &[S],
    positive: &str,
) -> Result<f64, MlError> {
    if predictions.len() != truth.len() {
        return Err(MlError::LengthMismatch(predictions.len(), truth.len()));
    }
    if truth.is_empty() {
        return Err(MlError::Empty);
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (p, t) in predictions.iter().zip(truth) {
        match (p.as_ref() == positive, t.as_ref() == positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    // 2PR/(P+R) reduces to 2TP/(2TP+FP+FN), which is 0 exactly when TP is.
    if tp == 0 {
        return Ok(0.0);
    }
    Ok(2.0 * tp as f64 / (2 * tp + fp + fn_) as f64)
}

/// Relative improvement of `model` over `baseline`, in percent.
pub fn percent_increase(model: f64, baseline: f64) -> Result<f64, MlError> {
    if baseline.is_nan() || baseline <= 0.0 {
        return Err(MlError::NonPositiveBaseline(baseline));
    }
    Ok((model - baseline) / baseline * 100.0)
}
