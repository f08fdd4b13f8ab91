/// Probabilities are clamped to `[EPS, 1 - EPS]` before taking logs.
pub const EPS: f64 = 1e-7;

/// Binary cross-entropy of one prediction.
pub fn bce(p: f64, same: bool) -> f64 {
    let q = p.clamp(EPS, 1.0 - EPS);
    if same {
        -q.ln()
    } else {
        -(1.0 - q).ln()
    }
}

/// Derivative of [`bce`] with respect to the pre-sigmoid logit; zero where
/// the clamp is active.
pub fn bce_logit_grad(p: f64, same: bool) -> f64 {
    if !(EPS..=1.0 - EPS).contains(&p) {
        return 0.0;
    }
    p - if same { 1.0 } else { 0.0 }
}

pub fn mean_bce(ps: &[f64], same: &[bool]) -> f64 {
    ps.iter().zip(same).map(|(&p, &y)| bce(p, y)).sum::<f64>() / ps.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert!((bce(0.5, true) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(bce(0.5, false), bce(0.5, true));
        let (l1, l2) = (bce(0.9, true), bce(0.2, true));
        assert!((mean_bce(&[0.9, 0.2], &[true, true]) - (l1 + l2) / 2.0).abs() < 1e-15);
        assert!(bce(0.0, true).is_finite());
        assert_eq!(bce_logit_grad(1.0, false), 0.0);
        assert_eq!(bce_logit_grad(0.25, true), -0.75);
    }
}
