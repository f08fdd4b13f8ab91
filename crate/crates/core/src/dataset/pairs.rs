use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Two training samples (indices into the training set) and whether they
/// share a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingPair {
    pub a: usize,
    pub b: usize,
    pub same: bool,
}

/// Draws `n_pairs` pairs over samples with class `labels`. Each pair is a
/// same-class pair with probability `balance`: a uniform anchor is drawn,
/// then a partner from the anchor's class (same) or from any other class.
pub fn sample_pairs(labels: &[u8], n_pairs: usize, seed: u64, balance: f64) -> Result<Vec<MatchingPair>> {
    if labels.is_empty() {
        return Err(Error::Sampling("training set is empty".into()));
    }
    if !(0.0..=1.0).contains(&balance) {
        return Err(Error::config(format!("pair balance {balance} outside [0, 1]")));
    }
    let n_classes = labels.iter().copied().max().unwrap() as usize + 1;
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &c) in labels.iter().enumerate() {
        by_class[c as usize].push(i);
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(n_pairs);
    for _ in 0..n_pairs {
        let same = rng.random_bool(balance);
        let a = rng.random_range(0..labels.len());
        let ca = labels[a] as usize;
        let b = if same {
            let members = &by_class[ca];
            if members.len() < 2 {
                return Err(Error::Sampling(format!("class {ca} has {} training sample(s), a same pair needs 2", members.len())));
            }
            let mut k = rng.random_range(0..members.len() - 1);
            if members[k] == a {
                k = members.len() - 1;
            }
            members[k]
        } else {
            let others = labels.len() - by_class[ca].len();
            if others == 0 {
                return Err(Error::Sampling("every training sample shares one class".into()));
            }
            let k = rng.random_range(0..others);
            // k-th index whose class differs from the anchor's.
            labels.iter().enumerate().filter(|(_, &c)| c as usize != ca).nth(k).unwrap().0
        };
        out.push(MatchingPair { a, b, same });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_classes() {
        let labels: Vec<u8> = (0..60).map(|i| (i % 10) as u8).collect();
        let pairs = sample_pairs(&labels, 2000, 9, 0.5).unwrap();
        for p in &pairs {
            assert_eq!(p.same, labels[p.a] == labels[p.b]);
            assert_ne!(p.a, p.b);
        }
    }

    #[test]
    fn singleton_class_cannot_form_same_pair() {
        let labels = vec![0, 1, 1];
        let r = sample_pairs(&labels, 200, 1, 1.0);
        assert!(matches!(r, Err(Error::Sampling(_))));
    }
}
