use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sigsynth::InterferenceKind;

pub const N_CLASSES: usize = 10;

/// One of the ten interference classes: a single kind or an unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub id: u8,
    pub members: Vec<InterferenceKind>,
}

impl ClassLabel {
    pub fn name(&self) -> String {
        self.members.iter().map(|k| k.name()).collect::<Vec<_>>().join("+")
    }
}

/// Singletons in canonical kind order, then pairs in lexicographic order.
pub fn enumerate_classes() -> Vec<ClassLabel> {
    let kinds = InterferenceKind::ALL;
    let mut out: Vec<ClassLabel> = kinds.iter().map(|&k| vec![k]).chain(
        (0..4).flat_map(|i| ((i + 1)..4).map(move |j| vec![kinds[i], kinds[j]])),
    )
    .enumerate()
    .map(|(id, members)| ClassLabel { id: id as u8, members })
    .collect();
    out.shrink_to_fit();
    out
}

pub fn class_by_id(id: u8) -> Result<ClassLabel> {
    enumerate_classes()
        .into_iter()
        .nth(id as usize)
        .ok_or_else(|| Error::config(format!("class id {id} out of range 0..{N_CLASSES}")))
}

/// Class whose member set equals `kinds` (order-free).
pub fn class_of(kinds: &[InterferenceKind]) -> Option<u8> {
    let mut k = kinds.to_vec();
    k.sort();
    enumerate_classes().into_iter().find(|c| c.members == k).map(|c| c.id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use InterferenceKind::*;

    #[test]
    fn ten_classes_in_frozen_order() {
        let c = enumerate_classes();
        assert_eq!(c.len(), N_CLASSES);
        assert_eq!(c[0].members, vec![FixedTone]);
        assert_eq!(c[3].members, vec![CombSpectrum]);
        assert_eq!(c[4].members, vec![FixedTone, LinearSweep]);
        assert_eq!(c[9].members, vec![PeriodicPulse, CombSpectrum]);
        for pair in &c[4..] {
            assert_eq!(pair.members.len(), 2);
            assert_ne!(pair.members[0], pair.members[1]);
        }
    }

    #[test]
    fn lookup_is_order_free() {
        assert_eq!(class_of(&[CombSpectrum, LinearSweep]), Some(8));
        assert_eq!(class_of(&[PeriodicPulse]), Some(2));
        assert!(class_by_id(10).is_err());
    }
}
