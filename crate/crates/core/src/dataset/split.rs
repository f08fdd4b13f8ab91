use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::manifest::Split;
use crate::rng::{stage_rng, Stream};

/// Stratified split: within each `(class, jsr)` cell the samples are shuffled
/// with a cell-specific seed and the first `round(train_frac n)` go to train.
///
/// `cells[i]` is the `(class_id, jsr_db)` of sample `i`. Cell seeds are keyed
/// by the cell's position in sorted cell order.
pub fn stratified_split(cells: &[(u8, f64)], train_frac: f64, seed: u64) -> Vec<Split> {
    let mut groups: BTreeMap<(u8, i64), Vec<usize>> = BTreeMap::new();
    for (i, &(c, jsr)) in cells.iter().enumerate() {
        // JSR values are on a coarse grid; millibel keys keep them orderable.
        groups.entry((c, (jsr * 1000.0).round() as i64)).or_default().push(i);
    }
    let mut out = vec![Split::Test; cells.len()];
    for (cell_no, members) in groups.values().enumerate() {
        let mut order = members.clone();
        order.shuffle(&mut stage_rng(seed, Stream::Split, cell_no as u64));
        let n_train = (train_frac * order.len() as f64).round() as usize;
        for &i in &order[..n_train.min(order.len())] {
            out[i] = Split::Train;
        }
    }
    out
}
