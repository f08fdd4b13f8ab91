//! Embedding network and similarity head.
//!
//! `embed` maps a `[channels][side][side]` tensor through the conv blocks and
//! a sigmoid fully connected layer. The pair head scores two embeddings with
//! `p = sigmoid(sum_j alpha_j |h1_j - h2_j| + beta)`.

use super::arch::ConvDims;
use super::gemm::gemm;
use super::params::Model;
use crate::error::{Error, Result};

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Unfolds `input` (`[c][s][s]`) into `[c k k][o o]` patch columns.
fn im2col(input: &[f64], d: &ConvDims, cols: &mut Vec<f64>) {
    let (s, k, o) = (d.in_side, d.kernel, d.conv_side);
    cols.clear();
    cols.resize(d.patch_len() * o * o, 0.0);
    let mut row = 0;
    for c in 0..d.in_c {
        let plane = &input[c * s * s..(c + 1) * s * s];
        for ky in 0..k {
            for kx in 0..k {
                let dst = &mut cols[row * o * o..(row + 1) * o * o];
                for oy in 0..o {
                    let src = &plane[(oy + ky) * s + kx..(oy + ky) * s + kx + o];
                    dst[oy * o..(oy + 1) * o].copy_from_slice(src);
                }
                row += 1;
            }
        }
    }
}

/// Adjoint of [`im2col`]: accumulates patch-column gradients into `grad_in`.
fn col2im(cols: &[f64], d: &ConvDims, grad_in: &mut [f64]) {
    let (s, k, o) = (d.in_side, d.kernel, d.conv_side);
    let mut row = 0;
    for c in 0..d.in_c {
        let plane = &mut grad_in[c * s * s..(c + 1) * s * s];
        for ky in 0..k {
            for kx in 0..k {
                let src = &cols[row * o * o..(row + 1) * o * o];
                for oy in 0..o {
                    let dst = &mut plane[(oy + ky) * s + kx..(oy + ky) * s + kx + o];
                    for (g, v) in dst.iter_mut().zip(&src[oy * o..(oy + 1) * o]) {
                        *g += v;
                    }
                }
                row += 1;
            }
        }
    }
}

/// 2x2 stride-2 max-pool (floor). Returns pooled values and, for each, the
/// flat index of the winning input (first maximum on ties).
fn max_pool(x: &[f64], channels: usize, side: usize) -> (Vec<f64>, Vec<u32>) {
    let o = side / 2;
    let mut vals = Vec::with_capacity(channels * o * o);
    let mut idx = Vec::with_capacity(channels * o * o);
    for c in 0..channels {
        let base = c * side * side;
        for oy in 0..o {
            for ox in 0..o {
                let mut best = base + 2 * oy * side + 2 * ox;
                for (dy, dx) in [(0, 1), (1, 0), (1, 1)] {
                    let j = base + (2 * oy + dy) * side + 2 * ox + dx;
                    if x[j] > x[best] {
                        best = j;
                    }
                }
                vals.push(x[best]);
                idx.push(best as u32);
            }
        }
    }
    (vals, idx)
}

/// Activations kept from a forward pass for the backward pass.
#[derive(Debug, Clone)]
pub struct EmbedCache {
    /// Input of each conv block.
    inputs: Vec<Vec<f64>>,
    /// Post-ReLU conv output of each block (before pooling).
    relu: Vec<Vec<f64>>,
    pool_idx: Vec<Option<Vec<u32>>>,
    flat: Vec<f64>,
    pub embedding: Vec<f64>,
}

impl EmbedCache {
    /// Which ReLUs fired and which pooling inputs won. Two forward passes with
    /// the same pattern lie on the same linear piece of the network.
    pub fn activation_pattern(&self) -> (Vec<bool>, Vec<u32>) {
        let active = self.relu.iter().flatten().map(|&v| v > 0.0).collect();
        let winners = self.pool_idx.iter().flatten().flatten().copied().collect();
        (active, winners)
    }
}

impl Model {
    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.arch.input_len() {
            return Err(Error::dimension(format!(
                "input of {} values, network expects {}x{}x{}",
                x.len(),
                self.arch.channels,
                self.arch.input_side,
                self.arch.input_side
            )));
        }
        Ok(())
    }

    pub fn embed_cached(&self, x: &[f64]) -> Result<EmbedCache> {
        self.check_input(x)?;
        let dims = self.arch.conv_dims()?;
        let mut cols = Vec::new();
        let mut cur = x.to_vec();
        let mut cache = EmbedCache {
            inputs: Vec::with_capacity(dims.len()),
            relu: Vec::with_capacity(dims.len()),
            pool_idx: Vec::with_capacity(dims.len()),
            flat: Vec::new(),
            embedding: Vec::new(),
        };
        for (d, &(wg, bg)) in dims.iter().zip(&self.layout.conv) {
            im2col(&cur, d, &mut cols);
            let p = d.conv_pixels();
            let bias = self.group(bg);
            let mut out: Vec<f64> = bias.iter().flat_map(|&b| std::iter::repeat_n(b, p)).collect();
            gemm(d.out_c, d.patch_len(), p, self.group(wg), false, &cols, false, 1.0, &mut out);
            for v in &mut out {
                *v = v.max(0.0);
            }
            let next = if d.pool {
                let (vals, idx) = max_pool(&out, d.out_c, d.conv_side);
                cache.pool_idx.push(Some(idx));
                vals
            } else {
                cache.pool_idx.push(None);
                out.clone()
            };
            cache.inputs.push(std::mem::replace(&mut cur, next));
            cache.relu.push(out);
        }
        let (wg, bg) = self.layout.fc;
        let mut z = self.group(bg).to_vec();
        gemm(self.arch.embed_dim, cur.len(), 1, self.group(wg), false, &cur, false, 1.0, &mut z);
        cache.embedding = z.iter().map(|&v| sigmoid(v)).collect();
        cache.flat = cur;
        Ok(cache)
    }

    /// Embedding `h` of one image; every coordinate lies in (0, 1).
    pub fn embed(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.embed_cached(x)?.embedding)
    }

    /// Accumulates into `grad` the parameter gradient of a scalar whose
    /// derivative with respect to the embedding is `dh`.
    pub fn backward_embed(&self, cache: &EmbedCache, dh: &[f64], grad: &mut [f64]) -> Result<()> {
        let dims = self.arch.conv_dims()?;
        let (wg, bg) = self.layout.fc;
        let dz: Vec<f64> = dh.iter().zip(&cache.embedding).map(|(g, h)| g * h * (1.0 - h)).collect();
        let flat_len = cache.flat.len();
        {
            let gw = &mut grad[self.layout.range(wg)];
            gemm(dz.len(), 1, flat_len, &dz, false, &cache.flat, false, 1.0, gw);
        }
        for (g, d) in grad[self.layout.range(bg)].iter_mut().zip(&dz) {
            *g += d;
        }
        let mut upstream = vec![0.0; flat_len];
        gemm(flat_len, dz.len(), 1, self.group(wg), true, &dz, false, 0.0, &mut upstream);

        let mut cols = Vec::new();
        for (l, d) in dims.iter().enumerate().rev() {
            let relu = &cache.relu[l];
            // Through the pool: route each gradient to its winning input.
            let mut dy = match &cache.pool_idx[l] {
                Some(idx) => {
                    let mut full = vec![0.0; relu.len()];
                    for (&i, &g) in idx.iter().zip(&upstream) {
                        full[i as usize] += g;
                    }
                    full
                }
                None => upstream,
            };
            for (g, &a) in dy.iter_mut().zip(relu) {
                if a <= 0.0 {
                    *g = 0.0;
                }
            }
            let (cw, cb) = self.layout.conv[l];
            let p = d.conv_pixels();
            im2col(&cache.inputs[l], d, &mut cols);
            gemm(d.out_c, p, d.patch_len(), &dy, false, &cols, true, 1.0, &mut grad[self.layout.range(cw)]);
            for (g, row) in grad[self.layout.range(cb)].iter_mut().zip(dy.chunks_exact(p)) {
                *g += row.iter().sum::<f64>();
            }
            if l == 0 {
                upstream = Vec::new();
                break;
            }
            let mut dcols = vec![0.0; d.patch_len() * p];
            gemm(d.patch_len(), d.out_c, p, self.group(cw), true, &dy, false, 0.0, &mut dcols);
            let mut dx = vec![0.0; d.input_len()];
            col2im(&dcols, d, &mut dx);
            upstream = dx;
        }
        debug_assert!(upstream.is_empty());
        Ok(())
    }

    /// Pre-sigmoid similarity score of two embeddings.
    pub fn pair_logit(&self, h1: &[f64], h2: &[f64]) -> f64 {
        self.alpha().iter().zip(h1.iter().zip(h2)).map(|(a, (x, y))| a * (x - y).abs()).sum::<f64>() + self.beta()
    }

    pub fn pair_score(&self, h1: &[f64], h2: &[f64]) -> f64 {
        sigmoid(self.pair_logit(h1, h2))
    }

    /// Same-class probability of two images, through one shared embedding.
    pub fn forward_pair(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        Ok(self.pair_score(&self.embed(a)?, &self.embed(b)?))
    }
}
