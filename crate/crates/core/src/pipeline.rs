//! End-to-end rendering of one received signal into a composite image.
//!
//! Order: decimate, transform (wavelet, Margenau-Hill, Born-Jordan), gray
//! mapping, normalization, binarization, band crop, resize, compose.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgprep::{
    binarize_with_stats, crop_band, normalize, resize_nn, BinarizeStats, BinaryImage, CompositeImage, GrayImage,
    DEFAULT_A_MAX, DEFAULT_A_MIN, DEFAULT_MARGIN_FRAC,
};
use crate::sigsynth::{synthesize, ComplexSignal, ScenarioSpec, Synthesized};
use crate::tfa::{self, Spectrogram, TfGridSpec, TransformKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Integer rate reduction applied before the transforms; 1 disables it.
    pub decimation: usize,
    pub tf: TfGridSpec,
    pub a_min: f64,
    pub a_max: f64,
    /// Frequency band kept by the crop, before the margin is applied.
    pub active_band_hz: [f64; 2],
    pub margin_frac: f64,
    /// Edge length of the square network input.
    pub side: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            decimation: 16,
            tf: TfGridSpec::default(),
            a_min: DEFAULT_A_MIN,
            a_max: DEFAULT_A_MAX,
            active_band_hz: [0.0, 220e3],
            margin_frac: DEFAULT_MARGIN_FRAC,
            side: 105,
        }
    }
}

/// Every intermediate product of one rendering, channel order R, G, B.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub analysed: ComplexSignal,
    pub spectrograms: [Spectrogram; 3],
    pub gray: [GrayImage; 3],
    pub binary: [BinaryImage; 3],
    pub stats: [BinarizeStats; 3],
    pub composite: CompositeImage,
}

pub fn transform(kind: TransformKind, signal: &ComplexSignal, grid: &TfGridSpec) -> Result<Spectrogram> {
    match kind {
        TransformKind::Wavelet => tfa::cwt(signal, grid),
        TransformKind::Mhd => tfa::mhd(signal, grid),
        TransformKind::Bjd => tfa::bjd(signal, grid),
    }
}

/// Gray image to square binary image: normalize, binarize, crop, resize.
pub fn prepare_channel(gray: &GrayImage, cfg: &PipelineConfig) -> Result<(BinaryImage, BinarizeStats)> {
    let norm = normalize(gray, cfg.a_min, cfg.a_max)?;
    let (bin, stats) = binarize_with_stats(&norm);
    let cropped = crop_band(&bin, cfg.active_band_hz, cfg.margin_frac)?;
    Ok((resize_nn(&cropped, cfg.side)?, stats))
}

pub fn render_signal(received: &ComplexSignal, cfg: &PipelineConfig) -> Result<Rendered> {
    let analysed = tfa::decimate_analytic(received, cfg.decimation)?;
    let mut spectrograms = Vec::with_capacity(3);
    let mut gray = Vec::with_capacity(3);
    let mut binary = Vec::with_capacity(3);
    let mut stats = Vec::with_capacity(3);
    for kind in TransformKind::ALL {
        let s = transform(kind, &analysed, &cfg.tf)?;
        let g = tfa::to_gray(&s);
        let (b, st) = prepare_channel(&g, cfg)?;
        if !st.converged {
            return Err(Error::Numerical {
                path: format!("{} binarization", kind.name()),
                message: format!("threshold still moving after {} iterations", st.iterations),
            });
        }
        spectrograms.push(s);
        gray.push(g);
        binary.push(b);
        stats.push(st);
    }
    let composite = CompositeImage::compose(binary[0].clone(), binary[1].clone(), binary[2].clone())?;
    Ok(Rendered {
        analysed,
        spectrograms: spectrograms.try_into().unwrap(),
        gray: gray.try_into().unwrap(),
        binary: binary.try_into().unwrap(),
        stats: stats.try_into().unwrap(),
        composite,
    })
}

/// Synthesizes and renders a scenario; failures carry the scenario seed.
pub fn render_scenario(spec: &ScenarioSpec, cfg: &PipelineConfig) -> Result<(Synthesized, Rendered)> {
    let wrap = |e: Error| Error::Pipeline { seed: spec.rng_seed, source: Box::new(e) };
    let syn = synthesize(spec).map_err(wrap)?;
    let rendered = render_signal(&syn.received, cfg).map_err(wrap)?;
    Ok((syn, rendered))
}
