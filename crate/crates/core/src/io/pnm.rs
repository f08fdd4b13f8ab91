//! Binary PGM (P5) and PPM (P6) images.
//!
//! Files put the highest frequency on the top row, the usual way a
//! spectrogram is drawn; in memory row 0 is the lowest frequency, so both
//! directions flip the rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{atomic_write, read_file, read_json, sidecar_path, write_json, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::imgprep::{BinaryImage, CompositeImage, GrayImage, Image};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pnm {
    /// 1 for P5 (gray), 3 for P6 (RGB).
    pub channels: usize,
    pub width: usize,
    pub height: usize,
    /// Top row first, channel-interleaved.
    pub data: Vec<u8>,
}

impl Pnm {
    pub fn encode(&self) -> Vec<u8> {
        let magic = if self.channels == 3 { "P6" } else { "P5" };
        let mut out = format!("{magic}\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Pnm> {
        let mut pos = 0;
        let mut fields = Vec::new();
        while fields.len() < 4 {
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
                if bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Format("truncated PNM header".into()));
            }
            fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
        pos += 1;
        let channels = match fields[0].as_str() {
            "P5" => 1,
            "P6" => 3,
            m => return Err(Error::Format(format!("unsupported PNM magic {m}"))),
        };
        let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Format(format!("bad PNM header field {s}")));
        let (width, height, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval != 255 {
            return Err(Error::Format(format!("only maxval 255 is supported, got {maxval}")));
        }
        let need = width * height * channels;
        if bytes.len() < pos || bytes.len() - pos != need {
            return Err(Error::Format(format!("PNM body should hold {need} bytes")));
        }
        Ok(Pnm { channels, width, height, data: bytes[pos..].to_vec() })
    }
}

fn flip_rows(data: &[u8], row_len: usize) -> Vec<u8> {
    data.chunks_exact(row_len).rev().flatten().copied().collect()
}

/// Writes a gray image scaled so `full_scale` maps to byte 255.
pub fn write_gray_pgm(path: &Path, img: &GrayImage, full_scale: f64) -> Result<()> {
    let k = if full_scale > 0.0 { 255.0 / full_scale } else { 0.0 };
    let bytes: Vec<u8> = img.pixels().iter().map(|&p| (p * k).round().clamp(0.0, 255.0) as u8).collect();
    let pnm = Pnm { channels: 1, width: img.width(), height: img.height(), data: flip_rows(&bytes, img.width()) };
    atomic_write(path, &pnm.encode())
}

pub fn write_binary_pgm(path: &Path, img: &BinaryImage) -> Result<()> {
    write_gray_pgm(path, &img.to_gray(), 1.0)
}

pub fn read_pgm(path: &Path) -> Result<Pnm> {
    let p = Pnm::decode(&read_file(path)?)?;
    if p.channels != 1 {
        return Err(Error::Format(format!("{} is not a PGM", path.display())));
    }
    Ok(p)
}

pub fn read_ppm(path: &Path) -> Result<Pnm> {
    let p = Pnm::decode(&read_file(path)?)?;
    if p.channels != 3 {
        return Err(Error::Format(format!("{} is not a PPM", path.display())));
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeSidecar {
    /// Identifiers of the wavelet, Margenau-Hill and Born-Jordan sources, in channel order.
    pub source_spectrogram_ids: [String; 3],
    pub pipeline_params: serde_json::Value,
    /// Frequency of each in-memory row, lowest first.
    pub freq_axis_hz: Vec<f64>,
    pub format_version: u32,
}

/// Writes the composite as P6 (channel values 0 or 255) plus `path.json`.
pub fn write_composite(path: &Path, img: &CompositeImage, side: &CompositeSidecar) -> Result<()> {
    let pnm = Pnm {
        channels: 3,
        width: img.width(),
        height: img.height(),
        data: flip_rows(&img.interleaved_rgb(), 3 * img.width()),
    };
    atomic_write(path, &pnm.encode())?;
    write_json(&sidecar_path(path), side)
}

pub fn read_composite(path: &Path) -> Result<(CompositeImage, CompositeSidecar)> {
    let side: CompositeSidecar = read_json(&sidecar_path(path))?;
    if side.format_version != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported composite format version {}", side.format_version)));
    }
    let p = read_ppm(path)?;
    if side.freq_axis_hz.len() != p.height {
        return Err(Error::Format("sidecar frequency axis does not match image height".into()));
    }
    let data = flip_rows(&p.data, 3 * p.width);
    let mut chans = Vec::with_capacity(3);
    for c in 0..3 {
        let px = data
            .chunks_exact(3)
            .map(|rgb| match rgb[c] {
                0 => Ok(0u8),
                255 => Ok(1u8),
                v => Err(Error::Format(format!("composite byte {v} is neither 0 nor 255"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        chans.push(Image::new(p.width, p.height, px, side.freq_axis_hz.clone())?);
    }
    let b = chans.pop().unwrap();
    let g = chans.pop().unwrap();
    let r = chans.pop().unwrap();
    Ok((CompositeImage::compose(r, g, b)?, side))
}
