use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One convolution block: `filters` kernels of `kernel x kernel`, stride 1,
/// no padding, ReLU, then an optional 2x2 stride-2 max-pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvSpec {
    pub filters: usize,
    pub kernel: usize,
    pub pool: bool,
}

/// Twin-network topology. Both branches use the same parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub input_side: usize,
    pub channels: usize,
    pub convs: Vec<ConvSpec>,
    pub embed_dim: usize,
}

/// Resolved tensor sizes of one convolution block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvDims {
    pub in_c: usize,
    pub in_side: usize,
    pub out_c: usize,
    pub kernel: usize,
    /// Side after the convolution, before pooling.
    pub conv_side: usize,
    /// Side handed to the next block.
    pub out_side: usize,
    pub pool: bool,
}

impl ConvDims {
    pub fn patch_len(&self) -> usize {
        self.in_c * self.kernel * self.kernel
    }

    pub fn conv_pixels(&self) -> usize {
        self.conv_side * self.conv_side
    }

    pub fn input_len(&self) -> usize {
        self.in_c * self.in_side * self.in_side
    }

    pub fn output_len(&self) -> usize {
        self.out_c * self.out_side * self.out_side
    }
}

const fn conv(filters: usize, kernel: usize, pool: bool) -> ConvSpec {
    ConvSpec { filters, kernel, pool }
}

impl Architecture {
    /// 105x105x3 input, 64@10 -> 128@7 -> 128@4 -> 256@4, 4096-wide embedding.
    pub fn paper() -> Self {
        Architecture {
            input_side: 105,
            channels: 3,
            convs: vec![conv(64, 10, true), conv(128, 7, true), conv(128, 4, true), conv(256, 4, false)],
            embed_dim: 4096,
        }
    }

    /// 48x48x3 input, 16@5 -> 32@5 -> 32@3 -> 64@3, 128-wide embedding.
    pub fn desk() -> Self {
        Architecture {
            input_side: 48,
            channels: 3,
            convs: vec![conv(16, 5, true), conv(32, 5, true), conv(32, 3, true), conv(64, 3, false)],
            embed_dim: 128,
        }
    }

    /// 16x16x3 network small enough for finite-difference checks.
    pub fn toy() -> Self {
        Architecture {
            input_side: 16,
            channels: 3,
            convs: vec![conv(16, 3, true), conv(16, 2, true), conv(16, 2, true), conv(16, 1, false)],
            embed_dim: 8,
        }
    }

    pub fn conv_dims(&self) -> Result<Vec<ConvDims>> {
        let mut out = Vec::with_capacity(self.convs.len());
        let (mut c, mut side) = (self.channels, self.input_side);
        for (i, cv) in self.convs.iter().enumerate() {
            if cv.kernel == 0 || cv.kernel > side {
                return Err(Error::config(format!(
                    "conv block {} kernel {} does not fit a {side}-pixel input",
                    i + 1,
                    cv.kernel
                )));
            }
            let conv_side = side - cv.kernel + 1;
            let out_side = if cv.pool { conv_side / 2 } else { conv_side };
            if out_side == 0 {
                return Err(Error::config(format!("conv block {} pools its output away", i + 1)));
            }
            out.push(ConvDims { in_c: c, in_side: side, out_c: cv.filters, kernel: cv.kernel, conv_side, out_side, pool: cv.pool });
            c = cv.filters;
            side = out_side;
        }
        Ok(out)
    }

    pub fn flat_len(&self) -> Result<usize> {
        Ok(self.conv_dims()?.last().map_or(self.channels * self.input_side * self.input_side, |d| d.output_len()))
    }

    pub fn input_len(&self) -> usize {
        self.channels * self.input_side * self.input_side
    }

    pub fn validate(&self) -> Result<()> {
        if self.convs.len() != 4 {
            return Err(Error::config(format!("the twin network has 4 conv blocks, got {}", self.convs.len())));
        }
        if let Some(c) = self.convs.iter().find(|c| c.filters == 0 || c.filters % 16 != 0) {
            return Err(Error::config(format!("kernel counts must be positive multiples of 16, got {}", c.filters)));
        }
        if self.channels == 0 || self.embed_dim == 0 {
            return Err(Error::config("channels and embedding width must be positive"));
        }
        self.conv_dims().map(|_| ())
    }
}
