//! Twin convolutional network. Both inputs share one parameter vector; the
//! head scores `sigmoid(sum_j alpha_j |h1_j - h2_j| + beta)`.

mod adam;
mod arch;
mod checkpoint;
mod classify;
mod gemm;
mod loss;
mod net;
mod params;
mod train;

pub use adam::{Adam, LrSchedule};
pub use arch::{Architecture, ConvDims, ConvSpec};
pub use checkpoint::{decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint, CheckpointHeader};
pub use classify::{classify, classify_embedded, draw_support, evaluate, Classification, EvalConfig, EvalReport, JsrAccuracy};
pub use loss::{bce, bce_logit_grad, mean_bce};
pub use net::EmbedCache;
pub use params::{InitConfig, Model, ParamGroup, ParamLayout};
pub use train::{batch_loss_grad, smooth, train, train_with_progress, TrainConfig, TrainOutcome};
