use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use hopjam::config::{configure_threads, RunConfig};
use hopjam::dataset::{generate_corpus, load_manifest, load_samples, ManifestRecord, Sample, Split, N_CLASSES};
use hopjam::imgprep::CompositeImage;
use hopjam::io::{self, CompositeSidecar, FORMAT_VERSION};
use hopjam::pipeline::{render_signal, transform};
use hopjam::siamese::{evaluate, load_checkpoint, save_checkpoint, smooth, train_with_progress, EvalReport, TrainConfig};
use hopjam::sigsynth::{synthesize, ScenarioSpec};
use hopjam::tfa::{decimate_analytic, to_gray, TransformKind};
use hopjam::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::plot;
use crate::{Cli, Command, DatasetArgs, EvalArgs, ReportArgs, SynthArgs, TfaArgs, TrainArgs, TransformArg};

pub const THREADS_ENV: &str = "HOPJAM_THREADS";
const SMOOTHING_WINDOW: usize = 20;

pub fn run(cli: Cli) -> Result<()> {
    let cfg = resolve_config(&cli)?;
    if let Some(n) = thread_count(&cli, &cfg)? {
        configure_threads(n)?;
    }
    match &cli.command {
        Command::Synth(a) => synth(&cli, &cfg, a),
        Command::Tfa(a) => tfa(&cfg, a),
        Command::Dataset(a) => dataset(&cfg, a),
        Command::Train(a) => train(&cfg, a),
        Command::Eval(a) => eval(&cfg, a),
        Command::Report(a) => report(&cfg, a),
    }
}

fn thread_count(cli: &Cli, cfg: &RunConfig) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => {
            let n = v.trim().parse().map_err(|_| Error::Config(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
            Ok(Some(n))
        }
        Err(_) => Ok(cli.threads.or(cfg.threads)),
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Preset, then the config file on top, then command-line flags.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut value = serde_json::to_value(RunConfig::preset(cli.preset.into()))?;
    if let Some(path) = &cli.config {
        let file: Value = io::read_json(path).with_context(|| format!("reading config {}", path.display()))?;
        merge(&mut value, file);
    }
    let mut cfg: RunConfig = serde_json::from_value(value).map_err(Error::from).context("invalid run configuration")?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    cfg = cfg.with_seed(seed);
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "signal".into())
}

fn synth(cli: &Cli, cfg: &RunConfig, a: &SynthArgs) -> Result<()> {
    let mut spec: ScenarioSpec = io::read_json(&a.spec).with_context(|| format!("reading scenario {}", a.spec.display()))?;
    if let Some(seed) = cli.seed {
        spec.rng_seed = seed;
    }
    let syn = synthesize(&spec)?;
    let path = cfg.out_dir.join(format!("{}.sig", a.name));
    io::write_signal(&path, &syn.received, Some(&spec), Some(spec.rng_seed))?;
    println!("wrote {}", path.display());
    println!("measured JSR: {:.2} dB", syn.measured_jsr_db);
    Ok(())
}

fn tfa(cfg: &RunConfig, a: &TfaArgs) -> Result<()> {
    let (signal, _) = io::read_signal(&a.signal).with_context(|| format!("reading signal {}", a.signal.display()))?;
    let p = &cfg.corpus.pipeline;
    let name = stem(&a.signal);
    let out = &cfg.out_dir;
    let write = |kind: TransformKind, spec: &hopjam::tfa::Spectrogram, gray: &hopjam::imgprep::GrayImage| -> Result<()> {
        let base = format!("{name}.{}", kind.name());
        io::write_spectrogram(&out.join(format!("{base}.tf")), spec, &p.tf)?;
        io::write_gray_pgm(&out.join(format!("{base}.pgm")), gray, 255.0)?;
        println!("wrote {}.{{tf,pgm}}", out.join(base).display());
        Ok(())
    };
    let single = match a.transform {
        TransformArg::Wavelet => Some(TransformKind::Wavelet),
        TransformArg::Mhd => Some(TransformKind::Mhd),
        TransformArg::Bjd => Some(TransformKind::Bjd),
        TransformArg::All => None,
    };
    match single {
        Some(kind) => {
            let analysed = decimate_analytic(&signal, p.decimation)?;
            let s = transform(kind, &analysed, &p.tf)?;
            write(kind, &s, &to_gray(&s))?;
        }
        None => {
            let r = render_signal(&signal, p)?;
            for (i, kind) in TransformKind::ALL.into_iter().enumerate() {
                write(kind, &r.spectrograms[i], &r.gray[i])?;
            }
            let side = CompositeSidecar {
                source_spectrogram_ids: TransformKind::ALL.map(|k| format!("{name}.{}", k.name())),
                pipeline_params: serde_json::to_value(p)?,
                freq_axis_hz: r.composite.channels()[0].freq_axis_hz().to_vec(),
                format_version: FORMAT_VERSION,
            };
            let path = out.join(format!("{name}.composite.ppm"));
            io::write_composite(&path, &r.composite, &side)?;
            let thresholds: Vec<String> = r.stats.iter().map(|s| format!("{:.4}", s.threshold)).collect();
            println!("wrote {} (thresholds {})", path.display(), thresholds.join(", "));
        }
    }
    Ok(())
}

fn dataset(cfg: &RunConfig, a: &DatasetArgs) -> Result<()> {
    let dir = cfg.out_dir.join(&a.name);
    let records = generate_corpus(&cfg.corpus, cfg.seed, &dir)?;
    let train = records.iter().filter(|r| r.split == Split::Train).count();
    println!("wrote {} records to {} ({} train, {} test)", records.len(), dir.display(), train, records.len() - train);
    Ok(())
}

fn corpus_dir(cfg: &RunConfig, given: &Option<PathBuf>) -> PathBuf {
    given.clone().unwrap_or_else(|| cfg.out_dir.join("corpus"))
}

fn load_split(dir: &Path, split: Split) -> Result<Vec<Sample>> {
    let (_, records) = load_manifest(dir).with_context(|| format!("loading corpus {}", dir.display()))?;
    let chosen: Vec<ManifestRecord> = records.into_iter().filter(|r| r.split == split).collect();
    if chosen.is_empty() {
        let which = if split == Split::Train { "training" } else { "test" };
        return Err(Error::Missing(format!("corpus {} has an empty {which} split", dir.display())).into());
    }
    Ok(load_samples(dir, &chosen)?)
}

fn tensors(samples: &[Sample]) -> (Vec<Vec<f64>>, Vec<u8>) {
    (samples.iter().map(|s| s.image.to_tensor()).collect(), samples.iter().map(|s| s.record.class_id).collect())
}

/// The run's training settings with the command-line budget applied.
pub fn train_config(cfg: &RunConfig, a: &TrainArgs) -> TrainConfig {
    let mut tc = cfg.train.clone();
    tc.iterations = a.iterations.unwrap_or(tc.iterations);
    tc.pairs_per_iteration = a.pairs.unwrap_or(tc.pairs_per_iteration);
    tc.parallel |= a.parallel;
    tc
}

fn train(cfg: &RunConfig, a: &TrainArgs) -> Result<()> {
    let dir = corpus_dir(cfg, &a.corpus);
    let samples = load_split(&dir, Split::Train)?;
    let tc = train_config(cfg, a);
    let side = samples[0].image.side();
    if side != Some(tc.arch.input_side) {
        return Err(Error::Config(format!(
            "corpus images are {:?} px but the network expects {} px; pick the matching --preset",
            side, tc.arch.input_side
        ))
        .into());
    }
    let (x, y) = tensors(&samples);
    eprintln!("training on {} images: {} iterations x {} pairs", x.len(), tc.iterations, tc.pairs_per_iteration);
    let every = (tc.iterations / 10).max(1);
    let out = train_with_progress(&tc, &x, &y, |it, loss| {
        if it % every == 0 || it + 1 == tc.iterations {
            eprintln!("iteration {it:>5}  loss {loss:.4}");
        }
    })?;
    let smoothed = smooth(&out.loss_trace, SMOOTHING_WINDOW);
    let mut csv = String::from("iteration,loss,smoothed\n");
    for (i, (l, s)) in out.loss_trace.iter().zip(&smoothed).enumerate() {
        writeln!(csv, "{i},{l},{s}").unwrap();
    }
    io::atomic_write(&cfg.out_dir.join("loss.csv"), csv.as_bytes())?;
    let meta = serde_json::json!({ "train": tc, "corpus": dir, "pairs_consumed": out.pairs_consumed });
    let ckpt = cfg.out_dir.join("model.ckpt");
    save_checkpoint(&ckpt, &out.model, tc.iterations, meta)?;
    println!(
        "wrote {} ({} pairs; smoothed loss {:.4} -> {:.4})",
        ckpt.display(),
        out.pairs_consumed,
        smoothed[0],
        smoothed[smoothed.len() - 1]
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct EvalOutput {
    checkpoint: PathBuf,
    corpus: PathBuf,
    seed: u64,
    support_k: usize,
    report: EvalReport,
}

fn eval(cfg: &RunConfig, a: &EvalArgs) -> Result<()> {
    let dir = corpus_dir(cfg, &a.corpus);
    let test = load_split(&dir, Split::Test)?;
    let ckpt = a.checkpoint.clone().unwrap_or_else(|| cfg.out_dir.join("model.ckpt"));
    let (model, _) = load_checkpoint(&ckpt).with_context(|| format!("loading checkpoint {}", ckpt.display()))?;
    let support = load_split(&dir, Split::Train)?;
    let (xs, ys) = tensors(&support);
    let (xq, yq) = tensors(&test);
    let jq: Vec<f64> = test.iter().map(|s| s.record.jsr_db).collect();
    let report = evaluate(&model, &xs, &ys, &xq, &yq, &jq, &cfg.eval)?;

    let mut per_jsr = String::from("jsr_db,accuracy,queries\n");
    for j in &report.per_jsr {
        writeln!(per_jsr, "{},{},{}", j.jsr_db, j.accuracy, j.queries).unwrap();
    }
    let mut confusion = String::from("true\\predicted");
    for c in 0..N_CLASSES {
        write!(confusion, ",{c}").unwrap();
    }
    confusion.push('\n');
    for (t, row) in report.confusion.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(confusion, "{t},{}", cells.join(",")).unwrap();
    }
    io::atomic_write(&cfg.out_dir.join("accuracy_per_jsr.csv"), per_jsr.as_bytes())?;
    io::atomic_write(&cfg.out_dir.join("confusion.csv"), confusion.as_bytes())?;
    let out = EvalOutput { checkpoint: ckpt, corpus: dir, seed: cfg.eval.seed, support_k: cfg.eval.support_k, report };
    io::write_json(&cfg.out_dir.join("eval.json"), &out)?;

    println!("{:>8}  {:>8}  {:>7}", "JSR dB", "accuracy", "queries");
    for j in &out.report.per_jsr {
        println!("{:>8.1}  {:>7.2}%  {:>7}", j.jsr_db, 100.0 * j.accuracy, j.queries);
    }
    println!(
        "pooled accuracy {:.2}%, JSR-averaged {:.2}% ({} queries x {} support draws)",
        100.0 * out.report.accuracy,
        100.0 * out.report.jsr_averaged_accuracy,
        out.report.queries,
        out.report.draws
    );
    Ok(())
}

fn read_loss_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = String::from_utf8(io::read_file(path)?).context("loss.csv is not UTF-8")?;
    text.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let parse = |s: Option<&&str>| s.and_then(|v| v.parse::<f64>().ok());
            match (parse(f.first()), parse(f.get(2))) {
                (Some(i), Some(s)) => Ok((i, s)),
                _ => Err(Error::Format(format!("bad loss.csv line {l:?}")).into()),
            }
        })
        .collect()
}

/// One test composite per class at the corpus's highest JSR, tiled 5 x 2.
fn class_montage(dir: &Path) -> Result<(Vec<u8>, usize, usize, Vec<String>)> {
    let (_, records) = load_manifest(dir)?;
    let top = records.iter().map(|r| r.jsr_db).fold(f64::NEG_INFINITY, f64::max);
    let mut picks = Vec::new();
    for c in 0..N_CLASSES as u8 {
        let r = records
            .iter()
            .find(|r| r.class_id == c && r.jsr_db == top)
            .ok_or_else(|| Error::Missing(format!("no sample of class {c} at {top} dB")))?;
        picks.push(r.clone());
    }
    let samples = load_samples(dir, &picks)?;
    let side = samples[0].image.side().ok_or_else(|| Error::Format("composite is not square".into()))?;
    let (cols, rows, gap) = (5, 2, 2);
    let w = cols * side + (cols + 1) * gap;
    let h = rows * side + (rows + 1) * gap;
    let mut data = vec![128u8; w * h * 3];
    for (k, s) in samples.iter().enumerate() {
        let (x0, y0) = (gap + (k % cols) * (side + gap), gap + (k / cols) * (side + gap));
        blit(&mut data, w, &s.image, x0, y0);
    }
    Ok((data, w, h, picks.into_iter().map(|r| r.id).collect()))
}

fn blit(dst: &mut [u8], width: usize, img: &CompositeImage, x0: usize, y0: usize) {
    let side = img.height();
    for row in 0..side {
        // Highest frequency on top.
        let src = side - 1 - row;
        for col in 0..img.width() {
            for ch in 0..3 {
                dst[((y0 + row) * width + x0 + col) * 3 + ch] = 255 * img.get(ch, src, col);
            }
        }
    }
}

fn report(cfg: &RunConfig, a: &ReportArgs) -> Result<()> {
    let out = cfg.out_dir.join("report");
    let mut wrote = 0;
    let loss_path = cfg.out_dir.join("loss.csv");
    if loss_path.exists() {
        let pts = read_loss_csv(&loss_path)?;
        let (px, w, h) = plot::line_plot(&pts, 320, 160);
        io::atomic_write(&out.join("loss_curve.pgm"), &io::Pnm { channels: 1, width: w, height: h, data: px }.encode())?;
        wrote += 1;
    }
    let eval_path = cfg.out_dir.join("eval.json");
    if eval_path.exists() {
        let e: EvalOutput = io::read_json(&eval_path)?;
        let pts: Vec<(f64, f64)> = e.report.per_jsr.iter().map(|j| (j.jsr_db, 100.0 * j.accuracy)).collect();
        let (px, w, h) = plot::line_plot(&pts, 320, 160);
        io::atomic_write(&out.join("accuracy_vs_jsr.pgm"), &io::Pnm { channels: 1, width: w, height: h, data: px }.encode())?;
        let mut csv = String::from("jsr_db,accuracy_percent\n");
        for (j, acc) in &pts {
            writeln!(csv, "{j},{acc}").unwrap();
        }
        io::atomic_write(&out.join("accuracy_vs_jsr.csv"), csv.as_bytes())?;
        wrote += 2;
    }
    let dir = corpus_dir(cfg, &a.corpus);
    if dir.join(hopjam::dataset::MANIFEST_FILE).exists() {
        let (data, w, h, ids) = class_montage(&dir)?;
        io::atomic_write(&out.join("class_montage.ppm"), &io::Pnm { channels: 3, width: w, height: h, data }.encode())?;
        let mut csv = String::from("class_id,sample_id\n");
        for (c, id) in ids.iter().enumerate() {
            writeln!(csv, "{c},{id}").unwrap();
        }
        io::atomic_write(&out.join("class_montage.csv"), csv.as_bytes())?;
        wrote += 2;
    }
    if wrote == 0 {
        return Err(Error::Missing(format!("nothing to report in {}", cfg.out_dir.display())).into());
    }
    println!("wrote {wrote} files to {}", out.display());
    Ok(())
}
