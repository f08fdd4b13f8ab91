use hopjam::siamese::{
    evaluate, load_checkpoint, save_checkpoint, train, Architecture, EvalConfig, LrSchedule, Model, TrainConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Toy images: each of the ten classes lights its own (channel, row band).
fn toy_set(per_class: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<u8>) {
    let arch = Architecture::toy();
    let side = arch.input_side;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = Vec::new();
    let mut labels = Vec::new();
    for c in 0..10u8 {
        for _ in 0..per_class {
            let mut x = vec![0.0; arch.input_len()];
            for ch in 0..3 {
                for r in 0..side {
                    for col in 0..side {
                        let on = ch == c as usize % 3 && r / 4 == c as usize / 3;
                        let flip = rng.random_bool(0.05);
                        x[(ch * side + r) * side + col] = f64::from(u8::from(on != flip));
                    }
                }
            }
            images.push(x);
            labels.push(c);
        }
    }
    (images, labels)
}

fn toy_config(seed: u64) -> TrainConfig {
    TrainConfig {
        arch: Architecture::toy(),
        iterations: 200,
        pairs_per_iteration: 16,
        lr: LrSchedule { lr0: 3e-3, decay: 1.0, every: 100 },
        seed,
        ..TrainConfig::default()
    }
}

#[test]
fn toy_training_learns_and_is_reproducible() {
    let (images, labels) = toy_set(4, 1);
    let a = train(&toy_config(5), &images, &labels).unwrap();
    let b = train(&toy_config(5), &images, &labels).unwrap();
    assert_eq!(a.model.values, b.model.values);
    assert_eq!(a.pairs_consumed, 200 * 16);
    let head: f64 = a.loss_trace[..10].iter().sum::<f64>() / 10.0;
    let tail: f64 = a.loss_trace[190..].iter().sum::<f64>() / 10.0;
    assert!(tail < 0.6 * head, "{head} -> {tail}");

    let (queries, q_labels) = toy_set(3, 2);
    let jsr = vec![0.0; queries.len()];
    let report = evaluate(&a.model, &images, &labels, &queries, &q_labels, &jsr, &EvalConfig { support_k: 3, draws: 2, seed: 0 }).unwrap();
    assert!(report.accuracy > 0.9, "{}", report.accuracy);
}

#[test]
fn checkpoint_file_round_trip() {
    let model = Model::init(Architecture::toy(), &Default::default(), 8).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("m.ckpt");
    save_checkpoint(&path, &model, 17, serde_json::json!({ "note": "toy" })).unwrap();
    let (back, header) = load_checkpoint(&path).unwrap();
    assert_eq!(back, model);
    assert_eq!(header.iterations, 17);
    assert_eq!(header.meta["note"], "toy");
}
