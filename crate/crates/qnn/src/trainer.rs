//! Mini-batch gradient descent with per-epoch learning-rate decay.

use std::time::Instant;

use qnn_core::encoder::argmax;
use qnn_core::loss::{loss_and_gradient, GradEngine, LossKind};
use qnn_core::optim::{sgd_step, LearningRateSchedule};
use qnn_core::{forward, readout_distribution, CircuitSpec, Gradient, Objective, Weights, NUM_CLASSES};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::EncodedSample;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub lr_decay: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub loss: LossKind,
    pub grad_engine: GradEngine,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.03,
            lr_decay: 0.99,
            batch_size: 10,
            epochs: 120,
            seed: 0,
            loss: LossKind::ProbMse,
            grad_engine: default_engine(LossKind::ProbMse),
        }
    }
}

/// Parameter shift for the readout loss, the adjoint sweep for fidelity.
pub fn default_engine(loss: LossKind) -> GradEngine {
    match loss {
        LossKind::ProbMse => GradEngine::ParamShift,
        LossKind::Fidelity => GradEngine::Analytic,
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        LearningRateSchedule::new(self.learning_rate, self.lr_decay)?;
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochMetrics {
    /// 1-based.
    pub epoch: usize,
    pub mean_loss: f64,
    pub train_accuracy: f64,
    pub test_accuracy: Option<f64>,
    /// Learning rate used during this epoch.
    pub learning_rate: f64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    /// Weights after the epoch with the best test accuracy (train accuracy
    /// when no test set is given); earliest epoch wins ties.
    pub best_weights: Weights,
    pub best_epoch: usize,
    pub final_weights: Weights,
    pub metrics: Vec<EpochMetrics>,
}

impl TrainOutcome {
    /// First epoch whose test accuracy is within half a percentage point of
    /// the best one.
    pub fn convergence_epoch(&self) -> Option<usize> {
        let score = |m: &EpochMetrics| m.test_accuracy.unwrap_or(m.train_accuracy);
        let best = self.metrics.iter().map(score).fold(f64::NEG_INFINITY, f64::max);
        self.metrics.iter().find(|m| score(m) >= best - 0.005).map(|m| m.epoch)
    }
}

fn objective(sample: &EncodedSample, loss: LossKind) -> Objective<'_> {
    match loss {
        LossKind::Fidelity => Objective::Fidelity { target: &sample.label.target },
        LossKind::ProbMse => Objective::ProbMse { class_index: sample.label.class_index },
    }
}

/// Loss and gradient averaged over `batch`, per-sample work in parallel.
pub fn batch_gradient(
    spec: &CircuitSpec,
    w: &Weights,
    batch: &[&EncodedSample],
    loss: LossKind,
    engine: GradEngine,
) -> qnn_core::Result<(Vec<f64>, Gradient)> {
    let per_sample: Vec<(f64, Gradient)> = batch
        .par_iter()
        .map(|s| loss_and_gradient(engine, spec, w, &s.state, &objective(s, loss)))
        .collect::<qnn_core::Result<_>>()?;
    let (losses, grads): (Vec<f64>, Vec<Gradient>) = per_sample.into_iter().unzip();
    Ok((losses, Gradient::mean(&grads)?))
}

/// Predicted class: argmax of the 10-way readout, lowest index on ties.
pub fn predict(spec: &CircuitSpec, w: &Weights, sample: &EncodedSample) -> Result<(usize, Vec<f64>)> {
    let dist = readout_distribution(&forward(spec, w, &sample.state)?, NUM_CLASSES)?;
    Ok((argmax(&dist), dist))
}

/// Fraction of samples whose predicted class matches the label.
pub fn evaluate(spec: &CircuitSpec, w: &Weights, samples: &[EncodedSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let correct = samples
        .par_iter()
        .map(|s| predict(spec, w, s).map(|(class, _)| usize::from(class == s.label.class_index)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(correct as f64 / samples.len() as f64)
}

/// Trains from weights drawn uniformly in `[-0.1, 0.1]` with `config.seed`.
pub fn train(
    spec: &CircuitSpec,
    train_set: &[EncodedSample],
    test_set: &[EncodedSample],
    config: &TrainConfig,
    on_epoch: impl FnMut(&EpochMetrics, &Weights, bool) -> Result<()>,
) -> Result<TrainOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let init = Weights::random(spec.num_params(), &mut rng);
    train_from(spec, init, &mut rng, train_set, test_set, config, on_epoch)
}

/// The training loop proper. `on_epoch` sees each epoch's metrics, the
/// current weights, and whether they are the new best.
pub fn train_from(
    spec: &CircuitSpec,
    init: Weights,
    rng: &mut ChaCha8Rng,
    train_set: &[EncodedSample],
    test_set: &[EncodedSample],
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochMetrics, &Weights, bool) -> Result<()>,
) -> Result<TrainOutcome> {
    config.validate()?;
    if train_set.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(s) = train_set.iter().chain(test_set).find(|s| s.state.num_qubits() != spec.num_qubits()) {
        return Err(Error::Config(format!(
            "samples are encoded on {} qubits but the circuit has {}",
            s.state.num_qubits(),
            spec.num_qubits()
        )));
    }
    let schedule = LearningRateSchedule::new(config.learning_rate, config.lr_decay)?;
    let mut w = init;
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut metrics = Vec::with_capacity(config.epochs);
    let mut best: Option<(f64, usize, Weights)> = None;

    for epoch in 0..config.epochs {
        let started = Instant::now();
        let lr = schedule.rate(epoch);
        order.shuffle(rng);
        let mut loss_sum = 0.0;
        for (b, chunk) in order.chunks(config.batch_size).enumerate() {
            let abort = |detail: String| Error::NonFinite { epoch: epoch + 1, batch: b, detail };
            let batch: Vec<&EncodedSample> = chunk.iter().map(|&i| &train_set[i]).collect();
            let (losses, grad) =
                batch_gradient(spec, &w, &batch, config.loss, config.grad_engine).map_err(|e| abort(e.to_string()))?;
            if let Some(pos) = losses.iter().position(|l| !l.is_finite()) {
                return Err(abort(format!("loss of sample {} is {}", chunk[pos], losses[pos])));
            }
            loss_sum += losses.iter().sum::<f64>();
            w = sgd_step(&w, &grad, lr).map_err(|e| abort(e.to_string()))?;
        }
        let train_accuracy = evaluate(spec, &w, train_set)?;
        let test_accuracy = if test_set.is_empty() { None } else { Some(evaluate(spec, &w, test_set)?) };
        let m = EpochMetrics {
            epoch: epoch + 1,
            mean_loss: loss_sum / train_set.len() as f64,
            train_accuracy,
            test_accuracy,
            learning_rate: lr,
            wall_time_s: started.elapsed().as_secs_f64(),
        };
        let score = test_accuracy.unwrap_or(train_accuracy);
        let improved = best.as_ref().is_none_or(|(s, _, _)| score > *s);
        if improved {
            best = Some((score, epoch + 1, w.clone()));
        }
        on_epoch(&m, &w, improved)?;
        metrics.push(m);
    }

    let (best_epoch, best_weights) = match best {
        Some((_, e, bw)) => (e, bw),
        None => (0, w.clone()),
    };
    Ok(TrainOutcome { best_weights, best_epoch, final_weights: w, metrics })
}
