//! `qnn` command line: train, eval, predict, gradcheck, bench.
//!
//! Settings resolve as command-line flag, then `--config` TOML file, then
//! built-in default. `train` always writes the resolved settings to
//! `<out-dir>/config.toml`, which is itself a valid `--config` file.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qnn_core::loss::{GradEngine, LossKind};
use qnn_core::{build_ansatz, CircuitSpec, Weights, NUM_CLASSES};
use serde::{Deserialize, Serialize};

use crate::bench;
use crate::checkpoint::Checkpoint;
use crate::data::{encode_dataset, qubits_for, EncodedSample};
use crate::error::{Error, Result};
use crate::gradcheck::{self, GradcheckOptions};
use crate::metrics::{write_json, MetricsWriter, RunSummary};
use crate::mnist::{filter_classes, load_split, split_paths, Split};
use crate::trainer::{self, evaluate, predict, TrainConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NON_FINITE: i32 = 3;
pub const EXIT_GRADCHECK_FAILED: i32 = 4;

const MNIST_SIDE: usize = 28;

#[derive(Debug, Parser)]
#[command(name = "qnn", version, about = "Time-evolution quantum neural network on a statevector simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train on an MNIST split and write metrics, checkpoints and a summary.
    Train(RunArgs),
    /// Accuracy of a checkpoint on a split.
    Eval(RunArgs),
    /// Per-image class and 10-way readout distribution.
    Predict(RunArgs),
    /// Cross-check analytic, parameter-shift and finite-difference gradients.
    Gradcheck(GradcheckArgs),
    /// Gate throughput and seconds per training epoch.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossArg {
    Fidelity,
    Probmse,
}

impl From<LossArg> for LossKind {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::Fidelity => LossKind::Fidelity,
            LossArg::Probmse => LossKind::ProbMse,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradArg {
    Analytic,
    Shift,
    Fd,
}

impl From<GradArg> for GradEngine {
    fn from(g: GradArg) -> Self {
        match g {
            GradArg::Analytic => GradEngine::Analytic,
            GradArg::Shift => GradEngine::ParamShift,
            GradArg::Fd => GradEngine::FiniteDiff,
        }
    }
}

fn grad_arg(engine: GradEngine) -> GradArg {
    match engine {
        GradEngine::Analytic => GradArg::Analytic,
        GradEngine::ParamShift => GradArg::Shift,
        GradEngine::FiniteDiff => GradArg::Fd,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitArg {
    Train,
    Test,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Train => Split::Train,
            SplitArg::Test => Split::Test,
        }
    }
}

/// Comma-separated digit list, or `all`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClassList(pub BTreeSet<u8>);

impl FromStr for ClassList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim() == "all" {
            return Ok(Self((0..NUM_CLASSES as u8).collect()));
        }
        let set = s
            .split(',')
            .map(|t| match t.trim().parse::<u8>() {
                Ok(d) if (d as usize) < NUM_CLASSES => Ok(d),
                _ => Err(format!("{t:?} is not a digit class")),
            })
            .collect::<std::result::Result<BTreeSet<_>, _>>()?;
        if set.is_empty() {
            return Err("class list is empty".into());
        }
        Ok(Self(set))
    }
}

impl TryFrom<String> for ClassList {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<ClassList> for String {
    fn from(c: ClassList) -> String {
        c.to_string()
    }
}

impl fmt::Display for ClassList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Settings shared by train/eval/predict. Every field is optional so that
/// flags and config-file values can be layered.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunArgs {
    /// Register size; must match the image size after padding and pooling.
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
    /// Global time step δt of every rotation.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long = "lr-decay")]
    pub lr_decay: Option<f64>,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub loss: Option<LossArg>,
    #[arg(long, value_enum)]
    pub grad: Option<GradArg>,
    /// Digits to keep, e.g. `0,1`, or `all`.
    #[arg(long)]
    pub classes: Option<ClassList>,
    /// Training samples kept per class.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Test samples kept per class (defaults to no limit).
    #[arg(long = "test-limit")]
    pub test_limit: Option<usize>,
    /// Block-mean pooling factor applied after padding to 32×32.
    #[arg(long)]
    pub downscale: Option<usize>,
    #[arg(long = "data-dir")]
    pub data_dir: Option<PathBuf>,
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Split read by eval and predict.
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
    /// Images printed by predict.
    #[arg(long)]
    pub count: Option<usize>,
    /// TOML file with any of the settings above (kebab-case keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(skip)]
    #[serde(default)]
    pub command: Option<String>,
}

/// Fully resolved settings; written verbatim to `config.toml` and the run summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    pub dt: f64,
    pub lr: f64,
    pub lr_decay: f64,
    pub batch: usize,
    pub epochs: usize,
    pub seed: u64,
    pub loss: LossArg,
    pub grad: GradArg,
    pub classes: ClassList,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub downscale: Option<usize>,
    pub data_dir: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<PathBuf>,
    pub split: SplitArg,
    pub count: usize,
}

pub const DEFAULT_LAYERS: usize = 10;
pub const DEFAULT_OUT_DIR: &str = "qnn-out";
pub const DEFAULT_DATA_DIR: &str = "data/mnist";

impl RunArgs {
    /// Layers flag values over those read from `--config`.
    pub fn layered(self) -> Result<RunArgs> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let file: RunArgs = toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        macro_rules! pick {
            ($($f:ident),*) => { RunArgs { $($f: self.$f.or(file.$f),)* config: self.config, command: None } };
        }
        Ok(pick!(
            qubits, layers, dt, lr, lr_decay, batch, epochs, seed, loss, grad, classes, limit, test_limit, downscale,
            data_dir, out_dir, threads, checkpoint, split, count
        ))
    }

    pub fn resolve(self, command: &str) -> Result<RunManifest> {
        let a = self.layered()?;
        let defaults = TrainConfig::default();
        let loss = a.loss.unwrap_or(LossArg::Probmse);
        let m = RunManifest {
            command: command.to_string(),
            qubits: a.qubits,
            layers: if command == "train" { Some(a.layers.unwrap_or(DEFAULT_LAYERS)) } else { a.layers },
            dt: a.dt.unwrap_or(1.0),
            lr: a.lr.unwrap_or(defaults.learning_rate),
            lr_decay: a.lr_decay.unwrap_or(defaults.lr_decay),
            batch: a.batch.unwrap_or(defaults.batch_size),
            epochs: a.epochs.unwrap_or(defaults.epochs),
            seed: a.seed.unwrap_or(defaults.seed),
            loss,
            grad: a.grad.unwrap_or_else(|| grad_arg(trainer::default_engine(loss.into()))),
            classes: a.classes.unwrap_or_else(|| "all".parse().unwrap()),
            limit: a.limit,
            test_limit: a.test_limit,
            downscale: if command == "train" { Some(a.downscale.unwrap_or(1)) } else { a.downscale },
            data_dir: a.data_dir.unwrap_or_else(|| DEFAULT_DATA_DIR.into()),
            out_dir: if command == "train" {
                Some(a.out_dir.unwrap_or_else(|| DEFAULT_OUT_DIR.into()))
            } else {
                a.out_dir
            },
            threads: a.threads,
            checkpoint: a.checkpoint,
            split: a.split.unwrap_or(SplitArg::Test),
            count: a.count.unwrap_or(10),
        };
        if m.threads == Some(0) {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        Ok(m)
    }
}

impl RunManifest {
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.lr,
            lr_decay: self.lr_decay,
            batch_size: self.batch,
            epochs: self.epochs,
            seed: self.seed,
            loss: self.loss.into(),
            grad_engine: self.grad.into(),
        }
    }

    fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest always serializes")
    }
}

#[derive(Clone, Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = 3)]
    pub qubits: usize,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
    /// Number of random (weights, input, target) instances.
    #[arg(long, default_value_t = 50)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "fidelity")]
    pub loss: LossArg,
    #[arg(long, default_value_t = 1e-5)]
    pub threshold: f64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, hide = true)]
    pub corrupt_analytic_sign: bool,
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    /// Register size for the gate-throughput measurement.
    #[arg(long, default_value_t = 16)]
    pub qubits: usize,
    #[arg(long = "epoch-qubits", default_value_t = 6)]
    pub epoch_qubits: usize,
    #[arg(long, default_value_t = 6)]
    pub layers: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "probmse")]
    pub loss: LossArg,
    #[arg(long, value_enum, default_value = "shift")]
    pub grad: GradArg,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Also write `bench.json` here.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(e.to_string()))?;
    pool.install(f)
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run_from<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let argv: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(cli.command, argv) {
        Ok(code) => code,
        Err(e @ Error::NonFinite { .. }) => {
            eprintln!("error: training aborted: {e}");
            EXIT_NON_FINITE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, argv: Vec<String>) -> Result<i32> {
    match command {
        Command::Train(args) => cmd_train(args.resolve("train")?, argv),
        Command::Eval(args) => cmd_eval(args.resolve("eval")?, argv),
        Command::Predict(args) => cmd_predict(args.resolve("predict")?),
        Command::Gradcheck(args) => cmd_gradcheck(&args),
        Command::Bench(args) => cmd_bench(&args),
    }
}

/// Loads, filters and encodes one split.
fn load_encoded(m: &RunManifest, split: Split, limit: Option<usize>, factor: usize) -> Result<Vec<EncodedSample>> {
    let raw = load_split(&m.data_dir, split)?;
    let raw = filter_classes(&raw, &m.classes.0, limit);
    encode_dataset(&raw, factor)
}

fn check_qubits(m: &RunManifest, factor: usize) -> Result<usize> {
    if factor == 0 || 32 % factor != 0 {
        return Err(Error::Config(format!("--downscale {factor} does not divide the 32×32 padded image")));
    }
    let derived = qubits_for(MNIST_SIDE, MNIST_SIDE, factor);
    if derived < 4 {
        return Err(Error::Config(format!("--downscale {factor} leaves {derived} qubits; 10 classes need 4")));
    }
    match m.qubits {
        Some(q) if q != derived => Err(Error::Config(format!(
            "--qubits {q} does not match --downscale {factor}, which encodes images on {derived} qubits"
        ))),
        _ => Ok(derived),
    }
}

pub fn cmd_train(m: RunManifest, argv: Vec<String>) -> Result<i32> {
    let factor = m.downscale.unwrap_or(1);
    let qubits = check_qubits(&m, factor)?;
    let spec = build_ansatz(qubits, m.layers.unwrap_or(DEFAULT_LAYERS), m.dt)?;
    let config = m.train_config();
    // Everything that can fail on input is checked before the first write.
    split_paths(&m.data_dir, Split::Train)?;
    split_paths(&m.data_dir, Split::Test)?;
    let out_dir = m.out_dir.clone().expect("train always has an output directory");

    let started = Instant::now();
    let outcome = with_threads(m.threads, || {
        let train_set = load_encoded(&m, Split::Train, m.limit, factor)?;
        let test_set = load_encoded(&m, Split::Test, m.test_limit, factor)?;
        if train_set.is_empty() {
            return Err(Error::EmptyDataset);
        }
        fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
        write_file(&out_dir.join("config.toml"), &m.to_toml())?;
        eprintln!(
            "training {} qubits × {} layers ({} weights) on {} samples, testing on {}",
            spec.num_qubits(),
            spec.num_layers(),
            spec.num_params(),
            train_set.len(),
            test_set.len()
        );
        let mut csv = MetricsWriter::create(&out_dir.join("metrics.csv"))?;
        let best_path = out_dir.join("checkpoint-best.toml");
        let outcome = trainer::train(&spec, &train_set, &test_set, &config, |metrics, w, improved| {
            csv.write(metrics)?;
            if improved {
                Checkpoint::new(&spec, w, m.seed, metrics.epoch).save(&best_path)?;
            }
            eprintln!(
                "epoch {:>4}  loss {:.6}  train {:.4}  test {}  lr {:.6}  {:.2}s",
                metrics.epoch,
                metrics.mean_loss,
                metrics.train_accuracy,
                metrics.test_accuracy.map_or("-".into(), |a| format!("{a:.4}")),
                metrics.learning_rate,
                metrics.wall_time_s
            );
            Ok(())
        })?;
        let final_path = out_dir.join("checkpoint-final.toml");
        Checkpoint::new(&spec, &outcome.final_weights, m.seed, outcome.metrics.len()).save(&final_path)?;
        if outcome.metrics.is_empty() {
            Checkpoint::new(&spec, &outcome.best_weights, m.seed, 0).save(&best_path)?;
        }
        let train_accuracy = evaluate(&spec, &outcome.best_weights, &train_set)?;
        let test_accuracy =
            if test_set.is_empty() { None } else { Some(evaluate(&spec, &outcome.best_weights, &test_set)?) };
        Ok((outcome, train_accuracy, test_accuracy))
    })?;
    let (outcome, train_accuracy, test_accuracy) = outcome;

    let summary = RunSummary {
        command: "train",
        argv,
        manifest: &m,
        seed: m.seed,
        epochs_run: outcome.metrics.len(),
        best_epoch: outcome.best_epoch,
        convergence_epoch: outcome.convergence_epoch(),
        train_accuracy,
        test_accuracy,
        final_mean_loss: outcome.metrics.last().map(|x| x.mean_loss),
        num_params: spec.num_params(),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    write_json(&out_dir.join("summary.json"), &summary)?;
    println!(
        "best epoch {}: train accuracy {:.4}, test accuracy {}",
        outcome.best_epoch,
        train_accuracy,
        test_accuracy.map_or("-".into(), |a| format!("{a:.4}"))
    );
    Ok(EXIT_OK)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Checkpoint, circuit and pooling factor for eval/predict.
fn load_model(m: &RunManifest) -> Result<(CircuitSpec, Weights, usize)> {
    let path = m.checkpoint.as_ref().ok_or_else(|| Error::Config("--checkpoint is required".into()))?;
    let ck = Checkpoint::load(path)?;
    ck.check_dimensions(m.qubits, m.layers)?;
    let factor = match m.downscale {
        Some(f) => f,
        // 32×32 = 2^10 pixels; each halving of the side removes two qubits.
        None if ck.num_qubits % 2 == 0 && ck.num_qubits <= 10 => 1 << ((10 - ck.num_qubits) / 2),
        None => return Err(Error::Config(format!("cannot infer --downscale for {} qubits", ck.num_qubits))),
    };
    let derived = qubits_for(MNIST_SIDE, MNIST_SIDE, factor);
    if derived != ck.num_qubits {
        return Err(Error::Checkpoint(format!(
            "checkpoint has {} qubits but --downscale {factor} encodes images on {derived}",
            ck.num_qubits
        )));
    }
    Ok((ck.spec()?, ck.weights()?, factor))
}

pub fn cmd_eval(m: RunManifest, argv: Vec<String>) -> Result<i32> {
    let (spec, w, factor) = load_model(&m)?;
    let split: Split = m.split.into();
    let limit = if split == Split::Train { m.limit } else { m.test_limit };
    let accuracy = with_threads(m.threads, || {
        let samples = load_encoded(&m, split, limit, factor)?;
        evaluate(&spec, &w, &samples).map(|a| (a, samples.len()))
    })?;
    println!("accuracy {} ({} samples, {} split)", accuracy.0, accuracy.1, format!("{:?}", m.split).to_lowercase());
    if let Some(dir) = &m.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let report = serde_json::json!({
            "command": "eval",
            "argv": argv,
            "manifest": &m,
            "accuracy": accuracy.0,
            "samples": accuracy.1,
        });
        write_json(&dir.join("eval.json"), &report)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_predict(m: RunManifest) -> Result<i32> {
    let (spec, w, factor) = load_model(&m)?;
    let split: Split = m.split.into();
    let raw = filter_classes(&load_split(&m.data_dir, split)?, &m.classes.0, None);
    println!("index,label,predicted,{}", (0..NUM_CLASSES).map(|c| format!("p{c}")).collect::<Vec<_>>().join(","));
    for (i, (img, label)) in raw.iter().take(m.count).enumerate() {
        let sample = crate::data::encode_sample(img, label, factor)?;
        let (class, dist) = predict(&spec, &w, &sample)?;
        let probs: Vec<String> = dist.iter().map(|p| format!("{p:.6}")).collect();
        println!("{i},{label},{class},{}", probs.join(","));
    }
    Ok(EXIT_OK)
}

pub fn cmd_gradcheck(a: &GradcheckArgs) -> Result<i32> {
    let opts = GradcheckOptions {
        num_qubits: a.qubits,
        num_layers: a.layers,
        dt: a.dt,
        instances: a.instances,
        seed: a.seed,
        loss: a.loss.into(),
        fd_step: 1e-5,
        threshold: a.threshold,
        corrupt_analytic_sign: a.corrupt_analytic_sign,
    };
    let report = with_threads(a.threads, || gradcheck::run(&opts))?;
    println!("max relative error analytic vs shift: {:.3e}", report.max_analytic_vs_shift);
    println!("max relative error analytic vs fd:    {:.3e}", report.max_analytic_vs_fd);
    println!("max relative error shift vs fd:       {:.3e}", report.max_shift_vs_fd);
    if report.passed {
        println!("gradcheck passed ({} instances, threshold {:e})", a.instances, a.threshold);
        Ok(EXIT_OK)
    } else {
        let w = &report.worst;
        println!(
            "gradcheck FAILED: worst {} error {:.3e} at instance {}, parameter {}",
            w.pair, w.error, w.instance, w.param
        );
        Ok(EXIT_GRADCHECK_FAILED)
    }
}

pub fn cmd_bench(a: &BenchArgs) -> Result<i32> {
    let report = with_threads(a.threads, || {
        let amplitudes_per_second = bench::gate_throughput(a.qubits, 1.0)?;
        let seconds_per_epoch =
            bench::epoch_seconds(a.epoch_qubits, a.layers, a.samples, a.grad.into(), a.loss.into())?;
        Ok(bench::BenchReport {
            gate_qubits: a.qubits,
            amplitudes_per_second,
            epoch_qubits: a.epoch_qubits,
            epoch_layers: a.layers,
            epoch_samples: a.samples,
            grad_engine: format!("{:?}", a.grad).to_lowercase(),
            seconds_per_epoch,
        })
    })?;
    println!("gate application: {:.3e} amplitudes/s on {} qubits", report.amplitudes_per_second, report.gate_qubits);
    println!(
        "training: {:.3} s/epoch ({} samples, {} qubits, {} layers, {} gradients)",
        report.seconds_per_epoch, report.epoch_samples, report.epoch_qubits, report.epoch_layers, report.grad_engine
    );
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_json(&dir.join("bench.json"), &report)?;
    }
    Ok(EXIT_OK)
}
