//! Per-epoch CSV stream and the JSON run summary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trainer::EpochMetrics;

pub const CSV_HEADER: &str = "epoch,mean_loss,train_acc,test_acc,lr,wall_time_s";

pub fn csv_row(m: &EpochMetrics) -> String {
    let test = m.test_accuracy.map(|a| a.to_string()).unwrap_or_default();
    format!("{},{},{},{},{},{:.6}", m.epoch, m.mean_loss, m.train_accuracy, test, m.learning_rate, m.wall_time_s)
}

/// Appends one flushed row per epoch so partial runs stay readable.
pub struct MetricsWriter {
    out: BufWriter<File>,
    path: std::path::PathBuf,
}

impl MetricsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = Self { out: BufWriter::new(file), path: path.to_path_buf() };
        w.line(CSV_HEADER)?;
        Ok(w)
    }

    pub fn write(&mut self, m: &EpochMetrics) -> Result<()> {
        self.line(&csv_row(m))
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").and_then(|_| self.out.flush()).map_err(|e| Error::io(&self.path, e))
    }
}

#[derive(Debug, Serialize)]
pub struct RunSummary<'a, M: Serialize> {
    pub command: &'a str,
    pub argv: Vec<String>,
    pub manifest: &'a M,
    pub seed: u64,
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub convergence_epoch: Option<usize>,
    /// Both accuracies are for the best checkpoint.
    pub train_accuracy: f64,
    pub test_accuracy: Option<f64>,
    pub final_mean_loss: Option<f64>,
    pub num_params: usize,
    pub wall_time_s: f64,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}
