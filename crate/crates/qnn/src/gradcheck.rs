//! Cross-checks the three gradient engines on random instances.

use qnn_core::loss::{adjoint_grad, fidelity_grad, finite_difference_grad, loss, parameter_shift_grad, LossKind};
use qnn_core::{build_ansatz, Complex64, Objective, StateVector, Weights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GradcheckOptions {
    pub num_qubits: usize,
    pub num_layers: usize,
    pub dt: f64,
    pub instances: usize,
    pub seed: u64,
    pub loss: LossKind,
    pub fd_step: f64,
    pub threshold: f64,
    /// Flips the sign of the analytic gradient; only for exercising the
    /// failure path.
    pub corrupt_analytic_sign: bool,
}

impl Default for GradcheckOptions {
    fn default() -> Self {
        Self {
            num_qubits: 3,
            num_layers: 2,
            dt: 1.0,
            instances: 50,
            seed: 0,
            loss: LossKind::Fidelity,
            fd_step: 1e-5,
            threshold: 1e-5,
            corrupt_analytic_sign: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Worst {
    pub instance: usize,
    pub param: usize,
    pub pair: &'static str,
    pub error: f64,
}

#[derive(Clone, Debug)]
pub struct GradcheckReport {
    pub max_analytic_vs_shift: f64,
    pub max_analytic_vs_fd: f64,
    pub max_shift_vs_fd: f64,
    pub worst: Worst,
    pub passed: bool,
}

/// `|a − b| / max(|a|, |b|, 1e-3)`: relative, with an absolute floor for
/// components near zero.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-3)
}

fn random_state(num_qubits: usize, rng: &mut ChaCha8Rng) -> Result<StateVector> {
    let raw: Vec<Complex64> =
        (0..1usize << num_qubits).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Ok(StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect())?)
}

pub fn run(opts: &GradcheckOptions) -> Result<GradcheckReport> {
    if opts.instances == 0 {
        return Err(Error::Config("gradcheck needs at least one instance".into()));
    }
    if opts.loss == LossKind::ProbMse && opts.num_qubits < 4 {
        return Err(Error::Config("the readout loss needs at least 4 qubits".into()));
    }
    let spec = build_ansatz(opts.num_qubits, opts.num_layers, opts.dt)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = GradcheckReport {
        max_analytic_vs_shift: 0.0,
        max_analytic_vs_fd: 0.0,
        max_shift_vs_fd: 0.0,
        worst: Worst { instance: 0, param: 0, pair: "analytic/shift", error: 0.0 },
        passed: true,
    };
    for instance in 0..opts.instances {
        let w = Weights::new(
            (0..spec.num_params()).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect(),
        )?;
        let psi = random_state(opts.num_qubits, &mut rng)?;
        let y = random_state(opts.num_qubits, &mut rng)?;
        let class_index = rng.gen_range(0..qnn_core::NUM_CLASSES);
        let objective = match opts.loss {
            LossKind::Fidelity => Objective::Fidelity { target: &y },
            LossKind::ProbMse => Objective::ProbMse { class_index },
        };
        let mut analytic = match opts.loss {
            LossKind::Fidelity => fidelity_grad(&spec, &w, &psi, &y)?,
            LossKind::ProbMse => adjoint_grad(&spec, &w, &psi, &objective)?.1,
        }
        .into_vec();
        if opts.corrupt_analytic_sign {
            analytic.iter_mut().for_each(|g| *g = -*g);
        }
        let shift = parameter_shift_grad(&spec, &w, &psi, &objective)?;
        let fd = finite_difference_grad(|w| loss(&spec, w, &psi, &objective), &w, opts.fd_step)?;
        for (k, ((&a, &s), &f)) in analytic.iter().zip(shift.as_slice()).zip(fd.as_slice()).enumerate() {
            for (pair, err, slot) in [
                ("analytic/shift", relative_error(a, s), &mut report.max_analytic_vs_shift),
                ("analytic/fd", relative_error(a, f), &mut report.max_analytic_vs_fd),
                ("shift/fd", relative_error(s, f), &mut report.max_shift_vs_fd),
            ] {
                *slot = slot.max(err);
                if err > report.worst.error {
                    report.worst = Worst { instance, param: k, pair, error: err };
                }
            }
        }
    }
    report.passed = report.worst.error < opts.threshold;
    Ok(report)
}
