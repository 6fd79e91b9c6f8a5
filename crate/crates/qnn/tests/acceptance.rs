//! End-to-end acceptance checks. Runs without the libtest harness so that
//! each criterion prints exactly one PASS/FAIL line.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use qnn::data::{encode_dataset, EncodedSample};
use qnn::gradcheck::relative_error;
use qnn::mnist::{
    encode_idx_images, encode_idx_labels, filter_classes, load_split, parse_idx_images, parse_idx_labels, Split,
};
use qnn::trainer::{evaluate, train, TrainConfig};
use qnn_core::dense::DenseMatrix;
use qnn_core::gates::mat2_mul;
use qnn_core::loss::{adjoint_grad, fidelity_grad, fidelity_loss, parameter_shift_grad, GradEngine, LossKind};
use qnn_core::{
    build_ansatz, dense_expm, forward, pauli_matrix, rotation_matrix, Axis, CircuitSpec, Complex64, GateOp, Mat2,
    Objective, PauliGenerator, StateVector, Weights,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Cmat = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Independent dense algebra: plain nested vectors, gates placed by bit tests.
mod oracle {
    use super::*;

    pub fn identity(dim: usize) -> Cmat {
        (0..dim).map(|r| (0..dim).map(|c| if r == c { ONE } else { ZERO }).collect()).collect()
    }

    pub fn matmul(a: &Cmat, b: &Cmat) -> Cmat {
        let n = a.len();
        (0..n).map(|r| (0..n).map(|c| (0..n).map(|k| a[r][k] * b[k][c]).sum()).collect()).collect()
    }

    /// `u` on `target`, identity elsewhere; qubit 0 is the low bit.
    pub fn single(n: usize, target: usize, u: &Mat2) -> Cmat {
        let dim = 1 << n;
        let bit = 1 << target;
        (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| if r & !bit == c & !bit { u[(r & bit) >> target][(c & bit) >> target] } else { ZERO })
                    .collect()
            })
            .collect()
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Cmat {
        let dim = 1 << n;
        (0..dim)
            .map(|r| {
                let image = if r >> control & 1 == 1 { r ^ (1 << target) } else { r };
                (0..dim).map(|c| if c == image { ONE } else { ZERO }).collect()
            })
            .collect()
    }

    /// `cos θ·I − i sin θ·σ` written out entry by entry.
    pub fn rotation(axis: Axis, theta: f64) -> Mat2 {
        let (c, s) = (theta.cos(), theta.sin());
        let ci = Complex64::new(c, 0.0);
        match axis {
            Axis::X => [[ci, Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), ci]],
            Axis::Y => [[ci, Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), ci]],
            Axis::Z => [[Complex64::new(c, -s), ZERO], [ZERO, Complex64::new(c, s)]],
            Axis::I => unreachable!(),
        }
    }

    pub fn circuit(spec: &CircuitSpec, w: &[f64]) -> Cmat {
        let n = spec.num_qubits();
        let mut total = identity(1 << n);
        for op in spec.ops() {
            let m = match *op {
                GateOp::Rotation { generator, weight_index } => {
                    single(n, generator.target, &rotation(generator.axis, w[weight_index] * spec.dt()))
                }
                GateOp::Fixed { gate, target } => single(n, target, &gate.matrix()),
                GateOp::CNot { control, target } => cnot(n, control, target),
            };
            total = matmul(&m, &total);
        }
        total
    }

    pub fn apply(m: &Cmat, v: &[Complex64]) -> Vec<Complex64> {
        m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn residual(m: &Cmat, psi: &[Complex64], y: &[Complex64]) -> f64 {
        apply(m, psi).iter().zip(y).map(|(a, b)| (a - b).norm_sqr()).sum()
    }
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let raw: Vec<Complex64> =
        (0..1 << n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn random_weights(len: usize, rng: &mut ChaCha8Rng) -> Weights {
    Weights::new((0..len).map(|_| rng.gen_range(-PI..PI)).collect()).unwrap()
}

fn mat2_dense(u: &Mat2) -> DenseMatrix {
    DenseMatrix::from_mat2(u)
}

fn mat2_dev(a: &Mat2, b: &Mat2) -> f64 {
    (0..4).map(|i| (a[i / 2][i % 2] - b[i / 2][i % 2]).norm()).fold(0.0, f64::max)
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn gate_algebra() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut unitary, mut inverse, mut expm) = (0.0f64, 0.0f64, 0.0f64);
    let identity: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
    for _ in 0..1000 {
        let axis = [Axis::X, Axis::Y, Axis::Z][rng.gen_range(0..3)];
        let w = rng.gen_range(-PI..PI);
        let dt = rng.gen_range(0.01..2.0);
        let u = rotation_matrix(axis, w, dt).unwrap();
        let u_dag = [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]];
        unitary = unitary.max(mat2_dev(&mat2_mul(&u_dag, &u), &identity));
        let rx = mat2_mul(&rotation_matrix(Axis::X, w, dt).unwrap(), &rotation_matrix(Axis::X, -w, dt).unwrap());
        inverse = inverse.max(mat2_dev(&rx, &identity));
        let generator = mat2_dense(&pauli_matrix(axis)).scaled(Complex64::new(w, 0.0));
        expm = expm.max(dense_expm(&generator, dt).unwrap().max_abs_diff(&mat2_dense(&u)));
    }
    let elapsed = started.elapsed();
    outcome(
        unitary <= 1e-12 && inverse <= 1e-12 && expm <= 1e-12 && within(elapsed, 1.0),
        format!(
            "1000 draws: max |U†U−I| {unitary:.1e}, max |Rx(w)Rx(−w)−I| {inverse:.1e}, max |closed form − expm| {expm:.1e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn fidelity_identity() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..500 {
        let spec = build_ansatz(4, 1 + i % 3, rng.gen_range(0.1..1.5)).unwrap();
        let w = random_weights(spec.num_params(), &mut rng);
        let psi = random_state(4, &mut rng);
        let y = random_state(4, &mut rng);
        let out = forward(&spec, &w, &psi).unwrap();
        let direct: f64 = out.amplitudes().iter().zip(y.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum();
        worst = worst.max((fidelity_loss(&spec, &w, &psi, &y).unwrap() - direct).abs());
    }
    let elapsed = started.elapsed();
    outcome(
        worst <= 1e-12 && within(elapsed, 5.0),
        format!("500 instances: max |2−2Re⟨y|Nψ⟩ − ‖Nψ−y‖²| {worst:.1e}, {:.2}s", elapsed.as_secs_f64()),
    )
}

fn gradient_agreement() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = 1e-5;
    let (mut shift_abs, mut fd_rel) = (0.0f64, 0.0f64);
    let mut count = 0;
    for _ in 0..50 {
        let spec = build_ansatz(3, 2, rng.gen_range(0.2..1.5)).unwrap();
        let w = random_weights(spec.num_params(), &mut rng);
        let psi = random_state(3, &mut rng);
        let y = random_state(3, &mut rng);
        let obj = Objective::Fidelity { target: &y };
        let inserted = fidelity_grad(&spec, &w, &psi, &y).unwrap();
        let (_, adjoint) = adjoint_grad(&spec, &w, &psi, &obj).unwrap();
        let shift = parameter_shift_grad(&spec, &w, &psi, &obj).unwrap();
        for k in 0..spec.num_params() {
            let at = |delta: f64| {
                oracle::residual(
                    &oracle::circuit(&spec, w.shifted(k, delta).as_slice()),
                    psi.amplitudes(),
                    y.amplitudes(),
                )
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            let (a, b, s) = (inserted.as_slice()[k], adjoint.as_slice()[k], shift.as_slice()[k]);
            shift_abs = shift_abs.max((a - s).abs()).max((b - s).abs());
            fd_rel = fd_rel.max(relative_error(a, fd)).max(relative_error(b, fd)).max(relative_error(s, fd));
            count += 1;
        }
    }
    let elapsed = started.elapsed();
    outcome(
        count == 600 && shift_abs <= 1e-10 && fd_rel <= 1e-6 && within(elapsed, 30.0),
        format!(
            "{count} partials: max |analytic − shift| {shift_abs:.1e}, max relative vs finite difference {fd_rel:.1e}, {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn product_vs_expm(ops: &[(Axis, usize, f64)], dt: f64) -> f64 {
    let n = 4;
    let gate_ops = ops
        .iter()
        .enumerate()
        .map(|(k, &(axis, target, _))| GateOp::Rotation { generator: PauliGenerator { axis, target }, weight_index: k })
        .collect();
    let spec = CircuitSpec::custom(n, dt, gate_ops).unwrap();
    let w = Weights::new(ops.iter().map(|o| o.2).collect()).unwrap();
    let mut h = DenseMatrix::zeros(1 << n);
    for &(axis, target, weight) in ops {
        h = h.add(&DenseMatrix::embed_single(n, target, &pauli_matrix(axis)).scaled(Complex64::new(weight, 0.0)));
    }
    let exact = dense_expm(&h, dt).unwrap();
    let mut worst = 0.0f64;
    for col in 0..1 << n {
        let out = forward(&spec, &w, &StateVector::basis_state(n, col).unwrap()).unwrap();
        for (row, a) in out.amplitudes().iter().enumerate() {
            worst = worst.max((a - exact.get(row, col)).norm());
        }
    }
    worst
}

fn commuting_product() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut commuting = 0.0f64;
    let mut diagonal = 0.0f64;
    for _ in 0..20 {
        let ws: Vec<f64> = (0..4).map(|_| rng.gen_range(-PI..PI)).collect();
        let dt = rng.gen_range(0.1..1.5);
        let ops: Vec<(Axis, usize, f64)> = ws.iter().enumerate().map(|(q, &w)| (Axis::Z, q, w)).collect();
        commuting = commuting.max(product_vs_expm(&ops, dt));
        // Σ w_q Z_q is diagonal with entries Σ ±w_q.
        let spec = CircuitSpec::custom(
            4,
            dt,
            (0..4)
                .map(|q| GateOp::Rotation { generator: PauliGenerator { axis: Axis::Z, target: q }, weight_index: q })
                .collect(),
        )
        .unwrap();
        let w = Weights::new(ws.clone()).unwrap();
        for b in 0..16usize {
            let e: f64 = (0..4).map(|q| if b >> q & 1 == 0 { ws[q] } else { -ws[q] }).sum();
            let out = forward(&spec, &w, &StateVector::basis_state(4, b).unwrap()).unwrap();
            diagonal = diagonal.max((out.amplitudes()[b] - Complex64::from_polar(1.0, -e * dt)).norm());
        }
    }
    // X and Z on the same qubit do not commute, so the ordered product is not
    // the exponential of their sum.
    let counterexample = product_vs_expm(&[(Axis::X, 0, 0.7), (Axis::Z, 0, 0.9), (Axis::Y, 2, 0.3)], 1.0);
    outcome(
        commuting <= 1e-10 && diagonal <= 1e-10 && counterexample > 1e-3,
        format!(
            "Z generators: max |product − expm| {commuting:.1e} (vs diagonal phases {diagonal:.1e}); X/Z counterexample {counterexample:.3}"
        ),
    )
}

fn forward_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let spec = build_ansatz(3, 2, 1.0).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let w = random_weights(spec.num_params(), &mut rng);
        let m = oracle::circuit(&spec, w.as_slice());
        for col in 0..8 {
            let out = forward(&spec, &w, &StateVector::basis_state(3, col).unwrap()).unwrap();
            for (a, row) in out.amplitudes().iter().zip(&m) {
                worst = worst.max((a - row[col]).norm());
            }
        }
    }
    outcome(worst <= 1e-12, format!("20 weight vectors, 64 entries each: max deviation {worst:.1e}"))
}

/// Two 2×3 images and their labels, byte by byte.
fn idx_fixture() -> (Vec<u8>, Vec<u8>) {
    let images = vec![
        0x00, 0x00, 0x08, 0x03, // magic
        0x00, 0x00, 0x00, 0x02, // count
        0x00, 0x00, 0x00, 0x02, // rows
        0x00, 0x00, 0x00, 0x03, // cols
        0x00, 0x11, 0x80, 0xff, 0x01, 0x7f, // image 0
        0xfe, 0x00, 0x00, 0x40, 0xc0, 0x33, // image 1
    ];
    let labels = vec![0x00, 0x00, 0x08, 0x01, 0x00, 0x00, 0x00, 0x02, 0x07, 0x00];
    (images, labels)
}

fn corrupt(good: &[u8], header: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut bad = good.to_vec();
    match rng.gen_range(0..3) {
        0 => bad.truncate(rng.gen_range(0..good.len())),
        1 => bad.extend((0..rng.gen_range(1..9)).map(|_| rng.gen::<u8>())),
        _ => {
            let i = rng.gen_range(0..header);
            bad[i] ^= rng.gen_range(1..=255u8);
        }
    }
    bad
}

fn idx_parser() -> Outcome {
    let (image_bytes, label_bytes) = idx_fixture();
    let images = parse_idx_images(&image_bytes).unwrap();
    let labels = parse_idx_labels(&label_bytes).unwrap();
    let expected_px = [0x00, 0x11, 0x80, 0xff, 0x01, 0x7f, 0xfe, 0x00, 0x00, 0x40, 0xc0, 0x33];
    let values_ok = labels == [7, 0]
        && images.len() == 2
        && images.iter().all(|im| im.width() == 3 && im.height() == 2)
        && images.iter().flat_map(|im| im.pixels()).zip(expected_px).all(|(p, b)| *p == b as f64 / 255.0);
    let round_trip = encode_idx_images(&images) == image_bytes && encode_idx_labels(&labels) == label_bytes;

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut accepted = 0;
    for i in 0..1000 {
        let rejected = if i % 2 == 0 {
            parse_idx_images(&corrupt(&image_bytes, 16, &mut rng)).is_err()
        } else {
            let mut bad = corrupt(&label_bytes, 8, &mut rng);
            // Half of the label cases plant an out-of-range digit instead.
            if i % 4 == 1 {
                bad = label_bytes.clone();
                bad[8 + rng.gen_range(0..2)] = rng.gen_range(10..=255);
            }
            parse_idx_labels(&bad).is_err()
        };
        accepted += usize::from(!rejected);
    }
    outcome(
        values_ok && round_trip && accepted == 0,
        format!(
            "fixture values {values_ok}, bit-exact round trip {round_trip}, {accepted} of 1000 corruptions accepted"
        ),
    )
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/mnist")
}

fn subset(split: Split, classes: &[u8], per_class: usize) -> Vec<EncodedSample> {
    let raw = load_split(&data_dir(), split).expect("MNIST files under data/mnist");
    let keep: BTreeSet<u8> = classes.iter().copied().collect();
    let raw = filter_classes(&raw, &keep, Some(per_class));
    assert_eq!(raw.len(), classes.len() * per_class, "not enough samples per class");
    encode_dataset(&raw, 4).unwrap()
}

fn checkpoint_bits(w: &Weights) -> Vec<u64> {
    w.as_slice().iter().map(|x| x.to_bits()).collect()
}

fn desk_training() -> Outcome {
    let started = Instant::now();
    let train_set = subset(Split::Train, &[0, 1], 250);
    let test_set = subset(Split::Test, &[0, 1], 100);
    let spec = build_ansatz(6, 6, 1.0).unwrap();
    let config = TrainConfig {
        epochs: 20,
        loss: LossKind::ProbMse,
        grad_engine: GradEngine::ParamShift,
        ..TrainConfig::default()
    };
    let first = train(&spec, &train_set, &test_set, &config, |_, _, _| Ok(())).unwrap();
    let elapsed = started.elapsed();
    let second = train(&spec, &train_set, &test_set, &config, |_, _, _| Ok(())).unwrap();
    let best = first.metrics.iter().filter_map(|m| m.test_accuracy).fold(0.0, f64::max);
    let reached = first.metrics.iter().find(|m| m.test_accuracy.unwrap() >= 0.90).map(|m| m.epoch);
    let deterministic = checkpoint_bits(&first.final_weights) == checkpoint_bits(&second.final_weights)
        && checkpoint_bits(&first.best_weights) == checkpoint_bits(&second.best_weights);
    outcome(
        best >= 0.90 && deterministic && within(elapsed, 600.0),
        format!(
            "best test accuracy {best:.4} in 20 epochs (≥ 0.90 first at epoch {}), repeat run bitwise identical {deterministic}, {:.1}s per run",
            reached.map_or("-".into(), |e| e.to_string()),
            elapsed.as_secs_f64()
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn layer_trend(train_set: &[EncodedSample], test_set: &[EncodedSample]) -> Outcome {
    let started = Instant::now();
    let mut finals = Vec::new();
    for layers in [4, 10] {
        let spec = build_ansatz(6, layers, 1.0).unwrap();
        let accs: Vec<f64> = (0..3)
            .map(|seed| {
                let config = TrainConfig {
                    seed,
                    loss: LossKind::ProbMse,
                    grad_engine: GradEngine::Analytic,
                    ..TrainConfig::default()
                };
                let out = train(&spec, train_set, test_set, &config, |_, _, _| Ok(())).unwrap();
                out.metrics.last().unwrap().test_accuracy.unwrap()
            })
            .collect();
        finals.push(accs);
    }
    let (shallow, deep) = (median(finals[0].clone()), median(finals[1].clone()));
    let gap = 100.0 * (deep - shallow);
    let elapsed = started.elapsed();
    outcome(
        gap >= 5.0 && within(elapsed, 7200.0),
        format!(
            "median final test accuracy 4 layers {shallow:.4} {:?}, 10 layers {deep:.4} {:?}, gap {gap:.1} pp, {:.0}s",
            finals[0],
            finals[1],
            elapsed.as_secs_f64()
        ),
    )
}

fn chance_baseline(test_set: &[EncodedSample]) -> Outcome {
    let spec = build_ansatz(6, 10, 1.0).unwrap();
    let mut accs = Vec::new();
    for seed in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = Weights::random(spec.num_params(), &mut rng);
        accs.push(evaluate(&spec, &w, test_set).unwrap());
    }
    let ok = accs.iter().all(|a| (a - 0.10).abs() <= 0.05);
    outcome(ok, format!("untrained accuracy on {} balanced test images: {accs:?}", test_set.len()))
}

fn main() {
    // `cargo test -- <filter>` passes arguments; honor a plain name filter.
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let selected = |name: &str| filter.as_deref().is_none_or(|f| name.contains(f));

    let mut failures = 0;
    let mut report = |id: usize, name: &str, run: &mut dyn FnMut() -> Outcome| {
        if !selected(name) {
            return;
        }
        let o = run();
        println!("criterion {id} {name}: {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failures += usize::from(!o.passed);
    };
    report(1, "gate_algebra", &mut gate_algebra);
    report(2, "fidelity_identity", &mut fidelity_identity);
    report(3, "gradient_agreement", &mut gradient_agreement);
    report(4, "commuting_product", &mut commuting_product);
    report(5, "forward_oracle", &mut forward_oracle);
    report(6, "idx_parser", &mut idx_parser);
    report(7, "desk_training", &mut desk_training);
    let ten = (0..10).collect::<Vec<u8>>();
    let mut ten_class: Option<(Vec<EncodedSample>, Vec<EncodedSample>)> = None;
    let mut data =
        || ten_class.get_or_insert_with(|| (subset(Split::Train, &ten, 200), subset(Split::Test, &ten, 50))).clone();
    report(8, "layer_trend", &mut || {
        let (train_set, test_set) = data();
        layer_trend(&train_set, &test_set)
    });
    report(9, "chance_baseline", &mut || chance_baseline(&subset(Split::Test, &ten, 100)));

    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
