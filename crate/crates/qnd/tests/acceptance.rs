//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test -p qnd --test acceptance -- --nocapture` to see the
//! lines; the test names mirror the criteria.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use qnd::conditions::{
    moderate_violation, moderate_violation_value, strong_violation, vaidman_violation,
    weak_violation, weak_violation_value,
};
use qnd::estimation::{
    bias, conditional_mean_estimator, counter_information_heuristic, mutual_information,
    nats_to_bits, squared_error, Estimator,
};
use qnd::linalg::{commutator_norm, hermitian_expm, ComplexMatrix, StateVector, DEFAULT_TOL};
use qnd::measure::{
    joint_amplitudes, post_ensemble, q_marginal_from_density, q_marginal_pre, sample_outcomes,
    InteractionUnitary, MeasurementModel, Observable,
};
use qnd::modelfile::ModelFile;
use qnd::random::{block_hermitian, haar_unitary, random_state_on_support, random_unit_state};
use qnd::report::ReportDocument;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load_fixture(name: &str) -> qnd::modelfile::LoadedModel {
    ModelFile::from_path(&fixture(name))
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
        .build()
        .unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

fn random_model(d_s: usize, d_p: usize, rng: &mut ChaCha12Rng) -> MeasurementModel {
    let u = InteractionUnitary::new(haar_unitary(d_s * d_p, rng), d_s, d_p).unwrap();
    MeasurementModel::new(
        Observable::counting(d_s).unwrap(),
        Observable::counting(d_p).unwrap(),
        u,
        random_unit_state(d_s, rng),
        random_unit_state(d_p, rng),
    )
    .unwrap()
}

fn pass(criterion: &str) {
    println!("PASS: {criterion}");
}

/// Criterion 1: over >= 200 randomized instances, strong pass => moderate
/// pass => weak pass at tolerance 1e-8, with zero counterexamples, in < 30 s.
#[test]
fn criterion_01_implication_hierarchy() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(0xC0DE);
    let tol = 1e-8;
    let mut instances = 0usize;

    for round in 0..40 {
        for d_s in 2..=4usize {
            for d_p in 2..=4usize {
                // Alternate Haar-random interactions with constructed
                // strong-satisfying block unitaries.
                let u = if round % 2 == 0 {
                    InteractionUnitary::new(haar_unitary(d_s * d_p, &mut rng), d_s, d_p).unwrap()
                } else {
                    qnd::random::strong_block_unitary(d_s, d_p, &mut rng)
                };
                let b = random_unit_state(d_p, &mut rng);
                let strong = strong_violation(&u, tol);
                let moderate = moderate_violation(&u, &b, tol).unwrap();
                if strong.verdict {
                    assert!(
                        moderate.violation <= tol,
                        "instance {instances}: strong passes but moderate violates by {}",
                        moderate.violation
                    );
                }
                if moderate.verdict {
                    for _ in 0..3 {
                        let a = random_unit_state(d_s, &mut rng);
                        let weak = weak_violation_value(&u, &a, &b);
                        assert!(
                            weak <= tol,
                            "instance {instances}: moderate passes but weak violates by {weak}"
                        );
                    }
                }
                instances += 1;
            }
        }
    }

    assert!(instances >= 200, "only {instances} instances");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    pass(&format!(
        "criterion 1 - implication hierarchy over {instances} instances in {elapsed:?}"
    ));
}

/// Criterion 2: for >= 50 Hermitian generators block-diagonal over a
/// nondegenerate Q (commutator <= 1e-12), the evolved unitary satisfies the
/// strong condition at 1e-9 for t in {0.1, 1, 10}.
#[test]
fn criterion_02_strong_from_conserved_generator() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xB10C);
    let mut count = 0usize;
    for _ in 0..6 {
        for d_s in 2..=4usize {
            for d_p in 2..=4usize {
                let h = block_hermitian(d_s, d_p, &mut rng);
                let q = Observable::counting(d_s).unwrap().matrix();
                let promoted = q.kron(&ComplexMatrix::identity(d_p));
                let comm = commutator_norm(&promoted, &h).unwrap();
                assert!(comm <= 1e-12, "generator not conserved: {comm}");

                for t in [0.1, 1.0, 10.0] {
                    let u_matrix = hermitian_expm(&h, t).unwrap();
                    let u = InteractionUnitary::new(u_matrix, d_s, d_p).unwrap();
                    let report = strong_violation(&u, 1e-9);
                    assert!(
                        report.violation <= 1e-9,
                        "strong violation {} at t = {t}",
                        report.violation
                    );
                }
                count += 1;
            }
        }
    }
    assert!(count >= 50, "only {count} generators");
    pass(&format!(
        "criterion 2 - strong condition from {count} conserved generators at three times"
    ));
}

/// Criterion 3: the weak violation equals the L-infinity gap between the
/// pre-measurement Q distribution and the Q diagonal of the reduced
/// post-measurement density operator, within 1e-12.
#[test]
fn criterion_03_weak_equals_distribution_invariance() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xD15);
    for _ in 0..25 {
        for d_s in 2..=4usize {
            for d_p in 2..=4usize {
                let model = random_model(d_s, d_p, &mut rng);
                let report = weak_violation(&model, DEFAULT_TOL);

                let c = joint_amplitudes(&model);
                let rho = post_ensemble(&c);
                let post = q_marginal_from_density(rho.density(), d_s, d_p).unwrap();
                let pre = q_marginal_pre(model.system_state());
                let gap = post
                    .iter()
                    .zip(&pre)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                assert!(
                    (report.violation - gap).abs() <= 1e-12,
                    "violation {} vs density-path gap {gap}",
                    report.violation
                );
            }
        }
    }
    pass("criterion 3 - weak violation equals the density-path distribution gap (225 instances)");
}

/// Criterion 4: ideal-probe CNOT end to end with a = (0.6, 0.8): zero bias,
/// zero squared error, and information equal to the binary entropy of
/// (0.36, 0.64) recomputed directly as the oracle.
#[test]
fn criterion_04_cnot_end_to_end() {
    let loaded = load_fixture("cnot_ideal.json");
    let c = joint_amplitudes(&loaded.model);
    let q = loaded.model.system().values();
    let f = conditional_mean_estimator(&c, q);

    let b = bias(&c, q, &f);
    assert!(b.abs() <= 1e-12, "bias {b}");
    let err = squared_error(&c, q, &f);
    assert!(err.abs() <= 1e-12, "squared error {err}");

    // Direct-formula oracle for the information.
    let oracle = -(0.36_f64 * 0.36_f64.ln() + 0.64_f64 * 0.64_f64.ln());
    let info = mutual_information(&c);
    assert!(
        (info - oracle).abs() <= 1e-5,
        "information {info} vs oracle {oracle}"
    );
    assert!((oracle - 0.6534).abs() < 1e-4, "oracle magnitude {oracle}");
    pass(&format!(
        "criterion 4 - ideal CNOT: bias {b:.1e}, error {err:.1e}, I = {info:.6} nats"
    ));
}

/// Criterion 5: noisy-probe CNOT (b = (sqrt 0.9, sqrt 0.1)): unbiased
/// conditional mean; squared error and information match from-scratch
/// four-term oracles.
#[test]
fn criterion_05_noisy_probe_oracles() {
    let loaded = load_fixture("cnot_noisy_probe.json");
    let c = joint_amplitudes(&loaded.model);
    let q = loaded.model.system().values();
    let f = conditional_mean_estimator(&c, q);

    assert!(bias(&c, q, &f).abs() <= 1e-10);

    // Joint distribution by hand: c_{0j} = a_0 b_j, c_{1j} = a_1 b_{1-j}.
    let p: [[f64; 2]; 2] = [[0.36 * 0.9, 0.36 * 0.1], [0.64 * 0.1, 0.64 * 0.9]];
    let col = [p[0][0] + p[1][0], p[0][1] + p[1][1]];
    let f0 = (p[0][0] * 0.0 + p[1][0] * 1.0) / col[0];
    let f1 = (p[0][1] * 0.0 + p[1][1] * 1.0) / col[1];
    let error_oracle = p[0][0] * (0.0 - f0).powi(2)
        + p[1][0] * (1.0 - f0).powi(2)
        + p[0][1] * (0.0 - f1).powi(2)
        + p[1][1] * (1.0 - f1).powi(2);
    let err = squared_error(&c, q, &f);
    assert!(
        (err - error_oracle).abs() <= 1e-10,
        "error {err} vs oracle {error_oracle}"
    );
    assert!((error_oracle - 0.0873).abs() < 5e-5, "oracle magnitude");

    let row = [0.36, 0.64];
    let mut info_oracle = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            info_oracle += p[i][j] * (p[i][j] / (row[i] * col[j])).ln();
        }
    }
    let info = mutual_information(&c);
    assert!(
        (info - info_oracle).abs() <= 1e-6,
        "information {info} vs oracle {info_oracle}"
    );
    assert!((info_oracle - 0.3428).abs() < 5e-5, "oracle magnitude");
    pass(&format!(
        "criterion 5 - noisy probe: error {err:.6} and I {info:.6} match 4-term oracles"
    ));
}

/// Criterion 6: on 100 random instances, the conditional-mean estimator's
/// squared error is <= that of 1000 random estimator tables each.
#[test]
fn criterion_06_estimator_optimality() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x0471);
    for instance in 0..100 {
        use rand::Rng;
        let d_s = rng.random_range(2..=4);
        let d_p = rng.random_range(2..=4);
        let model = random_model(d_s, d_p, &mut rng);
        let c = joint_amplitudes(&model);
        let q = model.system().values();
        let f = conditional_mean_estimator(&c, q);
        let best = squared_error(&c, q, &f);
        for _ in 0..1000 {
            let table: Vec<f64> = (0..d_p).map(|_| rng.random_range(-1.0..d_s as f64)).collect();
            let alt = Estimator::new(table).unwrap();
            let err = squared_error(&c, q, &alt);
            assert!(
                best <= err + 1e-12,
                "instance {instance}: conditional mean {best} beaten by {err}"
            );
        }
    }
    pass("criterion 6 - conditional mean optimal against 100 x 1000 random tables");
}

/// Criterion 7: the restricted-range model passes weak for in-range states,
/// fails by >= 0.1 for out-of-range states, and the search command finds an
/// out-of-range witness with violation >= 0.5.
#[test]
fn criterion_07_response_range() {
    let model = qnd::models::restricted_range_model(4, 4, 2).unwrap();
    let u = model.interaction();
    let b = StateVector::basis(4, 0);
    let mut rng = ChaCha12Rng::seed_from_u64(0x7A6E);

    for _ in 0..100 {
        let a = random_state_on_support(4, &[0, 1], &mut rng);
        let v = weak_violation_value(u, &a, &b);
        assert!(v <= 1e-9, "in-range state violated by {v}");
    }
    for _ in 0..100 {
        let a = random_state_on_support(4, &[2, 3], &mut rng);
        let v = weak_violation_value(u, &a, &b);
        assert!(v >= 0.1, "out-of-range state violated by only {v}");
    }

    // Witness search through the CLI command path.
    let loaded = load_fixture("restricted_range.json");
    let (code, doc) =
        qnd::cli::cmd_search(&loaded, "digest".into(), qnd::cli::SearchTarget::Weak, 16, 7)
            .unwrap();
    assert_eq!(code, 0);
    let search = doc.search.unwrap();
    assert!(
        search.best_value >= 0.5,
        "search witness violation {}",
        search.best_value
    );
    let out_mass: f64 = search.best_state[2..]
        .iter()
        .map(|p| p[0] * p[0] + p[1] * p[1])
        .sum();
    assert!(out_mass > 0.5, "witness out-of-range mass {out_mass}");
    pass(&format!(
        "criterion 7 - response range: 100/100 in-range pass, 100/100 out-of-range fail, witness violation {:.3}",
        search.best_value
    ));
}

/// Criterion 8: product-form amplitudes carry zero information, and the
/// counter heuristic gives ln(10^4) = 9.2103 nats for n_max = 10^6,
/// delta_n_err = 10^2 (a value no standard log base maps to 12).
#[test]
fn criterion_08_information_facts() {
    let u = InteractionUnitary::new(ComplexMatrix::identity(6), 2, 3).unwrap();
    let model = MeasurementModel::new(
        Observable::counting(2).unwrap(),
        Observable::counting(3).unwrap(),
        u,
        StateVector::from_real(&[0.6, 0.8]).unwrap(),
        StateVector::from_real(&[0.48, 0.6, 0.64]).unwrap(),
    )
    .unwrap();
    let c = joint_amplitudes(&model);
    let info = mutual_information(&c);
    assert!(info <= 1e-12, "product state info {info}");

    let heuristic = counter_information_heuristic(1_000_000, 100).unwrap();
    assert!(
        (heuristic - 9.2103).abs() <= 1e-4,
        "counter heuristic {heuristic}"
    );
    // Neither the nat nor the bit value of this pair is anywhere near 12.
    assert!((heuristic - 12.0).abs() > 1.0);
    assert!((nats_to_bits(heuristic) - 12.0).abs() > 1.0);
    pass(&format!(
        "criterion 8 - I = 0 for product amplitudes; counter heuristic {heuristic:.4} nats ({:.4} bits)",
        nats_to_bits(heuristic)
    ));
}

/// Criterion 9: stored instances showing the state-wise commutator condition
/// is independent of the hierarchy: one where weak passes but the commutator
/// residual is large, one where the residual vanishes but moderate fails.
#[test]
fn criterion_09_vaidman_non_equivalence() {
    // Instance (i): weak passes, commutator condition fails.
    let loaded = load_fixture("vaidman_weak_pass.json");
    let weak = weak_violation(&loaded.model, DEFAULT_TOL);
    assert!(weak.verdict, "weak violation {}", weak.violation);
    let (h_i, _) = loaded.interaction_hamiltonian.clone().unwrap();
    let q = loaded.model.system().matrix();
    let vaidman = vaidman_violation(
        &q,
        &h_i,
        loaded.model.system_state(),
        loaded.model.probe_state(),
        DEFAULT_TOL,
    )
    .unwrap();
    assert!(
        vaidman.violation > 0.1,
        "vaidman violation {}",
        vaidman.violation
    );

    // Instance (ii): commutator condition passes for this state, moderate fails.
    let loaded = load_fixture("vaidman_pass_moderate_fail.json");
    let (h_i, _) = loaded.interaction_hamiltonian.clone().unwrap();
    let q = loaded.model.system().matrix();
    let vaidman2 = vaidman_violation(
        &q,
        &h_i,
        loaded.model.system_state(),
        loaded.model.probe_state(),
        DEFAULT_TOL,
    )
    .unwrap();
    assert!(
        vaidman2.verdict,
        "vaidman violation {}",
        vaidman2.violation
    );
    let moderate = moderate_violation_value(
        loaded.model.interaction(),
        loaded.model.probe_state(),
    );
    assert!(moderate > 0.1, "moderate violation {moderate}");
    pass(&format!(
        "criterion 9 - weak pass with commutator residual {:.3}; residual 0 with moderate violation {:.3}",
        vaidman.violation, moderate
    ));
}

/// Criterion 10: sampling consistency: 10^5 draws from the CNOT model land
/// within 3-sigma binomial bounds of the exact probabilities for at least 99
/// of 100 seeds.
#[test]
fn criterion_10_sampling_consistency() {
    let loaded = load_fixture("cnot_ideal.json");
    let c = joint_amplitudes(&loaded.model);
    let n = 100_000usize;
    let p0 = 0.36;
    let sigma = (p0 * (1.0 - p0) / n as f64).sqrt();

    let mut within = 0;
    for seed in 0..100u64 {
        let histogram = sample_outcomes(&c, n, seed);
        let freq = histogram[0] as f64 / n as f64;
        if (freq - p0).abs() <= 3.0 * sigma {
            within += 1;
        }
    }
    assert!(within >= 99, "only {within}/100 seeds within 3 sigma");
    pass(&format!(
        "criterion 10 - sampling within 3 sigma for {within}/100 seeds"
    ));
}

/// Criterion 11: CLI contract on the fixture suite: lossless machine-report
/// round trip and the documented 0/1/2 exit codes.
#[test]
fn criterion_11_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_qnd");
    let run = |args: &[&str]| -> (i32, String) {
        let output = Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        (
            output.status.code().expect("exit code"),
            String::from_utf8_lossy(&output.stdout).into_owned(),
        )
    };
    let path = |name: &str| fixture(name).display().to_string();

    // Valid models, passing physics: exit 0.
    for name in ["cnot_ideal.json", "phase_probe.json", "matrix_cnot.json"] {
        let (code, _) = run(&["check", &path(name), "--condition", "all"]);
        assert_eq!(code, 0, "{name} should pass all conditions");
    }
    let (code, _) = run(&["estimate", &path("cnot_ideal.json")]);
    assert_eq!(code, 0);
    let (code, _) = run(&["simulate", &path("cnot_ideal.json"), "-n", "1000", "--seed", "1"]);
    assert_eq!(code, 0);

    // Valid models, failing physics: exit 1.
    let (code, _) = run(&["check", &path("swap.json"), "--condition", "weak"]);
    assert_eq!(code, 1);
    let (code, _) = run(&["check", &path("partial_swap.json"), "--condition", "all"]);
    assert_eq!(code, 1);
    let (code, _) = run(&["estimate", &path("cnot_noisy_probe.json")]);
    assert_eq!(code, 1, "noisy probe exceeds the 0.2 error budget");
    let (code, _) = run(&["estimate", &path("identity_hamiltonian.json")]);
    assert_eq!(code, 1, "identity evolution obtains no information");

    // Malformed inputs and usage errors: exit 2.
    for name in [
        "malformed_syntax.json",
        "malformed_nonunitary.json",
        "malformed_state_dim.json",
        "malformed_two_kinds.json",
        "malformed_unnormalized.json",
    ] {
        let (code, _) = run(&["check", &path(name)]);
        assert_eq!(code, 2, "{name} should be rejected");
    }
    let (code, _) = run(&["check", &path("cnot_ideal.json"), "--condition", "bogus"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["simulate", &path("cnot_ideal.json"), "-n", "0"]);
    assert_eq!(code, 2);

    // Machine-report round trip is lossless, and repeated runs are
    // byte-identical.
    let (code, text) = run(&[
        "check",
        &path("cnot_noisy_probe.json"),
        "--condition",
        "all",
        "--output",
        "machine",
    ]);
    assert_eq!(code, 0);
    let doc = ReportDocument::parse(&text).expect("machine output parses");
    assert_eq!(doc.emit(), text.trim_end());
    let (_, text2) = run(&[
        "check",
        &path("cnot_noisy_probe.json"),
        "--condition",
        "all",
        "--output",
        "machine",
    ]);
    assert_eq!(text, text2);

    let (_, sim1) = run(&[
        "simulate", &path("cnot_ideal.json"), "-n", "10000", "--seed", "42",
        "--output", "machine",
    ]);
    let (_, sim2) = run(&[
        "simulate", &path("cnot_ideal.json"), "-n", "10000", "--seed", "42",
        "--output", "machine",
    ]);
    assert_eq!(sim1, sim2, "same seed, byte-identical reports");
    let doc = ReportDocument::parse(&sim1).unwrap();
    assert_eq!(doc.emit(), sim1.trim_end());

    pass("criterion 11 - CLI exit codes and lossless machine reports on the fixture suite");
}
