//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::{Duration, Instant};

use lsiib_core::cavity::{cavity_figures, CavityGeometry};
use lsiib_core::collective::{
    adiabatic_eliminate, balanced_form, blockade_shift_numeric, build_full_ladder, light_shifts, CollectiveLabel,
    DetuningChoice, LadderParams, ShiftModel,
};
use lsiib_core::dynamics::{
    fit_rabi, population_overlap, propagate, sample_sequence, simulate_blockade, PulseSegment, QuantumState,
    TrajectoryRecord,
};
use lsiib_core::linalg::CMatrix;
use lsiib_core::protocol::{coincidence_probabilities, run_cnot, run_interlink, GateMode, ProtocolParams};
use lsiib_core::register::{EnsembleLevel, Register, Site};
use lsiib_core::units::gamma_time_to_seconds;
use lsiib_core::{Result, C64};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use CollectiveLabel::{A, C, G};

struct Verdict {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn example(truncation: u32) -> LadderParams {
    LadderParams::from_common(1225, 1e-3, 100.0, 1000.0, 0.0, truncation).unwrap()
}

fn criterion_1() -> Result<Verdict> {
    let p = LadderParams::from_common(1225, 0.0, 100.0, 1000.0, 0.0, 2)?;
    let closed = light_shifts(&p)?.blockade_shift;
    let numeric = blockade_shift_numeric(&p)?;
    let r = rel(numeric, closed);
    Ok(check(
        closed == -1.0 / 80.0 && r <= 0.05,
        format!("closed form {closed} (exact -1/80: {}), numeric {numeric:.6e} ({:.2}% ≤ 5%)", closed == -1.0 / 80.0, 100.0 * r),
    ))
}

fn criterion_2() -> Result<Verdict> {
    let ls = light_shifts(&example(2))?;
    let r = rel(ls.resonance(), 2.5);
    Ok(check(r <= 0.01, format!("eps_C1 - eps_A = {:.9} ({:.1e} from 2.5, tol 1%)", ls.resonance(), r)))
}

fn criterion_3() -> Result<Verdict> {
    let traj = simulate_blockade(&example(2), 3600.0, 5.0)?;
    let fit = fit_rabi(&traj, &C(1))?;
    let t = fit.first_pi_time;
    let s = gamma_time_to_seconds(t);
    Ok(check(
        rel(t, 1795.0) <= 0.05 && rel(s, 47.6e-6) <= 0.05,
        format!("first P_C1 maximum at {t:.1}/Gamma = {:.2} us (1795 / 47.6 us, tol 5%)", s * 1e6),
    ))
}

fn max_diff_shared<L: Clone + PartialEq + std::fmt::Display>(a: &TrajectoryRecord<L>, b: &TrajectoryRecord<L>) -> (f64, String) {
    let mut worst = (0.0, String::new());
    for label in a.basis() {
        let (Some(x), Some(y)) = (a.series(label), b.series(label)) else { continue };
        let d = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        if d > worst.0 {
            worst = (d, label.to_string());
        }
    }
    worst
}

fn criterion_4() -> Result<Verdict> {
    let p = example(2).tuned(DetuningChoice::Resonant)?;
    let t2 = simulate_blockade(&example(2), 3600.0, 5.0)?;
    let p_c2 = t2.max_population(&C(2)).unwrap_or(f64::NAN);
    let ls = light_shifts(&p)?;
    let w2 = 2.0 * ls.rabi_collective.powi(2);
    let bound = w2 / (w2 + ls.blockade_shift.powi(2));

    let control = balanced_form(ls.rabi_collective, 0.0)?;
    let psi = QuantumState::basis_state(control.basis().to_vec(), &A)?;
    let ctl = sample_sequence(&psi, &[PulseSegment::new(control, 3600.0)?], 5.0)?;
    let ctl_c2 = ctl.max_population(&C(2)).unwrap_or(f64::NAN);

    let t4 = simulate_blockade(&example(4), 3600.0, 5.0)?;
    let high: f64 = [G(3), C(3), G(4), C(4)].iter().filter_map(|l| t4.max_population(l)).sum();
    let (diff, worst) = max_diff_shared(&t2, &t4);

    let checks = [p_c2 <= 0.05, p_c2 <= bound, ctl_c2 >= 0.3, high <= 1e-3, diff <= 1e-4];
    Ok(check(
        checks.iter().all(|&c| c),
        format!(
            "max P_C2 {p_c2:.4} (≤ 0.05: {}; two-level bound {bound:.4}: {}), control {ctl_c2:.3} (≥ 0.3: {}), \
             P_G3+ {high:.2e} (≤ 1e-3: {}), truncation 2 vs 4 {diff:.2e} on {worst} (≤ 1e-4: {})",
            checks[0], checks[1], checks[2], checks[3], checks[4]
        ),
    ))
}

fn criterion_5() -> Result<Verdict> {
    let p = example(2).tuned(DetuningChoice::Resonant)?;
    let full = build_full_ladder(&p)?;
    let full_values = full.eigenvalues()?;
    let worst_rel = |model| -> Result<f64> {
        let eff = adiabatic_eliminate(&p, model)?;
        let mut worst: f64 = 0.0;
        for e in eff.hamiltonian.eigenvalues()? {
            let nearest = full_values.iter().copied().min_by(|a, b| (a - e).abs().total_cmp(&(b - e).abs())).unwrap();
            worst = worst.max(rel(e, nearest));
        }
        Ok(worst)
    };
    let dressed = worst_rel(ShiftModel::Dressed)?;
    let first_order = worst_rel(ShiftModel::FirstOrder)?;

    let eff = adiabatic_eliminate(&p, ShiftModel::Dressed)?.hamiltonian;
    let ground = [A, C(1), C(2)];
    let period = 2.0 * PI / p.rabi_collective();
    let tf = sample_sequence(&QuantumState::basis_state(full.basis().to_vec(), &A)?, &[PulseSegment::new(full, period)?], 20.0)?;
    let te = sample_sequence(&QuantumState::basis_state(ground.to_vec(), &A)?, &[PulseSegment::new(eff, period)?], 20.0)?;
    let idx: Vec<usize> = ground.iter().map(|l| tf.basis().iter().position(|b| b == l).unwrap()).collect();
    let overlap = tf
        .rows()
        .iter()
        .zip(te.rows())
        .map(|(rf, re)| population_overlap(&idx.iter().map(|&i| rf[i]).collect::<Vec<_>>(), re))
        .fold(1.0, f64::min);
    Ok(check(
        dressed <= 1e-2 && overlap >= 0.99,
        format!(
            "eigenvalue rel. error {dressed:.2e} (≤ 1e-2; first-order shifts would give {first_order:.2e}), \
             min overlap over one period {overlap:.5} (≥ 0.99)"
        ),
    ))
}

fn gate_params() -> ProtocolParams {
    ProtocolParams {
        n_atoms: 1225,
        delta: 1000.0,
        omega1: 1e-3,
        omega2: 100.0,
        omega1_prime: 100.0,
        omega2_prime: 1.0,
        omega_i: 1.0,
        omega_ii: 10.0,
        g_c: 10.0,
        omega_1c: 1.0,
        omega_2c: 10.0,
        g_f: 1.0,
        flight_time: 5e-6,
    }
}

fn random_qubit(rng: &mut ChaCha8Rng) -> (C64, C64) {
    loop {
        let z: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = z.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return (C64::new(z[0] / n, z[1] / n), C64::new(z[2] / n, z[3] / n));
        }
    }
}

fn criterion_6() -> Result<Verdict> {
    let p = gate_params();
    let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let mut worst: f64 = 1.0;
    for (a, b) in [(one, zero), (zero, one)] {
        for (x, e) in [(one, zero), (zero, one)] {
            worst = worst.min(run_cnot(&p, a, b, x, e, GateMode::Strict)?.fidelity);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let (a, b) = random_qubit(&mut rng);
        let (x, e) = random_qubit(&mut rng);
        worst = worst.min(run_cnot(&p, a, b, x, e, GateMode::Strict)?.fidelity);
    }
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let r = run_cnot(&p, h, h, one, zero, GateMode::Strict)?;
    let sites = vec![Site::EnsembleI, Site::Cavity, Site::EnsembleII];
    let (a, c1, d1) = (EnsembleLevel::A.index(), EnsembleLevel::C1.index(), EnsembleLevel::D1.index());
    let bell = Register::from_terms(sites, &[(&[a, 0, c1], h), (&[c1, 0, d1], h)])?;
    let bell_f = r.final_state.fidelity(&bell)?;
    let pc = coincidence_probabilities(&r.final_state)?.p_coincidence;
    let tol = 1e-12;
    Ok(check(
        worst >= 1.0 - tol && bell_f >= 1.0 - tol && (pc - 0.5).abs() <= tol,
        format!(
            "worst fidelity over 4 basis + 100 random inputs 1 - {:.1e}, Bell fidelity 1 - {:.1e}, p_coincidence {pc:.15} (0.5 ± 1e-12)",
            1.0 - worst,
            1.0 - bell_f
        ),
    ))
}

fn criterion_7() -> Result<Verdict> {
    let p = gate_params();
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let mut worst: f64 = 1.0;
    for (a, b) in [(C64::new(1.0, 0.0), C64::new(0.0, 0.0)), (C64::new(0.0, 0.0), C64::new(1.0, 0.0)), (h, C64::new(0.0, FRAC_1_SQRT_2))] {
        worst = worst.min(run_interlink(&p, a, b, false, GateMode::Strict)?.fidelity);
    }
    let r = run_interlink(&p, h, h, true, GateMode::Strict)?;
    worst = worst.min(r.fidelity);
    let s = r.final_state.entanglement_entropy(&[Site::Ancilla])?;
    Ok(check(
        worst >= 1.0 - 1e-12 && (s - 1.0).abs() <= 1e-9,
        format!("worst transfer fidelity 1 - {:.1e}, ancilla-Q2 entropy {s:.12} bits (1 ± 1e-9)", 1.0 - worst),
    ))
}

fn criterion_8() -> Result<Verdict> {
    let a = cavity_figures(&CavityGeometry::new(40e-6, 5e-6, 1.2e-6, 1)?)?;
    let l = cavity_figures(&CavityGeometry::new(0.05, 5e-6, 1.2e-6, 3000)?)?;
    let checks = [
        ("finesse", a.finesse, 2.6e6, 0.02),
        ("FSR", a.fsr, 3.747e12, 1e-3),
        ("gamma", a.gamma_hwhm, 0.12, 0.05),
        ("tau", a.lifetime, 222e-9, 0.05),
        ("g(5cm)", l.g, 84.04, 0.01),
        ("FSR(5cm)", l.fsr, 3.0e9, 1e-3),
        ("gamma(5cm)", l.gamma_hwhm, 9.55e-5, 0.05),
        ("tau(5cm)", l.lifetime, 0.3e-3, 0.10),
    ];
    let pass = checks.iter().all(|&(_, v, r, t)| rel(v, r) <= t);
    let detail: Vec<String> = checks.iter().map(|&(n, v, r, t)| format!("{n} {v:.4e} ({:.1}% / {}%)", 100.0 * rel(v, r), 100.0 * t)).collect();
    Ok(check(pass, detail.join(", ")))
}

fn hermitian(dim: usize, entries: &[(f64, f64)]) -> CMatrix {
    let mut m = CMatrix::zeros(dim);
    let mut k = 0;
    for i in 0..dim {
        m[(i, i)] = C64::new(entries[k].0, 0.0);
        k += 1;
        for j in (i + 1)..dim {
            let z = C64::new(entries[k].0, entries[k].1);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 1;
        }
    }
    m
}

fn system() -> impl Strategy<Value = (usize, Vec<(f64, f64)>, Vec<(f64, f64)>, f64, f64)> {
    (2usize..8).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), dim * (dim + 1) / 2),
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
                .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a.abs() + b.abs() > 1e-3)),
            0.0..50.0f64,
            0.0..50.0f64,
        )
    })
}

fn max_amp_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn criterion_9() -> Result<Verdict> {
    const CASES: u32 = 1000;
    let mut failures = Vec::new();
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    let numerics = runner.run(&system(), |(dim, entries, psi, t1, t2)| {
        let basis: Vec<usize> = (0..dim).collect();
        let m = hermitian(dim, &entries);
        let h = lsiib_core::collective::HamiltonianMatrix::new(basis.clone(), m).unwrap();
        let z: Vec<C64> = psi.iter().map(|&(a, b)| C64::new(a, b)).collect();
        let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let psi = QuantumState::new(basis.clone(), z.into_iter().map(|c| c / n).collect()).unwrap();
        let seg = PulseSegment::new(h.clone(), t1).unwrap();

        // unitarity: columns of U are orthonormal
        let cols: Vec<Vec<C64>> = basis
            .iter()
            .map(|b| propagate(&QuantumState::basis_state(basis.clone(), b).unwrap(), &seg).unwrap().amplitudes().to_vec())
            .collect();
        for i in 0..dim {
            for j in 0..dim {
                let dot: C64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot - C64::new(want, 0.0)).norm() <= 1e-10, "unitarity {i},{j}: {dot}");
            }
        }
        let out = propagate(&psi, &seg).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-10, "norm {}", out.norm());
        let two = propagate(&out, &seg.clone().with_duration(t2).unwrap()).unwrap();
        let one = propagate(&psi, &seg.clone().with_duration(t1 + t2).unwrap()).unwrap();
        prop_assert!(max_amp_diff(two.amplitudes(), one.amplitudes()) <= 1e-9, "composition");
        let back = propagate(&out, &PulseSegment::new(h.negated(), t1).unwrap()).unwrap();
        prop_assert!(max_amp_diff(back.amplitudes(), psi.amplitudes()) <= 1e-9, "reversibility");
        Ok(())
    });
    if let Err(e) = numerics {
        failures.push(format!("propagator: {e}"));
    }

    let ladders = (
        1u64..5000,
        0.0..2.0f64,
        0.0..200.0f64,
        prop_oneof![-5000.0..-1.0f64, 1.0..5000.0f64],
        prop_oneof![-5000.0..-1.0f64, 1.0..5000.0f64],
        1u32..5,
        any::<bool>(),
    );
    let hermiticity = runner.run(&ladders, |(n, o1, o2, d1, d2, depth, trailing)| {
        let p = LadderParams::new(n, o1, o2, d1, d2, depth.min(n as u32)).unwrap().with_trailing_g(trailing);
        let h = build_full_ladder(&p).unwrap();
        let m = h.matrix();
        prop_assert!(m.hermiticity_defect() <= 1e-12 * m.max_abs().max(1.0));
        Ok(())
    });
    if let Err(e) = hermiticity {
        failures.push(format!("ladder: {e}"));
    }

    Ok(check(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{CASES} random systems: unitarity 1e-10, norm 1e-10, composition 1e-9, reversibility 1e-9; {CASES} ladders Hermitian to 1e-12"
            )
        } else {
            failures.join("; ")
        },
    ))
}

type Criterion = (u32, &'static str, fn() -> Result<Verdict>, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "blockade shift", criterion_1, Duration::from_secs(1)),
        (2, "two-photon resonance", criterion_2, Duration::from_secs(1)),
        (3, "pi-pulse time", criterion_3, Duration::from_secs(10)),
        (4, "blockade closure", criterion_4, Duration::from_secs(60)),
        (5, "effective Hamiltonian", criterion_5, Duration::from_secs(60)),
        (6, "C-NOT truth table and Bell state", criterion_6, Duration::from_secs(5)),
        (7, "interlink transfer", criterion_7, Duration::from_secs(5)),
        (8, "cavity figures", criterion_8, Duration::from_secs(1)),
        (9, "numerics property suite", criterion_9, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let verdict = f();
        let elapsed = start.elapsed();
        let (pass, detail) = match verdict {
            Ok(v) => (v.pass && elapsed <= limit, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {id}. {name}: {detail} [{:.3} s, limit {} s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
