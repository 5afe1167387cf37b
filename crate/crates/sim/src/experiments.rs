//! Orchestration: one function per experiment kind, each returning the
//! artifacts as in-memory text so runs can be compared byte for byte.

use std::fmt::Write as _;

use lsiib_core::cavity::{cavity_figures, first_principles_g, gate_feasibility, CavityFigures, CavityGeometry};
use lsiib_core::collective::{
    adiabatic_eliminate, blockade_shift_numeric, build_full_ladder, dressed_shifts, light_shifts, CollectiveLabel,
    DetuningChoice, LadderParams, ShiftModel,
};
use lsiib_core::dynamics::{fit_rabi, simulate_blockade_with, RabiFit, TrajectoryRecord};
use lsiib_core::protocol::{
    coincidence_probabilities, mode_name, run_cnot, run_interlink, snapshot, GateReport, ProtocolParams,
};
use lsiib_core::register::{Register, Site};
use lsiib_core::units::{gamma_time_to_seconds, SPEED_OF_LIGHT};
use lsiib_core::{Error, C64};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{
    CavityConfig, Detunings, ExperimentConfig, ExperimentKind, LadderConfig, SimulationConfig, SweepConfig,
    SweepTarget, UnitReport,
};
use crate::error::RunError;

/// Everything one run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub trajectory: Option<String>,
    pub report: Value,
    pub sweep: Option<String>,
    pub summary: String,
    pub warnings: Vec<String>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Artifacts, RunError> {
    // parse_config guarantees the blocks each kind needs
    let missing = |block: &str| -> RunError {
        lsiib_core::Error::Precondition(format!("missing `{block}` block")).into()
    };
    let mut art = match cfg.experiment {
        ExperimentKind::Blockade => blockade(
            cfg,
            cfg.ladder.as_ref().ok_or_else(|| missing("ladder"))?,
            cfg.simulation.as_ref().ok_or_else(|| missing("simulation"))?,
        )?,
        ExperimentKind::LadderSpectrum => spectrum(cfg.ladder.as_ref().ok_or_else(|| missing("ladder"))?)?,
        ExperimentKind::Cnot => cnot(cfg, cfg.protocol.as_ref().ok_or_else(|| missing("protocol"))?)?,
        ExperimentKind::Interlink => interlink(cfg, cfg.protocol.as_ref().ok_or_else(|| missing("protocol"))?)?,
        ExperimentKind::Cavity => cavity(cfg, cfg.cavity.as_ref().ok_or_else(|| missing("cavity"))?)?,
        ExperimentKind::Sweep => sweep(cfg, cfg.sweep.as_ref().ok_or_else(|| missing("sweep"))?)?,
    };
    let mut head = Map::new();
    head.insert("experiment".into(), json!(cfg.experiment.name()));
    head.insert("mode".into(), json!(mode_name(cfg.mode)));
    head.insert("unit_report".into(), json!(unit_name(cfg.units)));
    if let Value::Object(body) = std::mem::take(&mut art.report) {
        head.extend(body);
    }
    head.insert("warnings".into(), json!(art.warnings));
    head.insert("summary".into(), json!(art.summary));
    art.report = Value::Object(head);
    Ok(art)
}

fn unit_name(u: UnitReport) -> &'static str {
    match u {
        UnitReport::Gamma => "gamma-units",
        UnitReport::Si => "si",
    }
}

fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

fn state_json(state: &Register) -> Value {
    Value::Object(snapshot(state).into_iter().map(|(label, z)| (label, complex(z))).collect())
}

fn time_json(gamma: f64) -> Value {
    json!({ "gamma_units": gamma, "seconds": gamma_time_to_seconds(gamma) })
}

/// Human-readable duration for summary lines.
fn time_text(gamma: f64, units: UnitReport) -> String {
    match units {
        UnitReport::Gamma => format!("{gamma:.1}/Gamma"),
        UnitReport::Si => {
            let s = gamma_time_to_seconds(gamma);
            if s >= 1e-3 {
                format!("{:.3}ms", s * 1e3)
            } else {
                format!("{:.1}us", s * 1e6)
            }
        }
    }
}

fn csv_number(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.15e}");
}

fn csv_table(header: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            csv_number(&mut out, *x);
        }
        out.push('\n');
    }
    out
}

/// Ladder parameters with the two-photon detuning resolved.
pub fn ladder_params(l: &LadderConfig) -> Result<LadderParams, Error> {
    let p = match l.detunings {
        Detunings::Common { delta, two_photon } => {
            LadderParams::from_common(l.n_atoms, l.omega1, l.omega2, delta, 0.0, l.truncation)?.tuned(two_photon)?
        }
        Detunings::Legs { delta1, delta2 } => {
            LadderParams::new(l.n_atoms, l.omega1, l.omega2, delta1, delta2, l.truncation)?
        }
    };
    Ok(p.with_trailing_g(l.trailing_g))
}

fn two_photon_source(l: &LadderConfig) -> &'static str {
    match l.detunings {
        Detunings::Common { two_photon: DetuningChoice::Resonant, .. } => "resonant",
        Detunings::Common { two_photon: DetuningChoice::FirstOrder, .. } => "first-order",
        Detunings::Common { two_photon: DetuningChoice::Explicit(_), .. } => "explicit",
        Detunings::Legs { .. } => "delta1-delta2",
    }
}

fn ladder_json(l: &LadderConfig, p: &LadderParams) -> Result<Value, Error> {
    let ls = light_shifts(p)?;
    let dressed = if p.n_atoms() >= 2 {
        let d = dressed_shifts(p)?;
        json!({
            "eps_a": d.eps_a,
            "eps_c1": d.eps_c1,
            "eps_c2": d.eps_c2,
            "blockade_shift": blockade_shift_numeric(p)?,
        })
    } else {
        Value::Null
    };
    Ok(json!({
        "inputs": {
            "n_atoms": p.n_atoms(),
            "omega1": p.omega1(),
            "omega2": p.omega2(),
            "truncation": p.truncation(),
            "trailing_g": p.trailing_g(),
            "two_photon_source": two_photon_source(l),
        },
        "derived": {
            "delta": p.common_detuning(),
            "two_photon_detuning": p.two_photon_detuning(),
            "delta1": p.delta1(),
            "delta2": p.delta2(),
            "rabi_collective": ls.rabi_collective,
            "first_order": {
                "eps_a": ls.eps_a,
                "eps_c1": ls.eps_c1,
                "eps_c2": ls.eps_c2,
                "resonance": ls.resonance(),
                "blockade_shift": ls.blockade_shift,
            },
            "dressed": dressed,
        },
    }))
}

struct BlockadeRun {
    params: LadderParams,
    traj: TrajectoryRecord<CollectiveLabel>,
    fit: Option<RabiFit>,
}

fn simulate(l: &LadderConfig, sim: &SimulationConfig) -> Result<BlockadeRun, Error> {
    let params = ladder_params(l)?;
    let traj = simulate_blockade_with(
        &params,
        sim.duration,
        sim.sample_step,
        DetuningChoice::Explicit(params.two_photon_detuning()),
    )?;
    let fit = match fit_rabi(&traj, &CollectiveLabel::C(1)) {
        Ok(f) => Some(f),
        Err(Error::FitFailure { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BlockadeRun { params, traj, fit })
}

fn blockade(cfg: &ExperimentConfig, l: &LadderConfig, sim: &SimulationConfig) -> Result<Artifacts, RunError> {
    let run = simulate(l, sim)?;
    let traj = &run.traj;
    let scale = match cfg.units {
        UnitReport::Gamma => 1.0,
        UnitReport::Si => gamma_time_to_seconds(1.0),
    };
    let header: Vec<String> =
        std::iter::once("t".to_string()).chain(traj.basis().iter().map(|l| l.to_string())).collect();
    let csv = csv_table(
        &header,
        traj.times().iter().zip(traj.rows()).map(|(t, row)| {
            let mut r = Vec::with_capacity(row.len() + 1);
            r.push(t * scale);
            r.extend_from_slice(row);
            r
        }),
    );

    let max_pop: Map<String, Value> =
        traj.basis().iter().map(|b| (b.to_string(), json!(traj.max_population(b).unwrap_or(0.0)))).collect();
    let final_pop: Map<String, Value> =
        traj.basis().iter().zip(traj.final_state().populations()).map(|(b, p)| (b.to_string(), json!(p))).collect();
    let max_c1 = traj.max_population(&CollectiveLabel::C(1)).unwrap_or(0.0);
    let max_c2 = traj.max_population(&CollectiveLabel::C(2));

    let mut summary = match &run.fit {
        Some(f) => format!("pi_time={}", time_text(f.first_pi_time, cfg.units)),
        None => "pi_time=none".to_string(),
    };
    let _ = write!(summary, " max_P_C1={max_c1:.6}");
    if let Some(c2) = max_c2 {
        let _ = write!(summary, " max_P_C2={c2:.6}");
    }

    let mut report = ladder_json(l, &run.params)?;
    let obj = report.as_object_mut().expect("ladder report is an object");
    obj.insert(
        "simulation".into(),
        json!({ "duration": time_json(sim.duration), "sample_step": time_json(sim.sample_step), "samples": traj.times().len() }),
    );
    obj.insert(
        "results".into(),
        json!({
            "pi_time": run.fit.map(|f| time_json(f.first_pi_time)),
            "rabi_frequency": run.fit.map(|f| f.frequency),
            "contrast": run.fit.map(|f| f.contrast),
            "max_population": max_pop,
            "final_population": final_pop,
        }),
    );
    obj.insert("trajectory_time_unit".into(), json!(if cfg.units == UnitReport::Si { "s" } else { "1/Gamma" }));
    Ok(Artifacts { trajectory: Some(csv), report, sweep: None, summary, warnings: Vec::new() })
}

fn spectrum(l: &LadderConfig) -> Result<Artifacts, RunError> {
    let p = ladder_params(l)?;
    let h = build_full_ladder(&p)?;
    let values = h.eigenvalues()?;
    let mut warnings = Vec::new();
    let mut report = ladder_json(l, &p)?;
    let obj = report.as_object_mut().expect("ladder report is an object");
    let basis: Vec<String> = h.basis().iter().map(|b| b.to_string()).collect();
    let diagonal: Vec<f64> = (0..h.dim()).map(|i| h.matrix()[(i, i)].re).collect();
    obj.insert("basis".into(), json!(basis));
    obj.insert("diagonal".into(), json!(diagonal));
    obj.insert("eigenvalues".into(), json!(values));
    if p.n_atoms() >= 2 {
        let mut effective = Map::new();
        for (name, model) in [("first_order", ShiftModel::FirstOrder), ("dressed", ShiftModel::Dressed)] {
            let eff = adiabatic_eliminate(&p, model)?;
            if let Some(w) = &eff.regime_warning {
                if !warnings.contains(w) {
                    warnings.push(w.clone());
                }
            }
            effective.insert(name.into(), json!(eff.hamiltonian.eigenvalues()?));
        }
        obj.insert("effective_eigenvalues".into(), Value::Object(effective));
    }
    let ls = light_shifts(&p)?;
    let summary = format!(
        "states={} blockade_shift={:.6e} resonance={:.6}",
        h.dim(),
        ls.blockade_shift,
        p.two_photon_detuning()
    );
    Ok(Artifacts { trajectory: None, report, sweep: None, summary, warnings })
}

fn protocol_json(p: &ProtocolParams) -> Value {
    json!({
        "n_atoms": p.n_atoms,
        "delta": p.delta,
        "omega1": p.omega1,
        "omega2": p.omega2,
        "omega1_prime": p.omega1_prime,
        "omega2_prime": p.omega2_prime,
        "omega_i": p.omega_i,
        "omega_ii": p.omega_ii,
        "g_c": p.g_c,
        "omega_1c": p.omega_1c,
        "omega_2c": p.omega_2c,
        "g_f": p.g_f,
        "flight_time_s": p.flight_time,
        "rabi_collective": p.rabi_collective(),
    })
}

fn gate_json(p: &ProtocolParams, r: &GateReport) -> Map<String, Value> {
    let steps: Vec<Value> = r
        .steps
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "transition": s.spec.as_ref().map(|sp| format!("{:?}", sp.transition)),
                "target": s.spec.as_ref().map(|sp| format!("{:?}", sp.target)),
                "effective_rate": s.spec.as_ref().map(|sp| sp.effective_rate()),
                "duration": { "gamma_units": s.duration, "seconds": s.duration_seconds() },
                "leakage": s.leakage,
                "state": state_json(&s.state),
            })
        })
        .collect();
    let inputs: Map<String, Value> = r.inputs.iter().map(|(k, z)| (k.to_string(), complex(*z))).collect();
    let total = r.total_duration();
    let mut m = Map::new();
    m.insert("protocol".into(), protocol_json(p));
    m.insert("inputs".into(), Value::Object(inputs));
    m.insert("initial_state".into(), state_json(&r.initial_state));
    m.insert("steps".into(), Value::Array(steps));
    m.insert("final_state".into(), state_json(&r.final_state));
    m.insert("target_state".into(), state_json(&r.target_state));
    m.insert("fidelity".into(), json!(r.fidelity));
    m.insert("total_leakage".into(), json!(r.total_leakage()));
    m.insert("total_duration".into(), time_json(total));
    m
}

fn cnot(cfg: &ExperimentConfig, p: &ProtocolParams) -> Result<Artifacts, RunError> {
    let i = cfg.cnot.expect("cnot block is validated");
    let r = run_cnot(p, i.alpha, i.beta, i.xi, i.eta, cfg.mode)?;
    let mut m = gate_json(p, &r);
    let mut summary = format!("fidelity={:.6}", r.fidelity);
    let mut warnings = Vec::new();
    match coincidence_probabilities(&r.final_state) {
        Ok(c) => {
            m.insert(
                "coincidence".into(),
                json!({ "p_photon1": c.p_photon1, "p_photon2": c.p_photon2, "p_coincidence": c.p_coincidence }),
            );
            let _ = write!(summary, " p_coincidence={:.6}", c.p_coincidence);
        }
        // only imperfect chain pulses can leave a photon behind
        Err(e @ Error::Precondition(_)) if cfg.mode == lsiib_core::protocol::GateMode::Chain => {
            warnings.push(format!("coincidence not evaluated: {e}"));
            m.insert("coincidence".into(), Value::Null);
        }
        Err(e) => return Err(e.into()),
    }
    let _ = write!(summary, " leakage={:.3e} duration={}", r.total_leakage(), time_text(r.total_duration(), cfg.units));
    Ok(Artifacts { trajectory: None, report: Value::Object(m), sweep: None, summary, warnings })
}

fn interlink(cfg: &ExperimentConfig, p: &ProtocolParams) -> Result<Artifacts, RunError> {
    let i = cfg.interlink.expect("interlink block is validated");
    let r = run_interlink(p, i.alpha, i.beta, i.ancilla, cfg.mode)?;
    let mut m = gate_json(p, &r);
    let q2 = r.final_state.entanglement_entropy(&[Site::Q2])?;
    m.insert("entropy_q2_bits".into(), json!(q2));
    let mut summary = format!("fidelity={:.6}", r.fidelity);
    if i.ancilla {
        let anc = r.final_state.entanglement_entropy(&[Site::Ancilla])?;
        m.insert("entropy_ancilla_bits".into(), json!(anc));
        let _ = write!(summary, " entropy={anc:.6}");
    }
    let _ = write!(summary, " duration={}", time_text(r.total_duration(), cfg.units));
    Ok(Artifacts { trajectory: None, report: Value::Object(m), sweep: None, summary, warnings: Vec::new() })
}

fn geometry(c: &CavityConfig) -> Result<CavityGeometry, Error> {
    CavityGeometry::new(c.length, c.mode_diameter, c.transmittivity, c.n_atoms)?.with_anchor(c.anchor)
}

fn figures_json(f: &CavityFigures) -> Value {
    json!({
        "g": f.g,
        "finesse": f.finesse,
        "fsr_hz": f.fsr,
        "gamma_hwhm": f.gamma_hwhm,
        "gamma_hwhm_hz": f.gamma_hwhm_hz,
        "lifetime_s": f.lifetime,
        "mode_volume_m3": f.mode_volume,
    })
}

fn cavity(cfg: &ExperimentConfig, c: &CavityConfig) -> Result<Artifacts, RunError> {
    let geom = geometry(c)?;
    let f = cavity_figures(&geom)?;
    let mut m = Map::new();
    m.insert(
        "geometry".into(),
        json!({
            "length_m": c.length,
            "mode_diameter_m": c.mode_diameter,
            "transmittivity": c.transmittivity,
            "n_atoms": c.n_atoms,
            "anchor": { "g0": c.anchor.g0, "length_m": c.anchor.length, "mode_diameter_m": c.anchor.mode_diameter },
        }),
    );
    m.insert("figures".into(), figures_json(&f));
    if let Some((wavelength, dipole)) = c.dipole_check {
        let omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength;
        let single = first_principles_g(omega, f.mode_volume, dipole)?;
        let scaled = single * (c.n_atoms as f64).sqrt();
        m.insert(
            "first_principles".into(),
            json!({
                "wavelength_m": wavelength,
                "dipole_moment_cm": dipole,
                "g_single_atom": single,
                "g": scaled,
                "ratio_to_anchor_scaling": scaled / f.g,
            }),
        );
    }
    let mut summary = format!(
        "g={:.4} finesse={:.4e} fsr={:.4e}Hz gamma={:.4e} lifetime={:.4e}s",
        f.g, f.finesse, f.fsr, f.gamma_hwhm, f.lifetime
    );
    if let Some(l) = &cfg.ladder {
        let params = ladder_params(l)?;
        let fe = gate_feasibility(&geom, &params)?;
        m.insert(
            "feasibility".into(),
            json!({ "pi_time_s": fe.pi_time_s, "lifetime_s": fe.lifetime_s, "ratio": fe.ratio, "feasible": fe.feasible }),
        );
        let _ = write!(summary, " pi_time={:.1}us feasible={}", fe.pi_time_s * 1e6, fe.feasible);
    }
    Ok(Artifacts { trajectory: None, report: Value::Object(m), sweep: None, summary, warnings: Vec::new() })
}

fn as_count(name: &str, v: f64) -> Result<u64, Error> {
    let n = v.round();
    if !(1.0..9.0e15).contains(&n) {
        return Err(Error::Precondition(format!("{name} = {v} is not a positive atom count")));
    }
    Ok(n as u64)
}

fn sweep_blockade_row(cfg: &ExperimentConfig, param: &str, v: f64) -> Result<Vec<f64>, Error> {
    let mut l = cfg.ladder.clone().expect("ladder block is validated");
    let sim = cfg.simulation.expect("simulation block is validated");
    let mut value = v;
    match param {
        "ladder.n_atoms" => {
            l.n_atoms = as_count(param, v)?;
            value = l.n_atoms as f64;
        }
        "ladder.omega1" => l.omega1 = v,
        "ladder.omega2" => l.omega2 = v,
        "ladder.delta" | "ladder.two_photon" => {
            let Detunings::Common { delta, two_photon } = l.detunings else {
                return Err(Error::Precondition(format!("{param} needs a common detuning")));
            };
            l.detunings = if param == "ladder.delta" {
                Detunings::Common { delta: v, two_photon }
            } else {
                Detunings::Common { delta, two_photon: DetuningChoice::Explicit(v) }
            };
        }
        other => return Err(Error::Precondition(format!("cannot sweep `{other}`"))),
    }
    let run = simulate(&l, &sim)?;
    let ls = light_shifts(&run.params)?;
    let pi = run.fit.map_or(f64::NAN, |f| f.first_pi_time);
    Ok(vec![
        value,
        run.params.common_detuning(),
        run.params.two_photon_detuning(),
        ls.rabi_collective,
        ls.blockade_shift,
        pi,
        gamma_time_to_seconds(pi),
        run.traj.max_population(&CollectiveLabel::C(1)).unwrap_or(0.0),
        run.traj.max_population(&CollectiveLabel::C(2)).unwrap_or(f64::NAN),
    ])
}

fn sweep_cavity_row(cfg: &ExperimentConfig, param: &str, v: f64) -> Result<Vec<f64>, Error> {
    let mut c = cfg.cavity.expect("cavity block is validated");
    let mut value = v;
    match param {
        "cavity.length" => c.length = v,
        "cavity.mode_diameter" => c.mode_diameter = v,
        "cavity.transmittivity" => c.transmittivity = v,
        "cavity.n_atoms" => {
            c.n_atoms = as_count(param, v)?;
            value = c.n_atoms as f64;
        }
        other => return Err(Error::Precondition(format!("cannot sweep `{other}`"))),
    }
    let geom = geometry(&c)?;
    let f = cavity_figures(&geom)?;
    let mut row = vec![value, f.g, f.finesse, f.fsr, f.gamma_hwhm, f.gamma_hwhm_hz, f.lifetime, f.mode_volume];
    if let Some(l) = &cfg.ladder {
        let fe = gate_feasibility(&geom, &ladder_params(l)?)?;
        row.extend([fe.pi_time_s, fe.ratio, if fe.feasible { 1.0 } else { 0.0 }]);
    }
    Ok(row)
}

fn sweep(cfg: &ExperimentConfig, s: &SweepConfig) -> Result<Artifacts, RunError> {
    let values = s.values();
    let (columns, rows): (Vec<&str>, Vec<Result<Vec<f64>, Error>>) = match s.target {
        SweepTarget::Blockade => (
            vec![
                "delta",
                "two_photon_detuning",
                "rabi_collective",
                "blockade_shift",
                "pi_time",
                "pi_time_s",
                "max_P_C1",
                "max_P_C2",
            ],
            values.par_iter().map(|&v| sweep_blockade_row(cfg, &s.parameter, v)).collect(),
        ),
        SweepTarget::Cavity => {
            let mut cols =
                vec!["g", "finesse", "fsr_hz", "gamma_hwhm", "gamma_hwhm_hz", "lifetime_s", "mode_volume_m3"];
            if cfg.ladder.is_some() {
                cols.extend(["pi_time_s", "ratio", "feasible"]);
            }
            (cols, values.par_iter().map(|&v| sweep_cavity_row(cfg, &s.parameter, v)).collect())
        }
    };
    // the first failure in grid order wins, whatever finished first
    let rows: Vec<Vec<f64>> = rows.into_iter().collect::<Result<_, _>>()?;
    let header: Vec<String> =
        std::iter::once(s.parameter.clone()).chain(columns.iter().map(|c| c.to_string())).collect();
    let csv = csv_table(&header, rows.iter().cloned());
    let report = json!({
        "sweep": {
            "target": match s.target { SweepTarget::Blockade => "blockade", SweepTarget::Cavity => "cavity" },
            "parameter": s.parameter,
            "start": s.start,
            "stop": s.stop,
            "points": s.points,
            "spacing": match s.spacing { crate::config::Spacing::Linear => "linear", crate::config::Spacing::Log => "log" },
            "columns": header,
        },
    });
    let summary = format!("sweep={} points={}", s.parameter, rows.len());
    Ok(Artifacts { trajectory: None, report, sweep: Some(csv), summary, warnings: Vec::new() })
}
