//! Experiment configuration: a TOML document of flat sections.
//!
//! Parsing never stops at the first problem; every missing, unknown or
//! out-of-range key is reported with its `section.key` path.

use std::fmt;

use lsiib_core::cavity::CavityAnchor;
use lsiib_core::collective::DetuningChoice;
use lsiib_core::protocol::{GateMode, ProtocolParams};
use lsiib_core::C64;
use toml::{Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Blockade,
    LadderSpectrum,
    Cnot,
    Interlink,
    Cavity,
    Sweep,
}

impl ExperimentKind {
    const NAMES: [(&'static str, ExperimentKind); 6] = [
        ("blockade", ExperimentKind::Blockade),
        ("ladder-spectrum", ExperimentKind::LadderSpectrum),
        ("cnot", ExperimentKind::Cnot),
        ("interlink", ExperimentKind::Interlink),
        ("cavity", ExperimentKind::Cavity),
        ("sweep", ExperimentKind::Sweep),
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(_, k)| *k == self).map(|(n, _)| *n).unwrap_or("?")
    }
}

/// Time unit of trajectory files and summary lines. Reports carry both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitReport {
    Gamma,
    Si,
}

/// How the two single-photon detunings are given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Detunings {
    /// Common δ, with Δ chosen by `two_photon`.
    Common { delta: f64, two_photon: DetuningChoice },
    /// Explicit leg detunings δ₁ and δ₂.
    Legs { delta1: f64, delta2: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderConfig {
    pub n_atoms: u64,
    pub omega1: f64,
    pub omega2: f64,
    pub detunings: Detunings,
    pub truncation: u32,
    pub trailing_g: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig {
    /// Γ⁻¹
    pub duration: f64,
    /// Γ⁻¹
    pub sample_step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CnotInputs {
    pub alpha: C64,
    pub beta: C64,
    pub xi: C64,
    pub eta: C64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterlinkInputs {
    pub alpha: C64,
    pub beta: C64,
    pub ancilla: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityConfig {
    pub length: f64,
    pub mode_diameter: f64,
    pub transmittivity: f64,
    pub n_atoms: u64,
    pub anchor: CavityAnchor,
    /// Optional first-principles cross-check: (wavelength m, dipole C·m).
    pub dipole_check: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepTarget {
    Blockade,
    Cavity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub target: SweepTarget,
    /// `section.key` of the swept quantity.
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputConfig {
    pub directory: Option<String>,
    pub trajectory: String,
    pub report: String,
    pub sweep: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub mode: GateMode,
    pub units: UnitReport,
    pub ladder: Option<LadderConfig>,
    pub simulation: Option<SimulationConfig>,
    pub protocol: Option<ProtocolParams>,
    pub cnot: Option<CnotInputs>,
    pub interlink: Option<InterlinkInputs>,
    pub cavity: Option<CavityConfig>,
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every problem found in a configuration document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<ConfigIssue>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

impl ConfigErrors {
    pub fn mentions(&self, path: &str) -> bool {
        self.0.iter().any(|i| i.path.split(", ").any(|p| p == path))
    }
}

const SWEEP_BLOCKADE: [&str; 5] = ["ladder.n_atoms", "ladder.omega1", "ladder.omega2", "ladder.delta", "ladder.two_photon"];
const SWEEP_CAVITY: [&str; 4] = ["cavity.length", "cavity.mode_diameter", "cavity.transmittivity", "cavity.n_atoms"];

struct Issues(Vec<ConfigIssue>);

impl Issues {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigIssue { path: path.into(), message: message.into() });
    }
}

/// One section of the document; tracks which keys were read.
struct Section<'a> {
    name: &'static str,
    table: &'a Table,
    allowed: &'static [&'static str],
}

impl<'a> Section<'a> {
    fn path(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn check_unknown(&self, issues: &mut Issues) {
        for key in self.table.keys() {
            if !self.allowed.contains(&key.as_str()) {
                issues.push(self.path(key), format!("unknown key (allowed: {})", self.allowed.join(", ")));
            }
        }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.table.get(key)
    }

    fn f64_opt(&self, key: &str, issues: &mut Issues) -> Option<f64> {
        let v = self.get(key)?;
        match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                issues.push(self.path(key), format!("expected a number, found {}", v.type_str()));
                None
            }
        }
    }

    fn f64_req(&self, key: &str, issues: &mut Issues) -> Option<f64> {
        if self.get(key).is_none() {
            issues.push(self.path(key), "missing required key");
            return None;
        }
        self.f64_opt(key, issues)
    }

    /// A required number satisfying `ok`, described by `rule`.
    fn f64_where(&self, key: &str, rule: &str, ok: impl Fn(f64) -> bool, issues: &mut Issues) -> Option<f64> {
        let x = self.f64_req(key, issues)?;
        if x.is_finite() && ok(x) {
            Some(x)
        } else {
            issues.push(self.path(key), format!("{x} is out of range: {rule}"));
            None
        }
    }

    fn positive(&self, key: &str, issues: &mut Issues) -> Option<f64> {
        self.f64_where(key, "must be > 0", |x| x > 0.0, issues)
    }

    fn non_negative(&self, key: &str, issues: &mut Issues) -> Option<f64> {
        self.f64_where(key, "must be ≥ 0", |x| x >= 0.0, issues)
    }

    fn nonzero(&self, key: &str, issues: &mut Issues) -> Option<f64> {
        self.f64_where(key, "must be nonzero", |x| x != 0.0, issues)
    }

    fn u64_req(&self, key: &str, min: u64, issues: &mut Issues) -> Option<u64> {
        match self.get(key) {
            None => {
                issues.push(self.path(key), "missing required key");
                None
            }
            Some(Value::Integer(i)) if *i >= min as i64 => Some(*i as u64),
            Some(Value::Integer(i)) => {
                issues.push(self.path(key), format!("{i} is out of range: must be ≥ {min}"));
                None
            }
            Some(v) => {
                issues.push(self.path(key), format!("expected an integer, found {}", v.type_str()));
                None
            }
        }
    }

    fn bool_opt(&self, key: &str, default: bool, issues: &mut Issues) -> bool {
        match self.get(key) {
            None => default,
            Some(Value::Boolean(b)) => *b,
            Some(v) => {
                issues.push(self.path(key), format!("expected a boolean, found {}", v.type_str()));
                default
            }
        }
    }

    fn str_opt(&self, key: &str, issues: &mut Issues) -> Option<&'a str> {
        match self.get(key)? {
            Value::String(s) => Some(s.as_str()),
            v => {
                issues.push(self.path(key), format!("expected a string, found {}", v.type_str()));
                None
            }
        }
    }

    fn choice<T: Copy>(&self, key: &str, options: &[(&str, T)], default: Option<T>, issues: &mut Issues) -> Option<T> {
        let Some(s) = self.str_opt(key, issues) else {
            if self.get(key).is_none() {
                if default.is_none() {
                    issues.push(self.path(key), "missing required key");
                }
                return default;
            }
            return None;
        };
        match options.iter().find(|(n, _)| *n == s) {
            Some((_, v)) => Some(*v),
            None => {
                let names: Vec<_> = options.iter().map(|(n, _)| *n).collect();
                issues.push(self.path(key), format!("unknown value `{s}` (expected one of {})", names.join(", ")));
                None
            }
        }
    }

    /// A complex amplitude: a number or a `[re, im]` pair.
    fn complex(&self, key: &str, issues: &mut Issues) -> Option<C64> {
        let v = match self.get(key) {
            None => {
                issues.push(self.path(key), "missing required key");
                return None;
            }
            Some(v) => v,
        };
        let num = |v: &Value| match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        let z = match v {
            Value::Array(a) if a.len() == 2 => match (num(&a[0]), num(&a[1])) {
                (Some(re), Some(im)) => Some(C64::new(re, im)),
                _ => None,
            },
            other => num(other).map(|re| C64::new(re, 0.0)),
        };
        match z {
            Some(z) if z.is_finite() => Some(z),
            _ => {
                issues.push(self.path(key), "expected a number or a [re, im] pair");
                None
            }
        }
    }
}

const SECTIONS: [&str; 10] =
    ["experiment", "ladder", "simulation", "protocol", "cnot", "interlink", "cavity", "sweep", "output", "anchor"];

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigErrors> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| {
        ConfigErrors(vec![ConfigIssue { path: "<document>".into(), message: e.message().trim().to_string() }])
    })?;
    let mut issues = Issues(Vec::new());
    let empty = Table::new();
    let section = |name: &'static str, allowed: &'static [&'static str], issues: &mut Issues| -> Option<Section<'_>> {
        let table = match doc.get(name) {
            None => return None,
            Some(Value::Table(t)) => t,
            Some(_) => {
                issues.push(name, "expected a section");
                &empty
            }
        };
        let s = Section { name, table, allowed };
        s.check_unknown(issues);
        Some(s)
    };
    for key in doc.keys() {
        if !SECTIONS.contains(&key.as_str()) {
            issues.push(key.clone(), format!("unknown section (allowed: {})", SECTIONS.join(", ")));
        }
    }

    let experiment = section("experiment", &["kind", "mode", "unit_report"], &mut issues);
    let (kind, mode, units) = match &experiment {
        None => {
            issues.push("experiment", "missing required section");
            (None, GateMode::Ideal, UnitReport::Gamma)
        }
        Some(s) => (
            s.choice("kind", &ExperimentKind::NAMES, None, &mut issues),
            s.choice(
                "mode",
                &[("ideal", GateMode::Ideal), ("chain", GateMode::Chain), ("strict", GateMode::Strict)],
                Some(GateMode::Ideal),
                &mut issues,
            )
            .unwrap_or(GateMode::Ideal),
            s.choice("unit_report", &[("gamma-units", UnitReport::Gamma), ("si", UnitReport::Si)], Some(UnitReport::Gamma), &mut issues)
                .unwrap_or(UnitReport::Gamma),
        ),
    };

    let ladder = section(
        "ladder",
        &["n_atoms", "omega1", "omega2", "delta", "delta1", "delta2", "two_photon", "truncation", "trailing_g"],
        &mut issues,
    )
    .map(|s| parse_ladder(&s, &mut issues));
    let simulation = section("simulation", &["duration", "sample_step"], &mut issues).map(|s| {
        let duration = s.positive("duration", &mut issues);
        let sample_step = s.positive("sample_step", &mut issues);
        Some(SimulationConfig { duration: duration?, sample_step: sample_step? })
    });
    let protocol = section(
        "protocol",
        &[
            "n_atoms", "delta", "omega1", "omega2", "omega1_prime", "omega2_prime", "omega_i", "omega_ii", "g_c", "omega_1c",
            "omega_2c", "g_f", "flight_time",
        ],
        &mut issues,
    )
    .map(|s| parse_protocol(&s, &mut issues));
    let cnot = section("cnot", &["alpha", "beta", "xi", "eta"], &mut issues).map(|s| {
        let [alpha, beta, xi, eta] = ["alpha", "beta", "xi", "eta"].map(|k| s.complex(k, &mut issues));
        let inputs = CnotInputs { alpha: alpha?, beta: beta?, xi: xi?, eta: eta? };
        check_qubit(&s, ("alpha", "beta"), inputs.alpha, inputs.beta, &mut issues);
        check_qubit(&s, ("xi", "eta"), inputs.xi, inputs.eta, &mut issues);
        Some(inputs)
    });
    let interlink = section("interlink", &["alpha", "beta", "ancilla"], &mut issues).map(|s| {
        let alpha = s.complex("alpha", &mut issues);
        let beta = s.complex("beta", &mut issues);
        let ancilla = s.bool_opt("ancilla", false, &mut issues);
        let inputs = InterlinkInputs { alpha: alpha?, beta: beta?, ancilla };
        check_qubit(&s, ("alpha", "beta"), inputs.alpha, inputs.beta, &mut issues);
        Some(inputs)
    });
    let anchor = section("anchor", &["g0", "length", "mode_diameter"], &mut issues).map(|s| {
        let g0 = s.positive("g0", &mut issues);
        let length = s.positive("length", &mut issues);
        let mode_diameter = s.positive("mode_diameter", &mut issues);
        Some(CavityAnchor { g0: g0?, length: length?, mode_diameter: mode_diameter? })
    });
    let cavity = section(
        "cavity",
        &["length", "mode_diameter", "transmittivity", "n_atoms", "wavelength", "dipole_moment"],
        &mut issues,
    )
    .map(|s| {
        let length = s.positive("length", &mut issues);
        let mode_diameter = s.positive("mode_diameter", &mut issues);
        let transmittivity = s.f64_where("transmittivity", "must lie in (0, 1)", |t| t > 0.0 && t < 1.0, &mut issues);
        let n_atoms = s.u64_req("n_atoms", 1, &mut issues);
        let dipole_check = match (s.get("wavelength").is_some(), s.get("dipole_moment").is_some()) {
            (false, false) => None,
            (true, true) => Some((s.positive("wavelength", &mut issues)?, s.positive("dipole_moment", &mut issues)?)),
            _ => {
                issues.push("cavity.wavelength, cavity.dipole_moment", "give both or neither");
                None
            }
        };
        Some(CavityConfig {
            length: length?,
            mode_diameter: mode_diameter?,
            transmittivity: transmittivity?,
            n_atoms: n_atoms?,
            anchor: CavityAnchor::default(),
            dipole_check,
        })
    });
    let sweep = section("sweep", &["target", "parameter", "start", "stop", "points", "spacing"], &mut issues)
        .map(|s| parse_sweep(&s, &mut issues));
    let output = section("output", &["directory", "trajectory", "report", "sweep"], &mut issues);
    let output = {
        let name = |key: &str, default: &str, issues: &mut Issues| -> String {
            match output.as_ref().and_then(|s| s.str_opt(key, issues)) {
                Some(v) if !v.is_empty() => v.to_string(),
                Some(_) => {
                    issues.push(format!("output.{key}"), "must not be empty");
                    default.to_string()
                }
                None => default.to_string(),
            }
        };
        OutputConfig {
            directory: output.as_ref().and_then(|s| s.str_opt("directory", &mut issues)).map(str::to_string),
            trajectory: name("trajectory", "trajectory.csv", &mut issues),
            report: name("report", "report.json", &mut issues),
            sweep: name("sweep", "sweep.csv", &mut issues),
        }
    };

    // anchor applies to the cavity block
    let cavity = match (cavity, anchor) {
        (Some(Some(mut c)), Some(Some(a))) => {
            c.anchor = a;
            Some(Some(c))
        }
        (Some(_), Some(None)) => Some(None),
        (c, _) => c,
    };

    if let Some(kind) = kind {
        let need = |present: bool, name: &str, issues: &mut Issues| {
            if !present {
                issues.push(name.to_string(), format!("required for the `{}` experiment", kind.name()));
            }
        };
        match kind {
            ExperimentKind::Blockade => {
                need(ladder.is_some(), "ladder", &mut issues);
                need(simulation.is_some(), "simulation", &mut issues);
            }
            ExperimentKind::LadderSpectrum => need(ladder.is_some(), "ladder", &mut issues),
            ExperimentKind::Cnot => {
                need(protocol.is_some(), "protocol", &mut issues);
                need(cnot.is_some(), "cnot", &mut issues);
            }
            ExperimentKind::Interlink => {
                need(protocol.is_some(), "protocol", &mut issues);
                need(interlink.is_some(), "interlink", &mut issues);
            }
            ExperimentKind::Cavity => need(cavity.is_some(), "cavity", &mut issues),
            ExperimentKind::Sweep => {
                need(sweep.is_some(), "sweep", &mut issues);
                if let Some(Some(sw)) = &sweep {
                    match sw.target {
                        SweepTarget::Blockade => {
                            need(ladder.is_some(), "ladder", &mut issues);
                            need(simulation.is_some(), "simulation", &mut issues);
                            if sw.parameter == "ladder.two_photon" {
                                if let Some(Some(LadderConfig { detunings: Detunings::Legs { .. }, .. })) = &ladder {
                                    issues.push("sweep.parameter", "ladder.two_photon needs a common `ladder.delta`");
                                }
                            }
                            if sw.parameter == "ladder.delta" {
                                if let Some(Some(LadderConfig { detunings: Detunings::Legs { .. }, .. })) = &ladder {
                                    issues.push("sweep.parameter", "ladder.delta needs a common `ladder.delta`");
                                }
                            }
                        }
                        SweepTarget::Cavity => need(cavity.is_some(), "cavity", &mut issues),
                    }
                }
            }
        }
    }

    if !issues.0.is_empty() {
        return Err(ConfigErrors(issues.0));
    }
    Ok(ExperimentConfig {
        experiment: kind.expect("kind is reported when missing"),
        mode,
        units,
        ladder: ladder.flatten(),
        simulation: simulation.flatten(),
        protocol: protocol.flatten(),
        cnot: cnot.flatten(),
        interlink: interlink.flatten(),
        cavity: cavity.flatten(),
        sweep: sweep.flatten(),
        output,
    })
}

fn check_qubit(s: &Section<'_>, keys: (&str, &str), a: C64, b: C64, issues: &mut Issues) {
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > 1e-10 {
        issues.push(format!("{}, {}", s.path(keys.0), s.path(keys.1)), format!("|{}|² + |{}|² = {n}, expected 1", keys.0, keys.1));
    }
}

fn parse_ladder(s: &Section<'_>, issues: &mut Issues) -> Option<LadderConfig> {
    let n_atoms = s.u64_req("n_atoms", 1, issues);
    let omega1 = s.non_negative("omega1", issues);
    let omega2 = s.non_negative("omega2", issues);
    let truncation = s.u64_req("truncation", 1, issues);
    let trailing_g = s.bool_opt("trailing_g", false, issues);
    let has = |k| s.get(k).is_some();
    let detunings = match (has("delta"), has("delta1") || has("delta2")) {
        (true, false) => {
            let delta = s.nonzero("delta", issues);
            let two_photon = match s.get("two_photon") {
                None => {
                    issues.push(s.path("two_photon"), "missing required key (\"resonant\", \"first-order\" or a number)");
                    None
                }
                Some(Value::String(_)) => s.choice(
                    "two_photon",
                    &[("resonant", DetuningChoice::Resonant), ("first-order", DetuningChoice::FirstOrder)],
                    None,
                    issues,
                ),
                Some(_) => s.f64_opt("two_photon", issues).map(DetuningChoice::Explicit),
            };
            Some(Detunings::Common { delta: delta?, two_photon: two_photon? })
        }
        (false, true) => {
            if has("two_photon") {
                issues.push(s.path("two_photon"), "not allowed with explicit delta1/delta2");
            }
            let delta1 = s.nonzero("delta1", issues);
            let delta2 = s.nonzero("delta2", issues);
            Some(Detunings::Legs { delta1: delta1?, delta2: delta2? })
        }
        (true, true) => {
            issues.push("ladder.delta, ladder.delta1", "give either delta or delta1/delta2, not both");
            None
        }
        (false, false) => {
            issues.push(s.path("delta"), "missing required key (or delta1/delta2)");
            None
        }
    };
    if let (Some(t), Some(n)) = (truncation, n_atoms) {
        if t > n {
            issues.push("ladder.truncation, ladder.n_atoms", format!("truncation {t} exceeds n_atoms {n}"));
            return None;
        }
    }
    Some(LadderConfig {
        n_atoms: n_atoms?,
        omega1: omega1?,
        omega2: omega2?,
        detunings: detunings?,
        truncation: u32::try_from(truncation?).ok()?,
        trailing_g,
    })
}

fn parse_protocol(s: &Section<'_>, issues: &mut Issues) -> Option<ProtocolParams> {
    let n_atoms = s.u64_req("n_atoms", 2, issues);
    let delta = s.nonzero("delta", issues);
    let [omega1, omega2, omega1_prime, omega2_prime, omega_i, omega_ii, g_c, omega_1c, omega_2c, g_f] = [
        "omega1", "omega2", "omega1_prime", "omega2_prime", "omega_i", "omega_ii", "g_c", "omega_1c", "omega_2c", "g_f",
    ]
    .map(|k| s.positive(k, issues));
    let flight_time = s.non_negative("flight_time", issues);
    Some(ProtocolParams {
        n_atoms: n_atoms?,
        delta: delta?,
        omega1: omega1?,
        omega2: omega2?,
        omega1_prime: omega1_prime?,
        omega2_prime: omega2_prime?,
        omega_i: omega_i?,
        omega_ii: omega_ii?,
        g_c: g_c?,
        omega_1c: omega_1c?,
        omega_2c: omega_2c?,
        g_f: g_f?,
        flight_time: flight_time?,
    })
}

fn parse_sweep(s: &Section<'_>, issues: &mut Issues) -> Option<SweepConfig> {
    let target =
        s.choice("target", &[("blockade", SweepTarget::Blockade), ("cavity", SweepTarget::Cavity)], None, issues);
    let parameter = match s.str_opt("parameter", issues) {
        Some(p) => Some(p.to_string()),
        None => {
            if s.get("parameter").is_none() {
                issues.push(s.path("parameter"), "missing required key");
            }
            None
        }
    };
    let start = s.f64_req("start", issues);
    let stop = s.f64_req("stop", issues);
    let points = s.u64_req("points", 1, issues);
    let spacing = s.choice("spacing", &[("linear", Spacing::Linear), ("log", Spacing::Log)], Some(Spacing::Linear), issues);
    if let (Some(target), Some(p)) = (target, &parameter) {
        let allowed: &[&str] = match target {
            SweepTarget::Blockade => &SWEEP_BLOCKADE,
            SweepTarget::Cavity => &SWEEP_CAVITY,
        };
        if !allowed.contains(&p.as_str()) {
            issues.push(s.path("parameter"), format!("cannot sweep `{p}` (allowed: {})", allowed.join(", ")));
        }
    }
    if spacing == Some(Spacing::Log) {
        if let (Some(a), Some(b)) = (start, stop) {
            if !(a > 0.0 && b > 0.0) {
                issues.push("sweep.start, sweep.stop", "log spacing needs positive endpoints");
            }
        }
    }
    if points.is_some_and(|n| n > 100_000) {
        issues.push(s.path("points"), "at most 100000 points");
    }
    Some(SweepConfig {
        target: target?,
        parameter: parameter?,
        start: start?,
        stop: stop?,
        points: points? as usize,
        spacing: spacing?,
    })
}

impl SweepConfig {
    /// Grid values in index order.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|k| {
                let f = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + f * (self.stop.ln() - self.start.ln())).exp(),
                }
            })
            .collect()
    }
}
