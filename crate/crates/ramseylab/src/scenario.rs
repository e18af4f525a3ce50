//! Scenario files.
//!
//! A scenario is a list of `path.to.key = value` lines. Blank lines are
//! ignored and `#` starts a comment that runs to the end of the line. The
//! top-level `kind` key selects the experiment; every other key has at
//! least one section prefix. Numeric values accept plain decimals and
//! products or quotients of decimals, `pi` and `sqrt(x)`, for example
//! `pi/2/sqrt(2)` or `-0.5*pi`.
//!
//! Unknown keys, missing required keys, malformed values and out-of-range
//! parameters are all reported, and the one on the earliest line wins.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::path::PathBuf;

use num_complex::Complex64 as C64;
use ramsey_core::fock::{AtomAmplitudes, Level, ModeState, TwoModeState};
use ramsey_core::jc::GapConfig;
use ramsey_core::ramsey::{uniform_grid, ScanVariable, SequenceConfig};

use crate::error::{LabError, LabResult};

/// Experiment families understood by the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    FringeScan,
    TwoAtom,
    Prepare2002,
    Prepare303,
    Transfer,
    Decay,
    DispersiveCat,
    BeamSplitter,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::FringeScan,
        Kind::TwoAtom,
        Kind::Prepare2002,
        Kind::Prepare303,
        Kind::Transfer,
        Kind::Decay,
        Kind::DispersiveCat,
        Kind::BeamSplitter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::FringeScan => "fringe-scan",
            Kind::TwoAtom => "two-atom",
            Kind::Prepare2002 => "prepare-20-02",
            Kind::Prepare303 => "prepare-303",
            Kind::Transfer => "transfer",
            Kind::Decay => "decay",
            Kind::DispersiveCat => "dispersive-cat",
            Kind::BeamSplitter => "beamsplitter",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Initial two-mode field.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    Fock {
        n: usize,
        mu: usize,
    },
    /// `|alpha> (x) |alpha e^{i theta}>`.
    Coherent {
        alpha: f64,
        theta: f64,
    },
    /// `(|0> + alpha|1>) (x) (|0> + alpha e^{i theta}|1>)`, normalized.
    ZeroOne {
        alpha: f64,
        theta: f64,
    },
    /// `-(i/sqrt2)(|1,0> + |0,1>)`.
    EntangledBell,
    /// Explicit `(n, mu, amplitude)` list; normalized when built.
    Custom(Vec<(usize, usize, C64)>),
}

impl FieldSpec {
    /// Truncation that leaves room for two photons to be added per mode.
    pub fn default_dims(&self) -> (usize, usize) {
        match self {
            FieldSpec::Fock { n, mu } => (n + 3, mu + 3),
            FieldSpec::Coherent { alpha, .. } => {
                let d = 30usize.max((alpha * alpha + 12.0 * alpha + 12.0).ceil() as usize);
                (d, d)
            }
            FieldSpec::ZeroOne { .. } | FieldSpec::EntangledBell => (4, 4),
            FieldSpec::Custom(list) => {
                let n = list.iter().map(|c| c.0).max().unwrap_or(0);
                let mu = list.iter().map(|c| c.1).max().unwrap_or(0);
                (n + 3, mu + 3)
            }
        }
    }

    /// Largest total photon number present.
    pub fn max_photons(&self) -> usize {
        match self {
            FieldSpec::Fock { n, mu } => n + mu,
            FieldSpec::Custom(list) => list.iter().map(|c| c.0 + c.1).max().unwrap_or(0),
            FieldSpec::EntangledBell => 1,
            FieldSpec::ZeroOne { .. } => 2,
            FieldSpec::Coherent { .. } => usize::MAX,
        }
    }

    pub fn build(&self, dims: (usize, usize)) -> ramsey_core::Result<TwoModeState> {
        match self {
            FieldSpec::Fock { n, mu } => TwoModeState::fock(*n, *mu, dims),
            FieldSpec::Coherent { alpha, theta } => {
                let (m1, _) = ModeState::coherent(C64::new(*alpha, 0.0), dims.0)?;
                let (m2, _) = ModeState::coherent(C64::from_polar(*alpha, *theta), dims.1)?;
                Ok(TwoModeState::product(&m1, &m2))
            }
            FieldSpec::ZeroOne { alpha, theta } => {
                let m1 = ModeState::zero_one(C64::new(*alpha, 0.0), dims.0)?;
                let m2 = ModeState::zero_one(C64::from_polar(*alpha, *theta), dims.1)?;
                Ok(TwoModeState::product(&m1, &m2))
            }
            FieldSpec::EntangledBell => ramsey_core::decoherence::bell_field(dims),
            FieldSpec::Custom(list) => {
                let raw = TwoModeState::from_components(dims, list)?;
                Ok(raw.normalized()?.1)
            }
        }
    }
}

/// Sampling grid over one scan variable; `points` samples on `[start, stop)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl ScanSpec {
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.start, self.stop, self.points)
    }
}

/// One atom of a multi-atom experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomSpec {
    pub input: Level,
    pub detect: Level,
    pub seq: SequenceConfig,
}

/// Measurement basis for the dispersive experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectBasis {
    /// `|g>`, `|e>`.
    Energy,
    /// `(|g> +- |e>)/sqrt2`.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Experiment {
    FringeScan {
        field: FieldSpec,
        dims: (usize, usize),
        input: Level,
        detect: Level,
        seq: SequenceConfig,
        variable: ScanVariable,
        scan: ScanSpec,
    },
    TwoAtom {
        field: FieldSpec,
        dims: (usize, usize),
        atoms: [AtomSpec; 2],
        scan: ScanSpec,
    },
    Prepare2002 {
        areas: (f64, f64),
        gaps: [GapConfig; 2],
    },
    Prepare303 {
        areas: (f64, f64),
        gaps: [GapConfig; 2],
        third: (f64, f64),
        third_gap: GapConfig,
    },
    Transfer {
        field: FieldSpec,
        dims: (usize, usize),
        first_area1: f64,
        second: (f64, f64),
        scan: ScanSpec,
    },
    Decay {
        kappa: (f64, f64),
        dims: (usize, usize),
        steps: Option<usize>,
        scan: ScanSpec,
    },
    DispersiveCat {
        alpha: C64,
        beta: C64,
        g: f64,
        detuning: f64,
        shifts: (f64, f64),
        input: AtomAmplitudes,
        basis: DetectBasis,
        dims: (usize, usize),
    },
    BeamSplitter {
        field: FieldSpec,
        dims: (usize, usize),
        reflectivity: f64,
        phase: f64,
    },
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub kind: Kind,
    pub experiment: Experiment,
    pub output: Option<PathBuf>,
    /// Normalized `key = value` lines in file order.
    pub echo: Vec<String>,
}

struct Entry {
    value: String,
    line: usize,
}

const MISSING_LINE: usize = usize::MAX;

/// Key-value document with usage tracking and collected diagnostics.
struct Doc {
    entries: BTreeMap<String, Entry>,
    used: RefCell<BTreeSet<String>>,
    diags: RefCell<Vec<(usize, String)>>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key.split('.').all(|seg| {
            !seg.is_empty()
                && seg
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        })
}

impl Doc {
    fn parse(text: &str) -> (Self, Vec<String>) {
        let mut doc = Doc {
            entries: BTreeMap::new(),
            used: RefCell::default(),
            diags: RefCell::default(),
        };
        let mut echo = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                doc.diag(line, format!("expected `key = value` (line {line})"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if !valid_key(key) || (key != "kind" && !key.contains('.')) {
                doc.diag(line, format!("malformed key `{key}` (line {line})"));
                continue;
            }
            if value.is_empty() {
                doc.diag(line, format!("{key} has no value (line {line})"));
                continue;
            }
            if let Some(prev) = doc.entries.get(key) {
                let first = prev.line;
                doc.diag(
                    line,
                    format!("duplicate key {key} (line {line}, first set on line {first})"),
                );
                continue;
            }
            echo.push(format!("{key} = {value}"));
            doc.entries.insert(
                key.to_string(),
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
        }
        (doc, echo)
    }

    fn diag(&self, line: usize, msg: String) {
        self.diags.borrow_mut().push((line, msg));
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.used.borrow_mut().insert(key.to_string());
        self.entries.get(key)
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn num(&self, key: &str, default: Option<f64>) -> f64 {
        match self.get(key) {
            None => {
                if default.is_none() {
                    self.diag(MISSING_LINE, format!("missing required key {key}"));
                }
                default.unwrap_or(0.0)
            }
            Some(e) => match eval_number(&e.value) {
                Some(v) => v,
                None => {
                    self.diag(
                        e.line,
                        format!(
                            "{key}: expected a finite number, got `{}` (line {})",
                            e.value, e.line
                        ),
                    );
                    default.unwrap_or(0.0)
                }
            },
        }
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(MISSING_LINE, |e| e.line)
    }

    fn check(&self, key: &str, ok: bool, rule: &str) {
        if !ok {
            let line = self.line_of(key);
            self.diag(line, format!("{key} must be {rule} (line {line})"));
        }
    }

    fn nonneg(&self, key: &str, default: f64) -> f64 {
        let v = self.num(key, Some(default));
        self.check(key, v >= 0.0, "≥ 0");
        v
    }

    fn count(&self, key: &str, default: usize, min: usize) -> usize {
        match self.get(key) {
            None => default,
            Some(e) => match e.value.parse::<usize>() {
                Ok(v) if v >= min => v,
                Ok(_) => {
                    self.diag(e.line, format!("{key} must be ≥ {min} (line {})", e.line));
                    default
                }
                Err(_) => {
                    self.diag(
                        e.line,
                        format!(
                            "{key}: expected a non-negative integer, got `{}` (line {})",
                            e.value, e.line
                        ),
                    );
                    default
                }
            },
        }
    }

    fn word<'a>(&self, key: &str, default: &'a str, allowed: &[&'a str]) -> &'a str {
        match self.get(key) {
            None => default,
            Some(e) => match allowed.iter().find(|a| **a == e.value) {
                Some(a) => a,
                None => {
                    self.diag(
                        e.line,
                        format!(
                            "{key}: `{}` is not one of {} (line {})",
                            e.value,
                            allowed.join(", "),
                            e.line
                        ),
                    );
                    default
                }
            },
        }
    }

    fn level(&self, key: &str, default: Level) -> Level {
        let d = if default == Level::Ground { "g" } else { "e" };
        match self.word(key, d, &["g", "e"]) {
            "g" => Level::Ground,
            _ => Level::Excited,
        }
    }

    /// Reports keys that were never read, then the earliest diagnostic.
    fn finish(self) -> LabResult<()> {
        let used = self.used.borrow();
        for (key, e) in &self.entries {
            if !used.contains(key) {
                self.diag(e.line, format!("unknown key {key} (line {})", e.line));
            }
        }
        let mut diags = self.diags.take();
        diags.sort_by_key(|d| d.0);
        match diags.into_iter().next() {
            Some((_, msg)) => Err(LabError::Scenario(msg)),
            None => Ok(()),
        }
    }
}

fn eval_factor(tok: &str) -> Option<f64> {
    let tok = tok.trim();
    if tok == "pi" {
        return Some(PI);
    }
    if let Some(inner) = tok.strip_prefix("sqrt(").and_then(|t| t.strip_suffix(')')) {
        let v = eval_number(inner)?;
        return (v >= 0.0).then(|| v.sqrt());
    }
    // plain decimals only; `inf`, `nan` and friends are rejected here
    if !tok.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        return None;
    }
    tok.parse::<f64>().ok()
}

/// Evaluates `[-]factor ((*|/) factor)*`.
pub fn eval_number(text: &str) -> Option<f64> {
    let text = text.trim();
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text.strip_prefix('+').unwrap_or(text)),
    };
    let mut acc = 1.0;
    let mut op = '*';
    let mut depth = 0i32;
    let mut start = 0;
    let bytes: Vec<char> = body.chars().collect();
    for i in 0..=bytes.len() {
        let c = bytes.get(i).copied();
        match c {
            Some('(') => depth += 1,
            Some(')') => depth -= 1,
            _ => {}
        }
        let at_op = matches!(c, Some('*') | Some('/')) && depth == 0;
        if at_op || c.is_none() {
            let tok: String = bytes[start..i].iter().collect();
            let v = eval_factor(&tok)?;
            acc = if op == '*' { acc * v } else { acc / v };
            if let Some(next) = c {
                op = next;
            }
            start = i + 1;
        }
    }
    let v = sign * acc;
    (depth == 0 && v.is_finite()).then_some(v)
}

fn parse_custom(doc: &Doc, key: &str) -> Vec<(usize, usize, C64)> {
    let Some(e) = doc.get(key) else {
        doc.diag(MISSING_LINE, format!("missing required key {key}"));
        return Vec::new();
    };
    let mut out = Vec::new();
    for item in e.value.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(',').map(str::trim).collect();
        let parsed = match parts.as_slice() {
            [n, mu, re, im] => match (n.parse(), mu.parse(), eval_number(re), eval_number(im)) {
                (Ok(n), Ok(mu), Some(re), Some(im)) => Some((n, mu, C64::new(re, im))),
                _ => None,
            },
            _ => None,
        };
        match parsed {
            Some(c) => out.push(c),
            None => {
                doc.diag(
                    e.line,
                    format!(
                        "{key}: expected `n, mu, re, im` entries, got `{item}` (line {})",
                        e.line
                    ),
                );
                return Vec::new();
            }
        }
    }
    if out.is_empty() {
        doc.diag(
            e.line,
            format!("{key} must list at least one amplitude (line {})", e.line),
        );
    }
    out
}

fn read_field(doc: &Doc, default: FieldSpec) -> FieldSpec {
    let default_name = match default {
        FieldSpec::Fock { .. } => "fock",
        FieldSpec::Coherent { .. } => "coherent",
        FieldSpec::ZeroOne { .. } => "zero-one",
        FieldSpec::EntangledBell => "entangled-bell",
        FieldSpec::Custom(_) => "custom",
    };
    let name = doc.word(
        "field.type",
        default_name,
        &["fock", "coherent", "zero-one", "entangled-bell", "custom"],
    );
    let explicit = doc.has("field.type");
    match name {
        "fock" => {
            let (n0, mu0) = match (&default, explicit) {
                (FieldSpec::Fock { n, mu }, false) => (*n, *mu),
                _ => (0, 0),
            };
            FieldSpec::Fock {
                n: doc.count("field.n", n0, 0),
                mu: doc.count("field.mu", mu0, 0),
            }
        }
        "coherent" | "zero-one" => {
            let (a0, t0) = match (&default, explicit) {
                (
                    FieldSpec::Coherent { alpha, theta } | FieldSpec::ZeroOne { alpha, theta },
                    false,
                ) => (*alpha, *theta),
                _ => (0.3, 0.0),
            };
            let alpha = doc.nonneg("field.alpha", a0);
            let theta = doc.num("field.theta", Some(t0));
            if name == "coherent" {
                FieldSpec::Coherent { alpha, theta }
            } else {
                FieldSpec::ZeroOne { alpha, theta }
            }
        }
        "entangled-bell" => FieldSpec::EntangledBell,
        _ => FieldSpec::Custom(parse_custom(doc, "field.amplitudes")),
    }
}

fn read_dims(doc: &Doc, default: (usize, usize)) -> (usize, usize) {
    (
        doc.count("truncation.dim1", default.0, 1),
        doc.count("truncation.dim2", default.1, 1),
    )
}

fn read_gap(doc: &Doc, prefix: &str) -> GapConfig {
    GapConfig::new(
        doc.nonneg(&format!("{prefix}gap.t"), 0.0),
        doc.num(&format!("{prefix}gap.phi"), Some(0.0)),
        doc.num(&format!("{prefix}gap.phi_g"), Some(0.0)),
    )
}

fn read_sequence(doc: &Doc, prefix: &str, areas: (f64, f64), detuning: f64) -> SequenceConfig {
    let g1 = doc.nonneg(&format!("{prefix}zone1.g"), 1.0);
    let tau1 = doc.nonneg(&format!("{prefix}zone1.tau"), areas.0);
    let g2 = doc.nonneg(&format!("{prefix}zone2.g"), 1.0);
    let tau2 = doc.nonneg(&format!("{prefix}zone2.tau"), areas.1);
    SequenceConfig::new(g1, tau1, g2, tau2, detuning, read_gap(doc, prefix))
}

fn read_scan(
    doc: &Doc,
    variables: &[&'static str],
    start: f64,
    stop: f64,
    points: usize,
) -> ScanSpec {
    let variable = doc
        .word("scan.variable", variables[0], variables)
        .to_string();
    let scan = ScanSpec {
        variable,
        start: doc.num("scan.start", Some(start)),
        stop: doc.num("scan.stop", Some(stop)),
        points: doc.count("scan.points", points, 2),
    };
    doc.check(
        "scan.stop",
        scan.stop > scan.start,
        "greater than scan.start",
    );
    scan
}

fn read_atom_state(doc: &Doc, key: &str, default: &'static str) -> AtomAmplitudes {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match doc.word(key, default, &["g", "e", "plus", "minus"]) {
        "g" => AtomAmplitudes::ground(),
        "e" => AtomAmplitudes::excited(),
        "plus" => AtomAmplitudes {
            ground: C64::new(h, 0.0),
            excited: C64::new(h, 0.0),
        },
        _ => AtomAmplitudes {
            ground: C64::new(h, 0.0),
            excited: C64::new(-h, 0.0),
        },
    }
}

fn build(doc: &Doc, kind: Kind) -> Experiment {
    match kind {
        Kind::FringeScan => {
            let field = read_field(
                doc,
                FieldSpec::ZeroOne {
                    alpha: 0.3,
                    theta: 0.0,
                },
            );
            let dims = read_dims(doc, field.default_dims());
            let detuning = doc.num("sequence.detuning", Some(0.0));
            let seq = read_sequence(doc, "", (FRAC_PI_2, FRAC_PI_2 / SQRT_2), detuning);
            let scan = read_scan(doc, &["phi", "delta-t", "theta"], 0.0, TAU, 64);
            let variable = match scan.variable.as_str() {
                "phi" => ScanVariable::Phi,
                "delta-t" => ScanVariable::DeltaT,
                _ => ScanVariable::Theta,
            };
            if variable == ScanVariable::DeltaT {
                doc.check(
                    "sequence.detuning",
                    detuning != 0.0,
                    "nonzero for a delta-t scan",
                );
            }
            Experiment::FringeScan {
                field,
                dims,
                input: doc.level("atom.input", Level::Ground),
                detect: doc.level("atom.detect", Level::Excited),
                seq,
                variable,
                scan,
            }
        }
        Kind::TwoAtom => {
            let field = read_field(doc, FieldSpec::Fock { n: 1, mu: 1 });
            let dims = read_dims(doc, field.default_dims());
            let detuning = doc.num("sequence.detuning", Some(0.0));
            let atom = |p: &str| AtomSpec {
                input: doc.level(&format!("{p}input"), Level::Ground),
                detect: doc.level(&format!("{p}detect"), Level::Excited),
                seq: read_sequence(doc, p, (FRAC_PI_4, FRAC_PI_4), detuning),
            };
            let atoms = [atom("atom1."), atom("atom2.")];
            Experiment::TwoAtom {
                field,
                dims,
                atoms,
                scan: read_scan(doc, &["phi"], 0.0, TAU, 64),
            }
        }
        Kind::Prepare2002 | Kind::Prepare303 => {
            let areas = (
                doc.nonneg("prepare.area1", FRAC_PI_4),
                doc.nonneg("prepare.area2", FRAC_PI_2),
            );
            let gaps = [read_gap(doc, "atom1."), read_gap(doc, "atom2.")];
            if kind == Kind::Prepare2002 {
                Experiment::Prepare2002 { areas, gaps }
            } else {
                let third = (doc.nonneg("atom3.area1", PI), doc.nonneg("atom3.area2", PI));
                Experiment::Prepare303 {
                    areas,
                    gaps,
                    third,
                    third_gap: read_gap(doc, "atom3."),
                }
            }
        }
        Kind::Transfer => {
            let field = read_field(doc, FieldSpec::EntangledBell);
            let dims = read_dims(doc, field.default_dims());
            Experiment::Transfer {
                field,
                dims,
                first_area1: doc.nonneg("atom1.area1", FRAC_PI_2),
                second: (
                    doc.nonneg("atom2.area1", FRAC_PI_2),
                    doc.nonneg("atom2.area2", FRAC_PI_2),
                ),
                scan: read_scan(doc, &["area"], 0.0, PI, 32),
            }
        }
        Kind::Decay => {
            let kappa = (
                doc.nonneg("decay.kappa1", 1.0),
                doc.nonneg("decay.kappa2", 1.0),
            );
            let steps = doc
                .has("decay.steps")
                .then(|| doc.count("decay.steps", 1, 1));
            let dims = read_dims(doc, (2, 2));
            doc.check("truncation.dim1", dims.0 >= 2, "≥ 2");
            doc.check("truncation.dim2", dims.1 >= 2, "≥ 2");
            let scan = read_scan(doc, &["t"], 0.0, 2.0, 20);
            doc.check("scan.start", scan.start >= 0.0, "≥ 0");
            Experiment::Decay {
                kappa,
                dims,
                steps,
                scan,
            }
        }
        Kind::DispersiveCat => {
            let alpha = C64::from_polar(
                doc.nonneg("field.alpha", 1.0),
                doc.num("field.alpha_phase", Some(0.0)),
            );
            let beta = C64::from_polar(
                doc.nonneg("field.beta", 1.0),
                doc.num("field.beta_phase", Some(0.0)),
            );
            let g = doc.num("dispersive.g", Some(1.0));
            doc.check("dispersive.g", g > 0.0, "> 0");
            let detuning = doc.num("dispersive.detuning", Some(20.0));
            doc.check("dispersive.detuning", detuning != 0.0, "nonzero");
            let shifts = (
                doc.num("dispersive.shift1", Some(FRAC_PI_2)),
                doc.num("dispersive.shift2", Some(FRAC_PI_2)),
            );
            doc.check(
                "dispersive.shift1",
                shifts.0 * detuning >= 0.0,
                "of the same sign as dispersive.detuning",
            );
            doc.check(
                "dispersive.shift2",
                shifts.1 * detuning >= 0.0,
                "of the same sign as dispersive.detuning",
            );
            let basis = match doc.word("atom.basis", "symmetric", &["symmetric", "energy"]) {
                "energy" => DetectBasis::Energy,
                _ => DetectBasis::Symmetric,
            };
            Experiment::DispersiveCat {
                alpha,
                beta,
                g,
                detuning,
                shifts,
                input: read_atom_state(doc, "atom.input", "plus"),
                basis,
                dims: read_dims(doc, (24, 24)),
            }
        }
        Kind::BeamSplitter => {
            let field = read_field(doc, FieldSpec::Fock { n: 1, mu: 1 });
            let total = field.max_photons();
            let default_dims = if total == usize::MAX {
                field.default_dims()
            } else {
                (total + 1, total + 1)
            };
            let dims = read_dims(doc, default_dims);
            let reflectivity = doc.num("splitter.reflectivity", Some(0.5));
            doc.check(
                "splitter.reflectivity",
                (0.0..=1.0).contains(&reflectivity),
                "in [0, 1]",
            );
            Experiment::BeamSplitter {
                field,
                dims,
                reflectivity,
                phase: doc.num("splitter.phase", Some(0.0)),
            }
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> LabResult<Scenario> {
    let (doc, echo) = Doc::parse(text);
    let kind = match doc.get("kind") {
        None => {
            doc.diag(MISSING_LINE, "missing required key kind".into());
            None
        }
        Some(e) => {
            let k = Kind::from_name(&e.value);
            if k.is_none() {
                let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
                doc.diag(
                    e.line,
                    format!(
                        "kind: `{}` is not one of {} (line {})",
                        e.value,
                        names.join(", "),
                        e.line
                    ),
                );
            }
            k
        }
    };
    let Some(kind) = kind else {
        // without a kind the remaining keys cannot be checked
        let mut diags = doc.diags.take();
        diags.sort_by_key(|d| d.0);
        return Err(LabError::Scenario(diags.remove(0).1));
    };
    let experiment = build(&doc, kind);
    let output = doc.get("output.path").map(|e| PathBuf::from(&e.value));
    doc.finish()?;
    Ok(Scenario {
        kind,
        experiment,
        output,
        echo,
    })
}
