//! Structured command output, rendered as JSON or as aligned text.

use std::fmt::{self, Write as _};

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::bounds::LaminationBound;
use crate::mcf::{CommonFunctionWitness, Jgk, WitnessPayload};
use crate::sim::SimulationRun;
use crate::sources::Source;

/// A real number held to six decimals. Serializes as a JSON number with
/// exactly six fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fixed6(i64);

impl Fixed6 {
    pub fn from_f64(x: f64) -> Self {
        Fixed6((x * 1e6).round() as i64)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 1e6
    }

    pub fn micros(self) -> i64 {
        self.0
    }
}

impl From<f64> for Fixed6 {
    fn from(x: f64) -> Self {
        Fixed6::from_f64(x)
    }
}

impl fmt::Display for Fixed6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:06}", abs / 1_000_000, abs % 1_000_000)
    }
}

impl Serialize for Fixed6 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.to_string()).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Fixed6 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        f64::deserialize(deserializer).map(Fixed6::from_f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub kind: String,
    pub users: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
    /// Set when a command converted the input to another model first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converted_from: Option<String>,
}

impl ModelSummary {
    pub fn of(s: &Source) -> Self {
        let mut summary = ModelSummary {
            kind: s.model_name().to_string(),
            users: s.user_count(),
            edges: None,
            field: None,
            dim: None,
            support: None,
            converted_from: None,
        };
        match s {
            Source::Hypergraphical(h) => summary.edges = Some(h.edges().len()),
            Source::FiniteLinear(f) => {
                summary.field = Some(f.field().get());
                summary.dim = Some(f.dim());
            }
            Source::Discrete(d) => summary.support = Some(d.support().len()),
        }
        summary
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WitnessView {
    EdgeSubset {
        edges: Vec<String>,
    },
    SubspaceBasis {
        q: u64,
        /// Basis vectors of the common subspace (columns of `M`).
        columns: Vec<Vec<u64>>,
    },
    SupportLabeling {
        components: usize,
        masses: Vec<Fixed6>,
        /// Smallest realization of each component, 0-based symbols.
        representatives: Vec<Vec<usize>>,
    },
}

impl WitnessView {
    pub fn of(w: &CommonFunctionWitness) -> Self {
        match &w.payload {
            WitnessPayload::Edges(e) => WitnessView::EdgeSubset { edges: e.clone() },
            WitnessPayload::Subspace(m) => WitnessView::SubspaceBasis {
                q: m.field().get(),
                columns: (0..m.cols()).map(|c| m.column(c)).collect(),
            },
            WitnessPayload::Labeling(l) => WitnessView::SupportLabeling {
                components: l.component_count(),
                masses: l.masses.iter().map(|&m| m.into()).collect(),
                representatives: l.representatives.clone(),
            },
        }
    }
}

impl fmt::Display for WitnessView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessView::EdgeSubset { edges } => write!(f, "witness edges: {{{}}}", edges.join(",")),
            WitnessView::SubspaceBasis { columns, .. } if columns.is_empty() => {
                write!(f, "witness basis: {{}} (trivial subspace)")
            }
            WitnessView::SubspaceBasis { columns, .. } => {
                let cols: Vec<String> = columns
                    .iter()
                    .map(|c| {
                        let v: Vec<String> = c.iter().map(u64::to_string).collect();
                        format!("[{}]^T", v.join(","))
                    })
                    .collect();
                write!(f, "witness basis: {}", cols.join(" "))
            }
            WitnessView::SupportLabeling { components, .. } => {
                write!(f, "witness components: {components}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JgkSection {
    pub bits: Fixed6,
    /// `capacity` when `J_GK` is the proven zero-rate capacity, `lower_bound` otherwise.
    pub status: String,
    pub witness: WitnessView,
}

impl JgkSection {
    pub fn of(j: &Jgk) -> Self {
        JgkSection {
            bits: j.bits().into(),
            status: j.status.as_str().to_string(),
            witness: WitnessView::of(&j.witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub bits: Fixed6,
    pub components: usize,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub partition: String,
    /// Exact value as a fraction.
    pub alpha: String,
    pub slope: Option<Fixed6>,
    pub bound_at_zero: Option<Fixed6>,
    pub bound_at_rate: Option<Fixed6>,
    pub vacuous: bool,
}

impl BoundRow {
    pub fn of(b: &LaminationBound, rate: f64) -> Self {
        let finite = |x: Option<f64>| x.filter(|v| v.is_finite()).map(Fixed6::from_f64);
        BoundRow {
            partition: b.partition.to_string(),
            alpha: b.alpha.to_string(),
            slope: finite(b.slope()),
            bound_at_zero: finite(b.bound_at(0.0)),
            bound_at_rate: finite(b.bound_at(rate)),
            vacuous: b.is_vacuous(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsSection {
    /// `partition` or `search`.
    pub mode: String,
    pub rate: Fixed6,
    pub h_g_bits: Fixed6,
    pub rows: Vec<BoundRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub name: String,
    pub expected: Option<Fixed6>,
    pub actual: Option<Fixed6>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySection {
    pub pass: bool,
    pub instances: usize,
    pub instances_passed: usize,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSection {
    pub n: usize,
    pub seed: u64,
    pub agreement: bool,
    pub empirical_rate_bits: Fixed6,
    pub h_g_bits: Fixed6,
    pub tolerance_bits: Fixed6,
    pub within_tolerance: bool,
    pub discussion_bits: u64,
    /// First labels of the agreed key.
    pub key_prefix: Vec<u64>,
}

/// Number of key labels echoed in reports.
pub const KEY_PREFIX_LEN: usize = 16;

impl SimulationSection {
    pub fn of(r: &SimulationRun) -> Self {
        SimulationSection {
            n: r.n,
            seed: r.seed,
            agreement: r.agreement,
            empirical_rate_bits: r.empirical_rate_bits.into(),
            h_g_bits: r.h_g_bits.into(),
            tolerance_bits: r.tolerance_bits.into(),
            within_tolerance: r.within_tolerance,
            discussion_bits: r.discussion_bits,
            key_prefix: r.per_user_keys[0].iter().take(KEY_PREFIX_LEN).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jgk: Option<JgkSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSection>,
}

impl Report {
    pub fn new(command: &str, model: Option<ModelSummary>) -> Self {
        Report {
            command: command.to_string(),
            model,
            jgk: None,
            oracle: None,
            bounds: None,
            verification: None,
            simulation: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(j) = &self.jgk {
            let _ = writeln!(out, "J_GK = {} bits; {}", j.bits, j.witness);
            let status = match j.status.as_str() {
                "capacity" => "C_S(0) = J_GK (proven for this model)",
                _ => "C_S(0) >= J_GK (achievable; conjectured tight)",
            };
            let _ = writeln!(out, "{status}");
        }
        if let Some(m) = &self.model {
            let mut line = format!("model: {}, {} users", m.kind, m.users);
            if let Some(e) = m.edges {
                let _ = write!(line, ", {e} edges");
            }
            if let (Some(q), Some(d)) = (m.field, m.dim) {
                let _ = write!(line, ", GF({q})^{d}");
            }
            if let Some(s) = m.support {
                let _ = write!(line, ", support {s}");
            }
            if let Some(from) = &m.converted_from {
                let _ = write!(line, " (converted from {from})");
            }
            let _ = writeln!(out, "{line}");
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(
                out,
                "oracle J_GK = {} bits; components: {}; support: {}",
                o.bits, o.components, o.support
            );
        }
        if let Some(b) = &self.bounds {
            let _ = writeln!(out, "H(G) = {} bits; rate R = {}; mode: {}", b.h_g_bits, b.rate, b.mode);
            let opt = |x: &Option<Fixed6>, vacuous: bool| match x {
                Some(v) => v.to_string(),
                None if vacuous => "vacuous".to_string(),
                None => "-".to_string(),
            };
            let rows: Vec<[String; 5]> = b
                .rows
                .iter()
                .map(|r| {
                    [
                        r.partition.clone(),
                        r.alpha.clone(),
                        opt(&r.slope, r.vacuous),
                        opt(&r.bound_at_zero, r.vacuous),
                        match (&r.bound_at_rate, r.vacuous) {
                            (Some(v), _) => v.to_string(),
                            (None, true) if b.rate.micros() > 0 => "inf".to_string(),
                            (None, _) => "vacuous".to_string(),
                        },
                    ]
                })
                .collect();
            let header = ["partition", "alpha", "slope", "bound(0)", "bound(R)"].map(String::from);
            write_table(&mut out, &header, &rows);
        }
        if let Some(v) = &self.verification {
            let header = ["instance", "check", "expected", "actual", "result"].map(String::from);
            let opt = |x: &Option<Fixed6>| x.map_or("-".to_string(), |v| v.to_string());
            let rows: Vec<[String; 5]> = v
                .checks
                .iter()
                .map(|c| {
                    let result = match (&c.note, c.pass) {
                        (Some(n), true) => format!("pass ({n})"),
                        (Some(n), false) => format!("FAIL ({n})"),
                        (None, true) => "pass".into(),
                        (None, false) => "FAIL".into(),
                    };
                    [
                        c.instance.clone().unwrap_or_else(|| "-".into()),
                        c.name.clone(),
                        opt(&c.expected),
                        opt(&c.actual),
                        result,
                    ]
                })
                .collect();
            write_table(&mut out, &header, &rows);
            let _ = writeln!(
                out,
                "{}: {}/{} instances passed",
                if v.pass { "PASS" } else { "FAIL" },
                v.instances_passed,
                v.instances
            );
        }
        if let Some(s) = &self.simulation {
            let _ = writeln!(out, "n = {}, seed = {}", s.n, s.seed);
            let _ = writeln!(out, "agreement: {}", s.agreement);
            let _ = writeln!(
                out,
                "empirical rate = {} bits/sample; H(G) = {} bits; tolerance {} ({})",
                s.empirical_rate_bits,
                s.h_g_bits,
                s.tolerance_bits,
                if s.within_tolerance { "within" } else { "OUTSIDE" }
            );
            let _ = writeln!(out, "discussion bits: {}", s.discussion_bits);
            let prefix: Vec<String> = s.key_prefix.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "key prefix: {}", prefix.join(" "));
        }
        out
    }
}

fn write_table<const N: usize>(out: &mut String, header: &[String; N], rows: &[[String; N]]) {
    let mut widths = header.each_ref().map(|h| h.chars().count());
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    for r in std::iter::once(header).chain(rows) {
        let cells: Vec<String> =
            r.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
}
