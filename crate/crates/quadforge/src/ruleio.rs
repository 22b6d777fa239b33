//! Rule files and text export.
//!
//! Rules are persisted as canonical JSON: sorted keys, fixed layout, LF
//! newlines, UTF-8, no trailing whitespace, and coordinates/weights stored
//! as shortest round-trip decimal strings so a reloaded file reproduces the
//! original 64-bit values bit for bit. Parsing a canonical file and
//! re-serialising it yields identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::optimizer::SearchReport;
use crate::polyspace::Dim;
use crate::quadrature::QuadratureRule;

/// Identifier of the basis family the loss values in a rule file refer to.
pub const BASIS_TAG: &str = "orthonormal-shifted-legendre/v1";

/// Current rule file schema version.
pub const SCHEMA_VERSION: &str = "1";

/// Tool provenance recorded in every rule file. `created_unix` honours the
/// `SOURCE_DATE_EPOCH` convention so regenerated bundles can be
/// byte-identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub created_unix: u64,
    pub tool: String,
    pub version: String,
}

impl Provenance {
    pub fn current() -> Self {
        let created_unix = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        Provenance {
            created_unix,
            tool: "quadforge".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// In-memory form of a rule file.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleFile {
    pub dimension: Dim,
    pub degree: usize,
    pub loss: f64,
    pub loss_squared: f64,
    pub seed: u64,
    pub rule: QuadratureRule,
    pub provenance: Provenance,
}

impl RuleFile {
    /// Packages the outcome of a converged search.
    pub fn from_search(report: &SearchReport, provenance: Provenance) -> Result<Self> {
        let rule = report
            .rule
            .clone()
            .ok_or_else(|| Error::invalid("search did not converge, no rule to write"))?;
        Ok(RuleFile {
            dimension: report.dim,
            degree: report.p,
            loss: report.final_l,
            loss_squared: report.final_l_squared,
            seed: report.base_seed,
            rule,
            provenance,
        })
    }

    pub fn num_points(&self) -> usize {
        self.rule.num_points()
    }

    /// Canonical serialisation. Keys are emitted in sorted order at every
    /// level; point objects and the provenance object occupy one line each.
    pub fn to_canonical_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"basis\": {},", json_string(BASIS_TAG));
        let _ = writeln!(out, "  \"degree\": {},", self.degree);
        let _ = writeln!(out, "  \"dimension\": {},", self.dimension.size());
        let _ = writeln!(out, "  \"loss\": {},", json_number(self.loss));
        let _ = writeln!(out, "  \"loss_squared\": {},", json_number(self.loss_squared));
        let _ = writeln!(out, "  \"num_points\": {},", self.num_points());
        out.push_str("  \"points\": [\n");
        let q = self.num_points();
        for j in 0..q {
            let point = self.rule.point(j);
            let w = self.rule.weights()[j];
            out.push_str("    {");
            let _ = write!(out, "\"w\": {}", json_string(&decimal(w)));
            let _ = write!(out, ", \"x\": {}", json_string(&decimal(point[0])));
            let _ = write!(out, ", \"y\": {}", json_string(&decimal(point[1])));
            if self.dimension == Dim::Three {
                let _ = write!(out, ", \"z\": {}", json_string(&decimal(point[2])));
            }
            out.push('}');
            out.push_str(if j + 1 < q { ",\n" } else { "\n" });
        }
        out.push_str("  ],\n");
        let _ = writeln!(
            out,
            "  \"provenance\": {{\"created_unix\": {}, \"tool\": {}, \"version\": {}}},",
            self.provenance.created_unix,
            json_string(&self.provenance.tool),
            json_string(&self.provenance.version)
        );
        let _ = writeln!(out, "  \"schema_version\": {},", json_string(SCHEMA_VERSION));
        let _ = writeln!(out, "  \"seed\": {}", self.seed);
        out.push_str("}\n");
        out
    }

    /// Parses and schema-validates a rule file.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::RuleFile(format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| schema_err("top level must be an object"))?;

        const TOP_KEYS: [&str; 10] = [
            "basis",
            "degree",
            "dimension",
            "loss",
            "loss_squared",
            "num_points",
            "points",
            "provenance",
            "schema_version",
            "seed",
        ];
        for key in obj.keys() {
            if !TOP_KEYS.contains(&key.as_str()) {
                return Err(schema_err(format!("unknown key {key:?}")));
            }
        }

        let schema_version = str_field(obj, "schema_version")?;
        if schema_version != SCHEMA_VERSION {
            return Err(schema_err(format!(
                "unsupported schema_version {schema_version:?}"
            )));
        }
        let basis = str_field(obj, "basis")?;
        if basis != BASIS_TAG {
            return Err(schema_err(format!("unsupported basis tag {basis:?}")));
        }
        let dimension = Dim::try_from_usize(u64_field(obj, "dimension")? as usize)
            .map_err(|e| schema_err(e.to_string()))?;
        let degree = u64_field(obj, "degree")? as usize;
        if degree < 1 {
            return Err(schema_err("degree must be at least 1"));
        }
        let loss = f64_field(obj, "loss")?;
        let loss_squared = f64_field(obj, "loss_squared")?;
        let seed = u64_field(obj, "seed")?;
        let num_points = u64_field(obj, "num_points")? as usize;

        let points = obj
            .get("points")
            .and_then(|v| v.as_array())
            .ok_or_else(|| schema_err("points must be an array"))?;
        if points.len() != num_points {
            return Err(schema_err(format!(
                "num_points is {num_points} but the points array holds {}",
                points.len()
            )));
        }
        if num_points == 0 {
            return Err(schema_err("a rule needs at least one point"));
        }

        let d = dimension.size();
        let mut coords = Vec::with_capacity(num_points * d);
        let mut weights = Vec::with_capacity(num_points);
        let expected_keys: &[&str] = if d == 2 { &["w", "x", "y"] } else { &["w", "x", "y", "z"] };
        for (j, entry) in points.iter().enumerate() {
            let point = entry
                .as_object()
                .ok_or_else(|| schema_err(format!("point {j} must be an object")))?;
            if point.len() != expected_keys.len()
                || !expected_keys.iter().all(|k| point.contains_key(*k))
            {
                return Err(schema_err(format!(
                    "point {j} must have exactly the keys {expected_keys:?}"
                )));
            }
            for axis_key in &expected_keys[1..] {
                coords.push(decimal_field(point, axis_key, j)?);
            }
            weights.push(decimal_field(point, "w", j)?);
        }

        let prov = obj
            .get("provenance")
            .and_then(|v| v.as_object())
            .ok_or_else(|| schema_err("provenance must be an object"))?;
        let provenance = Provenance {
            created_unix: u64_field(prov, "created_unix")?,
            tool: str_field(prov, "tool")?.to_string(),
            version: str_field(prov, "version")?.to_string(),
        };

        let rule = QuadratureRule::new(dimension, coords, weights)
            .map_err(|e| schema_err(e.to_string()))?;
        Ok(RuleFile {
            dimension,
            degree,
            loss,
            loss_squared,
            seed,
            rule,
            provenance,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::RuleFile(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_canonical_json())?;
        Ok(())
    }
}

fn schema_err(msg: impl std::fmt::Display) -> Error {
    Error::RuleFile(format!("schema violation: {msg}"))
}

fn str_field<'a>(
    obj: &'a serde_json::Map<String, serde_json::Value>,
    key: &str,
) -> Result<&'a str> {
    obj.get(key)
        .and_then(|v| v.as_str())
        .ok_or_else(|| schema_err(format!("{key} must be a string")))
}

fn u64_field(obj: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<u64> {
    obj.get(key)
        .and_then(|v| v.as_u64())
        .ok_or_else(|| schema_err(format!("{key} must be a non-negative integer")))
}

fn f64_field(obj: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<f64> {
    let v = obj
        .get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| schema_err(format!("{key} must be a number")))?;
    if !v.is_finite() {
        return Err(schema_err(format!("{key} must be finite")));
    }
    Ok(v)
}

fn decimal_field(
    obj: &serde_json::Map<String, serde_json::Value>,
    key: &str,
    point: usize,
) -> Result<f64> {
    let raw = obj.get(key).and_then(|v| v.as_str()).ok_or_else(|| {
        schema_err(format!("point {point}: {key} must be a decimal string"))
    })?;
    let v: f64 = raw
        .parse()
        .map_err(|_| schema_err(format!("point {point}: cannot parse {key}={raw:?}")))?;
    if !v.is_finite() {
        return Err(schema_err(format!("point {point}: {key} must be finite")));
    }
    Ok(v)
}

/// Shortest decimal representation that parses back to the same f64 bits.
fn decimal(v: f64) -> String {
    format!("{v}")
}

fn json_number(v: f64) -> String {
    serde_json::to_string(&v).expect("finite number")
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string")
}

/// CSV export with header `x,y[,z],w` and 17-significant-digit decimals,
/// enough to reproduce every f64 exactly.
pub fn export_csv(rule: &QuadratureRule) -> String {
    let mut out = String::new();
    out.push_str(if rule.dim() == Dim::Two { "x,y,w\n" } else { "x,y,z,w\n" });
    for j in 0..rule.num_points() {
        for c in rule.point(j) {
            let _ = write!(out, "{c:.16e},");
        }
        let _ = writeln!(out, "{:.16e}", rule.weights()[j]);
    }
    out
}

/// Whitespace-separated columns without a header, for direct ingestion by
/// downstream numerical codes.
pub fn export_plain(rule: &QuadratureRule) -> String {
    let mut out = String::new();
    for j in 0..rule.num_points() {
        let mut first = true;
        for c in rule.point(j) {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{c:.16e}");
            first = false;
        }
        let _ = writeln!(out, " {:.16e}", rule.weights()[j]);
    }
    out
}
