//! Reading graphs, phases, gauges, interaction matrices and z values.

use std::fs;
use std::path::Path;

use cvcluster::graph::parse_graph;
use cvcluster::{AdjacencyMatrix64, ComplexMatrix64, Gauge, InteractionMatrix64, PhaseVector64, Tolerances64};
use serde_json::Value;

use crate::error::CliError;
use crate::json;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn looks_like_json(text: &str) -> bool {
    matches!(text.trim_start().chars().next(), Some('{' | '['))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::from(e).context(&path.display().to_string()))
}

/// A bare matrix object, or the matrix stored under `key` in a report.
fn matrix_or_field(value: &Value, key: &str) -> Result<ComplexMatrix64, CliError> {
    match value.get(key) {
        Some(inner) if value.get("rows").is_none() => json::parse_matrix(inner),
        _ => json::parse_matrix(value),
    }
}

pub fn adjacency_from_matrix(m: &ComplexMatrix64, tol: &Tolerances64) -> Result<AdjacencyMatrix64, CliError> {
    if !m.is_square() {
        return Err(CliError::parse(format!("adjacency matrix must be square, found {}x{}", m.rows(), m.cols())));
    }
    if m.max_imag() != 0.0 {
        return Err(CliError::parse("adjacency matrix must be real"));
    }
    Ok(AdjacencyMatrix64::new(m.rows(), m.real_parts(), tol.input_symmetry)?)
}

/// Graph text format, or JSON holding an adjacency matrix (bare or under `"adjacency"`).
pub fn read_graph(path: &Path, tol: &Tolerances64) -> Result<AdjacencyMatrix64, CliError> {
    let text = read_text(path)?;
    let label = path.display().to_string();
    if looks_like_json(&text) {
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::from(e).context(&label))?;
        let m = matrix_or_field(&value, "adjacency").map_err(|e| e.context(&label))?;
        return adjacency_from_matrix(&m, tol).map_err(|e| e.context(&label));
    }
    parse_graph(&text).map_err(|e| CliError::from(e).context(&label))
}

fn phases_from_value(value: &Value) -> Result<Vec<f64>, CliError> {
    let list = match value {
        Value::Array(_) => value,
        Value::Object(obj) => obj.get("phases").ok_or_else(|| CliError::parse("expected a \"phases\" entry"))?,
        _ => return Err(CliError::parse("phases must be a JSON array")),
    };
    list.as_array()
        .ok_or_else(|| CliError::parse("phases must be a JSON array"))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| CliError::parse("phases must be numbers")))
        .collect()
}

/// `zero`, a JSON array, a report with `"phases"`, or whitespace-separated angles.
pub fn read_phases(spec: &str, n: usize) -> Result<PhaseVector64, CliError> {
    if spec == "zero" {
        return Ok(PhaseVector64::zeros(n));
    }
    let path = Path::new(spec);
    let text = read_text(path)?;
    let angles = if looks_like_json(&text) {
        let value: Value = serde_json::from_str(&text).map_err(|e| CliError::from(e).context(spec))?;
        phases_from_value(&value).map_err(|e| e.context(spec))?
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(|w| w.parse::<f64>().map_err(|_| CliError::parse(format!("{spec}: invalid angle {w:?}"))))
            .collect::<Result<_, _>>()?
    };
    if angles.len() != n {
        return Err(CliError::parse(format!("{spec}: expected {n} phases, found {}", angles.len())));
    }
    Ok(PhaseVector64::new(angles)?)
}

/// `identity`, `faithful` or `custom:PATH`, where PATH holds `P` (bare or under `"P"`).
pub fn read_gauge(spec: &str) -> Result<Gauge<f64>, CliError> {
    match spec {
        "identity" => Ok(Gauge::Identity),
        "faithful" => Ok(Gauge::Faithful),
        _ => {
            let path = spec
                .strip_prefix("custom:")
                .ok_or_else(|| CliError::parse(format!("unknown gauge {spec:?}; expected identity, faithful or custom:PATH")))?;
            let value = read_json(Path::new(path))?;
            let p = matrix_or_field(&value, "P").map_err(|e| e.context(path))?;
            Ok(Gauge::Custom(p))
        }
    }
}

/// Everything a `--interaction` file can carry; synthesize bundles hold the
/// cluster that produced `Z` as well.
pub struct InteractionInput {
    pub value: Value,
    pub z_matrix: ComplexMatrix64,
}

impl InteractionInput {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let value = read_json(path)?;
        let z_matrix = matrix_or_field(&value, "Z").map_err(|e| e.context(&path.display().to_string()))?;
        Ok(InteractionInput { value, z_matrix })
    }

    pub fn interaction(&self, tol: &Tolerances64) -> Result<InteractionMatrix64, CliError> {
        Ok(InteractionMatrix64::from_matrix(self.z_matrix.clone(), tol)?)
    }

    pub fn matrix(&self, key: &str) -> Result<Option<ComplexMatrix64>, CliError> {
        match self.value.get(key) {
            Some(v) if self.value.get("rows").is_none() => json::parse_matrix(v).map(Some).map_err(|e| e.context(key)),
            _ => Ok(None),
        }
    }

    pub fn adjacency(&self, tol: &Tolerances64) -> Result<Option<AdjacencyMatrix64>, CliError> {
        self.matrix("adjacency")?.map(|m| adjacency_from_matrix(&m, tol)).transpose()
    }

    pub fn phases(&self) -> Result<Option<PhaseVector64>, CliError> {
        match self.value.get("phases") {
            Some(v) if self.value.get("rows").is_none() => Ok(Some(PhaseVector64::new(phases_from_value(v)?)?)),
            _ => Ok(None),
        }
    }

    pub fn z(&self) -> Option<f64> {
        self.value.get("z").and_then(Value::as_f64)
    }
}

fn decimals(s: &str) -> Option<i32> {
    if s.contains(['e', 'E']) {
        return None;
    }
    Some(s.split_once('.').map_or(0, |(_, frac)| frac.len() as i32))
}

/// `START:STOP:STEP`, inclusive of STOP when it lies on the grid.
///
/// Points are rounded to the number of decimals written in the range, so
/// `0.1:0.3:0.1` yields exactly `0.1, 0.2, 0.3`.
pub fn parse_z_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(CliError::parse(format!("z range must be START:STOP:STEP, found {spec:?}")));
    };
    let num = |s: &str| -> Result<f64, CliError> {
        s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| CliError::parse(format!("invalid number {s:?} in z range")))
    };
    let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
    if h <= 0.0 || b < a {
        return Err(CliError::parse(format!("z range {spec:?} must have STEP > 0 and STOP >= START")));
    }
    let count = ((b - a) / h * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::parse(format!("z range {spec:?} has too many points")));
    }
    let digits = [start, stop, step].iter().map(|s| decimals(s.trim())).try_fold(0, |m, d| d.map(|d| m.max(d)));
    let values = (0..count)
        .map(|k| {
            let x = a + k as f64 * h;
            match digits {
                Some(d) if d <= 15 => {
                    let scale = 10f64.powi(d);
                    (x * scale).round() / scale
                }
                _ => x,
            }
        })
        .collect();
    Ok(values)
}
