//! JSON documents describing channels, ensembles and quantum ansätze.
//!
//! Complex numbers are `[re, im]` pairs; matrices are arrays of rows.

use qregion_core::capacity::{Ensemble, QuantumAnsatz};
use qregion_core::objects::{depolarizing, KrausChannel};
use qregion_core::{Complex64, ComplexMatrix, DimList, Error as CoreError, PureState};
use serde::Deserialize;

/// A spec that failed to parse or validate.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError(pub String);

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SpecError {}

type Complex = [f64; 2];
type Matrix = Vec<Vec<Complex>>;

/// Fields allowed for each kind are checked after parsing so that syntax
/// and type errors keep their line and column.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDoc {
    kind: String,
    eps: Option<f64>,
    dim: Option<usize>,
    kraus: Option<Vec<Matrix>>,
    dims: Option<ChannelDims>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDims {
    input: usize,
    output: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PureDoc {
    dims: Vec<usize>,
    amplitudes: Vec<Complex>,
    #[serde(default)]
    normalize: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleDoc {
    kind: String,
    beta: Option<f64>,
    dim: Option<usize>,
    probs: Option<Vec<f64>>,
    resource: Option<PureDoc>,
    encoders: Option<Vec<ChannelDoc>>,
}

/// Checks that exactly the fields in `allowed` are set among `present`.
fn fields(what: &str, kind: &str, present: &[(&str, bool)], required: &[&str], allowed: &[&str]) -> Result<(), SpecError> {
    for (name, set) in present {
        if *set && !allowed.contains(name) {
            return Err(SpecError(format!("{what}: field `{name}` does not apply to kind `{kind}`")));
        }
        if !*set && required.contains(name) {
            return Err(SpecError(format!("{what}: kind `{kind}` needs field `{name}`")));
        }
    }
    Ok(())
}

fn parse_json<'a, T: Deserialize<'a>>(what: &str, text: &'a str) -> Result<T, SpecError> {
    serde_json::from_str(text).map_err(|e| SpecError(format!("{what} spec, line {} column {}: {e}", e.line(), e.column())))
}

fn core(what: &str, e: CoreError) -> SpecError {
    match e {
        CoreError::NotTracePreserving { residual } => {
            SpecError(format!("{what} rejected: Kraus operators are not trace preserving (completeness residual {residual:.3e})"))
        }
        other => SpecError(format!("{what} rejected: {other}")),
    }
}

fn complex(z: &Complex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn matrix(field: &str, m: &Matrix) -> Result<ComplexMatrix, SpecError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(SpecError(format!("{field}: empty matrix")));
    }
    if let Some(r) = m.iter().position(|row| row.len() != cols) {
        return Err(SpecError(format!("{field}: row {r} has {} entries, expected {cols}", m[r].len())));
    }
    let data = m.iter().flatten().map(complex).collect();
    ComplexMatrix::new(rows, cols, data).map_err(|e| SpecError(format!("{field}: {e}")))
}

fn channel_from_doc(doc: &ChannelDoc, what: &str) -> Result<KrausChannel, SpecError> {
    let present = [("eps", doc.eps.is_some()), ("dim", doc.dim.is_some()), ("kraus", doc.kraus.is_some()), ("dims", doc.dims.is_some())];
    match doc.kind.as_str() {
        "depolarizing" => {
            fields(what, &doc.kind, &present, &["eps"], &["eps"])?;
            depolarizing(doc.eps.unwrap_or_default()).map_err(|e| core(what, e))
        }
        "identity" => {
            fields(what, &doc.kind, &present, &[], &["dim"])?;
            KrausChannel::identity(doc.dim.unwrap_or(2)).map_err(|e| core(what, e))
        }
        "kraus" => {
            fields(what, &doc.kind, &present, &["kraus"], &["kraus", "dims"])?;
            let kraus = doc.kraus.as_deref().unwrap_or_default();
            if kraus.is_empty() {
                return Err(SpecError(format!("{what}: field `kraus` has no operators")));
            }
            let ops = kraus.iter().enumerate().map(|(k, m)| matrix(&format!("{what}: kraus[{k}]"), m)).collect::<Result<Vec<_>, _>>()?;
            if let Some(d) = &doc.dims {
                if let Some(k) = ops.iter().position(|op| op.rows() != d.output || op.cols() != d.input) {
                    return Err(SpecError(format!(
                        "{what}: kraus[{k}] is {}x{}, dims declare {}x{}",
                        ops[k].rows(),
                        ops[k].cols(),
                        d.output,
                        d.input
                    )));
                }
            }
            KrausChannel::new(ops).map_err(|e| core(what, e))
        }
        other => Err(SpecError(format!("{what}: unknown kind `{other}`, expected depolarizing, identity or kraus"))),
    }
}

/// Parses and validates a channel document.
pub fn parse_channel_spec(text: &str) -> Result<KrausChannel, SpecError> {
    let doc: ChannelDoc = parse_json("channel", text)?;
    channel_from_doc(&doc, "channel")
}

fn pure_from_doc(doc: &PureDoc, what: &str) -> Result<PureState, SpecError> {
    let dims = DimList::new(doc.dims.clone()).map_err(|e| SpecError(format!("{what}: dims: {e}")))?;
    let amps: Vec<Complex64> = doc.amplitudes.iter().map(complex).collect();
    let state = if doc.normalize { PureState::normalized(amps, dims) } else { PureState::new(amps, dims) };
    state.map_err(|e| SpecError(format!("{what}: amplitudes: {e}")))
}

pub fn parse_ensemble_spec(text: &str) -> Result<Ensemble, SpecError> {
    let doc: EnsembleDoc = parse_json("ensemble", text)?;
    let what = "ensemble";
    let present = [
        ("beta", doc.beta.is_some()),
        ("dim", doc.dim.is_some()),
        ("probs", doc.probs.is_some()),
        ("resource", doc.resource.is_some()),
        ("encoders", doc.encoders.is_some()),
    ];
    match doc.kind.as_str() {
        "superposition" => {
            fields(what, &doc.kind, &present, &["beta"], &["beta"])?;
            Ensemble::superposition(doc.beta.unwrap_or_default()).map_err(|e| core(what, e))
        }
        "basis" => {
            fields(what, &doc.kind, &present, &[], &["dim"])?;
            Ensemble::basis_signaling(doc.dim.unwrap_or(2)).map_err(|e| core(what, e))
        }
        "general" => {
            let all = ["probs", "resource", "encoders"];
            fields(what, &doc.kind, &present, &all, &all)?;
            let (Some(probs), Some(resource), Some(encoders)) = (doc.probs, doc.resource, doc.encoders) else {
                unreachable!("required fields checked above")
            };
            let resource = pure_from_doc(&resource, "ensemble: resource")?;
            let encoders = encoders
                .iter()
                .enumerate()
                .map(|(x, d)| channel_from_doc(d, &format!("ensemble: encoders[{x}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ensemble::new(probs, resource, encoders).map_err(|e| core(what, e))
        }
        other => Err(SpecError(format!("{what}: unknown kind `{other}`, expected superposition, basis or general"))),
    }
}

pub fn parse_ansatz_spec(text: &str) -> Result<QuantumAnsatz, SpecError> {
    let doc: PureDoc = parse_json("ansatz", text)?;
    QuantumAnsatz::new(pure_from_doc(&doc, "ansatz")?).map_err(|e| core("ansatz", e))
}
