//! JSON file formats. Complex numbers are `[re, im]`; matrices are flat,
//! row-major lists of them.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use super::CliError;
use crate::qla::CMatrix;
use crate::qstate::{standard_inputs, BellOutcome, Density, InputLabel, PureQubit};
use crate::teleportsim::{InputArrangement, OutcomeTuple, Tilde, MAX_SHARED_QUBITS};
use crate::tomo::Method;

pub const STATE_FORMAT: &str = "teletomo-state/1";
pub const RECORDS_FORMAT: &str = "teletomo-records/1";
pub const RECONSTRUCTION_FORMAT: &str = "teletomo-reconstruction/1";

fn matrix_to_pairs(m: &CMatrix<f64>) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

fn pairs_to_matrix(dim: usize, pairs: &[[f64; 2]]) -> Result<CMatrix<f64>, String> {
    CMatrix::from_vec(
        dim,
        dim,
        pairs.iter().map(|p| Complex::new(p[0], p[1])).collect(),
    )
    .map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format: String,
    pub qubits: usize,
    pub mat: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_density(rho: &Density<f64>) -> Self {
        Self {
            format: STATE_FORMAT.to_owned(),
            qubits: rho.qubits(),
            mat: matrix_to_pairs(rho.matrix()),
        }
    }

    pub fn to_density(&self) -> Result<Density<f64>, String> {
        if self.format != STATE_FORMAT {
            return Err(format!("unsupported format {:?}", self.format));
        }
        if self.qubits == 0 || self.qubits > MAX_SHARED_QUBITS {
            return Err(format!("unsupported qubit count {}", self.qubits));
        }
        let m = pairs_to_matrix(1 << self.qubits, &self.mat)?;
        Density::new(m).map_err(|e| e.to_string())
    }
}

/// An input state: a standard label, or explicit amplitudes `[[re, im], [re, im]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputSpec {
    Label(InputLabel),
    Amplitudes([[f64; 2]; 2]),
}

impl InputSpec {
    pub fn from_qubit(q: &PureQubit<f64>) -> Self {
        match q.label() {
            Some(l) => Self::Label(l),
            None => {
                let [a, b] = q.amplitudes();
                Self::Amplitudes([[a.re, a.im], [b.re, b.im]])
            }
        }
    }

    pub fn to_qubit(&self) -> Result<PureQubit<f64>, String> {
        match self {
            Self::Label(l) => Ok(PureQubit::standard(*l)),
            Self::Amplitudes([a, b]) => {
                PureQubit::new(Complex::new(a[0], a[1]), Complex::new(b[0], b[1]))
                    .map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub qubits: usize,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots_per_probe: Option<u64>,
    pub seed: u64,
    pub designated_outcomes: Vec<BellOutcome>,
    pub input_set: Vec<InputSpec>,
    /// Emit records for every outcome tuple, not only the designated one.
    #[serde(default)]
    pub all_outcomes: bool,
}

impl ExperimentConfig {
    /// Exact mode, all-Ψ⁻ designation, standard inputs.
    pub fn exact(qubits: usize) -> Self {
        Self {
            qubits,
            mode: Mode::Exact,
            shots_per_probe: None,
            seed: 0,
            designated_outcomes: vec![BellOutcome::PsiMinus; qubits.saturating_sub(1)],
            input_set: standard_inputs::<f64>()
                .iter()
                .map(InputSpec::from_qubit)
                .collect(),
            all_outcomes: false,
        }
    }

    pub fn sampled(qubits: usize, shots_per_probe: u64, seed: u64) -> Self {
        Self {
            mode: Mode::Sampled,
            shots_per_probe: Some(shots_per_probe),
            seed,
            ..Self::exact(qubits)
        }
    }

    pub fn designated(&self) -> OutcomeTuple {
        OutcomeTuple(self.designated_outcomes.clone())
    }

    /// Checks mode-dependent fields and the input set.
    pub fn validate(&self) -> Result<Vec<PureQubit<f64>>, CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if !(2..=MAX_SHARED_QUBITS).contains(&self.qubits) {
            return usage(format!(
                "qubits must be in 2..={MAX_SHARED_QUBITS}, got {}",
                self.qubits
            ));
        }
        if self.designated_outcomes.len() != self.qubits - 1 {
            return usage(format!(
                "{} designated outcomes given for {} wires",
                self.designated_outcomes.len(),
                self.qubits - 1
            ));
        }
        match (self.mode, self.shots_per_probe) {
            (Mode::Sampled, None) | (Mode::Sampled, Some(0)) => {
                return usage("sampled mode needs shots_per_probe ≥ 1".to_owned())
            }
            (Mode::Exact, Some(_)) => {
                return usage("shots_per_probe is only valid in sampled mode".to_owned())
            }
            _ => {}
        }
        if self.input_set.len() != 4 {
            return usage(format!(
                "input set needs 4 states, got {}",
                self.input_set.len()
            ));
        }
        let set: Vec<PureQubit<f64>> = self
            .input_set
            .iter()
            .map(|s| s.to_qubit().map_err(CliError::Usage))
            .collect::<Result<_, _>>()?;
        for (i, a) in set.iter().enumerate() {
            for b in &set[i + 1..] {
                if a.overlap(b) > 1.0 - 1e-9 {
                    return usage("input set states must be pairwise distinct".to_owned());
                }
            }
        }
        Ok(set)
    }
}

/// Where the shared state came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    StatePath(String),
    Seed { seed: u64, rank: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub arrangement: Vec<InputSpec>,
    pub outcome: Vec<BellOutcome>,
    pub q: f64,
    pub tilde: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

impl RecordEntry {
    pub fn from_tilde(t: &Tilde<f64>) -> Self {
        Self {
            arrangement: t
                .arrangement
                .inputs()
                .iter()
                .map(InputSpec::from_qubit)
                .collect(),
            outcome: t.outcome.0.clone(),
            q: t.q,
            tilde: matrix_to_pairs(&t.tilde),
            shots: t.shots,
        }
    }

    pub fn to_tilde(&self) -> Result<Tilde<f64>, String> {
        let inputs = self
            .arrangement
            .iter()
            .map(InputSpec::to_qubit)
            .collect::<Result<Vec<_>, _>>()?;
        if inputs.len() != self.outcome.len() {
            return Err(format!(
                "arrangement has {} inputs but outcome has {} labels",
                inputs.len(),
                self.outcome.len()
            ));
        }
        Ok(Tilde {
            arrangement: InputArrangement::new(inputs),
            outcome: OutcomeTuple(self.outcome.clone()),
            q: self.q,
            tilde: pairs_to_matrix(2, &self.tilde)?,
            shots: self.shots,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordFile {
    pub format: String,
    pub config: ExperimentConfig,
    pub provenance: Provenance,
    pub records: Vec<RecordEntry>,
}

impl RecordFile {
    pub fn tildes(&self) -> Result<Vec<Tilde<f64>>, String> {
        self.records.iter().map(RecordEntry::to_tilde).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionFile {
    pub format: String,
    pub method: Method,
    pub residual: f64,
    pub condition: f64,
    pub projected: bool,
    /// Trace of the raw estimate; 1 on exact data without being imposed.
    pub raw_trace: f64,
    pub state: StateFile,
    pub raw: Vec<[f64; 2]>,
}

impl ReconstructionFile {
    pub fn from_report(r: &crate::tomo::Reconstruction<f64>) -> Self {
        Self {
            format: RECONSTRUCTION_FORMAT.to_owned(),
            method: r.method,
            residual: r.residual,
            condition: r.condition,
            projected: r.projected,
            raw_trace: r.raw.trace().re,
            state: StateFile::from_density(&r.rho_hat),
            raw: matrix_to_pairs(&r.raw),
        }
    }
}

fn read_json<D: DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Format {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Format {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// Reads a state file, or the estimate inside a reconstruction file.
pub fn read_state(path: &Path) -> Result<Density<f64>, CliError> {
    let value: serde_json::Value = read_json(path)?;
    let format_err = |message: String| CliError::Format {
        path: path.to_owned(),
        message,
    };
    let state: StateFile =
        if value.get("format").and_then(|f| f.as_str()) == Some(RECONSTRUCTION_FORMAT) {
            let r: ReconstructionFile =
                serde_json::from_value(value).map_err(|e| format_err(e.to_string()))?;
            r.state
        } else {
            serde_json::from_value(value).map_err(|e| format_err(e.to_string()))?
        };
    state.to_density().map_err(format_err)
}

pub fn read_records(path: &Path) -> Result<RecordFile, CliError> {
    let file: RecordFile = read_json(path)?;
    if file.format != RECORDS_FORMAT {
        return Err(CliError::Format {
            path: path.to_owned(),
            message: format!("unsupported format {:?}", file.format),
        });
    }
    Ok(file)
}
