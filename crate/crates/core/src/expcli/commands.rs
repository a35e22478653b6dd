use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::files::{
    read_records, read_state, write_json, ExperimentConfig, Mode, Provenance, ReconstructionFile,
    RecordEntry, RecordFile, StateFile, RECORDS_FORMAT,
};
use super::CliError;
use crate::qstate::{frobenius_distance, random_density, trace_distance, Density, StateError};
use crate::teleportsim::{
    estimate_from_frequencies, exact_record, sample_tally, InputArrangement, OutcomeTuple, Tilde,
};
use crate::tomo::{reconstruct_records, MethodChoice, Reconstruction};

/// Writes a random state of the given rank (full rank by default).
pub fn cmd_gen(
    qubits: usize,
    rank: Option<usize>,
    seed: u64,
    out: &Path,
) -> Result<Density<f64>, CliError> {
    let rank = rank.unwrap_or(1 << qubits.min(usize::BITS as usize - 1));
    let rho = random_density::<f64>(qubits, rank, seed)?;
    write_json(out, &StateFile::from_density(&rho))?;
    Ok(rho)
}

/// Records for every arrangement of `config.input_set`, for the designated
/// tuple or, with `all_outcomes`, for every tuple (tuple-major order).
pub fn simulate_records(
    shared: &Density<f64>,
    config: &ExperimentConfig,
) -> Result<Vec<Tilde<f64>>, CliError> {
    let set = config.validate()?;
    if shared.qubits() != config.qubits {
        return Err(StateError::DimensionMismatch {
            left: shared.qubits(),
            right: config.qubits,
        }
        .into());
    }
    let wires = config.qubits - 1;
    let arrangements = InputArrangement::enumerate(&set, wires);
    let tuples = if config.all_outcomes {
        OutcomeTuple::enumerate(wires)
    } else {
        vec![config.designated()]
    };
    let mut records = Vec::with_capacity(tuples.len() * arrangements.len());
    for tuple in &tuples {
        for (idx, arr) in arrangements.iter().enumerate() {
            let rec = match config.mode {
                Mode::Exact => exact_record(shared, arr, tuple)?,
                Mode::Sampled => {
                    let shots = config.shots_per_probe.unwrap_or(0);
                    let tally = sample_tally(shared, arr, idx, shots, config.seed, tuple)?;
                    let freqs = tally.frequencies::<f64>()?;
                    estimate_from_frequencies(arr, tuple, &freqs, Some(tally.shots))
                }
            };
            records.push(rec);
        }
    }
    Ok(records)
}

/// Shared state for [`cmd_simulate`].
#[derive(Clone, Copy, Debug)]
pub enum StateSource<'a> {
    File(&'a Path),
    /// Random state drawn as by [`cmd_gen`] with `config.qubits` qubits.
    Generated {
        seed: u64,
        rank: Option<usize>,
    },
}

/// Runs the protocol on the given shared state and writes a record file.
pub fn cmd_simulate(
    source: StateSource<'_>,
    config: &ExperimentConfig,
    out: &Path,
) -> Result<RecordFile, CliError> {
    let (shared, provenance) = match source {
        StateSource::File(path) => (
            read_state(path)?,
            Provenance::StatePath(path.display().to_string()),
        ),
        StateSource::Generated { seed, rank } => {
            let rank = rank.unwrap_or(1 << config.qubits.min(usize::BITS as usize - 1));
            (
                random_density::<f64>(config.qubits, rank, seed)?,
                Provenance::Seed { seed, rank },
            )
        }
    };
    let records = simulate_records(&shared, config)?;
    let file = RecordFile {
        format: RECORDS_FORMAT.to_owned(),
        config: config.clone(),
        provenance,
        records: records.iter().map(RecordEntry::from_tilde).collect(),
    };
    write_json(out, &file)?;
    Ok(file)
}

/// Reconstruction from the records conditioned on the designated tuple.
pub fn reconstruct_designated(
    records: &[Tilde<f64>],
    designated: &OutcomeTuple,
    choice: MethodChoice,
) -> Result<Reconstruction<f64>, CliError> {
    let selected: Vec<Tilde<f64>> = records
        .iter()
        .filter(|r| &r.outcome == designated)
        .cloned()
        .collect();
    Ok(reconstruct_records(&selected, choice)?)
}

pub fn cmd_reconstruct(
    records_path: &Path,
    choice: MethodChoice,
    out: &Path,
) -> Result<ReconstructionFile, CliError> {
    let file = read_records(records_path)?;
    file.config.validate()?;
    let records = file.tildes().map_err(|message| CliError::Format {
        path: records_path.to_owned(),
        message,
    })?;
    let report = reconstruct_designated(&records, &file.config.designated(), choice)?;
    let result = ReconstructionFile::from_report(&report);
    write_json(out, &result)?;
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub trace_distance: f64,
    pub frobenius: f64,
    pub max_entry: f64,
}

pub fn cmd_verify(truth_path: &Path, estimate_path: &Path) -> Result<Metrics, CliError> {
    let truth = read_state(truth_path)?;
    let estimate = read_state(estimate_path)?;
    Ok(Metrics {
        trace_distance: trace_distance(&truth, &estimate)?,
        frobenius: frobenius_distance(&truth, &estimate)?,
        max_entry: truth.matrix().max_abs_diff(estimate.matrix()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n_shots: u64,
    pub seed: u64,
    pub trace_distance: f64,
}

/// Sampled reconstruction error for every (shots per probe, seed) pair,
/// written as CSV `n_shots,seed,trace_distance`.
pub fn cmd_convergence(
    state_path: &Path,
    shot_grid: &[u64],
    seeds: &[u64],
    out_csv: &Path,
) -> Result<Vec<ConvergenceRow>, CliError> {
    let shared = read_state(state_path)?;
    if shot_grid.is_empty() || seeds.is_empty() {
        return Err(CliError::Usage(
            "shot grid and seed list must be non-empty".to_owned(),
        ));
    }
    let mut rows = Vec::with_capacity(shot_grid.len() * seeds.len());
    for &n in shot_grid {
        for &seed in seeds {
            let config = ExperimentConfig::sampled(shared.qubits(), n, seed);
            let records = simulate_records(&shared, &config)?;
            let report =
                reconstruct_designated(&records, &config.designated(), MethodChoice::Auto)?;
            rows.push(ConvergenceRow {
                n_shots: n,
                seed,
                trace_distance: trace_distance(&report.rho_hat, &shared)?,
            });
        }
    }
    let mut csv = String::from("n_shots,seed,trace_distance\n");
    for r in &rows {
        writeln!(csv, "{},{},{}", r.n_shots, r.seed, r.trace_distance).expect("write to String");
    }
    fs::write(out_csv, csv).map_err(|e| CliError::Io {
        path: out_csv.to_owned(),
        message: e.to_string(),
    })?;
    Ok(rows)
}
