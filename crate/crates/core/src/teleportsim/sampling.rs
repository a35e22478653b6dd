//! Finite-shot protocol runs.
//!
//! Each shot first draws Alice's outcome tuple from the exact distribution,
//! then Bob probes his conditional state with a Bell measurement against one
//! of the four standard inputs, following [`BOB_PROBE_SCHEDULE`]. Shot `i` of
//! arrangement `a` draws from its own ChaCha8 stream `(a << 32) | i` under the
//! run seed, so results do not depend on thread count or scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    check_shared_size, check_wires, exact_record, wire_effect, InputArrangement, OutcomeTuple,
    SimError, Tilde, MIN_CONDITIONING_PROBABILITY,
};
use crate::qstate::{BellOutcome, Density, InputLabel, PureQubit};
use crate::scalar::Real;
use crate::tomo::single_qubit_raw;

/// Bob's probe for shot `i` is `BOB_PROBE_SCHEDULE[i % 4]`.
pub const BOB_PROBE_SCHEDULE: [InputLabel; 4] = InputLabel::ALL;

const MAX_SHOTS_PER_ARRANGEMENT: u64 = 1 << 32;

/// One simulated protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    pub arrangement: usize,
    pub alice: OutcomeTuple,
    pub probe: InputLabel,
    pub bob: BellOutcome,
    pub shot: u64,
    pub stream: u64,
}

/// Counts for one arrangement, relative to a designated outcome tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShotTally {
    pub arrangement: usize,
    pub shots: u64,
    /// Shots where Alice obtained the designated tuple.
    pub designated: u64,
    /// Designated shots per Bob probe.
    pub probe_total: [u64; 4],
    /// Designated shots per Bob probe where Bob's measurement gave Ψ⁻.
    pub probe_psi_minus: [u64; 4],
}

impl ShotTally {
    fn merge(mut self, other: &Self) -> Self {
        self.shots += other.shots;
        self.designated += other.designated;
        for p in 0..4 {
            self.probe_total[p] += other.probe_total[p];
            self.probe_psi_minus[p] += other.probe_psi_minus[p];
        }
        self
    }

    /// Relative frequencies, failing on any empty probe cell.
    pub fn frequencies<T: Real>(&self) -> Result<TallyFrequencies<T>, SimError> {
        let mut bob = [T::zero(); 4];
        for p in 0..4 {
            if self.probe_total[p] == 0 {
                return Err(SimError::InsufficientData {
                    arrangement: self.arrangement,
                    probe: BOB_PROBE_SCHEDULE[p],
                });
            }
            bob[p] = T::lit(self.probe_psi_minus[p] as f64) / T::lit(self.probe_total[p] as f64);
        }
        Ok(TallyFrequencies {
            q: T::lit(self.designated as f64) / T::lit(self.shots as f64),
            bob_psi_minus: bob,
        })
    }
}

/// Estimated designated-outcome probability and Bob's Ψ⁻ frequency per probe
/// (indexed in standard-input order).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TallyFrequencies<T> {
    pub q: T,
    pub bob_psi_minus: [T; 4],
}

struct Sampler {
    tuples: Vec<OutcomeTuple>,
    alice_cdf: Vec<f64>,
    /// Per tuple, per probe: cumulative distribution over Bob's Bell outcomes.
    bob_cdf: Vec<[[f64; 4]; 4]>,
}

fn cumulative(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w / total;
            acc
        })
        .collect()
}

fn draw(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or_else(|| {
        // rounding left the last cumulative value just below 1
        let last = cdf.len() - 1;
        (0..=last)
            .rev()
            .find(|&i| i == 0 || cdf[i] > cdf[i - 1])
            .unwrap_or(last)
    })
}

impl Sampler {
    fn new<T: Real>(
        shared: &Density<T>,
        arrangement: &InputArrangement<T>,
    ) -> Result<Self, SimError> {
        check_shared_size(shared.qubits())?;
        check_wires(shared.qubits() - 1, arrangement.wires())?;
        let tuples = OutcomeTuple::enumerate(arrangement.wires());
        let probes: Vec<PureQubit<T>> = BOB_PROBE_SCHEDULE
            .iter()
            .map(|&l| PureQubit::standard(l))
            .collect();
        let mut weights = Vec::with_capacity(tuples.len());
        let mut bob_cdf = Vec::with_capacity(tuples.len());
        for t in &tuples {
            let rec = exact_record(shared, arrangement, t)?;
            let q = rec.q.to_f64_lossy();
            let mut per_probe = [[0.0; 4]; 4];
            if q > MIN_CONDITIONING_PROBABILITY {
                weights.push(q);
                let bob = rec.tilde.scale_real(T::one() / rec.q);
                for (p, probe) in probes.iter().enumerate() {
                    let probs: Vec<f64> = BellOutcome::ALL
                        .iter()
                        .map(|&o| {
                            bob.trace_of_product(&wire_effect(probe, o))
                                .re
                                .to_f64_lossy()
                                .max(0.0)
                        })
                        .collect();
                    per_probe[p].copy_from_slice(&cumulative(&probs));
                }
            } else {
                weights.push(0.0);
            }
            bob_cdf.push(per_probe);
        }
        Ok(Self {
            alice_cdf: cumulative(&weights),
            tuples,
            bob_cdf,
        })
    }

    /// Draws shot `shot` and returns (tuple index, probe index, Bob outcome).
    fn shot(&self, base: &ChaCha8Rng, stream: u64, shot: u64) -> (usize, usize, BellOutcome) {
        let mut rng = base.clone();
        rng.set_stream(stream);
        let tuple = draw(&self.alice_cdf, rng.random::<f64>());
        let probe = (shot % 4) as usize;
        let bob = BellOutcome::ALL[draw(&self.bob_cdf[tuple][probe], rng.random::<f64>())];
        (tuple, probe, bob)
    }
}

fn stream_id(arrangement_index: usize, shot: u64) -> u64 {
    ((arrangement_index as u64) << 32) | shot
}

fn total_shots(shots_per_probe: u64) -> Result<u64, SimError> {
    if shots_per_probe == 0 {
        return Err(SimError::NoShots);
    }
    let total = shots_per_probe.saturating_mul(4);
    if total > MAX_SHOTS_PER_ARRANGEMENT {
        return Err(SimError::NoShots);
    }
    Ok(total)
}

/// Every shot of one arrangement, `4 · shots_per_probe` in total, ordered by
/// shot index.
pub fn sample_shots<T: Real>(
    shared: &Density<T>,
    arrangement: &InputArrangement<T>,
    arrangement_index: usize,
    shots_per_probe: u64,
    seed: u64,
) -> Result<Vec<ShotRecord>, SimError> {
    let total = total_shots(shots_per_probe)?;
    let sampler = Sampler::new(shared, arrangement)?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..total)
        .into_par_iter()
        .map(|i| {
            let stream = stream_id(arrangement_index, i);
            let (tuple, probe, bob) = sampler.shot(&base, stream, i);
            ShotRecord {
                arrangement: arrangement_index,
                alice: sampler.tuples[tuple].clone(),
                probe: BOB_PROBE_SCHEDULE[probe],
                bob,
                shot: i,
                stream,
            }
        })
        .collect())
}

/// Same draws as [`sample_shots`], reduced straight to counts.
pub fn sample_tally<T: Real>(
    shared: &Density<T>,
    arrangement: &InputArrangement<T>,
    arrangement_index: usize,
    shots_per_probe: u64,
    seed: u64,
    designated: &OutcomeTuple,
) -> Result<ShotTally, SimError> {
    check_wires(arrangement.wires(), designated.wires())?;
    let total = total_shots(shots_per_probe)?;
    let sampler = Sampler::new(shared, arrangement)?;
    let target = designated.index();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let empty = ShotTally {
        arrangement: arrangement_index,
        ..ShotTally::default()
    };
    let tally = (0..total)
        .into_par_iter()
        .fold(
            || empty.clone(),
            |mut acc, i| {
                let (tuple, probe, bob) = sampler.shot(&base, stream_id(arrangement_index, i), i);
                acc.shots += 1;
                if tuple == target {
                    acc.designated += 1;
                    acc.probe_total[probe] += 1;
                    if bob == BellOutcome::PsiMinus {
                        acc.probe_psi_minus[probe] += 1;
                    }
                }
                acc
            },
        )
        .reduce(|| empty.clone(), |a, b| a.merge(&b));
    Ok(tally)
}

fn tally_records(shots: &[ShotRecord], designated: &OutcomeTuple) -> Vec<ShotTally> {
    let mut tallies: Vec<ShotTally> = Vec::new();
    for s in shots {
        let pos = match tallies.iter().position(|t| t.arrangement == s.arrangement) {
            Some(p) => p,
            None => {
                tallies.push(ShotTally {
                    arrangement: s.arrangement,
                    ..ShotTally::default()
                });
                tallies.len() - 1
            }
        };
        let t = &mut tallies[pos];
        t.shots += 1;
        if &s.alice == designated {
            let p = s.probe.index();
            t.designated += 1;
            t.probe_total[p] += 1;
            if s.bob == BellOutcome::PsiMinus {
                t.probe_psi_minus[p] += 1;
            }
        }
    }
    tallies.sort_by_key(|t| t.arrangement);
    tallies
}

/// Tilde estimate `q̂ · ρ̂_Bob`, where `ρ̂_Bob` is the Bell-measurement-only
/// single-qubit estimate from Bob's Ψ⁻ frequencies.
pub fn estimate_from_frequencies<T: Real>(
    arrangement: &InputArrangement<T>,
    designated: &OutcomeTuple,
    freqs: &TallyFrequencies<T>,
    shots: Option<u64>,
) -> Tilde<T> {
    let bob = single_qubit_raw(&freqs.bob_psi_minus);
    Tilde {
        arrangement: arrangement.clone(),
        outcome: designated.clone(),
        q: freqs.q,
        tilde: bob.scale_real(freqs.q),
        shots,
    }
}

/// One estimated record per arrangement present in `shots`, in arrangement
/// index order. `arrangements` is indexed by `ShotRecord::arrangement`.
pub fn estimate_records<T: Real>(
    shots: &[ShotRecord],
    designated: &OutcomeTuple,
    arrangements: &[InputArrangement<T>],
) -> Result<Vec<Tilde<T>>, SimError> {
    tally_records(shots, designated)
        .iter()
        .map(|t| {
            let arrangement = arrangements
                .get(t.arrangement)
                .ok_or(SimError::UnknownArrangement(t.arrangement))?;
            let freqs = t.frequencies::<T>()?;
            Ok(estimate_from_frequencies(
                arrangement,
                designated,
                &freqs,
                Some(t.shots),
            ))
        })
        .collect()
}
