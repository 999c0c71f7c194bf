//! QUBO energy evaluation, exhaustive ground-state search and a seeded
//! simulated-annealing sampler.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, QuboMatrix, SampleRecord, SampleSet};

/// Default qubit cap of [`brute_force_solve`].
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 24;

/// Hard ceiling for the exhaustive search regardless of configuration.
const BRUTE_FORCE_LIMIT: usize = 40;

/// Below this many qubits the exhaustive search stays on one thread.
const PARALLEL_THRESHOLD: usize = 14;

/// `sum_i Q_ii a_i + sum_{i<j} Q_ij a_i a_j`.
pub fn energy(q: &QuboMatrix, a: &Assignment) -> Result<f64> {
    if a.len() != q.dim() {
        return Err(Error::dimension(q.dim(), a.len(), "assignment"));
    }
    Ok(energy_unchecked(q, a.bits()))
}

fn energy_unchecked(q: &QuboMatrix, bits: &[u8]) -> f64 {
    let dim = q.dim();
    let mut e = 0.0;
    for i in 0..dim {
        if bits[i] == 0 {
            continue;
        }
        let row = q.row(i);
        e += row[i];
        for j in i + 1..dim {
            if bits[j] == 1 {
                e += row[j];
            }
        }
    }
    e
}

/// Symmetric coupling view `J[i][j] = Q[min][max]` with a zero diagonal.
fn symmetric_couplings(q: &QuboMatrix) -> Vec<f64> {
    let dim = q.dim();
    let mut j = vec![0.0; dim * dim];
    for a in 0..dim {
        for b in a + 1..dim {
            let v = q.get(a, b);
            j[a * dim + b] = v;
            j[b * dim + a] = v;
        }
    }
    j
}

/// Exact minimum and every assignment attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStates {
    pub min_energy: f64,
    pub minimizers: Vec<Assignment>,
}

/// Enumerates all `2^dim` assignments with the default cap.
pub fn brute_force_solve(q: &QuboMatrix) -> Result<GroundStates> {
    brute_force_solve_capped(q, DEFAULT_BRUTE_FORCE_CAP)
}

/// Enumerates all `2^dim` assignments, refusing matrices above `cap` qubits.
///
/// Each block of assignments is walked in Gray-code order with an
/// incrementally maintained local field, so one step costs `O(dim)`.
/// Candidate minima are re-evaluated from scratch before they are reported.
pub fn brute_force_solve_capped(q: &QuboMatrix, cap: usize) -> Result<GroundStates> {
    let dim = q.dim();
    let cap = cap.min(BRUTE_FORCE_LIMIT);
    if dim > cap {
        return Err(Error::Capacity(format!(
            "exhaustive search over {dim} qubits exceeds the cap of {cap}"
        )));
    }
    let couplings = symmetric_couplings(q);
    let scale: f64 = q.row_major().iter().map(|v| v.abs()).sum::<f64>().max(1.0);
    let slack = scale * 1e-9;

    // The top `prefix_bits` are fixed per block, the rest are Gray-walked.
    let prefix_bits = if dim >= PARALLEL_THRESHOLD {
        6.min(dim)
    } else {
        0
    };
    let inner_bits = dim - prefix_bits;
    let blocks: Vec<(f64, Vec<u64>)> = (0..1u64 << prefix_bits)
        .into_par_iter()
        .map(|prefix| scan_block(q, &couplings, prefix << inner_bits, inner_bits, slack))
        .collect();

    let mut candidates = Vec::new();
    let best_running = blocks.iter().map(|(e, _)| *e).fold(f64::INFINITY, f64::min);
    for (e, masks) in blocks {
        if e <= best_running + slack {
            candidates.extend(masks);
        }
    }

    let exact: Vec<(f64, Assignment)> = candidates
        .into_iter()
        .map(|mask| {
            let a = Assignment::from_mask(mask, dim);
            (energy_unchecked(q, a.bits()), a)
        })
        .collect();
    let min_energy = exact.iter().map(|(e, _)| *e).fold(f64::INFINITY, f64::min);
    let tie = if q.is_integral() {
        0.0
    } else {
        1e-12 * min_energy.abs().max(1.0)
    };
    let mut minimizers: Vec<Assignment> = exact
        .into_iter()
        .filter(|(e, _)| *e <= min_energy + tie)
        .map(|(_, a)| a)
        .collect();
    minimizers.sort();
    Ok(GroundStates {
        min_energy,
        minimizers,
    })
}

/// Walks the `2^inner_bits` assignments sharing the fixed high bits of
/// `base`, returning the lowest running energy and every mask within
/// `slack` of it.
fn scan_block(
    q: &QuboMatrix,
    couplings: &[f64],
    base: u64,
    inner_bits: usize,
    slack: f64,
) -> (f64, Vec<u64>) {
    let dim = q.dim();
    let mut bits: Vec<u8> = (0..dim).map(|i| ((base >> i) & 1) as u8).collect();
    let mut e = energy_unchecked(q, &bits);
    // field[i]: energy change from setting bit i, excluding its own state.
    let mut field: Vec<f64> = (0..dim)
        .map(|i| {
            q.get(i, i)
                + (0..dim)
                    .filter(|&j| bits[j] == 1)
                    .map(|j| couplings[i * dim + j])
                    .sum::<f64>()
        })
        .collect();

    let mut best = e;
    let mut masks = vec![base];
    let mut mask = base;
    for step in 1..(1u64 << inner_bits) {
        let k = step.trailing_zeros() as usize;
        let sign = if bits[k] == 1 { -1.0 } else { 1.0 };
        e += sign * field[k];
        bits[k] ^= 1;
        mask ^= 1 << k;
        let row = &couplings[k * dim..(k + 1) * dim];
        for (f, j) in field.iter_mut().zip(row) {
            *f += sign * j;
        }
        if e < best - slack {
            best = e;
            masks.clear();
            masks.push(mask);
        } else if e <= best + slack {
            best = best.min(e);
            masks.push(mask);
        }
    }
    (best, masks)
}

/// Parameters of the annealing sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub num_reads: u64,
    pub sweeps_per_read: u64,
    pub beta_initial: f64,
    pub beta_final: f64,
    pub seed: u64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule {
            num_reads: 1000,
            sweeps_per_read: 200,
            beta_initial: 0.1,
            beta_final: 10.0,
            seed: 0,
        }
    }
}

impl AnnealSchedule {
    pub fn with_reads(mut self, num_reads: u64) -> Self {
        self.num_reads = num_reads;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_reads == 0 {
            return Err(Error::Config("num_reads must be positive".into()));
        }
        if self.sweeps_per_read == 0 {
            return Err(Error::Config("sweeps_per_read must be positive".into()));
        }
        if !(self.beta_initial.is_finite() && self.beta_final.is_finite())
            || self.beta_initial <= 0.0
            || self.beta_final < self.beta_initial
        {
            return Err(Error::Config(format!(
                "need 0 < beta_initial <= beta_final, got {} and {}",
                self.beta_initial, self.beta_final
            )));
        }
        Ok(())
    }

    /// Geometric inverse-temperature ramp, one value per sweep.
    pub fn betas(&self) -> Vec<f64> {
        let n = self.sweeps_per_read as usize;
        if n == 1 {
            return vec![self.beta_initial];
        }
        let ratio = (self.beta_final / self.beta_initial).ln() / (n - 1) as f64;
        (0..n)
            .map(|k| self.beta_initial * (ratio * k as f64).exp())
            .collect()
    }
}

/// Runs `num_reads` independent single-flip Metropolis anneals.
///
/// Read `r` draws from a ChaCha stream keyed by `(seed, r)`, so the result
/// does not depend on how reads are spread across threads. Each read starts
/// from a uniformly random state and reports its final state.
pub fn simulated_anneal(q: &QuboMatrix, schedule: &AnnealSchedule) -> Result<SampleSet> {
    schedule.validate()?;
    let dim = q.dim();
    let couplings = symmetric_couplings(q);
    let betas = schedule.betas();

    let counts = (0..schedule.num_reads)
        .into_par_iter()
        .fold(BTreeMap::<Vec<u8>, u64>::new, |mut acc, read| {
            let mut rng = ChaCha8Rng::seed_from_u64(schedule.seed);
            rng.set_stream(read);
            let bits = anneal_once(q, &couplings, &betas, dim, &mut rng);
            *acc.entry(bits).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let records = counts
        .into_iter()
        .map(|(bits, occurrences)| {
            let assignment = Assignment::new(bits).expect("sampler emits binary states");
            SampleRecord {
                energy: energy_unchecked(q, assignment.bits()),
                assignment,
                occurrences,
            }
        })
        .collect();
    SampleSet::new(records, schedule.num_reads)
}

fn anneal_once(
    q: &QuboMatrix,
    couplings: &[f64],
    betas: &[f64],
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<u8> {
    let mut bits: Vec<u8> = (0..dim).map(|_| rng.gen_range(0..=1)).collect();
    let mut field: Vec<f64> = (0..dim)
        .map(|i| {
            q.get(i, i)
                + (0..dim)
                    .filter(|&j| bits[j] == 1)
                    .map(|j| couplings[i * dim + j])
                    .sum::<f64>()
        })
        .collect();
    for &beta in betas {
        for k in 0..dim {
            let sign = if bits[k] == 1 { -1.0 } else { 1.0 };
            let delta = sign * field[k];
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp();
            if accept {
                bits[k] ^= 1;
                let row = &couplings[k * dim..(k + 1) * dim];
                for (f, j) in field.iter_mut().zip(row) {
                    *f += sign * j;
                }
            }
        }
    }
    bits
}
