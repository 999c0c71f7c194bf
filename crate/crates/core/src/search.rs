//! Subrange sweep: walk every translation window of the total range, solve
//! the window's QUBO and flag the windows whose minimum reaches `-c^T c`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builder::{build_qubo, effective_rhs, update_linear_for_subrange};
use crate::error::{Error, Result};
use crate::model::{decode, total_range, Assignment, BinaryEncoding, LinearSystem, SubrangeSpec};
use crate::solvers::{brute_force_solve_capped, simulated_anneal, AnnealSchedule};

/// Relative tolerance used for hit detection on non-integer inputs.
pub const HIT_RTOL: f64 = 1e-6;

/// Ordered grid of all `(2s)^n` subrange windows.
///
/// Coefficients run from `-s` to `s - 1`; the first variable is the most
/// significant digit, so index 0 is the all-`-s` window.
#[derive(Debug, Clone)]
pub struct SubrangeGrid {
    n: usize,
    bound: u64,
    encoding: BinaryEncoding,
    len: usize,
    next: usize,
}

/// Lazily enumerates the subrange windows for `n` variables.
pub fn enumerate_subranges(
    n: usize,
    encoding: &BinaryEncoding,
    bound: u64,
) -> Result<SubrangeGrid> {
    encoding.subrange_width()?;
    if bound == 0 {
        return Err(Error::Config("subrange bound s must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::Config("at least one variable is required".into()));
    }
    let per_var = bound
        .checked_mul(2)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::Capacity(format!("subrange bound {bound} is too large")))?;
    let exp = u32::try_from(n).map_err(|_| Error::Capacity(format!("{n} variables")))?;
    let len = per_var.checked_pow(exp).ok_or_else(|| {
        Error::Capacity(format!(
            "({per_var})^{n} subranges overflow the platform limit"
        ))
    })?;
    // Every coefficient times the width must fit an i64.
    SubrangeSpec::new(vec![-(bound as i64)], bound, encoding)?;
    Ok(SubrangeGrid {
        n,
        bound,
        encoding: *encoding,
        len,
        next: 0,
    })
}

impl SubrangeGrid {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// The window at enumeration position `index`.
    pub fn spec_at(&self, index: usize) -> Result<SubrangeSpec> {
        if index >= self.len {
            return Err(Error::Index(format!(
                "subrange {index} out of range for {} windows",
                self.len
            )));
        }
        let base = (2 * self.bound) as usize;
        let mut coefficients = vec![0i64; self.n];
        let mut rest = index;
        for slot in coefficients.iter_mut().rev() {
            *slot = (rest % base) as i64 - self.bound as i64;
            rest /= base;
        }
        SubrangeSpec::new(coefficients, self.bound, &self.encoding)
    }
}

impl Iterator for SubrangeGrid {
    type Item = SubrangeSpec;

    fn next(&mut self) -> Option<SubrangeSpec> {
        if self.next >= self.len {
            return None;
        }
        let spec = self.spec_at(self.next).ok();
        self.next += 1;
        spec
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.len - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for SubrangeGrid {}

/// Which solver handles each window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Solver {
    BruteForce { cap: usize },
    Anneal(AnnealSchedule),
}

impl Solver {
    pub fn brute_force() -> Self {
        Solver::BruteForce {
            cap: crate::solvers::DEFAULT_BRUTE_FORCE_CAP,
        }
    }

    fn check_capacity(&self, dim: usize) -> Result<()> {
        match self {
            Solver::BruteForce { cap } if dim > *cap => Err(Error::Capacity(format!(
                "exhaustive search over {dim} qubits exceeds the cap of {cap}"
            ))),
            Solver::Anneal(s) => s.validate(),
            _ => Ok(()),
        }
    }
}

/// Outcome of one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubrangeResult {
    pub index: usize,
    #[serde(rename = "T")]
    pub translation: Vec<i64>,
    pub coefficients: Vec<i64>,
    pub target_energy: f64,
    pub best_energy: f64,
    /// Every assignment the solver returned at `best_energy`.
    pub best_assignments: Vec<Assignment>,
    pub hit: bool,
    /// Decoded vectors of `best_assignments`, filled for hits only.
    pub solutions: Vec<Vec<f64>>,
}

impl SubrangeResult {
    pub fn gap(&self) -> f64 {
        self.best_energy - self.target_energy
    }

    pub fn best_assignment(&self) -> &Assignment {
        &self.best_assignments[0]
    }
}

/// Per-window results plus the hit summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub encoding: BinaryEncoding,
    pub bound: u64,
    pub total_range: (i64, i64),
    pub windows: usize,
    pub per_subrange: Vec<SubrangeResult>,
    /// Positions in `per_subrange` whose best energy reached the target.
    pub hits: Vec<usize>,
    /// Smallest-gap window when nothing hit. Its solution is approximate.
    pub approximate: Option<usize>,
    pub stopped_early: bool,
}

impl SweepReport {
    pub fn hit_results(&self) -> impl Iterator<Item = &SubrangeResult> {
        self.hits.iter().map(|&h| &self.per_subrange[h])
    }

    /// First decoded solution of the first hit.
    pub fn solution(&self) -> Option<&[f64]> {
        self.hit_results()
            .next()
            .and_then(|r| r.solutions.first())
            .map(Vec::as_slice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub stop_on_hit: bool,
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            stop_on_hit: false,
            parallel: true,
        }
    }
}

/// True when `best` reaches `target`: exactly for integer problems,
/// otherwise within `HIT_RTOL * max(1, |target|)`.
pub fn is_hit(best: f64, target: f64, integral: bool) -> bool {
    if integral {
        best == target
    } else {
        (best - target).abs() <= HIT_RTOL * target.abs().max(1.0)
    }
}

/// Sweeps every window of the total range `[-s w, s w - 1]`.
pub fn sweep(
    system: &LinearSystem,
    encoding: &BinaryEncoding,
    bound: u64,
    solver: &Solver,
    options: SweepOptions,
) -> Result<SweepReport> {
    let grid = enumerate_subranges(system.n(), encoding, bound)?;
    let dim = encoding.dim(system.n())?;
    solver.check_capacity(dim)?;

    // Every window's QUBO is derived from the untranslated build.
    let base_c = system.b().to_vec();
    let base = build_qubo(system, &base_c, encoding)?;
    let integral = system.is_integral();

    let solve = |index: usize| -> Result<SubrangeResult> {
        let spec = grid.spec_at(index)?;
        let rhs = effective_rhs(system, &spec)?;
        let q = update_linear_for_subrange(&base, system, &base_c, rhs.c(), encoding)?;
        let (best_energy, best_assignments) = match solver {
            Solver::BruteForce { cap } => {
                let g = brute_force_solve_capped(&q, *cap)?;
                (g.min_energy, g.minimizers)
            }
            Solver::Anneal(schedule) => {
                let set = simulated_anneal(&q, schedule)?;
                let ground = set.ground_records();
                (
                    ground[0].energy,
                    ground.iter().map(|r| r.assignment.clone()).collect(),
                )
            }
        };
        let hit = is_hit(best_energy, rhs.target_energy(), integral);
        let solutions = if hit {
            best_assignments
                .iter()
                .map(|a| decode(a, encoding, &spec))
                .collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        Ok(SubrangeResult {
            index,
            translation: spec.translations(),
            coefficients: spec.coefficients().to_vec(),
            target_energy: rhs.target_energy(),
            best_energy,
            best_assignments,
            hit,
            solutions,
        })
    };

    let len = grid.len();
    let mut results = Vec::new();
    let mut stopped_early = false;
    if options.stop_on_hit {
        // Chunks keep "first hit" defined by enumeration order.
        let chunk = if options.parallel {
            rayon::current_num_threads().max(1) * 2
        } else {
            1
        };
        let mut start = 0;
        while start < len {
            let end = (start + chunk).min(len);
            let batch: Vec<SubrangeResult> = if options.parallel {
                (start..end)
                    .into_par_iter()
                    .map(solve)
                    .collect::<Result<_>>()?
            } else {
                (start..end).map(solve).collect::<Result<_>>()?
            };
            if let Some(pos) = batch.iter().position(|r| r.hit) {
                results.extend(batch.into_iter().take(pos + 1));
                stopped_early = start + pos + 1 < len;
                break;
            }
            results.extend(batch);
            start = end;
        }
    } else if options.parallel {
        results = (0..len).into_par_iter().map(solve).collect::<Result<_>>()?;
    } else {
        results = (0..len).map(solve).collect::<Result<_>>()?;
    }

    let hits: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| r.hit)
        .map(|(i, _)| i)
        .collect();
    let approximate = if hits.is_empty() {
        results
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.gap().total_cmp(&b.gap()))
            .map(|(i, _)| i)
    } else {
        None
    };
    let width = encoding.subrange_width()?;
    Ok(SweepReport {
        n: system.n(),
        encoding: *encoding,
        bound,
        total_range: total_range(bound, width),
        windows: len,
        per_subrange: results,
        hits,
        approximate,
        stopped_early,
    })
}

/// `||A x - b||^2`.
pub fn verify_solution(system: &LinearSystem, x: &[f64]) -> Result<f64> {
    let ax = system.apply(x)?;
    Ok(ax
        .iter()
        .zip(system.b())
        .map(|(ax, b)| (ax - b) * (ax - b))
        .sum())
}
