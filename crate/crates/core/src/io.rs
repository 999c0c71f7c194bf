//! Problem and report files, random instances, and sampler-script export.

use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BinaryEncoding, LinearSystem, QuboMatrix, SubrangeSpec};
use crate::search::SweepReport;

pub const SCHEMA_VERSION: u32 = 1;

/// Subrange section of a problem file: either a bound `s` to sweep, or an
/// explicit translation vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubrangeField {
    Explicit {
        #[serde(rename = "T")]
        translations: Vec<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<u64>,
    },
    Bound {
        s: u64,
    },
}

/// On-disk problem description (JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub encoding: BinaryEncoding,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subrange: Option<SubrangeField>,
}

/// A validated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub system: LinearSystem,
    pub encoding: BinaryEncoding,
    /// Explicit window, if the file named one.
    pub spec: Option<SubrangeSpec>,
    /// Sweep bound, if the file named one.
    pub bound: Option<u64>,
}

impl ProblemFile {
    pub fn new(
        system: &LinearSystem,
        encoding: BinaryEncoding,
        subrange: Option<SubrangeField>,
    ) -> Self {
        ProblemFile {
            schema_version: SCHEMA_VERSION,
            n: system.n(),
            a: system.a_row_major().to_vec(),
            b: system.b().to_vec(),
            encoding,
            subrange,
        }
    }

    pub fn validate(&self) -> Result<Problem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Validation(format!(
                "schema_version: unsupported version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let system = LinearSystem::from_row_major(self.n, self.a.clone(), self.b.clone())?;
        let (spec, bound) = match &self.subrange {
            None => (None, None),
            Some(SubrangeField::Bound { s }) => {
                self.encoding.require_subrange_mode()?;
                if *s == 0 {
                    return Err(Error::Validation("subrange.s must be at least 1".into()));
                }
                (None, Some(*s))
            }
            Some(SubrangeField::Explicit { translations, s }) => {
                if translations.len() != self.n {
                    return Err(Error::dimension(self.n, translations.len(), "subrange.T"));
                }
                let spec = SubrangeSpec::from_translations(translations, *s, &self.encoding)?;
                let bound = spec.bound();
                (Some(spec), Some(bound))
            }
        };
        Ok(Problem {
            system,
            encoding: self.encoding,
            spec,
            bound,
        })
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads and validates a problem file.
pub fn load_problem(path: impl AsRef<Path>) -> Result<Problem> {
    load_problem_file(path)?.validate()
}

pub fn load_problem_file(path: impl AsRef<Path>) -> Result<ProblemFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_problem(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_problem(path: impl AsRef<Path>, problem: &ProblemFile) -> Result<()> {
    write_json(path, problem)
}

pub fn save_report(path: impl AsRef<Path>, report: &SweepReport) -> Result<()> {
    write_json(path, report)
}

pub fn report_to_json(report: &SweepReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))
}

pub fn load_report(path: impl AsRef<Path>) -> Result<SweepReport> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Ranges of a random instance. Defaults match numpy's
/// `randint(-10, 10)` and `randint(-128, 127)`, both exclusive above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomInstance {
    pub n: usize,
    pub entries: RangeInclusive<i64>,
    pub solution: RangeInclusive<i64>,
    pub seed: u64,
}

impl RandomInstance {
    pub fn new(n: usize, seed: u64) -> Self {
        RandomInstance {
            n,
            entries: -10..=9,
            solution: -128..=126,
            seed,
        }
    }
}

/// Draws an integer `A` and `x` uniformly and sets `b = A x`.
pub fn gen_random(params: &RandomInstance) -> Result<(LinearSystem, Vec<i64>)> {
    if params.n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    if params.entries.is_empty() {
        return Err(Error::Config(format!(
            "empty entry range {:?}",
            params.entries
        )));
    }
    if params.solution.is_empty() {
        return Err(Error::Config(format!(
            "empty solution range {:?}",
            params.solution
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let a: Vec<i64> = (0..n * n)
        .map(|_| rng.gen_range(params.entries.clone()))
        .collect();
    let x: Vec<i64> = (0..n)
        .map(|_| rng.gen_range(params.solution.clone()))
        .collect();
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc: i64 = 0;
        for i in 0..n {
            acc = a[k * n + i]
                .checked_mul(x[i])
                .and_then(|p| acc.checked_add(p))
                .ok_or_else(|| Error::Capacity("b = A x overflows 64-bit integers".into()))?;
        }
        b.push(acc as f64);
    }
    let system = LinearSystem::from_row_major(n, a.iter().map(|&v| v as f64).collect(), b)?;
    Ok((system, x))
}

/// Formats a coefficient the way Python prints a float (`-120.0`, `0.5`).
fn py_float(v: f64) -> String {
    format!("{v:?}")
}

/// Renders a D-Wave `sample_qubo` script for `q`.
///
/// Labels are 1-based (`'q1'`). Every diagonal entry goes to `linear`;
/// only nonzero couplers go to `quadratic`.
pub fn export_sampler_script(q: &QuboMatrix, num_reads: u64) -> String {
    let mut out = String::new();
    out.push_str("from dwave.system import DWaveSampler, EmbeddingComposite\n");
    out.push_str("sampler_auto = EmbeddingComposite(DWaveSampler(solver={'qpu': True}))\n\n");

    let linear: Vec<String> = (0..q.dim())
        .map(|i| format!("('q{0}','q{0}'): {1}", i + 1, py_float(q.get(i, i))))
        .collect();
    let _ = writeln!(out, "linear = {{{}}}", linear.join(", "));

    let quadratic: Vec<String> = q
        .couplers()
        .map(|(i, j, v)| format!("('q{}','q{}'): {}", i + 1, j + 1, py_float(v)))
        .collect();
    let _ = writeln!(out, "\nquadratic = {{{}}}", quadratic.join(", "));

    out.push_str("\nQ = dict(linear)\n");
    out.push_str("Q.update(quadratic)\n\n");
    let _ = writeln!(
        out,
        "sampleset = sampler_auto.sample_qubo(Q, num_reads={num_reads})"
    );
    out.push_str("print(sampleset)\n");
    out
}
