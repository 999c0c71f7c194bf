//! Linear least-squares problems as QUBO instances.
//!
//! Each unknown of `A x = b` is written as `sum_l 2^l q_l + T`, where the
//! qubits `q_l` cover one window of width `2^(m+1)` and the translation `T`
//! picks which window. For a window with effective right-hand side
//! `c = b - A T` the QUBO energy of an assignment equals
//! `||A x - c||^2 - c^T c`, so the window containing an exact solution is the
//! one whose ground-state energy is `-c^T c`.
//!
//! ```
//! use subqubo::{build_qubo, brute_force_solve, decode, effective_rhs};
//! use subqubo::{BinaryEncoding, LinearSystem, SubrangeSpec};
//!
//! let system = LinearSystem::from_rows(&[vec![3.0, 1.0], vec![-1.0, 2.0]], vec![46.0, -55.0])?;
//! let encoding = BinaryEncoding::integer(3)?;
//! let spec = SubrangeSpec::from_translations(&[16, -32], None, &encoding)?;
//! let rhs = effective_rhs(&system, &spec)?;
//! let q = build_qubo(&system, rhs.c(), &encoding)?;
//! let ground = brute_force_solve(&q)?;
//! assert_eq!(ground.min_energy, rhs.target_energy());
//! assert_eq!(decode(&ground.minimizers[0], &encoding, &spec)?, vec![21.0, -17.0]);
//! # Ok::<(), subqubo::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod builder;
pub mod error;
pub mod io;
pub mod model;
pub mod search;
pub mod solvers;

pub use builder::{
    build_qubo, effective_rhs, target_energy, update_linear_for_subrange, EffectiveRhs,
};
pub use error::{Error, Result};
pub use io::{
    export_sampler_script, gen_random, load_problem, save_problem, save_report, ProblemFile,
    RandomInstance, SubrangeField,
};
pub use model::{
    decode, decode_residues, encode_integer, encode_residues, qubit_index, subrange_of, Assignment,
    BinaryEncoding, LinearSystem, QuboMatrix, SampleRecord, SampleSet, SubrangeSpec,
};
pub use search::{enumerate_subranges, sweep, verify_solution, Solver, SweepOptions, SweepReport};
pub use solvers::{
    brute_force_solve, brute_force_solve_capped, energy, simulated_anneal, AnnealSchedule,
    GroundStates,
};
