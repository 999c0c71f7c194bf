//! Assembly of the least-squares QUBO.
//!
//! Substituting the radix expansion of every variable into
//! `||A x - c||^2 = x^T A^T A x - 2 c^T A x + c^T c` and using `q^2 = q`
//! leaves three coefficient families:
//!
//! * diagonal `(i, l)`: `sum_k a_ki^2 2^(2e) - sum_k 2^(e+1) a_ki c_k`
//! * same variable `(i, l1 < l2)`: `sum_k a_ki^2 2^(e1+e2+1)`
//! * different variables `(i < j, l1, l2)`: `sum_k 2^(e1+e2+1) a_ki a_kj`
//!
//! where `e = lo + l` is the bit exponent. The constant `c^T c` is dropped,
//! so the QUBO minimum over a window holding an exact solution is `-c^T c`.
//!
//! Only the diagonal depends on `c`. Moving to another subrange therefore
//! rewrites the diagonal and leaves every coupler untouched.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BinaryEncoding, LinearSystem, QuboMatrix, SubrangeSpec};

/// Right-hand side after translation, `c = b - A T`, with its target energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveRhs {
    c: Vec<f64>,
    target_energy: f64,
}

impl EffectiveRhs {
    pub fn new(c: Vec<f64>) -> Self {
        let target_energy = -c.iter().map(|v| v * v).sum::<f64>();
        EffectiveRhs { c, target_energy }
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn target_energy(&self) -> f64 {
        self.target_energy
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.c
    }
}

/// Computes `c = b - A T` for the subrange described by `spec`.
pub fn effective_rhs(system: &LinearSystem, spec: &SubrangeSpec) -> Result<EffectiveRhs> {
    if spec.n() != system.n() {
        return Err(Error::dimension(system.n(), spec.n(), "translation vector"));
    }
    let t = spec.translations_f64();
    let at = system.apply(&t)?;
    Ok(EffectiveRhs::new(
        system.b().iter().zip(at).map(|(b, at)| b - at).collect(),
    ))
}

/// The minimum a subrange QUBO can reach, `-c^T c`.
pub fn target_energy(rhs: &EffectiveRhs) -> f64 {
    rhs.target_energy()
}

fn check_rhs(system: &LinearSystem, c: &[f64], what: &str) -> Result<()> {
    if c.len() != system.n() {
        return Err(Error::dimension(system.n(), c.len(), what));
    }
    if let Some(pos) = c.iter().position(|v| !v.is_finite()) {
        return Err(Error::Validation(format!("{what}[{pos}] is not finite")));
    }
    Ok(())
}

/// Builds the upper-triangular QUBO for `||A x - c||^2 - c^T c`.
///
/// Only `A` is read from `system`; `c` takes the place of `b`. Terms are
/// accumulated with the row index `k` outermost so float results do not
/// depend on anything but the inputs.
pub fn build_qubo(
    system: &LinearSystem,
    c: &[f64],
    encoding: &BinaryEncoding,
) -> Result<QuboMatrix> {
    check_rhs(system, c, "c")?;
    let n = system.n();
    let bpv = encoding.bits_per_var();
    let mut q = QuboMatrix::zeros(encoding.dim(n)?)?;
    let idx = |i: usize, l: usize| bpv * i + l;
    let w = |l: usize| encoding.weight(l);

    // Linear terms.
    for k in 0..n {
        for i in 0..n {
            let a = system.a(k, i);
            for l in 0..bpv {
                let square = w(l) * w(l) * a * a;
                let cross = 2.0 * w(l) * a * c[k];
                *q.get_mut(idx(i, l), idx(i, l)) += square - cross;
            }
        }
    }

    // Couplers within one variable.
    for k in 0..n {
        for i in 0..n {
            let a = system.a(k, i);
            for l1 in 0..bpv {
                for l2 in l1 + 1..bpv {
                    *q.get_mut(idx(i, l1), idx(i, l2)) += 2.0 * w(l1) * w(l2) * a * a;
                }
            }
        }
    }

    // Couplers between variables.
    for k in 0..n {
        for i in 0..n {
            let ai = system.a(k, i);
            for j in i + 1..n {
                let aj = system.a(k, j);
                for l1 in 0..bpv {
                    for l2 in 0..bpv {
                        *q.get_mut(idx(i, l1), idx(j, l2)) += 2.0 * w(l1) * w(l2) * ai * aj;
                    }
                }
            }
        }
    }

    Ok(q)
}

/// Moves a QUBO built for `c_old` to `c_new` by rewriting its diagonal.
///
/// Diagonal `(i, l)` shifts by `sum_k 2^(e+1) a_ki (c_old_k - c_new_k)`;
/// couplers are copied unchanged.
pub fn update_linear_for_subrange(
    q: &QuboMatrix,
    system: &LinearSystem,
    c_old: &[f64],
    c_new: &[f64],
    encoding: &BinaryEncoding,
) -> Result<QuboMatrix> {
    check_rhs(system, c_old, "c_old")?;
    check_rhs(system, c_new, "c_new")?;
    let n = system.n();
    let dim = encoding.dim(n)?;
    if q.dim() != dim {
        return Err(Error::dimension(dim, q.dim(), "QUBO"));
    }
    let bpv = encoding.bits_per_var();
    let delta: Vec<f64> = c_old.iter().zip(c_new).map(|(o, n)| o - n).collect();
    let mut out = q.clone();
    if delta.iter().all(|&d| d == 0.0) {
        return Ok(out);
    }
    for i in 0..n {
        // sum_k a_ki (c_old_k - c_new_k), then scaled per bit.
        let mut shift = 0.0;
        for (k, d) in delta.iter().enumerate() {
            shift += system.a(k, i) * d;
        }
        for l in 0..bpv {
            let p = bpv * i + l;
            *out.get_mut(p, p) += 2.0 * encoding.weight(l) * shift;
        }
    }
    Ok(out)
}
