//! Fixtures and reference computations shared by the integration suites.
//! Nothing here calls the QUBO builder or the solvers.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subqubo::LinearSystem;

pub const PAPER_A: [[i64; 2]; 2] = [[3, 1], [-1, 2]];
pub const PAPER_B: [i64; 2] = [46, -55];
pub const PAPER_T: [i64; 2] = [16, -32];
pub const PAPER_X: [i64; 2] = [21, -17];
pub const PAPER_BITS: [u8; 8] = [1, 0, 1, 0, 1, 1, 1, 1];

/// The subrange matrix printed for T = (16, -32), 4 qubits per variable.
pub const PAPER_Q_PRIME: [[f64; 8]; 8] = [
    [-120.0, 40.0, 80.0, 160.0, 2.0, 4.0, 8.0, 16.0],
    [0.0, -220.0, 160.0, 320.0, 4.0, 8.0, 16.0, 32.0],
    [0.0, 0.0, -360.0, 640.0, 8.0, 16.0, 32.0, 64.0],
    [0.0, 0.0, 0.0, -400.0, 16.0, 32.0, 64.0, 128.0],
    [0.0, 0.0, 0.0, 0.0, -155.0, 20.0, 40.0, 80.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, -300.0, 80.0, 160.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -560.0, 320.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -960.0],
];

/// The untranslated matrix as printed, including its two misprinted
/// diagonal entries at (0, 0) and (4, 4).
pub const PAPER_Q_PRINTED: [[f64; 8]; 8] = [
    [-3760.0, 40.0, 80.0, 160.0, 2.0, 4.0, 8.0, 16.0],
    [0.0, -732.0, 160.0, 320.0, 4.0, 8.0, 16.0, 32.0],
    [0.0, 0.0, -1384.0, 640.0, 8.0, 16.0, 32.0, 64.0],
    [0.0, 0.0, 0.0, -2448.0, 16.0, 32.0, 64.0, 128.0],
    [0.0, 0.0, 0.0, 0.0, -133.0, 20.0, 40.0, 80.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 276.0, 80.0, 160.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 592.0, 320.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1344.0],
];

pub fn paper_system() -> LinearSystem {
    to_system(
        &PAPER_A.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        &PAPER_B,
    )
}

pub fn to_system(a: &[Vec<i64>], b: &[i64]) -> LinearSystem {
    LinearSystem::from_rows(
        &a.iter()
            .map(|r| r.iter().map(|&v| v as f64).collect())
            .collect::<Vec<_>>(),
        b.iter().map(|&v| v as f64).collect(),
    )
    .unwrap()
}

/// `||A r - c||^2 - c^T c` in exact integer arithmetic, where `r_i` is the
/// plain binary value of variable `i`'s block of `bits`.
pub fn energy_oracle(a: &[Vec<i64>], c: &[i64], bits_per_var: usize, bits: &[u8]) -> i128 {
    let n = a.len();
    let r: Vec<i128> = (0..n)
        .map(|i| {
            (0..bits_per_var)
                .map(|l| (bits[i * bits_per_var + l] as i128) << l)
                .sum()
        })
        .collect();
    let mut total: i128 = 0;
    for k in 0..n {
        let ar: i128 = (0..n).map(|i| a[k][i] as i128 * r[i]).sum();
        let d = ar - c[k] as i128;
        total += d * d - (c[k] as i128) * (c[k] as i128);
    }
    total
}

/// `c = b - A T` with integers.
pub fn rhs_oracle(a: &[Vec<i64>], b: &[i64], t: &[i64]) -> Vec<i64> {
    (0..a.len())
        .map(|k| b[k] - (0..a.len()).map(|i| a[k][i] * t[i]).sum::<i64>())
        .collect()
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// An instance in the style of the reference generator: integer `A` with
/// entries in `[-10, 9]`, integer `x` inside the total range of the
/// encoding, `b = A x`. Singular draws of `A` are rejected.
#[derive(Debug, Clone)]
pub struct Instance {
    pub a: Vec<Vec<i64>>,
    pub x: Vec<i64>,
    pub b: Vec<i64>,
    pub bits: u32,
    pub bound: u64,
}

impl Instance {
    pub fn system(&self) -> LinearSystem {
        to_system(&self.a, &self.b)
    }

    pub fn width(&self) -> i64 {
        1 << self.bits
    }

    /// Translation of the window containing `x`.
    pub fn solution_window(&self) -> Vec<i64> {
        let w = self.width();
        self.x.iter().map(|v| v.div_euclid(w) * w).collect()
    }
}

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, bits: u32, bound: u64) -> Instance {
    let a = loop {
        let a: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-10..=9)).collect())
            .collect();
        if determinant(&a) != 0 {
            break a;
        }
    };
    let half = bound as i64 * (1 << bits);
    let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-half..half)).collect();
    let b = (0..n)
        .map(|k| (0..n).map(|i| a[k][i] * x[i]).sum())
        .collect();
    Instance {
        a,
        x,
        b,
        bits,
        bound,
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rows(m: &[[f64; 8]; 8]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}
