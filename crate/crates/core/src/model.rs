//! Domain types shared by the builder, the samplers and the subrange search,
//! plus the mapping between real-valued solution vectors and flat qubit
//! assignments.
//!
//! Variable `i` owns the contiguous block of qubits
//! `bits_per_var * i .. bits_per_var * (i + 1)`; bit offset `l` inside the
//! block carries weight `2^(lo + l)`. Negative values are never encoded with
//! sign bits. They are reached by adding a translation `T_i` that is a whole
//! multiple of the subrange width `2^(hi + 1)`.
//!
//! All numeric data is `f64`. For integer inputs every coefficient and energy
//! computed by this crate is exact as long as intermediate magnitudes stay
//! below `2^53`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent magnitude accepted by [`BinaryEncoding`]. Keeps the
/// subrange width representable as an `i64`.
pub const MAX_EXPONENT: i32 = 60;

/// A square linear system `A x = b`, solved in the least-squares sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem", into = "RawSystem")]
pub struct LinearSystem {
    n: usize,
    /// Row-major `n * n`.
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSystem {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<RawSystem> for LinearSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        LinearSystem::from_row_major(raw.n, raw.a, raw.b)
    }
}

impl From<LinearSystem> for RawSystem {
    fn from(s: LinearSystem) -> Self {
        RawSystem {
            n: s.n,
            a: s.a,
            b: s.b,
        }
    }
}

impl LinearSystem {
    /// Builds a system from a row-major `n * n` matrix and a length-`n` RHS.
    pub fn from_row_major(n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation(
                "system dimension must be positive".into(),
            ));
        }
        let expected = n
            .checked_mul(n)
            .ok_or_else(|| Error::Capacity(format!("matrix of dimension {n} is too large")))?;
        if a.len() != expected {
            return Err(Error::Validation(format!(
                "A must be square: expected {expected} entries for n = {n}, got {}",
                a.len()
            )));
        }
        if b.len() != n {
            return Err(Error::dimension(n, b.len(), "b"));
        }
        if let Some(pos) = a.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "A[{}][{}] is not finite",
                pos / n,
                pos % n
            )));
        }
        if let Some(pos) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("b[{pos}] is not finite")));
        }
        Ok(LinearSystem { n, a, b })
    }

    /// Builds a system from matrix rows.
    pub fn from_rows(rows: &[Vec<f64>], b: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        if let Some((k, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Validation(format!(
                "A must be square: row {k} has {} entries, expected {n}",
                row.len()
            )));
        }
        let a = rows.iter().flatten().copied().collect();
        Self::from_row_major(n, a, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn a(&self, row: usize, col: usize) -> f64 {
        self.a[row * self.n + col]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.a[k * self.n..(k + 1) * self.n]
    }

    pub fn a_row_major(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// True when every entry of `A` and `b` is an integer.
    pub fn is_integral(&self) -> bool {
        self.a.iter().chain(&self.b).all(|v| v.fract() == 0.0)
    }

    /// Computes `A x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::dimension(self.n, x.len(), "x"));
        }
        Ok((0..self.n)
            .map(|k| self.row(k).iter().zip(x).map(|(a, x)| a * x).sum())
            .collect())
    }
}

/// Radix-2 layout of one variable: bit offset `l` has weight `2^(lo + l)`.
///
/// `lo < 0` adds fractional bits. Subrange translation needs `lo == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEncoding", into = "RawEncoding")]
pub struct BinaryEncoding {
    lo: i32,
    hi: i32,
}

#[derive(Serialize, Deserialize)]
struct RawEncoding {
    lo: i32,
    hi: i32,
}

impl TryFrom<RawEncoding> for BinaryEncoding {
    type Error = Error;

    fn try_from(raw: RawEncoding) -> Result<Self> {
        BinaryEncoding::new(raw.lo, raw.hi)
    }
}

impl From<BinaryEncoding> for RawEncoding {
    fn from(e: BinaryEncoding) -> Self {
        RawEncoding { lo: e.lo, hi: e.hi }
    }
}

impl BinaryEncoding {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Config(format!(
                "encoding needs lo <= hi, got lo = {lo}, hi = {hi}"
            )));
        }
        if lo < -MAX_EXPONENT || hi > MAX_EXPONENT {
            return Err(Error::Config(format!(
                "encoding exponents must lie in [-{MAX_EXPONENT}, {MAX_EXPONENT}], got {lo}..{hi}"
            )));
        }
        Ok(BinaryEncoding { lo, hi })
    }

    /// Integer encoding with bits `2^0 .. 2^m`.
    pub fn integer(m: u32) -> Result<Self> {
        let hi = i32::try_from(m).map_err(|_| Error::Config(format!("m = {m} is too large")))?;
        Self::new(0, hi)
    }

    /// Integer encoding with `bits` qubits per variable.
    pub fn with_bits(bits: u32) -> Result<Self> {
        if bits == 0 {
            return Err(Error::Config(
                "at least one qubit per variable is required".into(),
            ));
        }
        Self::integer(bits - 1)
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.hi
    }

    pub fn bits_per_var(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    /// Exponent of bit offset `l`, i.e. `lo + l`.
    #[inline]
    pub fn exponent(&self, bit: usize) -> i32 {
        self.lo + bit as i32
    }

    #[inline]
    pub fn weight(&self, bit: usize) -> f64 {
        2f64.powi(self.exponent(bit))
    }

    pub fn is_subrange_mode(&self) -> bool {
        self.lo == 0
    }

    pub fn require_subrange_mode(&self) -> Result<()> {
        if self.is_subrange_mode() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "subrange translation needs integer residues (lo = 0), got lo = {}",
                self.lo
            )))
        }
    }

    /// Width `2^(hi + 1)` of one subrange. Only defined in subrange mode.
    pub fn subrange_width(&self) -> Result<i64> {
        self.require_subrange_mode()?;
        Ok(1i64 << (self.hi + 1))
    }

    /// Number of qubits for an `n`-variable system.
    pub fn dim(&self, n: usize) -> Result<usize> {
        n.checked_mul(self.bits_per_var())
            .ok_or_else(|| Error::Capacity(format!("{n} variables overflow the qubit count")))
    }
}

/// Flat qubit index of bit `bit` of variable `var` in an `n`-variable system.
pub fn qubit_index(var: usize, bit: usize, n: usize, encoding: &BinaryEncoding) -> Result<usize> {
    let bpv = encoding.bits_per_var();
    if var >= n {
        return Err(Error::Index(format!(
            "variable {var} out of range for n = {n}"
        )));
    }
    if bit >= bpv {
        return Err(Error::Index(format!(
            "bit offset {bit} out of range for {bpv} bits per variable"
        )));
    }
    Ok(bpv * var + bit)
}

/// Translation vector placing each variable in one subrange.
///
/// `T_i = coefficient_i * width` with `-bound <= coefficient_i <= bound - 1`,
/// so the total range covered by all subranges of a variable is
/// `[-bound * width, bound * width - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubrangeSpec {
    coefficients: Vec<i64>,
    bound: u64,
    width: i64,
}

impl SubrangeSpec {
    pub fn new(coefficients: Vec<i64>, bound: u64, encoding: &BinaryEncoding) -> Result<Self> {
        let width = encoding.subrange_width()?;
        if bound == 0 {
            return Err(Error::Config("subrange bound s must be at least 1".into()));
        }
        let s = i64::try_from(bound)
            .map_err(|_| Error::Config(format!("subrange bound {bound} is too large")))?;
        for (i, &c) in coefficients.iter().enumerate() {
            if c < -s || c > s - 1 {
                return Err(Error::Domain(format!(
                    "coefficient {c} of variable {i} is outside [-{s}, {}]",
                    s - 1
                )));
            }
            c.checked_mul(width)
                .ok_or_else(|| Error::Capacity(format!("translation {c} * {width} overflows")))?;
        }
        Ok(SubrangeSpec {
            coefficients,
            bound,
            width,
        })
    }

    /// Recovers the coefficients from explicit translation numbers.
    ///
    /// Without an explicit `bound` the smallest bound that admits every
    /// coefficient is used.
    pub fn from_translations(
        translations: &[i64],
        bound: Option<u64>,
        encoding: &BinaryEncoding,
    ) -> Result<Self> {
        let width = encoding.subrange_width()?;
        let mut coefficients = Vec::with_capacity(translations.len());
        for (i, &t) in translations.iter().enumerate() {
            if t.rem_euclid(width) != 0 {
                return Err(Error::Domain(format!(
                    "translation T[{i}] = {t} is not a multiple of the subrange width {width}"
                )));
            }
            coefficients.push(t.div_euclid(width));
        }
        let bound = match bound {
            Some(s) => s,
            None => coefficients
                .iter()
                .map(|&c| {
                    if c < 0 {
                        c.unsigned_abs()
                    } else {
                        c as u64 + 1
                    }
                })
                .max()
                .unwrap_or(1)
                .max(1),
        };
        Self::new(coefficients, bound, encoding)
    }

    /// All-zero translation for `n` variables.
    pub fn zero(n: usize, encoding: &BinaryEncoding) -> Result<Self> {
        Self::new(vec![0; n], 1, encoding)
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn n(&self) -> usize {
        self.coefficients.len()
    }

    pub fn translations(&self) -> Vec<i64> {
        // Overflow was ruled out in `new`.
        self.coefficients.iter().map(|c| c * self.width).collect()
    }

    pub fn translations_f64(&self) -> Vec<f64> {
        self.translations().into_iter().map(|t| t as f64).collect()
    }

    /// Inclusive total range `[-s * width, s * width - 1]` of every variable.
    pub fn total_range(&self) -> (i64, i64) {
        total_range(self.bound, self.width)
    }
}

pub(crate) fn total_range(bound: u64, width: i64) -> (i64, i64) {
    let s = bound as i64;
    (-s * width, s * width - 1)
}

/// Upper-triangular QUBO coefficient matrix; energy is `q^T Q q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQubo", into = "RawQubo")]
pub struct QuboMatrix {
    dim: usize,
    entries: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawQubo {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawQubo> for QuboMatrix {
    type Error = Error;

    fn try_from(raw: RawQubo) -> Result<Self> {
        if raw.rows.len() != raw.dim {
            return Err(Error::dimension(raw.dim, raw.rows.len(), "QUBO rows"));
        }
        QuboMatrix::from_rows(&raw.rows)
    }
}

impl From<QuboMatrix> for RawQubo {
    fn from(q: QuboMatrix) -> Self {
        RawQubo {
            dim: q.dim,
            rows: q.rows(),
        }
    }
}

impl QuboMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Validation("QUBO dimension must be positive".into()));
        }
        let len = dim
            .checked_mul(dim)
            .ok_or_else(|| Error::Capacity(format!("QUBO of dimension {dim} is too large")))?;
        Ok(QuboMatrix {
            dim,
            entries: vec![0.0; len],
        })
    }

    /// Builds a matrix from rows. Every entry below the diagonal must be zero.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut q = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::dimension(dim, row.len(), &format!("QUBO row {i}")));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Validation(format!("Q[{i}][{j}] is not finite")));
                }
                if j < i && v != 0.0 {
                    return Err(Error::Validation(format!(
                        "Q[{i}][{j}] = {v} lies below the diagonal"
                    )));
                }
                q.entries[i * dim + j] = v;
            }
        }
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_major(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == 0.0))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.fract() == 0.0)
    }

    /// Nonzero strictly-upper entries as `(i, j, value)` in row-major order.
    pub fn couplers(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            (i + 1..self.dim).filter_map(move |j| {
                let v = self.get(i, j);
                (v != 0.0).then_some((i, j, v))
            })
        })
    }
}

/// A binary vector over all qubits of a QUBO.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Assignment(Vec<u8>);

impl TryFrom<Vec<u8>> for Assignment {
    type Error = Error;

    fn try_from(bits: Vec<u8>) -> Result<Self> {
        Assignment::new(bits)
    }
}

impl From<Assignment> for Vec<u8> {
    fn from(a: Assignment) -> Self {
        a.0
    }
}

impl Assignment {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::Validation(format!(
                "bit {pos} has value {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(Assignment(bits))
    }

    pub fn zeros(dim: usize) -> Self {
        Assignment(vec![0; dim])
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Assignment(bits.iter().map(|&b| b as u8).collect())
    }

    /// The low `dim` bits of `mask`, bit 0 first.
    pub fn from_mask(mask: u64, dim: usize) -> Self {
        Assignment((0..dim).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn is_set(&self, i: usize) -> bool {
        self.0[i] == 1
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Builds the assignment whose variable blocks hold the given residues.
///
/// Each residue must be a nonnegative integer representable in the
/// encoding's integer bits. Subrange mode only.
pub fn encode_residues(residues: &[i64], encoding: &BinaryEncoding) -> Result<Assignment> {
    let width = encoding.subrange_width()?;
    let bpv = encoding.bits_per_var();
    let mut bits = Vec::with_capacity(residues.len() * bpv);
    for (i, &r) in residues.iter().enumerate() {
        if !(0..width).contains(&r) {
            return Err(Error::Domain(format!(
                "residue {r} of variable {i} is outside [0, {width})"
            )));
        }
        bits.extend((0..bpv).map(|l| ((r >> l) & 1) as u8));
    }
    Ok(Assignment(bits))
}

/// Radix value of every variable block, without translation.
pub fn decode_residues(
    assignment: &Assignment,
    n: usize,
    encoding: &BinaryEncoding,
) -> Result<Vec<f64>> {
    let dim = encoding.dim(n)?;
    if assignment.len() != dim {
        return Err(Error::dimension(dim, assignment.len(), "assignment"));
    }
    let bpv = encoding.bits_per_var();
    Ok(assignment
        .bits()
        .chunks(bpv)
        .map(|block| {
            block
                .iter()
                .enumerate()
                .filter(|(_, &b)| b == 1)
                .map(|(l, _)| encoding.weight(l))
                .sum()
        })
        .collect())
}

/// Decodes an assignment into `x'_i = sum_l 2^(lo + l) q_{i,l} + T_i`.
pub fn decode(
    assignment: &Assignment,
    encoding: &BinaryEncoding,
    spec: &SubrangeSpec,
) -> Result<Vec<f64>> {
    let width = encoding.subrange_width()?;
    if width != spec.width() {
        return Err(Error::Config(format!(
            "subrange width {} does not match the encoding width {width}",
            spec.width()
        )));
    }
    let mut x = decode_residues(assignment, spec.n(), encoding)?;
    for (xi, t) in x.iter_mut().zip(spec.translations()) {
        *xi += t as f64;
    }
    Ok(x)
}

/// Splits an integer into `(coefficient, residue)` with
/// `value = coefficient * width + residue` and `0 <= residue < width`.
///
/// Floor division, so negative values land in the subrange below zero:
/// `-17` with width 16 gives `(-2, 15)`.
pub fn subrange_of(value: f64, encoding: &BinaryEncoding) -> Result<(i64, i64)> {
    encoding.require_subrange_mode()?;
    if !value.is_finite() || value.fract() != 0.0 {
        return Err(Error::Domain(format!(
            "{value} is not an integer; subrange mode only represents integers"
        )));
    }
    if value.abs() >= 2f64.powi(63) {
        return Err(Error::Domain(format!("{value} does not fit in 64 bits")));
    }
    subrange_of_int(value as i64, encoding)
}

pub fn subrange_of_int(value: i64, encoding: &BinaryEncoding) -> Result<(i64, i64)> {
    let width = encoding.subrange_width()?;
    Ok((value.div_euclid(width), value.rem_euclid(width)))
}

/// Encodes an integer vector as (assignment, translation) inside a total
/// range with bound `s`.
pub fn encode_integer(
    x: &[i64],
    encoding: &BinaryEncoding,
    bound: u64,
) -> Result<(Assignment, SubrangeSpec)> {
    let mut coefficients = Vec::with_capacity(x.len());
    let mut residues = Vec::with_capacity(x.len());
    for &v in x {
        let (c, r) = subrange_of_int(v, encoding)?;
        coefficients.push(c);
        residues.push(r);
    }
    let spec = SubrangeSpec::new(coefficients, bound, encoding)?;
    Ok((encode_residues(&residues, encoding)?, spec))
}

/// One distinct sampled assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub assignment: Assignment,
    pub energy: f64,
    pub occurrences: u64,
}

/// Aggregated sampler output, ascending by energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    records: Vec<SampleRecord>,
    total_reads: u64,
}

impl SampleSet {
    /// Sorts records by energy (ties by assignment) and checks the read count.
    pub fn new(mut records: Vec<SampleRecord>, total_reads: u64) -> Result<Self> {
        if total_reads == 0 {
            return Err(Error::Config("a sample set needs at least one read".into()));
        }
        let seen: u64 = records.iter().map(|r| r.occurrences).sum();
        if seen > total_reads {
            return Err(Error::Validation(format!(
                "{seen} occurrences exceed {total_reads} total reads"
            )));
        }
        records.sort_by(|a, b| {
            a.energy
                .total_cmp(&b.energy)
                .then_with(|| a.assignment.cmp(&b.assignment))
        });
        Ok(SampleSet {
            records,
            total_reads,
        })
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn total_reads(&self) -> u64 {
        self.total_reads
    }

    pub fn lowest(&self) -> Option<&SampleRecord> {
        self.records.first()
    }

    /// All records sharing the lowest energy.
    pub fn ground_records(&self) -> &[SampleRecord] {
        match self.records.first() {
            Some(first) => {
                let end = self
                    .records
                    .iter()
                    .position(|r| r.energy != first.energy)
                    .unwrap_or(self.records.len());
                &self.records[..end]
            }
            None => &[],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> BinaryEncoding {
        BinaryEncoding::integer(3).unwrap()
    }

    #[test]
    fn qubit_index_layout() {
        let four = BinaryEncoding::with_bits(4).unwrap();
        let two = BinaryEncoding::with_bits(2).unwrap();
        assert_eq!(qubit_index(0, 0, 2, &four).unwrap(), 0);
        // x'_2 starts at q5 (1-based) in the 2x2 worked example.
        assert_eq!(qubit_index(1, 0, 2, &four).unwrap(), 4);
        assert_eq!(qubit_index(2, 1, 3, &two).unwrap(), 5);
        assert!(matches!(qubit_index(2, 0, 2, &four), Err(Error::Index(_))));
        assert!(matches!(qubit_index(0, 4, 2, &four), Err(Error::Index(_))));
    }

    #[test]
    fn qubit_index_is_a_bijection() {
        let enc = BinaryEncoding::new(-2, 3).unwrap();
        let n = 5;
        let mut seen = vec![false; enc.dim(n).unwrap()];
        for var in 0..n {
            for bit in 0..enc.bits_per_var() {
                let k = qubit_index(var, bit, n, &enc).unwrap();
                assert!(!seen[k]);
                seen[k] = true;
            }
        }
        assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn decode_examples() {
        let enc = m3();
        let spec = SubrangeSpec::from_translations(&[16, -32], None, &enc).unwrap();
        let bits = Assignment::new(vec![1, 0, 1, 0, 1, 1, 1, 1]).unwrap();
        assert_eq!(decode(&bits, &enc, &spec).unwrap(), vec![21.0, -17.0]);

        let zero = SubrangeSpec::zero(2, &enc).unwrap();
        assert_eq!(
            decode(&Assignment::zeros(8), &enc, &zero).unwrap(),
            vec![0.0, 0.0]
        );
        let ones = Assignment::new(vec![1; 8]).unwrap();
        assert_eq!(decode(&ones, &enc, &zero).unwrap(), vec![15.0, 15.0]);
    }

    #[test]
    fn decode_rejects_length_mismatch() {
        let enc = m3();
        let zero = SubrangeSpec::zero(2, &enc).unwrap();
        assert!(matches!(
            decode(&Assignment::zeros(7), &enc, &zero),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn fractional_residues() {
        let enc = BinaryEncoding::new(-2, 1).unwrap();
        let bits = Assignment::new(vec![1, 0, 0, 1, 0, 1, 1, 0]).unwrap();
        assert_eq!(decode_residues(&bits, 2, &enc).unwrap(), vec![2.25, 1.5]);
        assert!(matches!(enc.subrange_width(), Err(Error::Domain(_))));
    }

    #[test]
    fn subrange_of_examples() {
        let enc = m3();
        assert_eq!(subrange_of(21.0, &enc).unwrap(), (1, 5));
        assert_eq!(subrange_of(-17.0, &enc).unwrap(), (-2, 15));
        assert_eq!(subrange_of(0.0, &enc).unwrap(), (0, 0));
        assert_eq!(
            subrange_of(0.0, &BinaryEncoding::integer(0).unwrap()).unwrap(),
            (0, 0)
        );
        assert!(matches!(subrange_of(1.5, &enc), Err(Error::Domain(_))));
        assert!(matches!(subrange_of(f64::NAN, &enc), Err(Error::Domain(_))));
        let frac = BinaryEncoding::new(-1, 3).unwrap();
        assert!(matches!(subrange_of(3.0, &frac), Err(Error::Domain(_))));
    }

    #[test]
    fn four_bit_total_range_splits_into_eight_windows() {
        let enc = m3();
        let spec = SubrangeSpec::new(vec![0], 4, &enc).unwrap();
        assert_eq!(spec.width(), 16);
        assert_eq!(spec.total_range(), (-64, 63));
        let mut covered = std::collections::BTreeMap::new();
        for v in -64..=63 {
            let (c, r) = subrange_of_int(v, &enc).unwrap();
            assert!((-4..4).contains(&c));
            assert_eq!(c * 16 + r, v);
            *covered.entry(c).or_insert(0) += 1;
        }
        assert_eq!(covered.len(), 8);
        assert!(covered.values().all(|&count| count == 16));
    }

    #[test]
    fn subrange_spec_validation() {
        let enc = m3();
        assert!(SubrangeSpec::new(vec![4], 4, &enc).is_err());
        assert!(SubrangeSpec::new(vec![-5], 4, &enc).is_err());
        assert!(SubrangeSpec::new(vec![-4, 3], 4, &enc).is_ok());
        assert!(SubrangeSpec::new(vec![0], 0, &enc).is_err());
        assert!(matches!(
            SubrangeSpec::from_translations(&[8], None, &enc),
            Err(Error::Domain(_))
        ));
        let spec = SubrangeSpec::from_translations(&[16, -32], None, &enc).unwrap();
        assert_eq!(spec.coefficients(), &[1, -2]);
        assert_eq!(spec.bound(), 2);
    }

    #[test]
    fn system_validation() {
        assert!(matches!(
            LinearSystem::from_rows(&[vec![1.0, 2.0], vec![3.0]], vec![1.0, 2.0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            LinearSystem::from_rows(&[vec![1.0]], vec![1.0, 2.0]),
            Err(Error::Dimension(_))
        ));
        assert!(LinearSystem::from_rows(&[vec![f64::INFINITY]], vec![1.0]).is_err());
        assert!(LinearSystem::from_row_major(0, vec![], vec![]).is_err());
    }

    #[test]
    fn qubo_rejects_lower_entries() {
        assert!(QuboMatrix::from_rows(&[vec![1.0, 0.0], vec![2.0, 1.0]]).is_err());
        let q = QuboMatrix::from_rows(&[vec![1.0, 3.0], vec![0.0, 1.0]]).unwrap();
        assert!(q.is_upper_triangular());
        assert_eq!(q.couplers().collect::<Vec<_>>(), vec![(0, 1, 3.0)]);
    }

    #[test]
    fn sample_set_orders_and_checks_reads() {
        let rec = |bits: Vec<u8>, energy: f64, occurrences| SampleRecord {
            assignment: Assignment::new(bits).unwrap(),
            energy,
            occurrences,
        };
        let set = SampleSet::new(
            vec![
                rec(vec![1, 0], 3.0, 2),
                rec(vec![0, 1], -1.0, 1),
                rec(vec![1, 1], -1.0, 1),
            ],
            4,
        )
        .unwrap();
        let energies: Vec<f64> = set.records().iter().map(|r| r.energy).collect();
        assert_eq!(energies, vec![-1.0, -1.0, 3.0]);
        assert_eq!(set.ground_records().len(), 2);
        assert!(SampleSet::new(vec![rec(vec![0], 0.0, 5)], 4).is_err());
    }

    #[test]
    fn assignment_rejects_non_binary() {
        assert!(Assignment::new(vec![0, 2]).is_err());
        assert_eq!(Assignment::from_mask(0b101, 4).bits(), &[1, 0, 1, 0]);
    }
}
