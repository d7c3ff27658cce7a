//! Sparse exact matrices indexed by basis bitstrings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::scalar::ExactScalar;

/// A `2^n_out × 2^n_in` matrix. Row and column keys read the first wire as
/// the most significant bit; absent entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n_out: usize,
    n_in: usize,
    entries: BTreeMap<(u64, u64), ExactScalar>,
}

impl ExactMatrix {
    pub fn zeros(n_out: usize, n_in: usize) -> Self {
        assert!(n_out < 64 && n_in < 64, "at most 63 wires per side");
        ExactMatrix { n_out, n_in, entries: BTreeMap::new() }
    }

    pub fn scalar(s: ExactScalar) -> Self {
        let mut m = ExactMatrix::zeros(0, 0);
        m.set(0, 0, s);
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..1u64 << n {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    /// A column vector `Σ v_i |i⟩`.
    pub fn column(values: &[ExactScalar]) -> Self {
        let n = values.len().trailing_zeros() as usize;
        assert_eq!(values.len(), 1 << n, "length must be a power of two");
        let mut m = ExactMatrix::zeros(n, 0);
        for (i, v) in values.iter().enumerate() {
            m.set(i as u64, 0, v.clone());
        }
        m
    }

    /// Builds a matrix from integer rows.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let n_out = rows.len().trailing_zeros() as usize;
        let n_in = rows.first().map_or(0, |r| r.len().trailing_zeros() as usize);
        let mut m = ExactMatrix::zeros(n_out, n_in);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), 1 << n_in);
            for (c, &v) in row.iter().enumerate() {
                m.set(r as u64, c as u64, ExactScalar::from(v));
            }
        }
        m
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn get(&self, row: u64, col: u64) -> ExactScalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    /// Stores an entry; zero removes it.
    pub fn set(&mut self, row: u64, col: u64, v: ExactScalar) {
        assert!(row >> self.n_out == 0 && col >> self.n_in == 0, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    pub(crate) fn add_to(&mut self, row: u64, col: u64, v: &ExactScalar) {
        let sum = self.get(row, col) + v.clone();
        self.set(row, col, sum);
    }

    /// Nonzero entries in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, &ExactScalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// The single entry of a `1 × 1` matrix.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        (self.n_out == 0 && self.n_in == 0).then(|| self.get(0, 0))
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix {
            n_out: self.n_in,
            n_in: self.n_out,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    /// Entries are real, so this is the transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose()
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut m = ExactMatrix::zeros(self.n_out, self.n_in);
        for (&(r, c), v) in &self.entries {
            m.set(r, c, v * s);
        }
        m
    }

    /// All entries with value exactly `k`.
    pub fn positions_of<'a>(&'a self, k: &'a ExactScalar) -> impl Iterator<Item = (u64, u64)> + 'a {
        let zero = k.is_zero();
        (0..1u64 << self.n_in).flat_map(move |c| {
            (0..1u64 << self.n_out).filter_map(move |r| {
                let hit = match self.entries.get(&(r, c)) {
                    Some(v) => v == k,
                    None => zero,
                };
                hit.then_some((r, c))
            })
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serialization is infallible")
    }

    /// Grid rendering with pretty-printed entries, for small matrices.
    pub fn to_grid(&self) -> String {
        let rows: Vec<Vec<String>> = (0..1u64 << self.n_out)
            .map(|r| (0..1u64 << self.n_in).map(|c| self.get(r, c).pretty()).collect())
            .collect();
        let width = rows.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
        rows.iter()
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|s| format!("{:>width$}", s)).collect();
                format!("[{}]", cells.join(" "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grid())
    }
}

/// `a · b`.
pub fn matrix_compose(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix, EvalError> {
    if a.n_in != b.n_out {
        return Err(EvalError::ArityMismatch { expected: a.n_in, found: b.n_out });
    }
    let mut by_row: BTreeMap<u64, Vec<(u64, &ExactScalar)>> = BTreeMap::new();
    for (&(r, c), v) in &b.entries {
        by_row.entry(r).or_default().push((c, v));
    }
    let mut acc: BTreeMap<(u64, u64), ExactScalar> = BTreeMap::new();
    for (&(r, k), va) in &a.entries {
        if let Some(list) = by_row.get(&k) {
            for &(c, vb) in list {
                *acc.entry((r, c)).or_default() += va * vb;
            }
        }
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(ExactMatrix { n_out: a.n_out, n_in: b.n_in, entries: acc })
}

/// Kronecker product; the wires of `a` come first.
pub fn matrix_tensor(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(a.n_out + b.n_out, a.n_in + b.n_in);
    for (&(ra, ca), va) in &a.entries {
        for (&(rb, cb), vb) in &b.entries {
            m.entries.insert(((ra << b.n_out) | rb, (ca << b.n_in) | cb), va * vb);
        }
    }
    m
}

/// `bits` as a `0`/`1` string, most significant of `n` first.
pub fn bit_string(bits: u64, n: usize) -> String {
    (0..n).map(|i| if (bits >> (n - 1 - i)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Packs a bit vector, first bit most significant.
pub fn pack_bits(bits: &[bool]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
}

/// Parses a `0`/`1` string; whitespace is ignored.
pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    row: String,
    col: String,
    val: ExactScalar,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n_out: usize,
    n_in: usize,
    entries: Vec<EntryRepr>,
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            n_out: self.n_out,
            n_in: self.n_in,
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| EntryRepr {
                    row: bit_string(r, self.n_out),
                    col: bit_string(c, self.n_in),
                    val: v.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = MatrixRepr::deserialize(d)?;
        if r.n_out >= 64 || r.n_in >= 64 {
            return Err(D::Error::custom("at most 63 wires per side"));
        }
        let mut m = ExactMatrix::zeros(r.n_out, r.n_in);
        for e in r.entries {
            let key = |s: &str, n: usize| match parse_bits(s) {
                Some(b) if b.len() == n => Ok(pack_bits(&b)),
                _ => Err(D::Error::custom(format!("`{s}` is not a bitstring of length {n}"))),
            };
            m.set(key(&e.row, r.n_out)?, key(&e.col, r.n_in)?, e.val);
        }
        Ok(m)
    }
}
