//! Tuples of naturals, finite sets of tuples and vectors of such sets, with
//! the pointwise, majoring and minoring orders, norms, and verification of
//! controlled bad sequences.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WqoError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("malformed sequence record on line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// A k-tuple of naturals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NatTuple(Vec<u64>);

impl NatTuple {
    pub fn new(xs: Vec<u64>) -> Self {
        NatTuple(xs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    /// Maximum coordinate; 0 for the empty tuple.
    pub fn norm(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for NatTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Componentwise order on tuples of equal length.
pub fn leq_pointwise(x: &NatTuple, y: &NatTuple) -> Result<bool, WqoError> {
    if x.len() != y.len() {
        return Err(WqoError::Dimension {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(le(x, y))
}

fn le(x: &NatTuple, y: &NatTuple) -> bool {
    x.0.iter().zip(&y.0).all(|(a, b)| a <= b)
}

/// A finite set of k-tuples.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PowSet {
    k: usize,
    set: BTreeSet<NatTuple>,
}

impl PowSet {
    pub fn new(k: usize) -> Self {
        PowSet { k, set: BTreeSet::new() }
    }

    pub fn from_tuples(k: usize, xs: impl IntoIterator<Item = NatTuple>) -> Result<Self, WqoError> {
        let mut s = PowSet::new(k);
        for x in xs {
            s.insert(x)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, x: NatTuple) -> Result<bool, WqoError> {
        if x.len() != self.k {
            return Err(WqoError::Dimension {
                expected: self.k,
                found: x.len(),
            });
        }
        Ok(self.set.insert(x))
    }

    pub fn tuple_len(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NatTuple> {
        self.set.iter()
    }

    /// `max({|X|} ∪ {‖x‖ : x ∈ X})`; 0 for the empty set.
    pub fn norm(&self) -> u64 {
        let card = self.set.len() as u64;
        self.set.iter().map(NatTuple::norm).fold(card, u64::max)
    }
}

impl fmt::Display for PowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.set.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

fn same_k(x: &PowSet, y: &PowSet) -> Result<(), WqoError> {
    if x.k != y.k {
        return Err(WqoError::Dimension {
            expected: x.k,
            found: y.k,
        });
    }
    Ok(())
}

/// `X ⪯maj Y` iff every member of X is below some member of Y.
pub fn leq_majoring(x: &PowSet, y: &PowSet) -> Result<bool, WqoError> {
    same_k(x, y)?;
    Ok(maj(x, y))
}

/// `X ⪯min Y` iff every member of Y is above some member of X.
pub fn leq_minoring(x: &PowSet, y: &PowSet) -> Result<bool, WqoError> {
    same_k(x, y)?;
    Ok(min(x, y))
}

fn maj(x: &PowSet, y: &PowSet) -> bool {
    x.set.iter().all(|a| y.set.iter().any(|b| le(a, b)))
}

fn min(x: &PowSet, y: &PowSet) -> bool {
    y.set.iter().all(|b| x.set.iter().any(|a| le(a, b)))
}

/// An element of `P_f(ℕ^k)^n`: a list of `n` sets of k-tuples.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PowVector {
    k: usize,
    groups: Vec<PowSet>,
}

impl PowVector {
    pub fn new(k: usize, groups: Vec<PowSet>) -> Result<Self, WqoError> {
        for g in &groups {
            if g.k != k {
                return Err(WqoError::Dimension { expected: k, found: g.k });
            }
        }
        Ok(PowVector { k, groups })
    }

    /// Wraps a single set as a one-group vector.
    pub fn single(x: PowSet) -> Self {
        PowVector {
            k: x.k,
            groups: vec![x],
        }
    }

    pub fn tuple_len(&self) -> usize {
        self.k
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[PowSet] {
        &self.groups
    }

    /// Maximum of the group norms; 0 when there are no groups.
    pub fn norm(&self) -> u64 {
        self.groups.iter().map(PowSet::norm).max().unwrap_or(0)
    }
}

impl fmt::Display for PowVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

fn same_shape(a: &PowVector, b: &PowVector) -> Result<(), WqoError> {
    if a.k != b.k {
        return Err(WqoError::Dimension { expected: a.k, found: b.k });
    }
    if a.groups.len() != b.groups.len() {
        return Err(WqoError::Dimension {
            expected: a.groups.len(),
            found: b.groups.len(),
        });
    }
    Ok(())
}

pub fn leq_majoring_vec(a: &PowVector, b: &PowVector) -> Result<bool, WqoError> {
    same_shape(a, b)?;
    Ok(a.groups.iter().zip(&b.groups).all(|(x, y)| maj(x, y)))
}

pub fn leq_minoring_vec(a: &PowVector, b: &PowVector) -> Result<bool, WqoError> {
    same_shape(a, b)?;
    Ok(a.groups.iter().zip(&b.groups).all(|(x, y)| min(x, y)))
}

/// Which vector order a sequence is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorOrder {
    Majoring,
    Minoring,
}

impl VectorOrder {
    pub fn leq(self, a: &PowVector, b: &PowVector) -> Result<bool, WqoError> {
        match self {
            VectorOrder::Majoring => leq_majoring_vec(a, b),
            VectorOrder::Minoring => leq_minoring_vec(a, b),
        }
    }
}

/// Control functions `g`, all monotone with `g(x) ≥ x`. Arithmetic saturates
/// at `u64::MAX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", content = "param", rename_all = "snake_case")]
pub enum ControlFunction {
    /// `x^c` for `c ≥ 1`.
    Polynomial(u32),
    /// `x + c`.
    AddConst(u64),
    /// `c·x` for `c ≥ 1`.
    MulConst(u64),
    /// `2^(x^c)`.
    ExpPow(u32),
    /// `c·x + c`, the premise growth bound shape.
    Affine(u64),
}

impl ControlFunction {
    pub fn apply(self, x: u64) -> u64 {
        match self {
            ControlFunction::Polynomial(c) => x.max(x.saturating_pow(c.max(1))),
            ControlFunction::AddConst(c) => x.saturating_add(c),
            ControlFunction::MulConst(c) => x.saturating_mul(c.max(1)),
            ControlFunction::ExpPow(c) => {
                let e = x.saturating_pow(c.max(1));
                if e >= 64 {
                    u64::MAX
                } else {
                    (1u64 << e).max(x)
                }
            }
            ControlFunction::Affine(c) => x.saturating_mul(c.max(1)).saturating_add(c),
        }
    }

    /// `g^i(n)`.
    pub fn iterate(self, i: usize, n: u64) -> u64 {
        let mut v = n;
        for _ in 0..i {
            if v == u64::MAX {
                break;
            }
            v = self.apply(v);
        }
        v
    }
}

impl fmt::Display for ControlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlFunction::Polynomial(c) => write!(f, "x^{c}"),
            ControlFunction::AddConst(c) => write!(f, "x+{c}"),
            ControlFunction::MulConst(c) => write!(f, "{c}*x"),
            ControlFunction::ExpPow(c) => write!(f, "2^(x^{c})"),
            ControlFunction::Affine(c) => write!(f, "{c}*x+{c}"),
        }
    }
}

/// A finite sequence over `P_f(ℕ^k)^d` with its control data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlledSequence {
    pub k: usize,
    pub d: usize,
    pub control: ControlFunction,
    pub start: u64,
    pub entries: Vec<PowVector>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `a_i ⪯ a_j` with `i < j`.
    Comparable { i: usize, j: usize },
    /// `‖a_index‖ > g^index(n)`.
    NormExceeded { index: usize, norm: u64, bound: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Comparable { i, j } => write!(f, "entries {i} and {j} are comparable"),
            Violation::NormExceeded { index, norm, bound } => {
                write!(f, "entry {index} has norm {norm} > {bound}")
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    k: usize,
    d: usize,
    control: ControlFunction,
    start: u64,
}

impl ControlledSequence {
    pub fn new(k: usize, d: usize, control: ControlFunction, start: u64) -> Self {
        ControlledSequence {
            k,
            d,
            control,
            start,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, v: PowVector) -> Result<(), WqoError> {
        if v.k != self.k {
            return Err(WqoError::Dimension { expected: self.k, found: v.k });
        }
        if v.groups.len() != self.d {
            return Err(WqoError::Dimension {
                expected: self.d,
                found: v.groups.len(),
            });
        }
        self.entries.push(v);
        Ok(())
    }

    /// Line-delimited JSON: a header record, then one record per entry, each
    /// a list of groups, each a list of tuples.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<(), WqoError> {
        let io = |e: std::io::Error| WqoError::Io(e.to_string());
        let header = Header {
            k: self.k,
            d: self.d,
            control: self.control,
            start: self.start,
        };
        writeln!(w, "{}", serde_json::to_string(&header).expect("serializable")).map_err(io)?;
        for v in &self.entries {
            let groups: Vec<Vec<&NatTuple>> = v.groups.iter().map(|g| g.iter().collect()).collect();
            writeln!(w, "{}", serde_json::to_string(&groups).expect("serializable")).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self, WqoError> {
        let mut lines = r.lines().enumerate();
        let (_, first) = lines.next().ok_or(WqoError::Format {
            line: 1,
            message: "missing header".into(),
        })?;
        let first = first.map_err(|e| WqoError::Io(e.to_string()))?;
        let header: Header = serde_json::from_str(&first).map_err(|e| WqoError::Format {
            line: 1,
            message: e.to_string(),
        })?;
        let mut seq = ControlledSequence::new(header.k, header.d, header.control, header.start);
        for (i, line) in lines {
            let line = line.map_err(|e| WqoError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let groups: Vec<Vec<NatTuple>> = serde_json::from_str(&line).map_err(|e| WqoError::Format {
                line: i + 1,
                message: e.to_string(),
            })?;
            let sets = groups
                .into_iter()
                .map(|g| PowSet::from_tuples(header.k, g))
                .collect::<Result<Vec<_>, _>>()?;
            seq.push(PowVector::new(header.k, sets)?)?;
        }
        Ok(seq)
    }
}

/// Checks badness and control; reports the first violation scanning entries
/// in order (norm of `a_j` first, then pairs `(i, j)` for increasing `i`).
pub fn verify_controlled_bad(seq: &ControlledSequence, order: VectorOrder) -> Result<Option<Violation>, WqoError> {
    let mut bound = seq.start;
    for j in 0..seq.entries.len() {
        if j > 0 {
            bound = seq.control.apply(bound);
        }
        let norm = seq.entries[j].norm();
        if norm > bound {
            return Ok(Some(Violation::NormExceeded { index: j, norm, bound }));
        }
        for i in 0..j {
            if order.leq(&seq.entries[i], &seq.entries[j])? {
                return Ok(Some(Violation::Comparable { i, j }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(xs: &[u64]) -> NatTuple {
        NatTuple::new(xs.to_vec())
    }

    fn s(xs: &[&[u64]]) -> PowSet {
        PowSet::from_tuples(xs.first().map_or(2, |x| x.len()), xs.iter().map(|x| t(x))).unwrap()
    }

    #[test]
    fn pointwise() {
        assert!(leq_pointwise(&t(&[0, 1]), &t(&[1, 1])).unwrap());
        assert!(!leq_pointwise(&t(&[2, 0]), &t(&[1, 1])).unwrap());
        assert!(leq_pointwise(&t(&[]), &t(&[])).unwrap());
        assert!(leq_pointwise(&t(&[1]), &t(&[1, 2])).is_err());
    }

    #[test]
    fn set_orders() {
        let e = PowSet::new(2);
        let y = s(&[&[1, 1], &[5, 0]]);
        assert!(leq_majoring(&e, &y).unwrap());
        assert!(leq_minoring(&y, &e).unwrap());
        let x = s(&[&[0, 1]]);
        assert!(leq_majoring(&x, &y).unwrap());
        assert!(!leq_minoring(&x, &y).unwrap());
        assert!(leq_majoring(&x, &PowSet::new(3)).is_err());
    }

    #[test]
    fn norms() {
        assert_eq!(t(&[3, 1, 2]).norm(), 3);
        assert_eq!(s(&[&[3, 1], &[0, 0], &[1, 5]]).norm(), 5);
        assert_eq!(PowSet::new(2).norm(), 0);
        assert_eq!(t(&[]).norm(), 0);
    }

    fn singles(xs: &[&[u64]], g: ControlFunction, n: u64) -> ControlledSequence {
        let mut seq = ControlledSequence::new(2, 1, g, n);
        for x in xs {
            seq.push(PowVector::single(s(&[x]))).unwrap();
        }
        seq
    }

    #[test]
    fn controlled_examples() {
        let seq = singles(&[&[1, 1], &[0, 3], &[0, 2]], ControlFunction::AddConst(2), 1);
        assert_eq!(verify_controlled_bad(&seq, VectorOrder::Majoring).unwrap(), None);
        let seq = singles(&[&[1, 1], &[0, 3], &[1, 3]], ControlFunction::AddConst(2), 1);
        assert_eq!(
            verify_controlled_bad(&seq, VectorOrder::Majoring).unwrap(),
            Some(Violation::Comparable { i: 0, j: 2 })
        );
        let seq = singles(&[&[1, 1], &[0, 4]], ControlFunction::AddConst(2), 1);
        assert_eq!(
            verify_controlled_bad(&seq, VectorOrder::Minoring).unwrap(),
            Some(Violation::NormExceeded { index: 1, norm: 4, bound: 3 })
        );
    }

    #[test]
    fn control_functions() {
        assert_eq!(ControlFunction::Polynomial(2).apply(3), 9);
        assert_eq!(ControlFunction::MulConst(3).iterate(2, 2), 18);
        assert_eq!(ControlFunction::ExpPow(1).apply(3), 8);
        assert_eq!(ControlFunction::ExpPow(2).apply(100), u64::MAX);
        assert_eq!(ControlFunction::Affine(3).apply(2), 9);
        assert_eq!(ControlFunction::AddConst(1).iterate(5, 0), 5);
    }

    #[test]
    fn jsonl_roundtrip() {
        let seq = singles(&[&[1, 1], &[0, 3]], ControlFunction::ExpPow(2), 4);
        let mut buf = Vec::new();
        seq.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().next().unwrap().contains("\"exp_pow\""));
        let back = ControlledSequence::read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, seq);
    }
}
