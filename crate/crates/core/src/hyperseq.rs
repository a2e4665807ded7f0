//! Sequents and hypersequents, their sizes, the two reachability orders and
//! the `#` encoding into vectors of finite sets of tuples.
//!
//! Two representations are provided. [`Hypersequent`] is the formula-level
//! value used at API boundaries and by the checker. [`IxHyper`] is a dense
//! encoding relative to a fixed [`OmegaSet`] used by the engines: each
//! component is a slice `[succ, m_1, .., m_d]` where `succ` is 0 for the empty
//! succedent and `k` for `F_k`, and `m_k` is the multiplicity of `F_k`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse_with, ConcreteLeaves, Formula, OmegaSet};
use crate::syntax::{Cursor, ParseError, Tok};
use crate::wqo::{NatTuple, PowSet, PowVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperseqError {
    #[error("formula `{0}` is not in the vocabulary")]
    OutsideOmega(String),
}

/// A finite multiset of formulas, stored as a sorted list of
/// `(formula, multiplicity)` pairs with multiplicities at least 1.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multiset {
    items: Vec<(Formula, u32)>,
}

impl Multiset {
    pub fn new() -> Self {
        Multiset { items: Vec::new() }
    }

    pub fn from_formulas(fs: impl IntoIterator<Item = Formula>) -> Self {
        let mut m = Multiset::new();
        for f in fs {
            m.add(f, 1);
        }
        m
    }

    pub fn add(&mut self, f: Formula, n: u32) {
        if n == 0 {
            return;
        }
        match self.items.binary_search_by(|(g, _)| g.cmp(&f)) {
            Ok(i) => self.items[i].1 += n,
            Err(i) => self.items.insert(i, (f, n)),
        }
    }

    pub fn count(&self, f: &Formula) -> u32 {
        match self.items.binary_search_by(|(g, _)| g.cmp(f)) {
            Ok(i) => self.items[i].1,
            Err(_) => 0,
        }
    }

    /// Total number of formula occurrences.
    pub fn len(&self) -> usize {
        self.items.iter().map(|(_, n)| *n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, u32)> {
        self.items.iter().map(|(f, n)| (f, *n))
    }

    /// Every occurrence, repeated by multiplicity, in sorted order.
    pub fn occurrences(&self) -> impl Iterator<Item = &Formula> {
        self.items.iter().flat_map(|(f, n)| std::iter::repeat_n(f, *n as usize))
    }

    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (f, n) in other.iter() {
            out.add(f.clone(), n);
        }
        out
    }

    pub fn is_submultiset_of(&self, other: &Multiset) -> bool {
        self.iter().all(|(f, n)| other.count(f) >= n)
    }

    /// `other ∖ self` when `self` is a submultiset of `other`.
    pub fn difference_from(&self, other: &Multiset) -> Option<Multiset> {
        if !self.is_submultiset_of(other) {
            return None;
        }
        let mut out = Multiset::new();
        for (f, n) in other.iter() {
            out.add(f.clone(), n - self.count(f));
        }
        Some(out)
    }

    pub fn symbol_size(&self) -> usize {
        let formulas: usize = self.iter().map(|(f, n)| f.size() * n as usize).sum();
        formulas + self.len().saturating_sub(1)
    }
}

impl Serialize for Multiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.occurrences())
    }
}

impl<'de> Deserialize<'de> for Multiset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Multiset::from_formulas(Vec::<Formula>::deserialize(d)?))
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.occurrences().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// `X => Π` with a multiset antecedent and at most one succedent formula.
/// Field order fixes the canonical ordering: by succedent, then antecedent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub succ: Option<Formula>,
    pub ant: Multiset,
}

impl Sequent {
    pub fn new(ant: Multiset, succ: Option<Formula>) -> Self {
        Sequent { succ, ant }
    }

    pub fn symbol_size(&self) -> usize {
        self.ant.symbol_size() + 1 + self.succ.as_ref().map_or(0, |f| f.size())
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ant.iter().map(|(f, _)| f).chain(self.succ.iter())
    }

    /// Same succedent and antecedent a submultiset of `other`'s.
    pub fn weakens_to(&self, other: &Sequent) -> bool {
        self.succ == other.succ && self.ant.is_submultiset_of(&other.ant)
    }

    /// `self` is obtainable from `other` by contractions: same succedent,
    /// pointwise smaller antecedent with the same support.
    pub fn contraction_of(&self, other: &Sequent) -> bool {
        self.succ == other.succ
            && self.ant.is_submultiset_of(&other.ant)
            && other.ant.iter().all(|(f, _)| self.ant.count(f) >= 1)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ant.is_empty() {
            f.write_str("=>")?;
        } else {
            for (i, x) in self.ant.occurrences().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(" =>")?;
        }
        if let Some(s) = &self.succ {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sequent({self})")
    }
}

/// A finite multiset of sequents (possibly empty), kept in canonical order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hypersequent {
    comps: Vec<(Sequent, u32)>,
}

impl Hypersequent {
    pub fn empty() -> Self {
        Hypersequent { comps: Vec::new() }
    }

    pub fn from_components(cs: impl IntoIterator<Item = Sequent>) -> Self {
        let mut h = Hypersequent::empty();
        for c in cs {
            h.add(c, 1);
        }
        h
    }

    pub fn add(&mut self, s: Sequent, n: u32) {
        if n == 0 {
            return;
        }
        match self.comps.binary_search_by(|(t, _)| t.cmp(&s)) {
            Ok(i) => self.comps[i].1 += n,
            Err(i) => self.comps.insert(i, (s, n)),
        }
    }

    pub fn union(&self, other: &Hypersequent) -> Hypersequent {
        let mut out = self.clone();
        for (s, n) in other.distinct() {
            out.add(s.clone(), n);
        }
        out
    }

    /// Distinct components with their multiplicities `h(s)`.
    pub fn distinct(&self) -> impl Iterator<Item = (&Sequent, u32)> {
        self.comps.iter().map(|(s, n)| (s, *n))
    }

    /// Every component occurrence.
    pub fn components(&self) -> impl Iterator<Item = &Sequent> {
        self.comps.iter().flat_map(|(s, n)| std::iter::repeat_n(s, *n as usize))
    }

    pub fn multiplicity(&self, s: &Sequent) -> u32 {
        match self.comps.binary_search_by(|(t, _)| t.cmp(s)) {
            Ok(i) => self.comps[i].1,
            Err(_) => 0,
        }
    }

    pub fn num_components(&self) -> usize {
        self.comps.iter().map(|(_, n)| *n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// Removes one occurrence of `s`; false if absent.
    pub fn remove_one(&mut self, s: &Sequent) -> bool {
        match self.comps.binary_search_by(|(t, _)| t.cmp(s)) {
            Ok(i) => {
                if self.comps[i].1 == 1 {
                    self.comps.remove(i);
                } else {
                    self.comps[i].1 -= 1;
                }
                true
            }
            Err(_) => false,
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.comps.iter().flat_map(|(s, _)| s.formulas())
    }

    /// Whether every formula occurring in the hypersequent belongs to `omega`.
    pub fn is_over(&self, omega: &OmegaSet) -> bool {
        self.formulas().all(|f| omega.contains(f))
    }

    pub fn symbol_size(&self) -> usize {
        let comps: usize = self.distinct().map(|(s, n)| s.symbol_size() * n as usize).sum();
        comps + self.num_components().saturating_sub(1)
    }

    /// The 2-reduct: multiplicities capped at 2.
    pub fn two_reduct(&self) -> Hypersequent {
        self.capped(2)
    }

    pub fn capped(&self, cap: u32) -> Hypersequent {
        Hypersequent {
            comps: self.comps.iter().map(|(s, n)| (s.clone(), (*n).min(cap))).collect(),
        }
    }

    /// Canonical representative of the `⪰Ω`-equivalence class: the
    /// submultiset-maximal components, each once.
    pub fn weak_normal_form(&self) -> Hypersequent {
        let mut out = Hypersequent::empty();
        for (s, _) in self.distinct() {
            let dominated = self.distinct().any(|(t, _)| t != s && s.weakens_to(t));
            if !dominated {
                out.add(s.clone(), 1);
            }
        }
        out
    }
}

impl fmt::Display for Hypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.components().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Hypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypersequent({self})")
    }
}

impl std::str::FromStr for Hypersequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_hypersequent(s)
    }
}

impl Serialize for Hypersequent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Hypersequent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_hypersequent(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses `f1, f2 => g | => h | ...`; the empty string is the empty
/// hypersequent.
pub fn parse_hypersequent(text: &str) -> Result<Hypersequent, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut h = Hypersequent::empty();
    if cur.at_end() {
        return Ok(h);
    }
    loop {
        h.add(parse_sequent_at(&mut cur)?, 1);
        if cur.at_end() {
            break;
        }
        cur.expect(&Tok::Bar)?;
    }
    Ok(h)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut cur = Cursor::new(text)?;
    let s = parse_sequent_at(&mut cur)?;
    cur.expect_end()?;
    Ok(s)
}

fn parse_sequent_at(cur: &mut Cursor) -> Result<Sequent, ParseError> {
    let mut ant = Multiset::new();
    if !cur.eat(&Tok::Arrow) {
        loop {
            ant.add(parse_with(cur, &ConcreteLeaves)?, 1);
            if cur.eat(&Tok::Arrow) {
                break;
            }
            if !cur.eat(&Tok::Comma) {
                return Err(cur.unexpected("expected `,` or `=>`"));
            }
        }
    }
    let succ = match cur.peek() {
        None | Some(Tok::Bar) => None,
        Some(_) => Some(parse_with(cur, &ConcreteLeaves)?),
    };
    Ok(Sequent::new(ant, succ))
}

/// Number of symbols in the written hypersequent: formula symbols, commas,
/// arrows and separators.
pub fn symbol_size(h: &Hypersequent) -> usize {
    h.symbol_size()
}

pub fn two_reduct(h: &Hypersequent) -> Hypersequent {
    h.two_reduct()
}

fn check_over(h: &Hypersequent, omega: &OmegaSet) -> Result<(), HyperseqError> {
    match h.formulas().find(|f| !omega.contains(f)) {
        Some(f) => Err(HyperseqError::OutsideOmega(f.to_string())),
        None => Ok(()),
    }
}

/// Decides `g ⪰Ω h`: `h` follows from `g` by (lw), (EC), (EW) within `Ω`.
pub fn weak_reach(g: &Hypersequent, h: &Hypersequent, omega: &OmegaSet) -> Result<bool, HyperseqError> {
    check_over(g, omega)?;
    check_over(h, omega)?;
    Ok(weak_reach_unchecked(g, h))
}

/// The component-mapping criterion without the vocabulary check.
pub fn weak_reach_unchecked(g: &Hypersequent, h: &Hypersequent) -> bool {
    g.distinct().all(|(s, _)| h.distinct().any(|(t, _)| s.weakens_to(t)))
}

/// Decides `g ≼hyp h`: `g` follows from `h` by (c), (EC), (EW).
pub fn contract_reach(g: &Hypersequent, h: &Hypersequent) -> bool {
    h.distinct().all(|(t, _)| g.distinct().any(|(s, _)| s.contraction_of(t)))
}

/// The `#` image of an `Ω`-hypersequent.
pub fn encode_sharp(h: &Hypersequent, omega: &OmegaSet) -> Result<PowVector, HyperseqError> {
    check_over(h, omega)?;
    let d = omega.len();
    let mut groups: Vec<PowSet> = (0..=d).map(|_| PowSet::new(d)).collect();
    for (s, _) in h.distinct() {
        let idx = match &s.succ {
            None => 0,
            Some(f) => omega.position(f).expect("checked") + 1,
        };
        let mut x = vec![0u64; d];
        for (f, n) in s.ant.iter() {
            x[omega.position(f).expect("checked")] += u64::from(n);
        }
        groups[idx].insert(NatTuple::new(x)).expect("length d");
    }
    Ok(PowVector::new(d, groups).expect("consistent dimensions"))
}

/// Dense component: `[succ, m_1, .., m_d]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IxSeq(Box<[u16]>);

impl IxSeq {
    pub fn new(succ: u16, ant: &[u16]) -> Self {
        let mut v = Vec::with_capacity(ant.len() + 1);
        v.push(succ);
        v.extend_from_slice(ant);
        IxSeq(v.into_boxed_slice())
    }

    pub fn empty(d: usize, succ: u16) -> Self {
        let mut v = vec![0u16; d + 1];
        v[0] = succ;
        IxSeq(v.into_boxed_slice())
    }

    /// 0 for the empty succedent, `k` for `F_k` (1-based).
    pub fn succ(&self) -> u16 {
        self.0[0]
    }

    pub fn ant(&self) -> &[u16] {
        &self.0[1..]
    }

    pub fn ant_mut(&mut self) -> &mut [u16] {
        &mut self.0[1..]
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn ant_len(&self) -> usize {
        self.ant().iter().map(|&m| m as usize).sum()
    }

    /// Same succedent, pointwise smaller or equal antecedent.
    pub fn weakens_to(&self, other: &IxSeq) -> bool {
        self.0[0] == other.0[0] && self.ant().iter().zip(other.ant()).all(|(a, b)| a <= b)
    }

    /// `self` is a contraction of `other`: pointwise below with equal support.
    pub fn contraction_of(&self, other: &IxSeq) -> bool {
        self.0[0] == other.0[0]
            && self
                .ant()
                .iter()
                .zip(other.ant())
                .all(|(&a, &b)| a <= b && (a >= 1) == (b >= 1))
    }
}

impl fmt::Debug for IxSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Dense hypersequent: sorted list of distinct components with
/// multiplicities.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IxHyper {
    comps: Vec<(IxSeq, u32)>,
}

impl IxHyper {
    pub fn empty() -> Self {
        IxHyper { comps: Vec::new() }
    }

    pub fn from_components(cs: impl IntoIterator<Item = IxSeq>) -> Self {
        let mut h = IxHyper::empty();
        for c in cs {
            h.add(c, 1);
        }
        h
    }

    pub fn add(&mut self, s: IxSeq, n: u32) {
        if n == 0 {
            return;
        }
        match self.comps.binary_search_by(|(t, _)| t.cmp(&s)) {
            Ok(i) => self.comps[i].1 += n,
            Err(i) => self.comps.insert(i, (s, n)),
        }
    }

    /// Removes `n` occurrences of `s` (saturating).
    pub fn remove(&mut self, s: &IxSeq, n: u32) {
        if let Ok(i) = self.comps.binary_search_by(|(t, _)| t.cmp(s)) {
            if self.comps[i].1 <= n {
                self.comps.remove(i);
            } else {
                self.comps[i].1 -= n;
            }
        }
    }

    pub fn distinct(&self) -> &[(IxSeq, u32)] {
        &self.comps
    }

    pub fn components(&self) -> impl Iterator<Item = &IxSeq> {
        self.comps.iter().flat_map(|(s, n)| std::iter::repeat_n(s, *n as usize))
    }

    pub fn multiplicity(&self, s: &IxSeq) -> u32 {
        match self.comps.binary_search_by(|(t, _)| t.cmp(s)) {
            Ok(i) => self.comps[i].1,
            Err(_) => 0,
        }
    }

    pub fn num_components(&self) -> usize {
        self.comps.iter().map(|(_, n)| *n as usize).sum()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.comps.iter().map(|(_, n)| *n).max().unwrap_or(0)
    }

    pub fn max_antecedent(&self) -> usize {
        self.comps.iter().map(|(s, _)| s.ant_len()).max().unwrap_or(0)
    }

    pub fn union(&self, other: &IxHyper) -> IxHyper {
        let mut out = self.clone();
        for (s, n) in &other.comps {
            out.add(s.clone(), *n);
        }
        out
    }

    /// `self ⪰Ω other` by the component-mapping criterion.
    pub fn weak_reaches(&self, other: &IxHyper) -> bool {
        self.comps
            .iter()
            .all(|(s, _)| other.comps.iter().any(|(t, _)| s.weakens_to(t)))
    }

    /// `self ≼hyp other`.
    pub fn contract_reaches(&self, other: &IxHyper) -> bool {
        other
            .comps
            .iter()
            .all(|(t, _)| self.comps.iter().any(|(s, _)| s.contraction_of(t)))
    }

    pub fn capped(&self, cap: u32) -> IxHyper {
        IxHyper {
            comps: self.comps.iter().map(|(s, n)| (s.clone(), (*n).min(cap))).collect(),
        }
    }

    pub fn weak_normal_form(&self) -> IxHyper {
        let mut out = IxHyper::empty();
        for (s, _) in &self.comps {
            if !self.comps.iter().any(|(t, _)| t != s && s.weakens_to(t)) {
                out.add(s.clone(), 1);
            }
        }
        out
    }

    /// Symbol count, using the formula sizes of `omega`.
    pub fn symbol_size(&self, sizes: &[usize]) -> usize {
        let mut total = 0;
        for (s, n) in &self.comps {
            let mut c = 1;
            let mut k = 0;
            for (i, &m) in s.ant().iter().enumerate() {
                c += sizes[i] * m as usize;
                k += m as usize;
            }
            c += k.saturating_sub(1);
            if s.succ() > 0 {
                c += sizes[s.succ() as usize - 1];
            }
            total += c * *n as usize;
        }
        total + self.num_components().saturating_sub(1)
    }

    /// `#` encoding.
    pub fn sharp(&self, d: usize) -> PowVector {
        let mut groups: Vec<PowSet> = (0..=d).map(|_| PowSet::new(d)).collect();
        for (s, _) in &self.comps {
            let x: Vec<u64> = s.ant().iter().map(|&m| u64::from(m)).collect();
            groups[s.succ() as usize].insert(NatTuple::new(x)).expect("length d");
        }
        PowVector::new(d, groups).expect("consistent dimensions")
    }
}

/// Conversions between the two representations relative to one `Ω`.
#[derive(Debug, Clone)]
pub struct Encoder {
    omega: OmegaSet,
    sizes: Vec<usize>,
}

impl Encoder {
    pub fn new(omega: OmegaSet) -> Self {
        let sizes = omega.formulas().iter().map(|f| f.size()).collect();
        Encoder { omega, sizes }
    }

    pub fn omega(&self) -> &OmegaSet {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn formula(&self, code: u16) -> &Formula {
        &self.omega.formulas()[code as usize - 1]
    }

    pub fn code(&self, f: &Formula) -> Option<u16> {
        self.omega.position(f).map(|i| i as u16 + 1)
    }

    pub fn encode_sequent(&self, s: &Sequent) -> Result<IxSeq, HyperseqError> {
        let succ = match &s.succ {
            None => 0,
            Some(f) => self.code(f).ok_or_else(|| HyperseqError::OutsideOmega(f.to_string()))?,
        };
        let mut v = IxSeq::empty(self.dim(), succ);
        for (f, n) in s.ant.iter() {
            let c = self.code(f).ok_or_else(|| HyperseqError::OutsideOmega(f.to_string()))?;
            v.ant_mut()[c as usize - 1] += n as u16;
        }
        Ok(v)
    }

    pub fn encode(&self, h: &Hypersequent) -> Result<IxHyper, HyperseqError> {
        let mut out = IxHyper::empty();
        for (s, n) in h.distinct() {
            out.add(self.encode_sequent(s)?, n);
        }
        Ok(out)
    }

    pub fn decode_sequent(&self, s: &IxSeq) -> Sequent {
        let mut ant = Multiset::new();
        for (i, &m) in s.ant().iter().enumerate() {
            ant.add(self.omega.formulas()[i].clone(), u32::from(m));
        }
        let succ = if s.succ() == 0 { None } else { Some(self.formula(s.succ()).clone()) };
        Sequent::new(ant, succ)
    }

    pub fn decode(&self, h: &IxHyper) -> Hypersequent {
        let mut out = Hypersequent::empty();
        for (s, n) in h.distinct() {
            out.add(self.decode_sequent(s), *n);
        }
        out
    }

    pub fn symbol_size(&self, h: &IxHyper) -> usize {
        h.symbol_size(&self.sizes)
    }
}

/// For `g ⪰Ω h`, a witness map sending each distinct component of `g` to a
/// component of `h` above it.
pub fn weak_witness(g: &Hypersequent, h: &Hypersequent) -> Option<BTreeMap<Sequent, Sequent>> {
    let mut out = BTreeMap::new();
    for (s, _) in g.distinct() {
        let t = h.distinct().map(|(t, _)| t).find(|t| s.weakens_to(t))?;
        out.insert(s.clone(), t.clone());
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn h(s: &str) -> Hypersequent {
        parse_hypersequent(s).unwrap()
    }

    fn om(fs: &[&str]) -> OmegaSet {
        let fs: Vec<Formula> = fs.iter().map(|s| parse_formula(s).unwrap()).collect();
        OmegaSet::closure_of(fs.iter())
    }

    #[test]
    fn sizes() {
        assert_eq!(symbol_size(&h("p, p => | => q /\\ p")), 9);
        assert_eq!(symbol_size(&h("")), 0);
        assert_eq!(symbol_size(&h("p => p")), 3);
    }

    #[test]
    fn parse_and_print() {
        let x = h("=> p | p /\\ q, p, p => p | q => | q =>");
        assert_eq!(x.num_components(), 4);
        assert_eq!(parse_hypersequent(&x.to_string()).unwrap(), x);
        assert_eq!(h("=>").to_string(), "=>");
        assert_eq!(h("p,q=>").to_string(), "p, q =>");
        assert!(parse_hypersequent("p => q => r").is_err());
        assert!(parse_hypersequent("p, => q").is_err());
        assert_eq!(h("p ⇒ q"), h("p => q"));
    }

    #[test]
    fn weak_reach_examples() {
        let o = om(&["p /\\ q"]);
        let a = "p /\\ q";
        let g = h(&format!("q, {a} => p | q => p"));
        let t = h(&format!("q, {a} => p"));
        assert!(weak_reach(&g, &t, &o).unwrap());
        assert!(weak_reach(&h("p => p"), &h("p => p | p => p"), &o).unwrap());
        assert!(weak_reach(&h("p => p | p => p"), &h("p => p"), &o).unwrap());
        assert!(!weak_reach(&h("p => p"), &h("=> p"), &o).unwrap());
        assert!(weak_reach(&h("r => p"), &h("p => p"), &o).is_err());
    }

    #[test]
    fn reduct_examples() {
        assert_eq!(two_reduct(&h("p => | p => | p =>")), h("p => | p =>"));
        assert_eq!(two_reduct(&h("p =>")), h("p =>"));
        assert_eq!(two_reduct(&h("p => | p => | q =>")), h("p => | p => | q =>"));
    }

    #[test]
    fn contract_examples() {
        assert!(contract_reach(&h("p => q"), &h("p, p => q")));
        assert!(contract_reach(&h("p => q"), &h("p => q | p => q")));
        assert!(!contract_reach(&h("=> q"), &h("p => q")));
    }

    #[test]
    fn sharp_example() {
        let o = om(&["p /\\ q"]);
        let x = h("=> p | p /\\ q, p, p => p | q => | q =>");
        let e = encode_sharp(&x, &o).unwrap();
        assert_eq!(e.to_string(), "({(0,1,0)}, {(0,0,0), (2,0,1)}, {}, {})");
        let e = encode_sharp(&h(""), &o).unwrap();
        assert_eq!(e.to_string(), "({}, {}, {}, {})");
        let e = encode_sharp(&h("=> p"), &om(&["p"])).unwrap();
        assert_eq!(e.to_string(), "({}, {(0)})");
    }

    #[test]
    fn dense_roundtrip_and_agreement() {
        let o = om(&["p /\\ q"]);
        let enc = Encoder::new(o.clone());
        let x = h("=> p | p /\\ q, p, p => p | q => | q =>");
        let ix = enc.encode(&x).unwrap();
        assert_eq!(enc.decode(&ix), x);
        assert_eq!(enc.symbol_size(&ix), x.symbol_size());
        assert_eq!(ix.sharp(3), encode_sharp(&x, &o).unwrap());
        let y = h("p => p");
        let iy = enc.encode(&y).unwrap();
        assert_eq!(iy.weak_reaches(&ix), weak_reach_unchecked(&y, &x));
        assert_eq!(ix.weak_reaches(&iy), weak_reach_unchecked(&x, &y));
    }

    #[test]
    fn normal_form() {
        let x = h("p => q | p, p => q | p, p => q | => r");
        assert_eq!(x.weak_normal_form(), h("p, p => q | => r"));
    }
}
