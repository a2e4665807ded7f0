//! Propositional formulas over the connectives of full Lambek calculus with
//! exchange: `/\`, `\/`, `*` (fusion), `->` and the constants `top`, `bot`,
//! `1`, `0`.
//!
//! Concrete syntax (ASCII; Unicode accepted on input):
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("\/" and)*
//! and     := fus ("/\" fus)*
//! fus     := atom ("*" atom)*
//! atom    := var | "top" | "bot" | "1" | "0" | "(" formula ")"
//! ```
//!
//! Printing inserts the minimal parentheses needed for the tree to parse back.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::syntax::{Cursor, ParseError, Tok};

/// Binary connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Connective {
    And,
    Or,
    Fuse,
    Imp,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "/\\",
            Connective::Or => "\\/",
            Connective::Fuse => "*",
            Connective::Imp => "->",
        }
    }

    /// Binding strength; larger binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            Connective::Imp => 1,
            Connective::Or => 2,
            Connective::And => 3,
            Connective::Fuse => 4,
        }
    }

    fn right_assoc(self) -> bool {
        matches!(self, Connective::Imp)
    }
}

/// Logical constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Constant {
    Top,
    Bot,
    One,
    Zero,
}

impl Constant {
    pub fn symbol(self) -> &'static str {
        match self {
            Constant::Top => "top",
            Constant::Bot => "bot",
            Constant::One => "1",
            Constant::Zero => "0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaKind {
    Var(String),
    Const(Constant),
    Binary(Connective, Formula, Formula),
}

/// An immutable, cheaply clonable formula tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Formula(Arc<FormulaKind>);

impl Formula {
    /// A propositional variable. The name must be a lowercase identifier.
    pub fn var(name: impl Into<String>) -> Formula {
        Formula(Arc::new(FormulaKind::Var(name.into())))
    }

    pub fn constant(c: Constant) -> Formula {
        Formula(Arc::new(FormulaKind::Const(c)))
    }

    pub fn binary(op: Connective, a: Formula, b: Formula) -> Formula {
        Formula(Arc::new(FormulaKind::Binary(op, a, b)))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::binary(Connective::And, a, b)
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::binary(Connective::Or, a, b)
    }

    pub fn fuse(a: Formula, b: Formula) -> Formula {
        Formula::binary(Connective::Fuse, a, b)
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::binary(Connective::Imp, a, b)
    }

    pub fn top() -> Formula {
        Formula::constant(Constant::Top)
    }

    pub fn bot() -> Formula {
        Formula::constant(Constant::Bot)
    }

    pub fn one() -> Formula {
        Formula::constant(Constant::One)
    }

    pub fn zero() -> Formula {
        Formula::constant(Constant::Zero)
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }

    pub fn as_var(&self) -> Option<&str> {
        match self.kind() {
            FormulaKind::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Number of symbol occurrences (variables, constants and connectives).
    pub fn size(&self) -> usize {
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Const(_) => 1,
            FormulaKind::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Nesting depth of connectives; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Const(_) => 0,
            FormulaKind::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Collects every subformula (including `self`) into `out`.
    pub fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            if let FormulaKind::Binary(_, a, b) = self.kind() {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self.kind() {
            FormulaKind::Var(v) => {
                out.insert(v.clone());
            }
            FormulaKind::Const(_) => {}
            FormulaKind::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self.kind() {
            FormulaKind::Binary(op, _, _) => op.precedence(),
            _ => u8::MAX,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FormulaKind::Var(v) => f.write_str(v),
            FormulaKind::Const(c) => f.write_str(c.symbol()),
            FormulaKind::Binary(op, a, b) => {
                let p = op.precedence();
                let (left_min, right_min) = if op.right_assoc() { (p + 1, p) } else { (p, p + 1) };
                a.write_child(f, left_min)?;
                write!(f, " {} ", op.symbol())?;
                b.write_child(f, right_min)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_formula(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_with(&mut cur, &ConcreteLeaves)?;
    cur.expect_end()?;
    Ok(f)
}

/// How leaves and nodes of a formula-like tree are built. Lets the schema
/// parser reuse the precedence grammar with formula-variables as leaves.
pub(crate) trait FormulaBuilder {
    type Out;
    fn leaf(&self, cur: &mut Cursor) -> Result<Self::Out, ParseError>;
    fn constant(&self, c: Constant) -> Self::Out;
    fn node(&self, op: Connective, a: Self::Out, b: Self::Out) -> Self::Out;
}

pub(crate) struct ConcreteLeaves;

impl FormulaBuilder for ConcreteLeaves {
    type Out = Formula;

    fn leaf(&self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let pos = cur.pos();
        match cur.bump() {
            Some(Tok::Ident(name)) if is_variable_name(&name) => Ok(Formula::var(name)),
            Some(Tok::Ident(name)) => Err(ParseError::new(
                pos,
                format!("`{name}` is not a propositional variable (lowercase identifier expected)"),
            )),
            Some(t) => Err(ParseError::new(pos, format!("expected a formula, found {t}"))),
            None => Err(ParseError::new(pos, "expected a formula, found end of input")),
        }
    }

    fn constant(&self, c: Constant) -> Formula {
        Formula::constant(c)
    }

    fn node(&self, op: Connective, a: Formula, b: Formula) -> Formula {
        Formula::binary(op, a, b)
    }
}

pub(crate) fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Entry point of the precedence grammar.
pub(crate) fn parse_with<B: FormulaBuilder>(cur: &mut Cursor, b: &B) -> Result<B::Out, ParseError> {
    parse_imp(cur, b)
}

fn parse_imp<B: FormulaBuilder>(cur: &mut Cursor, b: &B) -> Result<B::Out, ParseError> {
    let lhs = parse_left_assoc(cur, b, Connective::Or)?;
    if cur.eat(&Tok::Imp) {
        let rhs = parse_imp(cur, b)?;
        Ok(b.node(Connective::Imp, lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn op_token(op: Connective) -> Tok {
    match op {
        Connective::Or => Tok::Or,
        Connective::And => Tok::And,
        Connective::Fuse => Tok::Fuse,
        Connective::Imp => Tok::Imp,
    }
}

fn tighter(op: Connective) -> Option<Connective> {
    match op {
        Connective::Or => Some(Connective::And),
        Connective::And => Some(Connective::Fuse),
        _ => None,
    }
}

fn parse_left_assoc<B: FormulaBuilder>(
    cur: &mut Cursor,
    b: &B,
    op: Connective,
) -> Result<B::Out, ParseError> {
    let operand = |cur: &mut Cursor| match tighter(op) {
        Some(next) => parse_left_assoc(cur, b, next),
        None => parse_atom(cur, b),
    };
    let mut acc = operand(cur)?;
    let tok = op_token(op);
    while cur.eat(&tok) {
        let rhs = operand(cur)?;
        acc = b.node(op, acc, rhs);
    }
    Ok(acc)
}

fn parse_atom<B: FormulaBuilder>(cur: &mut Cursor, b: &B) -> Result<B::Out, ParseError> {
    match cur.peek() {
        Some(Tok::LParen) => {
            cur.bump();
            let inner = parse_imp(cur, b)?;
            cur.expect(&Tok::RParen)?;
            Ok(inner)
        }
        Some(Tok::Top) => {
            cur.bump();
            Ok(b.constant(Constant::Top))
        }
        Some(Tok::Bot) => {
            cur.bump();
            Ok(b.constant(Constant::Bot))
        }
        Some(Tok::One) => {
            cur.bump();
            Ok(b.constant(Constant::One))
        }
        Some(Tok::Zero) => {
            cur.bump();
            Ok(b.constant(Constant::Zero))
        }
        _ => b.leaf(cur),
    }
}

/// A finite, subformula-closed set of formulas with a fixed enumeration
/// `F_1..F_d`, ordered by (symbol count, printed form). Position 0 of a
/// `#` encoding is reserved for the empty succedent and is not stored here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSet {
    formulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

impl OmegaSet {
    pub fn empty() -> Self {
        OmegaSet {
            formulas: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Smallest subformula-closed set containing every formula of `seed`.
    pub fn closure_of<'a>(seed: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut all = BTreeSet::new();
        for f in seed {
            f.collect_subformulas(&mut all);
        }
        Self::from_closed_set(all)
    }

    fn from_closed_set(all: BTreeSet<Formula>) -> Self {
        let mut keyed: Vec<(usize, String, Formula)> =
            all.into_iter().map(|f| (f.size(), f.to_string(), f)).collect();
        keyed.sort();
        let formulas: Vec<Formula> = keyed.into_iter().map(|(_, _, f)| f).collect();
        let index = formulas.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        OmegaSet { formulas, index }
    }

    /// Number of formulas, `d = |Ω|`.
    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    /// Zero-based position of `f` in the enumeration (`F_{i+1}`).
    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Union with the subformulas of `extra`.
    pub fn extended<'a>(&self, extra: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut all: BTreeSet<Formula> = self.formulas.iter().cloned().collect();
        for f in extra {
            f.collect_subformulas(&mut all);
        }
        Self::from_closed_set(all)
    }
}

impl fmt::Display for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.formulas.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// Subformula closure of a single formula.
pub fn subformula_closure(f: &Formula) -> OmegaSet {
    OmegaSet::closure_of(std::iter::once(f))
}

/// Membership of a formula in the levels of the substructural hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyClass {
    /// `p[n]` is membership in `P_n`, for n = 0..=3.
    pub p: [bool; 4],
    /// `n[n]` is membership in `N_n`, for n = 0..=3.
    pub n: [bool; 4],
    /// Grammar membership in `P_3'`. Acyclicity is not checked.
    pub p3_prime: bool,
    pub acyclicity_checked: bool,
}

impl HierarchyClass {
    /// Lowest level of the `P` hierarchy containing the formula, if any.
    pub fn min_p_level(&self) -> Option<usize> {
        self.p.iter().position(|&b| b)
    }

    pub fn min_n_level(&self) -> Option<usize> {
        self.n.iter().position(|&b| b)
    }
}

/// Bottom-up classification against the `P_n`/`N_n` grammars.
pub fn classify_hierarchy(f: &Formula) -> HierarchyClass {
    match f.kind() {
        FormulaKind::Var(_) => HierarchyClass {
            p: [true; 4],
            n: [true; 4],
            p3_prime: false,
            acyclicity_checked: false,
        },
        FormulaKind::Const(c) => {
            let mut p = [false; 4];
            let mut n = [false; 4];
            for lvl in 1..4 {
                p[lvl] = matches!(c, Constant::One | Constant::Bot);
                n[lvl] = matches!(c, Constant::Zero | Constant::Top);
            }
            // P_{n+1} ⊇ N_n and N_{n+1} ⊇ P_n
            for lvl in 1..4 {
                p[lvl] |= n[lvl - 1];
                n[lvl] |= p[lvl - 1];
            }
            HierarchyClass {
                p,
                n,
                p3_prime: matches!(c, Constant::One | Constant::Bot),
                acyclicity_checked: false,
            }
        }
        FormulaKind::Binary(op, a, b) => {
            let ca = classify_hierarchy(a);
            let cb = classify_hierarchy(b);
            let mut p = [false; 4];
            let mut n = [false; 4];
            for lvl in 1..4 {
                p[lvl] = match op {
                    Connective::Or | Connective::Fuse => ca.p[lvl] && cb.p[lvl],
                    _ => false,
                } || n[lvl - 1];
                n[lvl] = match op {
                    Connective::And => ca.n[lvl] && cb.n[lvl],
                    Connective::Imp => ca.p[lvl] && cb.n[lvl],
                    _ => false,
                } || p[lvl - 1];
            }
            let p3_prime = match op {
                Connective::Or | Connective::Fuse => ca.p3_prime && cb.p3_prime,
                Connective::And => *b.kind() == FormulaKind::Const(Constant::One) && ca.n[2],
                Connective::Imp => false,
            };
            HierarchyClass {
                p,
                n,
                p3_prime,
                acyclicity_checked: false,
            }
        }
    }
}
