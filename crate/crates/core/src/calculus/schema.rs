use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{Connective, Constant, Formula, FormulaKind};

/// A formula built from formula-variables, constants and connectives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SchematicFormula {
    Var(String),
    Const(Constant),
    Binary(Connective, Box<SchematicFormula>, Box<SchematicFormula>),
}

impl SchematicFormula {
    pub fn var(name: &str) -> Self {
        SchematicFormula::Var(name.to_string())
    }

    pub fn bin(op: Connective, a: SchematicFormula, b: SchematicFormula) -> Self {
        SchematicFormula::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            SchematicFormula::Var(_) | SchematicFormula::Const(_) => 1,
            SchematicFormula::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            SchematicFormula::Var(v) => out.push(v.clone()),
            SchematicFormula::Const(_) => {}
            SchematicFormula::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Matches against a concrete formula, extending `binding`.
    pub fn matches(&self, f: &Formula, binding: &mut Vec<(String, Formula)>) -> bool {
        match (self, f.kind()) {
            (SchematicFormula::Var(v), _) => {
                if let Some((_, g)) = binding.iter().find(|(n, _)| n == v) {
                    return g == f;
                }
                binding.push((v.clone(), f.clone()));
                true
            }
            (SchematicFormula::Const(c), FormulaKind::Const(d)) => c == d,
            (SchematicFormula::Binary(op, a, b), FormulaKind::Binary(op2, fa, fb)) if op == op2 => {
                let mark = binding.len();
                if a.matches(fa, binding) && b.matches(fb, binding) {
                    true
                } else {
                    binding.truncate(mark);
                    false
                }
            }
            _ => false,
        }
    }

    /// Substitutes formula-variables; `None` when a variable is unbound.
    pub fn instantiate(&self, lookup: &dyn Fn(&str) -> Option<Formula>) -> Option<Formula> {
        match self {
            SchematicFormula::Var(v) => lookup(v),
            SchematicFormula::Const(c) => Some(Formula::constant(*c)),
            SchematicFormula::Binary(op, a, b) => Some(Formula::binary(*op, a.instantiate(lookup)?, b.instantiate(lookup)?)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            SchematicFormula::Binary(op, _, _) => op.precedence(),
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

impl fmt::Display for SchematicFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchematicFormula::Var(v) => f.write_str(v),
            SchematicFormula::Const(c) => f.write_str(c.symbol()),
            SchematicFormula::Binary(op, a, b) => {
                let p = op.precedence();
                let (l, r) = if *op == Connective::Imp { (p + 1, p) } else { (p, p + 1) };
                a.write_child(f, l)?;
                write!(f, " {} ", op.symbol())?;
                b.write_child(f, r)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AntecedentEntry {
    Multiset(String),
    Formula(SchematicFormula),
}

impl fmt::Display for AntecedentEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AntecedentEntry::Multiset(v) => f.write_str(v),
            AntecedentEntry::Formula(sf) => write!(f, "{sf}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SuccedentSlot {
    Empty,
    Var(String),
    Formula(SchematicFormula),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchematicComponent {
    pub ant: Vec<AntecedentEntry>,
    pub succ: SuccedentSlot,
}

impl SchematicComponent {
    pub fn new(ant: Vec<AntecedentEntry>, succ: SuccedentSlot) -> Self {
        SchematicComponent { ant, succ }
    }

    fn symbol_size(&self) -> usize {
        let ant: usize = self
            .ant
            .iter()
            .map(|e| match e {
                AntecedentEntry::Multiset(_) => 1,
                AntecedentEntry::Formula(sf) => sf.size(),
            })
            .sum();
        let commas = self.ant.len().saturating_sub(1);
        let succ = match &self.succ {
            SuccedentSlot::Empty => 0,
            SuccedentSlot::Var(_) => 1,
            SuccedentSlot::Formula(sf) => sf.size(),
        };
        ant + commas + 1 + succ
    }
}

impl fmt::Display for SchematicComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.ant.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(if self.ant.is_empty() { "=>" } else { " =>" })?;
        match &self.succ {
            SuccedentSlot::Empty => Ok(()),
            SuccedentSlot::Var(v) => write!(f, " {v}"),
            SuccedentSlot::Formula(sf) => write!(f, " {sf}"),
        }
    }
}

/// `H | L_1 => M_1 | ... | L_k => M_k`, with `H` optional.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SchematicHypersequent {
    pub has_h: bool,
    pub comps: Vec<SchematicComponent>,
}

impl SchematicHypersequent {
    pub fn new(has_h: bool, comps: Vec<SchematicComponent>) -> Self {
        SchematicHypersequent { has_h, comps }
    }

    pub fn symbol_size(&self) -> usize {
        let comps: usize = self.comps.iter().map(SchematicComponent::symbol_size).sum();
        let items = self.comps.len() + usize::from(self.has_h);
        comps + usize::from(self.has_h) + items.saturating_sub(1)
    }

    /// Every variable occurrence, tagged by kind.
    pub fn occurrences(&self) -> Vec<VarRef> {
        let mut out = Vec::new();
        if self.has_h {
            out.push(VarRef::Hyper);
        }
        for c in &self.comps {
            for e in &c.ant {
                match e {
                    AntecedentEntry::Multiset(v) => out.push(VarRef::Multiset(v.clone())),
                    AntecedentEntry::Formula(sf) => {
                        let mut vs = Vec::new();
                        sf.collect_vars(&mut vs);
                        out.extend(vs.into_iter().map(VarRef::Formula));
                    }
                }
            }
            match &c.succ {
                SuccedentSlot::Empty => {}
                SuccedentSlot::Var(v) => out.push(VarRef::Succedent(v.clone())),
                SuccedentSlot::Formula(sf) => {
                    let mut vs = Vec::new();
                    sf.collect_vars(&mut vs);
                    out.extend(vs.into_iter().map(VarRef::Formula));
                }
            }
        }
        out
    }

    pub fn has_formulas(&self) -> bool {
        self.comps.iter().any(|c| {
            c.ant.iter().any(|e| matches!(e, AntecedentEntry::Formula(_))) || matches!(c.succ, SuccedentSlot::Formula(_))
        })
    }
}

impl fmt::Display for SchematicHypersequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.has_h {
            f.write_str("H")?;
            first = false;
        }
        for c in &self.comps {
            if !first {
                f.write_str(" | ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A schematic-variable, tagged by the kind of object it stands for.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarRef {
    Hyper,
    Multiset(String),
    Succedent(String),
    Formula(String),
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarRef::Hyper => f.write_str("H"),
            VarRef::Multiset(v) | VarRef::Succedent(v) | VarRef::Formula(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Initial,
    Logical,
    Structural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSchema {
    pub name: String,
    pub premises: Vec<SchematicHypersequent>,
    pub conclusion: SchematicHypersequent,
    pub kind: RuleKind,
}

impl RuleSchema {
    /// Builds a schema and derives its kind from its shape.
    pub fn new(name: impl Into<String>, premises: Vec<SchematicHypersequent>, conclusion: SchematicHypersequent) -> Self {
        let kind = if premises.is_empty() {
            RuleKind::Initial
        } else if premises.iter().chain(std::iter::once(&conclusion)).any(|h| h.has_formulas()) {
            RuleKind::Logical
        } else {
            RuleKind::Structural
        };
        RuleSchema {
            name: name.into(),
            premises,
            conclusion,
            kind,
        }
    }

    /// `var(r)`.
    pub fn variables(&self) -> BTreeSet<VarRef> {
        self.premises
            .iter()
            .chain(std::iter::once(&self.conclusion))
            .flat_map(|h| h.occurrences())
            .collect()
    }

    pub fn formula_variables(&self) -> Vec<String> {
        self.variables()
            .into_iter()
            .filter_map(|v| match v {
                VarRef::Formula(n) => Some(n),
                _ => None,
            })
            .collect()
    }

    /// `⌈r⌉`: symbols of every premise and of the conclusion.
    pub fn symbol_size(&self) -> usize {
        self.premises.iter().map(SchematicHypersequent::symbol_size).sum::<usize>() + self.conclusion.symbol_size()
    }

    /// Whether the schema has the shape of (lw), (EC) or (EW): its
    /// conclusion is always reachable from its premise by weak structural
    /// rules.
    pub fn is_weak_structural(&self) -> bool {
        [super::builtin::lw(), super::builtin::ec(), super::builtin::ew()]
            .iter()
            .any(|w| w.same_shape(self))
    }

    /// Same premises, conclusion and kind, ignoring the name.
    pub fn same_shape(&self, other: &RuleSchema) -> bool {
        self.premises == other.premises && self.conclusion == other.conclusion && self.kind == other.kind
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rule {}", self.name)?;
        for p in &self.premises {
            writeln!(f, "premise: {p}")?;
        }
        write!(f, "conclusion: {}", self.conclusion)
    }
}

/// Outcome of [`validate_schema`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub linear_conclusion: bool,
    pub subvariable: bool,
    pub structural: bool,
    /// Variables occurring more than once in the conclusion.
    pub repeated_in_conclusion: Vec<String>,
    /// Premise variables absent from the conclusion.
    pub premise_only: Vec<String>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.linear_conclusion && self.subvariable && self.structural
    }
}

/// Checks linear conclusion, the subvariable property and structurality.
pub fn validate_schema(r: &RuleSchema) -> ValidationReport {
    let occ = r.conclusion.occurrences();
    let mut seen = BTreeSet::new();
    let mut repeated = BTreeSet::new();
    for v in &occ {
        if !seen.insert(v.clone()) {
            repeated.insert(v.to_string());
        }
    }
    let mut premise_only = BTreeSet::new();
    for p in &r.premises {
        for v in p.occurrences() {
            if !seen.contains(&v) {
                premise_only.insert(v.to_string());
            }
        }
    }
    ValidationReport {
        linear_conclusion: repeated.is_empty(),
        subvariable: premise_only.is_empty(),
        structural: r.kind == RuleKind::Structural,
        repeated_in_conclusion: repeated.into_iter().collect(),
        premise_only: premise_only.into_iter().collect(),
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.structural {
            parts.push("not structural".to_string());
        }
        if !self.linear_conclusion {
            parts.push(format!("repeated in conclusion: {}", self.repeated_in_conclusion.join(", ")));
        }
        if !self.subvariable {
            parts.push(format!("absent from conclusion: {}", self.premise_only.join(", ")));
        }
        if parts.is_empty() {
            f.write_str("ok")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}
