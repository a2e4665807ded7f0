//! Rule schemas, calculi, instantiation and conclusion matching.

pub mod builtin;
pub mod ground;
pub mod parse;
pub mod schema;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::formula::{Formula, OmegaSet};
use crate::hyperseq::{Hypersequent, Multiset, Sequent};
use crate::wqo::ControlFunction;

pub use builtin::{builtin_calculus, builtin_rule};
pub use parse::{parse_rule_dsl, parse_rules_dsl, parse_schematic_hypersequent};
pub use schema::{
    validate_schema, AntecedentEntry, RuleKind, RuleSchema, SchematicComponent, SchematicFormula,
    SchematicHypersequent, SuccedentSlot, ValidationReport, VarRef,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("unknown preset or rule `{0}`")]
    UnknownPreset(String),
    #[error("invalid parameters for `{rule}`: {message}")]
    InvalidParams { rule: String, message: String },
    #[error("rule syntax, line {line}: {message}")]
    Dsl { line: usize, message: String },
    #[error("rule `{name}` is not an analytic structural rule: {report}")]
    Invalid { name: String, report: ValidationReport },
    #[error("instantiation of `{rule}`: {message}")]
    Instantiation { rule: String, message: String },
}

/// A finite set of rule schemas with a preset tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calculus {
    pub preset: String,
    rules: Vec<RuleSchema>,
}

impl Calculus {
    /// Builds a calculus; structural schemas must validate. Schemas with the
    /// shape of an earlier one are dropped.
    pub fn new(preset: impl Into<String>, rules: Vec<RuleSchema>) -> Result<Self, CalculusError> {
        let mut calc = Calculus {
            preset: preset.into(),
            rules: Vec::new(),
        };
        for r in rules {
            calc = calc.with_rule(r)?;
        }
        Ok(calc)
    }

    pub fn with_rule(mut self, r: RuleSchema) -> Result<Self, CalculusError> {
        if r.kind == RuleKind::Structural {
            let report = validate_schema(&r);
            if !report.all_ok() {
                return Err(CalculusError::Invalid { name: r.name, report });
            }
        }
        if !self.rules.iter().any(|q| q.same_shape(&r)) {
            if self.rules.iter().any(|q| q.name == r.name) {
                let mut k = 2;
                while self.rules.iter().any(|q| q.name == format!("{}#{k}", r.name)) {
                    k += 1;
                }
                let name = format!("{}#{k}", r.name);
                self.rules.push(RuleSchema { name, ..r });
            } else {
                self.rules.push(r);
            }
        }
        Ok(self)
    }

    pub fn extend(mut self, rs: impl IntoIterator<Item = RuleSchema>) -> Result<Self, CalculusError> {
        for r in rs {
            self = self.with_rule(r)?;
        }
        Ok(self)
    }

    pub fn rules(&self) -> &[RuleSchema] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn has_shape(&self, r: &RuleSchema) -> bool {
        self.rules.iter().any(|q| q.same_shape(r))
    }

    pub fn has_lw(&self) -> bool {
        self.has_shape(&builtin::lw())
    }

    pub fn has_c(&self) -> bool {
        self.has_shape(&builtin::c())
    }

    /// `⌈C⌉`.
    pub fn schema_size_max(&self) -> usize {
        schema_size_max(self)
    }

    pub fn premise_growth_bound(&self) -> ControlFunction {
        premise_growth_bound(self)
    }
}

/// `⌈C⌉`: the largest symbol count of a schema in `C`.
pub fn schema_size_max(c: &Calculus) -> usize {
    c.rules.iter().map(RuleSchema::symbol_size).max().unwrap_or(0)
}

/// `x ↦ ⌈C⌉·x + ⌈C⌉`.
pub fn premise_growth_bound(c: &Calculus) -> ControlFunction {
    ControlFunction::Affine(schema_size_max(c) as u64)
}

/// Values for the schematic-variables of a schema.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instantiation {
    /// `None` when the schema has no hypersequent-variable.
    pub hyper: Option<Hypersequent>,
    pub multisets: BTreeMap<String, Multiset>,
    pub succedents: BTreeMap<String, Option<Formula>>,
    pub formulas: BTreeMap<String, Formula>,
}

impl Instantiation {
    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("instantiations serialize");
        let d = Sha256::digest(json.as_bytes());
        d.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn inst_formula(rule: &str, sf: &SchematicFormula, i: &Instantiation) -> Result<Formula, CalculusError> {
    sf.instantiate(&|v| i.formulas.get(v).cloned())
        .ok_or_else(|| CalculusError::Instantiation {
            rule: rule.to_string(),
            message: format!("unbound formula-variable in `{sf}`"),
        })
}

fn inst_hyper(rule: &str, sh: &SchematicHypersequent, i: &Instantiation) -> Result<Hypersequent, CalculusError> {
    let missing = |what: String| CalculusError::Instantiation {
        rule: rule.to_string(),
        message: format!("missing value for {what}"),
    };
    let mut out = if sh.has_h {
        i.hyper.clone().ok_or_else(|| missing("H".into()))?
    } else {
        Hypersequent::empty()
    };
    for c in &sh.comps {
        let mut ant = Multiset::new();
        for e in &c.ant {
            match e {
                AntecedentEntry::Multiset(v) => {
                    let m = i.multisets.get(v).ok_or_else(|| missing(v.clone()))?;
                    ant = ant.sum(m);
                }
                AntecedentEntry::Formula(sf) => ant.add(inst_formula(rule, sf, i)?, 1),
            }
        }
        let succ = match &c.succ {
            SuccedentSlot::Empty => None,
            SuccedentSlot::Var(v) => i.succedents.get(v).ok_or_else(|| missing(v.clone()))?.clone(),
            SuccedentSlot::Formula(sf) => Some(inst_formula(rule, sf, i)?),
        };
        out.add(Sequent::new(ant, succ), 1);
    }
    Ok(out)
}

/// `I(r)`: the premises and conclusion of a rule instance.
pub fn instantiate(r: &RuleSchema, i: &Instantiation) -> Result<(Vec<Hypersequent>, Hypersequent), CalculusError> {
    let premises = r
        .premises
        .iter()
        .map(|p| inst_hyper(&r.name, p, i))
        .collect::<Result<Vec<_>, _>>()?;
    let conclusion = inst_hyper(&r.name, &r.conclusion, i)?;
    Ok((premises, conclusion))
}

#[derive(Clone, Default)]
struct Partial {
    formulas: Vec<(String, Formula)>,
    multisets: BTreeMap<String, Multiset>,
    succedents: BTreeMap<String, Option<Formula>>,
}

/// Every sub-multiset of `m`.
pub(crate) fn sub_multisets(m: &Multiset) -> Vec<Multiset> {
    let mut out = vec![Multiset::new()];
    for (f, n) in m.iter() {
        let mut next = Vec::with_capacity(out.len() * (n as usize + 1));
        for base in &out {
            for k in 0..=n {
                let mut b = base.clone();
                b.add(f.clone(), k);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

fn match_succ(slot: &SuccedentSlot, succ: &Option<Formula>, st: &mut Partial) -> bool {
    match (slot, succ) {
        (SuccedentSlot::Empty, None) => true,
        (SuccedentSlot::Empty, Some(_)) => false,
        (SuccedentSlot::Var(v), s) => match st.succedents.get(v) {
            Some(t) => t == s,
            None => {
                st.succedents.insert(v.clone(), s.clone());
                true
            }
        },
        (SuccedentSlot::Formula(sf), Some(f)) => sf.matches(f, &mut st.formulas),
        (SuccedentSlot::Formula(_), None) => false,
    }
}

/// Picks distinct occurrences of `rest` for the formula entries, then splits
/// what is left among the multiset-variables.
fn match_antecedent(
    formulas: &[&SchematicFormula],
    vars: &[&String],
    rest: Multiset,
    st: Partial,
    out: &mut Vec<Partial>,
) {
    if let Some((sf, more)) = formulas.split_first() {
        for (f, _) in rest.iter() {
            let mut st2 = st.clone();
            if sf.matches(f, &mut st2.formulas) {
                let mut left = Multiset::new();
                for (g, n) in rest.iter() {
                    left.add(g.clone(), if g == f { n - 1 } else { n });
                }
                match_antecedent(more, vars, left, st2, out);
            }
        }
        return;
    }
    match vars.split_first() {
        None => {
            if rest.is_empty() {
                out.push(st);
            }
        }
        Some((v, more)) => {
            if let Some(bound) = st.multisets.get(*v).cloned() {
                if let Some(left) = bound.difference_from(&rest) {
                    match_antecedent(&[], more, left, st, out);
                }
                return;
            }
            let options = if more.is_empty() { vec![rest.clone()] } else { sub_multisets(&rest) };
            for part in options {
                let left = part.difference_from(&rest).expect("sub-multiset");
                let mut st2 = st.clone();
                st2.multisets.insert((*v).clone(), part);
                match_antecedent(&[], more, left, st2, out);
            }
        }
    }
}

fn match_component(c: &SchematicComponent, s: &Sequent, st: Partial) -> Vec<Partial> {
    let mut st = st;
    if !match_succ(&c.succ, &s.succ, &mut st) {
        return Vec::new();
    }
    let formulas: Vec<&SchematicFormula> = c
        .ant
        .iter()
        .filter_map(|e| match e {
            AntecedentEntry::Formula(sf) => Some(sf),
            _ => None,
        })
        .collect();
    let vars: Vec<&String> = c
        .ant
        .iter()
        .filter_map(|e| match e {
            AntecedentEntry::Multiset(v) => Some(v),
            _ => None,
        })
        .collect();
    let mut out = Vec::new();
    match_antecedent(&formulas, &vars, s.ant.clone(), st, &mut out);
    out
}

/// Every instantiation `I` with `I(conclusion of r) = h`, formula-variables
/// ranging over `Ω`. Instantiations giving the same premise list are
/// reported once.
pub fn match_conclusion(r: &RuleSchema, h: &Hypersequent, omega: &OmegaSet) -> Vec<Instantiation> {
    let occ: Vec<&Sequent> = h.components().collect();
    let k = r.conclusion.comps.len();
    if k > occ.len() || (!r.conclusion.has_h && k != occ.len()) {
        return Vec::new();
    }
    let mut results: Vec<Instantiation> = Vec::new();
    let mut seen_premises: BTreeSet<Vec<Hypersequent>> = BTreeSet::new();
    let mut seen: BTreeSet<Instantiation> = BTreeSet::new();
    let mut assignment: Vec<usize> = Vec::with_capacity(k);
    let unbound_formula_vars = |st: &Partial| -> Vec<String> {
        r.formula_variables()
            .into_iter()
            .filter(|v| !st.formulas.iter().any(|(n, _)| n == v))
            .collect()
    };

    fn assign(
        r: &RuleSchema,
        occ: &[&Sequent],
        assignment: &mut Vec<usize>,
        st: Partial,
        emit: &mut dyn FnMut(&[usize], Partial),
    ) {
        let i = assignment.len();
        if i == r.conclusion.comps.len() {
            emit(assignment, st);
            return;
        }
        let mut tried: Vec<&Sequent> = Vec::new();
        for (j, s) in occ.iter().enumerate() {
            if assignment.contains(&j) || tried.contains(s) {
                continue;
            }
            tried.push(s);
            // the first unused occurrence of an equal sequent stands for all
            for st2 in match_component(&r.conclusion.comps[i], s, st.clone()) {
                assignment.push(j);
                assign(r, occ, assignment, st2, emit);
                assignment.pop();
            }
        }
    }

    let mut emit = |used: &[usize], st: Partial| {
        let mut rest = Hypersequent::empty();
        for (j, s) in occ.iter().enumerate() {
            if !used.contains(&j) {
                rest.add((*s).clone(), 1);
            }
        }
        if !r.conclusion.has_h && !rest.is_empty() {
            return;
        }
        if st.formulas.iter().any(|(_, f)| !omega.contains(f)) {
            return;
        }
        let mut completions = vec![st.formulas.clone()];
        for v in unbound_formula_vars(&st) {
            let mut next = Vec::new();
            for base in &completions {
                for f in omega.formulas() {
                    let mut b = base.clone();
                    b.push((v.clone(), f.clone()));
                    next.push(b);
                }
            }
            completions = next;
        }
        for fs in completions {
            let inst = Instantiation {
                hyper: r.conclusion.has_h.then(|| rest.clone()),
                multisets: st.multisets.clone(),
                succedents: st.succedents.clone(),
                formulas: fs.into_iter().collect(),
            };
            if !seen.insert(inst.clone()) {
                continue;
            }
            if let Ok((premises, _)) = instantiate(r, &inst) {
                if seen_premises.insert(premises) {
                    results.push(inst);
                }
            }
        }
    };
    assign(r, &occ, &mut assignment, Partial::default(), &mut emit);
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::hyperseq::parse_hypersequent;

    fn h(s: &str) -> Hypersequent {
        parse_hypersequent(s).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn and_r_instances() {
        let r = builtin::and_r();
        let mut i1 = Instantiation {
            hyper: Some(Hypersequent::empty()),
            ..Default::default()
        };
        i1.multisets.insert("X".into(), Multiset::new());
        i1.formulas.insert("A".into(), f("p"));
        i1.formulas.insert("B".into(), f("q"));
        let (ps, c) = instantiate(&r, &i1).unwrap();
        assert_eq!(ps, vec![h("=> p"), h("=> q")]);
        assert_eq!(c, h("=> p /\\ q"));

        let mut i3 = i1.clone();
        i3.hyper = Some(h("=> s | q -> p => p"));
        i3.multisets.insert("X".into(), Multiset::from_formulas([f("r")]));
        i3.formulas.insert("A".into(), f("p /\\ q"));
        let (ps, c) = instantiate(&r, &i3).unwrap();
        assert_eq!(ps[0], h("=> s | q -> p => p | r => p /\\ q"));
        assert_eq!(ps[1], h("=> s | q -> p => p | r => q"));
        assert_eq!(c, h("=> s | q -> p => p | r => (p /\\ q) /\\ q"));

        let mut missing = i1.clone();
        missing.formulas.remove("B");
        assert!(instantiate(&r, &missing).is_err());
    }

    #[test]
    fn com_with_empty_values() {
        let r = builtin::com();
        let mut i = Instantiation {
            hyper: Some(Hypersequent::empty()),
            ..Default::default()
        };
        for v in ["X1", "X2", "Y1", "Y2"] {
            i.multisets.insert(v.into(), Multiset::new());
        }
        for v in ["P1", "P2"] {
            i.succedents.insert(v.into(), None);
        }
        let (ps, c) = instantiate(&r, &i).unwrap();
        assert_eq!(ps, vec![h("=>"), h("=>")]);
        assert_eq!(c, h("=> | =>"));
    }

    #[test]
    fn matching_examples() {
        let o = OmegaSet::closure_of([f("p /\\ q"), f("p \\/ q")].iter());
        let ms = match_conclusion(&builtin::and_r(), &h("=> p /\\ q"), &o);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].formulas["A"], f("p"));
        assert_eq!(ms[0].formulas["B"], f("q"));
        assert!(ms[0].multisets["X"].is_empty());
        assert_eq!(ms[0].hyper, Some(Hypersequent::empty()));
        assert!(match_conclusion(&builtin::and_r(), &h("=> p \\/ q"), &o).is_empty());
        assert!(match_conclusion(&builtin::com(), &h("p => p"), &o).is_empty());
        // two components, each can play either role; antecedents split freely
        let ms = match_conclusion(&builtin::com(), &h("p => q | q => p"), &o);
        assert_eq!(ms.len(), 8);
    }

    #[test]
    fn matching_inverts_instantiation() {
        let o = OmegaSet::closure_of([f("(p -> q) * r")].iter());
        let r = builtin::imp_l();
        let mut i = Instantiation {
            hyper: Some(h("r => | => p")),
            ..Default::default()
        };
        i.multisets.insert("X".into(), Multiset::from_formulas([f("r"), f("p")]));
        i.multisets.insert("Y".into(), Multiset::from_formulas([f("q")]));
        i.succedents.insert("P".into(), Some(f("r")));
        i.formulas.insert("A".into(), f("p"));
        i.formulas.insert("B".into(), f("q"));
        let (ps, c) = instantiate(&r, &i).unwrap();
        let found = match_conclusion(&r, &c, &o)
            .into_iter()
            .any(|j| instantiate(&r, &j).unwrap().0 == ps);
        assert!(found);
    }

    #[test]
    fn digest_is_stable() {
        let i = Instantiation::default();
        assert_eq!(i.digest(), i.clone().digest());
        assert_eq!(i.digest().len(), 64);
    }
}
