//! Schemas with their formula-variables instantiated over a fixed `Ω`,
//! in the dense representation used by the engines.

use std::collections::BTreeMap;

use crate::formula::Formula;
use crate::hyperseq::{Encoder, IxHyper, IxSeq, Multiset};

use super::schema::{AntecedentEntry, RuleKind, RuleSchema, SchematicHypersequent, SuccedentSlot};
use super::{Calculus, Instantiation};

/// A substitution for the formula variables of a schema.
type Sigma = [(String, Formula)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSucc {
    Empty,
    Var(usize),
    Fixed(u16),
}

/// A component: fixed formula counts plus multiset-variables with
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundComp {
    pub fixed: Vec<u16>,
    pub vars: Vec<(usize, u16)>,
    pub succ: GSucc,
}

impl GroundComp {
    pub fn succ_code(&self, succ: &[u16]) -> u16 {
        match self.succ {
            GSucc::Empty => 0,
            GSucc::Var(v) => succ[v],
            GSucc::Fixed(c) => c,
        }
    }

    pub fn instantiate(&self, ms: &[Vec<u16>], succ: &[u16]) -> IxSeq {
        let mut ant = self.fixed.clone();
        for &(v, k) in &self.vars {
            for (a, &x) in ant.iter_mut().zip(&ms[v]) {
                *a += k * x;
            }
        }
        IxSeq::new(self.succ_code(succ), &ant)
    }

    pub fn fixed_len(&self) -> usize {
        self.fixed.iter().map(|&m| m as usize).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundHyper {
    pub has_h: bool,
    pub comps: Vec<GroundComp>,
}

/// Values for `H`, the multiset-variables and the succedent-variables of a
/// ground rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAssign {
    pub h: IxHyper,
    pub ms: Vec<Vec<u16>>,
    pub succ: Vec<u16>,
}

/// A schema of the calculus with formula-variables fixed by `sigma`.
#[derive(Debug, Clone)]
pub struct GroundRule {
    /// Index of the schema in the calculus.
    pub schema: usize,
    pub name: String,
    pub kind: RuleKind,
    /// (lw), (EC) or (EW).
    pub weak: bool,
    pub sigma: Vec<(String, Formula)>,
    pub ms_vars: Vec<String>,
    pub succ_vars: Vec<String>,
    pub premises: Vec<GroundHyper>,
    pub conclusion: GroundHyper,
}

impl GroundRule {
    pub fn instantiate(&self, gh: &GroundHyper, a: &GroundAssign) -> IxHyper {
        let mut out = if gh.has_h { a.h.clone() } else { IxHyper::empty() };
        for c in &gh.comps {
            out.add(c.instantiate(&a.ms, &a.succ), 1);
        }
        out
    }

    pub fn conclusion_of(&self, a: &GroundAssign) -> IxHyper {
        self.instantiate(&self.conclusion, a)
    }

    pub fn premises_of(&self, a: &GroundAssign) -> Vec<IxHyper> {
        self.premises.iter().map(|p| self.instantiate(p, a)).collect()
    }

    /// The formula-level instantiation.
    pub fn to_instantiation(&self, a: &GroundAssign, enc: &Encoder) -> Instantiation {
        let mut multisets = BTreeMap::new();
        for (name, v) in self.ms_vars.iter().zip(&a.ms) {
            let mut m = Multiset::new();
            for (i, &k) in v.iter().enumerate() {
                m.add(enc.omega().formulas()[i].clone(), u32::from(k));
            }
            multisets.insert(name.clone(), m);
        }
        let succedents = self
            .succ_vars
            .iter()
            .zip(&a.succ)
            .map(|(n, &c)| (n.clone(), (c > 0).then(|| enc.formula(c).clone())))
            .collect();
        Instantiation {
            hyper: self.conclusion.has_h.then(|| enc.decode(&a.h)),
            multisets,
            succedents,
            formulas: self.sigma.iter().cloned().collect(),
        }
    }
}

fn ground_hyper(
    sh: &SchematicHypersequent,
    sigma: &[(String, Formula)],
    ms_vars: &[String],
    succ_vars: &[String],
    enc: &Encoder,
) -> Option<GroundHyper> {
    let lookup = |v: &str| sigma.iter().find(|(n, _)| n == v).map(|(_, f)| f.clone());
    let mut comps = Vec::new();
    for c in &sh.comps {
        let mut fixed = vec![0u16; enc.dim()];
        let mut vars: Vec<(usize, u16)> = Vec::new();
        for e in &c.ant {
            match e {
                AntecedentEntry::Multiset(v) => {
                    let idx = ms_vars.iter().position(|n| n == v).expect("collected");
                    match vars.iter_mut().find(|(i, _)| *i == idx) {
                        Some((_, k)) => *k += 1,
                        None => vars.push((idx, 1)),
                    }
                }
                AntecedentEntry::Formula(sf) => {
                    let f = sf.instantiate(&lookup)?;
                    fixed[enc.code(&f)? as usize - 1] += 1;
                }
            }
        }
        let succ = match &c.succ {
            SuccedentSlot::Empty => GSucc::Empty,
            SuccedentSlot::Var(v) => GSucc::Var(succ_vars.iter().position(|n| n == v).expect("collected")),
            SuccedentSlot::Formula(sf) => GSucc::Fixed(enc.code(&sf.instantiate(&lookup)?)?),
        };
        vars.sort_unstable();
        comps.push(GroundComp { fixed, vars, succ });
    }
    Some(GroundHyper { has_h: sh.has_h, comps })
}

/// Every instance of `r` over the formula-variables whose schematic
/// formulas all land in `Ω`.
pub fn ground_rule(schema: usize, r: &RuleSchema, enc: &Encoder) -> Vec<GroundRule> {
    let mut ms_vars = Vec::new();
    let mut succ_vars = Vec::new();
    for v in r.variables() {
        match v {
            super::VarRef::Multiset(n) => ms_vars.push(n),
            super::VarRef::Succedent(n) => succ_vars.push(n),
            _ => {}
        }
    }
    let fvars = r.formula_variables();
    let weak = r.is_weak_structural();
    let mut out = Vec::new();
    let mut sigma: Vec<(String, Formula)> = Vec::new();
    fn rec(
        i: usize,
        fvars: &[String],
        sigma: &mut Vec<(String, Formula)>,
        enc: &Encoder,
        emit: &mut dyn FnMut(&Sigma),
    ) {
        if i == fvars.len() {
            emit(sigma);
            return;
        }
        for f in enc.omega().formulas() {
            sigma.push((fvars[i].clone(), f.clone()));
            rec(i + 1, fvars, sigma, enc, emit);
            sigma.pop();
        }
    }
    let mut emit = |s: &[(String, Formula)]| {
        let conclusion = match ground_hyper(&r.conclusion, s, &ms_vars, &succ_vars, enc) {
            Some(c) => c,
            None => return,
        };
        let premises: Option<Vec<GroundHyper>> = r
            .premises
            .iter()
            .map(|p| ground_hyper(p, s, &ms_vars, &succ_vars, enc))
            .collect();
        if let Some(premises) = premises {
            out.push(GroundRule {
                schema,
                name: r.name.clone(),
                kind: r.kind,
                weak,
                sigma: s.to_vec(),
                ms_vars: ms_vars.clone(),
                succ_vars: succ_vars.clone(),
                premises,
                conclusion,
            });
        }
    };
    rec(0, &fvars, &mut sigma, enc, &mut emit);
    out
}

/// All ground rules of a calculus over the encoder's `Ω`.
pub fn ground_calculus(calc: &Calculus, enc: &Encoder) -> Vec<GroundRule> {
    calc.rules()
        .iter()
        .enumerate()
        .flat_map(|(i, r)| ground_rule(i, r, enc))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{builtin, builtin_calculus, instantiate};
    use crate::formula::{parse_formula, OmegaSet};

    #[test]
    fn grounding_over_omega() {
        let o = OmegaSet::closure_of([parse_formula("p -> q /\\ p").unwrap()].iter());
        let enc = Encoder::new(o);
        let calc = builtin_calculus("hflelw").unwrap();
        let g = ground_calculus(&calc, &enc);
        assert_eq!(g.iter().filter(|r| r.name == "id").count(), 4);
        assert_eq!(g.iter().filter(|r| r.name == "->R").count(), 1);
        assert_eq!(g.iter().filter(|r| r.name == "/\\R").count(), 1);
        assert_eq!(g.iter().filter(|r| r.name == "1R").count(), 0);
        assert!(g.iter().filter(|r| r.name == "lw").all(|r| r.weak));
    }

    #[test]
    fn dense_and_formula_instances_agree() {
        let o = OmegaSet::closure_of([parse_formula("(p -> q) * r").unwrap()].iter());
        let enc = Encoder::new(o);
        let r = builtin::imp_l();
        let g = &ground_rule(0, &r, &enc)[0];
        let d = enc.dim();
        let mut x = vec![0u16; d];
        x[0] = 1;
        let a = GroundAssign {
            h: IxHyper::from_components([IxSeq::empty(d, 2)]),
            ms: vec![x, vec![0; d]],
            succ: vec![3],
        };
        let inst = g.to_instantiation(&a, &enc);
        let (ps, c) = instantiate(&r, &inst).unwrap();
        assert_eq!(enc.decode(&g.conclusion_of(&a)), c);
        let dense: Vec<_> = g.premises_of(&a).iter().map(|p| enc.decode(p)).collect();
        assert_eq!(dense, ps);
    }
}
