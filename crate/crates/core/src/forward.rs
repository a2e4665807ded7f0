//! Forward saturation for extensions of HFL_elw.
//!
//! The derivability sets are kept as bases: each round adds the
//! ⪰Ω-minimal elements of `WI(S_i) ∖ ↑S_i` (one representative per
//! equivalence class), so `↑S_{i+1} = ↑S_i ∪ ↑WI(S_i)`. Rule instances are
//! found by mapping every component of a source member either into the
//! hypersequent-variable or onto a compatible active component of the premise
//! schema and solving for the least values of the multiset-variables.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::builtin;
use crate::calculus::ground::{ground_calculus, GSucc, GroundAssign, GroundRule};
use crate::calculus::schema::RuleKind;
use crate::calculus::{instantiate, Calculus, Instantiation};
use crate::derivation::{DerivationTree, Verdict};
use crate::formula::{Formula, OmegaSet};
use crate::hyperseq::{weak_witness, Encoder, Hypersequent, IxHyper, IxSeq};
use crate::wqo::{verify_controlled_bad, ControlFunction, ControlledSequence, VectorOrder, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForwardError {
    #[error("forward saturation needs a calculus with (lw)")]
    MissingLw,
    #[error("`{0}` is not reachable from the saturation state")]
    Unreachable(String),
    #[error("`{0}` is not an Ω-hypersequent of this state")]
    OutsideOmega(String),
}

/// Size caps for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// `⌈S⌉`.
    pub s_max: u64,
    /// `⌈C⌉`.
    pub c_max: u64,
    /// `|Ω|`.
    pub omega: u64,
    pub antecedent_cap: u64,
    pub multiplicity_cap: u64,
    pub slim_cap: u64,
    /// Number of slim sequents over `Ω`, saturating.
    pub n_slim: u64,
    pub premise_component_cap: u64,
    pub premise_multiplicity_cap: u64,
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * u128::from(n - i) / u128::from(i + 1);
        if r > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    r as u64
}

impl Bounds {
    pub fn new(s_max: usize, c_max: usize, omega: usize) -> Bounds {
        let (s, c, o) = (s_max as u64, c_max as u64, omega as u64);
        let antecedent_cap = s.saturating_mul(c).saturating_mul(o);
        let slim_cap = antecedent_cap.saturating_mul(c);
        let n_slim = (o + 1).saturating_mul(binomial(slim_cap.saturating_add(o), o));
        let premise_cap = c.saturating_add(n_slim.saturating_mul(c));
        Bounds {
            s_max: s,
            c_max: c,
            omega: o,
            antecedent_cap,
            multiplicity_cap: c,
            slim_cap,
            n_slim,
            premise_component_cap: premise_cap,
            premise_multiplicity_cap: premise_cap,
        }
    }

    pub fn is_thin(&self, h: &IxHyper) -> bool {
        h.max_antecedent() as u64 <= self.antecedent_cap && u64::from(h.max_multiplicity()) <= self.multiplicity_cap
    }

    pub fn is_slim(&self, h: &IxHyper) -> bool {
        h.max_antecedent() as u64 <= self.slim_cap
    }

    /// Slim, with at most the capped number of components and copies.
    pub fn premise_ok(&self, h: &IxHyper) -> bool {
        self.is_slim(h)
            && h.num_components() as u64 <= self.premise_component_cap
            && u64::from(h.max_multiplicity()) <= self.premise_multiplicity_cap
    }
}

#[derive(Debug, Clone)]
pub struct ForwardConfig {
    /// Stop as soon as a member reaches the target.
    pub early_exit: bool,
    pub parallel: bool,
    pub deadline: Option<Instant>,
    /// Record wall time per round in the statistics.
    pub timing: bool,
}

impl Default for ForwardConfig {
    fn default() -> Self {
        ForwardConfig {
            early_exit: true,
            parallel: true,
            deadline: None,
            timing: false,
        }
    }
}

/// How a member was obtained.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub rule: String,
    /// SHA-256 of the formula-level instantiation.
    pub digest: String,
    /// Source members, one per premise.
    pub premises: Vec<usize>,
    origin: Origin,
}

impl Provenance {
    /// The instantiation of an `S_0` member.
    pub fn initial_instantiation(&self) -> Option<&Instantiation> {
        match &self.origin {
            Origin::Initial(i) => Some(i),
            Origin::Derived { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
enum Origin {
    Initial(Instantiation),
    Derived { ground: usize, assign: GroundAssign },
}

#[derive(Debug, Clone)]
pub struct Member {
    pub hyper: Hypersequent,
    /// `None` when the member is not an `Ω`-hypersequent.
    pub dense: Option<IxHyper>,
    /// The `i` with the member in `S_i ∖ S_{i-1}`.
    pub round: usize,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub members: usize,
    pub new_members: usize,
    pub s_max: u64,
    pub bounds: Option<Bounds>,
    pub source_tuples: u64,
    pub candidates: u64,
    pub dominated: u64,
    pub deferred: usize,
    pub premise_cap_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone)]
struct Candidate {
    size: usize,
    hyper: IxHyper,
    ground: usize,
    assign: GroundAssign,
    sources: Vec<usize>,
}

impl Candidate {
    fn key(&self) -> (usize, &IxHyper, usize, &GroundAssign, &Vec<usize>) {
        (self.size, &self.hyper, self.ground, &self.assign, &self.sources)
    }
}

/// `S_0, S_1, ..` with provenance, bounds and instrumentation.
#[derive(Debug, Clone)]
pub struct SaturationState {
    enc: Encoder,
    calc: Calculus,
    ground: Vec<GroundRule>,
    members: Vec<Member>,
    /// `|S_i|` for each computed `i`.
    boundaries: Vec<usize>,
    bounds: Vec<Bounds>,
    stats: Vec<RoundStats>,
    deferred: Vec<Candidate>,
    bad: ControlledSequence,
    fixpoint: bool,
}

/// Instances of the initial schemas with formula-variables from `Ω`,
/// succedent-variables from `Ω` or empty, other variables empty.
pub fn initial_set(omega: &OmegaSet, calc: &Calculus) -> BTreeSet<Hypersequent> {
    initial_instances(omega, calc).into_iter().map(|(h, _, _)| h).collect()
}

fn initial_instances(omega: &OmegaSet, calc: &Calculus) -> Vec<(Hypersequent, String, Instantiation)> {
    let mut out: Vec<(Hypersequent, String, Instantiation)> = Vec::new();
    let mut seen = HashSet::new();
    let succ_choices: Vec<Option<Formula>> =
        std::iter::once(None).chain(omega.formulas().iter().cloned().map(Some)).collect();
    for r in calc.rules().iter().filter(|r| r.kind == RuleKind::Initial) {
        let mut insts = vec![Instantiation {
            hyper: r.conclusion.has_h.then(Hypersequent::empty),
            ..Instantiation::default()
        }];
        for v in r.variables() {
            let mut next = Vec::new();
            for base in &insts {
                match &v {
                    crate::calculus::VarRef::Formula(n) => {
                        for f in omega.formulas() {
                            let mut b = base.clone();
                            b.formulas.insert(n.clone(), f.clone());
                            next.push(b);
                        }
                    }
                    crate::calculus::VarRef::Succedent(n) => {
                        for s in &succ_choices {
                            let mut b = base.clone();
                            b.succedents.insert(n.clone(), s.clone());
                            next.push(b);
                        }
                    }
                    crate::calculus::VarRef::Multiset(n) => {
                        let mut b = base.clone();
                        b.multisets.insert(n.clone(), Default::default());
                        next.push(b);
                    }
                    _ => next.push(base.clone()),
                }
            }
            insts = next;
        }
        for i in insts {
            if let Ok((_, h)) = instantiate(r, &i) {
                if seen.insert(h.clone()) {
                    out.push((h, r.name.clone(), i));
                }
            }
        }
    }
    out.sort_by(|a, b| (a.0.symbol_size(), &a.0).cmp(&(b.0.symbol_size(), &b.0)));
    out
}

/// Pareto-minimal `x ∈ ℕ^nv` with `Σ m·x_v ≥ deficit` for every constraint.
fn pareto_min(cons: &[(&[(usize, u16)], u32)], nv: usize) -> Vec<Vec<u16>> {
    fn rec(x: &mut Vec<u16>, cons: &[(&[(usize, u16)], u32)], seen: &mut HashSet<Vec<u16>>, out: &mut Vec<Vec<u16>>) {
        let open = cons.iter().find(|(vars, need)| {
            let have: u32 = vars.iter().map(|&(v, m)| u32::from(m) * u32::from(x[v])).sum();
            have < *need
        });
        match open {
            None => out.push(x.clone()),
            Some((vars, _)) => {
                for &(v, _) in vars.iter() {
                    x[v] += 1;
                    if seen.insert(x.clone()) {
                        rec(x, cons, seen, out);
                    }
                    x[v] -= 1;
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    rec(&mut vec![0; nv], cons, &mut seen, &mut out);
    let minimal: Vec<Vec<u16>> = out
        .iter()
        .filter(|x| !out.iter().any(|y| y != *x && y.iter().zip(x.iter()).all(|(a, b)| a <= b)))
        .cloned()
        .collect();
    let mut minimal = minimal;
    minimal.sort();
    minimal.dedup();
    minimal
}

#[derive(Clone)]
struct MapState {
    h_parts: Vec<IxSeq>,
    /// `[k][j]`: pointwise maximum of the source antecedents sent to active
    /// component `j` of premise `k`.
    req: Vec<Vec<Vec<u16>>>,
    bind: Vec<Option<u16>>,
    active: Vec<bool>,
}

/// Least assignments for one ground rule and one source per premise.
fn least_instances(gr: &GroundRule, sources: &[&IxHyper], d: usize, out: &mut Vec<GroundAssign>) {
    let st = MapState {
        h_parts: Vec::new(),
        req: gr.premises.iter().map(|p| vec![vec![0u16; d]; p.comps.len()]).collect(),
        bind: vec![None; gr.succ_vars.len()],
        active: vec![false; gr.premises.len()],
    };
    map_components(gr, sources, d, 0, 0, st, out);
}

fn map_components(
    gr: &GroundRule,
    sources: &[&IxHyper],
    d: usize,
    k: usize,
    ci: usize,
    st: MapState,
    out: &mut Vec<GroundAssign>,
) {
    if k == sources.len() {
        solve(gr, d, &st, out);
        return;
    }
    let comps = sources[k].distinct();
    let premise = &gr.premises[k];
    if ci == comps.len() {
        if premise.has_h && !st.active[k] {
            return;
        }
        map_components(gr, sources, d, k + 1, 0, st, out);
        return;
    }
    let s = &comps[ci].0;
    if premise.has_h {
        let mut st2 = st.clone();
        st2.h_parts.push(s.clone());
        map_components(gr, sources, d, k, ci + 1, st2, out);
    }
    for (j, pc) in premise.comps.iter().enumerate() {
        let mut bind = None;
        match pc.succ {
            GSucc::Empty if s.succ() != 0 => continue,
            GSucc::Fixed(c) if s.succ() != c => continue,
            GSucc::Var(v) => match st.bind[v] {
                Some(b) if b != s.succ() => continue,
                Some(_) => {}
                None => bind = Some(v),
            },
            _ => {}
        }
        let mut st2 = st.clone();
        if let Some(v) = bind {
            st2.bind[v] = Some(s.succ());
        }
        for (r, &a) in st2.req[k][j].iter_mut().zip(s.ant()) {
            *r = (*r).max(a);
        }
        st2.active[k] = true;
        map_components(gr, sources, d, k, ci + 1, st2, out);
    }
}

fn solve(gr: &GroundRule, d: usize, st: &MapState, out: &mut Vec<GroundAssign>) {
    let h = IxHyper::from_components(st.h_parts.iter().cloned()).weak_normal_form();
    let nv = gr.ms_vars.len();
    let mut per_formula: Vec<Vec<Vec<u16>>> = Vec::with_capacity(d);
    for f in 0..d {
        let mut cons: Vec<(&[(usize, u16)], u32)> = Vec::new();
        for (k, p) in gr.premises.iter().enumerate() {
            for (j, pc) in p.comps.iter().enumerate() {
                let need = st.req[k][j][f];
                let have = pc.fixed[f];
                if need > have {
                    if pc.vars.is_empty() {
                        return;
                    }
                    cons.push((&pc.vars, u32::from(need - have)));
                }
            }
        }
        per_formula.push(pareto_min(&cons, nv));
    }
    let mut ms_choices: Vec<Vec<Vec<u16>>> = vec![vec![vec![0u16; d]; nv]];
    for (f, sols) in per_formula.iter().enumerate() {
        if sols.len() == 1 {
            for ms in &mut ms_choices {
                for v in 0..nv {
                    ms[v][f] = sols[0][v];
                }
            }
            continue;
        }
        let mut next = Vec::with_capacity(ms_choices.len() * sols.len());
        for base in &ms_choices {
            for sol in sols {
                let mut ms = base.clone();
                for v in 0..nv {
                    ms[v][f] = sol[v];
                }
                next.push(ms);
            }
        }
        ms_choices = next;
    }
    let mut succ_choices: Vec<Vec<u16>> = vec![Vec::with_capacity(st.bind.len())];
    for b in &st.bind {
        let options: Vec<u16> = match b {
            Some(c) => vec![*c],
            None => (0..=d as u16).collect(),
        };
        let mut next = Vec::with_capacity(succ_choices.len() * options.len());
        for base in &succ_choices {
            for &c in &options {
                let mut s = base.clone();
                s.push(c);
                next.push(s);
            }
        }
        succ_choices = next;
    }
    for ms in &ms_choices {
        for succ in &succ_choices {
            out.push(GroundAssign {
                h: h.clone(),
                ms: ms.clone(),
                succ: succ.clone(),
            });
        }
    }
}

/// Keeps the first element (in the given order) of every minimal
/// equivalence class.
fn minimal_antichain(cands: Vec<Candidate>) -> Vec<Candidate> {
    let n = cands.len();
    let keep: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|i| {
            let c = &cands[i].hyper;
            !(0..n).any(|j| {
                j != i && cands[j].hyper.weak_reaches(c) && (j < i || !c.weak_reaches(&cands[j].hyper))
            })
        })
        .collect();
    cands.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}

#[derive(Default)]
struct Counters {
    tuples: u64,
    candidates: u64,
    dominated: u64,
    premise_violations: u64,
}

struct RoundInput<'a> {
    ground: &'a [GroundRule],
    /// `Ω`-members of `S_i` as `(id, dense)`.
    pool: Vec<(usize, &'a IxHyper)>,
    /// Members with id at least this are new in `S_i`.
    new_from: usize,
    d: usize,
    sizes: &'a [usize],
    bounds: Bounds,
    deadline: Option<Instant>,
    aborted: &'a AtomicBool,
}

impl RoundInput<'_> {
    fn dominated(&self, h: &IxHyper) -> bool {
        self.pool.iter().any(|(_, m)| m.weak_reaches(h))
    }

    fn rule_candidates(&self, gi: usize) -> (Vec<Candidate>, Counters) {
        let gr = &self.ground[gi];
        let mut cnt = Counters::default();
        let mut out = Vec::new();
        if gr.weak {
            return (out, cnt);
        }
        let n = gr.premises.len();
        let mut emit = |sources: &[usize], assigns: Vec<GroundAssign>, cnt: &mut Counters| {
            for a in assigns {
                cnt.candidates += 1;
                let c = gr.conclusion_of(&a);
                if self.dominated(&c) {
                    cnt.dominated += 1;
                    continue;
                }
                if self.bounds.is_thin(&c) && !gr.premises_of(&a).iter().all(|p| self.bounds.premise_ok(p)) {
                    cnt.premise_violations += 1;
                    debug_assert!(false, "premise outside the slim caps for `{}`", gr.name);
                }
                out.push(Candidate {
                    size: c.symbol_size(self.sizes),
                    hyper: c,
                    ground: gi,
                    assign: a,
                    sources: sources.to_vec(),
                });
            }
        };
        if n == 0 {
            if self.new_from == 0 {
                let mut assigns = Vec::new();
                least_instances(gr, &[], self.d, &mut assigns);
                emit(&[], assigns, &mut cnt);
            }
            return (out, cnt);
        }
        // sources able to send a component to an active premise component
        let eligible: Vec<Vec<usize>> = gr
            .premises
            .iter()
            .map(|p| {
                (0..self.pool.len())
                    .filter(|&i| {
                        !p.has_h
                            || self.pool[i].1.distinct().iter().any(|(s, _)| {
                                p.comps.iter().any(|pc| match pc.succ {
                                    GSucc::Empty => s.succ() == 0,
                                    GSucc::Fixed(c) => s.succ() == c,
                                    GSucc::Var(_) => true,
                                })
                            })
                    })
                    .collect()
            })
            .collect();
        let mut tuple = vec![0usize; n];
        let mut ids = vec![0usize; n];
        let mut steps = 0u64;
        // the first new source sits at position `first`
        for first in 0..n {
            let choices: Vec<Vec<usize>> = (0..n)
                .map(|k| {
                    eligible[k]
                        .iter()
                        .copied()
                        .filter(|&i| {
                            let is_new = self.pool[i].0 >= self.new_from;
                            match k.cmp(&first) {
                                std::cmp::Ordering::Less => !is_new,
                                std::cmp::Ordering::Equal => is_new,
                                std::cmp::Ordering::Greater => true,
                            }
                        })
                        .collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; n];
            loop {
                for k in 0..n {
                    tuple[k] = choices[k][idx[k]];
                    ids[k] = self.pool[tuple[k]].0;
                }
                cnt.tuples += 1;
                steps += 1;
                if steps.is_multiple_of(256) {
                    if self.aborted.load(Ordering::Relaxed) {
                        return (out, cnt);
                    }
                    if self.deadline.is_some_and(|t| Instant::now() > t) {
                        self.aborted.store(true, Ordering::Relaxed);
                        return (out, cnt);
                    }
                }
                let srcs: Vec<&IxHyper> = tuple.iter().map(|&i| self.pool[i].1).collect();
                let mut assigns = Vec::new();
                least_instances(gr, &srcs, self.d, &mut assigns);
                emit(&ids, assigns, &mut cnt);
                let mut k = n;
                let done = loop {
                    if k == 0 {
                        break true;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break false;
                    }
                    idx[k] = 0;
                };
                if done {
                    break;
                }
            }
        }
        (out, cnt)
    }
}

impl SaturationState {
    /// `S_0` for `Ω` and `C`.
    pub fn new(omega: OmegaSet, calc: Calculus) -> Result<Self, ForwardError> {
        if !calc.has_lw() {
            return Err(ForwardError::MissingLw);
        }
        let enc = Encoder::new(omega);
        let ground = ground_calculus(&calc, &enc);
        let members: Vec<Member> = initial_instances(enc.omega(), &calc)
            .into_iter()
            .map(|(h, rule, inst)| Member {
                dense: enc.encode(&h).ok(),
                hyper: h,
                round: 0,
                provenance: Provenance {
                    rule,
                    digest: inst.digest(),
                    premises: Vec::new(),
                    origin: Origin::Initial(inst),
                },
            })
            .collect();
        let d = enc.dim();
        let s_max = members.iter().map(|m| m.hyper.symbol_size()).max().unwrap_or(0);
        let mut bad = ControlledSequence::new(d, d + 1, ControlFunction::ExpPow(2), s_max as u64);
        if let Some(first) = members
            .iter()
            .filter(|m| m.dense.is_some())
            .max_by(|a, b| a.hyper.symbol_size().cmp(&b.hyper.symbol_size()).then(b.hyper.cmp(&a.hyper)))
        {
            bad.push(first.dense.as_ref().expect("filtered").sharp(d)).expect("dimensions");
        }
        let n0 = members.len();
        let mut state = SaturationState {
            enc,
            calc,
            ground,
            members,
            boundaries: vec![n0],
            bounds: Vec::new(),
            stats: Vec::new(),
            deferred: Vec::new(),
            bad,
            fixpoint: false,
        };
        state.stats.push(RoundStats {
            round: 0,
            members: n0,
            new_members: n0,
            s_max: s_max as u64,
            ..RoundStats::default()
        });
        Ok(state)
    }

    pub fn omega(&self) -> &OmegaSet {
        self.enc.omega()
    }

    pub fn encoder(&self) -> &Encoder {
        &self.enc
    }

    pub fn calculus(&self) -> &Calculus {
        &self.calc
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    /// Index of the last computed set.
    pub fn last_round(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// `S_i`.
    pub fn set(&self, i: usize) -> &[Member] {
        &self.members[..self.boundaries[i]]
    }

    pub fn set_hypersequents(&self, i: usize) -> BTreeSet<Hypersequent> {
        self.set(i).iter().map(|m| m.hyper.clone()).collect()
    }

    /// Bounds used to compute `S_{i+1}` from `S_i`.
    pub fn bounds(&self) -> &[Bounds] {
        &self.bounds
    }

    pub fn current_bounds(&self) -> Bounds {
        Bounds::new(self.s_max(), self.calc.schema_size_max(), self.enc.dim())
    }

    pub fn stats(&self) -> &[RoundStats] {
        &self.stats
    }

    /// One new element per round, starting from a largest `Ω`-member of
    /// `S_0`, as `#` encodings.
    pub fn bad_sequence(&self) -> &ControlledSequence {
        &self.bad
    }

    pub fn is_fixpoint(&self) -> bool {
        self.fixpoint
    }

    fn s_max(&self) -> usize {
        self.members.iter().map(|m| m.hyper.symbol_size()).max().unwrap_or(0)
    }

    /// Computes the next set. Returns `Ok(false)` at the fixpoint and
    /// `Err(())` when the deadline passed (the state is unchanged).
    #[allow(clippy::result_unit_err)]
    pub fn step(&mut self, cfg: &ForwardConfig) -> Result<bool, ()> {
        if self.fixpoint {
            return Ok(false);
        }
        let started = Instant::now();
        let i = self.last_round();
        let bounds = self.current_bounds();
        let new_from = if i == 0 { 0 } else { self.boundaries[i - 1] };
        let aborted = AtomicBool::new(false);
        let input = RoundInput {
            ground: &self.ground,
            pool: self
                .members
                .iter()
                .enumerate()
                .filter_map(|(id, m)| m.dense.as_ref().map(|h| (id, h)))
                .collect(),
            new_from,
            d: self.enc.dim(),
            sizes: self.enc.sizes(),
            bounds,
            deadline: cfg.deadline,
            aborted: &aborted,
        };
        let results: Vec<(Vec<Candidate>, Counters)> = if cfg.parallel {
            (0..self.ground.len()).into_par_iter().map(|g| input.rule_candidates(g)).collect()
        } else {
            (0..self.ground.len()).map(|g| input.rule_candidates(g)).collect()
        };
        if aborted.load(Ordering::Relaxed) {
            return Err(());
        }
        let mut counters = Counters::default();
        let mut pool: Vec<Candidate> = Vec::new();
        let mut deferred: Vec<Candidate> = Vec::new();
        for (cands, cnt) in results {
            counters.tuples += cnt.tuples;
            counters.candidates += cnt.candidates;
            counters.dominated += cnt.dominated;
            counters.premise_violations += cnt.premise_violations;
            for c in cands {
                if bounds.is_thin(&c.hyper) {
                    pool.push(c);
                } else {
                    deferred.push(c);
                }
            }
        }
        for c in std::mem::take(&mut self.deferred) {
            if input.dominated(&c.hyper) {
                continue;
            }
            if bounds.is_thin(&c.hyper) {
                pool.push(c);
            } else {
                deferred.push(c);
            }
        }
        drop(input);
        pool.sort_by(|a, b| a.key().cmp(&b.key()));
        pool.dedup_by(|a, b| a.hyper == b.hyper);
        let fresh = minimal_antichain(pool);
        deferred.sort_by(|a, b| a.key().cmp(&b.key()));
        deferred.dedup_by(|a, b| a.hyper == b.hyper);
        self.deferred = deferred;
        self.bounds.push(bounds);
        let new_count = fresh.len();
        for c in fresh {
            let gr = &self.ground[c.ground];
            let digest = gr.to_instantiation(&c.assign, &self.enc).digest();
            self.members.push(Member {
                hyper: self.enc.decode(&c.hyper),
                dense: Some(c.hyper),
                round: i + 1,
                provenance: Provenance {
                    rule: gr.name.clone(),
                    digest,
                    premises: c.sources,
                    origin: Origin::Derived {
                        ground: c.ground,
                        assign: c.assign,
                    },
                },
            });
        }
        if let Some(first) = self.members.get(self.boundaries[i]) {
            let d = self.enc.dim();
            self.bad
                .push(first.dense.as_ref().expect("derived members are dense").sharp(d))
                .expect("dimensions");
        }
        self.boundaries.push(self.members.len());
        if new_count == 0 {
            self.fixpoint = true;
        }
        self.stats.push(RoundStats {
            round: i + 1,
            members: self.members.len(),
            new_members: new_count,
            s_max: bounds.s_max,
            bounds: Some(bounds),
            source_tuples: counters.tuples,
            candidates: counters.candidates,
            dominated: counters.dominated,
            deferred: self.deferred.len(),
            premise_cap_violations: counters.premise_violations,
            wall_ms: cfg.timing.then(|| started.elapsed().as_millis() as u64),
        });
        Ok(new_count > 0)
    }

    /// First member (by id) from which `target` is reachable by weak
    /// structural rules.
    pub fn find_reaching(&self, target: &Hypersequent) -> Option<usize> {
        let t = self.enc.encode(target).ok()?;
        self.members
            .iter()
            .position(|m| m.dense.as_ref().is_some_and(|h| h.weak_reaches(&t)))
    }

    fn find_reaching_from(&self, t: &IxHyper, from: usize) -> Option<usize> {
        (from..self.members.len()).find(|&i| self.members[i].dense.as_ref().is_some_and(|h| h.weak_reaches(t)))
    }

    /// The derivation recorded for member `id`.
    pub fn derivation_of(&self, id: usize) -> DerivationTree {
        let mut memo = HashMap::new();
        self.derive(id, &mut memo)
    }

    fn derive(&self, id: usize, memo: &mut HashMap<usize, DerivationTree>) -> DerivationTree {
        if let Some(t) = memo.get(&id) {
            return t.clone();
        }
        let m = &self.members[id];
        let t = match &m.provenance.origin {
            Origin::Initial(_) => DerivationTree::new(m.hyper.clone(), m.provenance.rule.clone(), Vec::new()),
            Origin::Derived { ground, assign } => {
                let gr = &self.ground[*ground];
                let premises = gr.premises_of(assign);
                let children = m
                    .provenance
                    .premises
                    .iter()
                    .zip(&premises)
                    .map(|(&src, p)| {
                        let sub = self.derive(src, memo);
                        weak_chain(&self.calc, sub, &self.members[src].hyper, &self.enc.decode(p))
                    })
                    .collect();
                DerivationTree::new(m.hyper.clone(), gr.name.clone(), children)
            }
        }
        .with_digest(m.provenance.digest.clone());
        memo.insert(id, t.clone());
        t
    }

    /// Checks monotonicity, the antitone filter, the fixpoint and the
    /// recorded bad sequence.
    pub fn verify_invariants(&self) -> Result<(), String> {
        for w in self.boundaries.windows(2) {
            if w[0] > w[1] {
                return Err("S_i is not contained in S_{i+1}".into());
            }
        }
        for i in 0..self.last_round() {
            let (lo, hi) = (self.boundaries[i], self.boundaries[i + 1]);
            for new in &self.members[lo..hi] {
                let h = new.dense.as_ref().ok_or("derived member outside Ω")?;
                if let Some(old) = self.members[..lo]
                    .iter()
                    .find(|o| o.dense.as_ref().is_some_and(|g| g.weak_reaches(h)))
                {
                    return Err(format!("{} in S_{} is reachable from {} in S_{i}", new.hyper, i + 1, old.hyper));
                }
            }
        }
        if !self.fixpoint {
            return Err("fixpoint not reached".into());
        }
        let n = self.last_round();
        if self.boundaries[n] != self.boundaries[n - 1] {
            return Err("S_{N+1} differs from S_N".into());
        }
        match verify_controlled_bad(&self.bad, VectorOrder::Majoring) {
            Ok(None) => Ok(()),
            Ok(Some(v)) => Err(format!("bad sequence: {v}")),
            Err(e) => Err(format!("bad sequence: {e}")),
        }
    }

    pub fn bad_sequence_violation(&self) -> Option<Violation> {
        verify_controlled_bad(&self.bad, VectorOrder::Majoring).ok().flatten()
    }
}

fn weak_rule_name(calc: &Calculus, schema: crate::calculus::RuleSchema) -> String {
    calc.rules()
        .iter()
        .find(|r| r.same_shape(&schema))
        .map(|r| r.name.clone())
        .unwrap_or(schema.name)
}

/// Extends a derivation of `g` to one of `h` for `g ⪰Ω h`: one (lw) per
/// component copy, then (EC) for surplus copies and (EW) for missing ones.
pub fn weak_chain(calc: &Calculus, tree: DerivationTree, g: &Hypersequent, h: &Hypersequent) -> DerivationTree {
    let witness = weak_witness(g, h).expect("target reachable by weak structural rules");
    let (lw, ec, ew) = (
        weak_rule_name(calc, builtin::lw()),
        weak_rule_name(calc, builtin::ec()),
        weak_rule_name(calc, builtin::ew()),
    );
    let mut cur = g.clone();
    let mut t = tree;
    let distinct: Vec<_> = g.distinct().map(|(s, n)| (s.clone(), n)).collect();
    for (s, n) in distinct {
        let target = &witness[&s];
        if *target == s {
            continue;
        }
        for _ in 0..n {
            let mut next = cur.clone();
            next.remove_one(&s);
            next.add(target.clone(), 1);
            t = DerivationTree::new(next.clone(), lw.clone(), vec![t]);
            cur = next;
        }
    }
    let distinct: Vec<_> = cur.distinct().map(|(s, n)| (s.clone(), n)).collect();
    for (s, n) in distinct {
        let want = h.multiplicity(&s);
        for _ in want..n {
            let mut next = cur.clone();
            next.remove_one(&s);
            t = DerivationTree::new(next.clone(), ec.clone(), vec![t]);
            cur = next;
        }
    }
    let wanted: Vec<_> = h.distinct().map(|(s, n)| (s.clone(), n)).collect();
    for (s, n) in wanted {
        for _ in cur.multiplicity(&s)..n {
            let mut next = cur.clone();
            next.add(s.clone(), 1);
            t = DerivationTree::new(next.clone(), ew.clone(), vec![t]);
            cur = next;
        }
    }
    debug_assert_eq!(&cur, h);
    t
}

/// The ⪰Ω-minimal elements of `WI(S, Ω, C)` not reachable from `S`, one per
/// equivalence class, with the rule instance producing each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiElement {
    pub hyper: Hypersequent,
    pub rule: String,
    pub premises: Vec<Hypersequent>,
    pub sources: Vec<Hypersequent>,
}

pub fn compute_wi(s: &[Hypersequent], omega: &OmegaSet, calc: &Calculus) -> Vec<WiElement> {
    let enc = Encoder::new(omega.clone());
    let ground = ground_calculus(calc, &enc);
    let dense: Vec<Option<IxHyper>> = s.iter().map(|h| enc.encode(h).ok()).collect();
    let s_max = s.iter().map(Hypersequent::symbol_size).max().unwrap_or(0);
    let aborted = AtomicBool::new(false);
    let input = RoundInput {
        ground: &ground,
        pool: dense
            .iter()
            .enumerate()
            .filter_map(|(i, h)| h.as_ref().map(|h| (i, h)))
            .collect(),
        new_from: 0,
        d: enc.dim(),
        sizes: enc.sizes(),
        bounds: Bounds::new(s_max, calc.schema_size_max(), enc.dim()),
        deadline: None,
        aborted: &aborted,
    };
    let mut pool: Vec<Candidate> = (0..ground.len())
        .into_par_iter()
        .flat_map_iter(|g| input.rule_candidates(g).0)
        .filter(|c| input.bounds.is_thin(&c.hyper))
        .collect();
    pool.sort_by(|a, b| a.key().cmp(&b.key()));
    pool.dedup_by(|a, b| a.hyper == b.hyper);
    minimal_antichain(pool)
        .into_iter()
        .map(|c| {
            let gr = &ground[c.ground];
            WiElement {
                hyper: enc.decode(&c.hyper),
                rule: gr.name.clone(),
                premises: gr.premises_of(&c.assign).iter().map(|p| enc.decode(p)).collect(),
                sources: c.sources.iter().map(|&i| s[i].clone()).collect(),
            }
        })
        .collect()
}

/// Saturates to the fixpoint.
pub fn saturate(omega: &OmegaSet, calc: &Calculus) -> Result<SaturationState, ForwardError> {
    let mut st = SaturationState::new(omega.clone(), calc.clone())?;
    let cfg = ForwardConfig::default();
    while st.step(&cfg).expect("no deadline") {}
    Ok(st)
}

#[derive(Debug, Clone)]
pub struct ForwardOutcome {
    pub verdict: Verdict,
    pub derivation: Option<DerivationTree>,
    pub state: SaturationState,
}

/// Decides `h` by saturating over the subformulas of `h`.
pub fn decide_forward(h: &Hypersequent, calc: &Calculus, cfg: &ForwardConfig) -> Result<ForwardOutcome, ForwardError> {
    let omega = OmegaSet::closure_of(h.formulas());
    let mut st = SaturationState::new(omega, calc.clone())?;
    let target = st.enc.encode(h).expect("closure contains every formula of h");
    let mut from = 0;
    loop {
        if cfg.early_exit || st.fixpoint {
            if let Some(id) = st.find_reaching_from(&target, from) {
                let tree = extract_member(&st, id, h);
                return Ok(ForwardOutcome {
                    verdict: Verdict::Derivable,
                    derivation: Some(tree),
                    state: st,
                });
            }
            if st.fixpoint {
                return Ok(ForwardOutcome {
                    verdict: Verdict::NotDerivable,
                    derivation: None,
                    state: st,
                });
            }
            from = st.members.len();
        }
        if st.step(cfg).is_err() {
            return Ok(ForwardOutcome {
                verdict: Verdict::Indeterminate,
                derivation: None,
                state: st,
            });
        }
    }
}

fn extract_member(st: &SaturationState, id: usize, target: &Hypersequent) -> DerivationTree {
    let t = st.derivation_of(id);
    weak_chain(&st.calc, t, &st.members[id].hyper, target)
}

/// A derivation of `target` from the first member reaching it.
pub fn extract_derivation(state: &SaturationState, target: &Hypersequent) -> Result<DerivationTree, ForwardError> {
    if state.enc.encode(target).is_err() {
        return Err(ForwardError::OutsideOmega(target.to_string()));
    }
    let id = state
        .find_reaching(target)
        .ok_or_else(|| ForwardError::Unreachable(target.to_string()))?;
    Ok(extract_member(state, id, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::builtin_calculus;
    use crate::checker::check_derivation;
    use crate::formula::parse_formula;
    use crate::hyperseq::parse_hypersequent;

    fn h(s: &str) -> Hypersequent {
        parse_hypersequent(s).unwrap()
    }

    fn omega(fs: &[&str]) -> OmegaSet {
        let fs: Vec<Formula> = fs.iter().map(|s| parse_formula(s).unwrap()).collect();
        OmegaSet::closure_of(fs.iter())
    }

    #[test]
    fn pareto_solutions() {
        let vars: Vec<(usize, u16)> = vec![(0, 1), (1, 2)];
        let sols = pareto_min(&[(&vars, 3)], 2);
        assert_eq!(sols, vec![vec![0, 2], vec![1, 1], vec![3, 0]]);
        assert_eq!(pareto_min(&[], 2), vec![vec![0, 0]]);
        let a: Vec<(usize, u16)> = vec![(0, 1)];
        let b: Vec<(usize, u16)> = vec![(0, 1), (1, 1)];
        assert_eq!(pareto_min(&[(&a, 2), (&b, 3)], 2), vec![vec![2, 1], vec![3, 0]]);
    }

    #[test]
    fn bounds_shape() {
        let b = Bounds::new(3, 10, 2);
        assert_eq!(b.antecedent_cap, 60);
        assert_eq!(b.slim_cap, 600);
        assert_eq!(b.n_slim, 3 * binomial(602, 2));
        assert_eq!(b.premise_component_cap, 10 + b.n_slim * 10);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(Bounds::new(1000, 1000, 50).n_slim, u64::MAX);
    }

    #[test]
    fn initial_set_for_p() {
        let c = builtin_calculus("hflelw").unwrap();
        let got = initial_set(&omega(&["p"]), &c);
        let want: BTreeSet<Hypersequent> = ["p => p", "=> 1", "=> top", "0 =>", "bot =>", "bot => p"]
            .iter()
            .map(|s| h(s))
            .collect();
        assert_eq!(got, want);
        let empty = initial_set(&OmegaSet::empty(), &c);
        assert_eq!(empty.len(), 4);
    }

    #[test]
    fn and_right_from_identities() {
        let c = builtin_calculus("hflelw").unwrap();
        let o = omega(&["p /\\ q"]);
        let wi = compute_wi(&[h("p => p"), h("q => q")], &o, &c);
        assert!(wi.iter().any(|e| e.hyper == h("p, q => p /\\ q")), "{wi:?}");
    }

    #[test]
    fn requires_lw() {
        let c = builtin_calculus("hflec").unwrap();
        assert_eq!(SaturationState::new(omega(&["p"]), c).unwrap_err(), ForwardError::MissingLw);
    }

    #[test]
    fn small_saturation_invariants() {
        let c = builtin_calculus("hflelw").unwrap();
        let st = saturate(&omega(&["p"]), &c).unwrap();
        assert!(st.set_hypersequents(st.last_round()).contains(&h("p => p")));
        st.verify_invariants().unwrap();
    }

    #[test]
    fn proves_and_checks() {
        let c = builtin_calculus("hflelw").unwrap();
        for (goal, expect) in [
            ("=> p -> p", Verdict::Derivable),
            ("=> p -> (q -> p)", Verdict::Derivable),
            ("p /\\ q => q /\\ p", Verdict::Derivable),
            ("=> p", Verdict::NotDerivable),
            ("=> p -> p * p", Verdict::NotDerivable),
        ] {
            let out = decide_forward(&h(goal), &c, &ForwardConfig::default()).unwrap();
            assert_eq!(out.verdict, expect, "{goal}");
            if let Some(t) = out.derivation {
                assert_eq!(t.conclusion, h(goal));
                check_derivation(&t, &c).unwrap_or_else(|e| panic!("{goal}: {e}\n{t}"));
            }
        }
    }
}
