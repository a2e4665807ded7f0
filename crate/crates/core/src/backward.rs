//! Irredundant backward search for extensions of HFL_ec.
//!
//! Contraction is absorbed into rule application: a rule instance applies to
//! a goal `g` when every active component of its conclusion contracts onto a
//! component of `g` (several may land on the same one). The
//! hypersequent-variable is instantiated with `g` itself, so the conclusion
//! is `g | active` and `g` follows from it by (c) and (EC). Literal (c), (EC)
//! and (EW) steps would always violate irredundancy and are not tried.
//!
//! When every remaining rule has one active component in its conclusion and
//! in each premise, a hypersequent is derivable iff one of its components
//! is, and the hypersequent-variable is left empty instead; `g` then follows
//! from the conclusion by (c) and (EW).
//!
//! When the calculus has (lw) or (rw) these are absorbed the same way: a
//! conclusion component may also weaken onto its goal component. Contexts are
//! then copied whole, since a larger antecedent in a premise only weakens it.
//!
//! Alternatives with a premise `p` such that some goal `a` on the current
//! AND-path (the goal itself included) is obtainable from `p` by the absorbed
//! structural rules are omitted whole. Without (lw) and (rw) this is
//! `a ≼hyp p`.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::calculus::builtin;
use crate::calculus::ground::{ground_calculus, GSucc, GroundAssign, GroundHyper, GroundRule};
use crate::calculus::Calculus;
use crate::derivation::{DerivationTree, Verdict};
use crate::formula::OmegaSet;
use crate::hyperseq::{Encoder, Hypersequent, IxHyper, IxSeq, Multiset, Sequent};
use crate::wqo::{verify_controlled_bad, ControlFunction, ControlledSequence, VectorOrder, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackwardError {
    #[error("backward search needs a calculus with (c)")]
    MissingC,
}

#[derive(Debug, Clone)]
pub struct BackwardConfig {
    pub deadline: Option<Instant>,
    /// Reuse a failure when every goal that caused a pruning below it is
    /// again on the path.
    pub failure_cache: bool,
    /// Bound on the number of AND-paths kept for instrumentation.
    pub max_sampled_paths: usize,
    /// Irredundancy pruning; only for experiments, since without it the
    /// search need not terminate.
    pub pruning: bool,
    /// Goals deeper than this fail; a failed root then gives INDETERMINATE.
    pub depth_cap: Option<usize>,
}

impl Default for BackwardConfig {
    fn default() -> Self {
        BackwardConfig {
            deadline: None,
            failure_cache: true,
            max_sampled_paths: 64,
            pruning: true,
            depth_cap: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BackwardStats {
    pub nodes_expanded: u64,
    pub alternatives: u64,
    pub prunings: u64,
    pub proven_cache_hits: u64,
    pub failure_cache_hits: u64,
    pub max_branch_length: usize,
    pub max_goal_size: usize,
    pub premise_size_violations: u64,
    pub depth_cap_hits: u64,
}

/// One AND-path with its `#` sequence checked under the minoring order.
#[derive(Debug, Clone)]
pub struct SampledPath {
    pub goals: Vec<Hypersequent>,
    pub sequence: ControlledSequence,
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone)]
pub struct BackwardOutcome {
    pub verdict: Verdict,
    pub derivation: Option<DerivationTree>,
    pub stats: BackwardStats,
    pub paths: Vec<SampledPath>,
}

impl BackwardOutcome {
    pub fn path_violations(&self) -> Vec<(usize, Violation)> {
        self.paths
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.violation.map(|v| (i, v)))
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Alt {
    ground: usize,
    assign: GroundAssign,
    premises: Vec<IxHyper>,
}

struct Aborted;

enum Outcome {
    Proven,
    /// Depths of the path goals whose presence caused prunings.
    Failed(BTreeSet<usize>),
}

struct Search<'a> {
    ground: &'a [GroundRule],
    enc: &'a Encoder,
    absorb: Absorb,
    /// Every rule acts on one component, so contexts are left empty.
    local: bool,
    growth: ControlFunction,
    cfg: &'a BackwardConfig,
    path: Vec<IxHyper>,
    proven: HashMap<IxHyper, Alt>,
    failed: HashMap<IxHyper, Vec<Vec<IxHyper>>>,
    stats: BackwardStats,
    longest: Vec<IxHyper>,
    dead_ends: Vec<Vec<IxHyper>>,
}

/// Which weakenings are absorbed next to (c), (EC) and (EW).
#[derive(Debug, Clone, Copy)]
struct Absorb {
    lw: bool,
    rw: bool,
}

impl Absorb {
    /// `t` is obtainable from `s` by (c), and (lw), (rw) when absorbed.
    fn seq_reaches(self, s: &IxSeq, t: &IxSeq) -> bool {
        if s.succ() != t.succ() && !(self.rw && s.succ() == 0) {
            return false;
        }
        s.ant().iter().zip(t.ant()).all(|(&x, &y)| {
            if self.lw {
                x == 0 || y > 0
            } else {
                (x > 0) == (y > 0) && y <= x
            }
        })
    }

    /// `a` is obtainable from `p`.
    fn reaches(self, p: &IxHyper, a: &IxHyper) -> bool {
        p.distinct()
            .iter()
            .all(|(s, _)| a.distinct().iter().any(|(t, _)| self.seq_reaches(s, t)))
    }

    fn options(self, fixed: &[u16], vars: &[(usize, u16)], target: &[u16]) -> Option<Vec<Vec<Vec<u16>>>> {
        if !self.lw {
            return component_options(fixed, vars, target);
        }
        let mut per_formula = Vec::with_capacity(target.len());
        for (f, &gamma) in target.iter().enumerate() {
            if gamma == 0 && fixed[f] > 0 {
                return None;
            }
            per_formula.push(vec![vec![gamma; vars.len()]]);
        }
        Some(per_formula)
    }
}

/// Per formula of one conclusion component, the admissible values of its
/// multiset-variables.
fn component_options(fixed: &[u16], vars: &[(usize, u16)], target: &[u16]) -> Option<Vec<Vec<Vec<u16>>>> {
    let mut per_formula = Vec::with_capacity(target.len());
    for (f, &gamma) in target.iter().enumerate() {
        if gamma == 0 {
            if fixed[f] > 0 {
                return None;
            }
            per_formula.push(vec![vec![0u16; vars.len()]]);
            continue;
        }
        let mut opts = Vec::new();
        let mut x = vec![0u16; vars.len()];
        loop {
            let total: u32 = u32::from(fixed[f]) + vars.iter().zip(&x).map(|(&(_, m), &v)| u32::from(m) * u32::from(v)).sum::<u32>();
            if total >= u32::from(gamma) {
                opts.push(x.clone());
            }
            let mut k = 0;
            while k < x.len() {
                x[k] += 1;
                if x[k] <= gamma {
                    break;
                }
                x[k] = 0;
                k += 1;
            }
            if k == x.len() {
                break;
            }
        }
        if opts.is_empty() {
            return None;
        }
        per_formula.push(opts);
    }
    Some(per_formula)
}

/// Matches the active conclusion components of one ground rule against the
/// components of a goal.
struct Matcher<'a> {
    absorb: Absorb,
    gr: &'a GroundRule,
    comps: &'a [(IxSeq, u32)],
    ctx: &'a IxHyper,
    d: usize,
}

impl Matcher<'_> {
    fn rec(&self, i: usize, targets: &mut Vec<usize>, bind: &mut Vec<Option<u16>>, out: &mut Vec<GroundAssign>) {
        let gr = self.gr;
        let comps = self.comps;
        if i == targets.len() {
            if !gr.conclusion.has_h {
                let mut used = vec![false; comps.len()];
                for &t in targets.iter() {
                    used[t] = true;
                }
                if used.iter().any(|u| !u) {
                    return;
                }
            }
            let mut options: Vec<Vec<Vec<Vec<u16>>>> = Vec::new();
            for (c, &t) in gr.conclusion.comps.iter().zip(targets.iter()) {
                match self.absorb.options(&c.fixed, &c.vars, comps[t].0.ant()) {
                    Some(o) => options.push(o),
                    None => return,
                }
            }
            let succ: Vec<u16> = bind.iter().map(|b| b.unwrap_or(0)).collect();
            let mut ms_all: Vec<Vec<Vec<u16>>> = vec![vec![vec![0u16; self.d]; gr.ms_vars.len()]];
            for (c, per_f) in gr.conclusion.comps.iter().zip(&options) {
                for (f, opts) in per_f.iter().enumerate() {
                    let mut next = Vec::with_capacity(ms_all.len() * opts.len());
                    for base in &ms_all {
                        for o in opts {
                            let mut ms = base.clone();
                            for (&(v, _), &x) in c.vars.iter().zip(o) {
                                ms[v][f] = x;
                            }
                            next.push(ms);
                        }
                    }
                    ms_all = next;
                }
            }
            for ms in ms_all {
                out.push(GroundAssign {
                    h: self.ctx.clone(),
                    ms,
                    succ: succ.clone(),
                });
            }
            return;
        }
        let c = &gr.conclusion.comps[i];
        for (t, (s, _)) in comps.iter().enumerate() {
            let mut bound_here = None;
            match c.succ {
                GSucc::Empty if s.succ() != 0 && !self.absorb.rw => continue,
                GSucc::Fixed(code) if s.succ() != code => continue,
                GSucc::Var(v) => match bind[v] {
                    Some(b) if b != s.succ() => continue,
                    Some(_) => {}
                    None => bound_here = Some(v),
                },
                _ => {}
            }
            if let Some(v) = bound_here {
                bind[v] = Some(s.succ());
            }
            targets[i] = t;
            self.rec(i + 1, targets, bind, out);
            if let Some(v) = bound_here {
                bind[v] = None;
            }
        }
    }
}

impl Search<'_> {
    fn size(&self, h: &IxHyper) -> usize {
        h.symbol_size(self.enc.sizes())
    }

    fn expand(&mut self, g: &IxHyper) -> Vec<Alt> {
        let d = self.enc.dim();
        let mut out: Vec<Alt> = Vec::new();
        let mut seen: BTreeSet<Vec<IxHyper>> = BTreeSet::new();
        for (gi, gr) in self.ground.iter().enumerate() {
            if gr.weak && gr.premises.is_empty() {
                continue;
            }
            let m = gr.conclusion.comps.len();
            if !gr.conclusion.has_h && m != g.num_components() {
                continue;
            }
            // targets of the active conclusion components
            let mut targets = vec![0usize; m];
            let mut bind: Vec<Option<u16>> = vec![None; gr.succ_vars.len()];
            let mut assigns: Vec<GroundAssign> = Vec::new();
            let ctx = if !gr.conclusion.has_h || self.local {
                IxHyper::empty()
            } else {
                g.clone()
            };
            let matcher = Matcher {
                absorb: self.absorb,
                gr,
                comps: g.distinct(),
                ctx: &ctx,
                d,
            };
            matcher.rec(0, &mut targets, &mut bind, &mut assigns);
            for a in assigns {
                let premises = gr.premises_of(&a);
                let mut key = premises.clone();
                key.sort();
                if !seen.insert(key) {
                    continue;
                }
                out.push(Alt {
                    ground: gi,
                    assign: a,
                    premises,
                });
            }
        }
        out
    }

    fn pruned_by(&self, p: &IxHyper) -> Option<usize> {
        self.path.iter().position(|a| self.absorb.reaches(p, a))
    }

    fn prove(&mut self, g: &IxHyper) -> Result<Outcome, Aborted> {
        if self.proven.contains_key(g) {
            self.stats.proven_cache_hits += 1;
            return Ok(Outcome::Proven);
        }
        if let Some(entries) = self.failed.get(g) {
            for deps in entries {
                let depths: Option<BTreeSet<usize>> =
                    deps.iter().map(|h| self.path.iter().position(|a| a == h)).collect();
                if let Some(depths) = depths {
                    self.stats.failure_cache_hits += 1;
                    return Ok(Outcome::Failed(depths));
                }
            }
        }
        if self.cfg.deadline.is_some_and(|t| Instant::now() > t) {
            return Err(Aborted);
        }
        if self.cfg.depth_cap.is_some_and(|c| self.path.len() >= c) {
            self.stats.depth_cap_hits += 1;
            return Ok(Outcome::Failed(BTreeSet::new()));
        }
        self.path.push(g.clone());
        let depth = self.path.len() - 1;
        self.stats.nodes_expanded += 1;
        self.stats.max_branch_length = self.stats.max_branch_length.max(self.path.len());
        self.stats.max_goal_size = self.stats.max_goal_size.max(self.size(g));
        if self.path.len() > self.longest.len() {
            self.longest = self.path.clone();
        }
        let (alts, mut deps) = self.alternatives(g);
        if alts.is_empty() && self.dead_ends.len() < self.cfg.max_sampled_paths {
            self.dead_ends.push(self.path.clone());
        }
        for alt in alts {
            let mut ok = true;
            for p in &alt.premises {
                match self.prove(p) {
                    Ok(Outcome::Proven) => {}
                    Ok(Outcome::Failed(ds)) => {
                        deps.extend(ds);
                        ok = false;
                        break;
                    }
                    Err(e) => {
                        self.path.pop();
                        return Err(e);
                    }
                }
            }
            if ok {
                self.path.pop();
                self.proven.insert(g.clone(), alt);
                return Ok(Outcome::Proven);
            }
        }
        self.path.pop();
        let outer: BTreeSet<usize> = deps.into_iter().filter(|&k| k < depth).collect();
        if self.cfg.failure_cache && self.cfg.depth_cap.is_none() {
            let values: Vec<IxHyper> = outer.iter().map(|&k| self.path[k].clone()).collect();
            self.failed.entry(g.clone()).or_default().push(values);
        }
        Ok(Outcome::Failed(outer))
    }

    /// Sorted alternatives of `g`, the last goal on the path, that survive
    /// pruning, with the depths of the goals that pruned the others.
    fn alternatives(&mut self, g: &IxHyper) -> (Vec<Alt>, BTreeSet<usize>) {
        let bound = self.growth.apply(self.size(g) as u64);
        let mut deps: BTreeSet<usize> = BTreeSet::new();
        let mut alts: Vec<(usize, usize, String, Alt)> = Vec::new();
        for alt in self.expand(g) {
            self.stats.alternatives += 1;
            for p in &alt.premises {
                if self.size(p) as u64 > bound {
                    self.stats.premise_size_violations += 1;
                    debug_assert!(false, "premise larger than the growth bound");
                }
            }
            if self.cfg.pruning {
                if let Some(k) = alt.premises.iter().find_map(|p| self.pruned_by(p)) {
                    self.stats.prunings += 1;
                    deps.insert(k);
                    continue;
                }
            }
            let total: usize = alt.premises.iter().map(|p| self.size(p)).sum();
            let print: String = alt
                .premises
                .iter()
                .map(|p| self.enc.decode(p).to_string())
                .collect::<Vec<_>>()
                .join(" ; ");
            alts.push((alt.premises.len(), total, print, alt));
        }
        alts.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        (alts.into_iter().map(|(_, _, _, a)| a).collect(), deps)
    }

    /// Root-to-leaf goal sequences of the proof of `g`.
    fn proof_paths(&self, g: &IxHyper, prefix: &mut Vec<IxHyper>, out: &mut Vec<Vec<IxHyper>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        prefix.push(g.clone());
        let alt = &self.proven[g];
        if alt.premises.is_empty() {
            out.push(prefix.clone());
        }
        for p in &alt.premises {
            self.proof_paths(p, prefix, out, limit);
        }
        prefix.pop();
    }
}

fn rule_name(calc: &Calculus, schema: crate::calculus::RuleSchema) -> String {
    calc.rules()
        .iter()
        .find(|r| r.same_shape(&schema))
        .map(|r| r.name.clone())
        .unwrap_or(schema.name)
}

/// Replaces the component `s` of `cur` by `next`, recording the inference
/// below `t`.
fn unary_step(t: &mut DerivationTree, cur: &mut Hypersequent, s: &mut Sequent, next: Sequent, rule: &str) {
    cur.remove_one(s);
    cur.add(next.clone(), 1);
    let above = std::mem::replace(t, DerivationTree::new(cur.clone(), rule, Vec::new()));
    t.children.push(above);
    *s = next;
}

struct StructuralNames {
    c: String,
    ec: String,
    ew: String,
    lw: String,
    rw: String,
}

struct Extractor<'a> {
    ground: &'a [GroundRule],
    enc: &'a Encoder,
    proven: &'a HashMap<IxHyper, Alt>,
    absorb: Absorb,
    names: StructuralNames,
    memo: HashMap<IxHyper, DerivationTree>,
}

impl Extractor<'_> {
    fn tree(&mut self, g: &IxHyper) -> DerivationTree {
        if let Some(t) = self.memo.get(g) {
            return t.clone();
        }
        let alt = &self.proven[g];
        let gr = &self.ground[alt.ground];
        let children: Vec<DerivationTree> = alt.premises.iter().map(|p| self.tree(p)).collect();
        let digest = gr.to_instantiation(&alt.assign, self.enc).digest();
        let conclusion = gr.conclusion_of(&alt.assign);
        let mut t = DerivationTree::new(self.enc.decode(&conclusion), gr.name.clone(), children).with_digest(digest);
        // bring each active component down to its goal component, then
        // merge it with the copy kept in the hypersequent-variable
        let mut cur = self.enc.decode(&conclusion);
        let goal = self.enc.decode(g);
        for c in &gr.conclusion.comps {
            let dense = c.instantiate(&alt.assign.ms, &alt.assign.succ);
            let target = g
                .distinct()
                .iter()
                .map(|(t, _)| t)
                .find(|t| self.absorb.seq_reaches(&dense, t))
                .expect("active components reach the goal");
            let target = self.enc.decode_sequent(target);
            let mut s = self.enc.decode_sequent(&dense);
            loop {
                let over = s.ant.iter().find(|(f, n)| *n > target.ant.count(f)).map(|(f, _)| f.clone());
                let Some(f) = over else { break };
                let mut ant = Multiset::new();
                for (h, n) in s.ant.iter() {
                    ant.add(h.clone(), if *h == f { n - 1 } else { n });
                }
                let next_s = Sequent::new(ant, s.succ.clone());
                unary_step(&mut t, &mut cur, &mut s, next_s, &self.names.c);
            }
            if s.ant != target.ant {
                let next_s = Sequent::new(target.ant.clone(), s.succ.clone());
                unary_step(&mut t, &mut cur, &mut s, next_s, &self.names.lw);
            }
            if s.succ != target.succ {
                unary_step(&mut t, &mut cur, &mut s, target.clone(), &self.names.rw);
            }
            if alt.assign.h.num_components() > 0 {
                let mut next = cur.clone();
                next.remove_one(&s);
                t = DerivationTree::new(next.clone(), self.names.ec.clone(), vec![t]);
                cur = next;
            }
        }
        // an empty context leaves the rest of the goal to (EW)
        let missing: Vec<(Sequent, u32)> = goal
            .distinct()
            .map(|(s, n)| (s.clone(), n.saturating_sub(cur.multiplicity(s))))
            .collect();
        for (s, n) in missing {
            for _ in 0..n {
                let mut next = cur.clone();
                next.add(s.clone(), 1);
                t = DerivationTree::new(next.clone(), self.names.ew.clone(), vec![t]);
                cur = next;
            }
        }
        debug_assert_eq!(cur, goal);
        self.memo.insert(g.clone(), t.clone());
        t
    }
}

fn sampled(goals: &[IxHyper], enc: &Encoder, growth: ControlFunction) -> SampledPath {
    let d = enc.dim();
    let start = goals.first().map_or(0, |g| g.symbol_size(enc.sizes()) as u64);
    let mut seq = ControlledSequence::new(d, d + 1, growth, start);
    for g in goals {
        seq.push(g.sharp(d)).expect("dimensions");
    }
    let violation = verify_controlled_bad(&seq, VectorOrder::Minoring).expect("dimensions");
    SampledPath {
        goals: goals.iter().map(|g| enc.decode(g)).collect(),
        sequence: seq,
        violation,
    }
}

fn prepare(calc: &Calculus, enc: &Encoder) -> Result<(Absorb, bool, Vec<GroundRule>), BackwardError> {
    if !calc.has_c() {
        return Err(BackwardError::MissingC);
    }
    let absorb = Absorb {
        lw: calc.has_shape(&builtin::lw()),
        rw: calc.has_shape(&builtin::rw()),
    };
    let skip = [builtin::c(), builtin::ec(), builtin::ew(), builtin::lw(), builtin::rw()];
    let ground: Vec<GroundRule> = ground_calculus(calc, enc)
        .into_iter()
        .filter(|g| !skip.iter().any(|s| s.same_shape(&calc.rules()[g.schema])))
        .collect();
    let single = |h: &GroundHyper| h.has_h && h.comps.len() <= 1;
    let local = ground.iter().all(|g| single(&g.conclusion) && g.premises.iter().all(single));
    Ok((absorb, local, ground))
}

/// A rule application to a goal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    pub rule: String,
    pub premises: Vec<Hypersequent>,
}

/// The alternatives of `goal` that survive pruning against `ancestors`
/// (root first) and the goal itself, in search order.
pub fn expand_node(
    goal: &Hypersequent,
    ancestors: &[Hypersequent],
    calc: &Calculus,
) -> Result<Vec<Alternative>, BackwardError> {
    let enc = Encoder::new(OmegaSet::closure_of(
        goal.formulas().chain(ancestors.iter().flat_map(|a| a.formulas())),
    ));
    let (absorb, local, ground) = prepare(calc, &enc)?;
    let cfg = BackwardConfig::default();
    let mut path: Vec<IxHyper> = ancestors.iter().map(|a| enc.encode(a).expect("in closure")).collect();
    let g = enc.encode(goal).expect("in closure");
    path.push(g.clone());
    let mut search = Search {
        ground: &ground,
        enc: &enc,
        absorb,
        local,
        growth: calc.premise_growth_bound(),
        cfg: &cfg,
        path,
        proven: HashMap::new(),
        failed: HashMap::new(),
        stats: BackwardStats::default(),
        longest: Vec::new(),
        dead_ends: Vec::new(),
    };
    let (alts, _) = search.alternatives(&g);
    Ok(alts
        .into_iter()
        .map(|a| Alternative {
            rule: ground[a.ground].name.clone(),
            premises: a.premises.iter().map(|p| enc.decode(p)).collect(),
        })
        .collect())
}

/// Decides `h` by irredundant backward search over the subformulas of `h`.
pub fn decide_backward(h: &Hypersequent, calc: &Calculus, cfg: &BackwardConfig) -> Result<BackwardOutcome, BackwardError> {
    let enc = Encoder::new(OmegaSet::closure_of(h.formulas()));
    let (absorb, local, ground) = prepare(calc, &enc)?;
    let growth = calc.premise_growth_bound();
    let root = enc.encode(h).expect("closure contains every formula of h");
    let mut search = Search {
        ground: &ground,
        enc: &enc,
        absorb,
        local,
        growth,
        cfg,
        path: Vec::new(),
        proven: HashMap::new(),
        failed: HashMap::new(),
        stats: BackwardStats::default(),
        longest: Vec::new(),
        dead_ends: Vec::new(),
    };
    // deep AND-paths need a large stack
    let result = std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || {
                let r = search.prove(&root);
                (r, search)
            })
            .expect("search thread")
            .join()
            .expect("search thread panicked")
    });
    let (r, search) = result;
    let verdict = match r {
        Ok(Outcome::Proven) => Verdict::Derivable,
        Ok(Outcome::Failed(_)) if search.stats.depth_cap_hits > 0 => Verdict::Indeterminate,
        Ok(Outcome::Failed(_)) => Verdict::NotDerivable,
        Err(Aborted) => Verdict::Indeterminate,
    };
    let mut path_goals: Vec<Vec<IxHyper>> = Vec::new();
    if search.longest.len() > 1 {
        path_goals.push(search.longest.clone());
    }
    let derivation = if verdict == Verdict::Derivable {
        search.proof_paths(&root, &mut Vec::new(), &mut path_goals, cfg.max_sampled_paths);
        let mut ex = Extractor {
            ground: &ground,
            enc: &enc,
            proven: &search.proven,
            absorb,
            names: StructuralNames {
                c: rule_name(calc, builtin::c()),
                ec: rule_name(calc, builtin::ec()),
                ew: rule_name(calc, builtin::ew()),
                lw: rule_name(calc, builtin::lw()),
                rw: rule_name(calc, builtin::rw()),
            },
            memo: HashMap::new(),
        };
        Some(ex.tree(&root))
    } else {
        for p in &search.dead_ends {
            if path_goals.len() >= cfg.max_sampled_paths {
                break;
            }
            path_goals.push(p.clone());
        }
        None
    };
    let paths = path_goals.iter().map(|p| sampled(p, &enc, growth)).collect();
    Ok(BackwardOutcome {
        verdict,
        derivation,
        stats: search.stats,
        paths,
    })
}
