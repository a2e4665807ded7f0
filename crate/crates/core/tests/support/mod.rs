//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use hyperprover::calculus::{instantiate, match_conclusion, Calculus};
use hyperprover::forward::Bounds;
use hyperprover::formula::{Formula, OmegaSet};
use hyperprover::hyperseq::{weak_reach_unchecked, Encoder, Hypersequent, Multiset, Sequent};
use hyperprover::oracle::hypersequents_up_to;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A formula over `p`, `q` and the constants with at most `depth` nested
/// connectives.
pub fn random_formula(r: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.25) {
        return match r.gen_range(0..12) {
            0..=4 => Formula::var("p"),
            5..=8 => Formula::var("q"),
            9 => Formula::one(),
            10 => Formula::zero(),
            _ => [Formula::top(), Formula::bot()][r.gen_range(0..2)].clone(),
        };
    }
    let a = random_formula(r, depth - 1);
    let b = random_formula(r, depth - 1);
    match r.gen_range(0..4) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        2 => Formula::fuse(a, b),
        _ => Formula::imp(a, b),
    }
}

pub fn theorem_goal(f: Formula) -> Hypersequent {
    Hypersequent::from_components([Sequent::new(Multiset::new(), Some(f))])
}

/// The fixed corpus of goals `=> F`.
pub fn agreement_corpus() -> Vec<Hypersequent> {
    let mut r = rng(0x5eed_0004);
    (0..200).map(|_| theorem_goal(random_formula(&mut r, 3))).collect()
}

/// A random hypersequent over `omega` with at most `comps` distinct
/// components, component multiplicity at most `mult` and antecedent
/// multiplicities at most `ant`.
pub fn random_hyper(r: &mut ChaCha8Rng, omega: &OmegaSet, comps: usize, mult: u32, ant: u32) -> Hypersequent {
    let mut h = Hypersequent::empty();
    let n = r.gen_range(1..=comps);
    for _ in 0..n {
        let s = random_sequent(r, omega, ant);
        h.add(s, r.gen_range(1..=mult));
    }
    h
}

pub fn random_sequent(r: &mut ChaCha8Rng, omega: &OmegaSet, ant: u32) -> Sequent {
    let mut m = Multiset::new();
    for f in omega.formulas() {
        m.add(f.clone(), r.gen_range(0..=ant));
    }
    let succ = if r.gen_bool(0.3) {
        None
    } else {
        Some(omega.formulas()[r.gen_range(0..omega.len())].clone())
    };
    Sequent::new(m, succ)
}

/// Every sequent over `omega` with antecedent multiplicities at most `ant`.
pub fn all_sequents(omega: &OmegaSet, ant: u32) -> Vec<Sequent> {
    let mut ants = vec![Multiset::new()];
    for f in omega.formulas() {
        ants = ants
            .iter()
            .flat_map(|a| {
                (0..=ant).map(move |n| {
                    let mut b = a.clone();
                    b.add(f.clone(), n);
                    b
                })
            })
            .collect();
    }
    let succs = std::iter::once(None).chain(omega.formulas().iter().cloned().map(Some));
    succs
        .flat_map(|s| ants.iter().map(move |a| Sequent::new(a.clone(), s.clone())))
        .collect()
}

/// Every non-empty hypersequent of at most `comps` components drawn from
/// `all_sequents(omega, ant)`.
pub fn all_hypersequents(omega: &OmegaSet, comps: usize, ant: u32) -> Vec<Hypersequent> {
    let seqs = all_sequents(omega, ant);
    let mut out = Vec::new();
    let mut layer = vec![(0usize, Hypersequent::empty())];
    for _ in 0..comps {
        let mut next = Vec::new();
        for (start, h) in &layer {
            for (j, s) in seqs.iter().enumerate().skip(*start) {
                let mut g = h.clone();
                g.add(s.clone(), 1);
                out.push(g.clone());
                next.push((j, g));
            }
        }
        layer = next;
    }
    out
}

/// `h` with a few random (lw), (EW) and copy steps applied.
pub fn random_weakening(r: &mut ChaCha8Rng, h: &Hypersequent, omega: &OmegaSet, ant: u32) -> Hypersequent {
    let mut out = Hypersequent::empty();
    for s in h.components() {
        let mut a = s.ant.clone();
        for f in omega.formulas() {
            let room = ant.saturating_sub(a.count(f));
            if room > 0 && r.gen_bool(0.4) {
                a.add(f.clone(), r.gen_range(1..=room));
            }
        }
        out.add(Sequent::new(a, s.succ.clone()), 1);
    }
    if r.gen_bool(0.3) {
        out.add(random_sequent(r, omega, ant), 1);
    }
    out
}

/// Components obtainable from `s` by adding one formula of `omega`.
fn lw_steps(s: &Sequent, omega: &OmegaSet) -> Vec<Sequent> {
    omega
        .formulas()
        .iter()
        .map(|f| {
            let mut a = s.ant.clone();
            a.add(f.clone(), 1);
            Sequent::new(a, s.succ.clone())
        })
        .collect()
}

/// Breadth-first search for `h` from `g` by single (lw), (EC) and (EW)
/// steps. Components that weaken into no component of `h` can never leave
/// the hypersequent, so states holding one are dropped.
pub fn reachable_by_rules(g: &Hypersequent, h: &Hypersequent, omega: &OmegaSet) -> bool {
    let useful = |s: &Sequent| h.components().any(|t| s.weakens_to(t));
    if !g.components().all(useful) {
        return false;
    }
    // every sequent that weakens into some component of `h`
    let mut pool: BTreeSet<Sequent> = BTreeSet::new();
    let mut frontier: Vec<Sequent> = h
        .components()
        .map(|t| Sequent::new(Multiset::new(), t.succ.clone()))
        .collect();
    while let Some(s) = frontier.pop() {
        if useful(&s) && pool.insert(s.clone()) {
            frontier.extend(lw_steps(&s, omega));
        }
    }
    let max_comps = g.num_components() + h.num_components() + 1;
    let mut seen: BTreeSet<Hypersequent> = BTreeSet::new();
    let mut queue = VecDeque::from([g.clone()]);
    seen.insert(g.clone());
    while let Some(x) = queue.pop_front() {
        if &x == h {
            return true;
        }
        let mut next = Vec::new();
        for (s, n) in x.distinct() {
            for t in lw_steps(s, omega) {
                if pool.contains(&t) {
                    let mut y = x.clone();
                    y.remove_one(s);
                    y.add(t, 1);
                    next.push(y);
                }
            }
            if n >= 2 {
                let mut y = x.clone();
                y.remove_one(s);
                next.push(y);
            }
        }
        if x.num_components() < max_comps {
            for t in &pool {
                let mut y = x.clone();
                y.add(t.clone(), 1);
                next.push(y);
            }
        }
        for y in next {
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    false
}

/// Mutual reachability.
pub fn equivalent(a: &Hypersequent, b: &Hypersequent) -> bool {
    weak_reach_unchecked(a, b) && weak_reach_unchecked(b, a)
}

/// The members of `WI(S)` over `omega` up to `cap` symbols, read off the
/// definition: a conclusion of some rule instance whose premises are slim,
/// multiplicity-capped and reachable from members of `S`, itself thin and
/// not reachable from `S`. Only the minimal ones are returned.
pub fn brute_wi_minimal(s: &[Hypersequent], omega: &OmegaSet, calc: &Calculus, cap: usize) -> Vec<Hypersequent> {
    let enc = Encoder::new(omega.clone());
    let s_omega: Vec<&Hypersequent> = s.iter().filter(|h| h.is_over(omega)).collect();
    let s_max = s.iter().map(Hypersequent::symbol_size).max().unwrap_or(0);
    let bounds = Bounds::new(s_max, calc.schema_size_max(), omega.len());
    let from_s = |h: &Hypersequent| s_omega.iter().any(|g| weak_reach_unchecked(g, h));
    let universe = hypersequents_up_to(omega.formulas(), cap, 5_000_000).expect("cap small enough");
    let mut members: Vec<Hypersequent> = Vec::new();
    for h in universe {
        if from_s(&h) || !bounds.is_thin(&enc.encode(&h).expect("over omega")) {
            continue;
        }
        let hit = calc.rules().iter().any(|r| {
            match_conclusion(r, &h, omega).iter().any(|inst| {
                instantiate(r, inst).is_ok_and(|(ps, _)| {
                    ps.iter().all(|p| {
                        p.is_over(omega) && bounds.premise_ok(&enc.encode(p).expect("over omega")) && from_s(p)
                    })
                })
            })
        });
        if hit {
            members.push(h);
        }
    }
    members
        .iter()
        .filter(|m| !members.iter().any(|o| weak_reach_unchecked(o, m) && !weak_reach_unchecked(m, o)))
        .cloned()
        .collect()
}
