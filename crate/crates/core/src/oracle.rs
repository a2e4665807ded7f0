//! Bounded brute-force closure, for cross-checking the engines on tiny
//! inputs. Shares nothing with the saturation code beyond rule matching.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::calculus::{instantiate, match_conclusion, Calculus};
use crate::formula::{Formula, OmegaSet};
use crate::hyperseq::{Hypersequent, Multiset, Sequent};

/// Largest candidate set `brute_closure` agrees to scan.
pub const UNIVERSE_LIMIT: usize = 250_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("resource guard: {what} reached {count} (limit {limit}); lower the caps")]
    ResourceGuard {
        what: &'static str,
        count: usize,
        limit: usize,
    },
}

/// Formulas of the universe: `Ω` and the four constants.
pub fn closure_alphabet(omega: &OmegaSet) -> OmegaSet {
    let consts = [Formula::one(), Formula::zero(), Formula::top(), Formula::bot()];
    omega.extended(consts.iter())
}

/// Sequents over `fs` of symbol size at most `cap`.
pub fn sequents_up_to(fs: &[Formula], cap: usize, limit: usize) -> Result<Vec<Sequent>, OracleError> {
    let mut out = Vec::new();
    let succs: Vec<Option<Formula>> = std::iter::once(None).chain(fs.iter().cloned().map(Some)).collect();
    fn ants(
        fs: &[Formula],
        i: usize,
        cur: &Multiset,
        budget: usize,
        limit: usize,
        out: &mut Vec<Multiset>,
    ) -> Result<(), OracleError> {
        if i == fs.len() {
            if out.len() >= limit {
                return Err(OracleError::ResourceGuard {
                    what: "candidate sequents",
                    count: out.len(),
                    limit,
                });
            }
            out.push(cur.clone());
            return Ok(());
        }
        ants(fs, i + 1, cur, budget, limit, out)?;
        let mut next = cur.clone();
        loop {
            next.add(fs[i].clone(), 1);
            if next.symbol_size() > budget {
                return Ok(());
            }
            ants(fs, i + 1, &next, budget, limit, out)?;
        }
    }
    for s in succs {
        let base = 1 + s.as_ref().map_or(0, Formula::size);
        if base > cap {
            continue;
        }
        let mut all = Vec::new();
        ants(fs, 0, &Multiset::new(), cap - base, limit.saturating_sub(out.len()), &mut all)?;
        out.extend(all.into_iter().map(|a| Sequent::new(a, s.clone())));
    }
    out.sort();
    Ok(out)
}

/// Non-empty hypersequents over `fs` of symbol size at most `cap`.
pub fn hypersequents_up_to(fs: &[Formula], cap: usize, limit: usize) -> Result<Vec<Hypersequent>, OracleError> {
    let seqs = sequents_up_to(fs, cap, limit)?;
    let mut out = Vec::new();
    // components are added in index order, so each multiset is built once
    fn rec(
        seqs: &[Sequent],
        start: usize,
        cur: &mut Hypersequent,
        cap: usize,
        limit: usize,
        out: &mut Vec<Hypersequent>,
    ) -> Result<(), OracleError> {
        if !cur.is_empty() {
            if out.len() >= limit {
                return Err(OracleError::ResourceGuard {
                    what: "candidate hypersequents",
                    count: out.len(),
                    limit,
                });
            }
            out.push(cur.clone());
        }
        for (j, s) in seqs.iter().enumerate().skip(start) {
            cur.add(s.clone(), 1);
            if cur.symbol_size() <= cap {
                rec(seqs, j, cur, cap, limit, out)?;
            }
            cur.remove_one(s);
        }
        Ok(())
    }
    rec(&seqs, 0, &mut Hypersequent::empty(), cap, limit, &mut out)?;
    Ok(out)
}

/// Every hypersequent over `Ω` and the constants of symbol size at most
/// `size_cap` with a derivation of height at most `depth_cap` all of whose
/// nodes stay within the size cap.
pub fn brute_closure(
    omega: &OmegaSet,
    calc: &Calculus,
    size_cap: usize,
    depth_cap: usize,
) -> Result<BTreeSet<Hypersequent>, OracleError> {
    let alphabet = closure_alphabet(omega);
    let universe = hypersequents_up_to(alphabet.formulas(), size_cap, UNIVERSE_LIMIT)?;
    let mut derived: BTreeSet<Hypersequent> = BTreeSet::new();
    for _ in 0..depth_cap {
        let mut next = derived.clone();
        for h in &universe {
            if derived.contains(h) {
                continue;
            }
            let found = calc.rules().iter().any(|r| {
                match_conclusion(r, h, &alphabet).iter().any(|inst| {
                    instantiate(r, inst).is_ok_and(|(ps, _)| ps.iter().all(|p| derived.contains(p)))
                })
            });
            if found {
                next.insert(h.clone());
            }
        }
        if next.len() == derived.len() {
            break;
        }
        derived = next;
    }
    Ok(derived)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::builtin_calculus;
    use crate::formula::parse_formula;
    use crate::hyperseq::parse_hypersequent;

    fn omega(fs: &[&str]) -> OmegaSet {
        let fs: Vec<Formula> = fs.iter().map(|s| parse_formula(s).unwrap()).collect();
        OmegaSet::closure_of(fs.iter())
    }

    #[test]
    fn sequent_enumeration_counts() {
        let fs = [parse_formula("p").unwrap()];
        // `=>`, `p =>`, `=> p`, `p => p`, `p, p =>`
        let s = sequents_up_to(&fs, 4, 100).unwrap();
        assert_eq!(s.len(), 5);
        assert!(s.iter().all(|x| x.symbol_size() <= 4));
    }

    #[test]
    fn small_closure() {
        let c = builtin_calculus("hflelw").unwrap();
        let cl = brute_closure(&omega(&["p"]), &c, 5, 3).unwrap();
        for m in ["p => p", "=> top", "p, p => p", "bot => p"] {
            assert!(cl.contains(&parse_hypersequent(m).unwrap()), "{m}");
        }
        assert!(!cl.contains(&parse_hypersequent("=> p").unwrap()));
    }

    #[test]
    fn guard_fires() {
        let c = builtin_calculus("hfle").unwrap();
        let e = brute_closure(&omega(&["(p -> q) * (q -> p)"]), &c, 40, 2).unwrap_err();
        assert!(matches!(e, OracleError::ResourceGuard { .. }));
    }
}
