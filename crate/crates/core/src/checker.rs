//! Derivation checking against a calculus.

use std::fmt;

use serde::Serialize;

use crate::calculus::{instantiate, match_conclusion, Calculus};
use crate::derivation::DerivationTree;
use crate::formula::OmegaSet;
use crate::hyperseq::Hypersequent;

/// The first node, in pre-order, that is not a rule instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub conclusion: Hypersequent,
    pub rule: String,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(
            f,
            "node /{} `{} [{}]`: {}",
            path.join("/"),
            self.conclusion,
            self.rule,
            self.reason
        )
    }
}

/// Checks one inference: `conclusion` from `premises` by the schema named
/// `rule`.
pub fn check_inference(
    calc: &Calculus,
    rule: &str,
    conclusion: &Hypersequent,
    premises: &[Hypersequent],
) -> Result<(), String> {
    let r = calc.rule(rule).ok_or_else(|| format!("no rule named `{rule}` in the calculus"))?;
    if r.premises.len() != premises.len() {
        return Err(format!(
            "`{rule}` has {} premise(s), the node has {} child(ren)",
            r.premises.len(),
            premises.len()
        ));
    }
    let omega = OmegaSet::closure_of(conclusion.formulas().chain(premises.iter().flat_map(|p| p.formulas())));
    let mut want: Vec<&Hypersequent> = premises.iter().collect();
    want.sort();
    for inst in match_conclusion(r, conclusion, &omega) {
        if let Ok((ps, _)) = instantiate(r, &inst) {
            let mut got: Vec<&Hypersequent> = ps.iter().collect();
            got.sort();
            if got == want {
                return Ok(());
            }
        }
    }
    Err(if premises.is_empty() {
        format!("not an instance of `{rule}`")
    } else {
        format!("no instance of `{rule}` has this conclusion and these premises")
    })
}

/// Accepts iff every node with its children is an instance of the named
/// schema of `calc`.
pub fn check_derivation(t: &DerivationTree, calc: &Calculus) -> Result<(), Rejection> {
    for (path, node) in t.nodes() {
        let premises: Vec<Hypersequent> = node.children.iter().map(|c| c.conclusion.clone()).collect();
        if let Err(reason) = check_inference(calc, &node.rule, &node.conclusion, &premises) {
            return Err(Rejection {
                path,
                conclusion: node.conclusion.clone(),
                rule: node.rule.clone(),
                reason,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::builtin_calculus;
    use crate::hyperseq::parse_hypersequent;

    fn h(s: &str) -> Hypersequent {
        parse_hypersequent(s).unwrap()
    }

    fn leaf(s: &str, r: &str) -> DerivationTree {
        DerivationTree::new(h(s), r, vec![])
    }

    #[test]
    fn single_initial_node() {
        let c = builtin_calculus("hfle").unwrap();
        assert!(check_derivation(&leaf("p => p", "id"), &c).is_ok());
        assert!(check_derivation(&leaf("q => p | p => p", "id"), &c).is_ok());
        let e = check_derivation(&leaf("p => q", "id"), &c).unwrap_err();
        assert!(e.path.is_empty());
    }

    #[test]
    fn contraction_tree() {
        let c = builtin_calculus("hflec").unwrap();
        let t = DerivationTree::new(
            h("=> p -> p * p"),
            "->R",
            vec![DerivationTree::new(
                h("p => p * p"),
                "c",
                vec![DerivationTree::new(
                    h("p, p => p * p"),
                    "*R",
                    vec![leaf("p => p", "id"), leaf("p => p", "id")],
                )],
            )],
        );
        assert!(check_derivation(&t, &c).is_ok());
        let c2 = builtin_calculus("hfle").unwrap();
        let e = check_derivation(&t, &c2).unwrap_err();
        assert_eq!(e.path, vec![0]);
    }

    #[test]
    fn wrong_premise_rejected_at_node() {
        let c = builtin_calculus("hfle").unwrap();
        let t = DerivationTree::new(
            h("=> p /\\ q | p => p"),
            "/\\R",
            vec![leaf("=> p | p => p", "id"), leaf("=> q | p => q", "id")],
        );
        let e = check_derivation(&t, &c).unwrap_err();
        assert!(e.path.is_empty());
        let t = DerivationTree::new(
            h("=> p /\\ q | p => p"),
            "/\\R",
            vec![leaf("=> p | p => p", "id"), leaf("=> q | p => p", "0L")],
        );
        let e = check_derivation(&t, &c).unwrap_err();
        assert_eq!(e.path, vec![1]);
    }
}
