//! Evaluation on finite Łukasiewicz and Gödel chains.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num};

use crate::formula::{Connective, Constant, Formula, FormulaKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainKind {
    Lukasiewicz,
    Godel,
}

/// The chain `{0, 1/(n-1), .., 1}` with fusion a t-norm and implication its
/// residuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainModel<T> {
    pub kind: ChainKind,
    pub size: usize,
    _scalar: std::marker::PhantomData<T>,
}

pub type ExactChain = ChainModel<Rational64>;
pub type FloatChain = ChainModel<f64>;

#[derive(Debug, Clone, PartialEq)]
pub enum ChainVerdict<T> {
    ValidAtOne,
    Countermodel(BTreeMap<String, T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainEvaluation<T> {
    /// Least value over all assignments.
    pub value: T,
    pub verdict: ChainVerdict<T>,
}

fn max<T: PartialOrd>(a: T, b: T) -> T {
    if a >= b {
        a
    } else {
        b
    }
}

fn min<T: PartialOrd>(a: T, b: T) -> T {
    if a <= b {
        a
    } else {
        b
    }
}

impl<T> ChainModel<T>
where
    T: Num + PartialOrd + Copy + FromPrimitive,
{
    /// Panics when `size < 2`.
    pub fn new(kind: ChainKind, size: usize) -> Self {
        assert!(size >= 2, "a chain has at least two elements");
        ChainModel {
            kind,
            size,
            _scalar: std::marker::PhantomData,
        }
    }

    pub fn lukasiewicz(size: usize) -> Self {
        Self::new(ChainKind::Lukasiewicz, size)
    }

    pub fn godel(size: usize) -> Self {
        Self::new(ChainKind::Godel, size)
    }

    /// The element `i/(n-1)`.
    pub fn element(&self, i: usize) -> T {
        let num = T::from_usize(i).expect("small integer");
        let den = T::from_usize(self.size - 1).expect("small integer");
        num / den
    }

    pub fn carrier(&self) -> Vec<T> {
        (0..self.size).map(|i| self.element(i)).collect()
    }

    pub fn fusion(&self, x: T, y: T) -> T {
        match self.kind {
            ChainKind::Lukasiewicz => max(T::zero(), x + y - T::one()),
            ChainKind::Godel => min(x, y),
        }
    }

    pub fn residuum(&self, x: T, y: T) -> T {
        match self.kind {
            ChainKind::Lukasiewicz => min(T::one(), T::one() - x + y),
            ChainKind::Godel => {
                if x <= y {
                    T::one()
                } else {
                    y
                }
            }
        }
    }

    pub fn eval(&self, f: &Formula, env: &BTreeMap<String, T>) -> T {
        match f.kind() {
            FormulaKind::Var(v) => *env.get(v).expect("every variable is assigned"),
            FormulaKind::Const(c) => match c {
                Constant::One | Constant::Top => T::one(),
                Constant::Zero | Constant::Bot => T::zero(),
            },
            FormulaKind::Binary(op, a, b) => {
                let (x, y) = (self.eval(a, env), self.eval(b, env));
                match op {
                    Connective::And => min(x, y),
                    Connective::Or => max(x, y),
                    Connective::Fuse => self.fusion(x, y),
                    Connective::Imp => self.residuum(x, y),
                }
            }
        }
    }
}

/// Evaluates `f` under every assignment and reports the least value with
/// the first assignment attaining it.
pub fn eval_chain<T>(f: &Formula, m: &ChainModel<T>) -> ChainEvaluation<T>
where
    T: Num + PartialOrd + Copy + FromPrimitive,
{
    let vars: Vec<String> = f.variables().into_iter().collect();
    let carrier = m.carrier();
    let mut idx = vec![0usize; vars.len()];
    let mut best: Option<(T, BTreeMap<String, T>)> = None;
    loop {
        let env: BTreeMap<String, T> = vars.iter().cloned().zip(idx.iter().map(|&i| carrier[i])).collect();
        let v = m.eval(f, &env);
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, env));
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < carrier.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    let (value, env) = best.expect("at least one assignment");
    let verdict = if value == T::one() {
        ChainVerdict::ValidAtOne
    } else {
        ChainVerdict::Countermodel(env)
    };
    ChainEvaluation { value, verdict }
}

impl<T: fmt::Display> fmt::Display for ChainVerdict<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainVerdict::ValidAtOne => f.write_str("valid"),
            ChainVerdict::Countermodel(env) => {
                let parts: Vec<String> = env.iter().map(|(k, v)| format!("{k}={v}")).collect();
                write!(f, "countermodel {}", parts.join(" "))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    #[test]
    fn lukasiewicz_three_chain_contraction() {
        let m = ExactChain::lukasiewicz(3);
        let r = eval_chain(&parse_formula("p -> p * p").unwrap(), &m);
        assert_eq!(r.value, Rational64::new(1, 2));
        match r.verdict {
            ChainVerdict::Countermodel(env) => assert_eq!(env["p"], Rational64::new(1, 2)),
            _ => panic!("expected a countermodel"),
        }
    }

    #[test]
    fn godel_idempotent() {
        for n in 2..6 {
            let r = eval_chain(&parse_formula("p -> p * p").unwrap(), &ExactChain::godel(n));
            assert_eq!(r.verdict, ChainVerdict::ValidAtOne);
        }
    }

    #[test]
    fn residuation_on_carrier() {
        for m in [ExactChain::lukasiewicz(5), ExactChain::godel(5)] {
            let c = m.carrier();
            for &x in &c {
                for &y in &c {
                    let r = m.residuum(x, y);
                    let best = c.iter().copied().filter(|&z| m.fusion(x, z) <= y).fold(Rational64::from(0), max);
                    assert_eq!(r, best);
                }
            }
        }
    }

    #[test]
    fn float_chain() {
        let r = eval_chain(&parse_formula("(p -> q) \\/ (q -> p)").unwrap(), &FloatChain::lukasiewicz(4));
        assert_eq!(r.verdict, ChainVerdict::ValidAtOne);
    }
}
