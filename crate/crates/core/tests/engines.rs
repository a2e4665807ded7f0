mod support;

use hyperprover::backward::{decide_backward, BackwardConfig};
use hyperprover::checker::check_derivation;
use hyperprover::derivation::{DerivationTree, Verdict};
use hyperprover::forward::{decide_forward, saturate, ForwardConfig};
use hyperprover::formula::Formula;
use hyperprover::oracle::brute_closure;
use hyperprover::semantics::{eval_chain, ChainVerdict, ExactChain, FloatChain};
use hyperprover::{builtin_calculus, parse_formula, parse_hypersequent, OmegaSet};
use proptest::prelude::*;
use std::time::{Duration, Instant};

fn distributivity() -> DerivationTree {
    DerivationTree::parse(include_str!("data/distributivity.proof")).unwrap()
}

#[test]
fn distributivity_fixture() {
    let t = distributivity();
    check_derivation(&t, &builtin_calculus("hfle").unwrap()).unwrap();
    // the fixture uses no weakening, so it also checks in the extensions
    check_derivation(&t, &builtin_calculus("hflelw").unwrap()).unwrap();
    let text = t.to_text();
    assert_eq!(DerivationTree::parse(&text).unwrap(), t);
    assert_eq!(DerivationTree::from_json(&t.to_json()).unwrap(), t);
}

#[test]
fn altered_fixture_is_rejected_at_the_altered_node() {
    let mut t = distributivity();
    let leaf = t.node_at_mut(&[0, 1, 0, 1]).unwrap();
    leaf.conclusion = parse_hypersequent("=> p | r => q").unwrap();
    let err = check_derivation(&t, &builtin_calculus("hfle").unwrap()).unwrap_err();
    // the parent no longer matches its premises before the leaf is visited
    assert_eq!(err.path, vec![0, 1, 0]);

    let mut t = distributivity();
    t.node_at_mut(&[0, 0]).unwrap().rule = "/\\R".into();
    let err = check_derivation(&t, &builtin_calculus("hfle").unwrap()).unwrap_err();
    assert_eq!(err.path, vec![0, 0]);
}

#[test]
fn closure_members_are_derivable_forward() {
    let omega = OmegaSet::closure_of([parse_formula("p").unwrap()].iter());
    for name in ["hflelw", "hflew", "mtl"] {
        let calc = builtin_calculus(name).unwrap();
        let closure = brute_closure(&omega, &calc, 6, 3).unwrap();
        assert!(!closure.is_empty());
        for h in &closure {
            let out = decide_forward(h, &calc, &ForwardConfig::default()).unwrap();
            assert_eq!(out.verdict, Verdict::Derivable, "{name}: {h}");
            check_derivation(out.derivation.as_ref().unwrap(), &calc).unwrap();
        }
    }
}

#[test]
fn closure_members_are_derivable_backward() {
    let omega = OmegaSet::closure_of([parse_formula("p").unwrap()].iter());
    for name in ["hflec", "hflec+lw", "hflec+lw+rw"] {
        let calc = builtin_calculus(name).unwrap();
        for h in brute_closure(&omega, &calc, 6, 3).unwrap() {
            let out = decide_backward(&h, &calc, &BackwardConfig::default()).unwrap();
            assert_eq!(out.verdict, Verdict::Derivable, "{name}: {h}");
            check_derivation(out.derivation.as_ref().unwrap(), &calc).unwrap();
        }
    }
}

#[test]
fn saturation_members_are_derivable() {
    let omega = OmegaSet::closure_of([parse_formula("p -> q").unwrap()].iter());
    let calc = builtin_calculus("mtl").unwrap();
    let st = saturate(&omega, &calc).unwrap();
    for (id, _) in st.members().iter().enumerate() {
        check_derivation(&st.derivation_of(id), &calc).unwrap();
    }
}

#[test]
fn backward_agrees_with_forward_with_communication() {
    let fw = builtin_calculus("hflelw+c+rw+com").unwrap();
    let bw = builtin_calculus("hflec+lw+rw+com").unwrap();
    for text in [
        "=> (p -> q) \\/ (q -> p)",
        "=> p \\/ (p -> q)",
        "=> (p -> 0) \\/ (0 -> p)",
        "=> p -> p * p",
        "p -> q => q",
    ] {
        let h = parse_hypersequent(text).unwrap();
        let a = decide_forward(&h, &fw, &ForwardConfig::default()).unwrap();
        let b = decide_backward(&h, &bw, &BackwardConfig::default()).unwrap();
        assert_eq!(a.verdict, b.verdict, "{text}");
        if let Some(d) = &b.derivation {
            check_derivation(d, &bw).unwrap();
        }
    }
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        3 => Just(Formula::var("p")),
        2 => Just(Formula::var("q")),
        1 => Just(Formula::zero()),
        1 => Just(Formula::one()),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        (0..4u8, inner.clone(), inner).prop_map(|(op, a, b)| match op {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::fuse(a, b),
            _ => Formula::imp(a, b),
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mtl_theorems_hold_on_chains(f in formula()) {
        let calc = builtin_calculus("mtl").unwrap();
        let h = parse_hypersequent(&format!("=> {f}")).unwrap();
        let cfg = ForwardConfig {
            deadline: Some(Instant::now() + Duration::from_secs(10)),
            ..Default::default()
        };
        let out = decide_forward(&h, &calc, &cfg).unwrap();
        if out.verdict == Verdict::Derivable {
            for m in [ExactChain::lukasiewicz(4), ExactChain::godel(4)] {
                prop_assert_eq!(eval_chain(&f, &m).verdict, ChainVerdict::ValidAtOne, "{}", f);
            }
            prop_assert_eq!(eval_chain(&f, &FloatChain::lukasiewicz(3)).verdict, ChainVerdict::ValidAtOne);
            prop_assert!(check_derivation(out.derivation.as_ref().unwrap(), &calc).is_ok());
        }
    }

    #[test]
    fn engines_agree_on_random_formulas(seed in any::<u64>()) {
        let mut r = support::rng(seed);
        let h = support::theorem_goal(support::random_formula(&mut r, 2));
        let a = decide_forward(&h, &builtin_calculus("hflelw+c+rw").unwrap(), &ForwardConfig::default()).unwrap();
        let bw = builtin_calculus("hflec+lw+rw").unwrap();
        let b = decide_backward(&h, &bw, &BackwardConfig::default()).unwrap();
        prop_assert_eq!(a.verdict, b.verdict, "{}", h);
        if let Some(d) = &b.derivation {
            prop_assert!(check_derivation(d, &bw).is_ok());
        }
    }
}
