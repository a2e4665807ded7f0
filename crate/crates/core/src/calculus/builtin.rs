//! Built-in rule schemas and preset calculi.

use super::parse::parse_schematic_hypersequent;
use super::schema::{RuleSchema, SchematicHypersequent};
use super::{Calculus, CalculusError};

fn sh(text: &str) -> SchematicHypersequent {
    parse_schematic_hypersequent(text).unwrap_or_else(|e| panic!("built-in schema `{text}`: {e}"))
}

fn rule(name: &str, premises: &[&str], conclusion: &str) -> RuleSchema {
    RuleSchema::new(name, premises.iter().map(|p| sh(p)).collect(), sh(conclusion))
}

pub fn id() -> RuleSchema {
    rule("id", &[], "H | A => A")
}

pub fn bot_l() -> RuleSchema {
    rule("botL", &[], "H | bot, X => P")
}

pub fn top_r() -> RuleSchema {
    rule("topR", &[], "H | X => top")
}

pub fn zero_l() -> RuleSchema {
    rule("0L", &[], "H | 0 =>")
}

pub fn one_r() -> RuleSchema {
    rule("1R", &[], "H | => 1")
}

pub fn one_l() -> RuleSchema {
    rule("1L", &["H | X => P"], "H | 1, X => P")
}

pub fn zero_r() -> RuleSchema {
    rule("0R", &["H | X =>"], "H | X => 0")
}

/// External contraction.
pub fn ec() -> RuleSchema {
    rule("EC", &["H | X => P | X => P"], "H | X => P")
}

/// External weakening.
pub fn ew() -> RuleSchema {
    rule("EW", &["H"], "H | X => P")
}

pub fn fuse_l() -> RuleSchema {
    rule("*L", &["H | A, B, X => P"], "H | A * B, X => P")
}

pub fn fuse_r() -> RuleSchema {
    rule("*R", &["H | X => A", "H | Y => B"], "H | X, Y => A * B")
}

pub fn or_l() -> RuleSchema {
    rule("\\/L", &["H | A, X => P", "H | B, X => P"], "H | A \\/ B, X => P")
}

pub fn or_r1() -> RuleSchema {
    rule("\\/R1", &["H | X => A"], "H | X => A \\/ B")
}

pub fn or_r2() -> RuleSchema {
    rule("\\/R2", &["H | X => B"], "H | X => A \\/ B")
}

pub fn and_l1() -> RuleSchema {
    rule("/\\L1", &["H | A, X => P"], "H | A /\\ B, X => P")
}

pub fn and_l2() -> RuleSchema {
    rule("/\\L2", &["H | B, X => P"], "H | A /\\ B, X => P")
}

pub fn and_r() -> RuleSchema {
    rule("/\\R", &["H | X => A", "H | X => B"], "H | X => A /\\ B")
}

pub fn imp_l() -> RuleSchema {
    rule("->L", &["H | X => A", "H | B, Y => P"], "H | A -> B, X, Y => P")
}

pub fn imp_r() -> RuleSchema {
    rule("->R", &["H | A, X => B"], "H | X => A -> B")
}

/// The schemas of the base calculus, in display order.
pub fn hfle_rules() -> Vec<RuleSchema> {
    vec![
        id(),
        bot_l(),
        top_r(),
        zero_l(),
        one_r(),
        one_l(),
        zero_r(),
        ec(),
        ew(),
        fuse_l(),
        fuse_r(),
        or_l(),
        or_r1(),
        or_r2(),
        and_l1(),
        and_l2(),
        and_r(),
        imp_l(),
        imp_r(),
    ]
}

/// Left weakening.
pub fn lw() -> RuleSchema {
    rule("lw", &["H | X => P"], "H | X, Y => P")
}

/// Contraction.
pub fn c() -> RuleSchema {
    rule("c", &["H | X, Y, Y => P"], "H | X, Y => P")
}

/// Right weakening.
pub fn rw() -> RuleSchema {
    rule("rw", &["H | X =>"], "H | X => P")
}

pub fn com() -> RuleSchema {
    rule(
        "com",
        &["H | Y1, X1 => P1", "H | Y2, X2 => P2"],
        "H | Y1, X2 => P1 | Y2, X1 => P2",
    )
}

pub fn wem() -> RuleSchema {
    rule("wem", &["H | Z1, Z2 =>"], "H | Z1 => | Z2 =>")
}

/// `Bwk` for `k ≥ 1`: premises `H | Y_i, Y_j => P_i` for `i ≠ j`.
pub fn bwk(k: usize) -> Result<RuleSchema, CalculusError> {
    if k < 1 {
        return Err(CalculusError::InvalidParams {
            rule: "bwk".into(),
            message: "k must be at least 1".into(),
        });
    }
    let mut premises = Vec::new();
    for i in 0..=k {
        for j in 0..=k {
            if i != j {
                premises.push(format!("H | Y{i}, Y{j} => P{i}"));
            }
        }
    }
    let comps: Vec<String> = (0..=k).map(|i| format!("Y{i} => P{i}")).collect();
    let conclusion = format!("H | {}", comps.join(" | "));
    let ps: Vec<&str> = premises.iter().map(String::as_str).collect();
    Ok(rule(&format!("bwk{k}"), &ps, &conclusion))
}

/// `Bck` for `k ≥ 1`: premises `H | Y_i, Y_j => P_i` for `i < j`; the last
/// conclusion component has an empty succedent.
pub fn bck(k: usize) -> Result<RuleSchema, CalculusError> {
    if k < 1 {
        return Err(CalculusError::InvalidParams {
            rule: "bck".into(),
            message: "k must be at least 1".into(),
        });
    }
    let mut premises = Vec::new();
    for i in 0..k {
        for j in i + 1..=k {
            premises.push(format!("H | Y{i}, Y{j} => P{i}"));
        }
    }
    let mut comps: Vec<String> = (0..k).map(|i| format!("Y{i} => P{i}")).collect();
    comps.push(format!("Y{k} =>"));
    let conclusion = format!("H | {}", comps.join(" | "));
    let ps: Vec<&str> = premises.iter().map(String::as_str).collect();
    Ok(rule(&format!("bck{k}"), &ps, &conclusion))
}

pub fn mingle() -> RuleSchema {
    rule("mingle", &["H | Y, X1 => P", "H | Y, X2 => P"], "H | Y, X1, X2 => P")
}

/// `knot(n, m)`: one premise `H | Y, X_{i_1}, .., X_{i_m} => P` for every
/// multiset `{i_1, .., i_m}` of size `m` over `1..n`.
pub fn knot(n: usize, m: usize) -> Result<RuleSchema, CalculusError> {
    if n == 0 && m > 0 {
        return Err(CalculusError::InvalidParams {
            rule: "knot".into(),
            message: "m > 0 requires n ≥ 1".into(),
        });
    }
    let mut premises = Vec::new();
    let mut idx = vec![1usize; m];
    loop {
        let mut ant = vec!["Y".to_string()];
        ant.extend(idx.iter().map(|i| format!("X{i}")));
        premises.push(format!("H | {} => P", ant.join(", ")));
        // next non-decreasing index tuple
        let mut pos = m;
        while pos > 0 && idx[pos - 1] == n {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        let v = idx[pos - 1];
        for x in idx.iter_mut().skip(pos) {
            *x = v;
        }
    }
    let mut ant = vec!["Y".to_string()];
    ant.extend((1..=n).map(|i| format!("X{i}")));
    let conclusion = format!("H | {} => P", ant.join(", "));
    let ps: Vec<&str> = premises.iter().map(String::as_str).collect();
    Ok(rule(&format!("knot{n}_{m}"), &ps, &conclusion))
}

/// A rule addition by name: `com`, `wem`, `mingle`, `lw`, `c`, `rw`,
/// `bwk:k`, `bck:k`, `knot:n,m`.
pub fn builtin_rule(spec: &str) -> Result<RuleSchema, CalculusError> {
    let spec = spec.trim();
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.trim().to_ascii_lowercase(), Some(p.trim())),
        None => (spec.to_ascii_lowercase(), None),
    };
    let ints = |p: Option<&str>, count: usize| -> Result<Vec<usize>, CalculusError> {
        let bad = || CalculusError::InvalidParams {
            rule: name.clone(),
            message: format!("expected {count} integer parameter(s)"),
        };
        let p = p.ok_or_else(bad)?;
        let xs: Result<Vec<usize>, _> = p.split(',').map(|x| x.trim().parse::<usize>()).collect();
        let xs = xs.map_err(|_| bad())?;
        if xs.len() != count {
            return Err(bad());
        }
        Ok(xs)
    };
    let no_params = |r: RuleSchema| -> Result<RuleSchema, CalculusError> {
        match params {
            None => Ok(r),
            Some(_) => Err(CalculusError::InvalidParams {
                rule: r.name.clone(),
                message: "takes no parameters".into(),
            }),
        }
    };
    match name.as_str() {
        "com" => no_params(com()),
        "wem" => no_params(wem()),
        "mingle" => no_params(mingle()),
        "lw" => no_params(lw()),
        "c" => no_params(c()),
        "rw" => no_params(rw()),
        "bwk" => bwk(ints(params, 1)?[0]),
        "bck" => bck(ints(params, 1)?[0]),
        "knot" => {
            let xs = ints(params, 2)?;
            knot(xs[0], xs[1])
        }
        _ => Err(CalculusError::UnknownPreset(spec.to_string())),
    }
}

/// A preset calculus. Names are case-insensitive: `hfle`, `hflelw`
/// (`flelw`), `hflew` (`flew`), `hflec` (`flec`), `mtl`. A preset may be
/// followed by `+rule` additions, e.g. `hflec+com` or `hflelw+bwk:2`.
pub fn builtin_calculus(preset: &str) -> Result<Calculus, CalculusError> {
    let mut parts = preset.split('+');
    let base = parts.next().unwrap_or("").trim().to_ascii_lowercase();
    let mut rules = hfle_rules();
    let extra: Vec<RuleSchema> = match base.as_str() {
        "hfle" | "fle" => vec![],
        "hflelw" | "flelw" => vec![lw()],
        "hflew" | "flew" => vec![lw(), rw()],
        "hflec" | "flec" => vec![c()],
        "mtl" => vec![lw(), rw(), com()],
        _ => return Err(CalculusError::UnknownPreset(preset.to_string())),
    };
    rules.extend(extra);
    let mut calc = Calculus::new(base, rules)?;
    for p in parts {
        calc = calc.with_rule(builtin_rule(p)?)?;
    }
    Ok(calc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::schema::{validate_schema, RuleKind};

    #[test]
    fn base_calculus_shape() {
        let rules = hfle_rules();
        assert_eq!(rules.len(), 19);
        for r in &rules {
            if r.kind == RuleKind::Logical {
                assert!(r.conclusion.has_h);
                assert!(r.premises.iter().all(|p| p.has_h), "{}", r.name);
            }
        }
        assert_eq!(rules.iter().filter(|r| r.kind == RuleKind::Initial).count(), 5);
    }

    #[test]
    fn structural_rules_validate() {
        let mut all = vec![lw(), c(), rw(), com(), wem(), mingle(), ec(), ew()];
        for k in 1..4 {
            all.push(bwk(k).unwrap());
            all.push(bck(k).unwrap());
        }
        for (n, m) in [(2, 1), (3, 2), (1, 0), (2, 2)] {
            all.push(knot(n, m).unwrap());
        }
        for r in &all {
            assert!(validate_schema(r).all_ok(), "{r}");
        }
    }

    #[test]
    fn parametric_families() {
        assert!(bwk(0).is_err());
        assert!(bck(0).is_err());
        assert_eq!(bwk(2).unwrap().premises.len(), 6);
        assert_eq!(bck(2).unwrap().premises.len(), 3);
        assert_eq!(knot(2, 2).unwrap().premises.len(), 3);
        assert!(knot(2, 1).unwrap().same_shape(&mingle()));
    }

    #[test]
    fn presets() {
        let mtl = builtin_calculus("MTL").unwrap();
        assert_eq!(mtl.rules().len(), 22);
        assert!(mtl.has_lw() && !mtl.has_c());
        let flec = builtin_calculus("hflec+com").unwrap();
        assert!(flec.has_c());
        assert!(flec.rules().iter().any(|r| r.same_shape(&com())));
        assert!(builtin_calculus("nope").is_err());
        assert!(builtin_calculus("mtl+bwk:0").is_err());
        assert!(builtin_calculus("hflelw").unwrap().schema_size_max() >= builtin_calculus("hfle").unwrap().schema_size_max());
    }

    #[test]
    fn sizes_grow() {
        let com_calc = builtin_calculus("hflelw+com").unwrap();
        let bwk_calc = builtin_calculus("hflelw+com+bwk:3").unwrap();
        assert!(bwk_calc.schema_size_max() > com_calc.schema_size_max());
        assert!(bwk(3).unwrap().symbol_size() > com().symbol_size());
        // H | X => P  and  H | X, Y => P
        assert_eq!(lw().symbol_size(), 5 + 7);
    }
}
