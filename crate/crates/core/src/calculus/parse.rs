use crate::formula::{parse_with, Connective, Constant, FormulaBuilder};
use crate::syntax::{Cursor, ParseError, Tok};

use super::schema::{
    validate_schema, AntecedentEntry, RuleKind, RuleSchema, SchematicComponent, SchematicFormula, SchematicHypersequent,
    SuccedentSlot,
};
use super::CalculusError;

fn is_multiset_var(name: &str) -> bool {
    matches!(name.chars().next(), Some('X' | 'Y' | 'Z' | 'M'))
}

fn is_succedent_var(name: &str) -> bool {
    name.starts_with('P')
}

fn is_formula_var(name: &str) -> bool {
    matches!(name.chars().next(), Some('A' | 'B'))
}

struct SchematicLeaves;

impl FormulaBuilder for SchematicLeaves {
    type Out = SchematicFormula;

    fn leaf(&self, cur: &mut Cursor) -> Result<SchematicFormula, ParseError> {
        let pos = cur.pos();
        match cur.bump() {
            Some(Tok::Ident(name)) if is_formula_var(&name) => Ok(SchematicFormula::Var(name)),
            Some(Tok::Ident(name)) => Err(ParseError::new(
                pos,
                format!("`{name}` is not a formula-variable (names start with A or B)"),
            )),
            Some(t) => Err(ParseError::new(pos, format!("expected a schematic formula, found {t}"))),
            None => Err(ParseError::new(pos, "expected a schematic formula, found end of input")),
        }
    }

    fn constant(&self, c: Constant) -> SchematicFormula {
        SchematicFormula::Const(c)
    }

    fn node(&self, op: Connective, a: SchematicFormula, b: SchematicFormula) -> SchematicFormula {
        SchematicFormula::bin(op, a, b)
    }
}

/// Parses `H | X, A -> B => P | Z =>`.
pub fn parse_schematic_hypersequent(text: &str) -> Result<SchematicHypersequent, ParseError> {
    let mut cur = Cursor::new(text)?;
    let h = parse_schematic_at(&mut cur)?;
    cur.expect_end()?;
    Ok(h)
}

fn parse_schematic_at(cur: &mut Cursor) -> Result<SchematicHypersequent, ParseError> {
    let mut has_h = false;
    let mut comps = Vec::new();
    if cur.at_end() {
        return Ok(SchematicHypersequent::new(false, comps));
    }
    loop {
        let is_h = matches!(cur.peek(), Some(Tok::Ident(n)) if n == "H");
        if is_h {
            let pos = cur.pos();
            cur.bump();
            if has_h {
                return Err(ParseError::new(pos, "hypersequent-variable H occurs twice"));
            }
            has_h = true;
        } else {
            comps.push(parse_component(cur)?);
        }
        if cur.at_end() {
            break;
        }
        cur.expect(&Tok::Bar)?;
    }
    Ok(SchematicHypersequent::new(has_h, comps))
}

fn parse_component(cur: &mut Cursor) -> Result<SchematicComponent, ParseError> {
    let mut ant = Vec::new();
    if !cur.eat(&Tok::Arrow) {
        loop {
            let entry = match cur.peek() {
                Some(Tok::Ident(n)) if is_multiset_var(n) => {
                    let n = n.clone();
                    cur.bump();
                    AntecedentEntry::Multiset(n)
                }
                _ => AntecedentEntry::Formula(parse_with(cur, &SchematicLeaves)?),
            };
            ant.push(entry);
            if cur.eat(&Tok::Arrow) {
                break;
            }
            if !cur.eat(&Tok::Comma) {
                return Err(cur.unexpected("expected `,` or `=>`"));
            }
        }
    }
    let succ = match cur.peek() {
        None | Some(Tok::Bar) => SuccedentSlot::Empty,
        Some(Tok::Ident(n)) if is_succedent_var(n) => {
            let n = n.clone();
            cur.bump();
            SuccedentSlot::Var(n)
        }
        Some(_) => SuccedentSlot::Formula(parse_with(cur, &SchematicLeaves)?),
    };
    Ok(SchematicComponent::new(ant, succ))
}

/// Parses one or more rules in the rule DSL. Items are separated by
/// newlines or `;`; `#` starts a comment. A rule starts with `rule <name>`
/// (optional for a single rule), followed by `premise[:] <schema>` items and
/// one `conclusion[:] <schema>` item. Only structural schemas are accepted,
/// and they must have a linear conclusion and the subvariable property.
pub fn parse_rules_dsl(text: &str) -> Result<Vec<RuleSchema>, CalculusError> {
    struct Pending {
        name: Option<String>,
        premises: Vec<SchematicHypersequent>,
        conclusion: Option<SchematicHypersequent>,
        line: usize,
    }
    let mut rules = Vec::new();
    let mut cur: Option<Pending> = None;

    let finish = |p: Pending, rules: &mut Vec<RuleSchema>| -> Result<(), CalculusError> {
        let name = p.name.unwrap_or_else(|| "custom".to_string());
        let conclusion = p.conclusion.ok_or_else(|| CalculusError::Dsl {
            line: p.line,
            message: format!("rule `{name}` has no conclusion"),
        })?;
        let r = RuleSchema::new(name.clone(), p.premises, conclusion);
        if r.kind != RuleKind::Structural {
            return Err(CalculusError::Dsl {
                line: p.line,
                message: format!("rule `{name}` is not structural (only H, multiset- and succedent-variables are allowed)"),
            });
        }
        let report = validate_schema(&r);
        if !report.all_ok() {
            return Err(CalculusError::Invalid { name, report });
        }
        rules.push(r);
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for item in line.split(';') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (kw, rest) = match item.find(|c: char| c.is_whitespace() || c == ':') {
                Some(i) => (&item[..i], item[i..].trim_start()),
                None => (item, ""),
            };
            let rest = rest.strip_prefix(':').unwrap_or(rest).trim();
            let syntax = |e: ParseError| CalculusError::Dsl {
                line: lineno + 1,
                message: e.to_string(),
            };
            match kw {
                "rule" => {
                    if let Some(p) = cur.take() {
                        finish(p, &mut rules)?;
                    }
                    if rest.is_empty() || rest.contains(char::is_whitespace) {
                        return Err(CalculusError::Dsl {
                            line: lineno + 1,
                            message: "expected `rule <name>`".into(),
                        });
                    }
                    cur = Some(Pending {
                        name: Some(rest.to_string()),
                        premises: Vec::new(),
                        conclusion: None,
                        line: lineno + 1,
                    });
                }
                "premise" | "conclusion" => {
                    let p = cur.get_or_insert_with(|| Pending {
                        name: None,
                        premises: Vec::new(),
                        conclusion: None,
                        line: lineno + 1,
                    });
                    if p.conclusion.is_some() {
                        return Err(CalculusError::Dsl {
                            line: lineno + 1,
                            message: "items after the conclusion (start a new rule with `rule <name>`)".into(),
                        });
                    }
                    let h = parse_schematic_hypersequent(rest).map_err(syntax)?;
                    if kw == "premise" {
                        p.premises.push(h);
                    } else {
                        p.conclusion = Some(h);
                    }
                }
                other => {
                    return Err(CalculusError::Dsl {
                        line: lineno + 1,
                        message: format!("unknown keyword `{other}` (expected rule, premise or conclusion)"),
                    })
                }
            }
        }
    }
    match cur.take() {
        Some(p) => finish(p, &mut rules)?,
        None if rules.is_empty() => {
            return Err(CalculusError::Dsl {
                line: 1,
                message: "no rule found".into(),
            })
        }
        None => {}
    }
    Ok(rules)
}

/// Parses exactly one rule.
pub fn parse_rule_dsl(text: &str) -> Result<RuleSchema, CalculusError> {
    let mut rules = parse_rules_dsl(text)?;
    if rules.len() != 1 {
        return Err(CalculusError::Dsl {
            line: 1,
            message: format!("expected one rule, found {}", rules.len()),
        });
    }
    Ok(rules.remove(0))
}
