//! Derivation trees and their two serial forms.
//!
//! Text form: one node per line, two spaces of indentation per depth,
//! `<hypersequent> [<rule>]`, children after their parent in order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperseq::{parse_hypersequent, Hypersequent};

/// Outcome of a decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Derivable,
    NotDerivable,
    /// The deadline passed before the search finished.
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Derivable => "DERIVABLE",
            Verdict::NotDerivable => "NOT_DERIVABLE",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTree {
    pub conclusion: Hypersequent,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivationTree>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationFormatError {
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
}

impl DerivationTree {
    pub fn new(conclusion: Hypersequent, rule: impl Into<String>, children: Vec<DerivationTree>) -> Self {
        DerivationTree {
            conclusion,
            rule: rule.into(),
            digest: None,
            children,
        }
    }

    pub fn with_digest(mut self, digest: impl Into<String>) -> Self {
        self.digest = Some(digest.into());
        self
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::height).max().unwrap_or(0)
    }

    pub fn num_nodes(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::num_nodes).sum::<usize>()
    }

    /// Pre-order traversal with child-index paths.
    pub fn nodes(&self) -> Vec<(Vec<usize>, &DerivationTree)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, t)) = stack.pop() {
            for (i, c) in t.children.iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((p, c));
            }
            out.push((path, t));
        }
        out
    }

    pub fn node_at(&self, path: &[usize]) -> Option<&DerivationTree> {
        let mut t = self;
        for &i in path {
            t = t.children.get(i)?;
        }
        Some(t)
    }

    pub fn node_at_mut(&mut self, path: &[usize]) -> Option<&mut DerivationTree> {
        let mut t = self;
        for &i in path {
            t = t.children.get_mut(i)?;
        }
        Some(t)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (path, t) in self.nodes() {
            for _ in 0..path.len() {
                out.push_str("  ");
            }
            out.push_str(&format!("{} [{}]\n", t.conclusion, t.rule));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<DerivationTree, DerivationFormatError> {
        let mut stack: Vec<(usize, DerivationTree)> = Vec::new();
        let mut root: Option<DerivationTree> = None;
        let fold = |stack: &mut Vec<(usize, DerivationTree)>, root: &mut Option<DerivationTree>, depth: usize| {
            while stack.last().is_some_and(|(d, _)| *d >= depth) {
                let (_, t) = stack.pop().expect("non-empty");
                match stack.last_mut() {
                    Some((_, parent)) => parent.children.push(t),
                    None => *root = Some(t),
                }
            }
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: String| DerivationFormatError::Text { line, message };
            let indent = raw.len() - raw.trim_start_matches(' ').len();
            if indent % 2 != 0 {
                return Err(err("indentation must be a multiple of two spaces".into()));
            }
            let depth = indent / 2;
            let body = raw.trim();
            let open = body.rfind('[').ok_or_else(|| err("missing `[rule]`".into()))?;
            let rule = body[open + 1..]
                .strip_suffix(']')
                .ok_or_else(|| err("missing `]`".into()))?
                .trim();
            if rule.is_empty() {
                return Err(err("empty rule name".into()));
            }
            let conclusion = parse_hypersequent(body[..open].trim()).map_err(|e| err(e.to_string()))?;
            match stack.last() {
                None if root.is_some() => return Err(err("more than one root".into())),
                None if depth != 0 => return Err(err("the root must not be indented".into())),
                Some((d, _)) if depth > d + 1 => return Err(err("indentation skips a level".into())),
                _ => {}
            }
            fold(&mut stack, &mut root, depth);
            if depth == 0 && root.is_some() {
                return Err(err("more than one root".into()));
            }
            stack.push((depth, DerivationTree::new(conclusion, rule, Vec::new())));
        }
        fold(&mut stack, &mut root, 0);
        root.ok_or(DerivationFormatError::Text {
            line: 1,
            message: "empty derivation".into(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trees serialize")
    }

    pub fn from_json(text: &str) -> Result<DerivationTree, DerivationFormatError> {
        serde_json::from_str(text).map_err(|e| DerivationFormatError::Json(e.to_string()))
    }

    /// JSON when the text starts with `{`, indented text otherwise.
    pub fn parse(text: &str) -> Result<DerivationTree, DerivationFormatError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Hypersequent {
        parse_hypersequent(s).unwrap()
    }

    fn sample() -> DerivationTree {
        DerivationTree::new(
            h("=> p /\\ p"),
            "/\\R",
            vec![
                DerivationTree::new(h("=> p"), "x", vec![DerivationTree::new(h("=> | => p"), "y", vec![])]),
                DerivationTree::new(h("=> p"), "x", vec![]),
            ],
        )
    }

    #[test]
    fn text_round_trip() {
        let t = sample();
        let text = t.to_text();
        assert_eq!(text, "=> p /\\ p [/\\R]\n  => p [x]\n    => | => p [y]\n  => p [x]\n");
        assert_eq!(DerivationTree::from_text(&text).unwrap(), t);
        assert_eq!(DerivationTree::parse(&text).unwrap(), t);
    }

    #[test]
    fn json_round_trip() {
        let t = sample().with_digest("ab");
        assert_eq!(DerivationTree::parse(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn text_errors() {
        assert!(DerivationTree::from_text("p => p [id]\nq => q [id]\n").is_err());
        assert!(DerivationTree::from_text("p => p [id]\n    q => q [id]\n").is_err());
        assert!(DerivationTree::from_text("p => p\n").is_err());
        assert!(DerivationTree::from_text(" p => p [id]\n").is_err());
        assert!(DerivationTree::from_text("").is_err());
    }

    #[test]
    fn paths() {
        let t = sample();
        let paths: Vec<Vec<usize>> = t.nodes().into_iter().map(|(p, _)| p).collect();
        assert_eq!(paths, vec![vec![], vec![0], vec![0, 0], vec![1]]);
        assert_eq!(t.node_at(&[0, 0]).unwrap().rule, "y");
        assert_eq!(t.height(), 3);
        assert_eq!(t.num_nodes(), 4);
    }
}
