use std::fmt;

use serde::Serialize;

/// Which structural rule a [`Violation`] breaks.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Production shape `u Xj v Xk | u Xj v | u` with `j, k < i`.
    Form1b,
    /// A nonterminal deriving the empty string occurs on a right-hand side.
    Form1c,
    /// Nonterminal set and count are fixed for the whole run.
    Slp1,
    /// Nonterminals on a right-hand side are a subsequence of the baseline ones.
    Slp2,
    /// `Xn -> $ u X(n-1) v #` with markers nowhere else.
    Slp3,
    /// Powers only in succinct form for the declared letter, exponent at least 2.
    Succinct,
    /// Letter or nonterminal labels, one transition per nonterminal, none by `Xn`.
    Aut1,
    /// Unique start state with a single `$` edge, unique accept state with a single `#` edge.
    Aut2,
    /// Labels refer to known states, letters and live nonterminals.
    Instance,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Form1b => "form-1b",
            Rule::Form1c => "form-1c",
            Rule::Slp1 => "SLP-1",
            Rule::Slp2 => "SLP-2",
            Rule::Slp3 => "SLP-3",
            Rule::Succinct => "succinct",
            Rule::Aut1 => "Aut-1",
            Rule::Aut2 => "Aut-2",
            Rule::Instance => "instance",
        };
        f.write_str(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Violation {
    pub rule: Rule,
    /// Offending nonterminal index, when the violation is local to one production.
    pub index: Option<u32>,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(rule: Rule, index: Option<u32>, detail: impl Into<String>) -> Self {
        Violation {
            rule,
            index,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{} at X{}: {}", self.rule, i, self.detail),
            None => write!(f, "{}: {}", self.rule, self.detail),
        }
    }
}

pub(crate) fn render(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}
