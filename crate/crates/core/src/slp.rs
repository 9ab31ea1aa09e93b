//! Straight-line programs in the three-shape production form used throughout
//! the pipeline: `Xi -> u Xj v Xk`, `Xi -> u Xj v` or `Xi -> u`, with `j, k < i`.
//!
//! Right-hand sides may hold succinct powers `a^l` while a grammar is in
//! succinct form for `a`. Lengths are arbitrary precision.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::letter::{Alphabet, Letter};
use crate::report::{Rule, Violation};

/// Nonterminal index, 1-based.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Nt(pub u32);

impl Nt {
    pub(crate) fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Nt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    Letter(Letter),
    /// `base^exponent`, exponent at least 2.
    Power(Letter, BigUint),
    Nt(Nt),
}

impl Symbol {
    /// `base^exponent` in stored form: nothing for 0, a plain letter for 1.
    pub fn power(base: Letter, exponent: BigUint) -> Option<Symbol> {
        if exponent.is_zero() {
            None
        } else if exponent.is_one() {
            Some(Symbol::Letter(base))
        } else {
            Some(Symbol::Power(base, exponent))
        }
    }

    pub fn as_nt(&self) -> Option<Nt> {
        match self {
            Symbol::Nt(nt) => Some(*nt),
            _ => None,
        }
    }

    /// Letter the symbol is made of, for letters and powers.
    pub fn base(&self) -> Option<Letter> {
        match self {
            Symbol::Letter(l) | Symbol::Power(l, _) => Some(*l),
            Symbol::Nt(_) => None,
        }
    }
}

#[derive(Debug)]
struct Summary {
    lens: Vec<BigUint>,
    first: Vec<Option<Letter>>,
    last: Vec<Option<Letter>>,
}

#[derive(Clone, Debug)]
pub struct Grammar {
    alphabet: Alphabet,
    rules: Vec<Vec<Symbol>>,
    succinct_for: Option<Letter>,
    summary: OnceLock<Arc<Summary>>,
}

impl Grammar {
    pub fn new(alphabet: Alphabet, rules: Vec<Vec<Symbol>>) -> Self {
        Grammar {
            alphabet,
            rules,
            succinct_for: None,
            summary: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.rules.len()
    }

    pub fn top(&self) -> Nt {
        Nt(self.rules.len() as u32)
    }

    pub fn nts(&self) -> impl DoubleEndedIterator<Item = Nt> {
        (1..=self.rules.len() as u32).map(Nt)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn alphabet_mut(&mut self) -> &mut Alphabet {
        &mut self.alphabet
    }

    pub fn succinct_for(&self) -> Option<Letter> {
        self.succinct_for
    }

    pub fn set_succinct_for(&mut self, letter: Option<Letter>) {
        self.succinct_for = letter;
    }

    fn check(&self, nt: Nt) -> Result<()> {
        if nt.0 >= 1 && nt.slot() < self.rules.len() {
            Ok(())
        } else {
            Err(Error::nt(nt))
        }
    }

    pub fn rule(&self, nt: Nt) -> Result<&[Symbol]> {
        self.check(nt)?;
        Ok(&self.rules[nt.slot()])
    }

    pub fn rules(&self) -> impl Iterator<Item = (Nt, &[Symbol])> {
        self.rules
            .iter()
            .enumerate()
            .map(|(i, r)| (Nt(i as u32 + 1), r.as_slice()))
    }

    pub fn set_rule(&mut self, nt: Nt, rhs: Vec<Symbol>) -> Result<()> {
        self.check(nt)?;
        self.rules[nt.slot()] = rhs;
        self.summary = OnceLock::new();
        Ok(())
    }

    /// |G|: stored right-hand side symbols, a succinct power counting as one.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    pub fn max_rhs_len(&self) -> usize {
        self.rules.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn summary(&self) -> &Summary {
        self.summary.get_or_init(|| Arc::new(self.compute_summary()))
    }

    // Forward or out-of-range references contribute nothing; the invariant
    // checker reports them separately.
    fn compute_summary(&self) -> Summary {
        let n = self.rules.len();
        let mut lens = vec![BigUint::zero(); n];
        let mut first = vec![None; n];
        let mut last = vec![None; n];
        for i in 0..n {
            let mut len = BigUint::zero();
            let mut f = None;
            let mut l = None;
            for sym in &self.rules[i] {
                let (sym_len, sf, sl) = match sym {
                    Symbol::Letter(a) => (BigUint::one(), Some(*a), Some(*a)),
                    Symbol::Power(a, e) => {
                        if e.is_zero() {
                            (BigUint::zero(), None, None)
                        } else {
                            (e.clone(), Some(*a), Some(*a))
                        }
                    }
                    Symbol::Nt(nt) => {
                        let j = nt.0 as usize;
                        if j >= 1 && j - 1 < i {
                            (lens[j - 1].clone(), first[j - 1], last[j - 1])
                        } else {
                            (BigUint::zero(), None, None)
                        }
                    }
                };
                if sym_len.is_zero() {
                    continue;
                }
                if f.is_none() {
                    f = sf;
                }
                l = sl;
                len += sym_len;
            }
            lens[i] = len;
            first[i] = f;
            last[i] = l;
        }
        Summary { lens, first, last }
    }

    /// |eval(Xi)|.
    pub fn eval_len(&self, nt: Nt) -> Result<BigUint> {
        self.check(nt)?;
        Ok(self.summary().lens[nt.slot()].clone())
    }

    pub fn eval_lens(&self) -> &[BigUint] {
        &self.summary().lens
    }

    pub fn is_empty_nt(&self, nt: Nt) -> bool {
        self.summary()
            .lens
            .get(nt.slot())
            .is_none_or(Zero::is_zero)
    }

    /// First and last letters of eval(Xi); both absent iff eval(Xi) is empty.
    pub fn first_last(&self, nt: Nt) -> Result<(Option<Letter>, Option<Letter>)> {
        self.check(nt)?;
        let s = self.summary();
        Ok((s.first[nt.slot()], s.last[nt.slot()]))
    }

    pub fn first(&self, nt: Nt) -> Option<Letter> {
        self.summary().first.get(nt.slot()).copied().flatten()
    }

    pub fn last(&self, nt: Nt) -> Option<Letter> {
        self.summary().last.get(nt.slot()).copied().flatten()
    }

    /// Full eval(Xi) as letters, provided it has at most `cap` letters.
    pub fn decompress(&self, nt: Nt, cap: usize) -> Result<Vec<Letter>> {
        let len = self.eval_len(nt)?;
        match len.to_usize() {
            Some(l) if l <= cap => {}
            _ => return Err(Error::BudgetExceeded { len, cap }),
        }
        let mut out = Vec::with_capacity(len.to_usize().unwrap_or(0));
        self.expand_into(nt, &mut out);
        Ok(out)
    }

    fn expand_into(&self, nt: Nt, out: &mut Vec<Letter>) {
        for sym in &self.rules[nt.slot()] {
            match sym {
                Symbol::Letter(a) => out.push(*a),
                Symbol::Power(a, e) => {
                    let e = e.to_usize().expect("length checked against cap");
                    out.extend(std::iter::repeat_n(*a, e));
                }
                Symbol::Nt(child) => {
                    if child.0 >= 1 && child < &nt {
                        self.expand_into(*child, out)
                    }
                }
            }
        }
    }

    /// Nonterminals reachable from `nt` (including itself), ascending.
    pub fn reachable(&self, nt: Nt) -> Vec<Nt> {
        let mut seen = vec![false; self.rules.len()];
        if self.check(nt).is_err() {
            return Vec::new();
        }
        seen[nt.slot()] = true;
        for i in (0..self.rules.len()).rev() {
            if !seen[i] {
                continue;
            }
            for sym in &self.rules[i] {
                if let Symbol::Nt(child) = sym {
                    if child.0 >= 1 && child.slot() < i {
                        seen[child.slot()] = true;
                    }
                }
            }
        }
        (0..self.rules.len())
            .filter(|&i| seen[i])
            .map(|i| Nt(i as u32 + 1))
            .collect()
    }

    /// Letters (as bases) appearing anywhere on a right-hand side.
    pub fn occurs(&self, letter: Letter) -> bool {
        self.rules
            .iter()
            .flatten()
            .any(|s| s.base() == Some(letter))
    }

    pub fn display_rule(&self, nt: Nt) -> String {
        let Ok(rhs) = self.rule(nt) else {
            return String::new();
        };
        let mut out = format!("{nt} ->");
        for sym in rhs {
            out.push(' ');
            out.push_str(&self.symbol_text(sym));
        }
        out
    }

    pub fn symbol_text(&self, sym: &Symbol) -> String {
        match sym {
            Symbol::Letter(a) => self.alphabet.name(*a),
            Symbol::Power(a, e) => format!("{}^{}", self.alphabet.name(*a), e),
            Symbol::Nt(nt) => nt.to_string(),
        }
    }
}

/// Lists every violation of the production form and of SLP 1-3, relative to
/// the baseline grammar `original`.
pub fn check_slp_invariants(g: &Grammar, original: &Grammar) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = g.n();
    if n != original.n() {
        out.push(Violation::new(
            Rule::Slp1,
            None,
            format!("grammar has {n} nonterminals, baseline has {}", original.n()),
        ));
    }
    if n == 0 {
        out.push(Violation::new(Rule::Slp3, None, "grammar has no nonterminals"));
        return out;
    }
    for (nt, rhs) in g.rules() {
        let i = nt.0;
        let nts: Vec<Nt> = rhs.iter().filter_map(Symbol::as_nt).collect();
        for &child in &nts {
            if child.0 == 0 || child.0 as usize > n {
                out.push(Violation::new(
                    Rule::Slp1,
                    Some(i),
                    format!("reference to nonexistent {child}"),
                ));
            } else if child.0 >= i {
                out.push(Violation::new(
                    Rule::Form1b,
                    Some(i),
                    format!("{child} is not smaller than X{i}"),
                ));
            } else if g.is_empty_nt(child) {
                out.push(Violation::new(
                    Rule::Form1c,
                    Some(i),
                    format!("{child} derives the empty string"),
                ));
            }
        }
        if nts.len() > 2 {
            out.push(Violation::new(
                Rule::Form1b,
                Some(i),
                format!("{} nonterminals on one right-hand side", nts.len()),
            ));
        } else if nts.len() == 2 && i as usize != n && rhs.last().and_then(Symbol::as_nt).is_none()
        {
            out.push(Violation::new(
                Rule::Form1b,
                Some(i),
                "explicit letters after the second nonterminal",
            ));
        }
        if let Ok(orig) = original.rule(nt) {
            let orig_nts: Vec<Nt> = orig.iter().filter_map(Symbol::as_nt).collect();
            if !is_subsequence(&nts, &orig_nts) {
                out.push(Violation::new(
                    Rule::Slp2,
                    Some(i),
                    "nonterminals are not a subsequence of the baseline production",
                ));
            }
        }
        for (pos, sym) in rhs.iter().enumerate() {
            match sym {
                Symbol::Letter(a) | Symbol::Power(a, _) if !g.alphabet.contains(*a) => {
                    out.push(Violation::new(
                        Rule::Instance,
                        Some(i),
                        format!("unknown letter id {}", a.id()),
                    ));
                    continue;
                }
                _ => {}
            }
            match sym {
                Symbol::Power(a, e) => {
                    if a.is_marker() {
                        out.push(Violation::new(Rule::Slp3, Some(i), "power of a marker"));
                    }
                    if g.succinct_for != Some(*a) {
                        out.push(Violation::new(
                            Rule::Succinct,
                            Some(i),
                            format!(
                                "power of {} while not in succinct form for it",
                                g.alphabet.name(*a)
                            ),
                        ));
                    }
                    if *e < BigUint::from(2u32) {
                        out.push(Violation::new(
                            Rule::Succinct,
                            Some(i),
                            format!("stored power with exponent {e}"),
                        ));
                    }
                }
                Symbol::Letter(a) if a.is_marker() => {
                    let allowed = i as usize == n
                        && ((*a == Letter::DOLLAR && pos == 0)
                            || (*a == Letter::HASH && pos + 1 == rhs.len()));
                    if !allowed {
                        out.push(Violation::new(
                            Rule::Slp3,
                            Some(i),
                            format!("marker {} out of place", g.alphabet.name(*a)),
                        ));
                    }
                }
                _ => {}
            }
        }
    }
    let top = g.rule(g.top()).unwrap_or(&[]);
    if top.first() != Some(&Symbol::Letter(Letter::DOLLAR))
        || top.last() != Some(&Symbol::Letter(Letter::HASH))
        || top.len() < 2
    {
        out.push(Violation::new(
            Rule::Slp3,
            Some(n as u32),
            "top production must start with $ and end with #",
        ));
    }
    if top
        .iter()
        .filter_map(Symbol::as_nt)
        .any(|c| c.0 as usize != n - 1)
        || top.iter().filter_map(Symbol::as_nt).count() > 1
    {
        out.push(Violation::new(
            Rule::Slp3,
            Some(n as u32),
            format!("top production may only reference X{}", n - 1),
        ));
    }
    out
}

fn is_subsequence(needle: &[Nt], hay: &[Nt]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|x| it.any(|y| y == x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grammar(rules: &[&[&str]]) -> Grammar {
        let mut alphabet = Alphabet::new();
        let rules = rules
            .iter()
            .map(|rhs| {
                rhs.iter()
                    .map(|tok| parse_tok(&mut alphabet, tok))
                    .collect()
            })
            .collect();
        Grammar::new(alphabet, rules)
    }

    fn parse_tok(alphabet: &mut Alphabet, tok: &str) -> Symbol {
        if tok == "$" {
            return Symbol::Letter(Letter::DOLLAR);
        }
        if tok == "#" {
            return Symbol::Letter(Letter::HASH);
        }
        if let Some(rest) = tok.strip_prefix('X') {
            if let Ok(i) = rest.parse() {
                return Symbol::Nt(Nt(i));
            }
        }
        if let Some((base, exp)) = tok.split_once('^') {
            let a = alphabet.original(base).unwrap();
            return Symbol::Power(a, exp.parse().unwrap());
        }
        Symbol::Letter(alphabet.original(tok).unwrap())
    }

    fn text(g: &Grammar, letters: &[Letter]) -> String {
        letters.iter().map(|&l| g.alphabet().name(l)).collect()
    }

    #[test]
    fn eval_len_examples() {
        let g = grammar(&[&["a", "b"]]);
        assert_eq!(g.eval_len(Nt(1)).unwrap(), BigUint::from(2u32));
        let g = grammar(&[&["a", "b"], &["X1", "X1"]]);
        assert_eq!(g.eval_len(Nt(2)).unwrap(), BigUint::from(4u32));
        let mut g = grammar(&[&["a^12", "b"]]);
        let a = g.alphabet().lookup(&crate::letter::LetterKind::Original("a".into()));
        g.set_succinct_for(a);
        assert_eq!(g.eval_len(Nt(1)).unwrap(), BigUint::from(13u32));
        assert_eq!(g.decompress(Nt(1), 64).unwrap().len(), 13);
        assert!(g.eval_len(Nt(2)).is_err());
    }

    #[test]
    fn first_last_examples() {
        let g = grammar(&[&["a", "b"], &["X1", "c"], &[]]);
        let name = |l: Option<Letter>| l.map(|l| g.alphabet().name(l));
        let (f, l) = g.first_last(Nt(1)).unwrap();
        assert_eq!((name(f), name(l)), (Some("a".into()), Some("b".into())));
        let (f, l) = g.first_last(Nt(2)).unwrap();
        assert_eq!((name(f), name(l)), (Some("a".into()), Some("c".into())));
        assert_eq!(g.first_last(Nt(3)).unwrap(), (None, None));
    }

    #[test]
    fn decompress_examples() {
        let g = grammar(&[&["a", "b"], &["X1", "X1"]]);
        assert_eq!(text(&g, &g.decompress(Nt(2), 16).unwrap()), "abab");
        let g = grammar(&[&["a^3", "b"]]);
        assert_eq!(text(&g, &g.decompress(Nt(1), 16).unwrap()), "aaab");
    }

    #[test]
    fn decompress_respects_cap() {
        // X1 = aa, X(k+1) = Xk Xk: |X29| = 2^29
        let mut rules: Vec<Vec<&str>> = vec![vec!["a", "a"]];
        let names: Vec<String> = (1..29).map(|k| format!("X{k}")).collect();
        for name in &names {
            rules.push(vec![name.as_str(), name.as_str()]);
        }
        let refs: Vec<&[&str]> = rules.iter().map(|r| r.as_slice()).collect();
        let g = grammar(&refs);
        let err = g.decompress(Nt(29), 4096).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                len: BigUint::one() << 29usize,
                cap: 4096
            }
        );
    }

    #[test]
    fn valid_instance_has_empty_report() {
        let g = grammar(&[&["a", "b"], &["c", "X1"], &["$", "X2", "#"]]);
        assert!(check_slp_invariants(&g, &g).is_empty());
    }

    #[test]
    fn forward_reference_is_reported() {
        let g = grammar(&[&["a"], &["X3", "X1"], &["$", "X2", "#"]]);
        let report = check_slp_invariants(&g, &g);
        assert!(report
            .iter()
            .any(|v| v.rule == Rule::Form1b && v.index == Some(2)));
    }

    #[test]
    fn marker_leak_is_reported() {
        let g = grammar(&[&["a"], &["$", "X1"], &["$", "X2", "#"]]);
        let report = check_slp_invariants(&g, &g);
        assert!(report
            .iter()
            .any(|v| v.rule == Rule::Slp3 && v.index == Some(2)));
    }

    #[test]
    fn empty_reference_and_reordering_are_reported() {
        let g = grammar(&[&[], &["a", "X1"], &["$", "X2", "#"]]);
        let report = check_slp_invariants(&g, &g);
        assert!(report.iter().any(|v| v.rule == Rule::Form1c));

        let base = grammar(&[&["a"], &["b"], &["X1", "X2"], &["$", "X3", "#"]]);
        let swapped = grammar(&[&["a"], &["b"], &["X2", "X1"], &["$", "X3", "#"]]);
        let report = check_slp_invariants(&swapped, &base);
        assert!(report
            .iter()
            .any(|v| v.rule == Rule::Slp2 && v.index == Some(3)));
    }

    #[test]
    fn stray_power_is_reported() {
        let g = grammar(&[&["a^4", "b"], &["$", "X1", "#"]]);
        let report = check_slp_invariants(&g, &g);
        assert!(report.iter().any(|v| v.rule == Rule::Succinct));
    }

    #[test]
    fn reachable_walks_down() {
        let g = grammar(&[&["a"], &["b"], &["X1", "c"], &["$", "X3", "#"]]);
        assert_eq!(g.reachable(Nt(4)), vec![Nt(1), Nt(3), Nt(4)]);
    }
}
