//! Line-oriented text formats for grammars, automata and combined instance
//! files. `;` starts a comment (`#` is a marker, not a comment).
//!
//! ```text
//! slp n=4            states 0 1 2 3
//! X1 -> a b          start 0
//! X2 ->              accept 3
//! X3 -> X1 c^3       trans 0 $ 1
//! X4 -> $ X3 #       trans 1 X3 2
//!                    trans 2 # 3
//! ```
//!
//! A grammar without markers is read as plain input and normalized.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::automaton::{Automaton, Label, StateId, Transition};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::letter::{Alphabet, Letter};
use crate::normalize::{normalize_input_accepting, NormalizeOptions};
use crate::slp::{Grammar, Nt, Symbol};

const SEPARATOR: &str = "---";

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Content lines with comments stripped: (1-based line number, text).
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split(';').next().unwrap_or("");
        (!content.trim().is_empty()).then_some((i + 1, content))
    })
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct TokenParser<'a> {
    tok: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl TokenParser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        parse_err(self.line, self.column + self.pos, message)
    }

    fn peek(&self) -> Option<u8> {
        self.tok.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<BigUint> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a decimal number"));
        }
        let digits = std::str::from_utf8(&self.tok[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }

    fn letter(&mut self, alphabet: &mut Alphabet) -> Result<Letter> {
        match self.peek() {
            Some(b'$') => {
                self.pos += 1;
                Ok(Letter::DOLLAR)
            }
            Some(b'#') => {
                self.pos += 1;
                Ok(Letter::HASH)
            }
            Some(b'<') => {
                self.pos += 1;
                let left = self.letter(alphabet)?;
                let letter = match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                        let right = self.letter(alphabet)?;
                        alphabet.pair(left, right).map_err(|e| self.err(e.to_string()))?
                    }
                    Some(b':') => {
                        self.pos += 1;
                        let exp = self.number()?;
                        alphabet.block(left, exp).map_err(|e| self.err(e.to_string()))?
                    }
                    _ => return Err(self.err("expected ',' or ':'")),
                };
                self.expect(b'>')?;
                Ok(letter)
            }
            _ => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.tok[start..self.pos]).expect("ascii name");
                if name.is_empty() {
                    return Err(self.err("expected a letter"));
                }
                alphabet.original(name).map_err(|e| self.err(e.to_string()))
            }
        }
    }
}

fn parse_symbol(tok: &str, line: usize, column: usize, alphabet: &mut Alphabet) -> Result<Symbol> {
    if let Some(digits) = tok.strip_prefix('X') {
        if !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) {
            let index = digits
                .parse()
                .map_err(|_| parse_err(line, column, "nonterminal index out of range"))?;
            return Ok(Symbol::Nt(Nt(index)));
        }
    }
    let mut p = TokenParser {
        tok: tok.as_bytes(),
        pos: 0,
        line,
        column,
    };
    let letter = p.letter(alphabet)?;
    let symbol = if p.peek() == Some(b'^') {
        p.pos += 1;
        let exp = p.number()?;
        if exp.is_zero() {
            return Err(p.err("exponent must be positive"));
        }
        if letter.is_marker() {
            return Err(p.err("markers have no powers"));
        }
        Symbol::power(letter, exp).expect("positive exponent")
    } else {
        Symbol::Letter(letter)
    };
    if p.pos != tok.len() {
        return Err(p.err("unexpected characters"));
    }
    Ok(symbol)
}

fn parse_rules(text: &str, alphabet: &mut Alphabet) -> Result<Vec<Vec<Symbol>>> {
    let mut it = lines(text);
    let (line, header) = it.next().ok_or_else(|| parse_err(1, 1, "empty grammar"))?;
    let n: usize = header
        .trim()
        .strip_prefix("slp")
        .map(str::trim_start)
        .and_then(|rest| rest.strip_prefix("n="))
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| parse_err(line, 1, "expected header 'slp n=<count>'"))?;
    let mut rules: Vec<Option<Vec<Symbol>>> = vec![None; n];
    for (line, content) in it {
        let ws = words(content);
        let Some(&(col, lhs)) = ws.first() else { continue };
        let index: usize = lhs
            .strip_prefix('X')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| parse_err(line, col, "expected a nonterminal 'X<i>'"))?;
        if index == 0 || index > n {
            return Err(parse_err(line, col, format!("X{index} outside 1..={n}")));
        }
        match ws.get(1) {
            Some((_, "->")) => {}
            Some((c, _)) => return Err(parse_err(line, *c, "expected '->'")),
            None => return Err(parse_err(line, col + lhs.len(), "expected '->'")),
        }
        if rules[index - 1].is_some() {
            return Err(parse_err(line, col, format!("second production for X{index}")));
        }
        let rhs = ws[2..]
            .iter()
            .map(|(c, tok)| parse_symbol(tok, line, *c, alphabet))
            .collect::<Result<Vec<_>>>()?;
        rules[index - 1] = Some(rhs);
    }
    rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| Error::MalformedGrammar(format!("missing production for X{}", i + 1))))
        .collect()
}

fn single_base<'a>(bases: impl Iterator<Item = &'a Letter>, what: &str) -> Result<Option<Letter>> {
    let set: BTreeSet<Letter> = bases.copied().collect();
    if set.len() > 1 {
        return Err(Error::precondition(format!("{what} holds powers of more than one letter")));
    }
    Ok(set.into_iter().next())
}

/// Parses a grammar on its own; succinct form is inferred from its powers.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut alphabet = Alphabet::new();
    let rules = parse_rules(text, &mut alphabet)?;
    grammar_from(alphabet, rules)
}

fn grammar_from(alphabet: Alphabet, rules: Vec<Vec<Symbol>>) -> Result<Grammar> {
    let succinct = single_base(
        rules.iter().flatten().filter_map(|s| match s {
            Symbol::Power(a, _) => Some(a),
            _ => None,
        }),
        "grammar",
    )?;
    let mut g = Grammar::new(alphabet, rules);
    g.set_succinct_for(succinct);
    Ok(g)
}

fn parse_state(tok: Option<&(usize, &str)>, line: usize) -> Result<StateId> {
    let &(col, word) = tok.ok_or_else(|| parse_err(line, 1, "expected a state id"))?;
    word.parse()
        .map(StateId)
        .map_err(|_| parse_err(line, col, format!("invalid state id {word:?}")))
}

/// Parses an automaton, interning its letters into `alphabet`.
pub fn parse_automaton(text: &str, alphabet: &mut Alphabet) -> Result<Automaton> {
    parse_automaton_accepting(text, alphabet, false).map(|(aut, _)| aut)
}

/// As [`parse_automaton`]; with `multi`, the accept line may list several
/// states, all returned. The automaton's own accept is the first of them.
fn parse_automaton_accepting(text: &str, alphabet: &mut Alphabet, multi: bool) -> Result<(Automaton, Vec<StateId>)> {
    let mut states = Vec::new();
    let mut start = None;
    let mut accept = None;
    let mut accepts = Vec::new();
    let mut transitions = Vec::new();
    let mut last_line = 1;
    for (line, content) in lines(text) {
        last_line = line;
        let ws = words(content);
        let Some(&(col, keyword)) = ws.first() else { continue };
        match keyword {
            "states" => {
                for i in 1..ws.len() {
                    states.push(parse_state(ws.get(i), line)?);
                }
            }
            "start" | "accept" => {
                let s = parse_state(ws.get(1), line)?;
                let slot = if keyword == "start" { &mut start } else { &mut accept };
                if slot.replace(s).is_some() {
                    return Err(parse_err(line, col, format!("second '{keyword}' line")));
                }
                if keyword == "accept" && multi {
                    accepts.push(s);
                    for i in 2..ws.len() {
                        accepts.push(parse_state(ws.get(i), line)?);
                    }
                } else if ws.len() > 2 {
                    return Err(parse_err(line, ws[2].0, "exactly one state expected"));
                }
            }
            "trans" => {
                if ws.len() != 4 {
                    return Err(parse_err(line, col, "expected 'trans <src> <label> <dst>'"));
                }
                let src = parse_state(ws.get(1), line)?;
                let dst = parse_state(ws.get(3), line)?;
                let label = match parse_symbol(ws[2].1, line, ws[2].0, alphabet)? {
                    Symbol::Letter(l) => Label::Letter(l),
                    Symbol::Power(l, e) => Label::Power(l, e),
                    Symbol::Nt(nt) => Label::Nt(nt),
                };
                transitions.push(Transition::new(src, label, dst));
            }
            other => return Err(parse_err(line, col, format!("unknown keyword {other:?}"))),
        }
    }
    let start = start.ok_or_else(|| parse_err(last_line, 1, "missing 'start' line"))?;
    let accept = accept.ok_or_else(|| parse_err(last_line, 1, "missing 'accept' line"))?;
    let mut aut = Automaton::new(states, start, accept);
    let relaxed = single_base(
        transitions.iter().filter_map(|t| match &t.label {
            Label::Power(a, _) => Some(a),
            _ => None,
        }),
        "automaton",
    )?;
    for t in transitions {
        aut.add(t);
    }
    aut.set_relaxed_for(relaxed);
    if accepts.is_empty() {
        accepts.push(accept);
    }
    Ok((aut, accepts))
}

/// Parses and validates an instance. Grammars without markers are plain
/// input, which may list several accept states, and go through
/// normalization first.
pub fn parse_instance(grammar_text: &str, automaton_text: &str) -> Result<Instance> {
    let mut alphabet = Alphabet::new();
    let rules = parse_rules(grammar_text, &mut alphabet)?;
    let has_markers = rules
        .iter()
        .flatten()
        .any(|s| matches!(s, Symbol::Letter(l) if l.is_marker()));
    let (aut, accepts) = parse_automaton_accepting(automaton_text, &mut alphabet, !has_markers)?;
    let g = grammar_from(alphabet, rules)?;
    if has_markers {
        Instance::new(g, aut)
    } else {
        normalize_input_accepting(&g, &aut, &accepts, NormalizeOptions::default())
    }
}

/// Splits a combined file at its `---` line.
pub fn split_combined(text: &str) -> Result<(&str, &str)> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if line.trim_end() == SEPARATOR {
            return Ok((&text[..offset], &text[offset + line.len()..]));
        }
        offset += line.len();
    }
    Err(parse_err(1, 1, "combined instance needs a '---' separator line"))
}

pub fn parse_combined(text: &str) -> Result<Instance> {
    let (g, a) = split_combined(text)?;
    parse_instance(g, a)
}

pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = format!("slp n={}\n", g.n());
    for nt in g.nts() {
        out.push_str(&g.display_rule(nt));
        out.push('\n');
    }
    out
}

/// Transitions are listed by source, label text and target, so the output
/// does not depend on letter creation order.
pub fn serialize_automaton(a: &Automaton, g: &Grammar) -> String {
    let mut out = String::from("states");
    for s in a.states() {
        let _ = write!(out, " {s}");
    }
    let _ = write!(out, "\nstart {}\naccept {}\n", a.start(), a.accept());
    let mut lines: Vec<(StateId, String, StateId)> = a
        .transitions()
        .iter()
        .map(|t| (t.src, t.label.text(g), t.dst))
        .collect();
    lines.sort();
    for (src, label, dst) in lines {
        let _ = writeln!(out, "trans {src} {label} {dst}");
    }
    out
}

pub fn serialize_instance(inst: &Instance) -> (String, String) {
    (
        serialize_grammar(&inst.grammar),
        serialize_automaton(&inst.automaton, &inst.grammar),
    )
}

pub fn serialize_combined(inst: &Instance) -> String {
    let (g, a) = serialize_instance(inst);
    format!("{g}{SEPARATOR}\n{a}")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Loads `foo.inst`, or `foo.slp` with `automaton` (default: `foo.aut`).
pub fn read_instance(path: &Path, automaton: Option<&Path>) -> Result<Instance> {
    if let Some(aut_path) = automaton {
        return parse_instance(&read(path)?, &read(aut_path)?);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("slp") => {
            let aut_path = path.with_extension("aut");
            parse_instance(&read(path)?, &read(&aut_path)?)
        }
        _ => parse_combined(&read(path)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRAMMAR: &str = "slp n=4\nX1 -> a b\nX2 ->\nX3 -> X1 c X1\nX4 -> $ X3 #\n";
    const AUTOMATON: &str = "states 0 1 2 3 4\nstart 0\naccept 4\ntrans 0 $ 1\ntrans 1 X1 2\ntrans 2 c 3\ntrans 3 X1 3\ntrans 3 # 4\n";

    #[test]
    fn format_examples_parse() {
        let g = parse_grammar(GRAMMAR).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.display_rule(Nt(3)), "X3 -> X1 c X1");
        let err = parse_instance(
            "slp n=4\nX1 -> a\nX2 -> X3\nX3 -> a\nX4 -> $ X3 #\n",
            "states 0 1\nstart 0\naccept 1\ntrans 0 $ 1\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("SLP") || err.to_string().contains("form-1b"), "{err}");
    }

    #[test]
    fn plain_input_may_list_several_accepts() {
        let g = "slp n=1\nX1 -> b\n";
        let aut = "states 0 1 2\nstart 0\naccept 1 2\ntrans 0 a 1\ntrans 0 b 2\n";
        let inst = parse_instance(g, aut).unwrap();
        assert!(crate::oracle::brute_force_accepts(&inst, 64).unwrap());
        let marked = "slp n=4\nX1 -> b\nX2 ->\nX3 -> X1\nX4 -> $ X3 #\n";
        let err = parse_instance(marked, aut).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 10, .. }), "{err}");
    }

    #[test]
    fn forward_reference_in_plain_input() {
        let err = parse_instance("slp n=2\nX1 -> a\nX2 -> X3\n", "states 0\nstart 0\naccept 0\n").unwrap_err();
        assert!(matches!(err, Error::MalformedGrammar(_)), "{err}");
    }

    #[test]
    fn canonical_text_round_trips() {
        // X1 labels two transitions above; give each its own copy
        let aut = "states 0 1 2 3 4\nstart 0\naccept 4\ntrans 0 $ 1\ntrans 1 X1 2\ntrans 2 c 3\ntrans 3 # 4\n";
        let inst = parse_instance(GRAMMAR, aut).unwrap();
        let (g, a) = serialize_instance(&inst);
        assert_eq!(g, GRAMMAR);
        assert_eq!(a, aut);
        let combined = serialize_combined(&inst);
        let again = parse_combined(&combined).unwrap();
        assert_eq!(serialize_combined(&again), combined);
        assert!(parse_instance(GRAMMAR, AUTOMATON).is_err());
    }

    #[test]
    fn compound_letters_and_powers() {
        let text = "slp n=4\nX1 -> <a,b> <<a,b>:3> c^12\nX2 ->\nX3 -> d X1\nX4 -> $ X3 #\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(serialize_grammar(&g), text);
        assert!(g.succinct_for().is_some());
        assert_eq!(g.eval_len(Nt(4)).unwrap(), BigUint::from(17u32));
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_grammar("slp n=1\nX1 -> a <b;c>\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 11)),
            other => panic!("{other}"),
        }
        assert!(parse_grammar("slp n=2\nX1 -> a\n").is_err());
        assert!(parse_grammar("X1 -> a\n").is_err());
    }
}
