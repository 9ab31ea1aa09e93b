//! Letter and pair classification.
//!
//! A letter is left-outer when it begins some eval(Xi) and right-outer when it
//! ends one; every other letter is inner. A pair `ab` with `a != b` is crossing
//! when some occurrence of it straddles a boundary that involves a
//! nonterminal, either inside a production or at a state where two
//! consecutive transitions meet and at least one of them is a nonterminal.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::automaton::{Automaton, Label, StateId};
use crate::error::{Error, Result};
use crate::letter::Letter;
use crate::slp::{Grammar, Nt, Symbol};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OuterReport {
    pub left_outer: BTreeSet<Letter>,
    pub right_outer: BTreeSet<Letter>,
}

impl OuterReport {
    pub fn is_outer(&self, letter: Letter) -> bool {
        self.left_outer.contains(&letter) || self.right_outer.contains(&letter)
    }

    pub fn all(&self) -> BTreeSet<Letter> {
        self.left_outer.union(&self.right_outer).copied().collect()
    }
}

pub fn outer_letters(g: &Grammar) -> OuterReport {
    let mut report = OuterReport::default();
    for nt in g.nts() {
        if let Ok((Some(first), Some(last))) = g.first_last(nt) {
            report.left_outer.insert(first);
            report.right_outer.insert(last);
        }
    }
    report
}

pub fn is_inner(g: &Grammar, letter: Letter) -> bool {
    g.nts()
        .all(|nt| g.first(nt) != Some(letter) && g.last(nt) != Some(letter))
}

fn sym_first(g: &Grammar, sym: &Symbol) -> Option<Letter> {
    match sym {
        Symbol::Letter(a) | Symbol::Power(a, _) => Some(*a),
        Symbol::Nt(nt) => g.first(*nt),
    }
}

fn sym_last(g: &Grammar, sym: &Symbol) -> Option<Letter> {
    match sym {
        Symbol::Letter(a) | Symbol::Power(a, _) => Some(*a),
        Symbol::Nt(nt) => g.last(*nt),
    }
}

/// Adjacent pairs contributed by one production: explicit neighbours, the
/// inside of a power, and the boundaries with child nonterminals.
fn rule_pairs(g: &Grammar, rhs: &[Symbol], out: &mut BTreeSet<(Letter, Letter)>) {
    let mut prev: Option<Letter> = None;
    for sym in rhs {
        let (Some(first), Some(last)) = (sym_first(g, sym), sym_last(g, sym)) else {
            continue;
        };
        if let Some(p) = prev {
            out.insert((p, first));
        }
        if let Symbol::Power(a, e) = sym {
            if *e > BigUint::one() {
                out.insert((*a, *a));
            }
        }
        prev = Some(last);
    }
}

/// Every ordered pair of adjacent letters occurring in some eval(Xi).
pub fn pairs_in_evals(g: &Grammar) -> BTreeSet<(Letter, Letter)> {
    let mut out = BTreeSet::new();
    for (_, rhs) in g.rules() {
        rule_pairs(g, rhs, &mut out);
    }
    out
}

/// Adjacent pairs occurring in eval(`nt`).
pub fn pairs_in_eval(g: &Grammar, nt: Nt) -> BTreeSet<(Letter, Letter)> {
    let mut out = BTreeSet::new();
    for child in g.reachable(nt) {
        if let Ok(rhs) = g.rule(child) {
            rule_pairs(g, rhs, &mut out);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Boundary between symbols `offset` and `offset + 1` of the production for `nt`.
    Rule { nt: u32, offset: usize },
    /// Two consecutive transitions meeting at `state`, at least one by a nonterminal.
    Junction { state: u32 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatus {
    Crossing,
    NonCrossing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub pair: (Letter, Letter),
    pub status: PairStatus,
    pub witnesses: Vec<Witness>,
    /// Contains `$` or `#`; never handed to pair compression.
    pub excluded: bool,
}

/// All crossing occurrences of pairs of different letters, keyed by pair.
pub fn crossing_occurrences(
    g: &Grammar,
    aut: &Automaton,
) -> BTreeMap<(Letter, Letter), Vec<Witness>> {
    let mut out: BTreeMap<(Letter, Letter), Vec<Witness>> = BTreeMap::new();
    for (nt, rhs) in g.rules() {
        for (offset, w) in rhs.windows(2).enumerate() {
            if w[0].as_nt().is_none() && w[1].as_nt().is_none() {
                continue;
            }
            if let (Some(x), Some(y)) = (sym_last(g, &w[0]), sym_first(g, &w[1])) {
                if x != y {
                    out.entry((x, y))
                        .or_default()
                        .push(Witness::Rule { nt: nt.0, offset });
                }
            }
        }
    }
    let mut incoming: BTreeMap<StateId, Vec<&Label>> = BTreeMap::new();
    for t in aut.transitions() {
        incoming.entry(t.dst).or_default().push(&t.label);
    }
    for (state, ins) in &incoming {
        for out_t in aut.outgoing(*state) {
            for in_label in ins {
                let involves_nt =
                    matches!(in_label, Label::Nt(_)) || matches!(out_t.label, Label::Nt(_));
                if !involves_nt {
                    continue;
                }
                if let (Some(x), Some(y)) = (in_label.last(g), out_t.label.first(g)) {
                    if x != y {
                        let w = Witness::Junction { state: state.0 };
                        let entry = out.entry((x, y)).or_default();
                        if !entry.contains(&w) {
                            entry.push(w);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn is_crossing(g: &Grammar, aut: &Automaton, a: Letter, b: Letter) -> bool {
    crossing_occurrences(g, aut).contains_key(&(a, b))
}

/// Classifies every pair of different letters occurring in some eval(Xi).
pub fn classify_pairs(g: &Grammar, aut: &Automaton) -> Vec<PairClass> {
    let crossing = crossing_occurrences(g, aut);
    pairs_in_evals(g)
        .into_iter()
        .filter(|(a, b)| a != b)
        .map(|pair| {
            let witnesses = crossing.get(&pair).cloned().unwrap_or_default();
            PairClass {
                pair,
                status: if witnesses.is_empty() {
                    PairStatus::NonCrossing
                } else {
                    PairStatus::Crossing
                },
                witnesses,
                excluded: pair.0.is_marker() || pair.1.is_marker(),
            }
        })
        .collect()
}

/// Lengths of maximal runs `x a^l y` (`x != a != y`) across all evals. Since
/// `a` is inner, every such run is an explicit stretch of a right-hand side.
pub fn nonextendible_lengths(g: &Grammar, a: Letter) -> Result<BTreeSet<BigUint>> {
    if !is_inner(g, a) {
        return Err(Error::precondition(format!(
            "letter {} is outer",
            g.alphabet().name(a)
        )));
    }
    let mut out = BTreeSet::new();
    for (_, rhs) in g.rules() {
        for run in runs_of(rhs, a) {
            out.insert(run.len);
        }
    }
    Ok(out)
}

/// A maximal stretch of `a`-letters and `a`-powers in a right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Run {
    pub start: usize,
    pub end: usize,
    pub len: BigUint,
}

pub(crate) fn runs_of(rhs: &[Symbol], a: Letter) -> Vec<Run> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < rhs.len() {
        if rhs[i].base() != Some(a) {
            i += 1;
            continue;
        }
        let start = i;
        let mut len = BigUint::zero();
        while i < rhs.len() && rhs[i].base() == Some(a) {
            match &rhs[i] {
                Symbol::Letter(_) => len += 1u32,
                Symbol::Power(_, e) => len += e,
                Symbol::Nt(_) => unreachable!(),
            }
            i += 1;
        }
        if !len.is_zero() {
            runs.push(Run { start, end: i, len });
        }
    }
    runs
}
