//! Automata whose transitions read a letter, a succinct letter power, or the
//! whole string derived by a nonterminal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::letter::Letter;
use crate::report::{Rule, Violation};
use crate::slp::{Grammar, Nt};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StateId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Letter(Letter),
    /// `base^exponent`, exponent at least 2; only in relaxed automata.
    Power(Letter, BigUint),
    Nt(Nt),
}

impl Label {
    pub fn power(base: Letter, exponent: BigUint) -> Option<Label> {
        if exponent.is_zero() {
            None
        } else if exponent.is_one() {
            Some(Label::Letter(base))
        } else {
            Some(Label::Power(base, exponent))
        }
    }

    /// First letter of the string the label reads.
    pub fn first(&self, g: &Grammar) -> Option<Letter> {
        match self {
            Label::Letter(a) | Label::Power(a, _) => Some(*a),
            Label::Nt(nt) => g.first(*nt),
        }
    }

    pub fn last(&self, g: &Grammar) -> Option<Letter> {
        match self {
            Label::Letter(a) | Label::Power(a, _) => Some(*a),
            Label::Nt(nt) => g.last(*nt),
        }
    }

    pub fn text(&self, g: &Grammar) -> String {
        match self {
            Label::Letter(a) => g.alphabet().name(*a),
            Label::Power(a, e) => format!("{}^{}", g.alphabet().name(*a), e),
            Label::Nt(nt) => nt.to_string(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Transition {
    pub src: StateId,
    pub label: Label,
    pub dst: StateId,
}

impl Transition {
    pub fn new(src: StateId, label: Label, dst: StateId) -> Self {
        Transition { src, label, dst }
    }
}

#[derive(Clone, Debug)]
pub struct Automaton {
    states: BTreeSet<StateId>,
    transitions: BTreeSet<Transition>,
    by_nt: BTreeMap<Nt, Vec<Transition>>,
    start: StateId,
    accept: StateId,
    relaxed_for: Option<Letter>,
}

impl Automaton {
    pub fn new(states: impl IntoIterator<Item = StateId>, start: StateId, accept: StateId) -> Self {
        let mut states: BTreeSet<StateId> = states.into_iter().collect();
        states.insert(start);
        states.insert(accept);
        Automaton {
            states,
            transitions: BTreeSet::new(),
            by_nt: BTreeMap::new(),
            start,
            accept,
            relaxed_for: None,
        }
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn relaxed_for(&self) -> Option<Letter> {
        self.relaxed_for
    }

    pub fn set_relaxed_for(&mut self, letter: Option<Letter>) {
        self.relaxed_for = letter;
    }

    pub fn add_state(&mut self, state: StateId) {
        self.states.insert(state);
    }

    /// Allocates a state id not used so far.
    pub fn fresh_state(&mut self) -> StateId {
        let next = self.states.iter().next_back().map_or(0, |s| s.0 + 1);
        let state = StateId(next);
        self.states.insert(state);
        state
    }

    /// Returns `true` when the transition was not present before.
    pub fn add(&mut self, t: Transition) -> bool {
        self.states.insert(t.src);
        self.states.insert(t.dst);
        if let Label::Nt(nt) = t.label {
            if !self.transitions.contains(&t) {
                self.by_nt.entry(nt).or_default().push(t.clone());
            }
        }
        self.transitions.insert(t)
    }

    pub fn remove(&mut self, t: &Transition) -> bool {
        let removed = self.transitions.remove(t);
        if removed {
            if let Label::Nt(nt) = t.label {
                if let Some(v) = self.by_nt.get_mut(&nt) {
                    v.retain(|x| x != t);
                    if v.is_empty() {
                        self.by_nt.remove(&nt);
                    }
                }
            }
        }
        removed
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Transition) -> bool) -> usize {
        let doomed: Vec<Transition> = self
            .transitions
            .iter()
            .filter(|t| !keep(t))
            .cloned()
            .collect();
        for t in &doomed {
            self.remove(t);
        }
        doomed.len()
    }

    /// Transitions labelled by `nt` (at most one in a valid instance).
    pub fn nt_transitions(&self, nt: Nt) -> &[Transition] {
        self.by_nt.get(&nt).map_or(&[], Vec::as_slice)
    }

    pub fn nt_labels(&self) -> impl Iterator<Item = Nt> + '_ {
        self.by_nt.keys().copied()
    }

    pub fn outgoing(&self, p: StateId) -> impl Iterator<Item = &Transition> {
        let lo = Transition::new(p, Label::Letter(Letter(0)), StateId(0));
        self.transitions
            .range(lo..)
            .take_while(move |t| t.src == p)
    }

    pub fn letter_successors(&self, p: StateId, letter: Letter) -> impl Iterator<Item = StateId> + '_ {
        self.outgoing(p).filter_map(move |t| match t.label {
            Label::Letter(a) if a == letter => Some(t.dst),
            _ => None,
        })
    }

    /// Whether a path of letter transitions only spells `word` from `p` to `q`.
    pub fn letter_path_exists(&self, p: StateId, word: &[Letter], q: StateId) -> bool {
        let mut current: BTreeSet<StateId> = BTreeSet::from([p]);
        for &letter in word {
            current = current
                .iter()
                .flat_map(|&s| self.letter_successors(s, letter))
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.contains(&q)
    }

    /// No state has two outgoing labels that begin with the same letter.
    pub fn is_deterministic(&self, g: &Grammar) -> bool {
        let mut seen: HashMap<(StateId, Letter), ()> = HashMap::new();
        for t in &self.transitions {
            let Some(first) = t.label.first(g) else {
                continue;
            };
            if seen.insert((t.src, first), ()).is_some() {
                return false;
            }
        }
        true
    }
}

/// Lists every violation of Aut 1-2 (modulo the declared relaxation) and of
/// the instance-level label constraints.
pub fn check_aut_invariants(a: &Automaton, g: &Grammar) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = g.n() as u32;
    // Powers are prefixes or suffixes of evals, so the longest eval bounds
    // them even when explicit letters push it past 2^n.
    let longest = g.eval_lens().iter().max().cloned().unwrap_or_default();
    let limit = std::cmp::max(BigUint::one() << g.n(), longest);
    for t in &a.transitions {
        if !a.states.contains(&t.src) || !a.states.contains(&t.dst) {
            out.push(Violation::new(Rule::Instance, None, "transition uses unknown state"));
        }
        match &t.label {
            Label::Letter(l) => {
                if !g.alphabet().contains(*l) {
                    out.push(Violation::new(Rule::Instance, None, "unknown letter on a transition"));
                }
            }
            Label::Power(base, e) => {
                if a.relaxed_for != Some(*base) {
                    out.push(Violation::new(
                        Rule::Aut1,
                        None,
                        format!(
                            "power label {}^{} on an automaton not relaxed for it",
                            g.alphabet().name(*base),
                            e
                        ),
                    ));
                }
                if *e < BigUint::from(2u32) || *e > limit {
                    out.push(Violation::new(
                        Rule::Aut1,
                        None,
                        format!("power exponent {e} outside [2, {limit}]"),
                    ));
                }
            }
            Label::Nt(nt) => {
                if nt.0 == n {
                    out.push(Violation::new(Rule::Aut1, Some(nt.0), "transition labelled by the top nonterminal"));
                } else if nt.0 == 0 || nt.0 > n {
                    out.push(Violation::new(Rule::Instance, Some(nt.0), "label references a nonexistent nonterminal"));
                } else if g.is_empty_nt(*nt) {
                    out.push(Violation::new(Rule::Instance, Some(nt.0), "label derives the empty string"));
                }
            }
        }
    }
    for (nt, ts) in &a.by_nt {
        if ts.len() > 1 {
            out.push(Violation::new(
                Rule::Aut1,
                Some(nt.0),
                format!("{nt} labels {} transitions", ts.len()),
            ));
        }
    }

    let dollar = Label::Letter(Letter::DOLLAR);
    let hash = Label::Letter(Letter::HASH);
    let from_start: Vec<&Transition> = a.outgoing(a.start).collect();
    if from_start.len() != 1 || from_start[0].label != dollar {
        out.push(Violation::new(
            Rule::Aut2,
            None,
            "start state must have exactly one outgoing transition, by $",
        ));
    }
    let into_accept: Vec<&Transition> = a.transitions.iter().filter(|t| t.dst == a.accept).collect();
    if into_accept.len() != 1 || into_accept[0].label != hash {
        out.push(Violation::new(
            Rule::Aut2,
            None,
            "accept state must have exactly one incoming transition, by #",
        ));
    }
    if a.transitions.iter().any(|t| t.dst == a.start) {
        out.push(Violation::new(Rule::Aut2, None, "start state has incoming transitions"));
    }
    if a.outgoing(a.accept).next().is_some() {
        out.push(Violation::new(Rule::Aut2, None, "accept state has outgoing transitions"));
    }
    if a.start == a.accept {
        out.push(Violation::new(Rule::Aut2, None, "start and accept states coincide"));
    }
    let dollars = a.transitions.iter().filter(|t| t.label == dollar).count();
    let hashes = a.transitions.iter().filter(|t| t.label == hash).count();
    if dollars > 1 {
        out.push(Violation::new(Rule::Aut2, None, "$ labels more than one transition"));
    }
    if hashes > 1 {
        out.push(Violation::new(Rule::Aut2, None, "# labels more than one transition"));
    }
    out
}
