//! Seeded random instances for corpora and demos.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{Automaton, Label, StateId, Transition};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::letter::{Alphabet, Letter};
use crate::normalize::normalize_input;
use crate::slp::{Grammar, Nt, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    /// Nonterminals of the normalized instance, at least 4.
    pub n: usize,
    pub alphabet_size: usize,
    pub state_count: usize,
    pub max_rhs_len: usize,
    /// eval(Xn), markers included, stays within 2^this.
    pub target_eval_len_log2: u32,
    /// Keep first letters of outgoing labels distinct at every state.
    pub deterministic: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            n: 6,
            alphabet_size: 3,
            state_count: 4,
            max_rhs_len: 4,
            target_eval_len_log2: 12,
            deterministic: false,
        }
    }
}

pub fn letter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("l{i}")
    }
}

/// Plain input before normalization: root is the last nonterminal, every
/// nonterminal labels at most one transition.
pub fn gen_raw(p: &GenParams) -> Result<(Grammar, Automaton)> {
    if p.n < 4 || p.alphabet_size == 0 || p.state_count == 0 || p.max_rhs_len < 2 {
        return Err(Error::precondition(
            "need n >= 4, a nonempty alphabet, at least one state and max_rhs_len >= 2",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut alphabet = Alphabet::new();
    let letters: Vec<Letter> = (0..p.alphabet_size)
        .map(|i| alphabet.original(&letter_name(i)))
        .collect::<Result<_>>()?;
    let m = p.n - 1;
    let budget = (BigUint::one() << p.target_eval_len_log2 as usize)
        .to_u64()
        .unwrap_or(u64::MAX)
        .saturating_sub(2)
        .max(1);

    let mut rules: Vec<Vec<Symbol>> = Vec::with_capacity(m);
    let mut lens: Vec<u64> = Vec::with_capacity(m);
    for i in 0..m {
        let is_root = i + 1 == m;
        if i > 0 && !is_root && rng.gen_range(0..20) == 0 {
            rules.push(Vec::new());
            lens.push(0);
            continue;
        }
        // mostly two children, so evals roughly double along the chain
        let want_nts = match i {
            0 => 0,
            _ if is_root => 2,
            _ => [0, 1, 1, 2, 2, 2, 2, 2][rng.gen_range(0..8)],
        };
        let mut rhs = Vec::new();
        let mut len = 0u64;
        let mut slots = p.max_rhs_len;
        let mut nts = Vec::new();
        for _ in 0..want_nts {
            let j = if rng.gen_bool(0.7) { i - 1 } else { rng.gen_range(0..i) };
            if len + lens[j] < budget {
                nts.push(j);
                len += lens[j];
                slots -= 1;
            }
        }
        let letter_count = if slots == 0 {
            0
        } else {
            let lo = usize::from(nts.is_empty() || is_root);
            let hi = slots.min(budget.saturating_sub(len) as usize).max(lo);
            // skewed towards full right-hand sides
            rng.gen_range(lo..=hi).max(rng.gen_range(lo..=hi))
        };
        let mut explicit: Vec<Symbol> = (0..letter_count)
            .map(|_| Symbol::Letter(*letters.choose(&mut rng).unwrap()))
            .collect();
        len += letter_count as u64;
        // form u Xj v Xk: letters never follow the second nonterminal
        match nts.as_slice() {
            [] => rhs.append(&mut explicit),
            [j] => {
                let cut = rng.gen_range(0..=explicit.len());
                rhs.extend(explicit.drain(..cut));
                rhs.push(Symbol::Nt(Nt(*j as u32 + 1)));
                rhs.append(&mut explicit);
            }
            [j, k] => {
                let cut = rng.gen_range(0..=explicit.len());
                rhs.extend(explicit.drain(..cut));
                rhs.push(Symbol::Nt(Nt(*j as u32 + 1)));
                rhs.append(&mut explicit);
                rhs.push(Symbol::Nt(Nt(*k as u32 + 1)));
            }
            _ => unreachable!(),
        }
        rules.push(rhs);
        lens.push(len);
    }
    if lens[m - 1] == 0 {
        rules[m - 1].insert(0, Symbol::Letter(letters[0]));
    }
    let g = Grammar::new(alphabet, rules);

    let states: Vec<StateId> = (0..p.state_count as u32).map(StateId).collect();
    let mut b = AutBuilder {
        aut: Automaton::new(states.clone(), StateId(0), StateId(p.state_count as u32 - 1)),
        used_first: HashSet::new(),
        labelled: HashSet::new(),
        deterministic: p.deterministic,
        states,
    };
    for &s in &b.states.clone() {
        for &a in &letters {
            if rng.gen_bool(0.3) {
                let d = *b.states.choose(&mut rng).unwrap();
                b.try_add(&g, Transition::new(s, Label::Letter(a), d));
            }
        }
    }
    for nt in g.nts() {
        if !g.is_empty_nt(nt) && rng.gen_bool(0.25) {
            let s = *b.states.choose(&mut rng).unwrap();
            let d = *b.states.choose(&mut rng).unwrap();
            b.try_add(&g, Transition::new(s, Label::Nt(nt), d));
        }
    }
    if rng.gen_bool(0.5) {
        if let Some(end) = b.plant(&g, &mut rng, StateId(0), &Symbol::Nt(g.top())) {
            let mut aut = Automaton::new(b.aut.states().iter().copied(), StateId(0), end);
            for t in b.aut.transitions() {
                aut.add(t.clone());
            }
            b.aut = aut;
        }
    }
    Ok((g, b.aut))
}

struct AutBuilder {
    aut: Automaton,
    used_first: HashSet<(StateId, Letter)>,
    labelled: HashSet<Nt>,
    deterministic: bool,
    states: Vec<StateId>,
}

impl AutBuilder {
    fn try_add(&mut self, g: &Grammar, t: Transition) -> bool {
        let Some(first) = t.label.first(g) else {
            return false;
        };
        if let Label::Nt(nt) = t.label {
            if self.labelled.contains(&nt) {
                return false;
            }
        }
        if self.deterministic && self.used_first.contains(&(t.src, first)) {
            return false;
        }
        if let Label::Nt(nt) = t.label {
            self.labelled.insert(nt);
        }
        self.used_first.insert((t.src, first));
        self.aut.add(t);
        true
    }

    /// Adds edges so that a path spelling eval(`sym`) leaves `at`; returns
    /// where it ends, or `None` if a deterministic automaton blocks it.
    fn plant(&mut self, g: &Grammar, rng: &mut ChaCha8Rng, at: StateId, sym: &Symbol) -> Option<StateId> {
        match sym {
            Symbol::Letter(a) => {
                let existing: Vec<StateId> = self.aut.letter_successors(at, *a).collect();
                if self.deterministic {
                    if let Some(&d) = existing.first() {
                        return Some(d);
                    }
                    if self.used_first.contains(&(at, *a)) {
                        return None;
                    }
                } else if !existing.is_empty() && rng.gen_bool(0.7) {
                    return existing.choose(rng).copied();
                }
                let d = *self.states.choose(rng).unwrap();
                self.try_add(g, Transition::new(at, Label::Letter(*a), d));
                Some(d)
            }
            Symbol::Nt(nt) => {
                if g.is_empty_nt(*nt) {
                    return Some(at);
                }
                if *nt != g.top() && rng.gen_bool(0.25) {
                    let d = *self.states.choose(rng).unwrap();
                    if self.try_add(g, Transition::new(at, Label::Nt(*nt), d)) {
                        return Some(d);
                    }
                }
                let rhs = g.rule(*nt).ok()?.to_vec();
                let mut cur = at;
                for s in &rhs {
                    cur = self.plant(g, rng, cur, s)?;
                }
                Some(cur)
            }
            Symbol::Power(..) => None,
        }
    }
}

/// Generates and normalizes; deterministic in `p.seed`.
pub fn gen_instance(p: &GenParams) -> Result<Instance> {
    let (g, a) = gen_raw(p)?;
    normalize_input(&g, &a)
}
