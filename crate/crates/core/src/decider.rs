//! The main loop: alternate block and pair compression until eval(Xn) is no
//! longer than n, then read the short string directly.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::analysis::{classify_pairs, is_crossing, is_inner, nonextendible_lengths, outer_letters, pairs_in_eval, PairStatus};
use crate::automaton::{Automaton, Label, StateId};
use crate::error::{Error, Result};
use crate::instance::{Instance, IterationEvent, NoObserver, Observer, PassDetail, PassEvent, Trace, TraceEvent};
use crate::letter::Letter;
use crate::oracle::brute_force_accepts;
use crate::recompression::{compress_blocks_inner_with, compress_crossing_pairs_observed, compress_pair_noncrossing, make_inner, observed};
use crate::slp::{Grammar, Nt};
use crate::unary::UnaryConfig;

pub const DEFAULT_CAP: usize = 1 << 20;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Engine {
    Recompress,
    /// Decompress everything and simulate; for cross-checking.
    Naive,
}

#[derive(Clone, Debug)]
pub struct DecideOptions {
    /// Main-loop ceiling; `None` means 3n + 10.
    pub max_iter: Option<usize>,
    pub unary: UnaryConfig,
    /// Letter budget for any decompression.
    pub cap: usize,
    pub engine: Engine,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            max_iter: None,
            unary: UnaryConfig::default(),
            cap: DEFAULT_CAP,
            engine: Engine::Recompress,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Decision {
    pub accepted: bool,
    pub iterations: usize,
    pub trace: Trace,
    pub final_len: BigUint,
}

pub fn decide(inst: Instance, opts: &DecideOptions) -> Result<Decision> {
    decide_observed(inst, opts, &mut NoObserver)
}

pub fn decide_observed(inst: Instance, opts: &DecideOptions, obs: &mut dyn Observer) -> Result<Decision> {
    inst.validate()?;
    if opts.engine == Engine::Naive {
        let accepted = brute_force_accepts(&inst, opts.cap)?;
        return Ok(Decision {
            accepted,
            iterations: 0,
            final_len: inst.top_len(),
            trace: inst.trace,
        });
    }
    let n = inst.n();
    let limit = opts.max_iter.unwrap_or(3 * n + 10);
    let bound = BigUint::from(n);
    // `$ c #` is as short as eval(Xn) gets
    if n < 3 && inst.top_len() > bound {
        return Err(Error::precondition(format!(
            "eval(X{n}) keeps both markers and one letter, so it never shrinks to {n}; normalize with min_n >= 4"
        )));
    }
    let mut inst = inst;
    let mut iterations = 0;
    while inst.top_len() > bound {
        if iterations == limit {
            return Err(Error::IterationCeiling { limit });
        }
        iterations += 1;
        let before = inst.top_len();
        let mut tracking = Peak {
            inner: obs,
            peak: inst.grammar.max_rhs_len(),
        };
        inst = inner_fixpoint(inst, opts, &mut tracking)?;
        let (next, outer, skipped) = outer_phase(inst, opts, &mut tracking)?;
        inst = next;
        let event = IterationEvent {
            iteration: iterations,
            eval_len_before: before,
            eval_len_after: inst.top_len(),
            outer_letters: outer,
            skipped_crossing: skipped,
            sizes_after: inst.sizes(),
            peak_rhs: tracking.peak,
        };
        obs.on_iteration(&event, &inst);
        inst.trace.events.push(TraceEvent::Iteration(event));
    }
    let accepted = naive_accept(&inst, opts.cap)?;
    Ok(Decision {
        accepted,
        iterations,
        final_len: inst.top_len(),
        trace: inst.trace,
    })
}

struct Peak<'a> {
    inner: &'a mut dyn Observer,
    peak: usize,
}

impl Observer for Peak<'_> {
    fn wants_before(&self) -> bool {
        self.inner.wants_before()
    }

    fn on_pass(&mut self, before: Option<&Instance>, after: &Instance, event: &PassEvent) {
        self.peak = self.peak.max(event.sizes_after.max_rhs);
        self.inner.on_pass(before, after, event);
    }
}

/// Compresses blocks of inner letters and non-crossing pairs of eval(Xn)
/// until a whole sweep replaces nothing.
fn inner_fixpoint(mut inst: Instance, opts: &DecideOptions, obs: &mut dyn Observer) -> Result<Instance> {
    loop {
        let mut replaced = 0;
        let letters: Vec<Letter> = inst
            .alphabet()
            .letters()
            .filter(|l| !l.is_marker())
            .collect();
        for a in letters {
            if !inst.grammar.occurs(a) || !is_inner(&inst.grammar, a) {
                continue;
            }
            let two = BigUint::from(2u32);
            if !nonextendible_lengths(&inst.grammar, a)?.iter().any(|l| *l >= two) {
                continue;
            }
            inst = observed(inst, obs, |i| compress_blocks_inner_with(i, a, &opts.unary))?;
            replaced += inst.trace.last_pass().map_or(0, |e| e.replacements);
        }

        let in_top = pairs_in_eval(&inst.grammar, inst.grammar.top());
        let mut pairs: Vec<(Letter, Letter)> = classify_pairs(&inst.grammar, &inst.automaton)
            .into_iter()
            .filter(|c| c.status == PairStatus::NonCrossing && !c.excluded && in_top.contains(&c.pair))
            .map(|c| c.pair)
            .collect();
        pairs.sort();
        for (a, b) in pairs {
            let live = pairs_in_eval(&inst.grammar, inst.grammar.top()).contains(&(a, b));
            if !live || is_crossing(&inst.grammar, &inst.automaton, a, b) {
                continue;
            }
            inst = observed(inst, obs, |i| compress_pair_noncrossing(i, a, b))?;
            replaced += inst.trace.last_pass().map_or(0, |e| e.replacements);
        }
        if replaced == 0 {
            return Ok(inst);
        }
    }
}

/// Handles the outer letters snapshotted at the start of the phase: make each
/// inner, compress its blocks, then the pairs its blocks start.
fn outer_phase(mut inst: Instance, opts: &DecideOptions, obs: &mut dyn Observer) -> Result<(Instance, usize, usize)> {
    let outer: Vec<Letter> = outer_letters(&inst.grammar)
        .all()
        .into_iter()
        .filter(|l| !l.is_marker())
        .collect();
    let mut skipped = 0;
    for &a in &outer {
        if !inst.grammar.occurs(a) {
            continue;
        }
        if !is_inner(&inst.grammar, a) {
            inst = observed(inst, obs, |i| make_inner(i, a))?;
        }
        inst = observed(inst, obs, |i| compress_blocks_inner_with(i, a, &opts.unary))?;
        let mut blocks = BTreeSet::from([a]);
        if let Some(PassEvent {
            detail: PassDetail::BlockCompression { blocks: created, .. },
            ..
        }) = inst.trace.last_pass()
        {
            blocks.extend(created.iter().map(|(_, c)| *c));
        }
        let (next, s) = compress_crossing_pairs_observed(inst, &blocks, obs)?;
        inst = next;
        skipped += s;
    }
    Ok((inst, outer.len(), skipped))
}

/// Decompresses eval(Xn) and simulates the automaton on it.
pub fn naive_accept(inst: &Instance, cap: usize) -> Result<bool> {
    let word = inst.grammar.decompress(inst.grammar.top(), cap)?;
    Ok(accepts_word(&inst.grammar, &inst.automaton, &word))
}

/// Whether some path from start to accept reads exactly `word`. Nonterminal
/// labels are matched against their evals; labels longer than `word` never
/// match, so nothing beyond `|word|` letters is ever expanded.
pub fn accepts_word(g: &Grammar, aut: &Automaton, word: &[Letter]) -> bool {
    let len = word.len();
    // run[t]: length of the run of word[t] starting at t
    let mut run = vec![0usize; len + 1];
    for t in (0..len).rev() {
        run[t] = if t + 1 < len && word[t + 1] == word[t] { run[t + 1] + 1 } else { 1 };
    }
    let mut matches: HashMap<Nt, Option<Vec<bool>>> = HashMap::new();
    let mut reach: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); len + 1];
    reach[0].insert(aut.start());
    for t in 0..=len {
        let here: Vec<StateId> = reach[t].iter().copied().collect();
        for s in here {
            for tr in aut.outgoing(s) {
                let step = match &tr.label {
                    Label::Letter(x) => (t < len && word[t] == *x).then_some(1),
                    Label::Power(x, k) => k
                        .to_usize()
                        .filter(|&k| t < len && word[t] == *x && run[t] >= k),
                    Label::Nt(nt) => {
                        let table = matches.entry(*nt).or_insert_with(|| occurrences(g, *nt, word));
                        let l = g.eval_len(*nt).ok().and_then(|l| l.to_usize()).unwrap_or(0);
                        table
                            .as_ref()
                            .filter(|m| t < m.len() && m[t])
                            .map(|_| l)
                    }
                };
                if let Some(step) = step {
                    if step > 0 {
                        reach[t + step].insert(tr.dst);
                    }
                }
            }
        }
    }
    reach[len].contains(&aut.accept())
}

fn occurrences(g: &Grammar, nt: Nt, word: &[Letter]) -> Option<Vec<bool>> {
    let u = g.decompress(nt, word.len()).ok()?;
    if u.is_empty() {
        return None;
    }
    let mut out = vec![false; word.len()];
    for (t, window) in word.windows(u.len()).enumerate() {
        out[t] = window == u.as_slice();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Transition;
    use crate::letter::Alphabet;
    use crate::slp::Symbol;

    fn letter(alphabet: &mut Alphabet, tok: &str) -> Letter {
        match tok {
            "$" => Letter::DOLLAR,
            "#" => Letter::HASH,
            t => alphabet.original(t).unwrap(),
        }
    }

    /// A chain automaton spelling `path` against the input `$ word #`.
    fn setup(path: &str, word: &str) -> Instance {
        let mut alphabet = Alphabet::new();
        let path: Vec<Letter> = path.split_whitespace().map(|t| letter(&mut alphabet, t)).collect();
        let word: Vec<Symbol> = word
            .split_whitespace()
            .map(|t| Symbol::Letter(letter(&mut alphabet, t)))
            .collect();
        let mut aut = Automaton::new([], StateId(0), StateId(path.len() as u32));
        for (i, l) in path.iter().enumerate() {
            aut.add(Transition::new(StateId(i as u32), Label::Letter(*l), StateId(i as u32 + 1)));
        }
        let top = vec![Symbol::Letter(Letter::DOLLAR), Symbol::Nt(Nt(3)), Symbol::Letter(Letter::HASH)];
        let g = Grammar::new(alphabet, vec![vec![], vec![], word, top]);
        Instance::new(g, aut).unwrap()
    }

    #[test]
    fn naive_examples() {
        let inst = setup("$ a b #", "a b");
        assert!(naive_accept(&inst, 64).unwrap());
        let inst = setup("$ a b #", "b a");
        assert!(!naive_accept(&inst, 64).unwrap());
    }

    #[test]
    fn short_string_needs_no_iterations() {
        let inst = setup("$ a b #", "a b");
        let d = decide(inst, &DecideOptions::default()).unwrap();
        assert!(d.accepted);
        assert_eq!(d.iterations, 0);
    }

    #[test]
    fn nonterminal_label_spans_its_eval() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        let b = alphabet.original("b").unwrap();
        let g = Grammar::new(
            alphabet,
            vec![
                vec![Symbol::Letter(a), Symbol::Letter(b)],
                vec![],
                vec![Symbol::Letter(a), Symbol::Nt(Nt(1)), Symbol::Letter(b)],
                vec![Symbol::Letter(Letter::DOLLAR), Symbol::Nt(Nt(3)), Symbol::Letter(Letter::HASH)],
            ],
        );
        let mut aut = Automaton::new([], StateId(0), StateId(5));
        aut.add(Transition::new(StateId(0), Label::Letter(Letter::DOLLAR), StateId(1)));
        aut.add(Transition::new(StateId(1), Label::Letter(a), StateId(2)));
        aut.add(Transition::new(StateId(2), Label::Nt(Nt(1)), StateId(3)));
        aut.add(Transition::new(StateId(3), Label::Letter(b), StateId(4)));
        aut.add(Transition::new(StateId(4), Label::Letter(Letter::HASH), StateId(5)));
        let inst = Instance::new(g, aut).unwrap();
        assert!(naive_accept(&inst, 64).unwrap());
        let d = decide(inst, &DecideOptions::default()).unwrap();
        assert!(d.accepted);
    }
}
