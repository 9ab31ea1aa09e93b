//! The instance-rewriting passes. Each consumes an [`Instance`], rewrites the
//! grammar and the automaton together, and appends one [`PassEvent`] to the
//! trace. All of them keep the language question intact: the new automaton
//! accepts the new eval(Xn) iff the old one accepted the old eval(Xn).

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::analysis::{self, is_crossing, is_inner, runs_of};
use crate::automaton::{Label, StateId, Transition};
use crate::error::{Error, Result};
use crate::instance::{Instance, Observer, PassDetail, PassEvent, TraceEvent};
use crate::letter::Letter;
use crate::slp::{Nt, Symbol};
use crate::unary::{restrict_to_letter, targets, OracleStats, UnaryConfig};

struct Tally {
    eval_len_before: BigUint,
    replacements: usize,
    letters_created: Vec<Letter>,
    states_created: Vec<StateId>,
    transitions_added: usize,
    transitions_removed: usize,
    oracle: OracleStats,
}

impl Tally {
    fn start(inst: &Instance) -> Self {
        Tally {
            eval_len_before: inst.top_len(),
            replacements: 0,
            letters_created: Vec::new(),
            states_created: Vec::new(),
            transitions_added: 0,
            transitions_removed: 0,
            oracle: OracleStats::default(),
        }
    }

    fn add(&mut self, inst: &mut Instance, t: Transition) {
        if inst.automaton.add(t) {
            self.transitions_added += 1;
        }
    }

    fn remove(&mut self, inst: &mut Instance, t: &Transition) {
        if inst.automaton.remove(t) {
            self.transitions_removed += 1;
        }
    }

    fn fresh_state(&mut self, inst: &mut Instance) -> StateId {
        let s = inst.automaton.fresh_state();
        self.states_created.push(s);
        s
    }

    fn finish(self, mut inst: Instance, detail: PassDetail) -> Instance {
        let event = PassEvent {
            detail,
            replacements: self.replacements,
            letters_created: self.letters_created,
            states_created: self.states_created,
            transitions_added: self.transitions_added,
            transitions_removed: self.transitions_removed,
            oracle: self.oracle,
            eval_len_before: self.eval_len_before,
            eval_len_after: inst.top_len(),
            sizes_after: inst.sizes(),
        };
        inst.trace.events.push(TraceEvent::Pass(event));
        inst
    }
}

fn require_plain(inst: &Instance) -> Result<()> {
    if inst.grammar.succinct_for().is_some() || inst.automaton.relaxed_for().is_some() {
        return Err(Error::precondition("pass needs a grammar without succinct powers"));
    }
    Ok(())
}

fn require_ordinary(inst: &Instance, letter: Letter) -> Result<()> {
    if letter.is_marker() {
        return Err(Error::precondition("markers are never compressed"));
    }
    if !inst.alphabet().contains(letter) {
        return Err(Error::precondition(format!("unknown letter id {}", letter.id())));
    }
    Ok(())
}

/// Replaces every explicit `ab` by a fresh letter `c` and adds `(p, c, q)`
/// for every two-letter path `p -a-> r -b-> q`.
pub fn compress_pair_noncrossing(mut inst: Instance, a: Letter, b: Letter) -> Result<Instance> {
    require_ordinary(&inst, a)?;
    require_ordinary(&inst, b)?;
    require_plain(&inst)?;
    if a == b {
        return Err(Error::precondition("pair compression needs two different letters"));
    }
    if is_crossing(&inst.grammar, &inst.automaton, a, b) {
        return Err(Error::precondition(format!(
            "pair {}{} is crossing",
            inst.alphabet().name(a),
            inst.alphabet().name(b)
        )));
    }
    let mut tally = Tally::start(&inst);
    let c = inst.grammar.alphabet_mut().fresh_pair(a, b)?;
    tally.letters_created.push(c);

    let nts: Vec<Nt> = inst.grammar.nts().collect();
    for nt in nts {
        let rhs = inst.grammar.rule(nt)?;
        let mut out = Vec::with_capacity(rhs.len());
        let mut hits = 0;
        let mut t = 0;
        while t < rhs.len() {
            if rhs[t] == Symbol::Letter(a) && rhs.get(t + 1) == Some(&Symbol::Letter(b)) {
                out.push(Symbol::Letter(c));
                hits += 1;
                t += 2;
            } else {
                out.push(rhs[t].clone());
                t += 1;
            }
        }
        if hits > 0 {
            tally.replacements += hits;
            inst.grammar.set_rule(nt, out)?;
        }
    }

    let mut new_edges = Vec::new();
    for first in inst.automaton.transitions() {
        if first.label != Label::Letter(a) {
            continue;
        }
        for q in inst.automaton.letter_successors(first.dst, b) {
            new_edges.push(Transition::new(first.src, Label::Letter(c), q));
        }
    }
    for t in new_edges {
        tally.add(&mut inst, t);
    }
    Ok(tally.finish(inst, PassDetail::PairCompression { left: a, right: b, letter: c }))
}

pub fn compress_blocks_inner(inst: Instance, a: Letter) -> Result<Instance> {
    compress_blocks_inner_with(inst, a, &UnaryConfig::default())
}

/// Replaces every maximal run `a^l` with `l >= 2` by a fresh block letter,
/// adds a block edge wherever the automaton can read exactly `a^l`, then
/// drops the power edges and leaves succinct form. Runs of length 1 stay `a`,
/// so the plain `a` edges stay too.
pub fn compress_blocks_inner_with(mut inst: Instance, a: Letter, cfg: &UnaryConfig) -> Result<Instance> {
    require_ordinary(&inst, a)?;
    if inst.grammar.succinct_for().is_some_and(|s| s != a)
        || inst.automaton.relaxed_for().is_some_and(|s| s != a)
    {
        return Err(Error::precondition("succinct form is declared for another letter"));
    }
    if !is_inner(&inst.grammar, a) {
        return Err(Error::precondition(format!(
            "letter {} is outer",
            inst.alphabet().name(a)
        )));
    }
    let mut tally = Tally::start(&inst);
    let lengths: BTreeSet<BigUint> = analysis::nonextendible_lengths(&inst.grammar, a)?
        .into_iter()
        .filter(|l| *l >= BigUint::from(2u32))
        .collect();
    let mut blocks = Vec::with_capacity(lengths.len());
    for l in &lengths {
        let letter = inst.grammar.alphabet_mut().fresh_block(a, l.clone())?;
        tally.letters_created.push(letter);
        blocks.push((l.clone(), letter));
    }
    let block_of = |l: &BigUint| blocks.iter().find(|(x, _)| x == l).map(|(_, c)| *c);

    let nts: Vec<Nt> = inst.grammar.nts().collect();
    for nt in nts {
        let rhs = inst.grammar.rule(nt)?;
        let runs: Vec<_> = runs_of(rhs, a)
            .into_iter()
            .filter(|r| r.len >= BigUint::from(2u32))
            .collect();
        if runs.is_empty() {
            continue;
        }
        let mut out = Vec::with_capacity(rhs.len());
        let mut t = 0;
        for run in &runs {
            out.extend_from_slice(&rhs[t..run.start]);
            out.push(Symbol::Letter(block_of(&run.len).expect("every run length has a block")));
            t = run.end;
        }
        out.extend_from_slice(&rhs[t..]);
        tally.replacements += runs.len();
        inst.grammar.set_rule(nt, out)?;
    }

    let ug = restrict_to_letter(&inst.automaton, a);
    let sources: BTreeSet<StateId> = ug.edges.iter().map(|e| e.0).collect();
    let sinks: BTreeSet<StateId> = ug.edges.iter().map(|e| e.2).collect();
    let mut new_edges = Vec::new();
    if !lengths.is_empty() {
        for &p in &sources {
            let reached = targets(&ug, p, &lengths, sinks.iter().copied(), cfg, &mut tally.oracle);
            for (l, qs) in reached {
                let c = block_of(&l).expect("lengths come from the block table");
                new_edges.extend(qs.into_iter().map(|q| Transition::new(p, Label::Letter(c), q)));
            }
        }
    }
    for t in new_edges {
        tally.add(&mut inst, t);
    }
    let powers: Vec<Transition> = inst
        .automaton
        .transitions()
        .iter()
        .filter(|t| matches!(t.label, Label::Power(base, _) if base == a))
        .cloned()
        .collect();
    for t in &powers {
        tally.remove(&mut inst, t);
    }
    inst.grammar.set_succinct_for(None);
    inst.automaton.set_relaxed_for(None);
    Ok(tally.finish(inst, PassDetail::BlockCompression { base: a, blocks }))
}

fn is_base(sym: &Symbol, a: Letter) -> Option<BigUint> {
    match sym {
        Symbol::Letter(x) if *x == a => Some(BigUint::from(1u32)),
        Symbol::Power(x, e) if *x == a => Some(e.clone()),
        _ => None,
    }
}

/// Pulls the `a`-prefix and `a`-suffix out of every nonterminal, bottom-up,
/// so that afterwards no eval begins or ends with `a`. The popped runs are
/// stored as powers in the parents and on power edges around the labelled
/// transitions; the grammar becomes succinct and the automaton relaxed for `a`.
pub fn make_inner(mut inst: Instance, a: Letter) -> Result<Instance> {
    require_ordinary(&inst, a)?;
    require_plain(&inst)?;
    if is_inner(&inst.grammar, a) {
        return Err(Error::precondition(format!(
            "letter {} is already inner",
            inst.alphabet().name(a)
        )));
    }
    let mut tally = Tally::start(&inst);
    let n = inst.n();
    let mut prefix = vec![BigUint::zero(); n];
    let mut suffix = vec![BigUint::zero(); n];
    let mut empty = vec![false; n];
    let mut popped = Vec::new();

    for i in 0..n {
        let nt = Nt(i as u32 + 1);
        let rhs = inst.grammar.rule(nt)?;
        let mut out: Vec<Symbol> = Vec::with_capacity(rhs.len() + 4);
        for sym in rhs {
            match sym {
                Symbol::Nt(child) => {
                    let j = child.slot();
                    out.extend(Symbol::power(a, prefix[j].clone()));
                    if !empty[j] {
                        out.push(sym.clone());
                    }
                    out.extend(Symbol::power(a, suffix[j].clone()));
                }
                _ => out.push(sym.clone()),
            }
        }
        let lead = out.iter().take_while(|s| is_base(s, a).is_some()).count();
        let lead_len: BigUint = out[..lead].iter().filter_map(|s| is_base(s, a)).sum();
        if lead == out.len() {
            prefix[i] = lead_len;
            out.clear();
        } else {
            let trail = out.iter().rev().take_while(|s| is_base(s, a).is_some()).count();
            let trail_len: BigUint = out[out.len() - trail..]
                .iter()
                .filter_map(|s| is_base(s, a))
                .sum();
            out.truncate(out.len() - trail);
            out.drain(..lead);
            prefix[i] = lead_len;
            suffix[i] = trail_len;
        }
        empty[i] = out.is_empty();
        if !prefix[i].is_zero() || !suffix[i].is_zero() {
            popped.push((nt, prefix[i].clone(), suffix[i].clone()));
        }
        if out.as_slice() != inst.grammar.rule(nt)? {
            tally.replacements += 1;
            inst.grammar.set_rule(nt, out)?;
        }
    }
    inst.grammar.set_succinct_for(Some(a));

    let labelled: Vec<Transition> = inst
        .automaton
        .transitions()
        .iter()
        .filter(|t| matches!(t.label, Label::Nt(_)))
        .cloned()
        .collect();
    for t in labelled {
        let Label::Nt(nt) = t.label else { unreachable!() };
        let i = nt.slot();
        if prefix[i].is_zero() && suffix[i].is_zero() {
            continue;
        }
        tally.remove(&mut inst, &t);
        if empty[i] {
            let label = Label::power(a, prefix[i].clone()).expect("popped run is nonempty");
            tally.add(&mut inst, Transition::new(t.src, label, t.dst));
            continue;
        }
        let p1 = match Label::power(a, prefix[i].clone()) {
            Some(label) => {
                let p1 = tally.fresh_state(&mut inst);
                tally.add(&mut inst, Transition::new(t.src, label, p1));
                p1
            }
            None => t.src,
        };
        let q1 = match Label::power(a, suffix[i].clone()) {
            Some(label) => {
                let q1 = tally.fresh_state(&mut inst);
                tally.add(&mut inst, Transition::new(q1, label, t.dst));
                q1
            }
            None => t.dst,
        };
        tally.add(&mut inst, Transition::new(p1, Label::Nt(nt), q1));
    }
    inst.automaton.set_relaxed_for(Some(a));
    Ok(tally.finish(inst, PassDetail::MakeInner { letter: a, popped }))
}

/// Moves the first letter of every nonterminal below the top out into its
/// parents and in front of its transition. eval(Xn) is unchanged.
pub fn pop_first_letters(mut inst: Instance) -> Result<Instance> {
    require_plain(&inst)?;
    let mut tally = Tally::start(&inst);
    let n = inst.n();
    let mut first: Vec<Option<Letter>> = vec![None; n];
    let mut empty = vec![false; n];
    let mut popped = Vec::new();

    for i in 0..n {
        let nt = Nt(i as u32 + 1);
        let rhs = inst.grammar.rule(nt)?;
        let mut out: Vec<Symbol> = Vec::with_capacity(rhs.len() + 2);
        for sym in rhs {
            match sym {
                Symbol::Nt(child) => {
                    let j = child.slot();
                    out.extend(first[j].map(Symbol::Letter));
                    if !empty[j] {
                        out.push(sym.clone());
                    }
                }
                _ => out.push(sym.clone()),
            }
        }
        if i + 1 < n && !out.is_empty() {
            let Symbol::Letter(f) = out.remove(0) else {
                return Err(Error::precondition("rule starts with a power"));
            };
            first[i] = Some(f);
            popped.push((nt, f));
        }
        empty[i] = out.is_empty();
        if out.as_slice() != inst.grammar.rule(nt)? {
            tally.replacements += 1;
            inst.grammar.set_rule(nt, out)?;
        }
    }

    let labelled: Vec<Transition> = inst
        .automaton
        .transitions()
        .iter()
        .filter(|t| matches!(t.label, Label::Nt(_)))
        .cloned()
        .collect();
    for t in labelled {
        let Label::Nt(nt) = t.label else { unreachable!() };
        let Some(f) = first[nt.slot()] else {
            continue;
        };
        tally.remove(&mut inst, &t);
        if empty[nt.slot()] {
            tally.add(&mut inst, Transition::new(t.src, Label::Letter(f), t.dst));
        } else {
            let p1 = tally.fresh_state(&mut inst);
            tally.add(&mut inst, Transition::new(t.src, Label::Letter(f), p1));
            tally.add(&mut inst, Transition::new(p1, Label::Nt(nt), t.dst));
        }
    }
    Ok(tally.finish(inst, PassDetail::PopFirstLetters { popped }))
}

/// Pops first letters, then compresses every pair `(x, b)` in eval(Xn) whose
/// left letter is one of `blocks`.
pub fn compress_crossing_pairs(inst: Instance, blocks: &BTreeSet<Letter>) -> Result<Instance> {
    let (inst, _) = compress_crossing_pairs_observed(inst, blocks, &mut crate::instance::NoObserver)?;
    Ok(inst)
}

/// As [`compress_crossing_pairs`], reporting every sub-pass to `obs`. Also
/// returns how many candidate pairs were still crossing after the pop and
/// therefore left alone.
pub fn compress_crossing_pairs_observed(
    inst: Instance,
    blocks: &BTreeSet<Letter>,
    obs: &mut dyn Observer,
) -> Result<(Instance, usize)> {
    for &x in blocks {
        require_ordinary(&inst, x)?;
        if !is_inner(&inst.grammar, x) {
            return Err(Error::precondition(format!(
                "block letter {} is outer",
                inst.alphabet().name(x)
            )));
        }
    }
    let mut inst = observed(inst, obs, pop_first_letters)?;
    let candidates: Vec<(Letter, Letter)> = analysis::pairs_in_eval(&inst.grammar, inst.grammar.top())
        .into_iter()
        .filter(|(x, b)| blocks.contains(x) && x != b && !b.is_marker())
        .collect();
    let mut skipped = 0;
    for (x, b) in candidates {
        if is_crossing(&inst.grammar, &inst.automaton, x, b) {
            skipped += 1;
            continue;
        }
        inst = observed(inst, obs, |i| compress_pair_noncrossing(i, x, b))?;
    }
    Ok((inst, skipped))
}

/// Runs one pass and reports it.
pub(crate) fn observed(
    inst: Instance,
    obs: &mut dyn Observer,
    pass: impl FnOnce(Instance) -> Result<Instance>,
) -> Result<Instance> {
    let before = obs.wants_before().then(|| snapshot(&inst));
    let after = pass(inst)?;
    let event = after.trace.last_pass().expect("every pass records an event").clone();
    obs.on_pass(before.as_ref(), &after, &event);
    Ok(after)
}

fn snapshot(inst: &Instance) -> Instance {
    Instance {
        grammar: inst.grammar.clone(),
        automaton: inst.automaton.clone(),
        original: inst.original.clone(),
        trace: Default::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::letter::Alphabet;
    use crate::slp::Grammar;
    use crate::automaton::Automaton;

    /// Builds an instance from rules written as token lists; `Xn` is wrapped
    /// by the caller. Automaton edges use the same tokens.
    struct Build {
        alphabet: Alphabet,
    }

    impl Build {
        fn new() -> Self {
            Build {
                alphabet: Alphabet::new(),
            }
        }

        fn sym(&mut self, tok: &str) -> Symbol {
            match tok {
                "$" => Symbol::Letter(Letter::DOLLAR),
                "#" => Symbol::Letter(Letter::HASH),
                t if t.starts_with('X') => Symbol::Nt(Nt(t[1..].parse().unwrap())),
                t => Symbol::Letter(self.alphabet.original(t).unwrap()),
            }
        }

        fn label(&mut self, tok: &str) -> Label {
            match self.sym(tok) {
                Symbol::Letter(l) => Label::Letter(l),
                Symbol::Nt(nt) => Label::Nt(nt),
                Symbol::Power(..) => unreachable!(),
            }
        }

        fn instance(mut self, rules: &[&str], edges: &[(u32, &str, u32)], start: u32, accept: u32) -> Instance {
            let rules: Vec<Vec<Symbol>> = rules
                .iter()
                .map(|r| r.split_whitespace().map(|t| self.sym(t)).collect())
                .collect();
            let edges: Vec<Transition> = edges
                .iter()
                .map(|(s, tok, d)| Transition::new(StateId(*s), self.label(tok), StateId(*d)))
                .collect();
            let g = Grammar::new(self.alphabet, rules);
            let mut aut = Automaton::new([], StateId(start), StateId(accept));
            for t in edges {
                aut.add(t);
            }
            Instance::new(g, aut).unwrap()
        }
    }

    fn text(inst: &Instance, nt: u32) -> String {
        let g = &inst.grammar;
        g.decompress(Nt(nt), 1 << 16)
            .unwrap()
            .iter()
            .map(|l| g.alphabet().name(*l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn letter(inst: &Instance, name: &str) -> Letter {
        inst.alphabet()
            .lookup(&crate::letter::LetterKind::Original(name.into()))
            .unwrap()
    }

    fn chain(word: &str) -> Vec<(u32, String, u32)> {
        let toks: Vec<&str> = word.split_whitespace().collect();
        toks.iter()
            .enumerate()
            .map(|(i, t)| (i as u32, t.to_string(), i as u32 + 1))
            .collect()
    }

    fn simple(rules: &[&str], word: &str) -> Instance {
        let edges = chain(word);
        let refs: Vec<(u32, &str, u32)> = edges.iter().map(|(s, t, d)| (*s, t.as_str(), *d)).collect();
        let accept = refs.len() as u32;
        Build::new().instance(rules, &refs, 0, accept)
    }

    #[test]
    fn pair_compression_examples() {
        let inst = simple(&["", "", "a b a b", "$ X3 #"], "$ a b a b #");
        let (a, b) = (letter(&inst, "a"), letter(&inst, "b"));
        let out = compress_pair_noncrossing(inst, a, b).unwrap();
        assert_eq!(text(&out, 3), "<a,b> <a,b>");
        assert!(out.violations().is_empty());
        let ev = out.trace.last_pass().unwrap();
        assert_eq!(ev.replacements, 2);
        assert_eq!(ev.transitions_added, 2);

        let inst = simple(&["", "", "a a b", "$ X3 #"], "$ a a b #");
        let (a, b) = (letter(&inst, "a"), letter(&inst, "b"));
        let out = compress_pair_noncrossing(inst, a, b).unwrap();
        assert_eq!(text(&out, 3), "a <a,b>");
    }

    #[test]
    fn crossing_pair_is_refused() {
        let inst = simple(&["a b", "", "c X1", "$ X3 #"], "$ c a b #");
        let (c, a) = (letter(&inst, "c"), letter(&inst, "a"));
        assert!(matches!(
            compress_pair_noncrossing(inst, c, a),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn block_compression_examples() {
        let inst = simple(&["", "", "b a a a b", "$ X3 #"], "$ b a a a b #");
        let a = letter(&inst, "a");
        let out = compress_blocks_inner(inst, a).unwrap();
        assert_eq!(text(&out, 3), "b <a:3> b");
        let block = out.alphabet().lookup(&crate::letter::LetterKind::Block(a, 3u32.into())).unwrap();
        // the three a-edges 2->3->4->5 now have a shortcut
        assert!(out
            .automaton
            .transitions()
            .contains(&Transition::new(StateId(2), Label::Letter(block), StateId(5))));
        assert!(out.violations().is_empty());
    }

    #[test]
    fn make_inner_examples() {
        let inst = Build::new().instance(
            &["a a b a", "", "c X1 c", "$ X3 #"],
            &[(0, "$", 1), (1, "X1", 2), (2, "#", 3)],
            0,
            3,
        );
        let a = letter(&inst, "a");
        let out = make_inner(inst, a).unwrap();
        assert_eq!(text(&out, 1), "b");
        assert_eq!(text(&out, 3), "c a a b a c");
        assert_eq!(out.grammar.rule(Nt(1)).unwrap().len(), 1);
        assert!(out.violations().is_empty());
        let ts = out.automaton.transitions();
        assert_eq!(ts.len(), 5);
        assert!(ts.iter().any(|t| t.label == Label::Power(a, 2u32.into()) && t.src == StateId(1)));
        assert!(ts.iter().any(|t| t.label == Label::Letter(a) && t.dst == StateId(2)));
        assert!(ts.iter().any(|t| t.label == Label::Nt(Nt(1))));
    }

    #[test]
    fn make_inner_pure_power_vanishes() {
        let inst = Build::new().instance(
            &["a a a a a", "", "b X1 b", "$ X3 #"],
            &[(0, "$", 1), (1, "X1", 2), (2, "#", 3)],
            0,
            3,
        );
        let a = letter(&inst, "a");
        let out = make_inner(inst, a).unwrap();
        assert!(out.grammar.rule(Nt(1)).unwrap().is_empty());
        assert_eq!(
            out.grammar.rule(Nt(3)).unwrap()[1],
            Symbol::Power(a, 5u32.into())
        );
        assert!(out
            .automaton
            .transitions()
            .contains(&Transition::new(StateId(1), Label::Power(a, 5u32.into()), StateId(2))));
        assert!(out.violations().is_empty());
    }

    #[test]
    fn pop_examples() {
        let inst = Build::new().instance(
            &["a b", "", "c X1", "$ X3 #"],
            &[(0, "$", 1), (1, "X3", 2), (2, "#", 3)],
            0,
            3,
        );
        let out = pop_first_letters(inst).unwrap();
        assert_eq!(text(&out, 1), "b");
        assert_eq!(text(&out, 3), "a b");
        assert_eq!(text(&out, 4), "$ c a b #");
        assert!(out.violations().is_empty());

        let inst = Build::new().instance(
            &["a", "", "b X1", "$ X3 #"],
            &[(0, "$", 1), (1, "X1", 2), (2, "#", 3)],
            0,
            3,
        );
        let a = letter(&inst, "a");
        let out = pop_first_letters(inst).unwrap();
        assert!(out.grammar.rule(Nt(1)).unwrap().is_empty());
        assert!(out.automaton.nt_transitions(Nt(1)).is_empty());
        assert!(out
            .automaton
            .transitions()
            .contains(&Transition::new(StateId(1), Label::Letter(a), StateId(2))));
        assert!(out.violations().is_empty());
    }
}
