//! Turning a plain input pair (grammar with its root last, automaton with a
//! start and an accept state) into an instance with markers, one transition
//! per nonterminal, and no empty nonterminal on any right-hand side.

use std::collections::BTreeMap;

use crate::automaton::{Automaton, Label, StateId, Transition};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::letter::Letter;
use crate::slp::{Grammar, Nt, Symbol};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Unused empty nonterminals are prepended until n reaches this. The main
    /// loop stops once |eval(Xn)| <= n, and eval(Xn) always keeps `$ ... #`,
    /// so n below 4 can leave it spinning on a three-letter string.
    pub min_n: usize,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { min_n: 4 }
    }
}

pub fn normalize_input(g: &Grammar, a: &Automaton) -> Result<Instance> {
    normalize_input_with(g, a, NormalizeOptions::default())
}

/// Normalizes an automaton with several accepting states. Every transition
/// into one of them is copied into a single fresh state, which becomes the
/// accept state; eval(root) is nonempty, so no accepting path is lost.
/// `a.accept()` itself is ignored.
pub fn normalize_input_accepting(
    g: &Grammar,
    a: &Automaton,
    accepts: &[StateId],
    opts: NormalizeOptions,
) -> Result<Instance> {
    match accepts {
        [] => Err(Error::MalformedAutomaton("no accepting state".into())),
        [q] => {
            let mut single = Automaton::new(a.states().iter().copied(), a.start(), *q);
            for t in a.transitions() {
                single.add(t.clone());
            }
            normalize_input_with(g, &single, opts)
        }
        _ => {
            let ids = a.states().iter().chain(accepts).map(|s| s.0).chain([a.start().0]);
            let funnel = StateId(ids.max().unwrap_or(0) + 1);
            let mut merged = Automaton::new(a.states().iter().copied(), a.start(), funnel);
            for t in a.transitions() {
                merged.add(t.clone());
                if accepts.contains(&t.dst) {
                    merged.add(Transition::new(t.src, t.label.clone(), funnel));
                }
            }
            normalize_input_with(g, &merged, opts)
        }
    }
}

pub fn normalize_input_with(g: &Grammar, a: &Automaton, opts: NormalizeOptions) -> Result<Instance> {
    let m = g.n();
    if m == 0 {
        return Err(Error::MalformedGrammar("no productions".into()));
    }
    check_raw_grammar(g)?;
    let root = Nt(m as u32);
    if g.is_empty_nt(root) {
        return Err(Error::MalformedGrammar(format!("root {root} derives the empty string")));
    }

    let mut uses: BTreeMap<Nt, Vec<&Transition>> = BTreeMap::new();
    for t in a.transitions() {
        match &t.label {
            Label::Letter(l) if l.is_marker() => {
                return Err(Error::MalformedAutomaton("input automaton uses an end marker".into()));
            }
            Label::Letter(l) if !g.alphabet().contains(*l) => {
                return Err(Error::MalformedAutomaton(format!("unknown letter id {}", l.id())));
            }
            Label::Letter(_) => {}
            Label::Power(..) => {
                return Err(Error::MalformedAutomaton("input automaton uses a power label".into()));
            }
            Label::Nt(nt) => {
                if nt.0 == 0 || nt.0 as usize > m {
                    return Err(Error::MalformedAutomaton(format!("label {nt} has no production")));
                }
                if g.is_empty_nt(*nt) {
                    return Err(Error::MalformedAutomaton(format!(
                        "label {nt} derives the empty string; empty transitions are unsupported"
                    )));
                }
                uses.entry(*nt).or_default().push(t);
            }
        }
    }

    let copies: usize = uses.values().map(|ts| ts.len() - 1).sum();
    let unpadded = m + copies + 1;
    let pad = opts.min_n.saturating_sub(unpadded);
    let n = unpadded + pad;
    let map = |j: Nt| -> Nt {
        if j == root {
            Nt((n - 1) as u32)
        } else {
            Nt((pad + j.0 as usize) as u32)
        }
    };
    let rewrite = |rhs: &[Symbol]| -> Vec<Symbol> {
        rhs.iter()
            .filter_map(|s| match s {
                Symbol::Nt(j) if g.is_empty_nt(*j) => None,
                Symbol::Nt(j) => Some(Symbol::Nt(map(*j))),
                other => Some(other.clone()),
            })
            .collect()
    };

    let mut rules: Vec<Vec<Symbol>> = vec![Vec::new(); n];
    for (nt, rhs) in g.rules() {
        rules[map(nt).slot()] = rewrite(rhs);
    }
    let mut next_copy = pad + m - 1;
    let mut label_of: BTreeMap<&Transition, Nt> = BTreeMap::new();
    for (nt, ts) in &uses {
        label_of.insert(ts[0], map(*nt));
        for t in &ts[1..] {
            next_copy += 1;
            let copy = Nt(next_copy as u32);
            rules[copy.slot()] = rewrite(g.rule(*nt)?);
            label_of.insert(t, copy);
        }
    }
    rules[n - 1] = vec![
        Symbol::Letter(Letter::DOLLAR),
        Symbol::Nt(Nt((n - 1) as u32)),
        Symbol::Letter(Letter::HASH),
    ];

    let top_id = a
        .states()
        .iter()
        .chain([&a.start(), &a.accept()])
        .map(|s| s.0 + 1)
        .max()
        .unwrap_or(0);
    let (start, accept) = (StateId(top_id), StateId(top_id + 1));
    let mut aut = Automaton::new(a.states().iter().copied(), start, accept);
    for t in a.transitions() {
        let label = match label_of.get(t) {
            Some(nt) => Label::Nt(*nt),
            None => t.label.clone(),
        };
        aut.add(Transition::new(t.src, label, t.dst));
    }
    aut.add(Transition::new(start, Label::Letter(Letter::DOLLAR), a.start()));
    aut.add(Transition::new(a.accept(), Label::Letter(Letter::HASH), accept));

    Instance::new(Grammar::new(g.alphabet().clone(), rules), aut)
}

fn check_raw_grammar(g: &Grammar) -> Result<()> {
    for (nt, rhs) in g.rules() {
        let mut nts = 0;
        for (pos, sym) in rhs.iter().enumerate() {
            match sym {
                Symbol::Power(..) => {
                    return Err(Error::MalformedGrammar(format!("{nt} uses a power")));
                }
                Symbol::Letter(l) if l.is_marker() => {
                    return Err(Error::MalformedGrammar(format!("{nt} uses an end marker")));
                }
                Symbol::Letter(l) if !g.alphabet().contains(*l) => {
                    return Err(Error::MalformedGrammar(format!("unknown letter id {}", l.id())));
                }
                Symbol::Letter(_) => {}
                Symbol::Nt(child) => {
                    if child.0 == 0 || child.0 as usize > g.n() {
                        return Err(Error::MalformedGrammar(format!("{nt} references missing {child}")));
                    }
                    if child.0 >= nt.0 {
                        return Err(Error::MalformedGrammar(format!(
                            "{nt} references {child}: forward reference or cycle"
                        )));
                    }
                    nts += 1;
                    if nts > 2 {
                        return Err(Error::MalformedGrammar(format!("{nt} has more than two nonterminals")));
                    }
                    if nts == 2 && pos + 1 != rhs.len() {
                        return Err(Error::MalformedGrammar(format!(
                            "{nt} has letters after its second nonterminal"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::letter::Alphabet;
    use crate::oracle::brute_force_accepts;

    fn one_letter() -> (Grammar, Letter) {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        (Grammar::new(alphabet, vec![vec![Symbol::Letter(a)]]), a)
    }

    #[test]
    fn wraps_root_and_adds_marker_states() {
        let (g, _) = one_letter();
        let mut aut = Automaton::new([StateId(0), StateId(1)], StateId(0), StateId(1));
        aut.add(Transition::new(StateId(0), Label::Nt(Nt(1)), StateId(1)));
        let inst = normalize_input_with(&g, &aut, NormalizeOptions { min_n: 0 }).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.grammar.display_rule(Nt(2)), "X2 -> $ X1 #");
        assert_eq!(inst.automaton.states().len(), 4);
        assert!(brute_force_accepts(&inst, 64).unwrap());

        let inst = normalize_input(&g, &aut).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.grammar.display_rule(Nt(4)), "X4 -> $ X3 #");
        assert!(inst.violations().is_empty());
    }

    #[test]
    fn shared_label_is_duplicated() {
        let (g, _) = one_letter();
        let mut aut = Automaton::new([StateId(0), StateId(1), StateId(2)], StateId(0), StateId(2));
        aut.add(Transition::new(StateId(0), Label::Nt(Nt(1)), StateId(1)));
        aut.add(Transition::new(StateId(1), Label::Nt(Nt(1)), StateId(2)));
        let inst = normalize_input_with(&g, &aut, NormalizeOptions { min_n: 0 }).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.grammar.rule(Nt(1)).unwrap(), inst.grammar.rule(Nt(2)).unwrap());
        assert_eq!(inst.automaton.nt_labels().count(), 2);
        assert!(inst.violations().is_empty());
    }

    #[test]
    fn empty_references_are_pruned() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        let g = Grammar::new(
            alphabet,
            vec![vec![], vec![Symbol::Letter(a), Symbol::Nt(Nt(1))]],
        );
        let aut = Automaton::new([StateId(0)], StateId(0), StateId(0));
        let inst = normalize_input(&g, &aut).unwrap();
        assert_eq!(inst.grammar.rule(Nt(3)).unwrap(), &[Symbol::Letter(a)]);
    }

    #[test]
    fn several_accepting_states_share_one_hash_target() {
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        let b = alphabet.original("b").unwrap();
        let g = Grammar::new(alphabet, vec![vec![Symbol::Letter(b)]]);
        let mut aut = Automaton::new([StateId(0), StateId(1), StateId(2)], StateId(0), StateId(1));
        aut.add(Transition::new(StateId(0), Label::Letter(a), StateId(1)));
        aut.add(Transition::new(StateId(0), Label::Letter(b), StateId(2)));
        let single = normalize_input(&g, &aut).unwrap();
        assert!(!brute_force_accepts(&single, 64).unwrap());
        let both = normalize_input_accepting(&g, &aut, &[StateId(1), StateId(2)], NormalizeOptions::default()).unwrap();
        assert!(both.violations().is_empty());
        assert!(brute_force_accepts(&both, 64).unwrap());
    }

    #[test]
    fn malformed_inputs() {
        let (g, _) = one_letter();
        let forward = Grammar::new(g.alphabet().clone(), vec![vec![Symbol::Nt(Nt(1))]]);
        let aut = Automaton::new([], StateId(0), StateId(1));
        assert!(matches!(normalize_input(&forward, &aut), Err(Error::MalformedGrammar(_))));
        let empty = Grammar::new(g.alphabet().clone(), vec![vec![]]);
        assert!(matches!(normalize_input(&empty, &aut), Err(Error::MalformedGrammar(_))));
    }
}
