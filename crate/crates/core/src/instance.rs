//! The grammar/automaton pair every pass rewrites, plus the trace it carries.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::automaton::{check_aut_invariants, Automaton, StateId};
use crate::error::{Error, Result};
use crate::letter::{Alphabet, Letter};
use crate::report::{render, Violation};
use crate::slp::{check_slp_invariants, Grammar, Nt};
use crate::unary::OracleStats;

#[derive(Clone, Debug)]
pub struct Instance {
    pub grammar: Grammar,
    pub automaton: Automaton,
    /// Baseline for SLP 2, fixed when the instance is first validated.
    pub original: Grammar,
    pub trace: Trace,
}

impl Instance {
    /// Validates both invariant sets and makes `grammar` the baseline.
    pub fn new(grammar: Grammar, automaton: Automaton) -> Result<Self> {
        let inst = Instance {
            original: grammar.clone(),
            grammar,
            automaton,
            trace: Trace::default(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = check_slp_invariants(&self.grammar, &self.original);
        out.extend(check_aut_invariants(&self.automaton, &self.grammar));
        out
    }

    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invariants(render(&violations)))
        }
    }

    pub fn n(&self) -> usize {
        self.grammar.n()
    }

    pub fn top_len(&self) -> BigUint {
        self.grammar
            .eval_len(self.grammar.top())
            .expect("instances have at least one nonterminal")
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.grammar.alphabet()
    }

    pub fn sizes(&self) -> Sizes {
        Sizes {
            grammar: self.grammar.size(),
            max_rhs: self.grammar.max_rhs_len(),
            states: self.automaton.states().len(),
            transitions: self.automaton.transitions().len(),
            alphabet: self.grammar.alphabet().len(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sizes {
    pub grammar: usize,
    pub max_rhs: usize,
    pub states: usize,
    pub transitions: usize,
    pub alphabet: usize,
}

impl Sizes {
    fn to_json(self) -> Value {
        json!({
            "grammar": self.grammar,
            "max_rhs": self.max_rhs,
            "states": self.states,
            "transitions": self.transitions,
            "alphabet": self.alphabet,
        })
    }
}

/// What a pass did, in terms precise enough to replay it at string level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PassDetail {
    PairCompression {
        left: Letter,
        right: Letter,
        letter: Letter,
    },
    BlockCompression {
        base: Letter,
        /// Run length and the block letter replacing it; runs of length 1 stay.
        blocks: Vec<(BigUint, Letter)>,
    },
    MakeInner {
        letter: Letter,
        /// (nonterminal, popped prefix length, popped suffix length).
        popped: Vec<(Nt, BigUint, BigUint)>,
    },
    PopFirstLetters {
        /// First letter taken off each nonterminal below the top.
        popped: Vec<(Nt, Letter)>,
    },
}

impl PassDetail {
    pub fn name(&self) -> &'static str {
        match self {
            PassDetail::PairCompression { .. } => "compress_pair_noncrossing",
            PassDetail::BlockCompression { .. } => "compress_blocks_inner",
            PassDetail::MakeInner { .. } => "make_inner",
            PassDetail::PopFirstLetters { .. } => "pop_first_letters",
        }
    }

    fn params(&self, alphabet: &Alphabet) -> Value {
        match self {
            PassDetail::PairCompression {
                left,
                right,
                letter,
            } => json!({
                "left": alphabet.name(*left),
                "right": alphabet.name(*right),
                "letter": alphabet.name(*letter),
            }),
            PassDetail::BlockCompression { base, blocks } => json!({
                "base": alphabet.name(*base),
                "blocks": blocks
                    .iter()
                    .map(|(l, c)| json!([l.to_string(), alphabet.name(*c)]))
                    .collect::<Vec<_>>(),
            }),
            PassDetail::MakeInner { letter, popped } => json!({
                "letter": alphabet.name(*letter),
                "popped": popped
                    .iter()
                    .map(|(nt, l, r)| json!([nt.0, l.to_string(), r.to_string()]))
                    .collect::<Vec<_>>(),
            }),
            PassDetail::PopFirstLetters { popped } => json!({
                "popped": popped
                    .iter()
                    .map(|(nt, l)| json!([nt.0, alphabet.name(*l)]))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassEvent {
    pub detail: PassDetail,
    /// Explicit rhs replacements; zero means the pass changed nothing in the grammar.
    pub replacements: usize,
    pub letters_created: Vec<Letter>,
    pub states_created: Vec<StateId>,
    pub transitions_added: usize,
    pub transitions_removed: usize,
    pub oracle: OracleStats,
    pub eval_len_before: BigUint,
    pub eval_len_after: BigUint,
    pub sizes_after: Sizes,
}

impl PassEvent {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "event": "pass",
            "pass": self.detail.name(),
            "params": self.detail.params(alphabet),
            "replacements": self.replacements,
            "letters_created": self
                .letters_created
                .iter()
                .map(|l| alphabet.name(*l))
                .collect::<Vec<_>>(),
            "states_created": self.states_created.iter().map(|s| s.0).collect::<Vec<_>>(),
            "transitions_added": self.transitions_added,
            "transitions_removed": self.transitions_removed,
            "oracle_calls": self.oracle.calls,
            "oracle_strategies": {
                "dense_dp": self.oracle.dense_dp,
                "cycle_search": self.oracle.cycle_search,
                "deterministic": self.oracle.deterministic,
            },
            "eval_len_before": self.eval_len_before.to_string(),
            "eval_len_after": self.eval_len_after.to_string(),
            "sizes": self.sizes_after.to_json(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationEvent {
    /// 1-based main-loop iteration.
    pub iteration: usize,
    pub eval_len_before: BigUint,
    pub eval_len_after: BigUint,
    pub outer_letters: usize,
    /// Crossing (block, letter) pairs left alone after popping.
    pub skipped_crossing: usize,
    pub sizes_after: Sizes,
    /// Largest rhs seen at any pass boundary inside the iteration.
    pub peak_rhs: usize,
}

impl IterationEvent {
    pub fn to_json(&self) -> Value {
        json!({
            "event": "iteration",
            "iteration": self.iteration,
            "eval_len_before": self.eval_len_before.to_string(),
            "eval_len_after": self.eval_len_after.to_string(),
            "outer_letters": self.outer_letters,
            "skipped_crossing": self.skipped_crossing,
            "peak_rhs": self.peak_rhs,
            "sizes": self.sizes_after.to_json(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Pass(PassEvent),
    Iteration(IterationEvent),
}

impl TraceEvent {
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        match self {
            TraceEvent::Pass(e) => e.to_json(alphabet),
            TraceEvent::Iteration(e) => e.to_json(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub fn passes(&self) -> impl Iterator<Item = &PassEvent> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Pass(p) => Some(p),
            _ => None,
        })
    }

    pub fn iterations(&self) -> impl Iterator<Item = &IterationEvent> {
        self.events.iter().filter_map(|e| match e {
            TraceEvent::Iteration(i) => Some(i),
            _ => None,
        })
    }

    pub fn last_pass(&self) -> Option<&PassEvent> {
        self.passes().last()
    }

    /// One JSON object per line, letters named through `alphabet`.
    pub fn to_json_lines(&self, alphabet: &Alphabet) -> String {
        self.events
            .iter()
            .map(|e| e.to_json(alphabet).to_string() + "\n")
            .collect()
    }
}

/// Hooks into a running pipeline. `before` is only supplied when
/// [`Observer::wants_before`] asks for it, since it costs a clone per pass.
pub trait Observer {
    fn wants_before(&self) -> bool {
        false
    }

    fn on_pass(&mut self, _before: Option<&Instance>, _after: &Instance, _event: &PassEvent) {}

    fn on_iteration(&mut self, _event: &IterationEvent, _inst: &Instance) {}
}

/// Observer that ignores everything.
pub struct NoObserver;

impl Observer for NoObserver {}
