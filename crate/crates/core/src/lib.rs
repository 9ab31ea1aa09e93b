//! Membership of a grammar-compressed string in the language of an automaton
//! whose transitions may themselves carry grammar-compressed labels, decided
//! by recompression without ever expanding the string.
//!
//! An [`Instance`] pairs a [`Grammar`] whose top rule is `Xn -> $ X(n-1) #`
//! with an [`Automaton`] that has a single `$` edge out of its start and a
//! single `#` edge into its accept state. [`decide`] shrinks eval(Xn) until it
//! is at most n letters long and then reads it directly.

pub mod analysis;
pub mod automaton;
pub mod decider;
pub mod error;
pub mod generate;
pub mod instance;
pub mod letter;
pub mod normalize;
pub mod oracle;
pub mod recompression;
pub mod report;
pub mod slp;
pub mod text;
pub mod unary;

pub use automaton::{check_aut_invariants, Automaton, Label, StateId, Transition};
pub use decider::{decide, decide_observed, naive_accept, DecideOptions, Decision, Engine, DEFAULT_CAP};
pub use error::{Error, Result};
pub use generate::{gen_instance, gen_raw, GenParams};
pub use instance::{Instance, NoObserver, Observer, PassDetail, PassEvent, Trace, TraceEvent};
pub use letter::{Alphabet, Letter, LetterKind};
pub use normalize::{normalize_input, normalize_input_accepting, normalize_input_with, NormalizeOptions};
pub use oracle::brute_force_accepts;
pub use report::{Rule, Violation};
pub use slp::{check_slp_invariants, Grammar, Nt, Symbol};
pub use text::{parse_combined, parse_instance, read_instance, serialize_combined};
