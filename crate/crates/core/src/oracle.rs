//! Reference answer by full decompression.

use crate::decider::accepts_word;
use crate::error::Result;
use crate::instance::Instance;

/// Expands eval(Xn) under `cap` letters and simulates the automaton on it.
/// Refuses with `BudgetExceeded` rather than attempting a larger expansion.
pub fn brute_force_accepts(inst: &Instance, cap: usize) -> Result<bool> {
    let word = inst.grammar.decompress(inst.grammar.top(), cap)?;
    Ok(accepts_word(&inst.grammar, &inst.automaton, &word))
}
