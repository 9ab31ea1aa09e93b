//! Exact walk-length queries on the part of an automaton that reads a single
//! letter.
//!
//! Three procedures answer "is there a walk p -> q of total weight exactly l":
//! a bitset table over partial weights for moderate l, arithmetic on the
//! unique walk when every state has at most one outgoing edge, and a
//! structural search over simple paths and simple cycles for everything else.
//!
//! The structural search rests on the decomposition of a walk into a simple
//! path plus simple cycles whose union is connected. It explores "skeletons":
//! a simple path p -> q together with cycles that each touch the states
//! covered so far and add at least one new one. Once the covered set V is
//! fixed, any simple cycle inside V can be added any number of times, so the
//! remaining weight must lie in the numerical semigroup generated by those
//! cycle weights.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::automaton::{Automaton, Label, StateId};
use crate::letter::Letter;

pub const DEFAULT_DP_THRESHOLD: u64 = 1 << 14;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnaryGraph {
    pub states: BTreeSet<StateId>,
    pub edges: BTreeSet<(StateId, BigUint, StateId)>,
}

impl UnaryGraph {
    pub fn add_edge(&mut self, src: StateId, weight: BigUint, dst: StateId) {
        assert!(!weight.is_zero(), "unary edges have positive weight");
        self.states.insert(src);
        self.states.insert(dst);
        self.edges.insert((src, weight, dst));
    }

    /// Every state has at most one outgoing edge.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|(src, _, _)| seen.insert(*src))
    }
}

/// Keeps the transitions reading `letter` (weight 1) or `letter^k` (weight k).
pub fn restrict_to_letter(a: &Automaton, letter: Letter) -> UnaryGraph {
    let mut ug = UnaryGraph::default();
    for t in a.transitions() {
        match &t.label {
            Label::Letter(l) if *l == letter => ug.add_edge(t.src, BigUint::one(), t.dst),
            Label::Power(l, e) if *l == letter && !e.is_zero() => {
                ug.add_edge(t.src, e.clone(), t.dst)
            }
            _ => {}
        }
    }
    ug
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    DenseDp,
    CycleSearch,
    /// Only valid on deterministic graphs; falls back to `Auto` otherwise.
    Deterministic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct UnaryConfig {
    pub strategy: Strategy,
    pub dp_threshold: u64,
}

impl Default for UnaryConfig {
    fn default() -> Self {
        UnaryConfig {
            strategy: Strategy::Auto,
            dp_threshold: DEFAULT_DP_THRESHOLD,
        }
    }
}

/// Oracle usage, one call per (p, q, l) decision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OracleStats {
    pub calls: usize,
    pub dense_dp: usize,
    pub cycle_search: usize,
    pub deterministic: usize,
}

impl OracleStats {
    pub fn absorb(&mut self, other: OracleStats) {
        self.calls += other.calls;
        self.dense_dp += other.dense_dp;
        self.cycle_search += other.cycle_search;
        self.deterministic += other.deterministic;
    }
}

pub fn a_path_exists(ug: &UnaryGraph, p: StateId, q: StateId, len: &BigUint, strategy: Strategy) -> bool {
    let cfg = UnaryConfig {
        strategy,
        ..UnaryConfig::default()
    };
    a_path_exists_with(ug, p, q, len, &cfg)
}

pub fn a_path_exists_with(
    ug: &UnaryGraph,
    p: StateId,
    q: StateId,
    len: &BigUint,
    cfg: &UnaryConfig,
) -> bool {
    let lens = BTreeSet::from([len.clone()]);
    let mut stats = OracleStats::default();
    targets(ug, p, &lens, [q], cfg, &mut stats)
        .get(len)
        .is_some_and(|qs| qs.contains(&q))
}

/// For each length in `lens`, the states among `candidates` reachable from `p`
/// by a walk of exactly that weight.
pub fn targets(
    ug: &UnaryGraph,
    p: StateId,
    lens: &BTreeSet<BigUint>,
    candidates: impl IntoIterator<Item = StateId>,
    cfg: &UnaryConfig,
    stats: &mut OracleStats,
) -> BTreeMap<BigUint, BTreeSet<StateId>> {
    let candidates: BTreeSet<StateId> = candidates.into_iter().collect();
    let mut out: BTreeMap<BigUint, BTreeSet<StateId>> = BTreeMap::new();
    let lens: Vec<&BigUint> = lens.iter().filter(|l| !l.is_zero()).collect();
    if lens.is_empty() || candidates.is_empty() {
        return out;
    }
    let calls = lens.len() * candidates.len();
    stats.calls += calls;

    let deterministic = ug.is_deterministic();
    let use_walk = match cfg.strategy {
        Strategy::Deterministic | Strategy::Auto => deterministic,
        _ => false,
    };
    if use_walk {
        stats.deterministic += calls;
        let walk = UniqueWalk::from(ug, p);
        for len in lens {
            let hits: BTreeSet<StateId> = candidates
                .iter()
                .copied()
                .filter(|q| walk.reaches(*q, len))
                .collect();
            out.insert(len.clone(), hits);
        }
        return out;
    }

    let threshold = BigUint::from(cfg.dp_threshold);
    let (small, large): (Vec<&BigUint>, Vec<&BigUint>) = match cfg.strategy {
        Strategy::DenseDp => (lens, Vec::new()),
        Strategy::CycleSearch => (Vec::new(), lens),
        _ => lens.into_iter().partition(|l| **l <= threshold),
    };
    if !small.is_empty() {
        stats.dense_dp += small.len() * candidates.len();
        let targets: Vec<u64> = small
            .iter()
            .map(|l| l.to_u64().expect("dense table length fits u64"))
            .collect();
        for (len, reached) in dense_dp(ug, p, &targets) {
            let hits = reached.intersection(&candidates).copied().collect();
            out.insert(BigUint::from(len), hits);
        }
    }
    if !large.is_empty() {
        stats.cycle_search += large.len() * candidates.len();
        let mut search = CycleSearch::new(ug);
        for len in large {
            let hits = candidates
                .iter()
                .copied()
                .filter(|q| search.exists(p, *q, len))
                .collect();
            out.insert(len.clone(), hits);
        }
    }
    out
}

/// Reachable states at each requested exact weight, via a ring buffer of
/// bitsets over partial weights.
pub fn dense_dp(ug: &UnaryGraph, p: StateId, lens: &[u64]) -> BTreeMap<u64, BTreeSet<StateId>> {
    let mut out = BTreeMap::new();
    let Some(&max_len) = lens.iter().max() else {
        return out;
    };
    let mut all = ug.states.clone();
    all.insert(p);
    let names: Vec<StateId> = all.into_iter().collect();
    let index: HashMap<StateId, usize> = names.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let edges: Vec<(usize, u64, usize)> = ug
        .edges
        .iter()
        .filter_map(|(s, w, d)| {
            let w = w.to_u64()?;
            (w <= max_len).then(|| (index[s], w, index[d]))
        })
        .collect();
    let words = index.len().div_ceil(64);
    let ring = edges.iter().map(|e| e.1).max().unwrap_or(0) as usize + 1;
    let mut table = vec![vec![0u64; words]; ring];
    let wanted: BTreeSet<u64> = lens.iter().copied().collect();
    let start = index[&p];
    table[0][start / 64] |= 1 << (start % 64);
    if wanted.contains(&0) {
        out.insert(0, BTreeSet::from([p]));
    }
    let mut live_until = 0u64;
    for t in 1..=max_len {
        let slot = (t % ring as u64) as usize;
        let mut row = vec![0u64; words];
        let mut any = false;
        for &(s, w, d) in &edges {
            if w > t {
                continue;
            }
            let prev = ((t - w) % ring as u64) as usize;
            if table[prev][s / 64] >> (s % 64) & 1 == 1 {
                row[d / 64] |= 1 << (d % 64);
                any = true;
            }
        }
        if any {
            live_until = t;
        }
        if wanted.contains(&t) {
            let reached = (0..names.len())
                .filter(|&i| row[i / 64] >> (i % 64) & 1 == 1)
                .map(|i| names[i])
                .collect();
            out.insert(t, reached);
        }
        table[slot] = row;
        // a full ring of empty rows means nothing is reachable any more
        if t - live_until >= ring as u64 {
            for &l in wanted.range(t + 1..) {
                out.insert(l, BTreeSet::new());
            }
            break;
        }
    }
    out
}

/// The unique maximal walk from a state of a deterministic unary graph.
struct UniqueWalk {
    /// States in visiting order with the weight read on arrival.
    steps: Vec<(StateId, BigUint)>,
    /// Index in `steps` where the cycle starts, and its total weight.
    cycle: Option<(usize, BigUint)>,
}

impl UniqueWalk {
    fn from(ug: &UnaryGraph, p: StateId) -> Self {
        let next: HashMap<StateId, (&BigUint, StateId)> =
            ug.edges.iter().map(|(s, w, d)| (*s, (w, *d))).collect();
        let mut steps = vec![(p, BigUint::zero())];
        let mut pos: HashMap<StateId, usize> = HashMap::from([(p, 0)]);
        let mut current = p;
        loop {
            let Some(&(w, d)) = next.get(&current) else {
                return UniqueWalk { steps, cycle: None };
            };
            let total = &steps.last().unwrap().1 + w;
            if let Some(&mu) = pos.get(&d) {
                let cycle_weight = total - &steps[mu].1;
                return UniqueWalk {
                    steps,
                    cycle: Some((mu, cycle_weight)),
                };
            }
            pos.insert(d, steps.len());
            steps.push((d, total));
            current = d;
        }
    }

    fn reaches(&self, q: StateId, len: &BigUint) -> bool {
        let Some(k) = self.steps.iter().position(|(s, _)| *s == q) else {
            return false;
        };
        let arrive = &self.steps[k].1;
        match &self.cycle {
            Some((mu, c)) if k >= *mu => len >= arrive && ((len - arrive) % c).is_zero(),
            _ => len == arrive,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Mask(Box<[u64]>);

impl Mask {
    fn empty(bits: usize) -> Self {
        Mask(vec![0; bits.div_ceil(64).max(1)].into_boxed_slice())
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn union(&self, other: &Mask) -> Mask {
        Mask(self.0.iter().zip(other.0.iter()).map(|(a, b)| a | b).collect())
    }

    fn intersects(&self, other: &Mask) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    fn is_subset(&self, other: &Mask) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }
}

/// Skeleton search over simple paths and simple cycles. Cycles are
/// enumerated once per graph and reused across queries.
pub struct CycleSearch {
    index: HashMap<StateId, usize>,
    out: Vec<Vec<(BigUint, usize)>>,
    cycles: Vec<(Mask, BigUint)>,
    semigroups: HashMap<Mask, Semigroup>,
}

impl CycleSearch {
    pub fn new(ug: &UnaryGraph) -> Self {
        let index: HashMap<StateId, usize> =
            ug.states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut out = vec![Vec::new(); index.len()];
        for (s, w, d) in &ug.edges {
            out[index[s]].push((w.clone(), index[d]));
        }
        let mut search = CycleSearch {
            index,
            out,
            cycles: Vec::new(),
            semigroups: HashMap::new(),
        };
        search.cycles = search.simple_cycles();
        search
    }

    fn bits(&self) -> usize {
        self.out.len()
    }

    /// Simple cycles as (state set, weight), deduplicated; each is rooted at
    /// its smallest state index.
    fn simple_cycles(&self) -> Vec<(Mask, BigUint)> {
        let mut found = HashSet::new();
        for root in 0..self.bits() {
            let mut mask = Mask::empty(self.bits());
            mask.set(root);
            self.cycles_from(root, root, &mut mask, BigUint::zero(), &mut found);
        }
        let mut cycles: Vec<(Mask, BigUint)> = found.into_iter().collect();
        cycles.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0 .0.cmp(&b.0 .0)));
        cycles
    }

    fn cycles_from(
        &self,
        root: usize,
        at: usize,
        mask: &mut Mask,
        weight: BigUint,
        found: &mut HashSet<(Mask, BigUint)>,
    ) {
        for (w, next) in &self.out[at] {
            let total = &weight + w;
            if *next == root {
                found.insert((mask.clone(), total));
            } else if *next > root && !mask.get(*next) {
                mask.set(*next);
                self.cycles_from(root, *next, mask, total, found);
                mask.0[*next / 64] &= !(1 << (*next % 64));
            }
        }
    }

    fn simple_paths(&self, p: usize, q: usize) -> HashSet<(Mask, BigUint)> {
        let mut found = HashSet::new();
        let mut mask = Mask::empty(self.bits());
        mask.set(p);
        if p == q {
            found.insert((mask, BigUint::zero()));
            return found;
        }
        self.paths_from(p, q, &mut mask, BigUint::zero(), &mut found);
        found
    }

    fn paths_from(
        &self,
        at: usize,
        q: usize,
        mask: &mut Mask,
        weight: BigUint,
        found: &mut HashSet<(Mask, BigUint)>,
    ) {
        for (w, next) in &self.out[at] {
            if mask.get(*next) {
                continue;
            }
            let total = &weight + w;
            mask.set(*next);
            if *next == q {
                found.insert((mask.clone(), total));
            } else {
                self.paths_from(*next, q, mask, total, found);
            }
            mask.0[*next / 64] &= !(1 << (*next % 64));
        }
    }

    pub fn exists(&mut self, p: StateId, q: StateId, len: &BigUint) -> bool {
        let (Some(&pi), Some(&qi)) = (self.index.get(&p), self.index.get(&q)) else {
            return false;
        };
        let mut queue: VecDeque<(Mask, BigUint)> = VecDeque::new();
        let mut seen: HashSet<(Mask, BigUint)> = HashSet::new();
        for skeleton in self.simple_paths(pi, qi) {
            if skeleton.1 <= *len && seen.insert(skeleton.clone()) {
                queue.push_back(skeleton);
            }
        }
        while let Some((mask, base)) = queue.pop_front() {
            if self.completes(&mask, &(len - &base)) {
                return true;
            }
            for (cmask, cw) in &self.cycles {
                if !cmask.intersects(&mask) || cmask.is_subset(&mask) {
                    continue;
                }
                let b = &base + cw;
                if b > *len {
                    continue;
                }
                let next = (mask.union(cmask), b);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        false
    }

    fn completes(&mut self, mask: &Mask, rest: &BigUint) -> bool {
        if rest.is_zero() {
            return true;
        }
        if !self.semigroups.contains_key(mask) {
            let gens = self
                .cycles
                .iter()
                .filter(|(c, _)| c.is_subset(mask))
                .map(|(_, w)| w.clone())
                .collect();
            self.semigroups.insert(mask.clone(), Semigroup::new(gens));
        }
        self.semigroups[mask].contains(rest)
    }
}

const RESIDUE_TABLE_LIMIT: u64 = 1 << 22;

/// Membership in the additive monoid generated by a finite set of positive
/// integers.
#[derive(Clone, Debug)]
pub struct Semigroup {
    /// Generators divided by their gcd, ascending, deduplicated.
    gens: Vec<BigUint>,
    gcd: BigUint,
    /// Smallest member in each residue class modulo `gens[0]`.
    table: Option<Vec<Option<u128>>>,
}

impl Semigroup {
    pub fn new(mut gens: Vec<BigUint>) -> Self {
        gens.retain(|g| !g.is_zero());
        gens.sort();
        gens.dedup();
        let gcd = gens
            .iter()
            .fold(BigUint::zero(), |acc, g| acc.gcd(g));
        if !gcd.is_zero() {
            for g in &mut gens {
                *g /= &gcd;
            }
        }
        let table = residue_table(&gens);
        Semigroup { gens, gcd, table }
    }

    pub fn contains(&self, d: &BigUint) -> bool {
        if d.is_zero() {
            return true;
        }
        if self.gens.is_empty() || !(d % &self.gcd).is_zero() {
            return false;
        }
        let d = d / &self.gcd;
        let m = &self.gens[0];
        if m.is_one() {
            return true;
        }
        let big_m = self.gens.last().unwrap();
        // every integer from (m-1)(M-1) on is representable once gcd is 1
        if d >= (m - 1u32) * (big_m - 1u32) {
            return true;
        }
        if let Some(table) = &self.table {
            let r = (&d % m).to_usize().unwrap();
            return match (table[r], d.to_u128()) {
                (Some(least), Some(d)) => least <= d,
                (Some(_), None) => true,
                (None, _) => false,
            };
        }
        let mut desc: Vec<&BigUint> = self.gens.iter().filter(|g| **g <= d).collect();
        desc.reverse();
        bounded_search(&d, &desc)
    }
}

fn residue_table(gens: &[BigUint]) -> Option<Vec<Option<u128>>> {
    let m = gens.first()?.to_u64()?;
    if m > RESIDUE_TABLE_LIMIT || gens.iter().any(|g| g.bits() > 64) {
        return None;
    }
    let gens: Vec<u128> = gens.iter().map(|g| g.to_u128().unwrap()).collect();
    let m = m as usize;
    let mut dist: Vec<Option<u128>> = vec![None; m];
    dist[0] = Some(0);
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(std::cmp::Reverse((0u128, 0usize)));
    while let Some(std::cmp::Reverse((d, r))) = heap.pop() {
        if dist[r] != Some(d) {
            continue;
        }
        for &g in &gens[1..] {
            let nd = d + g;
            let nr = ((r as u128 + g) % m as u128) as usize;
            if dist[nr].is_none_or(|old| nd < old) {
                dist[nr] = Some(nd);
                heap.push(std::cmp::Reverse((nd, nr)));
            }
        }
    }
    Some(dist)
}

/// Descending search over multiplicities, pruned by the gcd of the
/// generators still available; two generators are solved in closed form.
fn bounded_search(d: &BigUint, desc: &[&BigUint]) -> bool {
    if d.is_zero() {
        return true;
    }
    match desc {
        [] => false,
        [g] => (d % *g).is_zero(),
        [x, y] => two_generators(d, x, y),
        [g, rest @ ..] => {
            let h = rest.iter().fold(BigUint::zero(), |acc, r| acc.gcd(*r));
            let mut c = d / *g;
            loop {
                let remainder = d - &c * *g;
                if (&remainder % &h).is_zero() && bounded_search(&remainder, rest) {
                    return true;
                }
                if c.is_zero() {
                    return false;
                }
                c -= 1u32;
            }
        }
    }
}

fn two_generators(d: &BigUint, x: &BigUint, y: &BigUint) -> bool {
    let g = x.gcd(y);
    if !(d % &g).is_zero() {
        return false;
    }
    let (x, y, d) = (x / &g, y / &g, d / &g);
    if y.is_one() || x.is_one() {
        return true;
    }
    // smallest c with c*x = d (mod y)
    let inv = (&x % &y).modinv(&y).expect("coprime after division");
    let c = (&d % &y) * inv % &y;
    c * x <= d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn graph(edges: &[(u32, u64, u32)]) -> UnaryGraph {
        let mut ug = UnaryGraph::default();
        for &(s, w, d) in edges {
            ug.add_edge(StateId(s), big(w), StateId(d));
        }
        ug
    }

    fn all(ug: &UnaryGraph, p: u32, q: u32, len: u64) -> [bool; 3] {
        [Strategy::DenseDp, Strategy::CycleSearch, Strategy::Auto]
            .map(|s| a_path_exists(ug, StateId(p), StateId(q), &big(len), s))
    }

    #[test]
    fn loop_then_edge() {
        let ug = graph(&[(0, 2, 0), (0, 3, 1)]);
        assert_eq!(all(&ug, 0, 1, 7), [true; 3]);
        assert_eq!(all(&ug, 0, 1, 4), [false; 3]);
    }

    #[test]
    fn single_edge_and_empty_graph() {
        let ug = graph(&[(0, 9, 1)]);
        assert_eq!(all(&ug, 0, 1, 9), [true; 3]);
        let ug = UnaryGraph::default();
        assert_eq!(all(&ug, 0, 0, 5), [false; 3]);
    }

    #[test]
    fn restriction_keeps_only_the_letter() {
        use crate::automaton::Transition;
        use crate::letter::Alphabet;
        use crate::slp::Nt;
        let mut alphabet = Alphabet::new();
        let a = alphabet.original("a").unwrap();
        let b = alphabet.original("b").unwrap();
        let (p, q, r) = (StateId(0), StateId(1), StateId(2));
        let mut aut = Automaton::new([p, q, r], p, r);
        aut.add(Transition::new(p, Label::Letter(a), q));
        aut.add(Transition::new(q, Label::Power(a, big(5)), r));
        aut.add(Transition::new(q, Label::Letter(b), r));
        aut.add(Transition::new(q, Label::Nt(Nt(1)), r));
        let ug = restrict_to_letter(&aut, a);
        assert_eq!(
            ug.edges,
            BTreeSet::from([(p, big(1), q), (q, big(5), r)])
        );
        assert!(restrict_to_letter(&aut, Letter::DOLLAR).edges.is_empty());
    }

    #[test]
    fn deterministic_walk_with_tail_and_cycle() {
        // 0 -2-> 1 -3-> 2 -4-> 3 -5-> 1
        let ug = graph(&[(0, 2, 1), (1, 3, 2), (2, 4, 3), (3, 5, 1)]);
        assert!(ug.is_deterministic());
        for len in 1..80 {
            let dp = a_path_exists(&ug, StateId(0), StateId(2), &big(len), Strategy::DenseDp);
            let walk = a_path_exists(&ug, StateId(0), StateId(2), &big(len), Strategy::Deterministic);
            assert_eq!(dp, walk, "len {len}");
        }
        let huge = (BigUint::one() << 200usize) * 12u32 + 5u32;
        assert!(a_path_exists(&ug, StateId(0), StateId(2), &huge, Strategy::Deterministic));
    }

    #[test]
    fn cycle_search_handles_huge_lengths() {
        // cycles of weight 6 and 10 through p, exit of weight 1
        let ug = graph(&[(0, 6, 0), (0, 4, 1), (1, 6, 0), (0, 1, 2)]);
        let even = (BigUint::one() << 40usize) + 1u32;
        let odd = (BigUint::one() << 40usize) + 2u32;
        assert!(a_path_exists(&ug, StateId(0), StateId(2), &even, Strategy::CycleSearch));
        assert!(!a_path_exists(&ug, StateId(0), StateId(2), &odd, Strategy::CycleSearch));
    }

    #[test]
    fn semigroup_membership() {
        let s = Semigroup::new(vec![big(6), big(10), big(15)]);
        let members: Vec<u64> = (0..40).filter(|d| s.contains(&big(*d))).collect();
        let expected: Vec<u64> = (0..40u64)
            .filter(|d| {
                (0..=d / 6).any(|a| (0..=d / 10).any(|b| {
                    let r = d - 6 * a;
                    r >= 10 * b && (r - 10 * b) % 15 == 0
                }))
            })
            .collect();
        assert_eq!(members, expected);
        assert!(!s.contains(&big(29)));

        let large = Semigroup::new(vec![big(1 << 23) + big(1), big(1 << 23) + big(3)]);
        assert!(large.contains(&(big(1 << 23) * big(3) + big(7))));
        assert!(!large.contains(&(big(1 << 23) * big(3) + big(8))));
        assert!(!Semigroup::new(Vec::new()).contains(&big(3)));
    }

    #[test]
    fn bounded_search_matches_brute_force() {
        let gens = [big(11), big(7), big(5)];
        let refs: Vec<&BigUint> = gens.iter().collect();
        for d in 0..120u64 {
            let brute = (0..=d / 11).any(|a| {
                (0..=(d - 11 * a) / 7).any(|b| (d - 11 * a - 7 * b) % 5 == 0)
            });
            assert_eq!(bounded_search(&big(d), &refs), brute, "d = {d}");
        }
    }
}
