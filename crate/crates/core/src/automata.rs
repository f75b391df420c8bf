//! Regular languages over `{0, 1}`.
//!
//! A [`Lang`] is stored as its minimal complete DFA with states renumbered in
//! breadth-first order from the initial state, so structural equality is
//! language equality. Nondeterministic automata ([`Nfa`]) are only a
//! construction device: every public operation returns a canonical `Lang`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Card, Word};

/// Nondeterministic automaton with ε-moves, used to build languages.
#[derive(Clone, Debug, Default)]
pub(crate) struct Nfa {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(u8, usize)>>,
    init: Vec<usize>,
    accept: Vec<bool>,
}

impl Nfa {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    pub(crate) fn add_state(&mut self, accepting: bool) -> usize {
        self.eps.push(Vec::new());
        self.edges.push(Vec::new());
        self.accept.push(accepting);
        self.accept.len() - 1
    }

    pub(crate) fn set_accepting(&mut self, s: usize) {
        self.accept[s] = true;
    }

    pub(crate) fn add_initial(&mut self, s: usize) {
        self.init.push(s);
    }

    pub(crate) fn add_edge(&mut self, from: usize, sym: u8, to: usize) {
        self.edges[from].push((sym, to));
    }

    pub(crate) fn add_eps(&mut self, from: usize, to: usize) {
        self.eps[from].push(to);
    }

    /// Adds a path spelling `w` from `from` to `to` (an ε-move when `w` is empty).
    pub(crate) fn add_word_path(&mut self, from: usize, w: &Word, to: usize) {
        let syms = w.symbols();
        if syms.is_empty() {
            self.add_eps(from, to);
            return;
        }
        let mut cur = from;
        for (i, &s) in syms.iter().enumerate() {
            let next = if i + 1 == syms.len() { to } else { self.add_state(false) };
            self.add_edge(cur, s, next);
            cur = next;
        }
    }

    /// Copies a DFA into this automaton, returning the index of its initial state.
    pub(crate) fn embed(&mut self, lang: &Lang) -> usize {
        let base = self.accept.len();
        for &a in &lang.accept {
            self.add_state(a);
        }
        for (s, next) in lang.next.iter().enumerate() {
            for sym in 0..2u8 {
                self.add_edge(base + s, sym, base + next[sym as usize] as usize);
            }
        }
        base
    }

    fn closure(&self, set: &mut Vec<usize>) {
        let mut seen = vec![false; self.accept.len()];
        let mut stack: Vec<usize> = Vec::new();
        for &s in set.iter() {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(s) = stack.pop() {
            for &t in &self.eps[s] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        set.clear();
        set.extend(seen.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
    }

    /// Subset construction followed by minimization.
    pub(crate) fn determinize(&self) -> Lang {
        let mut start = self.init.clone();
        self.closure(&mut start);
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut next: Vec<[u32; 2]> = Vec::new();
        ids.insert(start.clone(), 0);
        sets.push(start);
        let mut i = 0;
        while i < sets.len() {
            let mut row = [0u32; 2];
            for sym in 0..2u8 {
                let mut target: Vec<usize> = sets[i]
                    .iter()
                    .flat_map(|&s| self.edges[s].iter().filter(|e| e.0 == sym).map(|e| e.1))
                    .collect();
                self.closure(&mut target);
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        ids.insert(target.clone(), id);
                        sets.push(target);
                        id
                    }
                };
                row[sym as usize] = id;
            }
            next.push(row);
            i += 1;
        }
        let accept = sets.iter().map(|set| set.iter().any(|&s| self.accept[s])).collect();
        Lang::minimize(next, accept)
    }
}

/// A regular subset of `{0,1}*`, kept as a canonical minimal DFA.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lang {
    next: Vec<[u32; 2]>,
    accept: Vec<bool>,
}

impl Lang {
    pub fn empty() -> Lang {
        Lang { next: vec![[0, 0]], accept: vec![false] }
    }

    /// `{0,1}*`
    pub fn universal() -> Lang {
        Lang { next: vec![[0, 0]], accept: vec![true] }
    }

    pub fn singleton(w: &Word) -> Lang {
        Lang::from_words(std::slice::from_ref(w))
    }

    pub fn from_words(words: &[Word]) -> Lang {
        let mut nfa = Nfa::new();
        let root = nfa.add_state(false);
        nfa.add_initial(root);
        for w in words {
            let end = nfa.add_state(true);
            nfa.add_word_path(root, w, end);
        }
        nfa.determinize()
    }

    /// The cylinder `w{0,1}*`.
    pub fn cylinder(w: &Word) -> Lang {
        Lang::singleton(w).concat(&Lang::universal())
    }

    /// Words of length at most `n`.
    pub fn up_to_length(n: usize) -> Lang {
        let mut next = Vec::with_capacity(n + 2);
        for i in 0..=n {
            next.push([(i + 1) as u32; 2]);
        }
        next.push([(n + 1) as u32; 2]);
        let mut accept = vec![true; n + 1];
        accept.push(false);
        Lang { next, accept }
    }

    /// Moore partition refinement, then breadth-first renumbering from state 0.
    fn minimize(next: Vec<[u32; 2]>, accept: Vec<bool>) -> Lang {
        let n = next.len();
        // restrict to reachable states first
        let mut reach = vec![false; n];
        let mut stack = vec![0usize];
        reach[0] = true;
        while let Some(s) = stack.pop() {
            for &t in &next[s] {
                if !reach[t as usize] {
                    reach[t as usize] = true;
                    stack.push(t as usize);
                }
            }
        }
        let mut class: Vec<u32> = accept.iter().map(|&a| a as u32).collect();
        let mut count = {
            let mut c: Vec<u32> = (0..n).filter(|&s| reach[s]).map(|s| class[s]).collect();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        loop {
            let mut sig: HashMap<(u32, u32, u32), u32> = HashMap::new();
            let mut new_class = vec![0u32; n];
            for s in 0..n {
                if !reach[s] {
                    continue;
                }
                let key = (class[s], class[next[s][0] as usize], class[next[s][1] as usize]);
                let len = sig.len() as u32;
                new_class[s] = *sig.entry(key).or_insert(len);
            }
            let new_count = sig.len();
            class = new_class;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // BFS renumbering of the quotient
        let mut order: HashMap<u32, u32> = HashMap::new();
        let mut reps: Vec<usize> = Vec::new();
        order.insert(class[0], 0);
        reps.push(0);
        let mut out_next = Vec::new();
        let mut out_accept = Vec::new();
        let mut i = 0;
        while i < reps.len() {
            let s = reps[i];
            let mut row = [0u32; 2];
            for sym in 0..2 {
                let t = next[s][sym] as usize;
                let c = class[t];
                let id = match order.get(&c) {
                    Some(&id) => id,
                    None => {
                        let id = reps.len() as u32;
                        order.insert(c, id);
                        reps.push(t);
                        id
                    }
                };
                row[sym] = id;
            }
            out_next.push(row);
            out_accept.push(accept[s]);
            i += 1;
        }
        Lang { next: out_next, accept: out_accept }
    }

    pub fn num_states(&self) -> usize {
        self.next.len()
    }

    pub(crate) fn step(&self, state: usize, sym: u8) -> usize {
        self.next[state][sym as usize] as usize
    }

    pub(crate) fn run_from(&self, state: usize, w: &Word) -> usize {
        w.symbols().iter().fold(state, |s, &a| self.step(s, a))
    }

    pub(crate) fn is_accepting(&self, state: usize) -> bool {
        self.accept[state]
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.accept[self.run_from(0, w)]
    }

    fn product(&self, other: &Lang, op: impl Fn(bool, bool) -> bool) -> Lang {
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(0u32, 0u32)];
        ids.insert((0, 0), 0);
        let mut next = Vec::new();
        let mut accept = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            let mut row = [0u32; 2];
            for sym in 0..2 {
                let key = (self.next[a as usize][sym], other.next[b as usize][sym]);
                let len = pairs.len() as u32;
                let id = *ids.entry(key).or_insert_with(|| {
                    pairs.push(key);
                    len
                });
                row[sym] = id;
            }
            next.push(row);
            accept.push(op(self.accept[a as usize], other.accept[b as usize]));
            i += 1;
        }
        Lang::minimize(next, accept)
    }

    pub fn complement(&self) -> Lang {
        Lang { next: self.next.clone(), accept: self.accept.iter().map(|a| !a).collect() }
    }

    pub fn intersect(&self, other: &Lang) -> Lang {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Lang) -> Lang {
        self.product(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Lang) -> Lang {
        self.product(other, |a, b| a && !b)
    }

    pub fn concat(&self, other: &Lang) -> Lang {
        let mut nfa = Nfa::new();
        let a = nfa.embed(self);
        let b = nfa.embed(other);
        nfa.add_initial(a);
        for s in 0..self.num_states() {
            if self.accept[s] {
                nfa.accept[a + s] = false;
                nfa.add_eps(a + s, b);
            }
        }
        nfa.determinize()
    }

    pub fn star(&self) -> Lang {
        let mut nfa = Nfa::new();
        let hub = nfa.add_state(true);
        let a = nfa.embed(self);
        nfa.add_initial(hub);
        nfa.add_eps(hub, a);
        for s in 0..self.num_states() {
            if self.accept[s] {
                nfa.add_eps(a + s, hub);
            }
        }
        nfa.determinize()
    }

    pub fn is_empty(&self) -> bool {
        !self.accept.iter().any(|&a| a)
    }

    pub fn is_universal(&self) -> bool {
        self.accept.iter().all(|&a| a)
    }

    pub fn is_subset_of(&self, other: &Lang) -> bool {
        self.difference(other).is_empty()
    }

    /// Residual `w⁻¹L = {x : wx ∈ L}`.
    pub fn residual(&self, w: &Word) -> Lang {
        let start = self.run_from(0, w);
        let mut next = self.next.clone();
        next.swap(0, start);
        // swapping rows alone breaks the graph; rebuild through a relabelling
        let perm = |s: u32| -> u32 {
            if s == 0 {
                start as u32
            } else if s as usize == start {
                0
            } else {
                s
            }
        };
        for row in next.iter_mut() {
            row[0] = perm(row[0]);
            row[1] = perm(row[1]);
        }
        let mut accept = self.accept.clone();
        accept.swap(0, start);
        Lang::minimize(next, accept)
    }

    fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, row) in self.next.iter().enumerate() {
            for &t in row {
                rev[t as usize].push(s);
            }
        }
        let mut co = self.accept.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&s| co[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !co[p] {
                    co[p] = true;
                    stack.push(p);
                }
            }
        }
        co
    }

    /// Useful states lying on a cycle through useful states.
    fn cyclic_useful(&self) -> Vec<bool> {
        let co = self.coaccessible();
        let n = self.num_states();
        let mut out = vec![false; n];
        for s in (0..n).filter(|&s| co[s]) {
            // s is on a cycle iff s is reachable from one of its successors
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> =
                self.next[s].iter().map(|&t| t as usize).filter(|&t| co[t]).collect();
            while let Some(t) = stack.pop() {
                if t == s {
                    out[s] = true;
                    break;
                }
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                stack.extend(self.next[t].iter().map(|&u| u as usize).filter(|&u| co[u]));
            }
        }
        out
    }

    /// Exact cardinality; infinite iff a useful state lies on a cycle.
    pub fn cardinality(&self) -> Card {
        if self.cyclic_useful().iter().any(|&c| c) {
            return Card::Infinite;
        }
        let co = self.coaccessible();
        let mut memo: Vec<Option<u64>> = vec![None; self.num_states()];
        fn count(l: &Lang, s: usize, co: &[bool], memo: &mut Vec<Option<u64>>) -> u64 {
            if !co[s] {
                return 0;
            }
            if let Some(c) = memo[s] {
                return c;
            }
            let mut c = l.accept[s] as u64;
            for sym in 0..2 {
                let t = l.next[s][sym] as usize;
                c = c.saturating_add(count(l, t, co, memo));
            }
            memo[s] = Some(c);
            c
        }
        Card::Finite(count(self, 0, &co, &mut memo))
    }

    /// Number of members of length at most `n`.
    pub fn count_up_to(&self, n: usize) -> u64 {
        let mut cur = vec![0u64; self.num_states()];
        cur[0] = 1;
        let mut total = 0u64;
        for step in 0..=n {
            total = total.saturating_add(
                cur.iter().zip(&self.accept).filter(|(_, &a)| a).map(|(c, _)| *c).sum::<u64>(),
            );
            if step == n {
                break;
            }
            let mut nxt = vec![0u64; self.num_states()];
            for (s, &c) in cur.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for sym in 0..2 {
                    let t = self.next[s][sym] as usize;
                    nxt[t] = nxt[t].saturating_add(c);
                }
            }
            cur = nxt;
        }
        total
    }

    /// The `k` shortlex-smallest members (fewer if the language is smaller).
    pub fn enumerate_shortlex(&self, k: usize) -> Vec<Word> {
        let mut out = Vec::new();
        if k == 0 || self.is_empty() {
            return out;
        }
        let n = self.num_states();
        let finite = self.cardinality().is_finite();
        // accept_in[m][s]: some word of length exactly m leads from s to acceptance
        let mut accept_in: Vec<Vec<bool>> = vec![self.accept.clone()];
        let mut len = 0usize;
        loop {
            if finite && len >= n {
                break;
            }
            while accept_in.len() <= len {
                let prev = accept_in.last().unwrap();
                let row = (0..n)
                    .map(|s| prev[self.next[s][0] as usize] || prev[self.next[s][1] as usize])
                    .collect();
                accept_in.push(row);
            }
            let mut prefix = Word::empty();
            self.collect_len(0, len, &accept_in, &mut prefix, &mut out, k);
            if out.len() >= k {
                break;
            }
            len += 1;
        }
        out
    }

    fn collect_len(
        &self,
        s: usize,
        remaining: usize,
        accept_in: &[Vec<bool>],
        prefix: &mut Word,
        out: &mut Vec<Word>,
        k: usize,
    ) {
        if out.len() >= k || !accept_in[remaining][s] {
            return;
        }
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for sym in 0..2u8 {
            let t = self.next[s][sym as usize] as usize;
            let mut p = prefix.clone();
            p.push(sym);
            self.collect_len(t, remaining - 1, accept_in, &mut p, out, k);
        }
    }

    /// Shortlex-least word leading from the initial state to a state satisfying `pred`.
    fn shortest_to(&self, pred: impl Fn(usize) -> bool) -> Option<Word> {
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, u8)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(s) = queue.pop_front() {
            if pred(s) {
                let mut syms = Vec::new();
                let mut cur = s;
                while let Some((p, a)) = parent[cur] {
                    syms.push(a);
                    cur = p;
                }
                syms.reverse();
                return Some(Word::from_symbols(syms));
            }
            for sym in 0..2u8 {
                let t = self.next[s][sym as usize] as usize;
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, sym));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    pub fn shortlex_min(&self) -> Option<Word> {
        self.shortest_to(|s| self.accept[s])
    }

    /// Some `w` with `w{0,1}* ⊆ L`, the shortlex-least one, if any.
    pub fn fat_witness(&self) -> Option<Word> {
        self.shortest_to(|s| {
            self.accept[s] && self.next[s][0] as usize == s && self.next[s][1] as usize == s
        })
    }

    pub fn is_fat(&self) -> (bool, Option<Word>) {
        let w = self.fat_witness();
        (w.is_some(), w)
    }

    /// Shortlex-least `w` whose state lies on a useful cycle; then `L ∩ w{0,1}*` is infinite.
    pub fn find_infinite_cylinder(&self) -> Result<Word> {
        let cyc = self.cyclic_useful();
        self.shortest_to(|s| cyc[s]).ok_or(Error::NoInfiniteCylinder)
    }

    /// Compact description used in reports.
    pub fn summary(&self, k: usize) -> LangSummary {
        LangSummary {
            cardinality: self.cardinality(),
            first_members: self.enumerate_shortlex(k),
            automaton: AutomatonRef {
                states: self.num_states(),
                accepting: (0..self.num_states()).filter(|&s| self.accept[s]).collect(),
                next: self.next.clone(),
            },
        }
    }
}

impl fmt::Debug for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let first: Vec<String> = self.enumerate_shortlex(6).iter().map(|w| w.to_string()).collect();
        write!(f, "Lang(|L|={}, [{}], {} states)", self.cardinality(), first.join(","), self.num_states())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomatonRef {
    pub states: usize,
    pub accepting: Vec<usize>,
    pub next: Vec<[u32; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LangSummary {
    pub cardinality: Card,
    pub first_members: Vec<Word>,
    pub automaton: AutomatonRef,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_lang;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn l(s: &str) -> Lang {
        parse_lang(s).unwrap()
    }

    fn words(v: &[Word]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn boolean_operations() {
        assert!(Lang::universal().complement().is_empty());
        assert!(l("0.*").intersect(&l("1.*")).is_empty());
        let nonempty = Lang::universal().difference(&Lang::singleton(&Word::empty()));
        assert_eq!(nonempty.cardinality(), Card::Infinite);
        for x in Word::all_up_to(5) {
            assert_eq!(nonempty.contains(&x), !x.is_empty());
        }
    }

    #[test]
    fn cardinalities() {
        assert_eq!(Lang::from_words(&[w("~"), w("0"), w("00")]).cardinality(), Card::Finite(3));
        assert_eq!(l("0*").cardinality(), Card::Infinite);
        // enumeration oracle: all words of length exactly 2
        let oracle = Word::all_up_to(2).filter(|x| x.len() == 2).count() as u64;
        assert_eq!(l("(0|1)(0|1)").cardinality(), Card::Finite(oracle));
        assert_eq!(Lang::empty().cardinality(), Card::ZERO);
    }

    #[test]
    fn shortlex_enumeration() {
        assert_eq!(words(&Lang::universal().enumerate_shortlex(3)), ["~", "0", "1"]);
        assert_eq!(words(&l("1.*").enumerate_shortlex(3)), ["1", "10", "11"]);
        assert!(Lang::empty().enumerate_shortlex(5).is_empty());
        assert_eq!(words(&l("0|00|~").enumerate_shortlex(10)), ["~", "0", "00"]);
    }

    #[test]
    fn fatness() {
        let nonempty = Lang::universal().difference(&Lang::singleton(&Word::empty()));
        assert_eq!(nonempty.is_fat(), (true, Some(w("0"))));
        assert_eq!(l("0*").is_fat(), (false, None));
        assert_eq!(Lang::universal().is_fat(), (true, Some(Word::empty())));
    }

    #[test]
    fn infinite_cylinders() {
        assert_eq!(l("0*").find_infinite_cylinder().unwrap(), Word::empty());
        let lang = l("1.*|0");
        let c = lang.find_infinite_cylinder().unwrap();
        assert_eq!(c, w("1"));
        // oracle: the cylinder really cuts out an infinite part
        assert!(lang.intersect(&Lang::cylinder(&c)).cardinality().is_infinite());
        assert_eq!(
            Lang::singleton(&Word::empty()).find_infinite_cylinder(),
            Err(Error::NoInfiniteCylinder)
        );
    }

    #[test]
    fn residuals_and_counting() {
        let lang = l("01.*|1");
        assert!(lang.residual(&w("01")).is_universal());
        assert_eq!(lang.residual(&w("1")), Lang::singleton(&Word::empty()));
        assert_eq!(Lang::universal().count_up_to(3), 15);
        assert_eq!(l("0*").count_up_to(4), 5);
    }

    #[test]
    fn canonical_equality() {
        assert_eq!(l("(0|1)*"), Lang::universal());
        assert_eq!(l("0*0"), l("00*"));
        assert_ne!(l("0*"), l("00*"));
    }
}
