//! Raw real-time transducers: no input-ε transitions, words as outputs, and
//! any number of final outputs per state.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::automata::{Lang, Nfa};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Edge {
    pub sym: u8,
    pub out: Word,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fst {
    pub init: usize,
    pub edges: Vec<Vec<Edge>>,
    pub finals: Vec<Vec<Word>>,
}

impl Fst {
    pub fn new() -> Fst {
        Fst { init: 0, edges: Vec::new(), finals: Vec::new() }
    }

    pub fn add_state(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.finals.push(Vec::new());
        self.edges.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, sym: u8, out: Word, to: usize) {
        self.edges[from].push(Edge { sym, out, to });
    }

    pub fn add_final(&mut self, state: usize, out: Word) {
        self.finals[state].push(out);
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Sorts and deduplicates edges and final outputs.
    pub fn normalize(&mut self) {
        for e in &mut self.edges {
            e.sort();
            e.dedup();
        }
        for f in &mut self.finals {
            f.sort();
            f.dedup();
        }
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        seen[self.init] = true;
        let mut stack = vec![self.init];
        while let Some(s) = stack.pop() {
            for e in &self.edges[s] {
                if !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }

    pub fn coaccessible(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, es) in self.edges.iter().enumerate() {
            for e in es {
                rev[e.to].push(s);
            }
        }
        let mut co: Vec<bool> = self.finals.iter().map(|f| !f.is_empty()).collect();
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

    /// Keeps the states that are reachable and coaccessible, preserving their
    /// relative order. The initial state always survives.
    pub fn trim(&self) -> Fst {
        let reach = self.reachable();
        let co = self.coaccessible();
        let keep: Vec<bool> =
            (0..self.num_states()).map(|s| (reach[s] && co[s]) || s == self.init).collect();
        self.keep_states(&keep)
    }

    pub fn keep_states(&self, keep: &[bool]) -> Fst {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = Fst::new();
        for s in 0..self.num_states() {
            if keep[s] {
                map[s] = out.add_state();
            }
        }
        for s in 0..self.num_states() {
            if !keep[s] {
                continue;
            }
            for e in &self.edges[s] {
                if keep[e.to] {
                    out.add_edge(map[s], e.sym, e.out.clone(), map[e.to]);
                }
            }
            out.finals[map[s]] = self.finals[s].clone();
        }
        out.init = map[self.init];
        out.normalize();
        out
    }

    /// Quotient by the coarsest bisimulation that respects input symbol,
    /// output word and final outputs. Preserves the realized relation.
    pub fn reduce(&self) -> Fst {
        let n = self.num_states();
        let mut final_ids: HashMap<&Vec<Word>, u32> = HashMap::new();
        let mut class: Vec<u32> = (0..n)
            .map(|s| {
                let len = final_ids.len() as u32;
                *final_ids.entry(&self.finals[s]).or_insert(len)
            })
            .collect();
        let mut count = final_ids.len();
        loop {
            let mut sigs: HashMap<(u32, Vec<(u8, &Word, u32)>), u32> = HashMap::new();
            let mut next = vec![0u32; n];
            for s in 0..n {
                let mut sig: Vec<(u8, &Word, u32)> =
                    self.edges[s].iter().map(|e| (e.sym, &e.out, class[e.to])).collect();
                sig.sort();
                sig.dedup();
                let len = sigs.len() as u32;
                next[s] = *sigs.entry((class[s], sig)).or_insert(len);
            }
            class = next;
            if sigs.len() == count {
                break;
            }
            count = sigs.len();
        }
        let mut out = Fst::new();
        let mut rep: Vec<Option<usize>> = vec![None; count];
        for s in 0..n {
            if rep[class[s] as usize].is_none() {
                rep[class[s] as usize] = Some(s);
            }
        }
        for _ in 0..count {
            out.add_state();
        }
        for (c, r) in rep.iter().enumerate() {
            let r = r.expect("every class has a member");
            for e in &self.edges[r] {
                out.add_edge(c, e.sym, e.out.clone(), class[e.to] as usize);
            }
            out.finals[c] = self.finals[r].clone();
        }
        out.init = class[self.init] as usize;
        out.normalize();
        out
    }

    /// Breadth-first renumbering from the initial state over sorted edges.
    pub fn renumber(&self) -> Fst {
        let n = self.num_states();
        let mut map = vec![usize::MAX; n];
        let mut order = vec![self.init];
        map[self.init] = 0;
        let mut i = 0;
        while i < order.len() {
            for e in &self.edges[order[i]] {
                if map[e.to] == usize::MAX {
                    map[e.to] = order.len();
                    order.push(e.to);
                }
            }
            i += 1;
        }
        let mut out = Fst::new();
        for _ in 0..order.len() {
            out.add_state();
        }
        for (new, &old) in order.iter().enumerate() {
            for e in &self.edges[old] {
                out.add_edge(new, e.sym, e.out.clone(), map[e.to]);
            }
            out.finals[new] = self.finals[old].clone();
        }
        out.init = 0;
        out.normalize();
        out
    }

    /// Normal form for freshly constructed transducers.
    pub fn finish(mut self) -> Fst {
        self.normalize();
        self.trim().reduce().renumber()
    }

    /// All runs reading `w` from `state`: target states with accumulated output.
    pub fn read(&self, state: usize, w: &Word) -> Vec<(usize, Word)> {
        let mut cur: BTreeSet<(usize, Word)> = BTreeSet::from([(state, Word::empty())]);
        for &a in w.symbols() {
            let mut nxt = BTreeSet::new();
            for (s, out) in &cur {
                for e in self.edges[*s].iter().filter(|e| e.sym == a) {
                    nxt.insert((e.to, out.concat(&e.out)));
                }
            }
            cur = nxt;
            if cur.is_empty() {
                break;
            }
        }
        cur.into_iter().collect()
    }

    /// Every output of the relation on `x`.
    pub fn outputs(&self, x: &Word) -> BTreeSet<Word> {
        let mut res = BTreeSet::new();
        for (s, out) in self.read(self.init, x) {
            for fo in &self.finals[s] {
                res.insert(out.concat(fo));
            }
        }
        res
    }

    /// Evaluation for trimmed functional transducers: after any input prefix
    /// each live state carries a single output.
    pub fn eval(&self, x: &Word) -> Option<Word> {
        let mut cur: Vec<(usize, Word)> = vec![(self.init, Word::empty())];
        let mut seen = vec![usize::MAX; self.num_states()];
        for (step, &a) in x.symbols().iter().enumerate() {
            let mut nxt: Vec<(usize, Word)> = Vec::with_capacity(cur.len());
            for (s, out) in &cur {
                for e in self.edges[*s].iter().filter(|e| e.sym == a) {
                    if seen[e.to] != step {
                        seen[e.to] = step;
                        nxt.push((e.to, out.concat(&e.out)));
                    }
                }
            }
            if nxt.is_empty() {
                return None;
            }
            cur = nxt;
        }
        cur.iter().find_map(|(s, out)| self.finals[*s].first().map(|fo| out.concat(fo)))
    }

    /// Input language.
    pub fn domain(&self) -> Lang {
        self.preimage(&Lang::universal())
    }

    /// `{y : ∃x ∈ L, (x, y) in the relation}`.
    pub fn image(&self, lang: &Lang) -> Lang {
        let mut nfa = Nfa::new();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let accept = nfa.add_state(true);
        let start = nfa.add_state(false);
        ids.insert((self.init, 0), start);
        nfa.add_initial(start);
        let mut queue = VecDeque::from([(self.init, 0usize)]);
        while let Some((p, d)) = queue.pop_front() {
            let me = ids[&(p, d)];
            if lang.is_accepting(d) {
                for fo in &self.finals[p] {
                    nfa.add_word_path(me, fo, accept);
                }
            }
            for e in &self.edges[p] {
                let key = (e.to, lang.step(d, e.sym));
                let target = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = nfa.add_state(false);
                        ids.insert(key, t);
                        queue.push_back(key);
                        t
                    }
                };
                nfa.add_word_path(me, &e.out, target);
            }
        }
        nfa.determinize()
    }

    /// `{x : some output of x lies in L}`.
    pub fn preimage(&self, lang: &Lang) -> Lang {
        let mut nfa = Nfa::new();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let start = nfa.add_state(false);
        ids.insert((self.init, 0), start);
        nfa.add_initial(start);
        let mut queue = VecDeque::from([(self.init, 0usize)]);
        while let Some((p, d)) = queue.pop_front() {
            let me = ids[&(p, d)];
            if self.finals[p].iter().any(|fo| lang.is_accepting(lang.run_from(d, fo))) {
                nfa.set_accepting(me);
            }
            for e in &self.edges[p] {
                let key = (e.to, lang.run_from(d, &e.out));
                let target = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = nfa.add_state(false);
                        ids.insert(key, t);
                        queue.push_back(key);
                        t
                    }
                };
                nfa.add_edge(me, e.sym, target);
            }
        }
        nfa.determinize()
    }

    /// Product with a DFA on the input side.
    pub fn restrict(&self, lang: &Lang) -> Fst {
        let mut out = Fst::new();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let start = out.add_state();
        out.init = start;
        ids.insert((self.init, 0), start);
        let mut queue = VecDeque::from([(self.init, 0usize)]);
        while let Some((p, d)) = queue.pop_front() {
            let me = ids[&(p, d)];
            if lang.is_accepting(d) {
                for fo in &self.finals[p] {
                    out.add_final(me, fo.clone());
                }
            }
            for e in &self.edges[p] {
                let key = (e.to, lang.step(d, e.sym));
                let target = match ids.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = out.add_state();
                        ids.insert(key, t);
                        queue.push_back(key);
                        t
                    }
                };
                out.add_edge(me, e.sym, e.out.clone(), target);
            }
        }
        out
    }

    /// Union of relations through a fresh initial state.
    pub fn union(parts: &[&Fst]) -> Fst {
        let mut out = Fst::new();
        let init = out.add_state();
        out.init = init;
        for part in parts {
            let base = out.num_states();
            for _ in 0..part.num_states() {
                out.add_state();
            }
            for (s, es) in part.edges.iter().enumerate() {
                for e in es {
                    out.add_edge(base + s, e.sym, e.out.clone(), base + e.to);
                    if s == part.init {
                        out.add_edge(init, e.sym, e.out.clone(), base + e.to);
                    }
                }
                out.finals[base + s] = part.finals[s].clone();
            }
            out.finals[init].extend(part.finals[part.init].iter().cloned());
        }
        out
    }

    /// Relation composition: `x ↦ outer(inner(x))`.
    pub fn compose(outer: &Fst, inner: &Fst) -> Fst {
        let mut out = Fst::new();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut memo: HashMap<(usize, Word), Vec<(usize, Word)>> = HashMap::new();
        let mut read = |q: usize, w: &Word| -> Vec<(usize, Word)> {
            memo.entry((q, w.clone())).or_insert_with(|| outer.read(q, w)).clone()
        };
        let start = out.add_state();
        out.init = start;
        ids.insert((inner.init, outer.init), start);
        let mut queue = VecDeque::from([(inner.init, outer.init)]);
        while let Some((p, q)) = queue.pop_front() {
            let me = ids[&(p, q)];
            for fo in &inner.finals[p] {
                for (q2, o) in read(q, fo) {
                    for fo2 in &outer.finals[q2] {
                        out.add_final(me, o.concat(fo2));
                    }
                }
            }
            for e in &inner.edges[p] {
                for (q2, o) in read(q, &e.out) {
                    let key = (e.to, q2);
                    let target = match ids.get(&key) {
                        Some(&t) => t,
                        None => {
                            let t = out.add_state();
                            ids.insert(key, t);
                            queue.push_back(key);
                            t
                        }
                    };
                    out.add_edge(me, e.sym, o, target);
                }
            }
        }
        out
    }

    /// Marks states lying on a cycle of empty-output transitions.
    pub fn silent_cycle_states(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut marked = vec![false; n];
        for s in 0..n {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> =
                self.edges[s].iter().filter(|e| e.out.is_empty()).map(|e| e.to).collect();
            while let Some(t) = stack.pop() {
                if t == s {
                    marked[s] = true;
                    break;
                }
                if seen[t] {
                    continue;
                }
                seen[t] = true;
                stack.extend(self.edges[t].iter().filter(|e| e.out.is_empty()).map(|e| e.to));
            }
        }
        marked
    }

    /// An equivalent transducer in which every accepted input has exactly one
    /// accepting run. States pair an original state with the set of states
    /// reachable on the input read so far; an edge survives only if it is the
    /// least edge into its target from that set, and only the least final
    /// state of a set accepts, so each input has one accepting run, traced
    /// backwards. Only sound for functional transducers, where all accepting
    /// runs agree on the output.
    pub fn unambiguous(&self) -> Fst {
        type Set = Vec<usize>;
        let start: Set = vec![self.init];
        let mut sets: Vec<Set> = vec![start.clone()];
        let mut index: HashMap<Set, usize> = HashMap::from([(start, 0)]);
        let mut out = Fst::new();
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut id = |out: &mut Fst, key: (usize, usize)| -> usize {
            *ids.entry(key).or_insert_with(|| out.add_state())
        };
        let init = id(&mut out, (self.init, 0));
        let mut i = 0;
        while i < sets.len() {
            let set = sets[i].clone();
            if let Some(&q) = set.iter().find(|&&q| !self.finals[q].is_empty()) {
                let s = id(&mut out, (q, i));
                out.add_final(s, self.finals[q][0].clone());
            }
            for a in 0..2u8 {
                let mut best: BTreeMap<usize, (usize, &Word)> = BTreeMap::new();
                for &p in &set {
                    for e in self.edges[p].iter().filter(|e| e.sym == a) {
                        best.entry(e.to)
                            .and_modify(|cur| {
                                if (p, &e.out) < (cur.0, cur.1) {
                                    *cur = (p, &e.out);
                                }
                            })
                            .or_insert((p, &e.out));
                    }
                }
                if best.is_empty() {
                    continue;
                }
                let next: Set = best.keys().copied().collect();
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    sets.len() - 1
                });
                for (&q, &(p, w)) in &best {
                    let from = id(&mut out, (p, i));
                    let to = id(&mut out, (q, j));
                    out.add_edge(from, a, w.clone(), to);
                }
            }
            i += 1;
        }
        out.init = init;
        out.normalize();
        out.trim()
    }
}

/// A transducer with input-ε transitions, used only to build inverses.
pub(crate) struct EpsFst {
    /// (input symbol or ε, output, target)
    pub edges: Vec<Vec<(Option<u8>, Word, usize)>>,
    pub finals: Vec<Option<Word>>,
    pub init: usize,
}

impl EpsFst {
    pub fn add_state(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.finals.push(None);
        self.edges.len() - 1
    }

    /// Removes input-ε transitions. Fails (returning the offending state) when
    /// an ε-cycle produces output, which would give an input infinitely many
    /// outputs.
    pub fn eliminate_eps(&self) -> Result<Fst, usize> {
        let n = self.edges.len();
        let max_out = self.edges.iter().flatten().map(|e| e.1.len()).max().unwrap_or(0);
        let limit = n * max_out.max(1) + 1;
        let mut out = Fst::new();
        for _ in 0..n {
            out.add_state();
        }
        out.init = self.init;
        for p in 0..n {
            let mut closure: BTreeSet<(usize, Word)> = BTreeSet::new();
            let mut stack = vec![(p, Word::empty())];
            while let Some((s, w)) = stack.pop() {
                if w.len() > limit {
                    return Err(p);
                }
                if !closure.insert((s, w.clone())) {
                    continue;
                }
                for (sym, o, t) in &self.edges[s] {
                    if sym.is_none() {
                        stack.push((*t, w.concat(o)));
                    }
                }
            }
            for (s, u) in &closure {
                if let Some(fo) = &self.finals[*s] {
                    out.add_final(p, u.concat(fo));
                }
                for (sym, o, t) in &self.edges[*s] {
                    if let Some(a) = sym {
                        out.add_edge(p, *a, u.concat(o), *t);
                    }
                }
            }
        }
        out.normalize();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn accepting_runs(f: &Fst, x: &Word) -> usize {
        let mut cur: Vec<usize> = vec![f.init];
        for &a in x.symbols() {
            cur = cur.iter().flat_map(|&s| f.edges[s].iter().filter(move |e| e.sym == a).map(|e| e.to)).collect();
        }
        cur.iter().map(|&s| f.finals[s].len()).sum()
    }

    #[test]
    fn unambiguous_keeps_outputs_with_one_run_each() {
        // the identity, with every non-empty input read by three runs
        let mut f = Fst::new();
        let s = f.add_state();
        let a = f.add_state();
        let b = f.add_state();
        for sym in 0..2u8 {
            f.add_edge(s, sym, Word::symbol(sym), a);
            f.add_edge(s, sym, Word::symbol(sym), b);
            f.add_edge(s, sym, Word::symbol(sym), s);
            f.add_edge(a, sym, Word::symbol(sym), a);
            f.add_edge(b, sym, Word::symbol(sym), b);
        }
        f.add_final(a, Word::empty());
        f.add_final(b, Word::empty());
        f.add_final(s, Word::empty());
        let f = f.trim();
        let u = f.unambiguous();
        for x in Word::all_up_to(6) {
            let before = f.outputs(&x);
            let after = u.outputs(&x);
            assert_eq!(before, after, "{x}");
            assert_eq!(accepting_runs(&u, &x), usize::from(!after.is_empty()), "{x}");
        }
    }
}
