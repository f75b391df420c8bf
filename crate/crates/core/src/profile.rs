//! Fiber profiles: the exact semantic summary of a function from which every
//! monoid membership is decided.
//!
//! Infinite fibers come from empty-output cycles. A value `y` has an infinite
//! fiber iff some accepting run producing `y` visits a state on a cycle of
//! empty-output transitions: pumping the cycle yields infinitely many inputs
//! with output `y`, and conversely an accepting run on an input longer than
//! `n·(|y| + 1)` must contain more than `n` consecutive silent transitions.
//! Final outputs are fixed per state, so they do not affect the argument.
//!
//! Values with at least two preimages are found by making the transducer
//! unambiguous, so that distinct accepting paths read distinct inputs, and
//! running two copies synchronized on their output until their paths differ.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::automata::{Lang, LangSummary, Nfa};
use crate::error::{Error, Result};
use crate::transducer::fst::Fst;
use crate::transducer::RationalFn;
use crate::word::{Card, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProfile {
    pub range: Lang,
    pub range_size: Card,
    pub co_range: Lang,
    pub c: Card,
    pub inf_fiber_values: Lang,
    pub n_inf: Card,
    pub multi_values: Lang,
    pub v_size: Card,
    pub noninj_set: Lang,
    pub s_size: Card,
    pub free_cap: Card,
    pub is_generous: bool,
    pub is_constant: bool,
}

/// `{x : f(x) = y}`.
pub fn fiber(f: &RationalFn, y: &Word) -> Lang {
    f.preimage(&Lang::singleton(y))
}

/// `{y : f⁻¹[y] infinite}`.
pub fn inf_fiber_values(f: &RationalFn) -> Lang {
    let fst = &f.as_partial().fst;
    let marked = fst.silent_cycle_states();
    let n = fst.num_states();
    // copy 1 of a state means a marked state has been visited
    let mut nfa = Nfa::new();
    for _ in 0..2 * n {
        nfa.add_state(false);
    }
    let accept = nfa.add_state(true);
    let id = |p: usize, seen: bool| if seen { n + p } else { p };
    nfa.add_initial(id(fst.init, marked[fst.init]));
    for p in 0..n {
        for seen in [false, true] {
            for e in &fst.edges[p] {
                nfa.add_word_path(id(p, seen), &e.out, id(e.to, seen || marked[e.to]));
            }
            if seen {
                for fo in &fst.finals[p] {
                    nfa.add_word_path(id(p, true), fo, accept);
                }
            }
        }
    }
    nfa.determinize()
}

/// `{y : |f⁻¹[y]| ≥ 2}`.
pub fn multi_values(f: &RationalFn) -> Lang {
    pair_values(&f.as_partial().fst)
}

/// `{x : ∃x' ≠ x, f(x') = f(x)}`.
pub fn noninj_set(f: &RationalFn) -> Lang {
    f.preimage(&multi_values(f))
}

/// Two distinct inputs with the same value, the first being the shortlex-least
/// non-injective point. `None` iff `f` is injective.
pub fn collision_pair(f: &RationalFn) -> Option<(Word, Word)> {
    let x = noninj_set(f).shortlex_min()?;
    let partner = fiber(f, &f.eval(&x)).difference(&Lang::singleton(&x)).shortlex_min()?;
    Some((x, partner))
}

/// One step of a run in which at most one output symbol is written.
#[derive(Clone, Copy)]
struct Step {
    write: Option<u8>,
    to: usize,
}

/// Splits every transition into single-symbol steps. Node `top` (the last
/// one) is reached after the final output has been written.
fn letter_graph(fst: &Fst) -> (Vec<Vec<Step>>, usize) {
    let mut g: Vec<Vec<Step>> = vec![Vec::new(); fst.num_states()];
    let chain = |g: &mut Vec<Vec<Step>>, from: usize, out: &Word, to: usize| {
        let syms = out.symbols();
        if syms.is_empty() {
            g[from].push(Step { write: None, to });
            return;
        }
        let mut cur = from;
        for (i, &b) in syms.iter().enumerate() {
            let next = if i + 1 == syms.len() {
                to
            } else {
                g.push(Vec::new());
                g.len() - 1
            };
            g[cur].push(Step { write: Some(b), to: next });
            cur = next;
        }
    };
    let top = usize::MAX;
    let mut pending = Vec::new();
    for (p, es) in fst.edges.iter().enumerate() {
        for e in es {
            chain(&mut g, p, &e.out, e.to);
        }
        for fo in &fst.finals[p] {
            pending.push((p, fo.clone()));
        }
    }
    for (p, fo) in pending {
        chain(&mut g, p, &fo, top);
    }
    let real_top = g.len();
    g.push(Vec::new());
    for steps in &mut g {
        for s in steps.iter_mut() {
            if s.to == top {
                s.to = real_top;
            }
        }
    }
    (g, real_top)
}

/// How two output-synchronized paths of an unambiguous transducer relate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Mode {
    /// Both paths took the same steps so far.
    Same,
    /// The left path left the shared node `node` by the step with index
    /// `step`; the right path is still at `node` and must leave it differently.
    RightAvoids { step: usize },
    /// Mirror image of `RightAvoids`.
    LeftAvoids { step: usize },
    /// The paths differ.
    Apart,
}

/// Values produced by two distinct accepting paths of an unambiguous
/// transducer, hence by two distinct inputs.
fn pair_values(fst: &Fst) -> Lang {
    let core = fst.unambiguous();
    if core.finals.iter().all(Vec::is_empty) {
        return Lang::empty();
    }
    let (g, top) = letter_graph(&core);

    type Key = (usize, usize, Mode);
    let mut nfa = Nfa::new();
    let mut ids: HashMap<Key, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut node = |nfa: &mut Nfa, queue: &mut VecDeque<Key>, key: Key| -> usize {
        if let Some(&id) = ids.get(&key) {
            return id;
        }
        let id = nfa.add_state(key.0 == top && key.1 == top && key.2 == Mode::Apart);
        ids.insert(key, id);
        queue.push_back(key);
        id
    };
    let s0 = node(&mut nfa, &mut queue, (core.init, core.init, Mode::Same));
    nfa.add_initial(s0);
    while let Some(key) = queue.pop_front() {
        let me = node(&mut nfa, &mut queue, key);
        let (u, v, mode) = key;
        let mut link = |nfa: &mut Nfa, queue: &mut VecDeque<Key>, write: Option<u8>, to: Key| {
            let t = node(nfa, queue, to);
            match write {
                Some(c) => nfa.add_edge(me, c, t),
                None => nfa.add_eps(me, t),
            }
        };
        let left_ok = |i: usize| !matches!(mode, Mode::LeftAvoids { step } if step == i);
        let right_ok = |j: usize| !matches!(mode, Mode::RightAvoids { step } if step == j);
        let after = |moved_left: Option<usize>, moved_right: Option<usize>| -> Mode {
            match (mode, moved_left, moved_right) {
                (Mode::Same, Some(i), Some(j)) if i == j => Mode::Same,
                (Mode::Same, Some(i), None) => Mode::RightAvoids { step: i },
                (Mode::Same, None, Some(j)) => Mode::LeftAvoids { step: j },
                (Mode::RightAvoids { .. }, _, None) | (Mode::LeftAvoids { .. }, None, _) => mode,
                _ => Mode::Apart,
            }
        };
        if mode == Mode::Same {
            for (i, s) in g[u].iter().enumerate() {
                link(&mut nfa, &mut queue, s.write, (s.to, s.to, Mode::Same));
                if s.write.is_none() {
                    link(&mut nfa, &mut queue, None, (s.to, v, after(Some(i), None)));
                    link(&mut nfa, &mut queue, None, (u, s.to, after(None, Some(i))));
                }
            }
            for (i, su) in g[u].iter().enumerate() {
                for (j, sv) in g[v].iter().enumerate() {
                    if i != j && su.write.is_some() && su.write == sv.write {
                        link(&mut nfa, &mut queue, su.write, (su.to, sv.to, Mode::Apart));
                    }
                }
            }
            continue;
        }
        for (i, su) in g[u].iter().enumerate() {
            if su.write.is_none() && left_ok(i) {
                link(&mut nfa, &mut queue, None, (su.to, v, after(Some(i), None)));
            }
        }
        for (j, sv) in g[v].iter().enumerate() {
            if sv.write.is_none() && right_ok(j) {
                link(&mut nfa, &mut queue, None, (u, sv.to, after(None, Some(j))));
            }
        }
        for (i, su) in g[u].iter().enumerate().filter(|(i, s)| s.write.is_some() && left_ok(*i)) {
            for (j, sv) in g[v].iter().enumerate().filter(|(j, s)| s.write == su.write && right_ok(*j)) {
                link(&mut nfa, &mut queue, su.write, (su.to, sv.to, after(Some(i), Some(j))));
            }
        }
    }
    nfa.determinize()
}

pub fn fiber_profile(f: &RationalFn) -> Result<FiberProfile> {
    let range = f.range();
    let range_size = range.cardinality();
    let co_range = range.complement();
    let c = co_range.cardinality();
    let inf_fiber_values = inf_fiber_values(f);
    let n_inf = inf_fiber_values.cardinality();
    let multi_values = pair_values(&f.as_partial().fst);
    let v_size = multi_values.cardinality();
    let noninj_set = f.preimage(&multi_values);
    let s_size = noninj_set.cardinality();
    let free_cap = match v_size {
        Card::Finite(k) if n_inf == Card::ZERO => {
            let mut total = Card::ZERO;
            for y in multi_values.enumerate_shortlex(k as usize) {
                match fiber(f, &y).cardinality() {
                    Card::Finite(size) => total = total.saturating_add(Card::Finite(size - 1)),
                    Card::Infinite => {
                        return Err(Error::Inconsistent(format!("fiber of {y} is infinite but {y} has no silent cycle")));
                    }
                }
            }
            total
        }
        _ => Card::Infinite,
    };
    let profile = FiberProfile {
        is_generous: range.is_subset_of(&inf_fiber_values),
        is_constant: range_size == Card::Finite(1),
        range,
        range_size,
        co_range,
        c,
        inf_fiber_values,
        n_inf,
        multi_values,
        v_size,
        noninj_set,
        s_size,
        free_cap,
    };
    profile.check_invariants()?;
    Ok(profile)
}

impl FiberProfile {
    pub fn is_injective(&self) -> bool {
        self.s_size == Card::ZERO
    }

    pub fn is_surjective(&self) -> bool {
        self.c == Card::ZERO
    }

    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Inconsistent(msg.to_string()));
        if !self.inf_fiber_values.is_subset_of(&self.multi_values) {
            return fail("infinite-fiber values not contained in multi-values");
        }
        if !self.multi_values.is_subset_of(&self.range) {
            return fail("multi-values not contained in the range");
        }
        if self.c.is_finite() && self.range_size.is_finite() {
            return fail("finite range with finite co-range");
        }
        if self.n_inf == Card::ZERO && self.s_size.is_infinite() && self.v_size.is_finite() {
            return fail("infinitely many non-injective points over finitely many finite fibers");
        }
        if self.n_inf != Card::ZERO && self.s_size.is_finite() {
            return fail("an infinite fiber but finitely many non-injective points");
        }
        if (self.v_size == Card::ZERO) != (self.s_size == Card::ZERO) {
            return fail("multi-values and non-injectivity set disagree on emptiness");
        }
        if let (Card::Finite(s), Card::Finite(v), Card::ZERO) = (self.s_size, self.v_size, self.n_inf) {
            if self.free_cap != Card::Finite(s - v) {
                return fail("free capacity differs from |S| - |V|");
            }
        }
        if self.is_constant && !self.is_generous {
            return fail("constant function that is not generous");
        }
        Ok(())
    }

    pub fn report(&self, k: usize) -> ProfileReport {
        ProfileReport {
            c: self.c,
            n_inf: self.n_inf,
            v_size: self.v_size,
            s_size: self.s_size,
            free_cap: self.free_cap,
            range_size: self.range_size,
            is_generous: self.is_generous,
            is_constant: self.is_constant,
            co_range: self.co_range.summary(k),
            inf_fiber_values: self.inf_fiber_values.summary(k),
            multi_values: self.multi_values.summary(k),
            noninj_set: self.noninj_set.summary(k),
        }
    }
}

/// Serializable view of a profile: cardinalities plus language summaries.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub c: Card,
    pub n_inf: Card,
    pub v_size: Card,
    pub s_size: Card,
    pub free_cap: Card,
    pub range_size: Card,
    pub is_generous: bool,
    pub is_constant: bool,
    pub co_range: LangSummary,
    pub inf_fiber_values: LangSummary,
    pub multi_values: LangSummary,
    pub noninj_set: LangSummary,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_lang;
    use crate::transducer::basis;
    use std::collections::BTreeMap;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn squash() -> RationalFn {
        let rest = parse_lang("!(1.*)").unwrap();
        RationalFn::piecewise(&[
            basis::prepend(&w("1")).inverse_injective().unwrap(),
            basis::constant(&Word::empty()).restrict(&rest),
        ])
        .unwrap()
    }

    /// Multi-values and collisions among inputs of length ≤ `len`.
    fn brute(f: &RationalFn, len: usize) -> BTreeMap<Word, Vec<Word>> {
        let mut m: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
        for x in Word::all_up_to(len) {
            m.entry(f.eval(&x)).or_default().push(x);
        }
        m
    }

    #[test]
    fn identity_and_shift() {
        let p = fiber_profile(&basis::identity()).unwrap();
        assert_eq!((p.c, p.n_inf, p.s_size, p.free_cap), (Card::ZERO, Card::ZERO, Card::ZERO, Card::ZERO));
        assert!(!p.is_generous);
        let h = fiber_profile(&basis::hilbert_shift()).unwrap();
        assert_eq!(h.c, Card::Finite(1));
        assert!(h.co_range.contains(&Word::empty()));
        assert_eq!(h.s_size, Card::ZERO);
        assert_eq!(h.free_cap, Card::ZERO);
    }

    #[test]
    fn constants_and_parity() {
        let p = fiber_profile(&basis::constant(&Word::empty())).unwrap();
        assert!(p.is_constant && p.is_generous);
        assert_eq!(p.inf_fiber_values, Lang::singleton(&Word::empty()));
        assert_eq!(p.c, Card::Infinite);
        let q = fiber_profile(&basis::parity_two(&w("~"), &w("1")).unwrap()).unwrap();
        assert_eq!(q.multi_values, Lang::from_words(&[w("~"), w("1")]));
        assert!(q.noninj_set.is_universal());
    }

    #[test]
    fn squash_profile() {
        let p = fiber_profile(&squash()).unwrap();
        assert_eq!(p.multi_values, Lang::singleton(&Word::empty()));
        let expected = parse_lang("!(1.*) | 1").unwrap();
        assert_eq!(p.noninj_set, expected);
        assert_eq!(p.c, Card::ZERO);
    }

    #[test]
    fn drop_odd_fibers_are_finite() {
        let f = basis::drop_odd();
        let p = fiber_profile(&f).unwrap();
        assert_eq!(p.n_inf, Card::ZERO);
        assert_eq!(p.c, Card::ZERO);
        assert_eq!(p.s_size, Card::Infinite);
        assert_eq!(p.free_cap, Card::Infinite);
        // y of length m has 2^(m-1) + 2^m preimages (m ≥ 1), ε has one
        assert_eq!(fiber(&f, &w("0")).cardinality(), Card::Finite(3));
        assert_eq!(fiber(&f, &w("01")).cardinality(), Card::Finite(6));
        assert_eq!(fiber(&f, &Word::empty()).cardinality(), Card::Finite(1));
        assert!(!p.multi_values.contains(&Word::empty()));
    }

    #[test]
    fn short_multi_values_match_enumeration() {
        let small = parse_lang("0|1").unwrap();
        let f0 = RationalFn::piecewise(&[
            basis::constant(&w("1")).restrict(&small),
            basis::identity().restrict(&small.complement()),
        ])
        .unwrap();
        let fs = [f0, squash(), basis::drop_odd(), basis::hilbert_shift(), basis::parity_two(&w("0"), &w("~")).unwrap()];
        for f in &fs {
            // every preimage of a value of length ≤ 3 has length ≤ 8 for these functions
            let m = brute(f, 8);
            let brute_v: Vec<Word> =
                m.iter().filter(|(y, xs)| y.len() <= 3 && xs.len() >= 2).map(|(y, _)| y.clone()).collect();
            let p = fiber_profile(f).unwrap();
            let sym_v: Vec<Word> = p.multi_values.intersect(&Lang::up_to_length(3)).enumerate_shortlex(100);
            assert_eq!(sym_v, brute_v, "{f:?}");
            match collision_pair(f) {
                Some((a, b)) => {
                    assert_ne!(a, b);
                    assert_eq!(f.eval(&a), f.eval(&b));
                }
                None => assert!(p.is_injective() && m.values().all(|xs| xs.len() == 1)),
            }
        }
    }

    #[test]
    fn injective_compositions_have_no_collisions() {
        let f = basis::prepend(&w("1")).compose(&basis::hilbert_shift());
        assert!(collision_pair(&f).is_none());
        assert!(collision_pair(&basis::drop_odd()).is_some());
    }
}
