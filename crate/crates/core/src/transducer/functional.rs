//! Functionality decision: the input-synchronized squared product with
//! output-delay tracking.
//!
//! In a trimmed transducer that realizes a function, every coaccessible
//! state pair of the squared product is reached with exactly one delay. The
//! check therefore propagates delays breadth-first and stops at the first pair
//! that sees two different delays, incompatible outputs, or mismatching final
//! outputs.

use std::collections::{HashMap, VecDeque};

use super::fst::Fst;
use crate::word::Word;

/// Output lag between two runs: the leading side and the words it is ahead by.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Delay {
    pub left_ahead: bool,
    pub word: Word,
}

impl Delay {
    pub fn balanced() -> Delay {
        Delay { left_ahead: true, word: Word::empty() }
    }

    pub fn is_balanced(&self) -> bool {
        self.word.is_empty()
    }

    /// Appends `left` / `right` to the two runs. `None` if they become incompatible.
    pub fn advance(&self, left: &Word, right: &Word) -> Option<Delay> {
        let (l, r) = if self.left_ahead {
            (self.word.concat(left), right.clone())
        } else {
            (left.clone(), self.word.concat(right))
        };
        if l.is_prefix_of(&r) {
            let rest = r.suffix_from(l.len());
            Some(Delay { left_ahead: rest.is_empty(), word: rest })
        } else if r.is_prefix_of(&l) {
            Some(Delay { left_ahead: true, word: l.suffix_from(r.len()) })
        } else {
            None
        }
    }
}

/// Decides functionality of a trimmed transducer. On failure returns an input
/// word with two distinct outputs.
pub(crate) fn check_functional(f: &Fst) -> Result<(), Word> {
    let n = f.num_states();
    let idx = |p: usize, q: usize| p * n + q;
    // forward exploration of the pair graph
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut adj: Vec<Vec<(u8, usize, usize, usize)>> = Vec::new(); // (sym, edge_l, edge_r, target pair slot)
    let start = idx(f.init, f.init);
    seen.insert(start, 0);
    pairs.push((f.init, f.init));
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut row = Vec::new();
        for (el, e) in f.edges[p].iter().enumerate() {
            for (er, g) in f.edges[q].iter().enumerate() {
                if e.sym != g.sym {
                    continue;
                }
                let key = idx(e.to, g.to);
                let slot = *seen.entry(key).or_insert_with(|| {
                    pairs.push((e.to, g.to));
                    pairs.len() - 1
                });
                row.push((e.sym, el, er, slot));
            }
        }
        adj.push(row);
        i += 1;
    }
    let m = pairs.len();
    let is_final = |s: usize| {
        let (p, q) = pairs[s];
        !f.finals[p].is_empty() && !f.finals[q].is_empty()
    };
    // coaccessibility in the pair graph
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (s, row) in adj.iter().enumerate() {
        for &(_, _, _, t) in row {
            rev[t].push(s);
        }
    }
    let mut co: Vec<bool> = (0..m).map(is_final).collect();
    let mut stack: Vec<usize> = (0..m).filter(|&s| co[s]).collect();
    while let Some(s) = stack.pop() {
        for &p in &rev[s] {
            if !co[p] {
                co[p] = true;
                stack.push(p);
            }
        }
    }
    if !co[0] {
        return Ok(());
    }
    // shortest completion from each coaccessible pair, for witnesses
    let completion = |from: usize| -> Word {
        let mut parent: HashMap<usize, (usize, u8)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut visited = vec![false; m];
        visited[from] = true;
        while let Some(s) = queue.pop_front() {
            if is_final(s) {
                let mut syms = Vec::new();
                let mut cur = s;
                while let Some(&(p, a)) = parent.get(&cur) {
                    syms.push(a);
                    cur = p;
                }
                syms.reverse();
                return Word::from_symbols(syms);
            }
            for &(a, _, _, t) in &adj[s] {
                if co[t] && !visited[t] {
                    visited[t] = true;
                    parent.insert(t, (s, a));
                    queue.push_back(t);
                }
            }
        }
        Word::empty()
    };
    let pick = |candidates: &[Word]| -> Word {
        candidates
            .iter()
            .find(|x| f.outputs(x).len() >= 2)
            .cloned()
            .unwrap_or_else(|| candidates[0].clone())
    };

    let mut delay: Vec<Option<(Delay, Word)>> = vec![None; m];
    delay[0] = Some((Delay::balanced(), Word::empty()));
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let (d, input) = delay[s].clone().expect("queued pairs carry a delay");
        let (p, q) = pairs[s];
        if is_final(s) {
            for fl in &f.finals[p] {
                for fr in &f.finals[q] {
                    match d.advance(fl, fr) {
                        Some(end) if end.is_balanced() => {}
                        _ => return Err(input),
                    }
                }
            }
        }
        for &(a, el, er, t) in &adj[s] {
            if !co[t] {
                continue;
            }
            let mut next_input = input.clone();
            next_input.push(a);
            let Some(nd) = d.advance(&f.edges[p][el].out, &f.edges[q][er].out) else {
                return Err(next_input.concat(&completion(t)));
            };
            match &delay[t] {
                None => {
                    delay[t] = Some((nd, next_input));
                    queue.push_back(t);
                }
                Some((old, old_input)) if *old != nd => {
                    let z = completion(t);
                    return Err(pick(&[old_input.concat(&z), next_input.concat(&z)]));
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn delay_arithmetic() {
        let d = Delay::balanced().advance(&w("01"), &w("0")).unwrap();
        assert_eq!(d, Delay { left_ahead: true, word: w("1") });
        let d2 = d.advance(&Word::empty(), &w("10")).unwrap();
        assert_eq!(d2, Delay { left_ahead: false, word: w("0") });
        assert!(d2.advance(&w("1"), &Word::empty()).is_none());
        assert!(d2.advance(&w("0"), &Word::empty()).unwrap().is_balanced());
    }

    #[test]
    fn detects_two_outputs() {
        let mut f = Fst::new();
        let s = f.add_state();
        let t = f.add_state();
        f.add_edge(s, 0, w("0"), t);
        f.add_edge(s, 0, w("1"), t);
        f.add_final(t, Word::empty());
        assert_eq!(check_functional(&f.trim()).err(), Some(w("0")));
    }

    #[test]
    fn ambiguous_but_functional() {
        // two runs on 0 that emit "01" at different times
        let mut f = Fst::new();
        let s = f.add_state();
        let a = f.add_state();
        let b = f.add_state();
        f.add_edge(s, 0, w("01"), a);
        f.add_edge(s, 0, Word::empty(), b);
        f.add_final(a, Word::empty());
        f.add_final(b, w("01"));
        assert!(check_functional(&f.trim()).is_ok());
    }
}
