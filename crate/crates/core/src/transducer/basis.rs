//! Named generators. Each one is built directly as a transducer and is
//! functional and total by construction.

use super::fst::Fst;
use super::RationalFn;
use crate::error::{Error, Result};
use crate::word::Word;

/// Adds an identity state and returns it.
fn identity_state(f: &mut Fst) -> usize {
    let s = f.add_state();
    for a in 0..2 {
        f.add_edge(s, a, Word::symbol(a), s);
    }
    f.add_final(s, Word::empty());
    s
}

pub fn identity() -> RationalFn {
    let mut f = Fst::new();
    f.init = identity_state(&mut f);
    RationalFn::from_fst_trusted(f).named("identity")
}

/// `x ↦ w`
pub fn constant(w: &Word) -> RationalFn {
    let mut f = Fst::new();
    let s = f.add_state();
    for a in 0..2 {
        f.add_edge(s, a, Word::empty(), s);
    }
    f.add_final(s, w.clone());
    RationalFn::from_fst_trusted(f).named(format!("constant({w})"))
}

/// `x ↦ wx`
pub fn prepend(w: &Word) -> RationalFn {
    let mut f = Fst::new();
    let start = f.add_state();
    let id = identity_state(&mut f);
    for a in 0..2 {
        f.add_edge(start, a, w.concat(&Word::symbol(a)), id);
    }
    f.add_final(start, w.clone());
    f.init = start;
    RationalFn::from_fst_trusted(f).named(format!("prepend({w})"))
}

/// Keeps the symbols at even (0-indexed) positions.
pub fn drop_odd() -> RationalFn {
    let mut f = Fst::new();
    let even = f.add_state();
    let odd = f.add_state();
    for a in 0..2 {
        f.add_edge(even, a, Word::symbol(a), odd);
        f.add_edge(odd, a, Word::empty(), even);
    }
    f.add_final(even, Word::empty());
    f.add_final(odd, Word::empty());
    f.init = even;
    RationalFn::from_fst_trusted(f).named("drop_odd")
}

/// `0^k ↦ 0^(k+1)`, every other word fixed.
pub fn hilbert_shift() -> RationalFn {
    chain_shift(&Word::empty()).named("hilbert_shift")
}

/// Shifts the chain `w, w0, w00, ...` one step along (`w0^k ↦ w0^(k+1)`) and
/// fixes everything else. Injective with co-range `{w}`.
pub fn chain_shift(w: &Word) -> RationalFn {
    let mut f = Fst::new();
    let syms = w.symbols();
    // prefix states: read w[..i], nothing emitted yet
    let prefix: Vec<usize> = (0..syms.len()).map(|_| f.add_state()).collect();
    let chain = f.add_state();
    let id = identity_state(&mut f);
    for (i, &p) in prefix.iter().enumerate() {
        f.add_final(p, w.prefix(i));
        for a in 0..2 {
            if a == syms[i] {
                let (out, to) = if i + 1 == syms.len() { (w.clone(), chain) } else { (Word::empty(), prefix[i + 1]) };
                f.add_edge(p, a, out, to);
            } else {
                f.add_edge(p, a, w.prefix(i).concat(&Word::symbol(a)), id);
            }
        }
    }
    f.add_edge(chain, 0, Word::symbol(0), chain);
    f.add_edge(chain, 1, Word::symbol(1), id);
    f.add_final(chain, Word::symbol(0));
    f.init = prefix.first().copied().unwrap_or(chain);
    RationalFn::from_fst_trusted(f).named(format!("chain_shift({w})"))
}

/// Trie over the prefixes of `words`; `on_word(p, a)` decides what happens when
/// the prefix `p·a` is complete, `leave` the output on leaving the trie.
fn prefix_machine(
    words: &[&Word],
    proper_only: bool,
    at_end: impl Fn(&Word) -> Word,
    swap: impl Fn(&Word) -> Option<Word>,
) -> Fst {
    let mut prefixes: Vec<Word> = Vec::new();
    for w in words {
        let top = if proper_only { w.len() } else { w.len() + 1 };
        for i in 0..top {
            let p = w.prefix(i);
            if !prefixes.contains(&p) {
                prefixes.push(p);
            }
        }
    }
    let mut f = Fst::new();
    let ids: Vec<usize> = prefixes.iter().map(|_| f.add_state()).collect();
    let id = identity_state(&mut f);
    for (k, p) in prefixes.iter().enumerate() {
        f.add_final(ids[k], at_end(p));
        for a in 0..2 {
            let q = p.concat(&Word::symbol(a));
            if let Some(img) = swap(&q) {
                f.add_edge(ids[k], a, img, id);
            } else if let Some(j) = prefixes.iter().position(|r| *r == q) {
                f.add_edge(ids[k], a, Word::empty(), ids[j]);
            } else {
                f.add_edge(ids[k], a, at_end(&q), id);
            }
        }
    }
    f.init = ids[0];
    f
}

/// `ux ↔ vx`, everything else fixed. Requires `u`, `v` prefix-incomparable.
pub fn cylinder_swap(u: &Word, v: &Word) -> Result<RationalFn> {
    if u.is_prefix_of(v) || v.is_prefix_of(u) {
        return Err(Error::Precondition(format!("cylinder_swap: {u} and {v} are prefix-comparable")));
    }
    let f = prefix_machine(&[u, v], true, |p| p.clone(), |q| {
        if q == u {
            Some(v.clone())
        } else if q == v {
            Some(u.clone())
        } else {
            None
        }
    });
    Ok(RationalFn::from_fst_trusted(f).named(format!("cylinder_swap({u},{v})")))
}

/// Exchanges the two words `u` and `v`, fixing everything else.
pub fn transposition(u: &Word, v: &Word) -> Result<RationalFn> {
    if u == v {
        return Err(Error::Precondition("transposition: words must differ".into()));
    }
    let f = prefix_machine(
        &[u, v],
        false,
        |p| {
            if p == u {
                v.clone()
            } else if p == v {
                u.clone()
            } else {
                p.clone()
            }
        },
        |_| None,
    );
    Ok(RationalFn::from_fst_trusted(f).named(format!("transposition({u},{v})")))
}

/// `x ↦ w0` if `|x|` is even, `w1` otherwise.
pub fn parity_two(w0: &Word, w1: &Word) -> Result<RationalFn> {
    if w0 == w1 {
        return Err(Error::Precondition("parity_two: values must differ".into()));
    }
    let mut f = Fst::new();
    let even = f.add_state();
    let odd = f.add_state();
    for a in 0..2 {
        f.add_edge(even, a, Word::empty(), odd);
        f.add_edge(odd, a, Word::empty(), even);
    }
    f.add_final(even, w0.clone());
    f.add_final(odd, w1.clone());
    f.init = even;
    Ok(RationalFn::from_fst_trusted(f).named(format!("parity_two({w0},{w1})")))
}

/// `1^k 0 z ↦ z`, `1^k ↦ ε`: onto, with every fiber infinite.
pub fn prefix_eraser() -> RationalFn {
    let mut f = Fst::new();
    let ones = f.add_state();
    let id = identity_state(&mut f);
    f.add_edge(ones, 1, Word::empty(), ones);
    f.add_edge(ones, 0, Word::empty(), id);
    f.add_final(ones, Word::empty());
    f.init = ones;
    RationalFn::from_fst_trusted(f).named("prefix_eraser")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn swap_model(u: &Word, v: &Word, x: &Word) -> Word {
        if let Some(rest) = x.strip_prefix(u) {
            v.concat(&rest)
        } else if let Some(rest) = x.strip_prefix(v) {
            u.concat(&rest)
        } else {
            x.clone()
        }
    }

    #[test]
    fn generators_match_their_definitions() {
        let pairs = [(w("0"), w("1")), (w("00"), w("1")), (w("01"), w("10")), (w("011"), w("00"))];
        for (u, v) in &pairs {
            let f = cylinder_swap(u, v).unwrap();
            for x in Word::all_up_to(7) {
                assert_eq!(f.eval(&x), swap_model(u, v, &x), "swap({u},{v}) at {x}");
            }
            let t = transposition(u, v).unwrap();
            for x in Word::all_up_to(7) {
                let want = if x == *u { v.clone() } else if x == *v { u.clone() } else { x.clone() };
                assert_eq!(t.eval(&x), want);
            }
        }
        for base in [w("~"), w("1"), w("10")] {
            let f = chain_shift(&base);
            for x in Word::all_up_to(7) {
                let on_chain = x.strip_prefix(&base).is_some_and(|r| r.symbols().iter().all(|&s| s == 0));
                let want = if on_chain { x.concat(&w("0")) } else { x.clone() };
                assert_eq!(f.eval(&x), want, "chain_shift({base}) at {x}");
            }
        }
        let p = parity_two(&w("~"), &w("1")).unwrap();
        assert_eq!(p.eval(&w("01")), w("~"));
        assert_eq!(p.eval(&w("0")), w("1"));
        let e = prefix_eraser();
        assert_eq!(e.eval(&w("11001")), w("01"));
        assert_eq!(e.eval(&w("111")), w("~"));
        assert_eq!(prepend(&w("10")).eval(&w("1")), w("101"));
    }

    #[test]
    fn preconditions() {
        assert!(cylinder_swap(&w("0"), &w("01")).is_err());
        assert!(parity_two(&w("1"), &w("1")).is_err());
        assert!(transposition(&w("1"), &w("1")).is_err());
    }
}
