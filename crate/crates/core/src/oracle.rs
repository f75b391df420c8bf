//! Brute-force ground truth: exhaustive evaluation on short inputs, and a
//! direct evaluation of the `G_n` definition over a finite candidate family.
//! Nothing here trusts the profile's derived quantities beyond using them to
//! pick candidates.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::automata::Lang;
use crate::error::{Error, Result};
use crate::profile::{fiber, FiberProfile};
use crate::transducer::RationalFn;
use crate::word::{Card, Word};

/// Largest supported length bound (2^15 − 1 evaluations).
pub const MAX_LEN: usize = 14;
/// Default length bound for profiles.
pub const DEFAULT_LEN: usize = 12;
/// Default length bound for pointwise chain checks.
pub const CHAIN_LEN: usize = 10;

/// Counts over all inputs of length at most `max_len`.
#[derive(Clone, Debug)]
pub struct EmpiricalProfile {
    pub max_len: usize,
    /// value ↦ (number of inputs, first two inputs in shortlex order)
    pub values: BTreeMap<Word, (u64, Vec<Word>)>,
}

impl EmpiricalProfile {
    pub fn count(&self, y: &Word) -> u64 {
        self.values.get(y).map_or(0, |v| v.0)
    }

    pub fn attained(&self, y: &Word) -> bool {
        self.values.contains_key(y)
    }

    /// Words of length at most `len` never attained.
    pub fn missing_up_to(&self, len: usize) -> Vec<Word> {
        Word::all_up_to(len).filter(|y| !self.attained(y)).collect()
    }

    /// Pairs of distinct inputs sharing a value, one per value.
    pub fn collisions(&self) -> Vec<(Word, Word)> {
        self.values.values().filter(|v| v.1.len() == 2).map(|v| (v.1[0].clone(), v.1[1].clone())).collect()
    }
}

pub fn empirical_profile(f: &RationalFn, max_len: usize) -> Result<EmpiricalProfile> {
    if max_len > MAX_LEN {
        return Err(Error::BoundExceeded { bound: max_len, max: MAX_LEN });
    }
    let inputs: Vec<Word> = Word::all_up_to(max_len).collect();
    let outputs: Vec<Word> = inputs.par_iter().map(|x| f.eval(x)).collect();
    let mut values: BTreeMap<Word, (u64, Vec<Word>)> = BTreeMap::new();
    for (x, y) in inputs.into_iter().zip(outputs) {
        let e = values.entry(y).or_insert((0, Vec::new()));
        e.0 += 1;
        if e.1.len() < 2 {
            e.1.push(x);
        }
    }
    Ok(EmpiricalProfile { max_len, values })
}

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub max_len: usize,
    pub findings: Vec<Finding>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.findings.iter().all(|f| f.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| !f.ok)
    }
}

fn longest(l: &Lang) -> Option<usize> {
    let n = l.cardinality().finite()?;
    l.enumerate_shortlex(n as usize).last().map(Word::len).or(Some(0))
}

/// Compares the symbolic profile with exhaustive evaluation. `max_len` is the
/// large bound; infinite fibers must grow strictly between `max_len − 2` and
/// `max_len`.
pub fn agreement_check(f: &RationalFn, p: &FiberProfile, max_len: usize) -> Result<AgreementReport> {
    let big = empirical_profile(f, max_len)?;
    let small = empirical_profile(f, max_len.saturating_sub(2))?;
    let mut findings = Vec::new();
    let mut note = |check: &str, ok: bool, detail: String| findings.push(Finding { check: check.into(), ok, detail });

    // range: short values, with the shortest preimage as the relevant witness
    let short = max_len / 2;
    let mut bad = Vec::new();
    for y in Word::all_up_to(short) {
        let in_range = p.range.contains(&y);
        let seen = big.attained(&y);
        let ok = match (in_range, seen) {
            (false, true) => false,
            (true, false) => fiber(f, &y).shortlex_min().is_some_and(|x| x.len() > max_len),
            _ => true,
        };
        if !ok {
            bad.push(y.to_string());
        }
    }
    note("range", bad.is_empty(), format!("values of length <= {short} checked; mismatches: {bad:?}"));

    if let Card::Finite(c) = p.c {
        let co = p.co_range.enumerate_shortlex(c as usize);
        let hit: Vec<String> = co.iter().filter(|y| big.attained(y)).map(Word::to_string).collect();
        note("co-range", hit.is_empty(), format!("{c} missing values never attained; attained: {hit:?}"));
    }

    // fibers of the 30 shortlex-smallest words
    let mut bad = Vec::new();
    for y in Word::all_up_to(5).take(30) {
        let fib = fiber(f, &y);
        let card = fib.cardinality();
        let in_inf = p.inf_fiber_values.contains(&y);
        let ok = match card {
            Card::Infinite => in_inf && big.count(&y) > small.count(&y),
            Card::Finite(k) => {
                let exact = longest(&fib).is_some_and(|l| l <= max_len);
                !in_inf && (big.count(&y) == k || (!exact && big.count(&y) < k))
            }
        };
        if !ok {
            bad.push(format!("{y}: symbolic {card}, counts {}/{}", small.count(&y), big.count(&y)));
        }
    }
    note("fibers", bad.is_empty(), format!("30 values; mismatches: {bad:?}"));

    for y in p.inf_fiber_values.enumerate_shortlex(10) {
        let ok = big.count(&y) > small.count(&y);
        note(
            "infinite-fiber-growth",
            ok,
            format!("{y}: {} -> {} preimages", small.count(&y), big.count(&y)),
        );
    }

    // injectivity, two independent symbolic routes plus enumeration
    let by_inverse = f.as_partial().invert_unchecked().is_ok();
    let empirical_collision = big.collisions().into_iter().next();
    let symbolic_injective = p.is_injective();
    let ok = symbolic_injective == by_inverse
        && (symbolic_injective == empirical_collision.is_none() || (!symbolic_injective && p.noninj_set.shortlex_min().is_some_and(|x| {
            fiber(f, &f.eval(&x)).difference(&Lang::singleton(&x)).shortlex_min().is_some_and(|z| z.len() > max_len)
        })));
    note(
        "injectivity",
        ok,
        format!(
            "profile: {symbolic_injective}, inverse relation functional: {by_inverse}, collision found: {empirical_collision:?}"
        ),
    );

    // non-injectivity set on short inputs
    let mut bad = Vec::new();
    for x in Word::all_up_to(short) {
        let y = f.eval(&x);
        let shared = big.count(&y) >= 2;
        let sym = p.noninj_set.contains(&x);
        let ok = match (sym, shared) {
            (false, true) => false,
            (true, false) => {
                fiber(f, &y).difference(&Lang::singleton(&x)).shortlex_min().is_some_and(|z| z.len() > max_len)
            }
            _ => true,
        };
        if !ok {
            bad.push(x.to_string());
        }
    }
    note("non-injectivity-set", bad.is_empty(), format!("inputs of length <= {short}; mismatches: {bad:?}"));

    Ok(AgreementReport { max_len, findings })
}

#[derive(Clone, Debug, Serialize)]
pub struct GnVerdict {
    pub n: u32,
    pub member: bool,
    pub min_deficiency: Card,
    pub minimizer: Vec<Word>,
    pub candidates: usize,
}

/// Evaluates `|X \ f[X \ A]| ≥ n` for every `n`-subset `A` of a finite pool.
///
/// The pool holds the first `n` infinite-fiber values with `n + 1` preimages
/// each, the first `n` other multi-values with up to `n + 1` preimages each,
/// and the first `n` injective points. It suffices: the deficiency of `A` is
/// `c` plus the number of values whose whole fiber lies in `A`. If the free
/// capacity is at least `n`, the pool contains `n` points that can be removed
/// without erasing any value, so the minimum `c` is attained inside it. If it
/// is below `n`, there are fewer than `n` multi-values, all fibers are finite
/// and at most `n + 1` large, so every multi-fiber lies in the pool, and each
/// point beyond the free ones must erase a value, which injective points in
/// the pool achieve one at a time.
pub fn gn_oracle(f: &RationalFn, p: &FiberProfile, n: u32) -> GnVerdict {
    let k = n as usize;
    let mut pool: Vec<Word> = Vec::new();
    for y in p.inf_fiber_values.enumerate_shortlex(k) {
        pool.extend(fiber(f, &y).enumerate_shortlex(k + 1));
    }
    for y in p.multi_values.difference(&p.inf_fiber_values).enumerate_shortlex(k) {
        pool.extend(fiber(f, &y).enumerate_shortlex(k + 1));
    }
    pool.extend(p.noninj_set.complement().enumerate_shortlex(k));
    pool.sort();
    pool.dedup();
    let subsets = subsets_of_size(pool.len(), k);
    let best = subsets
        .par_iter()
        .map(|idx| {
            let a: Vec<Word> = idx.iter().map(|&i| pool[i].clone()).collect();
            let rest = Lang::from_words(&a).complement();
            let missing = f.image(&rest).complement().cardinality();
            (missing, a)
        })
        .min();
    let (min_deficiency, minimizer) = best.unwrap_or((Card::Infinite, Vec::new()));
    GnVerdict { n, member: min_deficiency.at_least(n as u64), min_deficiency, minimizer, candidates: subsets.len() }
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    go(0, m, k, &mut cur, &mut out);
    out
}

/// Pointwise comparison on every input of length at most `max_len`; returns
/// the first disagreement.
pub fn first_disagreement(f: &RationalFn, g: &RationalFn, max_len: usize) -> Option<Word> {
    let inputs: Vec<Word> = Word::all_up_to(max_len).collect();
    inputs.into_par_iter().find_first(|x| f.eval(x) != g.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::{is_member, Lam, MonoidId};
    use crate::profile::fiber_profile;
    use crate::regex::parse_lang;
    use crate::transducer::basis;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn empirical_counts() {
        let id = empirical_profile(&basis::identity(), 4).unwrap();
        assert!(Word::all_up_to(4).all(|y| id.count(&y) == 1));
        let c = empirical_profile(&basis::constant(&Word::empty()), 4).unwrap();
        assert_eq!(c.count(&Word::empty()), 31);
        assert_eq!(c.values.len(), 1);
        let d = empirical_profile(&basis::drop_odd(), 6).unwrap();
        assert_eq!(d.count(&Word::empty()), 1);
        assert_eq!(d.count(&w("0")), 3);
        assert!(matches!(empirical_profile(&basis::identity(), 15), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn shift_misses_only_the_empty_word() {
        let e = empirical_profile(&basis::hilbert_shift(), 12).unwrap();
        assert_eq!(e.missing_up_to(11), vec![Word::empty()]);
    }

    #[test]
    fn agreement_on_basis() {
        for f in [basis::identity(), basis::hilbert_shift(), basis::drop_odd(), basis::prefix_eraser()] {
            let p = fiber_profile(&f).unwrap();
            let r = agreement_check(&f, &p, 12).unwrap();
            assert!(r.passed(), "{f:?}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn gn_oracle_matches_closed_form() {
        let small = parse_lang("0|1").unwrap();
        let f0 = RationalFn::piecewise(&[
            basis::constant(&w("1")).restrict(&small),
            basis::identity().restrict(&small.complement()),
        ])
        .unwrap();
        let rest = parse_lang("!(1.*)").unwrap();
        let squash = RationalFn::piecewise(&[
            basis::prepend(&w("1")).inverse_injective().unwrap(),
            basis::constant(&Word::empty()).restrict(&rest),
        ])
        .unwrap();
        for f in [basis::identity(), f0.clone(), squash, basis::drop_odd(), basis::constant(&w("1"))] {
            let p = fiber_profile(&f).unwrap();
            for n in 1..=3 {
                let v = gn_oracle(&f, &p, n);
                assert_eq!(v.member, is_member(&p, MonoidId::G(Lam::Finite(n))), "{f:?} n={n}");
            }
        }
        let p = fiber_profile(&f0).unwrap();
        assert_eq!(gn_oracle(&f0, &p, 2).min_deficiency, Card::Finite(2));
    }

    #[test]
    fn subsets() {
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(2, 3).len(), 0);
    }
}
