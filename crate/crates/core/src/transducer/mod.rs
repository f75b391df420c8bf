//! Functions `{0,1}* → {0,1}*` realized by functional finite-state transducers.
//!
//! [`RationalFn`] is the ambient monoid: total rational functions, closed
//! under composition. [`PartialFn`] carries an explicit regular domain and is
//! used for case-split definitions ([`RationalFn::piecewise`]) and for the
//! inverses of injective functions.

pub mod basis;
pub(crate) mod fst;
pub(crate) mod functional;
pub mod text;

use std::fmt;

use crate::automata::Lang;
use crate::error::{Error, Result};
use crate::word::Word;
use fst::{EpsFst, Fst};

/// A partial function with regular domain, realized by a trimmed functional transducer.
#[derive(Clone, PartialEq, Eq)]
pub struct PartialFn {
    pub(crate) fst: Fst,
}

impl PartialFn {
    /// Checks functionality of an arbitrary transducer.
    pub(crate) fn from_fst(fst: Fst) -> Result<PartialFn> {
        let fst = fst.trim();
        functional::check_functional(&fst).map_err(|witness| Error::NotFunctional { witness })?;
        Ok(PartialFn { fst: dedup_finals(fst.finish()) })
    }

    /// For constructions that are functional by design; verified in debug builds.
    pub(crate) fn from_fst_trusted(fst: Fst) -> PartialFn {
        let fst = fst.finish();
        debug_assert!(functional::check_functional(&fst).is_ok());
        PartialFn { fst: dedup_finals(fst) }
    }

    pub fn domain(&self) -> Lang {
        self.fst.domain()
    }

    pub fn eval(&self, x: &Word) -> Option<Word> {
        self.fst.eval(x)
    }

    pub fn num_states(&self) -> usize {
        self.fst.num_states()
    }

    /// `x ↦ self(inner(x))` on `{x ∈ dom inner : inner(x) ∈ dom self}`.
    pub fn compose(&self, inner: &PartialFn) -> PartialFn {
        PartialFn::from_fst_trusted(Fst::compose(&self.fst, &inner.fst))
    }

    pub fn restrict(&self, lang: &Lang) -> PartialFn {
        PartialFn::from_fst_trusted(self.fst.restrict(lang))
    }

    pub fn image(&self, lang: &Lang) -> Lang {
        self.fst.image(lang)
    }

    pub fn range(&self) -> Lang {
        self.fst.image(&Lang::universal())
    }

    pub fn preimage(&self, lang: &Lang) -> Lang {
        self.fst.preimage(lang)
    }

    /// Same domain and same value everywhere on it.
    pub fn equivalent(&self, other: &PartialFn) -> bool {
        if self.domain() != other.domain() {
            return false;
        }
        let union = Fst::union(&[&self.fst, &other.fst]).trim();
        functional::check_functional(&union).is_ok()
    }

    /// Inverse of an injective partial function; its domain is the range of `self`.
    /// Injectivity must already be established by the caller.
    pub(crate) fn invert_unchecked(&self) -> Result<PartialFn> {
        let f = &self.fst;
        let mut inv = EpsFst { edges: Vec::new(), finals: Vec::new(), init: f.init };
        for _ in 0..f.num_states() {
            inv.add_state();
        }
        let accept = inv.add_state();
        inv.finals[accept] = Some(Word::empty());
        let chain = |inv: &mut EpsFst, from: usize, read: &Word, write: Option<u8>, to: usize| {
            let syms = read.symbols();
            let emit = write.map(Word::symbol).unwrap_or_default();
            if syms.is_empty() {
                inv.edges[from].push((None, emit, to));
                return;
            }
            let mut cur = from;
            for (i, &s) in syms.iter().enumerate() {
                let next = if i + 1 == syms.len() { to } else { inv.add_state() };
                let out = if i == 0 { emit.clone() } else { Word::empty() };
                inv.edges[cur].push((Some(s), out, next));
                cur = next;
            }
        };
        for (p, es) in f.edges.iter().enumerate() {
            for e in es {
                chain(&mut inv, p, &e.out, Some(e.sym), e.to);
            }
            for fo in &f.finals[p] {
                chain(&mut inv, p, fo, None, accept);
            }
        }
        let real = inv.eliminate_eps().map_err(|_| {
            Error::Inconsistent("inverse has an output-producing ε-cycle".into())
        })?;
        PartialFn::from_fst(real)
    }
}

/// After trimming, a functional transducer has at most one distinct final
/// output per state.
fn dedup_finals(mut fst: Fst) -> Fst {
    for f in &mut fst.finals {
        f.truncate(1);
    }
    fst
}

impl fmt::Debug for PartialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialFn({} states, {} edges)", self.fst.num_states(), self.fst.num_edges())
    }
}

/// A total rational function on `{0,1}*`.
#[derive(Clone)]
pub struct RationalFn {
    pub(crate) inner: PartialFn,
    name: Option<String>,
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl RationalFn {
    pub(crate) fn from_fst(fst: Fst) -> Result<RationalFn> {
        RationalFn::from_partial(PartialFn::from_fst(fst)?)
    }

    /// Checks totality; the witness on failure is the shortlex-least uncovered word.
    pub fn from_partial(p: PartialFn) -> Result<RationalFn> {
        if let Some(witness) = p.domain().complement().shortlex_min() {
            return Err(Error::NotTotal { witness });
        }
        Ok(RationalFn { inner: p, name: None })
    }

    pub(crate) fn from_fst_trusted(fst: Fst) -> RationalFn {
        let inner = PartialFn::from_fst_trusted(fst);
        debug_assert!(inner.domain().is_universal());
        RationalFn { inner, name: None }
    }

    pub fn named(mut self, name: impl Into<String>) -> RationalFn {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "<anonymous>".into())
    }

    pub fn as_partial(&self) -> &PartialFn {
        &self.inner
    }

    pub fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    pub fn eval(&self, x: &Word) -> Word {
        self.inner.eval(x).expect("rational functions are total")
    }

    /// `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &RationalFn) -> RationalFn {
        RationalFn { inner: self.inner.compose(&inner.inner), name: None }
    }

    /// Composes a chain `f1 ∘ f2 ∘ ... ∘ fn` (rightmost applied first).
    pub fn compose_all(chain: &[&RationalFn]) -> RationalFn {
        let (last, rest) = chain.split_last().expect("non-empty chain");
        rest.iter().rev().fold((*last).clone(), |acc, f| f.compose(&acc))
    }

    pub fn equivalent(&self, other: &RationalFn) -> bool {
        let union = Fst::union(&[&self.inner.fst, &other.inner.fst]).trim();
        functional::check_functional(&union).is_ok()
    }

    pub fn restrict(&self, lang: &Lang) -> PartialFn {
        self.inner.restrict(lang)
    }

    pub fn image(&self, lang: &Lang) -> Lang {
        self.inner.image(lang)
    }

    pub fn range(&self) -> Lang {
        self.inner.range()
    }

    pub fn preimage(&self, lang: &Lang) -> Lang {
        self.inner.preimage(lang)
    }

    /// Assembles a total function from pieces with pairwise disjoint domains covering `{0,1}*`.
    pub fn piecewise(pieces: &[PartialFn]) -> Result<RationalFn> {
        let domains: Vec<Lang> = pieces.iter().map(PartialFn::domain).collect();
        for i in 0..domains.len() {
            for j in i + 1..domains.len() {
                if let Some(witness) = domains[i].intersect(&domains[j]).shortlex_min() {
                    return Err(Error::DomainsOverlap { witness });
                }
            }
        }
        let covered = domains.iter().fold(Lang::empty(), |acc, d| acc.union(d));
        if let Some(witness) = covered.complement().shortlex_min() {
            return Err(Error::DomainsDoNotCover { witness });
        }
        let parts: Vec<&Fst> = pieces.iter().map(|p| &p.fst).collect();
        Ok(RationalFn::from_fst_trusted(Fst::union(&parts)))
    }

    /// Inverse of an injective function, with domain equal to the range.
    pub fn inverse_injective(&self) -> Result<PartialFn> {
        if let Some((first, second)) = crate::profile::collision_pair(self) {
            return Err(Error::NotInjective { first, second });
        }
        self.inner.invert_unchecked()
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFn({}, {} states)", self.label(), self.num_states())
    }
}

#[cfg(test)]
mod tests {
    use super::basis::*;
    use super::*;
    use crate::regex::parse_lang;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn l(s: &str) -> Lang {
        parse_lang(s).unwrap()
    }

    /// Direct model of drop_odd used as an independent oracle.
    fn drop_odd_model(x: &Word) -> Word {
        Word::from_symbols(x.symbols().iter().step_by(2).copied().collect())
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(identity().eval(&w("011")), w("011"));
        assert_eq!(constant(&Word::empty()).eval(&w("0110")), Word::empty());
        assert_eq!(drop_odd().eval(&w("0110")), w("01"));
        assert_eq!(hilbert_shift().eval(&w("00")), w("000"));
        assert_eq!(hilbert_shift().eval(&w("01")), w("01"));
        let swap = cylinder_swap(&w("0"), &w("1")).unwrap();
        assert_eq!(swap.eval(&w("01")), w("11"));
        assert_eq!(swap.eval(&Word::empty()), Word::empty());
    }

    #[test]
    fn composition_matches_double_simulation() {
        let d = drop_odd();
        let dd = d.compose(&d);
        for x in Word::all_up_to(8) {
            assert_eq!(dd.eval(&x), drop_odd_model(&drop_odd_model(&x)));
        }
        let x = w("01101001");
        let s = x.symbols();
        assert_eq!(dd.eval(&x), Word::from_symbols(vec![s[0], s[4]]));
    }

    #[test]
    fn identity_and_constant_laws() {
        let g = hilbert_shift();
        assert!(identity().compose(&g).equivalent(&g));
        assert!(g.compose(&identity()).equivalent(&g));
        let c = constant(&w("10"));
        assert!(c.compose(&g).equivalent(&c));
        assert!(!identity().equivalent(&hilbert_shift()));
    }

    #[test]
    fn equivalence_against_fused_transducer() {
        // prepend(1) ∘ drop_odd, written as a single hand-built transducer
        let fused = text::parse_transducer(
            "transducer v1\ninitial 0\nstate 0 final output=1\nstate 1 final\nstate 2 final\n\
             trans 0 0 10 2\ntrans 0 1 11 2\ntrans 1 0 0 2\ntrans 1 1 1 2\ntrans 2 0 - 1\ntrans 2 1 - 1\n",
        )
        .unwrap();
        let composed = prepend(&w("1")).compose(&drop_odd());
        for x in Word::all_up_to(12) {
            assert_eq!(composed.eval(&x), fused.eval(&x));
        }
        assert!(composed.equivalent(&fused));
    }

    #[test]
    fn piecewise_assembly() {
        let id = identity();
        let whole = RationalFn::piecewise(&[id.restrict(&Lang::universal())]).unwrap();
        assert!(whole.equivalent(&id));

        let c0 = l("0.*");
        let err = RationalFn::piecewise(&[id.restrict(&c0), id.restrict(&c0)]).unwrap_err();
        assert_eq!(err, Error::DomainsOverlap { witness: w("0") });

        let err = RationalFn::piecewise(&[id.restrict(&c0)]).unwrap_err();
        assert_eq!(err, Error::DomainsDoNotCover { witness: Word::empty() });

        let f = hilbert_shift();
        let c1 = l("1.*");
        let g = RationalFn::piecewise(&[
            f.restrict(&c1),
            constant(&Word::empty()).restrict(&c1.complement()),
        ])
        .unwrap();
        assert_eq!(g.eval(&w("10")), f.eval(&w("10")));
        assert_eq!(g.eval(&w("0")), Word::empty());
    }

    #[test]
    fn inverses() {
        let inv = prepend(&w("1")).inverse_injective().unwrap();
        assert_eq!(inv.domain(), l("1.*"));
        assert_eq!(inv.eval(&w("101")), Some(w("01")));
        let inv = hilbert_shift().inverse_injective().unwrap();
        assert_eq!(inv.eval(&w("000")), Some(w("00")));
        assert_eq!(inv.eval(&Word::empty()), None);
        match drop_odd().inverse_injective() {
            Err(Error::NotInjective { first, second }) => {
                assert_ne!(first, second);
                assert_eq!(drop_odd().eval(&first), drop_odd().eval(&second));
            }
            other => panic!("expected NotInjective, got {other:?}"),
        }
    }

    #[test]
    fn image_and_preimage() {
        let lang = l("0*1");
        assert_eq!(identity().image(&lang), lang);
        let nonempty = Lang::universal().difference(&Lang::singleton(&Word::empty()));
        assert_eq!(hilbert_shift().range(), nonempty);
        // enumeration oracle for the shift's range
        let attained: std::collections::BTreeSet<Word> =
            Word::all_up_to(10).map(|x| hilbert_shift().eval(&x)).collect();
        assert!(!attained.contains(&Word::empty()));
        assert!(Word::all_up_to(10).skip(1).all(|y| attained.contains(&y)));
        let eps = Lang::singleton(&Word::empty());
        assert!(constant(&Word::empty()).preimage(&eps).is_universal());
    }
}
