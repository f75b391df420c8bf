//! Constructive witnesses. Each operation builds concrete functions and
//! returns a [`WitnessChain`]: a composition identity together with the
//! memberships it relies on, checkable by the equivalence decision.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::Lang;
use crate::error::{Error, Result};
use crate::monoids::{is_member, min_deficiency, Lam, MonoidId};
use crate::oracle::{first_disagreement, CHAIN_LEN};
use crate::profile::{fiber, fiber_profile, FiberProfile};
use crate::transducer::{basis, text, PartialFn, RationalFn};
use crate::word::{Card, Word};

/// A property asserted of one binding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    Member(MonoidId),
    NotMember(MonoidId),
    Generous,
    InfiniteRange,
    Injective,
    InfiniteCoRange,
}

impl Property {
    pub fn holds(&self, p: &FiberProfile) -> bool {
        match self {
            Property::Member(m) => is_member(p, *m),
            Property::NotMember(m) => !is_member(p, *m),
            Property::Generous => p.is_generous,
            Property::InfiniteRange => p.range_size.is_infinite(),
            Property::Injective => p.is_injective(),
            Property::InfiniteCoRange => p.c.is_infinite(),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Member(m) => write!(f, "in {m}"),
            Property::NotMember(m) => write!(f, "not in {m}"),
            Property::Generous => f.write_str("generous"),
            Property::InfiniteRange => f.write_str("infinite range"),
            Property::Injective => f.write_str("injective"),
            Property::InfiniteCoRange => f.write_str("infinite co-range"),
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Property> {
        Ok(match s {
            "generous" => Property::Generous,
            "infinite range" => Property::InfiniteRange,
            "injective" => Property::Injective,
            "infinite co-range" => Property::InfiniteCoRange,
            _ => {
                if let Some(m) = s.strip_prefix("not in ") {
                    Property::NotMember(m.parse()?)
                } else if let Some(m) = s.strip_prefix("in ") {
                    Property::Member(m.parse()?)
                } else {
                    return Err(Error::Parse { line: 0, msg: format!("unknown property {s:?}") });
                }
            }
        })
    }
}

/// `claim = expression[0] ∘ expression[1] ∘ ...` over named functions.
#[derive(Clone, Debug)]
pub struct WitnessChain {
    pub kind: String,
    pub bindings: Vec<(String, RationalFn)>,
    pub claim: String,
    pub expression: Vec<String>,
    pub assertions: Vec<(String, Property)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssertionResult {
    pub name: String,
    pub property: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verification {
    pub equivalent: bool,
    pub pointwise_len: usize,
    pub disagreement: Option<String>,
    pub assertions: Vec<AssertionResult>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BindingDoc {
    pub name: String,
    pub transducer: String,
}

/// Self-contained serialized chain: every function is included as a
/// transducer document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainDocument {
    pub schema: u32,
    pub kind: String,
    pub identity: String,
    pub claim: String,
    pub expression: Vec<String>,
    pub bindings: Vec<BindingDoc>,
    pub assertions: Vec<(String, String)>,
    pub verification: Option<Verification>,
}

impl WitnessChain {
    pub fn get(&self, name: &str) -> Option<&RationalFn> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    fn lookup(&self, name: &str) -> Result<&RationalFn> {
        self.get(name).ok_or_else(|| Error::Inconsistent(format!("chain refers to unbound name {name}")))
    }

    /// The composite named by the expression.
    pub fn evaluate(&self) -> Result<RationalFn> {
        let fs = self.expression.iter().map(|n| self.lookup(n)).collect::<Result<Vec<_>>>()?;
        Ok(RationalFn::compose_all(&fs))
    }

    pub fn identity(&self) -> String {
        format!("{} = {}", self.claim, self.expression.join(" ∘ "))
    }

    /// Symbolic equivalence, pointwise agreement on short inputs, and every
    /// asserted property.
    pub fn verify(&self) -> Result<Verification> {
        self.verify_with(CHAIN_LEN)
    }

    pub fn verify_with(&self, pointwise_len: usize) -> Result<Verification> {
        let composite = self.evaluate()?;
        let claim = self.lookup(&self.claim)?;
        let equivalent = composite.equivalent(claim);
        let disagreement = first_disagreement(&composite, claim, pointwise_len).map(|w| w.to_string());
        let mut assertions = Vec::new();
        for (name, prop) in &self.assertions {
            let p = fiber_profile(self.lookup(name)?)?;
            assertions.push(AssertionResult { name: name.clone(), property: prop.to_string(), holds: prop.holds(&p) });
        }
        let ok = equivalent && disagreement.is_none() && assertions.iter().all(|a| a.holds);
        Ok(Verification { equivalent, pointwise_len, disagreement, assertions, ok })
    }

    pub fn to_document(&self, verification: Option<Verification>) -> ChainDocument {
        ChainDocument {
            schema: 1,
            kind: self.kind.clone(),
            identity: self.identity(),
            claim: self.claim.clone(),
            expression: self.expression.clone(),
            bindings: self
                .bindings
                .iter()
                .map(|(n, f)| BindingDoc { name: n.clone(), transducer: text::to_text(f) })
                .collect(),
            assertions: self.assertions.iter().map(|(n, p)| (n.clone(), p.to_string())).collect(),
            verification,
        }
    }

    pub fn from_document(doc: &ChainDocument) -> Result<WitnessChain> {
        let bindings = doc
            .bindings
            .iter()
            .map(|b| Ok((b.name.clone(), text::parse_transducer(&b.transducer)?)))
            .collect::<Result<Vec<_>>>()?;
        let assertions =
            doc.assertions.iter().map(|(n, p)| Ok((n.clone(), p.parse()?))).collect::<Result<Vec<_>>>()?;
        Ok(WitnessChain {
            kind: doc.kind.clone(),
            bindings,
            claim: doc.claim.clone(),
            expression: doc.expression.clone(),
            assertions,
        })
    }
}

fn bind(name: &str, f: &RationalFn) -> (String, RationalFn) {
    (name.to_string(), f.clone())
}

fn strip(w: &Word) -> PartialFn {
    basis::prepend(w).inverse_injective().expect("prepend is injective")
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// A generous function with image exactly `lang`: `1^k 0 z ↦ sel(z)` and
/// `1^k ↦ sel(ε)`, where `sel` fixes members of `lang` and sends everything
/// else to its shortlex-least member.
pub fn generous_onto(lang: &Lang) -> Result<RationalFn> {
    let least = lang.shortlex_min().ok_or(Error::EmptyLanguage)?;
    let sel = RationalFn::piecewise(&[
        basis::identity().restrict(lang),
        basis::constant(&least).restrict(&lang.complement()),
    ])?;
    Ok(sel.compose(&basis::prefix_eraser()))
}

/// `f = j ∘ i` with `i = prepend(1) ∈ I` and `j ∈ J`: `j` undoes `i` and then
/// applies `f` on `1Σ*`, and maps `0Σ*` onto everything with infinite fibers.
pub fn decompose_ji(f: &RationalFn) -> Result<WitnessChain> {
    let one = Word::symbol(1);
    let zero = Word::symbol(0);
    let i = basis::prepend(&one).named("i");
    let eraser = basis::prefix_eraser();
    let j = RationalFn::piecewise(&[
        f.as_partial().compose(&strip(&one)),
        eraser.as_partial().compose(&strip(&zero)),
        basis::constant(&Word::empty()).restrict(&Lang::singleton(&Word::empty())),
    ])?
    .named("j");
    Ok(WitnessChain {
        kind: "ji".into(),
        bindings: vec![bind("f", f), bind("j", &j), bind("i", &i)],
        claim: "f".into(),
        expression: vec!["j".into(), "i".into()],
        assertions: vec![("j".into(), Property::Member(MonoidId::J)), ("i".into(), Property::Member(MonoidId::I))],
    })
}

/// `f = g ∘ u` with `g` generous and onto, for an injective `u` whose
/// co-range contains a whole cylinder `wΣ*`.
pub fn universal_factor(u: &RationalFn, f: &RationalFn) -> Result<WitnessChain> {
    let u_inv = u.inverse_injective().map_err(|e| match e {
        Error::NotInjective { first, second } => {
            precondition(format!("u not injective: {first} and {second} share a value"))
        }
        other => other,
    })?;
    let co_range = u.range().complement();
    let w = co_range.fat_witness().ok_or_else(|| {
        precondition("co-range not fat: the co-range of u contains no full cylinder")
    })?;
    let cyl = Lang::cylinder(&w);
    let g = RationalFn::piecewise(&[
        f.as_partial().compose(&u_inv),
        basis::prefix_eraser().as_partial().compose(&strip(&w)),
        basis::constant(&Word::empty()).restrict(&co_range.difference(&cyl)),
    ])?
    .named("g");
    Ok(WitnessChain {
        kind: "universal".into(),
        bindings: vec![bind("f", f), bind("g", &g), bind("u", u)],
        claim: "f".into(),
        expression: vec!["g".into(), "u".into()],
        assertions: vec![
            ("g".into(), Property::Member(MonoidId::ILam(Lam::Finite(0)))),
            ("u".into(), Property::Injective),
        ],
    })
}

/// For `h ∉ G_λ`: a set `A` of size λ with `|X \ h[X \ A]| = λ0 < λ`, the
/// generous `g'` with image `X \ A` (so `g' ∈ I_λ`), and `h ∘ g' ∈ I_λ0`.
pub fn exists_lambda0(h: &RationalFn, lam: Lam) -> Result<(Lam, WitnessChain)> {
    let p = fiber_profile(h)?;
    if is_member(&p, MonoidId::G(lam)) {
        return Err(precondition(format!("h ∈ G_{lam}: precondition fails")));
    }
    let (a, lam0) = match lam {
        Lam::Finite(n) => witness_set_finite(h, &p, n)?,
        Lam::Omega => witness_set_infinite(h, &p)?,
    };
    let g = generous_onto(&a.complement())?.named("g'");
    let composite = h.compose(&g).named("h∘g'");
    Ok((
        lam0,
        WitnessChain {
            kind: "glambda".into(),
            bindings: vec![bind("h∘g'", &composite), bind("h", h), bind("g'", &g)],
            claim: "h∘g'".into(),
            expression: vec!["h".into(), "g'".into()],
            assertions: vec![
                ("h".into(), Property::NotMember(MonoidId::G(lam))),
                ("g'".into(), Property::Member(MonoidId::ILam(lam))),
                ("h∘g'".into(), Property::Member(MonoidId::ILam(lam0))),
            ],
        },
    ))
}

/// Removes free points first (all but one element of multi-fibers), then
/// points with singleton fibers, each of which erases one value.
fn witness_set_finite(h: &RationalFn, p: &FiberProfile, n: u32) -> Result<(Lang, Lam)> {
    let n = n as usize;
    let mut a: Vec<Word> = Vec::new();
    for y in p.multi_values.enumerate_shortlex(n) {
        if a.len() >= n {
            break;
        }
        let fib = fiber(h, &y).enumerate_shortlex(n + 1);
        let free = fib.len() - 1;
        a.extend(fib.into_iter().skip(1).take(free.min(n - a.len())));
    }
    let kills = n - a.len();
    a.extend(p.noninj_set.complement().enumerate_shortlex(kills));
    if a.len() != n {
        return Err(Error::Inconsistent("could not assemble a witness set".into()));
    }
    let lam0 = p
        .c
        .saturating_add(Card::Finite(kills as u64))
        .finite()
        .ok_or_else(|| Error::Inconsistent("infinite co-range outside G_n".into()))?;
    debug_assert_eq!(min_deficiency(p, n as u64), Card::Finite(lam0));
    Ok((Lang::from_words(&a), Lam::Finite(lam0 as u32)))
}

/// Searches cylinders `w` with `|w| ≤ 3` for `A = S ∩ wΣ*` infinite, with fat
/// complement and finitely many erased values; keeps the smallest `λ0`.
fn witness_set_infinite(h: &RationalFn, p: &FiberProfile) -> Result<(Lang, Lam)> {
    let Card::Finite(c) = p.c else {
        return Err(Error::Inconsistent("infinite co-range outside G_omega".into()));
    };
    let mut best: Option<(u64, Lang)> = None;
    for w in Word::all_up_to(3) {
        let a = p.noninj_set.intersect(&Lang::cylinder(&w));
        if a.cardinality().is_finite() || a.complement().fat_witness().is_none() {
            continue;
        }
        let lost = p.range.difference(&h.image(&a.complement())).cardinality();
        if let Card::Finite(l) = lost {
            if best.as_ref().is_none_or(|(b, _)| c + l < *b) {
                best = Some((c + l, a));
            }
        }
    }
    let (lam0, a) = best.ok_or_else(|| precondition("no cylinder slice of the non-injectivity set works"))?;
    Ok((a, Lam::Finite(lam0 as u32)))
}

/// Candidate bijections for [`generous_conjugate`], in search order.
fn toolbox() -> Vec<(String, RationalFn)> {
    let mut out = vec![("identity".to_string(), basis::identity())];
    let short: Vec<Word> = Word::all_up_to(2).collect();
    let mut swaps = Vec::new();
    for u in &short {
        for v in &short {
            if u < v && !u.is_prefix_of(v) && !v.is_prefix_of(u) {
                swaps.push((format!("cylinder_swap({u},{v})"), basis::cylinder_swap(u, v).unwrap()));
            }
        }
    }
    let mut transpositions = Vec::new();
    for u in &short {
        for v in &short {
            if u < v {
                transpositions.push((format!("transposition({u},{v})"), basis::transposition(u, v).unwrap()));
            }
        }
    }
    out.extend(swaps.iter().cloned());
    out.extend(transpositions.iter().cloned());
    for (sn, s) in &swaps {
        for (tn, t) in &transpositions {
            out.push((format!("{sn}∘{tn}"), s.compose(t)));
        }
    }
    out
}

/// For `g ∉ A`: a bijection `α` such that `g ∘ α ∘ g` is generous with
/// infinite range, found among cylinder swaps and short transpositions.
pub fn generous_conjugate(g: &RationalFn) -> Result<WitnessChain> {
    let p = fiber_profile(g)?;
    if is_member(&p, MonoidId::A) {
        return Err(precondition("g ∈ A: precondition fails"));
    }
    for (name, alpha) in toolbox() {
        let composite = RationalFn::compose_all(&[g, &alpha, g]);
        let q = fiber_profile(&composite)?;
        if q.is_generous && q.range_size.is_infinite() {
            let alpha = alpha.named(name);
            return Ok(WitnessChain {
                kind: "conj".into(),
                bindings: vec![bind("g∘α∘g", &composite), bind("g", g), bind("α", &alpha)],
                claim: "g∘α∘g".into(),
                expression: vec!["g".into(), "α".into(), "g".into()],
                assertions: vec![
                    ("g".into(), Property::NotMember(MonoidId::A)),
                    ("α".into(), Property::Member(MonoidId::S)),
                    ("g∘α∘g".into(), Property::Generous),
                    ("g∘α∘g".into(), Property::InfiniteRange),
                ],
            });
        }
    }
    Err(precondition("no realizable cylinder split: no toolbox bijection makes g∘α∘g generous with infinite range"))
}

/// Injective `i` whose co-range is exactly the finite set `avoid`: a product of
/// chain shifts, the `j`-th one based at the preimage of the `j`-th point
/// under the product built so far.
fn avoiding_injection(avoid: &[Word]) -> RationalFn {
    let mut i = basis::identity();
    for s in avoid {
        let inv = i.inverse_injective().expect("chain shifts are injective");
        let t = inv.eval(s).expect("earlier co-range points are distinct");
        i = i.compose(&basis::chain_shift(&t));
    }
    i
}

/// For `m ∉ M_λ`: `f = g ∘ m ∘ i` with `g, i ∈ M_λ`.
pub fn m_witness(m: &RationalFn, lam: Lam, f: &RationalFn) -> Result<WitnessChain> {
    let monoid = match lam {
        Lam::Finite(1) => MonoidId::M(lam),
        Lam::Omega => MonoidId::M(lam),
        other => return Err(precondition(format!("M_{other} is not a registered monoid"))),
    };
    let p = fiber_profile(m)?;
    if is_member(&p, monoid) {
        return Err(precondition(format!("m ∈ {monoid}: not a counterexample function")));
    }
    let avoid = match p.s_size {
        Card::Finite(k) => p.noninj_set.enumerate_shortlex(k as usize),
        Card::Infinite => return Err(Error::Inconsistent("m outside M_λ with infinite non-injectivity set".into())),
    };
    let i = avoiding_injection(&avoid).named("i");
    let mi = m.compose(&i);
    let inv = mi.inverse_injective()?;
    let a = f.eval(&Word::empty());
    let g = RationalFn::piecewise(&[
        f.as_partial().compose(&inv),
        basis::constant(&a).restrict(&mi.range().complement()),
    ])?
    .named("g");
    Ok(WitnessChain {
        kind: "mlambda".into(),
        bindings: vec![bind("f", f), bind("g", &g), bind("m", m), bind("i", &i)],
        claim: "f".into(),
        expression: vec!["g".into(), "m".into(), "i".into()],
        assertions: vec![
            ("m".into(), Property::NotMember(monoid)),
            ("g".into(), Property::Member(monoid)),
            ("i".into(), Property::Member(monoid)),
        ],
    })
}

/// For `m_ω ∉ M_ω` and `m_1 ∉ M_1`: `m_ω ∘ σ ∘ m_1^λ1` is injective with
/// infinite co-range, where `λ1` is the size of the non-injectivity set of
/// `m_ω` and the bijection `σ` moves the iterate's image off that set.
pub fn escape_to_universal(m_omega: &RationalFn, m_1: &RationalFn) -> Result<(RationalFn, WitnessChain)> {
    let p = fiber_profile(m_omega)?;
    if is_member(&p, MonoidId::M(Lam::Omega)) {
        return Err(precondition("m_ω ∈ M_omega: precondition fails"));
    }
    let q = fiber_profile(m_1)?;
    if is_member(&q, MonoidId::M(Lam::Finite(1))) {
        return Err(precondition("m_1 ∈ M_1: precondition fails"));
    }
    let a1 = match p.s_size {
        Card::Finite(k) => p.noninj_set.enumerate_shortlex(k as usize),
        Card::Infinite => return Err(Error::Inconsistent("m_ω outside M_omega with infinite S".into())),
    };
    let lambda1 = a1.len();
    let iterate = (0..lambda1).fold(basis::identity(), |acc, _| m_1.compose(&acc));
    let image = iterate.range();
    let in_image: Vec<&Word> = a1.iter().filter(|x| image.contains(x)).collect();
    let free: Vec<Word> = image
        .complement()
        .difference(&Lang::from_words(&a1))
        .enumerate_shortlex(in_image.len());
    if free.len() < in_image.len() {
        return Err(Error::Inconsistent("iterate misses too few values".into()));
    }
    let mut sigma = basis::identity();
    for (x, y) in in_image.iter().zip(&free) {
        sigma = sigma.compose(&basis::transposition(x, y)?);
    }
    let sigma = sigma.named("σ");
    let mut bindings = vec![bind("m_ω", m_omega), bind("σ", &sigma), bind("m_1", m_1)];
    let mut expression = vec!["m_ω".to_string(), "σ".to_string()];
    expression.extend(std::iter::repeat_n("m_1".to_string(), lambda1));
    let result = {
        let mut chain: Vec<&RationalFn> = vec![m_omega, &sigma];
        chain.extend(std::iter::repeat_n(m_1, lambda1));
        RationalFn::compose_all(&chain).named("u")
    };
    bindings.insert(0, bind("u", &result));
    Ok((
        result,
        WitnessChain {
            kind: "escape".into(),
            bindings,
            claim: "u".into(),
            expression,
            assertions: vec![
                ("m_ω".into(), Property::NotMember(MonoidId::M(Lam::Omega))),
                ("m_1".into(), Property::NotMember(MonoidId::M(Lam::Finite(1)))),
                ("σ".into(), Property::Member(MonoidId::S)),
                ("u".into(), Property::Injective),
                ("u".into(), Property::InfiniteCoRange),
            ],
        },
    ))
}
