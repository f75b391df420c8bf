//! The monoid registry. Every membership is a pure function of the
//! [`FiberProfile`].

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::profile::{fiber_profile, FiberProfile};
use crate::transducer::RationalFn;
use crate::word::Card;

/// A cardinal parameter: a natural number or ℵ₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lam {
    Finite(u32),
    Omega,
}

impl Lam {
    pub fn as_card(self) -> Card {
        match self {
            Lam::Finite(n) => Card::Finite(n as u64),
            Lam::Omega => Card::Infinite,
        }
    }
}

impl fmt::Display for Lam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lam::Finite(n) => write!(f, "{n}"),
            Lam::Omega => write!(f, "omega"),
        }
    }
}

impl FromStr for Lam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Lam> {
        match s {
            "omega" | "ω" | "w" => Ok(Lam::Omega),
            _ => s
                .parse()
                .map(Lam::Finite)
                .map_err(|_| Error::Parse { line: 0, msg: format!("bad cardinal {s:?}") }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonoidId {
    /// Bijections.
    S,
    Const,
    /// Injective with infinite co-range.
    I,
    /// Every fiber infinite (equivalently generous and onto).
    J,
    /// Generous with co-range of size exactly λ.
    ILam(Lam),
    /// Generous with exactly two values.
    X2,
    L,
    A,
    B,
    E,
    F,
    G(Lam),
    M(Lam),
}

use MonoidId::*;

/// Largest finite λ exposed in the registry.
pub const MAX_FINITE_LAMBDA: u32 = 8;

/// Every registered monoid, in report order.
pub fn registry() -> Vec<MonoidId> {
    let mut out = vec![S, Const, I, J];
    out.extend((0..=MAX_FINITE_LAMBDA).map(|k| ILam(Lam::Finite(k))));
    out.extend([ILam(Lam::Omega), X2, L, A, B, E, F]);
    out.extend((1..=MAX_FINITE_LAMBDA).map(|k| G(Lam::Finite(k))));
    out.extend([G(Lam::Omega), M(Lam::Finite(1)), M(Lam::Omega)]);
    out
}

pub fn maximal_monoids() -> Vec<MonoidId> {
    registry().into_iter().filter(|m| m.is_maximal()).collect()
}

impl MonoidId {
    pub fn tag(self) -> String {
        match self {
            S => "S".into(),
            Const => "Const".into(),
            I => "I".into(),
            J => "J".into(),
            ILam(l) => format!("I_{l}"),
            X2 => "X2".into(),
            L => "L".into(),
            A => "A".into(),
            B => "B".into(),
            E => "E".into(),
            F => "F".into(),
            G(l) => format!("G_{l}"),
            M(l) => format!("M_{l}"),
        }
    }

    pub fn is_maximal(self) -> bool {
        matches!(self, A | G(Lam::Finite(1)) | G(Lam::Omega) | M(_))
    }

    pub fn description(self) -> &'static str {
        match self {
            S => "bijections",
            Const => "constant functions",
            I => "injective with infinite co-range",
            J => "every fiber infinite",
            ILam(_) => "generous with co-range of size exactly lambda",
            X2 => "generous with exactly two values",
            L => "bijections, and generous functions that are onto or take at most two values",
            A => "finitely many infinite fibers",
            B => "no infinite fiber",
            E => "finite co-range",
            F => "finite co-range or constant",
            G(_) => "removing any lambda-set from the domain leaves at least lambda missing values",
            M(_) => "co-range smaller than lambda, or at least lambda non-injective points",
        }
    }
}

impl fmt::Display for MonoidId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl Serialize for MonoidId {
    fn serialize<S2: Serializer>(&self, s: S2) -> std::result::Result<S2::Ok, S2::Error> {
        s.serialize_str(&self.tag())
    }
}

impl FromStr for MonoidId {
    type Err = Error;

    fn from_str(s: &str) -> Result<MonoidId> {
        registry()
            .into_iter()
            .find(|m| m.tag() == s)
            .or_else(|| {
                let (head, lam) = s.split_once('_')?;
                let lam: Lam = lam.parse().ok()?;
                match (head, lam) {
                    ("I", _) => Some(ILam(lam)),
                    ("G", Lam::Finite(n)) if n >= 1 => Some(G(lam)),
                    _ => None,
                }
            })
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown monoid tag {s:?}") })
    }
}

/// Decision rule used for `G_n` with finite `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GRule {
    #[default]
    ClosedForm,
    /// Deliberately wrong rule (drops the co-range bound in the free-capacity
    /// clause) for fault-injection runs.
    #[doc(hidden)]
    Sabotaged,
}

/// Minimum over `|A| = n` of `|X \ f[X \ A]|`: each removed point beyond the
/// free capacity erases exactly one value.
pub fn min_deficiency(p: &FiberProfile, n: u64) -> Card {
    match p.free_cap {
        Card::Finite(fc) => p.c.saturating_add(Card::Finite(n.saturating_sub(fc))),
        Card::Infinite => p.c,
    }
}

fn g_member(p: &FiberProfile, lam: Lam, rule: GRule) -> bool {
    match lam {
        Lam::Omega => p.c.is_infinite() || p.free_cap.is_finite(),
        Lam::Finite(n) => {
            let n = n as u64;
            match rule {
                GRule::ClosedForm => {
                    p.c.at_least(n) || matches!(p.free_cap, Card::Finite(fc) if fc < n && p.c.at_least(fc))
                }
                GRule::Sabotaged => p.c.at_least(n) || matches!(p.free_cap, Card::Finite(fc) if fc < n),
            }
        }
    }
}

/// δ(λ): λ-injective or not λ-surjective, evaluated without the G-formula.
pub fn delta(p: &FiberProfile, lam: Lam) -> bool {
    match lam {
        Lam::Finite(n) => p.s_size < Card::Finite(n as u64) || p.c.at_least(n as u64),
        Lam::Omega => p.s_size.is_finite() || p.c.is_infinite(),
    }
}

pub fn is_member(p: &FiberProfile, m: MonoidId) -> bool {
    is_member_with(p, m, GRule::ClosedForm)
}

pub fn is_member_with(p: &FiberProfile, m: MonoidId, rule: GRule) -> bool {
    let two = Card::Finite(2);
    match m {
        S => p.c == Card::ZERO && p.s_size == Card::ZERO,
        Const => p.is_constant,
        I => p.s_size == Card::ZERO && p.c.is_infinite(),
        J => p.is_generous && p.c == Card::ZERO,
        ILam(l) => p.is_generous && p.c == l.as_card(),
        X2 => p.range_size == two && p.is_generous,
        L => is_member(p, S) || (p.is_generous && (p.c == Card::ZERO || p.range_size <= two)),
        A => p.n_inf.is_finite(),
        B => p.n_inf == Card::ZERO,
        E => p.c.is_finite(),
        F => p.c.is_finite() || p.is_constant,
        G(l) => g_member(p, l, rule),
        M(Lam::Finite(n)) => p.c < Card::Finite(n as u64) || p.s_size.at_least(n as u64),
        M(Lam::Omega) => p.c.is_finite() || p.s_size.is_infinite(),
    }
}

pub fn classify(p: &FiberProfile) -> Vec<MonoidId> {
    registry().into_iter().filter(|&m| is_member(p, m)).collect()
}

/// Profile and memberships of one function.
#[derive(Clone, Debug)]
pub struct Classified {
    pub name: String,
    pub f: RationalFn,
    pub profile: FiberProfile,
}

impl Classified {
    pub fn new(f: RationalFn) -> Result<Classified> {
        let profile = fiber_profile(&f)?;
        Ok(Classified { name: f.label(), f, profile })
    }

    pub fn member(&self, m: MonoidId) -> bool {
        is_member(&self.profile, m)
    }
}

pub fn classify_all(fs: &[RationalFn]) -> Result<Vec<Classified>> {
    fs.par_iter().cloned().map(Classified::new).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    /// Names of the chain members, outermost first.
    pub chain: Vec<String>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub property: String,
    pub pool_size: usize,
    pub skipped: Vec<String>,
    pub trials: usize,
    pub violations: Vec<Violation>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.pool_size > 0
    }
}

fn random_chain<'a>(rng: &mut ChaCha8Rng, pool: &[&'a Classified]) -> Vec<&'a Classified> {
    let len = rng.gen_range(2..=3);
    (0..len).map(|_| *pool.choose(rng).expect("non-empty pool")).collect()
}

fn compose_chain(chain: &[&Classified]) -> RationalFn {
    let fs: Vec<&RationalFn> = chain.iter().map(|c| &c.f).collect();
    RationalFn::compose_all(&fs)
}

/// Draws `trials` random chains of length 2 or 3 from the members of `m` in
/// `pool` and checks that every composite is again in `m`.
pub fn check_closed(m: MonoidId, pool: &[Classified], trials: usize, seed: u64) -> ClosureReport {
    let (members, others): (Vec<&Classified>, Vec<&Classified>) = pool.iter().partition(|c| c.member(m));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chains: Vec<Vec<&Classified>> =
        if members.is_empty() { Vec::new() } else { (0..trials).map(|_| random_chain(&mut rng, &members)).collect() };
    let violations = chains
        .par_iter()
        .filter_map(|chain| {
            let names = chain.iter().map(|c| c.name.clone()).collect();
            match fiber_profile(&compose_chain(chain)) {
                Ok(p) if is_member(&p, m) => None,
                Ok(_) => Some(Violation { chain: names, reason: format!("composite not in {m}") }),
                Err(e) => Some(Violation { chain: names, reason: e.to_string() }),
            }
        })
        .collect();
    ClosureReport {
        property: format!("closed({m})"),
        pool_size: members.len(),
        skipped: others.iter().map(|c| c.name.clone()).collect(),
        trials: chains.len(),
        violations,
    }
}

/// `f ∘ g` is generous whenever `g` is, for random `f` from the pool and
/// generous `g`.
pub fn check_generosity_propagation(pool: &[Classified], trials: usize, seed: u64) -> ClosureReport {
    let generous: Vec<&Classified> = pool.iter().filter(|c| c.profile.is_generous).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(&Classified, &Classified)> = if generous.is_empty() {
        Vec::new()
    } else {
        (0..trials).map(|_| (pool.choose(&mut rng).unwrap(), *generous.choose(&mut rng).unwrap())).collect()
    };
    let violations = pairs
        .par_iter()
        .filter_map(|(f, g)| {
            let names = vec![f.name.clone(), g.name.clone()];
            match fiber_profile(&f.f.compose(&g.f)) {
                Ok(p) if p.is_generous => None,
                Ok(_) => Some(Violation { chain: names, reason: "composite not generous".into() }),
                Err(e) => Some(Violation { chain: names, reason: e.to_string() }),
            }
        })
        .collect();
    ClosureReport {
        property: "generosity-propagation".into(),
        pool_size: generous.len(),
        skipped: Vec::new(),
        trials: pairs.len(),
        violations,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionCheck {
    pub claim: String,
    pub holds: bool,
    /// A pool member violating the claim.
    pub counterexample: Option<String>,
    /// For strict inclusions, a pool member in the larger set only.
    pub separator: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub checks: Vec<InclusionCheck>,
}

impl InclusionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Verifies the registry's inclusions over a pool and exhibits separators
/// for the strict ones.
pub fn inclusion_report(pool: &[Classified]) -> InclusionReport {
    let mut checks = Vec::new();
    let subset = |small: MonoidId, big: MonoidId, strict: bool| {
        let counterexample = pool.iter().find(|c| c.member(small) && !c.member(big)).map(|c| c.name.clone());
        let separator = if strict {
            pool.iter().find(|c| c.member(big) && !c.member(small)).map(|c| c.name.clone())
        } else {
            None
        };
        let holds = counterexample.is_none() && (!strict || separator.is_some());
        let rel = if strict { "⊊" } else { "⊆" };
        InclusionCheck { claim: format!("{small} {rel} {big}"), holds, counterexample, separator }
    };
    checks.push(subset(B, A, true));
    checks.push(subset(E, F, true));
    checks.push(subset(S, B, true));
    checks.push(subset(I, B, true));
    for n in 1..MAX_FINITE_LAMBDA {
        checks.push(subset(G(Lam::Finite(n + 1)), G(Lam::Finite(n)), n <= 3));
    }
    checks.push(subset(J, ILam(Lam::Finite(0)), false));
    checks.push(subset(ILam(Lam::Finite(0)), J, false));
    let union = |c: &Classified| [Const, X2, ILam(Lam::Finite(0)), S].iter().any(|&m| c.member(m));
    let l_mismatch = pool.iter().find(|c| c.member(L) != union(c)).map(|c| c.name.clone());
    checks.push(InclusionCheck {
        claim: "L = Const ∪ X2 ∪ I_0 ∪ S".into(),
        holds: l_mismatch.is_none(),
        counterexample: l_mismatch,
        separator: None,
    });
    InclusionReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_lang;
    use crate::transducer::basis;
    use crate::word::Word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn tags(f: &RationalFn) -> Vec<String> {
        classify(&fiber_profile(f).unwrap()).into_iter().map(MonoidId::tag).collect()
    }

    #[test]
    fn registry_shape() {
        let maximal: Vec<String> = maximal_monoids().into_iter().map(MonoidId::tag).collect();
        assert_eq!(maximal, ["A", "G_1", "G_omega", "M_1", "M_omega"]);
        for m in registry() {
            assert_eq!(m.tag().parse::<MonoidId>().unwrap(), m);
        }
        assert!("G_0".parse::<MonoidId>().is_err());
        assert!("Q".parse::<MonoidId>().is_err());
    }

    #[test]
    fn identity_memberships() {
        let t = tags(&basis::identity());
        for m in ["S", "A", "B", "E", "F", "G_1", "G_8", "G_omega", "M_1", "M_omega", "L"] {
            assert!(t.contains(&m.to_string()), "{m} in {t:?}");
        }
        for m in ["I", "J", "Const", "I_0"] {
            assert!(!t.contains(&m.to_string()));
        }
    }

    #[test]
    fn constant_memberships() {
        let t = tags(&basis::constant(&Word::empty()));
        for m in ["Const", "I_omega", "A", "F", "M_omega", "G_1", "G_5", "G_omega", "L"] {
            assert!(t.contains(&m.to_string()), "{m} in {t:?}");
        }
        assert!(!t.contains(&"E".to_string()));
        assert!(!t.contains(&"B".to_string()));
    }

    #[test]
    fn shift_and_drop_odd() {
        let t = tags(&basis::hilbert_shift());
        assert!(!t.contains(&"M_1".to_string()));
        assert!(t.contains(&"G_1".to_string()));
        let d = tags(&basis::drop_odd());
        for m in ["A", "B", "E", "M_1", "M_omega"] {
            assert!(d.contains(&m.to_string()), "{m}");
        }
        for m in ["J", "G_1", "G_omega", "I_0"] {
            assert!(!d.contains(&m.to_string()), "{m}");
        }
        let e = tags(&basis::prefix_eraser());
        assert!(e.contains(&"J".to_string()) && e.contains(&"I_0".to_string()) && e.contains(&"L".to_string()));
        assert!(!e.contains(&"A".to_string()));
    }

    #[test]
    fn g_formula_on_small_collisions() {
        let small = parse_lang("0|1").unwrap();
        let f0 = RationalFn::piecewise(&[
            basis::constant(&w("1")).restrict(&small),
            basis::identity().restrict(&small.complement()),
        ])
        .unwrap();
        let p = fiber_profile(&f0).unwrap();
        assert_eq!((p.c, p.free_cap), (Card::Finite(1), Card::Finite(1)));
        assert_eq!(min_deficiency(&p, 2), Card::Finite(2));
        assert!(is_member(&p, G(Lam::Finite(1))));
        assert!(is_member(&p, G(Lam::Finite(2))));
        assert!(is_member(&p, G(Lam::Finite(5))));
        assert!(is_member_with(&p, G(Lam::Finite(1)), GRule::Sabotaged));
        let onto = FiberProfile { c: Card::ZERO, ..p };
        assert!(!is_member(&onto, G(Lam::Finite(2))));
        assert!(is_member_with(&onto, G(Lam::Finite(2)), GRule::Sabotaged));
    }

    #[test]
    fn delta_matches_g_formula_on_basis() {
        for f in [basis::identity(), basis::drop_odd(), basis::hilbert_shift(), basis::prefix_eraser()] {
            let p = fiber_profile(&f).unwrap();
            for lam in [Lam::Finite(1), Lam::Omega] {
                assert_eq!(delta(&p, lam), is_member(&p, G(lam)), "{f:?} {lam}");
            }
        }
    }

    #[test]
    fn closure_on_injective_pool() {
        let pool = classify_all(&[basis::identity(), basis::hilbert_shift(), basis::prepend(&w("1"))]).unwrap();
        let r = check_closed(B, &pool, 100, 7);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.trials, 100);
    }
}
