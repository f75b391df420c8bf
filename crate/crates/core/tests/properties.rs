use monoidlab_core::profile::{fiber, noninj_set};
use monoidlab_core::regex::parse_lang;
use monoidlab_core::transducer::text::{parse_transducer, to_text};
use monoidlab_core::{fiber_profile, suite, Card, Lang, RationalFn, Word};
use proptest::prelude::*;
use std::sync::OnceLock;

fn pool() -> &'static [RationalFn] {
    static POOL: OnceLock<Vec<RationalFn>> = OnceLock::new();
    POOL.get_or_init(|| suite::load().unwrap().into_iter().map(|s| s.f).collect())
}

fn func() -> impl Strategy<Value = RationalFn> {
    proptest::collection::vec(0..pool().len(), 1..=3).prop_map(|idx| {
        let fs: Vec<&RationalFn> = idx.iter().map(|&i| &pool()[i]).collect();
        RationalFn::compose_all(&fs)
    })
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0u8..2, 0..=max).prop_map(Word::from_symbols)
}

fn regex() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![Just("0".to_string()), Just("1".to_string()), Just("~".to_string()), Just(".".to_string())];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})|({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})&({b})")),
            inner.clone().prop_map(|a| format!("({a})*")),
            inner.prop_map(|a| format!("!({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_is_associative(f in func(), g in func(), h in func()) {
        prop_assert!(f.compose(&g).compose(&h).equivalent(&f.compose(&g.compose(&h))));
    }

    #[test]
    fn composition_evaluates_pointwise(f in func(), g in func(), x in word(9)) {
        prop_assert_eq!(f.compose(&g).eval(&x), f.eval(&g.eval(&x)));
    }

    #[test]
    fn de_morgan(a in regex(), b in regex()) {
        let a = parse_lang(&a).unwrap();
        let b = parse_lang(&b).unwrap();
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
    }

    #[test]
    fn languages_agree_with_membership(a in regex(), x in word(8)) {
        let l = parse_lang(&a).unwrap();
        prop_assert_eq!(l.complement().contains(&x), !l.contains(&x));
        prop_assert_eq!(l.star().contains(&x), l.star().star().contains(&x));
    }

    #[test]
    fn text_round_trip(f in func()) {
        let once = to_text(&f);
        let back = parse_transducer(&once).unwrap();
        prop_assert_eq!(to_text(&back), once);
        prop_assert!(back.equivalent(&f));
    }

    #[test]
    fn non_injectivity_set_matches_fibers(f in func()) {
        let s = noninj_set(&f);
        for x in Word::all_up_to(5) {
            let size = fiber(&f, &f.eval(&x)).cardinality();
            prop_assert_eq!(s.contains(&x), size > Card::Finite(1), "{}", x);
        }
    }

    #[test]
    fn profiles_are_consistent(f in func()) {
        let p = fiber_profile(&f).unwrap();
        prop_assert!(p.check_invariants().is_ok());
        prop_assert_eq!(p.range.union(&p.co_range), Lang::universal());
    }
}
