//! The curated suite of functions shipped with the crate. Each file carries an
//! `# expect:` line listing the registry tags it belongs to, written by the
//! classification pipeline and checked against it in the tests.

use crate::error::{Error, Result};
use crate::expr::load_function;
use crate::monoids::{classify, MonoidId};
use crate::profile::FiberProfile;
use crate::transducer::RationalFn;

pub const EXPECT_PREFIX: &str = "# expect:";

/// File name and contents of every suite function.
pub const FILES: &[(&str, &str)] = &[
    ("chain_shift_1.fn", include_str!("../suite/chain_shift_1.fn")),
    ("const_01.fn", include_str!("../suite/const_01.fn")),
    ("const_eps.fn", include_str!("../suite/const_eps.fn")),
    ("double_point.fn", include_str!("../suite/double_point.fn")),
    ("drop_after_erase.fn", include_str!("../suite/drop_after_erase.fn")),
    ("drop_odd.fn", include_str!("../suite/drop_odd.fn")),
    ("drop_odd_sq.fn", include_str!("../suite/drop_odd_sq.fn")),
    ("erase_on_cylinder.fn", include_str!("../suite/erase_on_cylinder.fn")),
    ("erase_ones.fn", include_str!("../suite/erase_ones.fn")),
    ("f0.fn", include_str!("../suite/f0.fn")),
    ("first_symbol.fn", include_str!("../suite/first_symbol.fn")),
    ("first_two.fn", include_str!("../suite/first_two.fn")),
    ("flip.fn", include_str!("../suite/flip.fn")),
    ("g_a.fn", include_str!("../suite/g_a.fn")),
    ("g_b.fn", include_str!("../suite/g_b.fn")),
    ("hilbert_shift.fn", include_str!("../suite/hilbert_shift.fn")),
    ("hilbert_sq.fn", include_str!("../suite/hilbert_sq.fn")),
    ("identity.fn", include_str!("../suite/identity.fn")),
    ("last_symbol.fn", include_str!("../suite/last_symbol.fn")),
    ("onto_all.fn", include_str!("../suite/onto_all.fn")),
    ("onto_nonempty.fn", include_str!("../suite/onto_nonempty.fn")),
    ("onto_not_zero.fn", include_str!("../suite/onto_not_zero.fn")),
    ("onto_zeros.fn", include_str!("../suite/onto_zeros.fn")),
    ("parity_0_1.fn", include_str!("../suite/parity_0_1.fn")),
    ("parity_eps_1.fn", include_str!("../suite/parity_eps_1.fn")),
    ("prefix_eraser.fn", include_str!("../suite/prefix_eraser.fn")),
    ("prepend1_hilbert.fn", include_str!("../suite/prepend1_hilbert.fn")),
    ("prepend_00.fn", include_str!("../suite/prepend_00.fn")),
    ("prepend_1.fn", include_str!("../suite/prepend_1.fn")),
    ("prepend_on_zero.fn", include_str!("../suite/prepend_on_zero.fn")),
    ("sep1.fn", include_str!("../suite/sep1.fn")),
    ("sep2.fn", include_str!("../suite/sep2.fn")),
    ("sep3.fn", include_str!("../suite/sep3.fn")),
    ("squash.fn", include_str!("../suite/squash.fn")),
    ("stutter.fn", include_str!("../suite/stutter.fn")),
    ("swap_00_1.fn", include_str!("../suite/swap_00_1.fn")),
    ("swap_0_1.fn", include_str!("../suite/swap_0_1.fn")),
    ("transposition_eps_0.fn", include_str!("../suite/transposition_eps_0.fn")),
    ("unary_length.fn", include_str!("../suite/unary_length.fn")),
];

#[derive(Clone, Debug)]
pub struct SuiteFunction {
    pub file: &'static str,
    pub f: RationalFn,
    pub expected: Option<Vec<String>>,
}

/// Tags listed on the `# expect:` line, if any.
pub fn expected_tags(source: &str) -> Option<Vec<String>> {
    source
        .lines()
        .find_map(|l| l.trim().strip_prefix(EXPECT_PREFIX))
        .map(|rest| rest.split_whitespace().map(str::to_string).collect())
}

pub fn expect_line(p: &FiberProfile) -> String {
    let tags: Vec<String> = classify(p).into_iter().map(MonoidId::tag).collect();
    format!("{EXPECT_PREFIX} {}", tags.join(" "))
}

/// Replaces (or appends) the `# expect:` line of a source document.
pub fn with_expect_line(source: &str, line: &str) -> String {
    let mut out: Vec<&str> = source.lines().filter(|l| !l.trim().starts_with(EXPECT_PREFIX)).collect();
    out.push(line);
    out.join("\n") + "\n"
}

pub fn load() -> Result<Vec<SuiteFunction>> {
    FILES
        .iter()
        .map(|(file, src)| {
            let f = load_function(src).map_err(|e| match e {
                Error::Parse { line, msg } => Error::Parse { line, msg: format!("{file}: {msg}") },
                other => other,
            })?;
            let stem = file.trim_end_matches(".fn");
            let f = if f.name().is_some() { f } else { f.named(stem) };
            Ok(SuiteFunction { file, f, expected: expected_tags(src) })
        })
        .collect()
}

/// Suite function by name.
pub fn get(name: &str) -> Result<RationalFn> {
    let (_, src) = FILES
        .iter()
        .find(|(file, _)| file.trim_end_matches(".fn") == name)
        .ok_or_else(|| Error::Precondition(format!("no suite function named {name}")))?;
    load_function(src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::fiber_profile;
    use crate::transducer::text;

    #[test]
    fn at_least_thirty_functions() {
        assert!(load().unwrap().len() >= 30);
    }

    #[test]
    fn expectations_match_pipeline() {
        let regenerate = std::env::var_os("MONOIDLAB_REGENERATE_SUITE").is_some();
        for s in load().unwrap() {
            let line = expect_line(&fiber_profile(&s.f).unwrap());
            if regenerate {
                let path = format!("{}/suite/{}", env!("CARGO_MANIFEST_DIR"), s.file);
                let src = std::fs::read_to_string(&path).unwrap();
                std::fs::write(&path, with_expect_line(&src, &line)).unwrap();
                continue;
            }
            assert_eq!(Some(line), s.expected.map(|t| format!("{EXPECT_PREFIX} {}", t.join(" "))), "{}", s.file);
        }
    }

    #[test]
    fn serialization_round_trips() {
        for s in load().unwrap() {
            let once = text::to_text(&s.f);
            let back = text::parse_transducer(&once).unwrap();
            assert_eq!(text::to_text(&back), once, "{}", s.file);
            assert!(back.equivalent(&s.f));
        }
    }
}
