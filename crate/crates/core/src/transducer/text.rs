//! Line-oriented transducer documents.
//!
//! ```text
//! transducer v1
//! name drop_odd          # optional
//! initial 0
//! state 0 final output=~
//! state 1 final
//! trans 0 0 0 1
//! trans 0 1 1 1
//! trans 1 0 - 0
//! trans 1 1 - 0
//! ```
//! Output words use `~` or `-` for ε; `final` without `output=` means ε.
//! State ids are arbitrary non-negative integers. Parsing verifies
//! functionality and totality and brings the transducer into canonical form,
//! so `to_text(parse(to_text(f)))` reproduces `to_text(f)` byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::fst::Fst;
use super::RationalFn;
use crate::error::{Error, Result};
use crate::word::Word;

pub const HEADER: &str = "transducer v1";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_out(tok: &str, line: usize) -> Result<Word> {
    if tok == "-" {
        return Ok(Word::empty());
    }
    tok.parse().map_err(|_| parse_err(line, format!("bad output word {tok:?}")))
}

pub fn parse_transducer(src: &str) -> Result<RationalFn> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, other)) => return Err(parse_err(n, format!("expected {HEADER:?}, found {other:?}"))),
        None => return Err(parse_err(0, "empty document")),
    }
    let mut fst = Fst::new();
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut state = |fst: &mut Fst, tok: &str, line: usize| -> Result<usize> {
        let id: u64 = tok.parse().map_err(|_| parse_err(line, format!("bad state id {tok:?}")))?;
        Ok(*ids.entry(id).or_insert_with(|| fst.add_state()))
    };
    let mut name = None;
    let mut initial = None;
    for (n, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["name", rest @ ..] if !rest.is_empty() => name = Some(rest.join(" ")),
            ["initial", s] => {
                if initial.is_some() {
                    return Err(parse_err(n, "duplicate initial state"));
                }
                initial = Some(state(&mut fst, s, n)?);
            }
            ["state", s] => {
                state(&mut fst, s, n)?;
            }
            ["state", s, "final"] => {
                let q = state(&mut fst, s, n)?;
                fst.add_final(q, Word::empty());
            }
            ["state", s, "final", out] => {
                let q = state(&mut fst, s, n)?;
                let w = out
                    .strip_prefix("output=")
                    .ok_or_else(|| parse_err(n, format!("expected output=<word>, found {out:?}")))?;
                fst.add_final(q, parse_out(w, n)?);
            }
            ["trans", from, sym, out, to] => {
                let a = match *sym {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(parse_err(n, format!("bad input symbol {sym:?}"))),
                };
                let p = state(&mut fst, from, n)?;
                let q = state(&mut fst, to, n)?;
                let w = parse_out(out, n)?;
                fst.add_edge(p, a, w, q);
            }
            _ => return Err(parse_err(n, format!("unrecognized line {line:?}"))),
        }
    }
    fst.init = initial.ok_or_else(|| parse_err(0, "missing initial state"))?;
    let f = RationalFn::from_fst(fst)?;
    Ok(match name {
        Some(n) => f.named(n),
        None => f,
    })
}

pub fn to_text(f: &RationalFn) -> String {
    let fst = &f.as_partial().fst;
    let mut s = String::new();
    let _ = writeln!(s, "{HEADER}");
    if let Some(n) = f.name() {
        let _ = writeln!(s, "name {n}");
    }
    let _ = writeln!(s, "initial {}", fst.init);
    for q in 0..fst.num_states() {
        match fst.finals[q].first() {
            Some(w) => {
                let _ = writeln!(s, "state {q} final output={w}");
            }
            None => {
                let _ = writeln!(s, "state {q}");
            }
        }
    }
    for (q, es) in fst.edges.iter().enumerate() {
        for e in es {
            let _ = writeln!(s, "trans {q} {} {} {}", e.sym, e.out, e.to);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transducer::basis;

    #[test]
    fn round_trip_is_bit_exact() {
        let fs = [
            basis::identity(),
            basis::drop_odd(),
            basis::hilbert_shift(),
            basis::prefix_eraser(),
            basis::cylinder_swap(&"00".parse().unwrap(), &"1".parse().unwrap()).unwrap(),
        ];
        for f in fs {
            let t = to_text(&f);
            let g = parse_transducer(&t).unwrap();
            assert_eq!(to_text(&g), t);
            assert!(g.equivalent(&f));
            assert_eq!(g.name(), f.name());
        }
    }

    #[test]
    fn reports_functionality_and_totality() {
        let two = "transducer v1\ninitial 0\nstate 0 final\nstate 1 final\ntrans 0 0 0 1\ntrans 0 0 1 1\ntrans 0 1 - 1\ntrans 1 0 - 1\ntrans 1 1 - 1\n";
        match parse_transducer(two) {
            Err(Error::NotFunctional { witness }) => assert_eq!(witness, "0".parse().unwrap()),
            other => panic!("{other:?}"),
        }
        let partial = "transducer v1\ninitial 0\nstate 0 final\ntrans 0 0 0 0\n";
        match parse_transducer(partial) {
            Err(Error::NotTotal { witness }) => assert_eq!(witness, "1".parse().unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(parse_transducer("expr v1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_transducer("transducer v1\nstate 0 final\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_transducer("transducer v1\ninitial 0\ntrans 0 2 - 0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
