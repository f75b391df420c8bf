//! Expression documents: functions assembled from named generators.
//!
//! ```text
//! expr v1
//! name squash
//! let strip = inverse(prepend(1))
//! result piecewise(strip, otherwise(constant(~)))
//! ```
//!
//! Terms:
//! * generators `identity`, `drop_odd`, `hilbert_shift`, `prefix_eraser`,
//!   `constant(w)`, `prepend(w)`, `chain_shift(w)`, `cylinder_swap(u,v)`,
//!   `transposition(u,v)`, `parity_two(w0,w1)`, `generous_onto({L})`;
//! * `compose(t1, ..., tn)` applies `tn` first;
//! * `restrict(t, {L})`, `inverse(t)` (of an injective function);
//! * `piecewise(t1, ..., tn)` over pieces with disjoint domains covering
//!   everything, where a final `otherwise(t)` covers whatever is left.
//!
//! Languages between braces use the syntax of [`crate::regex`]. Words are
//! written over `0`/`1` with `~` for ε. Earlier `let` names may be used in
//! later terms.

use std::collections::HashMap;

use crate::automata::Lang;
use crate::error::{Error, Result};
use crate::regex::parse_lang;
use crate::transducer::{basis, text, PartialFn, RationalFn};
use crate::witnesses;
use crate::word::Word;

pub const HEADER: &str = "expr v1";

/// Parses either document kind, dispatching on the header line.
pub fn load_function(src: &str) -> Result<RationalFn> {
    let header = src
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    match header {
        text::HEADER => text::parse_transducer(src),
        HEADER => parse_expr(src),
        other => Err(Error::Parse { line: 1, msg: format!("unknown document header {other:?}") }),
    }
}

pub fn parse_expr(src: &str) -> Result<RationalFn> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, other)) => {
            return Err(Error::Parse { line: n, msg: format!("expected {HEADER:?}, found {other:?}") })
        }
        None => return Err(Error::Parse { line: 0, msg: "empty document".into() }),
    }
    let mut env: HashMap<String, Value> = HashMap::new();
    let mut name = None;
    let mut result = None;
    for (n, line) in lines {
        let at_line = |e: Error| match e {
            Error::Parse { msg, .. } => Error::Parse { line: n, msg },
            other => other,
        };
        if let Some(rest) = line.strip_prefix("name ") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("let ") {
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: n, msg: "expected `let name = term`".into() })?;
            let ident = lhs.trim();
            if !is_ident(ident) {
                return Err(Error::Parse { line: n, msg: format!("bad binding name {ident:?}") });
            }
            let v = eval_term(rhs, &env).map_err(at_line)?;
            env.insert(ident.to_string(), v);
        } else if let Some(rest) = line.strip_prefix("result ") {
            if result.is_some() {
                return Err(Error::Parse { line: n, msg: "duplicate result".into() });
            }
            result = Some(eval_term(rest, &env).map_err(at_line)?);
        } else {
            return Err(Error::Parse { line: n, msg: format!("unrecognized line {line:?}") });
        }
    }
    let f = match result {
        Some(Value::Fn(p)) => RationalFn::from_partial(p)?,
        Some(Value::Otherwise(_)) => {
            return Err(Error::Parse { line: 0, msg: "otherwise(..) is only valid inside piecewise".into() })
        }
        None => return Err(Error::Parse { line: 0, msg: "missing result line".into() }),
    };
    Ok(match name {
        Some(n) => f.named(n),
        None => f,
    })
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Clone)]
enum Value {
    Fn(PartialFn),
    Otherwise(PartialFn),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Lang(String),
    Open,
    Close,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '{' => {
                let end = chars[i..]
                    .iter()
                    .position(|&c| c == '}')
                    .ok_or_else(|| Error::Parse { line: 0, msg: "unclosed '{'".into() })?;
                out.push(Tok::Lang(chars[i + 1..i + end].iter().collect()));
                i += end + 1;
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '~' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '~') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse { line: 0, msg: format!("unexpected character {other:?}") }),
        }
    }
    Ok(out)
}

/// A parsed term before evaluation.
#[derive(Debug)]
enum Term {
    Atom(String),
    Lang(String),
    Call(String, Vec<Term>),
}

struct TermParser {
    toks: Vec<Tok>,
    pos: usize,
}

impl TermParser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 0, msg: format!("{msg} at token {}", self.pos) }
    }

    fn term(&mut self) -> Result<Term> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Lang(l)) => {
                self.pos += 1;
                Ok(Term::Lang(l))
            }
            Some(Tok::Ident(id)) => {
                self.pos += 1;
                if self.toks.get(self.pos) != Some(&Tok::Open) {
                    return Ok(Term::Atom(id));
                }
                self.pos += 1;
                let mut args = Vec::new();
                if self.toks.get(self.pos) == Some(&Tok::Close) {
                    self.pos += 1;
                    return Ok(Term::Call(id, args));
                }
                loop {
                    args.push(self.term()?);
                    match self.toks.get(self.pos) {
                        Some(Tok::Comma) => self.pos += 1,
                        Some(Tok::Close) => {
                            self.pos += 1;
                            return Ok(Term::Call(id, args));
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

fn eval_term(src: &str, env: &HashMap<String, Value>) -> Result<Value> {
    let mut p = TermParser { toks: tokenize(src)?, pos: 0 };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    eval(&t, env)
}

fn word_arg(t: &Term) -> Result<Word> {
    match t {
        Term::Atom(s) => s.parse(),
        _ => Err(Error::Parse { line: 0, msg: format!("expected a word, found {t:?}") }),
    }
}

fn lang_arg(t: &Term) -> Result<Lang> {
    match t {
        Term::Lang(s) => parse_lang(s),
        _ => Err(Error::Parse { line: 0, msg: format!("expected {{language}}, found {t:?}") }),
    }
}

fn total(f: RationalFn) -> Value {
    Value::Fn(f.as_partial().clone())
}

fn eval(t: &Term, env: &HashMap<String, Value>) -> Result<Value> {
    let arity = |args: &[Term], n: usize, name: &str| {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse { line: 0, msg: format!("{name} takes {n} argument(s), got {}", args.len()) })
        }
    };
    let fn_arg = |t: &Term| -> Result<PartialFn> {
        match eval(t, env)? {
            Value::Fn(p) => Ok(p),
            Value::Otherwise(_) => Err(Error::Parse { line: 0, msg: "otherwise(..) outside piecewise".into() }),
        }
    };
    match t {
        Term::Lang(_) => Err(Error::Parse { line: 0, msg: "a language is not a function".into() }),
        Term::Atom(a) => match a.as_str() {
            "identity" => Ok(total(basis::identity())),
            "drop_odd" => Ok(total(basis::drop_odd())),
            "hilbert_shift" => Ok(total(basis::hilbert_shift())),
            "prefix_eraser" => Ok(total(basis::prefix_eraser())),
            other => env
                .get(other)
                .cloned()
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown name {other:?}") }),
        },
        Term::Call(name, args) => match name.as_str() {
            "constant" | "prepend" | "chain_shift" => {
                arity(args, 1, name)?;
                let w = word_arg(&args[0])?;
                Ok(total(match name.as_str() {
                    "constant" => basis::constant(&w),
                    "prepend" => basis::prepend(&w),
                    _ => basis::chain_shift(&w),
                }))
            }
            "cylinder_swap" | "transposition" | "parity_two" => {
                arity(args, 2, name)?;
                let (u, v) = (word_arg(&args[0])?, word_arg(&args[1])?);
                Ok(total(match name.as_str() {
                    "cylinder_swap" => basis::cylinder_swap(&u, &v)?,
                    "transposition" => basis::transposition(&u, &v)?,
                    _ => basis::parity_two(&u, &v)?,
                }))
            }
            "generous_onto" => {
                arity(args, 1, name)?;
                Ok(total(witnesses::generous_onto(&lang_arg(&args[0])?)?))
            }
            "restrict" => {
                arity(args, 2, name)?;
                Ok(Value::Fn(fn_arg(&args[0])?.restrict(&lang_arg(&args[1])?)))
            }
            "inverse" => {
                arity(args, 1, name)?;
                let f = RationalFn::from_partial(fn_arg(&args[0])?)?;
                Ok(Value::Fn(f.inverse_injective()?))
            }
            "compose" => {
                if args.is_empty() {
                    return Err(Error::Parse { line: 0, msg: "compose needs arguments".into() });
                }
                let fs = args.iter().map(fn_arg).collect::<Result<Vec<_>>>()?;
                let (last, rest) = fs.split_last().unwrap();
                Ok(Value::Fn(rest.iter().rev().fold(last.clone(), |acc, f| f.compose(&acc))))
            }
            "otherwise" => {
                arity(args, 1, name)?;
                Ok(Value::Otherwise(fn_arg(&args[0])?))
            }
            "piecewise" => {
                let mut pieces = Vec::new();
                let mut covered = Lang::empty();
                for (i, a) in args.iter().enumerate() {
                    match eval(a, env)? {
                        Value::Fn(p) => {
                            covered = covered.union(&p.domain());
                            pieces.push(p);
                        }
                        Value::Otherwise(p) if i + 1 == args.len() => {
                            pieces.push(p.restrict(&covered.complement()));
                        }
                        Value::Otherwise(_) => {
                            return Err(Error::Parse { line: 0, msg: "otherwise(..) must be the last piece".into() })
                        }
                    }
                }
                Ok(total(RationalFn::piecewise(&pieces)?))
            }
            other => Err(Error::Parse { line: 0, msg: format!("unknown constructor {other:?}") }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn squash_document() {
        let src = "expr v1\nname squash\nlet strip = inverse(prepend(1))\nresult piecewise(strip, otherwise(constant(~)))\n";
        let f = load_function(src).unwrap();
        assert_eq!(f.name(), Some("squash"));
        assert_eq!(f.eval(&w("101")), w("01"));
        assert_eq!(f.eval(&w("0")), Word::empty());
        assert_eq!(f.eval(&w("1")), Word::empty());
    }

    #[test]
    fn composition_order() {
        let f = load_function("expr v1\nresult compose(prepend(1), drop_odd)\n").unwrap();
        assert_eq!(f.eval(&w("0110")), w("101"));
        let g = load_function("expr v1\nresult restrict(identity, {.*})\n").unwrap();
        assert!(g.equivalent(&basis::identity()));
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(load_function("expr v1\nresult bogus\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_function("expr v1\nresult restrict(identity, {0.*})\n"), Err(Error::NotTotal { .. })));
        assert!(matches!(
            load_function("expr v1\nresult piecewise(restrict(identity, {0.*}), restrict(identity, {0.*|~|1.*}))\n"),
            Err(Error::DomainsOverlap { .. })
        ));
        assert!(matches!(load_function("nonsense\n"), Err(Error::Parse { .. })));
        assert!(matches!(load_function("expr v1\nresult inverse(drop_odd)\n"), Err(Error::NotInjective { .. })));
    }
}
