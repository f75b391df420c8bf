//! A small regular-expression syntax for languages over `{0,1}`.
//!
//! ```text
//! alt    := inter ('|' inter)*
//! inter  := concat ('&' concat)*
//! concat := unary*                 (empty concatenation is ~)
//! unary  := '!' unary | atom ('*' | '+' | '?')*
//! atom   := '0' | '1' | '~' | '.' | '%' | '(' alt ')'
//! ```
//! `~` is the empty word, `.` any single symbol, `%` the empty language,
//! `!` complement and `&` intersection. Whitespace is ignored.

use crate::automata::Lang;
use crate::error::{Error, Result};
use crate::word::Word;

pub fn parse_lang(src: &str) -> Result<Lang> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0 };
    let lang = p.alt()?;
    if p.pos != p.chars.len() {
        return Err(p.err("unexpected character"));
    }
    Ok(lang)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { line: 0, msg: format!("language syntax: {msg} at offset {}", self.pos) }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alt(&mut self) -> Result<Lang> {
        let mut acc = self.inter()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            acc = acc.union(&self.inter()?);
        }
        Ok(acc)
    }

    fn inter(&mut self) -> Result<Lang> {
        let mut acc = self.concat()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            acc = acc.intersect(&self.concat()?);
        }
        Ok(acc)
    }

    fn concat(&mut self) -> Result<Lang> {
        let mut acc = Lang::singleton(&Word::empty());
        while let Some(c) = self.peek() {
            if matches!(c, '|' | '&' | ')') {
                break;
            }
            acc = acc.concat(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Lang> {
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(self.unary()?.complement());
        }
        let mut l = self.atom()?;
        while let Some(c) = self.peek() {
            l = match c {
                '*' => l.star(),
                '+' => l.concat(&l.star()),
                '?' => l.union(&Lang::singleton(&Word::empty())),
                _ => break,
            };
            self.pos += 1;
        }
        Ok(l)
    }

    fn atom(&mut self) -> Result<Lang> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match c {
            '0' => Ok(Lang::singleton(&Word::symbol(0))),
            '1' => Ok(Lang::singleton(&Word::symbol(1))),
            '~' => Ok(Lang::singleton(&Word::empty())),
            '.' => Ok(Lang::from_words(&[Word::symbol(0), Word::symbol(1)])),
            '%' => Ok(Lang::empty()),
            '(' => {
                let l = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(l)
            }
            _ => {
                self.pos -= 1;
                Err(self.err("unexpected character"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_matches_hand_predicates() {
        let cases: Vec<(&str, Box<dyn Fn(&Word) -> bool>)> = vec![
            ("0*", Box::new(|w: &Word| w.symbols().iter().all(|&s| s == 0))),
            ("1.*", Box::new(|w: &Word| w.symbols().first() == Some(&1))),
            ("!(1.*)", Box::new(|w: &Word| w.symbols().first() != Some(&1))),
            ("..?", Box::new(|w: &Word| (1..=2).contains(&w.len()))),
            (".*1.* & 0.*", Box::new(|w: &Word| w.symbols().first() == Some(&0) && w.symbols().contains(&1))),
            ("(00)+", Box::new(|w: &Word| w.len() % 2 == 0 && !w.is_empty() && w.symbols().iter().all(|&s| s == 0))),
            ("%", Box::new(|_: &Word| false)),
            ("", Box::new(|w: &Word| w.is_empty())),
        ];
        for (src, pred) in cases {
            let l = parse_lang(src).unwrap();
            for x in Word::all_up_to(7) {
                assert_eq!(l.contains(&x), pred(&x), "{src} on {x}");
            }
        }
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_lang("(0").is_err());
        assert!(parse_lang("2").is_err());
        assert!(parse_lang("0)").is_err());
    }
}
