//! Tokenizer. `--` starts a comment running to the end of the line.

use std::fmt;

use super::syntax::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// A keyword or a reserved type name.
    Key(&'static str),
    Num(u64),
    /// `p/q` written without spaces.
    Rat(u64, u64),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Key(k) => write!(f, "`{k}`"),
            Tok::Num(n) => write!(f, "numeral `{n}`"),
            Tok::Rat(p, q) => write!(f, "literal `{p}/{q}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "def", "let", "in", "if", "then", "else", "case", "natrec", "wrec", "J", "refl", "funext", "happly", "seg", "sup",
    "fst", "snd", "inl", "inr", "succ", "zero", "true", "false", "tt", "absurd", "min", "monus", "Bool", "Nat",
    "Empty", "Unit", "U", "R+", "Id", "El", "If", "W", "#bool", "#pi", "#eq",
];

const SYMBOLS: &[&str] = &["->", "=>", "(", ")", "[", "]", ",", ".", ":", "=", "*", "+", "|", "\\"];

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let is_ident_start = |c: char| c.is_alphabetic() || c == '_';
    let is_ident = |c: char| c.is_alphanumeric() || c == '_' || c == '\'';
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut u32| {
            *i += n;
            *col += n as u32;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num = parse_u64(&chars[start..i], span)?;
            let tok = if chars.get(i) == Some(&'/') && chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                let dstart = i + 1;
                i = dstart;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den = parse_u64(&chars[dstart..i], span)?;
                if den == 0 {
                    return Err(ParseError::new(span, "zero denominator"));
                }
                Tok::Rat(num, den)
            } else {
                Tok::Num(num)
            };
            col += (i - start) as u32;
            tok
        } else if c == '#' || is_ident_start(c) {
            let start = i;
            i += 1;
            while i < chars.len() && is_ident(chars[i]) {
                i += 1;
            }
            let mut word: String = chars[start..i].iter().collect();
            if word == "R" && chars.get(i) == Some(&'+') {
                word.push('+');
                i += 1;
            }
            col += (i - start) as u32;
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Key(k),
                None if word.starts_with('#') => {
                    return Err(ParseError::new(span, format!("unknown code former `{word}`")))
                }
                None => Tok::Ident(word),
            }
        } else if c == 'λ' {
            advance(1, &mut i, &mut col);
            Tok::Sym("\\")
        } else if c == '→' {
            advance(1, &mut i, &mut col);
            Tok::Sym("->")
        } else if c == '×' {
            advance(1, &mut i, &mut col);
            Tok::Sym("*")
        } else if let Some(sym) =
            SYMBOLS.iter().find(|s| s.chars().enumerate().all(|(k, sc)| chars.get(i + k) == Some(&sc)))
        {
            advance(sym.len(), &mut i, &mut col);
            Tok::Sym(sym)
        } else {
            return Err(ParseError::new(span, format!("unexpected character `{c}`")));
        };
        out.push(Token { tok, span });
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}

fn parse_u64(digits: &[char], span: Span) -> Result<u64, ParseError> {
    digits.iter().collect::<String>().parse().map_err(|_| ParseError::new(span, "numeral too large"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        lex(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            toks("\\x. x -- comment\n R+ 2/3 #pi"),
            vec![
                Tok::Sym("\\"),
                Tok::Ident("x".into()),
                Tok::Sym("."),
                Tok::Ident("x".into()),
                Tok::Key("R+"),
                Tok::Rat(2, 3),
                Tok::Key("#pi"),
                Tok::Eof
            ]
        );
        assert_eq!(toks("a->b"), vec![Tok::Ident("a".into()), Tok::Sym("->"), Tok::Ident("b".into()), Tok::Eof]);
        assert_eq!(toks("R + x")[1], Tok::Sym("+"));
    }

    #[test]
    fn positions_are_one_based() {
        let ts = lex("J (\n  x").unwrap();
        assert_eq!(ts[1].span, Span { line: 1, col: 3 });
        assert_eq!(ts[2].span, Span { line: 2, col: 3 });
    }

    #[test]
    fn errors() {
        assert!(lex("1/0").is_err());
        assert!(lex("x @ y").is_err());
        assert!(lex("#nat").is_err());
    }
}
