use std::fmt;

use super::{Alphabet, Dfa, Symbol, RESERVED};
use crate::error::{Error, Result};

/// Extended regular expression with complement and intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Epsilon,
    Literal(Symbol),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Intersect(Vec<Regex>),
    Star(Box<Regex>),
    Complement(Box<Regex>),
}

/// An expression together with the alphabet its complements refer to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegexAst {
    pub node: Regex,
    pub alphabet: Alphabet,
}

impl RegexAst {
    pub fn new(node: Regex, alphabet: Alphabet) -> Result<Self> {
        fn check(r: &Regex, k: usize) -> Result<()> {
            match r {
                Regex::Literal(a) if *a >= k => Err(Error::UnknownSymbol(format!("#{a}"))),
                Regex::Concat(xs) | Regex::Union(xs) | Regex::Intersect(xs) => xs.iter().try_for_each(|x| check(x, k)),
                Regex::Star(x) | Regex::Complement(x) => check(x, k),
                _ => Ok(()),
            }
        }
        check(&node, alphabet.len())?;
        Ok(RegexAst { node, alphabet })
    }

    pub fn to_dfa(&self) -> Dfa {
        regex_to_dfa(self)
    }
}

impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_regex(f, &self.node, &self.alphabet, 0)
    }
}

type Writer<'a> = Box<dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result + 'a>;

// precedence levels: 0 union, 1 intersect, 2 concat, 3 complement, 4 star
fn write_regex(f: &mut fmt::Formatter<'_>, r: &Regex, sigma: &Alphabet, outer: u8) -> fmt::Result {
    let (level, body): (u8, Writer<'_>) = match r {
        Regex::Empty => (5, Box::new(|f| f.write_str("%0"))),
        Regex::Epsilon => (5, Box::new(|f| f.write_str("%e"))),
        Regex::Literal(a) => (5, Box::new(move |f| f.write_str(sigma.name(*a)))),
        Regex::Union(xs) | Regex::Intersect(xs) | Regex::Concat(xs) if xs.is_empty() => {
            let unit = if matches!(r, Regex::Union(_)) {
                "%0"
            } else if matches!(r, Regex::Concat(_)) {
                "%e"
            } else {
                "~%0"
            };
            (5, Box::new(move |f| f.write_str(unit)))
        }
        Regex::Union(xs) => (0, Box::new(move |f| join(f, xs, " | ", sigma, 1))),
        Regex::Intersect(xs) => (1, Box::new(move |f| join(f, xs, " & ", sigma, 2))),
        Regex::Concat(xs) => (2, Box::new(move |f| join(f, xs, " ", sigma, 3))),
        Regex::Complement(x) => (
            3,
            Box::new(move |f| {
                f.write_str("~")?;
                write_regex(f, x, sigma, 3)
            }),
        ),
        Regex::Star(x) => (
            4,
            Box::new(move |f| {
                write_regex(f, x, sigma, 5)?;
                f.write_str("*")
            }),
        ),
    };
    if level < outer {
        f.write_str("(")?;
        body(f)?;
        f.write_str(")")
    } else {
        body(f)
    }
}

fn join(f: &mut fmt::Formatter<'_>, xs: &[Regex], sep: &str, sigma: &Alphabet, inner: u8) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write_regex(f, x, sigma, inner)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Eps,
    Nothing,
    Star,
    Tilde,
    Amp,
    Bar,
    Open,
    Close,
}

/// Unknown identifiers over a single-character alphabet are split into one
/// token per character, so `10*` reads as `1 0*`.
fn tokenize(text: &str, sigma: &Alphabet) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let single = match c {
            '*' => Some(Tok::Star),
            '~' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            _ => None,
        };
        if c.is_whitespace() {
            chars.next();
        } else if let Some(t) = single {
            chars.next();
            out.push((pos, t));
        } else if c == '%' {
            chars.next();
            match chars.next() {
                Some((_, 'e')) => out.push((pos, Tok::Eps)),
                Some((_, '0')) => out.push((pos, Tok::Nothing)),
                _ => return Err(Error::Syntax { position: pos, message: "expected %e or %0".into() }),
            }
        } else {
            let mut ident = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if c.is_whitespace() || RESERVED.contains(&c) {
                    break;
                }
                ident.push(c);
                chars.next();
            }
            if sigma.index_of(&ident).is_none() && sigma.is_compact() {
                let mut at = pos;
                for c in ident.chars() {
                    out.push((at, Tok::Ident(c.to_string())));
                    at += c.len_utf8();
                }
            } else {
                out.push((pos, Tok::Ident(ident)));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    sigma: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn syntax(&self, message: &str) -> Error {
        Error::Syntax { position: self.pos(), message: message.into() }
    }

    fn union(&mut self) -> Result<Regex> {
        let mut parts = vec![self.intersect()?];
        while self.peek() == Some(&Tok::Bar) {
            self.i += 1;
            parts.push(self.intersect()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Regex::Union(parts) })
    }

    fn intersect(&mut self) -> Result<Regex> {
        let mut parts = vec![self.concat()?];
        while self.peek() == Some(&Tok::Amp) {
            self.i += 1;
            parts.push(self.concat()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Regex::Intersect(parts) })
    }

    fn concat(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        while matches!(self.peek(), Some(Tok::Ident(_) | Tok::Eps | Tok::Nothing | Tok::Tilde | Tok::Open)) {
            match self.prefix()? {
                Regex::Concat(xs) => parts.extend(xs),
                r => parts.push(r),
            }
        }
        match parts.len() {
            0 => Err(self.syntax("expected an expression")),
            1 => Ok(parts.pop().unwrap()),
            _ => Ok(Regex::Concat(parts)),
        }
    }

    fn prefix(&mut self) -> Result<Regex> {
        if self.peek() == Some(&Tok::Tilde) {
            self.i += 1;
            return Ok(Regex::Complement(Box::new(self.prefix()?)));
        }
        let mut r = self.atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.i += 1;
            r = Regex::Star(Box::new(r));
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        let Some((pos, tok)) = self.toks.get(self.i).cloned() else {
            return Err(self.syntax("unexpected end of expression"));
        };
        self.i += 1;
        match tok {
            Tok::Eps => Ok(Regex::Epsilon),
            Tok::Nothing => Ok(Regex::Empty),
            Tok::Open => {
                let r = self.union()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.syntax("expected `)`"));
                }
                self.i += 1;
                Ok(r)
            }
            Tok::Ident(name) => self.ident(&name),
            _ => Err(Error::Syntax { position: pos, message: "unexpected operator".into() }),
        }
    }

    fn ident(&self, name: &str) -> Result<Regex> {
        self.sigma.index_of(name).map(Regex::Literal).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }
}

/// Parses an expression over a given alphabet.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<RegexAst> {
    let toks = tokenize(text, alphabet)?;
    let mut p = Parser { toks, i: 0, end: text.len(), sigma: alphabet };
    let node = p.union()?;
    if p.i != p.toks.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(RegexAst { node, alphabet: alphabet.clone() })
}

/// Parses a regex file: an `alphabet:` header line followed by the
/// expression. Blank lines and `#` comments are ignored.
pub fn parse_regex_file(text: &str) -> Result<RegexAst> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    });
    let (line, header) = lines.next().ok_or(Error::Format { line: 1, message: "empty file".into() })?;
    let sigma = header
        .trim()
        .strip_prefix("alphabet:")
        .ok_or(Error::Format { line: line + 1, message: "expected `alphabet:` header".into() })?;
    let sigma = Alphabet::parse(sigma)?;
    let body: Vec<&str> = lines.map(|(_, l)| l).collect();
    parse_regex(&body.join(" "), &sigma)
}

/// Compiles an expression to a minimal DFA.
pub fn regex_to_dfa(ast: &RegexAst) -> Dfa {
    compile(&ast.node, &ast.alphabet)
}

fn compile(r: &Regex, sigma: &Alphabet) -> Dfa {
    let fold = |xs: &[Regex], unit: Dfa, op: &dyn Fn(&Dfa, &Dfa) -> Dfa| {
        xs.iter().fold(unit, |acc, x| op(&acc, &compile(x, sigma)).minimize())
    };
    match r {
        Regex::Empty => Dfa::empty(sigma.clone()),
        Regex::Epsilon => Dfa::epsilon(sigma.clone()),
        Regex::Literal(a) => Dfa::word(sigma.clone(), &[*a]).minimize(),
        Regex::Concat(xs) => fold(xs, Dfa::epsilon(sigma.clone()), &|x, y| x.concat(y).expect("same alphabet")),
        Regex::Union(xs) => fold(xs, Dfa::empty(sigma.clone()), &|x, y| x.union(y).expect("same alphabet")),
        Regex::Intersect(xs) => fold(xs, Dfa::universal(sigma.clone()), &|x, y| x.intersect(y).expect("same alphabet")),
        Regex::Star(x) => compile(x, sigma).star(),
        Regex::Complement(x) => compile(x, sigma).complement().minimize(),
    }
}
