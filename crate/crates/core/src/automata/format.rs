use std::fmt::Write as _;

use super::{Alphabet, Dfa};
use crate::error::{Error, Result};

/// Parses the line-oriented DFA format:
///
/// ```text
/// alphabet: a b
/// states: 2
/// start: 0
/// accept: 1
/// trans: 0 a 1
/// ```
///
/// Every (state, symbol) pair needs exactly one `trans` line.
pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Option<usize> = None;
    let mut start: Option<usize> = None;
    let mut accept: Option<Vec<usize>> = None;
    let mut delta: Vec<Option<usize>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Format { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, rest) = content.split_once(':').ok_or_else(|| err("expected `key: value`".into()))?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("expected a state index, got `{s}`")));
        match key.trim() {
            "alphabet" => alphabet = Some(Alphabet::parse(rest)?),
            "states" => {
                let n = num(rest.trim())?;
                if n == 0 {
                    return Err(err("at least one state is required".into()));
                }
                states = Some(n);
            }
            "start" => start = Some(num(rest.trim())?),
            "accept" => accept = Some(rest.split_whitespace().map(num).collect::<Result<_>>()?),
            "trans" => {
                let (Some(sigma), Some(n)) = (&alphabet, states) else {
                    return Err(err("`trans` before `alphabet` and `states`".into()));
                };
                if delta.is_empty() {
                    delta = vec![None; n * sigma.len()];
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [from, sym, to] = parts[..] else {
                    return Err(err("expected `trans: state symbol state`".into()));
                };
                let (from, to) = (num(from)?, num(to)?);
                let a = sigma.index_of(sym).ok_or_else(|| Error::UnknownSymbol(sym.to_string()))?;
                if from >= n || to >= n {
                    return Err(err("state index out of range".into()));
                }
                let slot = &mut delta[from * sigma.len() + a];
                if slot.is_some() {
                    return Err(err(format!("duplicate transition for ({from}, {sym})")));
                }
                *slot = Some(to);
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }

    let missing = |what: &str| Error::Format { line: 0, message: format!("missing `{what}` line") };
    let sigma = alphabet.ok_or_else(|| missing("alphabet"))?;
    let n = states.ok_or_else(|| missing("states"))?;
    let start = start.ok_or_else(|| missing("start"))?;
    let accept = accept.ok_or_else(|| missing("accept"))?;
    if delta.is_empty() {
        delta = vec![None; n * sigma.len()];
    }
    if let Some(i) = delta.iter().position(Option::is_none) {
        let (q, a) = (i / sigma.len(), i % sigma.len());
        return Err(Error::Format {
            line: 0,
            message: format!("partial transition function: no edge for ({q}, {})", sigma.name(a)),
        });
    }
    if start >= n || accept.iter().any(|&q| q >= n) {
        return Err(Error::Format { line: 0, message: "state index out of range".into() });
    }
    let mut acc = vec![false; n];
    accept.into_iter().for_each(|q| acc[q] = true);
    Dfa::new(sigma, delta.into_iter().map(Option::unwrap).collect(), start, acc)
}

/// Serializes in the format read by [`parse_dfa`].
pub fn write_dfa(dfa: &Dfa) -> String {
    let sigma = dfa.alphabet();
    let mut out = String::new();
    let accept: Vec<String> = dfa.accepting_states().map(|q| q.to_string()).collect();
    writeln!(out, "alphabet: {sigma}").unwrap();
    writeln!(out, "states: {}", dfa.num_states()).unwrap();
    writeln!(out, "start: {}", dfa.start()).unwrap();
    writeln!(out, "accept: {}", accept.join(" ")).unwrap();
    for q in 0..dfa.num_states() {
        for a in 0..sigma.len() {
            writeln!(out, "trans: {q} {} {}", sigma.name(a), dfa.next(q, a)).unwrap();
        }
    }
    out
}
