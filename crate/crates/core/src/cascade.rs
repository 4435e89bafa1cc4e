//! Cascades of automata.
//!
//! Level `i` reads the current states of levels `0..i` together with the
//! input symbol; all levels step at once on the pre-step states. Level
//! alphabets are composite symbols `s0.s1.….a`, so each level is an
//! ordinary [`Dfa`].

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use crate::automata::{parse_dfa, write_dfa, Alphabet, Dfa, Symbol};
use crate::error::{cap_check, Error, Limit, Result};

pub const DEFAULT_CASCADE_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct Cascade {
    sigma: Alphabet,
    levels: Vec<Dfa>,
    accept: HashSet<Vec<usize>>,
}

/// Alphabet of a level above levels with the given state counts.
pub fn level_alphabet(sizes: &[usize], sigma: &Alphabet) -> Result<Alphabet> {
    let mut names: Vec<String> = sigma.symbols().to_vec();
    for &size in sizes.iter().rev() {
        names = (0..size).flat_map(|s| names.iter().map(move |rest| format!("{s}.{rest}"))).collect();
    }
    Alphabet::new(names)
}

impl Cascade {
    pub fn new(sigma: Alphabet, levels: Vec<Dfa>, accept: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut sizes = Vec::new();
        for (i, level) in levels.iter().enumerate() {
            let expected = level_alphabet(&sizes, &sigma)?;
            if level.alphabet() != &expected {
                return Err(Error::AlphabetMismatch {
                    left: format!("level {i}: {}", level.alphabet().symbols().join(" ")),
                    right: expected.symbols().join(" "),
                });
            }
            sizes.push(level.num_states());
        }
        let accept: HashSet<Vec<usize>> = accept.into_iter().collect();
        for tuple in &accept {
            if tuple.len() != sizes.len() || tuple.iter().zip(&sizes).any(|(&s, &n)| s >= n) {
                return Err(Error::Precondition(format!("accept tuple {tuple:?} does not fit the levels")));
            }
        }
        Ok(Cascade { sigma, levels, accept })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn levels(&self) -> &[Dfa] {
        &self.levels
    }

    pub fn accept(&self) -> &HashSet<Vec<usize>> {
        &self.accept
    }

    pub fn start(&self) -> Vec<usize> {
        self.levels.iter().map(Dfa::start).collect()
    }

    /// Joint successor of `state` on `a`.
    pub fn step(&self, state: &[usize], a: Symbol) -> Vec<usize> {
        let mut composite = 0;
        let mut next = Vec::with_capacity(state.len());
        let k = self.sigma.len();
        for (i, level) in self.levels.iter().enumerate() {
            next.push(level.next(state[i], composite * k + a));
            composite = composite * level.num_states() + state[i];
        }
        next
    }
}

pub fn cascade_accepts(c: &Cascade, x: &[Symbol]) -> bool {
    let end = x.iter().fold(c.start(), |s, &a| c.step(&s, a));
    c.accept.contains(&end)
}

/// Every symbol acts as the identity or as a constant map.
pub fn is_reset_automaton(dfa: &Dfa) -> bool {
    let n = dfa.num_states();
    (0..dfa.alphabet().len())
        .all(|a| (0..n).all(|q| dfa.next(q, a) == q) || (0..n).all(|q| dfa.next(q, a) == dfa.next(0, a)))
}

/// Product DFA over the reachable joint states.
pub fn cascade_to_dfa(c: &Cascade, cap: usize) -> Result<Dfa> {
    let k = c.sigma.len();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states = vec![c.start()];
    index.insert(c.start(), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for a in 0..k {
            let next = c.step(&states[i], a);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    cap_check(Limit::CascadeStates, cap, states.len() + 1)?;
                    index.insert(next.clone(), states.len());
                    states.push(next);
                    states.len() - 1
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let accept = states.iter().map(|s| c.accept.contains(s)).collect();
    Dfa::new(c.sigma.clone(), delta, 0, accept)
}

/// Two levels for `Σ*20*2Σ*` over `{0, 1, 2}`: level 0 remembers whether
/// the last non-0 symbol was a 2; level 1 latches once a 2 arrives in that
/// state.
pub fn infix_cascade() -> Cascade {
    let sigma = Alphabet::parse("0 1 2").unwrap();
    let first = Dfa::from_fn(
        sigma.clone(),
        2,
        0,
        |_| false,
        |q, a| match a {
            0 => q,
            1 => 0,
            _ => 1,
        },
    )
    .unwrap();
    let above = level_alphabet(&[2], &sigma).unwrap();
    let second = Dfa::from_fn(above, 2, 0, |_| false, |p, c| if p == 1 || c == 3 + 2 { 1 } else { 0 }).unwrap();
    Cascade::new(sigma, vec![first, second], [vec![0, 1], vec![1, 1]]).unwrap()
}

/// Depth-toggle levels for bounded-depth brackets `[ ]` plus an error level.
///
/// Level 0 is set by `[` and cleared by `]`. Level `i > 0` is set by `[`
/// when every lower level is set, and cleared by `]` when every lower level
/// is clear. The error level latches on `]` with all levels clear and on
/// `[` with all levels set. Accepting: all levels clear, no error.
pub fn paren_cascade(k: usize) -> Result<Cascade> {
    if k == 0 {
        return Err(Error::Precondition("paren cascade needs k >= 1".into()));
    }
    let sigma = Alphabet::parse("[ ]")?;
    let mut levels = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let sizes = vec![2; i];
        let alphabet = level_alphabet(&sizes, &sigma)?;
        let all_set = (1usize << i) - 1;
        let error = i == k;
        levels.push(Dfa::from_fn(
            alphabet,
            2,
            0,
            |_| false,
            move |q, c| {
                let (lower, a) = (c / 2, c % 2);
                match (error, a) {
                    (false, 0) if lower == all_set => 1,
                    (false, 1) if lower == 0 => 0,
                    (true, 0) if lower == all_set => 1,
                    (true, 1) if lower == 0 => 1,
                    _ => q,
                }
            },
        )?);
    }
    let mut accept = vec![0; k];
    accept.push(0);
    Cascade::new(sigma, levels, [accept])
}

/// Writes a manifest plus one DFA file per level into `dir`, named
/// `{stem}.manifest` and `{stem}.level{i}.dfa`. Returns the manifest path.
pub fn save_cascade(c: &Cascade, dir: &Path, stem: &str) -> Result<std::path::PathBuf> {
    let mut manifest = String::new();
    writeln!(manifest, "alphabet: {}", c.sigma.symbols().join(" ")).unwrap();
    for (i, level) in c.levels.iter().enumerate() {
        let name = format!("{stem}.level{i}.dfa");
        std::fs::write(dir.join(&name), write_dfa(level))?;
        writeln!(manifest, "level: {name}").unwrap();
    }
    let mut tuples: Vec<&Vec<usize>> = c.accept.iter().collect();
    tuples.sort();
    for t in tuples {
        let t: Vec<String> = t.iter().map(usize::to_string).collect();
        writeln!(manifest, "accept: {}", t.join(" ")).unwrap();
    }
    let path = dir.join(format!("{stem}.manifest"));
    std::fs::write(&path, manifest)?;
    Ok(path)
}

/// Reads a manifest:
///
/// ```text
/// alphabet: 0 1 2
/// level: infix.level0.dfa
/// level: infix.level1.dfa
/// accept: 0 1
/// accept: 1 1
/// ```
///
/// Level paths are relative to the manifest's directory.
pub fn load_cascade(path: &Path) -> Result<Cascade> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_cascade(&text, |name| Ok(std::fs::read_to_string(dir.join(name))?))
}

pub fn parse_cascade(text: &str, mut read: impl FnMut(&str) -> Result<String>) -> Result<Cascade> {
    let mut sigma = None;
    let mut levels = Vec::new();
    let mut accept = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| Error::Format { line, message: format!("expected `key: value`, got `{content}`") })?;
        let value = value.trim();
        match key.trim() {
            "alphabet" => sigma = Some(Alphabet::parse(value)?),
            "level" => levels.push(parse_dfa(&read(value)?)?),
            "accept" => accept.push(
                value
                    .split_whitespace()
                    .map(|s| s.parse().map_err(|_| Error::Format { line, message: format!("bad state `{s}`") }))
                    .collect::<Result<Vec<usize>>>()?,
            ),
            other => return Err(Error::Format { line, message: format!("unknown key `{other}`") }),
        }
    }
    let sigma = sigma.ok_or(Error::Format { line: 0, message: "missing alphabet".into() })?;
    Cascade::new(sigma, levels, accept)
}
