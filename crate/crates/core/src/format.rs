//! Text files for portraits and polynomial sequences.
//!
//! Portrait file:
//! ```text
//! valence: 3
//! degrees: periodic [2]
//! A0: 1/14 1/7 2/7
//! ```
//! Sequence file:
//! ```text
//! bounds {3,1,1}
//! generator periodic [[-1,0,1]]
//! ```
//! Other generator lines are `preperiodic [[..],..];[[..],..]` and
//! `word 0110 0->[..] 1->[..] odd->[..]`. `#` starts a comment.

use std::fmt::Write as _;

use crate::angle::AngleSet;
use crate::error::{Error, Result};
use crate::poly::{Generator, Polynomial, PolynomialSequence, SequenceBounds, C64};
use crate::portrait::{DegreeSequence, FormalPortrait, WordRule};

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parse `re`, `imi`, `re+imi` or `re-imi`; a bare `i` means 1.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || perr(format!("bad complex number {s:?}"));
    let num = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse().map_err(|_| bad()),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    let b = body.as_bytes();
    let split = (1..b.len())
        .rev()
        .find(|&j| (b[j] == b'+' || b[j] == b'-') && !matches!(b[j - 1], b'e' | b'E'));
    match split {
        Some(j) => Ok(C64::new(body[..j].parse().map_err(|_| bad())?, num(&body[j..])?)),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

/// `[c0,c1,...]`, low to high.
pub fn parse_polynomial(s: &str) -> Result<Polynomial> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(format!("polynomial must be a bracketed list: {s:?}")))?;
    let coeffs = inner.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
    Polynomial::new(coeffs)
}

/// `[[..],[..]]`.
fn parse_poly_list(s: &str) -> Result<Vec<Polynomial>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected a list of polynomials: {s:?}")))?;
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in inner.char_indices() {
        match c {
            '[' if start.is_none() => start = Some(i),
            ']' => {
                let o = start.take().ok_or_else(|| perr("unbalanced brackets"))?;
                out.push(parse_polynomial(&inner[o..=i])?);
            }
            _ => {}
        }
    }
    if start.is_some() || out.is_empty() {
        return Err(perr(format!("expected a non-empty list of polynomials: {s:?}")));
    }
    Ok(out)
}

fn poly_list(ps: &[Polynomial]) -> String {
    let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_usize_list(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected [d1,d2,...]: {s:?}")))?;
    inner
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| perr(format!("bad degree {t:?}"))))
        .collect()
}

/// Inverse of `Display for DegreeSequence`; a bare integer means a constant degree.
pub fn parse_degrees(s: &str) -> Result<DegreeSequence> {
    let s = s.trim();
    if let Ok(d) = s.parse::<u64>() {
        return DegreeSequence::constant(d);
    }
    let (kind, rest) = s.split_once(char::is_whitespace).ok_or_else(|| perr(format!("bad degree sequence {s:?}")))?;
    let rest = rest.trim();
    match kind {
        "periodic" => DegreeSequence::periodic(parse_usize_list(rest)?),
        "preperiodic" => {
            let (a, b) = rest.split_once(';').ok_or_else(|| perr("preperiodic needs `[..];[..]`"))?;
            DegreeSequence::preperiodic(parse_usize_list(a)?, parse_usize_list(b)?)
        }
        "word" => {
            let (word, map) = rest.split_once(char::is_whitespace).ok_or_else(|| perr("word needs a map"))?;
            let map = map.trim().strip_prefix("map").ok_or_else(|| perr("expected `map 0->d,1->d`"))?;
            let (mut zero, mut one, mut odd) = (None, None, None);
            for item in map.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (k, v) = item.split_once("->").ok_or_else(|| perr(format!("bad map entry {item:?}")))?;
                let v: u64 = v.trim().parse().map_err(|_| perr(format!("bad degree in {item:?}")))?;
                match k.trim() {
                    "0" => zero = Some(v),
                    "1" => one = Some(v),
                    "odd" => odd = Some(v),
                    other => return Err(perr(format!("unknown map key {other:?}"))),
                }
            }
            DegreeSequence::word(WordRule {
                word: word.to_string(),
                zero: zero.ok_or_else(|| perr("map lacks 0->"))?,
                one: one.ok_or_else(|| perr("map lacks 1->"))?,
                odd,
            })
        }
        _ => Err(perr(format!("unknown degree sequence kind {kind:?}"))),
    }
}

pub fn parse_portrait(text: &str) -> Result<FormalPortrait> {
    let (mut valence, mut degrees, mut a0) = (None, None, None);
    for line in content_lines(text) {
        let (k, v) = line.split_once(':').ok_or_else(|| perr(format!("expected `key: value`, got {line:?}")))?;
        match k.trim() {
            "valence" => valence = Some(v.trim().parse::<usize>().map_err(|_| perr("bad valence"))?),
            "degrees" => degrees = Some(parse_degrees(v)?),
            "A0" => a0 = Some(AngleSet::parse_list(v)?),
            other => return Err(perr(format!("unknown portrait key {other:?}"))),
        }
    }
    let a0 = a0.ok_or_else(|| perr("missing A0 line"))?;
    let degrees = degrees.ok_or_else(|| perr("missing degrees line"))?;
    if let Some(n) = valence {
        if n != a0.valence() {
            return Err(perr(format!("valence {n} but A0 has {} angles", a0.valence())));
        }
    }
    Ok(FormalPortrait::new(a0, degrees))
}

pub fn write_portrait(p: &FormalPortrait) -> String {
    format!("valence: {}\ndegrees: {}\nA0: {}\n", p.valence(), p.degrees(), angle_words(&p.initial_set()))
}

fn angle_words(set: &AngleSet) -> String {
    set.angles().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_bounds(s: &str) -> Result<SequenceBounds> {
    let t = s.trim();
    let t = t.strip_prefix('{').and_then(|x| x.strip_suffix('}')).unwrap_or(t);
    let parts: Vec<&str> = t.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()).collect();
    if parts.len() != 3 {
        return Err(perr(format!("bounds need d, K, M: {s:?}")));
    }
    let d = parts[0].parse().map_err(|_| perr("bad d in bounds"))?;
    let k = parts[1].parse().map_err(|_| perr("bad K in bounds"))?;
    let m = parts[2].parse().map_err(|_| perr("bad M in bounds"))?;
    SequenceBounds::new(d, k, m)
}

fn parse_generator(s: &str) -> Result<Generator> {
    let s = s.trim();
    let (kind, rest) = s.split_once(char::is_whitespace).ok_or_else(|| perr(format!("bad generator {s:?}")))?;
    let rest = rest.trim();
    match kind {
        "periodic" => Ok(Generator::Periodic { pre: vec![], per: parse_poly_list(rest)? }),
        "preperiodic" => {
            let (a, b) = rest.split_once(';').ok_or_else(|| perr("preperiodic needs `[[..]];[[..]]`"))?;
            Ok(Generator::Periodic { pre: parse_poly_list(a)?, per: parse_poly_list(b)? })
        }
        "word" => {
            let mut it = rest.split_whitespace();
            let word = it.next().ok_or_else(|| perr("word generator needs a word"))?.to_string();
            let (mut zero, mut one, mut odd) = (None, None, None);
            for item in it {
                let (k, v) = item.split_once("->").ok_or_else(|| perr(format!("bad entry {item:?}")))?;
                let p = parse_polynomial(v)?;
                match k {
                    "0" => zero = Some(p),
                    "1" => one = Some(p),
                    "odd" => odd = Some(p),
                    other => return Err(perr(format!("unknown generator key {other:?}"))),
                }
            }
            Ok(Generator::Word {
                word,
                zero: zero.ok_or_else(|| perr("word generator lacks 0->"))?,
                one: one.ok_or_else(|| perr("word generator lacks 1->"))?,
                odd,
            })
        }
        _ => Err(perr(format!("unknown generator kind {kind:?}"))),
    }
}

pub fn parse_sequence(text: &str) -> Result<PolynomialSequence> {
    let (mut bounds, mut gen) = (None, None);
    for line in content_lines(text) {
        let (k, v) = line.split_once(char::is_whitespace).ok_or_else(|| perr(format!("bad line {line:?}")))?;
        match k {
            "bounds" => bounds = Some(parse_bounds(v)?),
            "generator" => gen = Some(parse_generator(v)?),
            other => return Err(perr(format!("unknown sequence key {other:?}"))),
        }
    }
    PolynomialSequence::new(
        gen.ok_or_else(|| perr("missing generator line"))?,
        bounds.ok_or_else(|| perr("missing bounds line"))?,
    )
}

pub fn write_sequence(seq: &PolynomialSequence) -> String {
    let b = seq.bounds();
    let mut s = format!("bounds {{{},{},{}}}\n", b.d, b.k, b.m);
    let _ = match seq.generator() {
        Generator::Periodic { pre, per } if pre.is_empty() => writeln!(s, "generator periodic {}", poly_list(per)),
        Generator::Periodic { pre, per } => writeln!(s, "generator preperiodic {};{}", poly_list(pre), poly_list(per)),
        Generator::Word { word, zero, one, odd } => {
            let _ = write!(s, "generator word {word} 0->{zero} 1->{one}");
            match odd {
                Some(o) => writeln!(s, " odd->{o}"),
                None => writeln!(s),
            }
        }
    };
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::format_complex;

    #[test]
    fn complex_forms() {
        for (s, z) in [
            ("1.5", C64::new(1.5, 0.0)),
            ("-2i", C64::new(0.0, -2.0)),
            ("i", C64::new(0.0, 1.0)),
            ("0.25-0.5i", C64::new(0.25, -0.5)),
            ("-1+3i", C64::new(-1.0, 3.0)),
            ("1e-3+2e-4i", C64::new(1e-3, 2e-4)),
            ("1e+2-1e-2i", C64::new(100.0, -0.01)),
        ] {
            assert_eq!(parse_complex(s).unwrap(), z, "{s}");
        }
        for z in [C64::new(0.1, -0.3), C64::new(-0.122561, 0.744862), C64::new(0.0, 1e-20), C64::new(-7.0, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn portrait_file() {
        let p = parse_portrait("valence: 3\ndegrees: periodic [2]\nA0: 1/14 1/7 2/7\n").unwrap();
        assert!(p.is_valid());
        assert_eq!(parse_portrait(&write_portrait(&p)).unwrap(), p);
        let bare = parse_portrait("degrees: 3\nA0: 1/6 1/3\n").unwrap();
        assert_eq!(bare.degrees(), &DegreeSequence::constant(3).unwrap());
        assert!(parse_portrait("valence: 2\ndegrees: 2\nA0: 1/7 2/7 4/7").is_err());
        assert!(parse_portrait("degrees: 2\n").is_err());
    }

    #[test]
    fn degree_sequences_round_trip() {
        let cases = [
            DegreeSequence::periodic(vec![2, 3]).unwrap(),
            DegreeSequence::preperiodic(vec![6], vec![2]).unwrap(),
            DegreeSequence::word(WordRule { word: "0110".into(), zero: 2, one: 3, odd: Some(2) }).unwrap(),
            DegreeSequence::word(WordRule { word: "1".into(), zero: 2, one: 3, odd: None }).unwrap(),
        ];
        for d in cases {
            assert_eq!(parse_degrees(&d.to_string()).unwrap(), d);
        }
        assert!(parse_degrees("word 012 map 0->2,1->3").is_err());
        assert!(parse_degrees("periodic []").is_err());
    }

    #[test]
    fn sequence_files_round_trip() {
        let texts = [
            "bounds {3,1,1.5}\ngenerator periodic [[0,1.5,0,1]]\n",
            "# rabbit\nbounds 2 1 1\ngenerator periodic [[-0.122561+0.744862i,0,1]]\n",
            "bounds {3,1,1}\ngenerator preperiodic [[0,0,1]];[[-1,0,1],[0,0,0,1]]\n",
            "bounds {3,1,1}\ngenerator word 01 0->[-1,0,1] 1->[0,0,0,1] odd->[-1,0,1]\n",
        ];
        for t in texts {
            let s = parse_sequence(t).unwrap();
            assert_eq!(parse_sequence(&write_sequence(&s)).unwrap(), s, "{t}");
        }
        assert!(parse_sequence("bounds {2,1,0.5}\ngenerator periodic [[-1,0,1]]").is_err());
        assert!(parse_sequence("generator periodic [[-1,0,1]]").is_err());
    }
}
