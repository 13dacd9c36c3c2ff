//! Text formats: `transducer v1`, `exchange v1` and `wreath v1`.
//!
//! ```text
//! transducer v1
//! n 2
//! d 1
//! states A B
//! initial A
//! A 0 0 -> B / 0
//! ```
//!
//! `n` and `d` give the output space. A transducer reading another space
//! (the diagonal presentation) adds `domain <n> <d>`. Transition lines are
//! `<state> <coord> <letter> -> <state> / <output>` with the output a word
//! literal (`|` between coordinates, `-` for the empty word). `#` starts a
//! comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::outer::{CoordPermutation, WreathCoordinates};
use crate::transducer::{CoreTransducer, FiniteTransducer, RawTransducer};
use crate::vgroup::PrefixExchange;
use crate::words::{Gen, MultiWord, Params};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments removed, numbered from 1.
fn lines(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn int(line: usize, tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| perr(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| perr(line, format!("bad {what}")))
}

fn word(line: usize, tok: &str, p: Params) -> Result<MultiWord> {
    let w: MultiWord = tok.parse().map_err(|e: Error| perr(line, e.to_string()))?;
    if w.dim() != p.d {
        return Err(perr(line, format!("word {tok} has {} coordinates, expected {}", w.dim(), p.d)));
    }
    w.check(p).map_err(|e| perr(line, e.to_string()))?;
    Ok(w)
}

fn params(line: usize, n: usize, d: usize) -> Result<Params> {
    Params::new(n, d).map_err(|e| perr(line, e.to_string()))
}

pub fn write_transducer(t: &FiniteTransducer) -> String {
    let mut s = String::from("transducer v1\n");
    let r = t.range();
    let _ = writeln!(s, "n {}", r.n);
    let _ = writeln!(s, "d {}", r.d);
    if t.domain() != r {
        let _ = writeln!(s, "domain {} {}", t.domain().n, t.domain().d);
    }
    let _ = writeln!(s, "states {}", t.names().join(" "));
    if let Some(i) = t.initial() {
        let _ = writeln!(s, "initial {}", t.name(i));
    }
    for q in 0..t.state_count() {
        for g in t.domain().generators() {
            let e = t.edge(q, g);
            let _ = writeln!(s, "{} {} {} -> {} / {}", t.name(q), g.coord, g.letter, t.name(e.target), e.output);
        }
    }
    s
}

pub fn parse_transducer(s: &str) -> Result<FiniteTransducer> {
    parse_transducer_lines(&lines(s).collect::<Vec<_>>())
}

fn parse_transducer_lines(ls: &[(usize, &str)]) -> Result<FiniteTransducer> {
    let mut it = ls.iter().copied();
    match it.next() {
        Some((_, "transducer v1")) => {}
        Some((l, other)) => return Err(perr(l, format!("expected `transducer v1`, found {other:?}"))),
        None => return Err(perr(0, "empty file")),
    }
    let (mut n, mut d, mut domain, mut states, mut initial) = (None, None, None, None, None);
    let mut raw: Option<RawTransducer> = None;
    for (l, line) in it {
        let mut tok = line.split_whitespace();
        let head = tok.next().expect("line is non-empty");
        if raw.is_none() {
            match head {
                "n" => {
                    n = Some(int(l, tok.next(), "n")?);
                    continue;
                }
                "d" => {
                    d = Some(int(l, tok.next(), "d")?);
                    continue;
                }
                "domain" => {
                    let dn = int(l, tok.next(), "domain n")?;
                    let dd = int(l, tok.next(), "domain d")?;
                    domain = Some((l, dn, dd));
                    continue;
                }
                "states" => {
                    states = Some(tok.map(str::to_string).collect::<Vec<_>>());
                    continue;
                }
                "initial" => {
                    initial = Some((l, tok.next().ok_or_else(|| perr(l, "missing initial state"))?.to_string()));
                    continue;
                }
                _ => {
                    let n = n.ok_or_else(|| perr(l, "missing `n` line"))?;
                    let d = d.ok_or_else(|| perr(l, "missing `d` line"))?;
                    let range = params(l, n, d)?;
                    let dom = match domain {
                        Some((dl, dn, dd)) => params(dl, dn, dd)?,
                        None => range,
                    };
                    let names = states.take().ok_or_else(|| perr(l, "missing `states` line"))?;
                    let mut r = RawTransducer::new(dom, range, names);
                    if let Some((il, name)) = &initial {
                        r.set_initial(name).map_err(|e| perr(*il, e.to_string()))?;
                    }
                    raw = Some(r);
                }
            }
        }
        let r = raw.as_mut().expect("set above");
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 7 || toks[3] != "->" || toks[5] != "/" {
            return Err(perr(l, "expected `<state> <coord> <letter> -> <state> / <output>`"));
        }
        let q = r.index_of(toks[0]).map_err(|e| perr(l, e.to_string()))?;
        let t = r.index_of(toks[4]).map_err(|e| perr(l, e.to_string()))?;
        let coord = int(l, Some(toks[1]), "coordinate")?;
        let letter = int(l, Some(toks[2]), "letter")?;
        let letter = u8::try_from(letter).map_err(|_| perr(l, "bad letter"))?;
        let out = word(l, toks[6], r.range())?;
        r.set(q, Gen { coord, letter }, t, out).map_err(|e| perr(l, e.to_string()))?;
    }
    match raw {
        Some(r) => r.validate(),
        None => {
            // A file with no transition lines.
            let l = ls.last().map_or(0, |x| x.0);
            let n = n.ok_or_else(|| perr(l, "missing `n` line"))?;
            let d = d.ok_or_else(|| perr(l, "missing `d` line"))?;
            let range = params(l, n, d)?;
            let dom = match domain {
                Some((dl, dn, dd)) => params(dl, dn, dd)?,
                None => range,
            };
            let names = states.ok_or_else(|| perr(l, "missing `states` line"))?;
            RawTransducer::new(dom, range, names).validate()
        }
    }
}

pub fn write_exchange(f: &PrefixExchange) -> String {
    let mut s = String::from("exchange v1\n");
    let _ = writeln!(s, "n {}", f.params().n);
    let _ = writeln!(s, "d {}", f.params().d);
    for (a, b) in f.pairs() {
        let _ = writeln!(s, "{a} -> {b}");
    }
    s
}

pub fn parse_exchange(s: &str) -> Result<PrefixExchange> {
    let mut it = lines(s);
    match it.next() {
        Some((_, "exchange v1")) => {}
        Some((l, other)) => return Err(perr(l, format!("expected `exchange v1`, found {other:?}"))),
        None => return Err(perr(0, "empty file")),
    }
    let (mut n, mut d) = (None, None);
    let mut pairs = Vec::new();
    let mut last = 0;
    for (l, line) in it {
        last = l;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["n", x] => n = Some(int(l, Some(x), "n")?),
            ["d", x] => d = Some(int(l, Some(x), "d")?),
            [a, "->", b] => {
                let p = params(
                    l,
                    n.ok_or_else(|| perr(l, "missing `n` line"))?,
                    d.ok_or_else(|| perr(l, "missing `d` line"))?,
                )?;
                pairs.push((word(l, a, p)?, word(l, b, p)?));
            }
            _ => return Err(perr(l, "expected `<word> -> <word>`")),
        }
    }
    let p = params(last, n.ok_or_else(|| perr(last, "missing `n` line"))?, d.ok_or_else(|| perr(last, "missing `d` line"))?)?;
    PrefixExchange::new(p, pairs)
}

pub fn write_wreath(w: &WreathCoordinates) -> String {
    let mut s = String::from("wreath v1\n");
    for f in &w.factors {
        s.push_str(&write_transducer(f.inner()));
    }
    let _ = writeln!(s, "perm {}", w.perm);
    s
}

pub fn parse_wreath(s: &str, kmax: usize) -> Result<WreathCoordinates> {
    let ls: Vec<(usize, &str)> = lines(s).collect();
    match ls.first() {
        Some((_, "wreath v1")) => {}
        Some((l, other)) => return Err(perr(*l, format!("expected `wreath v1`, found {other:?}"))),
        None => return Err(perr(0, "empty file")),
    }
    let mut blocks: Vec<Vec<(usize, &str)>> = Vec::new();
    let mut perm = None;
    for &(l, line) in &ls[1..] {
        if line == "transducer v1" {
            blocks.push(vec![(l, line)]);
        } else if let Some(rest) = line.strip_prefix("perm") {
            let images = rest
                .split_whitespace()
                .map(|x| x.parse::<usize>().map_err(|_| perr(l, "bad permutation entry")))
                .collect::<Result<Vec<_>>>()?;
            perm = Some((l, images));
        } else {
            blocks.last_mut().ok_or_else(|| perr(l, "expected `transducer v1`"))?.push((l, line));
        }
    }
    let (pl, images) = perm.ok_or_else(|| perr(ls.last().map_or(0, |x| x.0), "missing `perm` line"))?;
    if images.len() != blocks.len() {
        return Err(perr(pl, format!("permutation of {} coordinates for {} factors", images.len(), blocks.len())));
    }
    let perm = CoordPermutation::new(images).map_err(|e| perr(pl, e.to_string()))?;
    let factors = blocks
        .iter()
        .map(|b| {
            let t = parse_transducer_lines(b)?;
            CoreTransducer::validate(canonical(t)?, kmax)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WreathCoordinates { factors, perm })
}

fn canonical(t: FiniteTransducer) -> Result<FiniteTransducer> {
    crate::canonical::canonical_form(&t.with_initial(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn transducer_round_trip() {
        for t in [fixtures::swap_zero_double_zero(), fixtures::product_figure(), fixtures::diagonal_baker()] {
            let s = write_transducer(&t);
            let back = parse_transducer(&s).unwrap();
            assert_eq!(back, t);
            assert_eq!(write_transducer(&back), s);
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let s = "transducer v1\nn 2\nd 1\nstates A\nA 0 0 -> A / 0\nA 0 1 -> B / 1\n";
        match parse_transducer(s) {
            Err(Error::Parse { line: 6, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let partial = "transducer v1\nn 2\nd 1\nstates A\nA 0 0 -> A / 0\n";
        assert!(matches!(parse_transducer(partial), Err(Error::PartialDelta { .. })));
        assert!(matches!(parse_transducer("transducer v2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn exchange_round_trip() {
        let b = fixtures::baker();
        let s = write_exchange(&b);
        assert_eq!(s, "exchange v1\nn 2\nd 2\n0|- -> -|0\n1|- -> -|1\n");
        assert_eq!(parse_exchange(&s).unwrap(), b);
    }
}
