//! Canonical relabeling, deciding strong isomorphism by equality.
//!
//! Three strategies, tried in order:
//! 1. every state is the unique image of the whole state set under some word
//!    (true of synchronizing transducers that are their own core): the state
//!    is named by the least such word, ordered by size and then
//!    lexicographically;
//! 2. an initial state reaches everything: breadth-first numbering from it;
//! 3. otherwise a backtracking search for the least breadth-first encoding
//!    over all choices of roots.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::transducer::{CoreTransducer, FiniteTransducer};
use crate::words::{Gen, MultiWord};

/// Largest state count handled by the backtracking strategy.
pub const MAX_BACKTRACK_STATES: usize = 64;

const MAX_SUBSETS: usize = 200_000;
const MAX_PIECES: usize = 200_000;

pub fn canonical_form(t: &FiniteTransducer) -> Result<FiniteTransducer> {
    if let Some(c) = by_sync_words(t) {
        return Ok(c);
    }
    if let Some(i) = t.initial() {
        if t.reachable_from(i).len() == t.state_count() {
            let order = t.reachable_from(i);
            let names = (0..order.len()).map(|k| format!("s{k}")).collect();
            return Ok(t.reorder(&order, names));
        }
    }
    by_backtracking(t)
}

pub fn canonical_core(c: &CoreTransducer) -> Result<CoreTransducer> {
    Ok(CoreTransducer::new_unchecked(canonical_form(c.inner())?, c.sync_length()))
}

pub fn strongly_isomorphic(a: &FiniteTransducer, b: &FiniteTransducer) -> Result<bool> {
    if a.state_count() != b.state_count() || a.domain() != b.domain() || a.range() != b.range() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

type Subset = Vec<usize>;

fn image(t: &FiniteTransducer, s: &[usize], g: Gen) -> Subset {
    let mut out: Subset = s.iter().map(|&q| t.edge(q, g).target).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn by_sync_words(t: &FiniteTransducer) -> Option<FiniteTransducer> {
    let full: Subset = (0..t.state_count()).collect();
    let mut dist: HashMap<Subset, usize> = HashMap::new();
    let mut single = vec![usize::MAX; t.state_count()];
    let mut queue = VecDeque::new();
    dist.insert(full.clone(), 0);
    queue.push_back(full.clone());
    let mut found = 0;
    while let Some(s) = queue.pop_front() {
        let k = dist[&s];
        if s.len() == 1 && single[s[0]] == usize::MAX {
            single[s[0]] = k;
            found += 1;
            if found == t.state_count() {
                break;
            }
        }
        for g in t.domain().generators() {
            let next = image(t, &s, g);
            if !dist.contains_key(&next) {
                if dist.len() >= MAX_SUBSETS {
                    return None;
                }
                dist.insert(next.clone(), k + 1);
                queue.push_back(next);
            }
        }
    }
    if found < t.state_count() {
        return None;
    }
    let mut labelled: Vec<(MultiWord, usize)> = (0..t.state_count())
        .map(|q| (least_word(t, &full, q, single[q]), q))
        .collect();
    labelled.sort_by(|a, b| a.0.shortlex_key().cmp(&b.0.shortlex_key()));
    let order: Vec<usize> = labelled.iter().map(|x| x.1).collect();
    let names = labelled.iter().map(|x| x.0.to_string()).collect();
    Some(t.reorder(&order, names))
}

/// Least word of the given size, in the derived `MultiWord` order, that
/// sends every state to `q`. Words are built coordinate by coordinate;
/// moving on to the next coordinate sorts before any further letter because
/// a proper prefix sorts first.
fn least_word(t: &FiniteTransducer, full: &[usize], q: usize, size: usize) -> MultiWord {
    let d = t.domain().d;
    let mut memo = HashMap::new();
    let mut cur = full.to_vec();
    let mut coord = 0;
    let mut remaining = size;
    let mut word = MultiWord::empty(d);
    while remaining > 0 {
        if coord + 1 < d && feasible(t, q, &cur, coord + 1, remaining, &mut memo) {
            coord += 1;
            continue;
        }
        let mut advanced = false;
        for letter in 0..t.domain().n as u8 {
            let next = image(t, &cur, Gen { coord, letter });
            if feasible(t, q, &next, coord, remaining - 1, &mut memo) {
                word.push(coord, letter);
                cur = next;
                remaining -= 1;
                advanced = true;
                break;
            }
        }
        assert!(advanced, "size came from a breadth-first distance");
    }
    word
}

fn feasible(
    t: &FiniteTransducer,
    q: usize,
    s: &[usize],
    coord: usize,
    remaining: usize,
    memo: &mut HashMap<(Subset, usize, usize), bool>,
) -> bool {
    if remaining == 0 {
        return s.len() == 1 && s[0] == q;
    }
    let key = (s.to_vec(), coord, remaining);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut ok = coord + 1 < t.domain().d && feasible(t, q, s, coord + 1, remaining, memo);
    if !ok {
        for letter in 0..t.domain().n as u8 {
            let next = image(t, s, Gen { coord, letter });
            if feasible(t, q, &next, coord, remaining - 1, memo) {
                ok = true;
                break;
            }
        }
    }
    memo.insert(key, ok);
    ok
}

type Piece = Vec<(usize, MultiWord)>;

struct Search<'a> {
    t: &'a FiniteTransducer,
    best: Option<(Vec<Piece>, Vec<usize>)>,
    work: usize,
}

impl Search<'_> {
    /// Breadth-first numbering from `root`, continuing `number`.
    fn piece(&self, root: usize, number: &mut [usize], next: &mut usize, order: &mut Vec<usize>) -> Piece {
        let mut enc = Vec::new();
        let start = order.len();
        number[root] = *next;
        *next += 1;
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for gi in 0..self.t.domain().generator_count() {
                let e = self.t.edge_by_index(q, gi);
                if number[e.target] == usize::MAX {
                    number[e.target] = *next;
                    *next += 1;
                    order.push(e.target);
                }
                enc.push((number[e.target], e.output.clone()));
            }
        }
        enc
    }

    fn run(&mut self, number: Vec<usize>, next: usize, order: Vec<usize>, pieces: Vec<Piece>) -> Result<()> {
        if order.len() == self.t.state_count() {
            let better = match &self.best {
                None => true,
                Some((b, _)) => pieces < *b,
            };
            if better {
                self.best = Some((pieces, order));
            }
            return Ok(());
        }
        let mut options = Vec::new();
        for root in 0..self.t.state_count() {
            if number[root] != usize::MAX {
                continue;
            }
            self.work += 1;
            if self.work > MAX_PIECES {
                return Err(Error::TooLarge(format!(
                    "canonical search over {} states exceeded {MAX_PIECES} steps",
                    self.t.state_count()
                )));
            }
            let mut num = number.clone();
            let mut nx = next;
            let mut ord = order.clone();
            let p = self.piece(root, &mut num, &mut nx, &mut ord);
            options.push((p, num, nx, ord));
        }
        let least = options.iter().map(|o| &o.0).min().cloned().expect("some state is unnumbered");
        for (p, num, nx, ord) in options {
            if p == least {
                let mut ps = pieces.clone();
                ps.push(p);
                self.run(num, nx, ord, ps)?;
            }
        }
        Ok(())
    }
}

fn by_backtracking(t: &FiniteTransducer) -> Result<FiniteTransducer> {
    if t.state_count() > MAX_BACKTRACK_STATES {
        return Err(Error::TooLarge(format!(
            "{} states; canonical search is limited to {MAX_BACKTRACK_STATES}",
            t.state_count()
        )));
    }
    let mut search = Search { t, best: None, work: 0 };
    let number = vec![usize::MAX; t.state_count()];
    match t.initial() {
        Some(i) => {
            let mut num = number;
            let mut nx = 0;
            let mut ord = Vec::new();
            let p = search.piece(i, &mut num, &mut nx, &mut ord);
            search.run(num, nx, ord, vec![p])?;
        }
        None => search.run(number, 0, Vec::new(), Vec::new())?,
    }
    let (_, order) = search.best.expect("search visits at least one numbering");
    let names = (0..order.len()).map(|k| format!("s{k}")).collect();
    Ok(t.reorder(&order, names))
}
