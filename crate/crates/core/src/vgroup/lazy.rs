//! Lazy exploration of the minimal transducer of a homeomorphism.
//!
//! A state is the residual of the map after a finite input, normalized so
//! the output already determined has been stripped. Sources describe
//! residuals by finite data ("keys"); equal keys are merged, and the finite
//! regions reached are minimized before use, so a key need not be a perfect
//! normal form.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::algebra;
use crate::error::{Error, Result};
use crate::transducer::{CoreTransducer, Edge, FiniteTransducer};
use crate::words::{Gen, MultiWord, Params};
use crate::Budget;

pub trait ResidualSource {
    type Key: Clone + Eq + Hash + Ord + Debug;

    fn domain(&self) -> Params;
    fn range(&self) -> Params;
    /// The output determined before any input, and the starting residual.
    fn start(&self) -> Result<(MultiWord, Self::Key)>;
    fn step(&self, key: &Self::Key, g: Gen) -> Result<(MultiWord, Self::Key)>;
}

/// `x ↦ ran · f_{P,state}(x − dom)` on the cone over `dom`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Piece {
    pub dom: MultiWord,
    pub ran: MultiWord,
    pub state: usize,
}

/// A homeomorphism given piecewise over a complete prefix code, each piece
/// continuing as a state of a fixed complete-response transducer `P`.
/// Prefix exchanges use the one-state identity for `P`.
#[derive(Debug, Clone)]
pub struct PiecewiseSource {
    tail: FiniteTransducer,
    pieces: Vec<Piece>,
}

impl PiecewiseSource {
    pub fn new(tail: FiniteTransducer, pieces: Vec<Piece>) -> Result<Self> {
        let p = tail.params()?;
        crate::words::PrefixCode::validate(pieces.iter().map(|x| x.dom.clone()).collect(), p)?;
        for x in &pieces {
            x.ran.check(p)?;
            if x.state >= tail.state_count() {
                return Err(Error::UnknownState(format!("#{}", x.state)));
            }
        }
        Ok(Self { tail, pieces })
    }

    pub fn from_exchange(f: &super::PrefixExchange) -> Self {
        let tail = FiniteTransducer::identity(f.params());
        let pieces = f.pairs().iter().map(|(a, b)| Piece { dom: a.clone(), ran: b.clone(), state: 0 }).collect();
        Self { tail, pieces }
    }

    pub fn tail(&self) -> &FiniteTransducer {
        &self.tail
    }

    /// Merges sibling pieces `(u·a@i, v·λ(t,a@i), δ(t,a@i))` into `(u, v, t)`
    /// and strips the common output prefix.
    fn normalize(&self, mut pieces: Vec<Piece>) -> (MultiWord, Vec<Piece>) {
        let p = self.tail.domain();
        loop {
            let mut changed = false;
            for i in 0..p.d {
                let mut groups: BTreeMap<MultiWord, Vec<usize>> = BTreeMap::new();
                for (k, x) in pieces.iter().enumerate() {
                    if x.dom.coord(i).is_empty() {
                        continue;
                    }
                    let mut u = x.dom.clone();
                    u.pop(i);
                    groups.entry(u).or_default().push(k);
                }
                let mut drop = vec![false; pieces.len()];
                let mut added = Vec::new();
                for (u, members) in groups {
                    if members.len() != p.n {
                        continue;
                    }
                    let mut by_letter = vec![usize::MAX; p.n];
                    for &k in &members {
                        by_letter[*pieces[k].dom.coord(i).last().expect("nonempty") as usize] = k;
                    }
                    if let Some((v, t)) = self.find_parent(i, &by_letter, &pieces) {
                        for &k in &members {
                            drop[k] = true;
                        }
                        added.push(Piece { dom: u, ran: v, state: t });
                    }
                }
                if !added.is_empty() {
                    changed = true;
                    let mut next: Vec<Piece> =
                        pieces.into_iter().enumerate().filter(|(k, _)| !drop[*k]).map(|(_, x)| x).collect();
                    next.extend(added);
                    pieces = next;
                }
            }
            if !changed {
                break;
            }
        }
        strip(pieces, |x| &mut x.ran)
    }

    fn find_parent(&self, i: usize, by_letter: &[usize], pieces: &[Piece]) -> Option<(MultiWord, usize)> {
        'states: for t in 0..self.tail.state_count() {
            let mut v: Option<MultiWord> = None;
            for (a, &k) in by_letter.iter().enumerate() {
                let e = self.tail.edge(t, Gen { coord: i, letter: a as u8 });
                if e.target != pieces[k].state {
                    continue 'states;
                }
                let Some(cand) = pieces[k].ran.strip_suffix(&e.output) else { continue 'states };
                match &v {
                    None => v = Some(cand),
                    Some(prev) if *prev == cand => {}
                    Some(_) => continue 'states,
                }
            }
            return v.map(|v| (v, t));
        }
        None
    }
}

/// Strips and returns the common prefix of the selected words; sorts.
fn strip<F>(mut pieces: Vec<Piece>, mut sel: F) -> (MultiWord, Vec<Piece>)
where
    F: FnMut(&mut Piece) -> &mut MultiWord,
{
    let lcp = {
        let mut it = pieces.iter_mut();
        let first = it.next().map(|x| sel(x).clone()).expect("residual has pieces");
        it.fold(first, |acc, x| acc.lcp_pair(sel(x)))
    };
    if !lcp.is_empty() {
        for x in &mut pieces {
            let w = sel(x);
            *w = w.subtract(&lcp).expect("lcp is a prefix");
        }
    }
    pieces.sort();
    (lcp, pieces)
}

impl ResidualSource for PiecewiseSource {
    type Key = Vec<Piece>;

    fn domain(&self) -> Params {
        self.tail.domain()
    }

    fn range(&self) -> Params {
        self.tail.range()
    }

    fn start(&self) -> Result<(MultiWord, Self::Key)> {
        Ok(self.normalize(self.pieces.clone()))
    }

    fn step(&self, key: &Self::Key, g: Gen) -> Result<(MultiWord, Self::Key)> {
        let mut next = Vec::with_capacity(key.len());
        for x in key {
            let c = x.dom.coord(g.coord);
            if let Some(&first) = c.first() {
                if first == g.letter {
                    let mut dom = x.dom.clone();
                    dom.pop_front(g.coord);
                    next.push(Piece { dom, ran: x.ran.clone(), state: x.state });
                }
            } else {
                let e = self.tail.edge(x.state, g);
                let mut ran = x.ran.clone();
                ran.append(&e.output);
                next.push(Piece { dom: x.dom.clone(), ran, state: e.target });
            }
        }
        Ok(self.normalize(next))
    }
}

/// The inverse of a state function restricted to a cone of its image.
///
/// A piece `(dom, ran, t)` here means: on `dom · img(f_t)` the map sends
/// `dom · f_t(y)` to `ran · y`. Pieces are unfolded through grid letters of
/// `t` whenever the coordinate being read has been used up.
#[derive(Debug, Clone)]
pub struct InverseSource {
    t: FiniteTransducer,
    state: usize,
    cone: MultiWord,
}

/// Unfoldings of one piece before giving up.
const MAX_UNFOLD: usize = 64;

impl InverseSource {
    /// Starts at state `q`, restricted to the cone over `cone`, which must lie
    /// in the image of `f_q`.
    pub fn new(t: FiniteTransducer, q: usize, cone: MultiWord, depth_budget: usize) -> Result<Self> {
        t.params()?;
        let img = algebra::state_image(&t, q, depth_budget)?;
        if !img.contains_cone(&cone)? {
            return Err(Error::NotInvertible(format!("{cone} is not in the image of {}", t.name(q))));
        }
        Ok(Self { t, state: q, cone })
    }

    /// First cone of the image of `q`, as the default restriction.
    pub fn at_state(t: FiniteTransducer, q: usize, depth_budget: usize) -> Result<Self> {
        let img = algebra::state_image(&t, q, depth_budget)?;
        let cone = img.cones().into_iter().next().ok_or_else(|| {
            Error::NotInvertible(format!("state {} has empty image", t.name(q)))
        })?;
        Self::new(t, q, cone, depth_budget)
    }

    fn unfold(&self, x: &Piece) -> Vec<Piece> {
        let p = self.t.domain();
        (0..p.grid_count())
            .map(|c| {
                let (target, out) = self.t.read_grid(x.state, c);
                let mut dom = x.dom.clone();
                dom.append(&out);
                let mut ran = x.ran.clone();
                ran.append(&p.grid_word(c));
                Piece { dom, ran, state: target }
            })
            .collect()
    }

    fn consume(&self, pieces: Vec<Piece>, g: Gen) -> Result<Vec<Piece>> {
        let mut out = Vec::new();
        let mut work: Vec<(Piece, usize)> = pieces.into_iter().map(|x| (x, 0)).collect();
        while let Some((x, depth)) = work.pop() {
            match x.dom.coord(g.coord).first() {
                Some(&a) => {
                    if a == g.letter {
                        let mut dom = x.dom;
                        dom.pop_front(g.coord);
                        out.push(Piece { dom, ran: x.ran, state: x.state });
                    }
                }
                None => {
                    if depth >= MAX_UNFOLD {
                        return Err(Error::BudgetExceeded(format!(
                            "state {} never writes in coordinate {}",
                            self.t.name(x.state),
                            g.coord
                        )));
                    }
                    for y in self.unfold(&x) {
                        work.push((y, depth + 1));
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(Error::NotInvertible(format!("no preimage after reading {g}")));
        }
        Ok(out)
    }

    /// Merges `n` pieces `(u·λ(t,a@i), v·a@i, δ(t,a@i))` into `(u, v, t)`.
    fn normalize(&self, mut pieces: Vec<Piece>) -> (MultiWord, Vec<Piece>) {
        let p = self.t.domain();
        loop {
            let mut changed = false;
            for i in 0..p.d {
                let mut groups: BTreeMap<MultiWord, Vec<usize>> = BTreeMap::new();
                for (k, x) in pieces.iter().enumerate() {
                    if x.ran.coord(i).is_empty() {
                        continue;
                    }
                    let mut v = x.ran.clone();
                    v.pop(i);
                    groups.entry(v).or_default().push(k);
                }
                let mut drop = vec![false; pieces.len()];
                let mut added = Vec::new();
                for (v, members) in groups {
                    if members.len() != p.n {
                        continue;
                    }
                    let mut by_letter = vec![usize::MAX; p.n];
                    for &k in &members {
                        by_letter[*pieces[k].ran.coord(i).last().expect("nonempty") as usize] = k;
                    }
                    if by_letter.contains(&usize::MAX) {
                        continue;
                    }
                    'states: for t in 0..self.t.state_count() {
                        let mut u: Option<MultiWord> = None;
                        for (a, &k) in by_letter.iter().enumerate() {
                            let e = self.t.edge(t, Gen { coord: i, letter: a as u8 });
                            if e.target != pieces[k].state {
                                continue 'states;
                            }
                            let Some(cand) = pieces[k].dom.strip_suffix(&e.output) else { continue 'states };
                            match &u {
                                None => u = Some(cand),
                                Some(prev) if *prev == cand => {}
                                Some(_) => continue 'states,
                            }
                        }
                        if let Some(u) = u {
                            for &k in &members {
                                drop[k] = true;
                            }
                            added.push(Piece { dom: u, ran: v.clone(), state: t });
                            break;
                        }
                    }
                }
                if !added.is_empty() {
                    changed = true;
                    let mut next: Vec<Piece> =
                        pieces.into_iter().enumerate().filter(|(k, _)| !drop[*k]).map(|(_, x)| x).collect();
                    next.extend(added);
                    pieces = next;
                }
            }
            if !changed {
                break;
            }
        }
        strip(pieces, |x| &mut x.ran)
    }
}

impl ResidualSource for InverseSource {
    type Key = Vec<Piece>;

    fn domain(&self) -> Params {
        self.t.range()
    }

    fn range(&self) -> Params {
        self.t.domain()
    }

    fn start(&self) -> Result<(MultiWord, Self::Key)> {
        let d = self.t.domain().d;
        let mut key = vec![Piece { dom: MultiWord::empty(d), ran: MultiWord::empty(d), state: self.state }];
        let mut out = MultiWord::empty(d);
        for (coord, c) in self.cone.coords().iter().enumerate() {
            for &letter in c {
                let (o, k) = self.step(&key, Gen { coord, letter })?;
                out.append(&o);
                key = k;
            }
        }
        Ok((out, key))
    }

    fn step(&self, key: &Self::Key, g: Gen) -> Result<(MultiWord, Self::Key)> {
        let consumed = self.consume(key.clone(), g)?;
        Ok(self.normalize(consumed))
    }
}

/// The states of a finite transducer as residuals.
#[derive(Debug, Clone)]
pub struct StateSource {
    t: FiniteTransducer,
    start: usize,
}

impl StateSource {
    pub fn new(t: FiniteTransducer, start: usize) -> Result<Self> {
        if start >= t.state_count() {
            return Err(Error::UnknownState(format!("#{start}")));
        }
        Ok(Self { t, start })
    }
}

impl ResidualSource for StateSource {
    type Key = usize;

    fn domain(&self) -> Params {
        self.t.domain()
    }

    fn range(&self) -> Params {
        self.t.range()
    }

    fn start(&self) -> Result<(MultiWord, usize)> {
        Ok((MultiWord::empty(self.t.range().d), self.start))
    }

    fn step(&self, key: &usize, g: Gen) -> Result<(MultiWord, usize)> {
        let e = self.t.edge(*key, g);
        Ok((e.output.clone(), e.target))
    }
}

/// Memoized explorer over a residual source. Not safe to share across
/// threads without external locking, since exploration mutates the memo.
pub struct LazyTransducer<S: ResidualSource> {
    source: S,
    keys: Vec<S::Key>,
    index: HashMap<S::Key, usize>,
    edges: HashMap<(usize, usize), (usize, MultiWord)>,
    start_output: MultiWord,
    max_states: usize,
}

impl<S: ResidualSource> LazyTransducer<S> {
    pub fn new(source: S, max_states: usize) -> Result<Self> {
        let (start_output, key) = source.start()?;
        let mut index = HashMap::new();
        index.insert(key.clone(), 0);
        Ok(Self { source, keys: vec![key], index, edges: HashMap::new(), start_output, max_states })
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn domain(&self) -> Params {
        self.source.domain()
    }

    pub fn range(&self) -> Params {
        self.source.range()
    }

    /// States discovered so far. The start state is `0`.
    pub fn state_count(&self) -> usize {
        self.keys.len()
    }

    pub fn key(&self, s: usize) -> &S::Key {
        &self.keys[s]
    }

    pub fn start_output(&self) -> &MultiWord {
        &self.start_output
    }

    pub fn step(&mut self, s: usize, g: Gen) -> Result<(usize, MultiWord)> {
        let gi = g.index(self.domain().n);
        if let Some(hit) = self.edges.get(&(s, gi)) {
            return Ok(hit.clone());
        }
        let (out, key) = self.source.step(&self.keys[s], g)?;
        let target = match self.index.get(&key) {
            Some(&t) => t,
            None => {
                if self.keys.len() >= self.max_states {
                    return Err(Error::BudgetExceeded(format!("more than {} lazy states", self.max_states)));
                }
                let t = self.keys.len();
                self.index.insert(key.clone(), t);
                self.keys.push(key);
                t
            }
        };
        self.edges.insert((s, gi), (target, out.clone()));
        Ok((target, out))
    }

    pub fn read(&mut self, s: usize, w: &MultiWord) -> Result<(usize, MultiWord)> {
        w.check(self.domain())?;
        let mut state = s;
        let mut out = MultiWord::empty(self.range().d);
        for (coord, c) in w.coords().iter().enumerate() {
            for &letter in c {
                let (t, o) = self.step(state, Gen { coord, letter })?;
                out.append(&o);
                state = t;
            }
        }
        Ok((state, out))
    }

    pub fn read_grid(&mut self, s: usize, code: usize) -> Result<(usize, MultiWord)> {
        let w = self.domain().grid_word(code);
        self.read(s, &w)
    }

    /// Everything written once the prefix `x` has been read from the start.
    pub fn determined(&mut self, x: &MultiWord) -> Result<MultiWord> {
        let (_, out) = self.read(0, x)?;
        let mut all = self.start_output.clone();
        all.append(&out);
        Ok(all)
    }

    /// Closes `from` under single-letter transitions, failing if new states
    /// still appear after `depth` rounds.
    fn close(&mut self, from: &[usize], depth: usize) -> Result<Vec<usize>> {
        let mut seen: HashSet<usize> = from.iter().copied().collect();
        let mut order: Vec<usize> = from.to_vec();
        let mut frontier: Vec<usize> = from.to_vec();
        let gens: Vec<Gen> = self.domain().generators().collect();
        for _ in 0..=depth {
            let mut next = Vec::new();
            for &s in &frontier {
                for &g in &gens {
                    let (t, _) = self.step(s, g)?;
                    if seen.insert(t) {
                        order.push(t);
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                return Ok(order);
            }
            frontier = next;
        }
        Err(Error::BudgetExceeded(format!("region still growing after depth {depth}")))
    }

    /// The finite transducer on a transition-closed set of explored states.
    fn region(&mut self, states: &[usize], names: Vec<String>) -> Result<FiniteTransducer> {
        let pos: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let gens: Vec<Gen> = self.domain().generators().collect();
        let mut edges = Vec::with_capacity(states.len() * gens.len());
        for &s in states {
            for &g in &gens {
                let (t, out) = self.step(s, g)?;
                edges.push(Edge { target: pos[&t], output: out });
            }
        }
        Ok(FiniteTransducer::from_parts(self.domain(), self.range(), names, edges, None))
    }
}

fn lazy_names(states: &[usize]) -> Vec<String> {
    states.iter().map(|&s| if s == 0 { "q0".to_string() } else { format!("s{s}") }).collect()
}

/// Explores the states reached by grid words of depth `k = 0, 1, …` and their
/// closure, and returns the core once three consecutive levels agree.
pub fn lazy_core<S: ResidualSource>(l: &mut LazyTransducer<S>, budget: Budget) -> Result<CoreTransducer> {
    if l.domain() != l.range() {
        return Err(Error::ParamMismatch("lazy core needs equal domain and range".into()));
    }
    let grid = l.domain().grid_count();
    let mut level: Vec<usize> = vec![0];
    let mut last: Option<CoreTransducer> = None;
    let mut agree = 0;
    let mut last_error = None;
    for k in 0..=budget.kmax {
        if k > 0 {
            let mut next = HashSet::new();
            for &s in &level {
                for c in 0..grid {
                    next.insert(l.read_grid(s, c)?.0);
                }
            }
            level = next.into_iter().collect();
            level.sort_unstable();
        }
        let attempt = l.close(&level, budget.depth).and_then(|states| {
            let names = lazy_names(&states);
            let t = l.region(&states, names)?;
            algebra::core(&t.minimize(), budget.kmax)
        });
        match attempt {
            Ok(c) => {
                if last.as_ref() == Some(&c) {
                    agree += 1;
                } else {
                    agree = 1;
                    last = Some(c);
                }
                if agree == 3 {
                    return Ok(last.expect("set above"));
                }
            }
            Err(e @ (Error::BudgetExceeded(_) | Error::NotSynchronizing { .. })) => {
                agree = 0;
                last = None;
                last_error = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExceeded(format!(
        "no stable core within kmax {}{}",
        budget.kmax,
        last_error.map(|e| format!(" (last failure: {e})")).unwrap_or_default()
    )))
}

/// The transducer obtained by reading only grid letters, i.e. one letter in
/// every coordinate at a time, from the start. Its domain alphabet has
/// `n^d` letters coded with coordinate 0 most significant. Output determined
/// before any input is not part of the result.
pub fn diagonal_restrict<S: ResidualSource>(l: &mut LazyTransducer<S>, max_states: usize) -> Result<FiniteTransducer> {
    let p = l.domain();
    let grid = p.grid_count();
    let domain = Params::new(grid, 1).map_err(|_| {
        Error::TooLarge(format!("grid alphabet of {grid} letters exceeds single-digit letters"))
    })?;
    let mut order = vec![0usize];
    let mut pos: HashMap<usize, usize> = HashMap::from([(0, 0)]);
    let mut rows: Vec<Vec<(usize, MultiWord)>> = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        i += 1;
        let mut row = Vec::with_capacity(grid);
        for c in 0..grid {
            let (t, out) = l.read_grid(s, c)?;
            if let std::collections::hash_map::Entry::Vacant(e) = pos.entry(t) {
                if order.len() >= max_states {
                    return Err(Error::BudgetExceeded(format!("diagonal restriction exceeds {max_states} states")));
                }
                e.insert(order.len());
                order.push(t);
            }
            row.push((t, out));
        }
        rows.push(row);
    }
    let mut edges = Vec::with_capacity(order.len() * grid);
    for row in rows {
        for (t, out) in row {
            edges.push(Edge { target: pos[&t], output: out });
        }
    }
    let names = lazy_names(&order);
    Ok(FiniteTransducer::from_parts(domain, l.range(), names, edges, Some(0)).minimize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::vgroup::PrefixExchange;

    fn w(s: &str) -> MultiWord {
        s.parse().unwrap()
    }

    fn lazy(f: &PrefixExchange) -> LazyTransducer<PiecewiseSource> {
        LazyTransducer::new(PiecewiseSource::from_exchange(f), 10_000).unwrap()
    }

    #[test]
    fn baker_start_fragment() {
        let mut l = lazy(&fixtures::baker());
        let (s, out) = l.read(0, &w("-|1")).unwrap();
        assert_eq!(out, w("-|-"));
        let (core_state, out) = l.read(s, &w("1|-")).unwrap();
        assert_eq!(out, w("-|11"));
        let (back, out) = l.read(core_state, &w("0|1")).unwrap();
        assert_eq!((back, out), (core_state, w("0|1")));
    }

    #[test]
    fn baker_core_is_identity() {
        let mut l = lazy(&fixtures::baker());
        let c = lazy_core(&mut l, Budget::default()).unwrap();
        assert!(c.is_identity());
        let mut id = lazy(&PrefixExchange::identity(Params::new(2, 2).unwrap()));
        assert!(lazy_core(&mut id, Budget::default()).unwrap().is_identity());
        assert_eq!(id.state_count(), 1);
    }

    #[test]
    fn diagonal_baker_matches_fixture() {
        let mut l = lazy(&fixtures::baker());
        let t = diagonal_restrict(&mut l, 1000).unwrap();
        assert!(crate::strongly_isomorphic(&t, &fixtures::diagonal_baker()).unwrap());
    }

    #[test]
    fn lazy_agrees_with_eval() {
        let b = fixtures::baker();
        let mut l = lazy(&b);
        for x in Params::new(2, 2).unwrap().words_up_to_depth(3) {
            assert_eq!(l.determined(&x).unwrap(), b.eval(&x).unwrap(), "at {x}");
        }
    }

    #[test]
    fn swap_inverse_residuals() {
        let t = fixtures::swap_zero_double_zero().with_initial(None);
        let src = InverseSource::at_state(t, 0, 16).unwrap();
        let mut l = LazyTransducer::new(src, 10_000).unwrap();
        // Inverting the swap at a full-image state is the swap again.
        let (_, out) = l.read(0, &w("001")).unwrap();
        let mut all = l.start_output().clone();
        all.append(&out);
        assert!(all.is_prefix_of(&w("01")) || w("01").is_prefix_of(&all));
    }
}
