//! Finite presentations of `(d,n)`-transducers.
//!
//! A transducer is stored by its action on the `d·n` single-coordinate
//! letters. Those letters generate `(X_n^*)^d` subject only to letters in
//! different coordinates commuting, so the presentation is faithful exactly
//! when the diamond of every pair of letters in distinct coordinates closes
//! on both the state and the output. [`RawTransducer::validate`] checks this.
//!
//! The domain and range parameters are kept separately. Almost everything in
//! the crate uses `domain == range`; the exception is the diagonal
//! presentation, which reads `n^d`-letter tuples in one coordinate and writes
//! `d`-tuples of words.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{CoherenceWitness, Error, Result};
use crate::graph::strongly_connected_components;
use crate::words::{Gen, Letter, MultiWord, Params};

/// Default cap on rounds for fixpoint iterations.
pub const DEFAULT_ROUNDS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub target: usize,
    pub output: MultiWord,
}

/// Transducer data prior to validation.
#[derive(Debug, Clone)]
pub struct RawTransducer {
    domain: Params,
    range: Params,
    names: Vec<String>,
    edges: Vec<Option<Edge>>,
    initial: Option<usize>,
}

impl RawTransducer {
    pub fn new(domain: Params, range: Params, names: Vec<String>) -> Self {
        let edges = vec![None; names.len() * domain.generator_count()];
        Self { domain, range, names, edges, initial: None }
    }

    /// Same parameters for domain and range.
    pub fn square(params: Params, names: Vec<String>) -> Self {
        Self::new(params, params, names)
    }

    pub fn with_state_names<S: AsRef<str>>(params: Params, names: &[S]) -> Self {
        Self::square(params, names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn domain(&self) -> Params {
        self.domain
    }

    pub fn range(&self) -> Params {
        self.range
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|s| s == name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn set(&mut self, state: usize, gen: Gen, target: usize, output: MultiWord) -> Result<()> {
        if state >= self.names.len() {
            return Err(Error::UnknownState(format!("#{state}")));
        }
        if target >= self.names.len() {
            return Err(Error::UnknownState(format!("#{target}")));
        }
        if gen.coord >= self.domain.d {
            return Err(Error::DimensionMismatch { expected: self.domain.d, found: gen.coord + 1 });
        }
        if gen.letter as usize >= self.domain.n {
            return Err(Error::BadLetter { letter: gen.letter, n: self.domain.n });
        }
        let slot = state * self.domain.generator_count() + gen.index(self.domain.n);
        self.edges[slot] = Some(Edge { target, output });
        Ok(())
    }

    /// `set` by state names, with the output given as a literal.
    pub fn set_named(&mut self, from: &str, coord: usize, letter: Letter, to: &str, output: &str) -> Result<()> {
        let q = self.index_of(from)?;
        let t = self.index_of(to)?;
        let out: MultiWord = output.parse()?;
        self.set(q, Gen { coord, letter }, t, out)
    }

    pub fn set_initial(&mut self, name: &str) -> Result<()> {
        self.initial = Some(self.index_of(name)?);
        Ok(())
    }

    pub fn set_initial_index(&mut self, q: Option<usize>) {
        self.initial = q;
    }

    /// Checks totality, letters and the cross-coordinate coherence law.
    pub fn validate(self) -> Result<FiniteTransducer> {
        let mut seen = HashSet::new();
        for name in &self.names {
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(Error::Parse { line: 0, message: format!("bad state name {name:?}") });
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateState(name.clone()));
            }
        }
        if self.names.is_empty() {
            return Err(Error::EmptyInput);
        }
        let g = self.domain.generator_count();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (slot, e) in self.edges.into_iter().enumerate() {
            let gen = Gen::from_index(slot % g, self.domain.n);
            let e = e.ok_or_else(|| Error::PartialDelta {
                state: self.names[slot / g].clone(),
                coord: gen.coord,
                letter: gen.letter,
            })?;
            e.output.check(self.range)?;
            edges.push(e);
        }
        let t = FiniteTransducer {
            domain: self.domain,
            range: self.range,
            names: self.names,
            edges,
            initial: self.initial,
        };
        t.check_coherence()?;
        Ok(t)
    }
}

/// A validated finite `(d,n)`-transducer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteTransducer {
    domain: Params,
    range: Params,
    names: Vec<String>,
    edges: Vec<Edge>,
    initial: Option<usize>,
}

impl FiniteTransducer {
    /// Builds from already-consistent parts. Callers guarantee totality and
    /// letter ranges; coherence is not checked.
    pub(crate) fn from_parts(
        domain: Params,
        range: Params,
        names: Vec<String>,
        edges: Vec<Edge>,
        initial: Option<usize>,
    ) -> Self {
        debug_assert_eq!(edges.len(), names.len() * domain.generator_count());
        Self { domain, range, names, edges, initial }
    }

    /// The one-state transducer writing every letter back in place.
    pub fn identity(params: Params) -> Self {
        let edges = params.generators().map(|g| Edge { target: 0, output: g.word(params.d) }).collect();
        Self::from_parts(params, params, vec![MultiWord::empty(params.d).to_string()], edges, None)
    }

    pub fn domain(&self) -> Params {
        self.domain
    }

    pub fn range(&self) -> Params {
        self.range
    }

    /// Parameters when domain and range agree.
    pub fn params(&self) -> Result<Params> {
        if self.domain != self.range {
            return Err(Error::ParamMismatch(format!(
                "domain {:?} differs from range {:?}",
                self.domain, self.range
            )));
        }
        Ok(self.domain)
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|s| s == name).ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn with_initial(mut self, q: Option<usize>) -> Self {
        self.initial = q;
        self
    }

    pub fn edge(&self, q: usize, gen: Gen) -> &Edge {
        &self.edges[q * self.domain.generator_count() + gen.index(self.domain.n)]
    }

    pub fn edge_by_index(&self, q: usize, gen_index: usize) -> &Edge {
        &self.edges[q * self.domain.generator_count() + gen_index]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Reads `w` from `q`, coordinate 0 first.
    pub fn read(&self, q: usize, w: &MultiWord) -> Result<(usize, MultiWord)> {
        if q >= self.state_count() {
            return Err(Error::UnknownState(format!("#{q}")));
        }
        w.check(self.domain)?;
        Ok(self.read_unchecked(q, w))
    }

    pub fn read_named(&self, q: &str, w: &MultiWord) -> Result<(String, MultiWord)> {
        let (r, out) = self.read(self.index_of(q)?, w)?;
        Ok((self.names[r].clone(), out))
    }

    pub(crate) fn read_unchecked(&self, q: usize, w: &MultiWord) -> (usize, MultiWord) {
        let mut state = q;
        let mut out = MultiWord::empty(self.range.d);
        for (coord, c) in w.coords().iter().enumerate() {
            for &letter in c {
                let e = self.edge(state, Gen { coord, letter });
                out.append(&e.output);
                state = e.target;
            }
        }
        (state, out)
    }

    /// Reads a sequence of generators in the given order.
    pub fn read_gens(&self, q: usize, gens: &[Gen]) -> (usize, MultiWord) {
        let mut state = q;
        let mut out = MultiWord::empty(self.range.d);
        for &g in gens {
            let e = self.edge(state, g);
            out.append(&e.output);
            state = e.target;
        }
        (state, out)
    }

    /// Reads one letter in every coordinate, the tuple encoded by `code`.
    pub fn read_grid(&self, q: usize, code: usize) -> (usize, MultiWord) {
        let letters = self.domain.grid_letter(code);
        let mut state = q;
        let mut out = MultiWord::empty(self.range.d);
        for (coord, letter) in letters.into_iter().enumerate() {
            let e = self.edge(state, Gen { coord, letter });
            out.append(&e.output);
            state = e.target;
        }
        (state, out)
    }

    /// Table of `read_grid` for every state and grid letter.
    pub(crate) fn grid_table(&self) -> Vec<Vec<(usize, MultiWord)>> {
        (0..self.state_count())
            .map(|q| (0..self.domain.grid_count()).map(|c| self.read_grid(q, c)).collect())
            .collect()
    }

    /// States reachable from `start` (including it), in BFS order.
    pub fn reachable_from(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for g in 0..self.domain.generator_count() {
                let t = self.edge_by_index(q, g).target;
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Subtransducer on a set of states closed under transitions.
    pub fn restrict(&self, states: &[usize]) -> Result<Self> {
        let mut index = HashMap::with_capacity(states.len());
        for (i, &q) in states.iter().enumerate() {
            index.insert(q, i);
        }
        let g = self.domain.generator_count();
        let mut edges = Vec::with_capacity(states.len() * g);
        for &q in states {
            for gi in 0..g {
                let e = self.edge_by_index(q, gi);
                let target = *index.get(&e.target).ok_or_else(|| {
                    Error::VerificationFailed(format!("state set not closed: {} leaves it", self.names[q]))
                })?;
                edges.push(Edge { target, output: e.output.clone() });
            }
        }
        let names = states.iter().map(|&q| self.names[q].clone()).collect();
        let initial = self.initial.and_then(|i| index.get(&i).copied());
        Ok(Self::from_parts(self.domain, self.range, names, edges, initial))
    }

    /// Relabels states: state `q` moves to position `order.iter().position(q)`
    /// and is named `names[pos]`.
    pub(crate) fn reorder(&self, order: &[usize], names: Vec<String>) -> Self {
        let mut pos = vec![usize::MAX; self.state_count()];
        for (i, &q) in order.iter().enumerate() {
            pos[q] = i;
        }
        let g = self.domain.generator_count();
        let mut edges = Vec::with_capacity(self.edges.len());
        for &q in order {
            for gi in 0..g {
                let e = self.edge_by_index(q, gi);
                edges.push(Edge { target: pos[e.target], output: e.output.clone() });
            }
        }
        Self::from_parts(self.domain, self.range, names, edges, self.initial.map(|i| pos[i]))
    }

    pub fn rename(&self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.state_count() {
            return Err(Error::DimensionMismatch { expected: self.state_count(), found: names.len() });
        }
        let order: Vec<usize> = (0..self.state_count()).collect();
        Ok(self.reorder(&order, names))
    }

    fn check_coherence(&self) -> Result<()> {
        let p = self.domain;
        for q in 0..self.state_count() {
            for i in 0..p.d {
                for j in i + 1..p.d {
                    for a in 0..p.n as Letter {
                        for b in 0..p.n as Letter {
                            let x = Gen { coord: i, letter: a };
                            let y = Gen { coord: j, letter: b };
                            let fwd = self.read_gens(q, &[x, y]);
                            let bwd = self.read_gens(q, &[y, x]);
                            if fwd != bwd {
                                return Err(Error::Incoherent(Box::new(CoherenceWitness {
                                    state: self.names[q].clone(),
                                    first: (i, a),
                                    second: (j, b),
                                    forward: (self.names[fwd.0].clone(), fwd.1),
                                    backward: (self.names[bwd.0].clone(), bwd.1),
                                })));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-runs the coherence check.
    pub fn revalidate(&self) -> Result<()> {
        self.check_coherence()
    }

    /// Some output coordinate together with a strongly connected set of
    /// states that can be cycled through, reading in every input coordinate,
    /// without ever writing to it. `None` when non-degenerate.
    pub fn degeneracy_witness(&self) -> Option<(usize, Vec<usize>)> {
        let g = self.domain.generator_count();
        for j in 0..self.range.d {
            let mut adj = vec![Vec::new(); self.state_count()];
            for q in 0..self.state_count() {
                for gi in 0..g {
                    let e = self.edge_by_index(q, gi);
                    if e.output.coord(j).is_empty() {
                        adj[q].push(e.target);
                    }
                }
            }
            for comp in strongly_connected_components(self.state_count(), &adj) {
                let members: HashSet<usize> = comp.iter().copied().collect();
                let mut coords = vec![false; self.domain.d];
                for &q in &comp {
                    for gi in 0..g {
                        let e = self.edge_by_index(q, gi);
                        if e.output.coord(j).is_empty() && members.contains(&e.target) {
                            coords[gi / self.domain.n] = true;
                        }
                    }
                }
                if coords.iter().all(|&c| c) {
                    return Some((j, comp));
                }
            }
        }
        None
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy_witness().is_some()
    }

    fn ensure_non_degenerate(&self) -> Result<()> {
        match self.degeneracy_witness() {
            Some((coord, states)) => Err(Error::Degenerate {
                coord,
                states: states.into_iter().map(|q| self.names[q].clone()).collect(),
            }),
            None => Ok(()),
        }
    }

    /// For each state, the longest common prefix of everything its state
    /// function can write.
    ///
    /// The lcp over all depth-`k` inputs is computed by recursion on grid
    /// letters; once every depth-`k` output is strictly longer than that lcp
    /// in every coordinate, the outputs already diverge and further reading
    /// cannot change it.
    pub fn response_offsets(&self, max_rounds: usize) -> Result<Vec<MultiWord>> {
        self.ensure_non_degenerate()?;
        let table = self.grid_table();
        let d = self.range.d;
        let mut lcp = vec![MultiWord::empty(d); self.state_count()];
        let mut min_len = vec![vec![0usize; d]; self.state_count()];
        for _ in 0..max_rounds {
            let mut next_lcp = Vec::with_capacity(self.state_count());
            let mut next_min = Vec::with_capacity(self.state_count());
            for row in &table {
                let mut acc: Option<MultiWord> = None;
                let mut mins = vec![usize::MAX; d];
                for (t, out) in row {
                    let mut cand = out.clone();
                    cand.append(&lcp[*t]);
                    acc = Some(match acc {
                        None => cand,
                        Some(a) => a.lcp_pair(&cand),
                    });
                    for (j, m) in mins.iter_mut().enumerate() {
                        *m = (*m).min(out.coord(j).len() + min_len[*t][j]);
                    }
                }
                next_lcp.push(acc.expect("grid is nonempty"));
                next_min.push(mins);
            }
            lcp = next_lcp;
            min_len = next_min;
            let settled = lcp
                .iter()
                .zip(&min_len)
                .all(|(l, m)| (0..d).all(|j| m[j] > l.coord(j).len()));
            if settled {
                return Ok(lcp);
            }
        }
        Err(Error::RoundsExceeded(max_rounds))
    }

    pub fn has_complete_response(&self) -> Result<bool> {
        Ok(self.response_offsets(DEFAULT_ROUNDS)?.iter().all(MultiWord::is_empty))
    }

    /// Pushes each state's common output prefix forward so that no state
    /// function has its image inside a proper cone.
    pub fn remove_incomplete_response(&self) -> Result<Self> {
        let offsets = self.response_offsets(DEFAULT_ROUNDS)?;
        let g = self.domain.generator_count();
        let mut edges = Vec::with_capacity(self.edges.len());
        for q in 0..self.state_count() {
            for gi in 0..g {
                let e = self.edge_by_index(q, gi);
                let mut out = e.output.clone();
                out.append(&offsets[e.target]);
                let out = out.subtract(&offsets[q])?;
                edges.push(Edge { target: e.target, output: out });
            }
        }
        Ok(Self::from_parts(self.domain, self.range, self.names.clone(), edges, self.initial))
    }

    /// Class index of every state under output equivalence, by Moore-style
    /// refinement on generator signatures. Classes are numbered in order of
    /// their first member.
    pub fn equivalence_classes(&self) -> Vec<usize> {
        let g = self.domain.generator_count();
        let mut class = {
            let mut ids: HashMap<Vec<&MultiWord>, usize> = HashMap::new();
            (0..self.state_count())
                .map(|q| {
                    let sig: Vec<&MultiWord> = (0..g).map(|gi| &self.edge_by_index(q, gi).output).collect();
                    let next = ids.len();
                    *ids.entry(sig).or_insert(next)
                })
                .collect::<Vec<_>>()
        };
        let mut count = class.iter().copied().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next_class: Vec<usize> = (0..self.state_count())
                .map(|q| {
                    let sig = (class[q], (0..g).map(|gi| class[self.edge_by_index(q, gi).target]).collect());
                    let next = ids.len();
                    *ids.entry(sig).or_insert(next)
                })
                .collect();
            let next_count = ids.len();
            class = next_class;
            if next_count == count {
                return class;
            }
            count = next_count;
        }
    }

    /// The quotient by output equivalence. Each class keeps the name of its
    /// first member.
    pub fn minimize(&self) -> Self {
        let class = self.equivalence_classes();
        let count = class.iter().copied().max().map_or(0, |m| m + 1);
        let mut rep = vec![usize::MAX; count];
        for (q, &c) in class.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = q;
            }
        }
        let g = self.domain.generator_count();
        let mut edges = Vec::with_capacity(count * g);
        for &q in &rep {
            for gi in 0..g {
                let e = self.edge_by_index(q, gi);
                edges.push(Edge { target: class[e.target], output: e.output.clone() });
            }
        }
        let names = rep.iter().map(|&q| self.names[q].clone()).collect();
        Self::from_parts(self.domain, self.range, names, edges, self.initial.map(|i| class[i]))
    }

    /// `remove_incomplete_response` followed by `minimize`.
    pub fn reduce(&self) -> Result<Self> {
        Ok(self.remove_incomplete_response()?.minimize())
    }
}

impl fmt::Display for FiniteTransducer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::write_transducer(self))
    }
}

/// A synchronizing transducer that is its own core, has complete response and
/// no two equivalent states. Represents an element of the monoid of cores.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoreTransducer {
    inner: FiniteTransducer,
    sync_length: usize,
}

impl CoreTransducer {
    pub(crate) fn new_unchecked(inner: FiniteTransducer, sync_length: usize) -> Self {
        Self { inner, sync_length }
    }

    pub fn inner(&self) -> &FiniteTransducer {
        &self.inner
    }

    pub fn into_inner(self) -> FiniteTransducer {
        self.inner
    }

    pub fn sync_length(&self) -> usize {
        self.sync_length
    }

    pub fn params(&self) -> Params {
        self.inner.domain()
    }

    pub fn state_count(&self) -> usize {
        self.inner.state_count()
    }

    /// One state copying its input. A diagonal presentation (one coordinate
    /// over grid letters) counts when every grid letter is written back out.
    pub fn is_identity(&self) -> bool {
        let t = &self.inner;
        let (dom, ran) = (t.domain(), t.range());
        if t.state_count() != 1 {
            return false;
        }
        if dom == ran {
            return dom.generators().all(|g| t.edge(0, g).output == g.word(dom.d));
        }
        dom.d == 1
            && dom.n == ran.grid_count()
            && dom.generators().all(|g| t.edge(0, g).output == ran.grid_word(g.letter as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn w(s: &str) -> MultiWord {
        s.parse().unwrap()
    }

    #[test]
    fn swap_transducer_is_valid() {
        let t = fixtures::swap_zero_double_zero();
        assert_eq!(t.state_count(), 4);
    }

    #[test]
    fn product_figure_is_coherent() {
        let t = fixtures::product_figure();
        assert_eq!(t.state_count(), 4);
        assert_eq!(t.domain().d, 2);
    }

    #[test]
    fn coherent_swap_is_accepted() {
        let p = Params::new(2, 2).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "-|0").unwrap();
        raw.set_named("q", 0, 1, "q", "-|1").unwrap();
        raw.set_named("q", 1, 0, "q", "0|-").unwrap();
        raw.set_named("q", 1, 1, "q", "1|-").unwrap();
        assert!(raw.validate().is_ok());
    }

    #[test]
    fn incoherent_example_is_rejected() {
        match fixtures::incoherent_example().validate() {
            Err(Error::Incoherent(wit)) => {
                assert_eq!(wit.state, "q");
                assert_eq!(wit.first, (0, 0));
                assert_eq!(wit.second, (1, 0));
                assert_eq!(wit.forward, ("r".to_string(), w("0|0")));
                assert_eq!(wit.backward, ("r".to_string(), w("0|00")));
            }
            other => panic!("expected incoherence, got {other:?}"),
        }
    }

    #[test]
    fn partial_and_bad_letters() {
        let p = Params::new(2, 1).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["a"]);
        raw.set_named("a", 0, 0, "a", "0").unwrap();
        assert!(matches!(raw.clone().validate(), Err(Error::PartialDelta { letter: 1, .. })));
        raw.set_named("a", 0, 1, "a", "2").unwrap();
        assert!(matches!(raw.validate(), Err(Error::BadLetter { letter: 2, .. })));
    }

    #[test]
    fn read_examples() {
        let t = fixtures::swap_zero_double_zero();
        assert_eq!(t.read_named("A", &w("001")).unwrap(), ("A".into(), w("01")));
        assert_eq!(t.read_named("A", &w("01")).unwrap(), ("A".into(), w("001")));
        assert_eq!(t.read_named("C", &w("-")).unwrap(), ("C".into(), w("-")));
        assert!(matches!(t.read_named("Z", &w("0")), Err(Error::UnknownState(_))));
    }

    #[test]
    fn degeneracy_examples() {
        let p = Params::new(2, 1).unwrap();
        assert!(!FiniteTransducer::identity(p).is_degenerate());
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "-").unwrap();
        raw.set_named("q", 0, 1, "q", "-").unwrap();
        let silent = raw.validate().unwrap();
        assert_eq!(silent.degeneracy_witness(), Some((0, vec![0])));
        assert!(!fixtures::diagonal_baker().is_degenerate());
        assert!(!fixtures::swap_zero_double_zero().is_degenerate());
    }

    #[test]
    fn product_with_silent_coordinate_is_degenerate() {
        // Writes only in coordinate 0, whatever it reads.
        let p = Params::new(2, 2).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        for a in 0..2 {
            raw.set(0, Gen { coord: 0, letter: a }, 0, MultiWord::letter(2, 0, a)).unwrap();
            raw.set(0, Gen { coord: 1, letter: a }, 0, MultiWord::letter(2, 0, a)).unwrap();
        }
        let _ = raw.clone().validate();
        let t = raw.validate();
        // Not coherent in general (0@0 then 1@1 writes 01, reverse writes 10).
        assert!(t.is_err());
    }

    #[test]
    fn complete_response_examples() {
        let swap = fixtures::swap_zero_double_zero();
        assert_eq!(swap.remove_incomplete_response().unwrap(), swap);
        let id = FiniteTransducer::identity(Params::new(3, 2).unwrap());
        assert_eq!(id.remove_incomplete_response().unwrap(), id);

        let p = Params::new(2, 1).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "10").unwrap();
        raw.set_named("q", 0, 1, "q", "11").unwrap();
        let t = raw.validate().unwrap();
        assert_eq!(t.response_offsets(DEFAULT_ROUNDS).unwrap(), vec![w("1")]);
        let fixed = t.remove_incomplete_response().unwrap();
        assert_eq!(fixed.edge(0, Gen { coord: 0, letter: 0 }).output, w("01"));
        assert_eq!(fixed.edge(0, Gen { coord: 0, letter: 1 }).output, w("11"));
    }

    #[test]
    fn incomplete_response_in_second_coordinate() {
        // Coordinate 1 always writes a 1 before each letter; reading only
        // coordinate 0 never reveals that.
        let p = Params::new(2, 2).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        for a in 0..2u8 {
            raw.set(0, Gen { coord: 0, letter: a }, 0, MultiWord::letter(2, 0, a)).unwrap();
            raw.set(0, Gen { coord: 1, letter: a }, 0, MultiWord::from_coords(vec![vec![], vec![1, a]]))
                .unwrap();
        }
        let t = raw.validate().unwrap();
        assert_eq!(t.response_offsets(DEFAULT_ROUNDS).unwrap(), vec![w("-|1")]);
        let fixed = t.remove_incomplete_response().unwrap();
        assert!(fixed.has_complete_response().unwrap());
        assert_eq!(fixed.edge(0, Gen { coord: 1, letter: 0 }).output, w("-|01"));
    }

    #[test]
    fn degenerate_rejected_by_response_offsets() {
        let p = Params::new(2, 1).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "-").unwrap();
        raw.set_named("q", 0, 1, "q", "-").unwrap();
        let t = raw.validate().unwrap();
        assert!(matches!(t.remove_incomplete_response(), Err(Error::Degenerate { coord: 0, .. })));
    }

    #[test]
    fn minimize_examples() {
        let p = Params::new(2, 1).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["x", "y"]);
        for a in 0..2 {
            raw.set_named("x", 0, a, "y", &a.to_string()).unwrap();
            raw.set_named("y", 0, a, "x", &a.to_string()).unwrap();
        }
        let two = raw.validate().unwrap();
        let m = two.minimize();
        assert_eq!(m.state_count(), 1);
        let swap = fixtures::swap_zero_double_zero();
        assert_eq!(swap.minimize(), swap);
        let prod = fixtures::product_figure();
        assert_eq!(prod.minimize(), prod);
        // A and D are told apart by reading 01.
        assert_ne!(swap.read_named("A", &w("01")).unwrap().1, swap.read_named("D", &w("01")).unwrap().1);
    }
}
