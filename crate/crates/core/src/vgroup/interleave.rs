//! Conjugation by the interleaving homeomorphism `𝔠_n^d ≅ 𝔠_{n^d}` and a
//! bounded probe for residual growth of the conjugated map.
//!
//! A letter of the interleaved alphabet is a `d`-tuple, coded with
//! coordinate 0 most significant.

use std::collections::HashSet;

use super::lazy::{LazyTransducer, ResidualSource};
use super::PrefixExchange;
use crate::error::{Error, Result};
use crate::transducer::{FiniteTransducer, DEFAULT_ROUNDS};
use crate::words::{Letter, MultiWord, Params};

/// A map on `𝔠_n^d` that can report the output forced by a finite prefix.
pub trait PrefixMap {
    fn domain(&self) -> Params;
    fn range(&self) -> Params;
    fn determined(&mut self, x: &MultiWord) -> Result<MultiWord>;
}

impl PrefixMap for PrefixExchange {
    fn domain(&self) -> Params {
        self.params()
    }

    fn range(&self) -> Params {
        self.params()
    }

    fn determined(&mut self, x: &MultiWord) -> Result<MultiWord> {
        self.eval(x)
    }
}

impl<S: ResidualSource> PrefixMap for LazyTransducer<S> {
    fn domain(&self) -> Params {
        LazyTransducer::domain(self)
    }

    fn range(&self) -> Params {
        LazyTransducer::range(self)
    }

    fn determined(&mut self, x: &MultiWord) -> Result<MultiWord> {
        LazyTransducer::determined(self, x)
    }
}

/// The state function of one state of a finite transducer, with its
/// response offsets so that forced output is reported exactly.
#[derive(Debug, Clone)]
pub struct StateMap {
    t: FiniteTransducer,
    state: usize,
    offsets: Vec<MultiWord>,
}

impl StateMap {
    pub fn new(t: FiniteTransducer, state: usize) -> Result<Self> {
        if state >= t.state_count() {
            return Err(Error::UnknownState(format!("#{state}")));
        }
        let offsets = t.response_offsets(DEFAULT_ROUNDS)?;
        Ok(Self { t, state, offsets })
    }
}

impl PrefixMap for StateMap {
    fn domain(&self) -> Params {
        self.t.domain()
    }

    fn range(&self) -> Params {
        self.t.range()
    }

    fn determined(&mut self, x: &MultiWord) -> Result<MultiWord> {
        let (end, mut out) = self.t.read(self.state, x)?;
        out.append(&self.offsets[end]);
        Ok(out)
    }
}

/// The first `min_len` letter tuples of `x` as interleaved letters.
pub fn interleave(x: &MultiWord, p: Params) -> Vec<Letter> {
    (0..x.min_len())
        .map(|k| {
            let tuple: Vec<Letter> = x.coords().iter().map(|c| c[k]).collect();
            p.grid_code(&tuple) as Letter
        })
        .collect()
}

pub fn deinterleave(w: &[Letter], p: Params) -> Result<MultiWord> {
    let mut coords = vec![Vec::with_capacity(w.len()); p.d];
    for &c in w {
        if c as usize >= p.grid_count() {
            return Err(Error::BadLetter { letter: c, n: p.grid_count() });
        }
        for (i, a) in p.grid_letter(c as usize).into_iter().enumerate() {
            coords[i].push(a);
        }
    }
    Ok(MultiWord::from_coords(coords))
}

/// The conjugated map on an interleaved prefix: the longest interleaved
/// output prefix it determines.
pub fn interleave_eval<M: PrefixMap + ?Sized>(map: &mut M, w: &[Letter]) -> Result<Vec<Letter>> {
    let x = deinterleave(w, map.domain())?;
    let y = map.determined(&x)?;
    Ok(interleave(&y, map.range()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    /// Distinct residual behaviours seen; capped at `max_residuals + 1`.
    pub residuals: usize,
    /// Prefixes whose signatures were computed.
    pub explored: usize,
    pub prefix_len: usize,
    pub extension_len: usize,
}

/// Counts distinct residuals of the conjugated map among interleaved prefixes.
///
/// A residual at prefix `w` is summarized by the extra output
/// `F(w·e) − F(w)` for every extension `e` of length at most
/// `max_len / 4`; prefixes are explored breadth first up to the remaining
/// length, expanding only the first prefix of each new signature. Prefixes
/// with different signatures need different states in any transducer for
/// the conjugated map, so the count is a lower bound on its state count.
pub fn rationality_probe<M: PrefixMap + ?Sized>(map: &mut M, max_len: usize, max_residuals: usize) -> Result<ProbeReport> {
    if map.domain() != map.range() {
        return Err(Error::ParamMismatch("probe needs equal domain and range".into()));
    }
    let alphabet = map.domain().grid_count();
    let extension_len = max_len / 4;
    let prefix_len = max_len - extension_len;
    let mut extensions: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..extension_len {
        layer = layer
            .iter()
            .flat_map(|e| (0..alphabet).map(move |a| {
                let mut e2 = e.clone();
                e2.push(a as Letter);
                e2
            }))
            .collect();
        extensions.extend(layer.iter().cloned());
    }

    let mut seen: HashSet<Vec<Vec<Letter>>> = HashSet::new();
    let mut explored = 0;
    let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
    for depth in 0..=prefix_len {
        let mut next = Vec::new();
        for w in &frontier {
            explored += 1;
            let base = interleave_eval(map, w)?;
            let mut sig = Vec::with_capacity(extensions.len());
            for e in &extensions {
                let mut we = w.clone();
                we.extend_from_slice(e);
                let out = interleave_eval(map, &we)?;
                debug_assert!(out.starts_with(&base));
                sig.push(out[base.len()..].to_vec());
            }
            if seen.insert(sig) {
                if seen.len() > max_residuals {
                    return Ok(ProbeReport { residuals: seen.len(), explored, prefix_len, extension_len });
                }
                if depth < prefix_len {
                    for a in 0..alphabet {
                        let mut w2 = w.clone();
                        w2.push(a as Letter);
                        next.push(w2);
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(ProbeReport { residuals: seen.len(), explored, prefix_len, extension_len })
}
