//! Composite and product constructions, synchronization, cores, state images
//! and injectivity.

mod image;
mod injective;

use std::collections::{HashMap, HashSet};

pub use image::{state_image, state_images, ConeSet};
pub use injective::{is_state_injective, Injectivity};

use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::transducer::{CoreTransducer, Edge, FiniteTransducer};
use crate::words::{MultiWord, Params};

/// The composite: read through `a`, then feed the output through `b`.
///
/// States are pairs. When both factors have an initial state only pairs
/// reachable from the initial pair are kept, otherwise the full product.
pub fn compose(a: &FiniteTransducer, b: &FiniteTransducer) -> Result<FiniteTransducer> {
    if a.range() != b.domain() {
        return Err(Error::ParamMismatch(format!(
            "cannot feed range {:?} into domain {:?}",
            a.range(),
            b.domain()
        )));
    }
    let nb = b.state_count();
    let g = a.domain().generator_count();
    let (pairs, initial) = match (a.initial(), b.initial()) {
        (Some(ia), Some(ib)) => {
            let start = ia * nb + ib;
            let mut seen = HashSet::from([start]);
            let mut order = vec![start];
            let mut i = 0;
            while i < order.len() {
                let (p, q) = (order[i] / nb, order[i] % nb);
                i += 1;
                for gi in 0..g {
                    let e = a.edge_by_index(p, gi);
                    let (q2, _) = b.read_unchecked(q, &e.output);
                    let code = e.target * nb + q2;
                    if seen.insert(code) {
                        order.push(code);
                    }
                }
            }
            (order, Some(0))
        }
        _ => ((0..a.state_count() * nb).collect(), None),
    };
    let index: HashMap<usize, usize> = pairs.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::with_capacity(pairs.len() * g);
    for &code in &pairs {
        let (p, q) = (code / nb, code % nb);
        for gi in 0..g {
            let e = a.edge_by_index(p, gi);
            let (q2, out) = b.read_unchecked(q, &e.output);
            edges.push(Edge { target: index[&(e.target * nb + q2)], output: out });
        }
    }
    let names = pairs.iter().map(|&c| format!("({},{})", a.name(c / nb), b.name(c % nb))).collect();
    let t = FiniteTransducer::from_parts(a.domain(), b.range(), names, edges, initial);
    t.revalidate()?;
    Ok(t)
}

/// The categorical product: coordinate block `i` of the result is read and
/// written by factor `i` alone.
pub fn product(ts: &[FiniteTransducer]) -> Result<FiniteTransducer> {
    let first = ts.first().ok_or(Error::EmptyInput)?;
    let n = first.domain().n;
    let mut dims = Vec::with_capacity(ts.len());
    for t in ts {
        let p = t.params()?;
        if p.n != n {
            return Err(Error::ParamMismatch(format!("alphabet sizes {n} and {}", p.n)));
        }
        dims.push(p.d);
    }
    let d: usize = dims.iter().sum();
    let params = Params::new(n, d)?;
    let counts: Vec<usize> = ts.iter().map(FiniteTransducer::state_count).collect();
    let total = counts.iter().try_fold(1usize, |acc, &c| acc.checked_mul(c)).unwrap_or(usize::MAX);
    if total > 1_000_000 {
        return Err(Error::TooLarge(format!("product has {total} states")));
    }
    let decode = |mut code: usize| -> Vec<usize> {
        let mut out = vec![0; counts.len()];
        for i in (0..counts.len()).rev() {
            out[i] = code % counts[i];
            code /= counts[i];
        }
        out
    };
    let encode = |qs: &[usize]| qs.iter().zip(&counts).fold(0, |acc, (&q, &c)| acc * c + q);
    let mut offsets = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &k in &dims {
        offsets.push(acc);
        acc += k;
    }
    let mut edges = Vec::with_capacity(total * params.generator_count());
    let mut names = Vec::with_capacity(total);
    for code in 0..total {
        let qs = decode(code);
        let parts: Vec<&str> = qs.iter().zip(ts).map(|(&q, t)| t.name(q)).collect();
        names.push(format!("({})", parts.join(",")));
        for g in params.generators() {
            let block = offsets.iter().rposition(|&o| o <= g.coord).expect("offset 0 exists");
            let local = crate::words::Gen { coord: g.coord - offsets[block], letter: g.letter };
            let e = ts[block].edge(qs[block], local);
            let mut qs2 = qs.clone();
            qs2[block] = e.target;
            let mut blocks: Vec<MultiWord> = dims.iter().map(|&k| MultiWord::empty(k)).collect();
            blocks[block] = e.output.clone();
            edges.push(Edge { target: encode(&qs2), output: MultiWord::join_blocks(&blocks) });
        }
    }
    let initial = ts.iter().map(FiniteTransducer::initial).collect::<Option<Vec<_>>>().map(|qs| encode(&qs));
    Ok(FiniteTransducer::from_parts(params, params, names, edges, initial))
}

type Subset = Vec<usize>;

/// Image sets of the whole state set under all grid words of depth `0..`,
/// level by level, memoized. Level `k` holds every distinct set
/// `Q·w` with `w ∈ (X_n^k)^d`.
pub(crate) struct SyncLevels<'a> {
    t: &'a FiniteTransducer,
    table: Vec<Vec<(usize, MultiWord)>>,
    level: Vec<Subset>,
    k: usize,
}

const MAX_LEVEL_SETS: usize = 500_000;

impl<'a> SyncLevels<'a> {
    pub(crate) fn new(t: &'a FiniteTransducer) -> Self {
        Self { t, table: t.grid_table(), level: vec![(0..t.state_count()).collect()], k: 0 }
    }

    pub(crate) fn is_synchronized(&self) -> bool {
        self.level.iter().all(|s| s.len() == 1)
    }

    pub(crate) fn advance(&mut self) -> Result<()> {
        let mut next: HashSet<Subset> = HashSet::new();
        for s in &self.level {
            for c in 0..self.t.domain().grid_count() {
                let mut img: Subset = s.iter().map(|&q| self.table[q][c].0).collect();
                img.sort_unstable();
                img.dedup();
                next.insert(img);
                if next.len() > MAX_LEVEL_SETS {
                    return Err(Error::BudgetExceeded(format!(
                        "more than {MAX_LEVEL_SETS} image sets at level {}",
                        self.k + 1
                    )));
                }
            }
        }
        let mut level: Vec<Subset> = next.into_iter().collect();
        level.sort();
        self.level = level;
        self.k += 1;
        Ok(())
    }

    /// States `Q·w` reached at the current level, assuming it synchronizes.
    pub(crate) fn singletons(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.level.iter().map(|s| s[0]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The least `k ≤ kmax` at which `t` synchronizes.
pub fn sync_length(t: &FiniteTransducer, kmax: usize) -> Result<usize> {
    let mut levels = SyncLevels::new(t);
    loop {
        if levels.is_synchronized() {
            return Ok(levels.k);
        }
        if levels.k >= kmax {
            return Err(Error::NotSynchronizing { bound: kmax });
        }
        levels.advance()?;
    }
}

/// The states `𝔰_T(w)` for `w` of depth equal to the synchronizing length.
pub fn core_states(t: &FiniteTransducer, kmax: usize) -> Result<(usize, Vec<usize>)> {
    let mut levels = SyncLevels::new(t);
    loop {
        if levels.is_synchronized() {
            return Ok((levels.k, levels.singletons()));
        }
        if levels.k >= kmax {
            return Err(Error::NotSynchronizing { bound: kmax });
        }
        levels.advance()?;
    }
}

/// The core, with incomplete response removed, equivalent states merged and
/// states canonically named.
pub fn core(t: &FiniteTransducer, kmax: usize) -> Result<CoreTransducer> {
    let (_, states) = core_states(t, kmax)?;
    let restricted = t.restrict(&states)?.with_initial(None);
    let reduced = restricted.reduce()?;
    let k = sync_length(&reduced, kmax)?;
    Ok(CoreTransducer::new_unchecked(canonical_form(&reduced)?, k))
}

impl CoreTransducer {
    /// Checks that `t` is synchronizing, its own core, has complete response
    /// and is minimal. Any initial state is dropped.
    pub fn validate(t: FiniteTransducer, kmax: usize) -> Result<Self> {
        let t = t.with_initial(None);
        let (k, states) = core_states(&t, kmax).map_err(|e| match e {
            Error::NotSynchronizing { bound } => Error::NotACore(format!("not synchronizing within {bound}")),
            other => other,
        })?;
        if states.len() != t.state_count() {
            let missing: Vec<&str> =
                (0..t.state_count()).filter(|q| !states.contains(q)).map(|q| t.name(q)).collect();
            return Err(Error::NotACore(format!("states outside the core: {}", missing.join(" "))));
        }
        let offsets = t.response_offsets(crate::transducer::DEFAULT_ROUNDS)?;
        if let Some(q) = offsets.iter().position(|l| !l.is_empty()) {
            return Err(Error::NotACore(format!(
                "state {} has incomplete response {}",
                t.name(q),
                offsets[q]
            )));
        }
        let m = t.minimize();
        if m.state_count() != t.state_count() {
            return Err(Error::NotACore(format!(
                "not minimal: {} states reduce to {}",
                t.state_count(),
                m.state_count()
            )));
        }
        Ok(Self::new_unchecked(t, k))
    }

    pub fn identity(p: Params) -> Self {
        Self::new_unchecked(canonical_form(&FiniteTransducer::identity(p)).expect("one state"), 0)
    }
}
