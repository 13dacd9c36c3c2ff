use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::transducer::FiniteTransducer;
use crate::words::{cells_of, MultiWord, Params, MAX_TILING_CELLS};

/// A clopen subset of `𝔠_n^d`, stored as the cells of the coarsest uniform
/// grid it is a union of.
///
/// For `d > 1` the coarsest grid is unique: the meet of two grids of shapes
/// `D` and `D'` is the grid of shape `min(D, D')`, so dropping any
/// coordinate's last level whose cells all come in full sibling groups
/// reaches it regardless of order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeSet {
    params: Params,
    depth: Vec<usize>,
    cells: Vec<MultiWord>,
}

impl ConeSet {
    pub fn empty(p: Params) -> Self {
        Self { params: p, depth: vec![0; p.d], cells: Vec::new() }
    }

    pub fn full(p: Params) -> Self {
        Self { params: p, depth: vec![0; p.d], cells: vec![MultiWord::empty(p.d)] }
    }

    pub fn from_cones(p: Params, bases: &[MultiWord]) -> Result<Self> {
        let mut acc = Self::empty(p);
        for b in bases {
            b.check(p)?;
            acc = acc.union(&Self::cone(p, b.clone()))?;
        }
        Ok(acc)
    }

    fn cone(p: Params, base: MultiWord) -> Self {
        Self { params: p, depth: base.lengths(), cells: vec![base] }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn depth(&self) -> &[usize] {
        &self.depth
    }

    pub fn cells(&self) -> &[MultiWord] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.cells.len() == 1 && self.cells[0].is_empty()
    }

    fn padded(&self, depth: &[usize]) -> Result<Vec<MultiWord>> {
        let extra: usize = depth.iter().zip(&self.depth).map(|(a, b)| a - b).sum();
        let per = self
            .params
            .n
            .checked_pow(extra as u32)
            .and_then(|x| x.checked_mul(self.cells.len()))
            .filter(|&x| x <= MAX_TILING_CELLS)
            .ok_or_else(|| Error::TooLarge(format!("cone set refined to depth {depth:?}")))?;
        let mut out = Vec::with_capacity(per);
        for c in &self.cells {
            out.extend(cells_of(c, depth, self.params));
        }
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if other.is_empty() {
            return Ok(self.clone());
        }
        if self.is_empty() {
            return Ok(other.clone());
        }
        let depth: Vec<usize> = self.depth.iter().zip(&other.depth).map(|(&a, &b)| a.max(b)).collect();
        let mut cells = self.padded(&depth)?;
        cells.extend(other.padded(&depth)?);
        Ok(Self::normalized(self.params, depth, cells))
    }

    /// `{w·x : x ∈ self}`.
    pub fn prefixed(&self, w: &MultiWord) -> Self {
        let depth = self.depth.iter().zip(w.coords()).map(|(&a, c)| a + c.len()).collect();
        let cells = self.cells.iter().map(|c| w.concat(c).expect("same dimension")).collect();
        Self::normalized(self.params, depth, cells)
    }

    fn normalized(params: Params, mut depth: Vec<usize>, mut cells: Vec<MultiWord>) -> Self {
        cells.sort();
        cells.dedup();
        if cells.is_empty() {
            return Self::empty(params);
        }
        loop {
            let mut changed = false;
            for i in 0..params.d {
                if depth[i] == 0 {
                    continue;
                }
                let mut groups: BTreeMap<MultiWord, usize> = BTreeMap::new();
                for c in &cells {
                    let mut parent = c.clone();
                    parent.pop(i);
                    *groups.entry(parent).or_default() += 1;
                }
                if groups.values().all(|&k| k == params.n) {
                    cells = groups.into_keys().collect();
                    depth[i] -= 1;
                    changed = true;
                }
            }
            if !changed {
                return Self { params, depth, cells };
            }
        }
    }

    /// A decomposition into disjoint cones, by merging complete sibling
    /// groups greedily in coordinate order until none remain. Any two
    /// decompositions differ in size by a multiple of `n − 1`.
    pub fn cones(&self) -> Vec<MultiWord> {
        let mut set: std::collections::BTreeSet<MultiWord> = self.cells.iter().cloned().collect();
        loop {
            let mut changed = false;
            for i in 0..self.params.d {
                let mut groups: BTreeMap<MultiWord, Vec<MultiWord>> = BTreeMap::new();
                for c in &set {
                    if c.coord(i).is_empty() {
                        continue;
                    }
                    let mut parent = c.clone();
                    parent.pop(i);
                    groups.entry(parent).or_default().push(c.clone());
                }
                for (parent, kids) in groups {
                    if kids.len() == self.params.n {
                        for k in kids {
                            set.remove(&k);
                        }
                        set.insert(parent);
                        changed = true;
                    }
                }
            }
            if !changed {
                return set.into_iter().collect();
            }
        }
    }

    pub fn cone_count(&self) -> usize {
        self.cones().len()
    }

    pub fn contains_cone(&self, base: &MultiWord) -> Result<bool> {
        let depth: Vec<usize> = self.depth.iter().zip(base.coords()).map(|(&a, c)| a.max(c.len())).collect();
        let mut mine = self.padded(&depth)?;
        mine.sort_unstable();
        let theirs = Self::cone(self.params, base.clone()).padded(&depth)?;
        Ok(theirs.iter().all(|c| mine.binary_search(c).is_ok()))
    }
}

/// Images of every state function, by iterating
/// `I(q) = ⋃_G λ(q,G)·I(δ(q,G))` over grid letters `G` from the whole
/// space until the vector of sets repeats.
pub fn state_images(t: &FiniteTransducer, depth_budget: usize) -> Result<Vec<ConeSet>> {
    let p = t.range();
    let table = t.grid_table();
    let mut cur = vec![ConeSet::full(p); t.state_count()];
    for _ in 0..depth_budget {
        let mut next = Vec::with_capacity(cur.len());
        for row in &table {
            let mut acc = ConeSet::empty(p);
            for (target, out) in row {
                acc = acc.union(&cur[*target].prefixed(out))?;
            }
            next.push(acc);
        }
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::NoStabilization { depth: depth_budget })
}

pub fn state_image(t: &FiniteTransducer, q: usize, depth_budget: usize) -> Result<ConeSet> {
    if q >= t.state_count() {
        return Err(Error::UnknownState(format!("#{q}")));
    }
    Ok(state_images(t, depth_budget)?.swap_remove(q))
}
