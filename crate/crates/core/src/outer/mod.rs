//! Cores as outer automorphisms: coordinate permutations, product
//! decomposition, signatures, kernel realization, inversion and wreath
//! coordinates.

mod realize;
mod sig;

use std::fmt;

pub use realize::{invert_core, o_membership, realize_kernel_element, MembershipReport, Realization};
pub use sig::{kernel_test, sig, sig_d, SigValue};

use crate::algebra::{compose, core, product};
use crate::canonical::canonical_form;
use crate::error::{Error, Result};
use crate::transducer::{CoreTransducer, FiniteTransducer, RawTransducer};
use crate::words::{Gen, MultiWord, Params};
use crate::Budget;

/// A permutation of coordinates, `i ↦ images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordPermutation {
    images: Vec<usize>,
}

impl CoordPermutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &j in &images {
            if j >= images.len() || seen[j] {
                return Err(Error::NonPermutation(images));
            }
            seen[j] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(d: usize) -> Self {
        Self { images: (0..d).collect() }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self { images: self.images.iter().map(|&j| other.images[j]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Self { images: inv }
    }
}

impl fmt::Display for CoordPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The one-state core writing `a@i` as `a@σ(i)`.
pub fn permutation_core(n: usize, sigma: &CoordPermutation) -> Result<CoreTransducer> {
    let p = Params::new(n, sigma.images.len())?;
    let mut raw = RawTransducer::with_state_names(p, &["q"]);
    for g in p.generators() {
        raw.set(0, g, 0, MultiWord::letter(p.d, sigma.apply(g.coord), g.letter))?;
    }
    let t = raw.validate()?;
    Ok(CoreTransducer::new_unchecked(canonical_form(&t)?, 0))
}

/// For each input coordinate the output coordinate it writes into.
pub fn psi(t: &CoreTransducer) -> Result<CoordPermutation> {
    let inner = t.inner();
    let p = inner.params()?;
    let mut images = Vec::with_capacity(p.d);
    for i in 0..p.d {
        let mut target: Option<usize> = None;
        for q in 0..inner.state_count() {
            for a in 0..p.n as u8 {
                let out = &inner.edge(q, Gen { coord: i, letter: a }).output;
                for j in 0..p.d {
                    if out.coord(j).is_empty() {
                        continue;
                    }
                    match target {
                        None => target = Some(j),
                        Some(k) if k == j => {}
                        Some(k) => return Err(Error::PsiIllDefined { coord: i, first: k.min(j), second: k.max(j) }),
                    }
                }
            }
        }
        images.push(target.ok_or(Error::NeverWrites(i))?);
    }
    CoordPermutation::new(images)
}

/// Product of cores: the core of the composite, canonically named.
pub fn multiply_cores(s: &CoreTransducer, t: &CoreTransducer, budget: Budget) -> Result<CoreTransducer> {
    let c = compose(s.inner(), t.inner())?;
    core(&c, budget.kmax)
}

/// Splits a core with trivial `psi` into one-dimensional factors, checked by
/// recombining.
pub fn decompose(t: &CoreTransducer, budget: Budget) -> Result<Vec<CoreTransducer>> {
    let sigma = psi(t)?;
    if !sigma.is_identity() {
        return Err(Error::NotDecomposable(format!("coordinates are permuted by {sigma}")));
    }
    let inner = t.inner();
    let p = inner.params()?;
    let q = (0..inner.state_count()).min_by_key(|&s| inner.name(s)).expect("cores have states");
    let line = Params::new(p.n, 1)?;
    let mut factors = Vec::with_capacity(p.d);
    for i in 0..p.d {
        // States reachable from q by words in coordinate i only.
        let mut class = vec![q];
        let mut seen = vec![false; inner.state_count()];
        seen[q] = true;
        let mut k = 0;
        while k < class.len() {
            let s = class[k];
            k += 1;
            for a in 0..p.n as u8 {
                let e = inner.edge(s, Gen { coord: i, letter: a });
                if !seen[e.target] {
                    seen[e.target] = true;
                    class.push(e.target);
                }
            }
        }
        let names: Vec<String> = class.iter().map(|&s| inner.name(s).to_string()).collect();
        let mut raw = RawTransducer::square(line, names);
        for (pos, &s) in class.iter().enumerate() {
            for a in 0..p.n as u8 {
                let e = inner.edge(s, Gen { coord: i, letter: a });
                let target = class.iter().position(|&x| x == e.target).expect("class is closed");
                let out = MultiWord::from_coords(vec![e.output.coord(i).to_vec()]);
                raw.set(pos, Gen { coord: 0, letter: a }, target, out)?;
            }
        }
        let factor = raw.validate()?;
        factors.push(core(&factor, budget.kmax)?);
    }
    let inners: Vec<FiniteTransducer> = factors.iter().map(|f| f.inner().clone()).collect();
    let back = core(&product(&inners)?, budget.kmax)?;
    if back.inner() != &canonical_form(inner)? {
        return Err(Error::NotDecomposable("product of the factors differs from the input".into()));
    }
    Ok(factors)
}

/// `(factors, σ)` standing for `product(factors)` followed by the
/// permutation core of `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathCoordinates {
    pub factors: Vec<CoreTransducer>,
    pub perm: CoordPermutation,
}

impl WreathCoordinates {
    /// The wreath-product law:
    /// `(s, σ)(t, τ) = ((s_i · t_{σ(i)})_i, σ then τ)`.
    pub fn compose(&self, other: &Self, budget: Budget) -> Result<Self> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for (i, s) in self.factors.iter().enumerate() {
            factors.push(multiply_cores(s, &other.factors[self.perm.apply(i)], budget)?);
        }
        Ok(Self { factors, perm: self.perm.then(&other.perm) })
    }

    /// Rebuilds the `d`-dimensional core.
    pub fn to_core(&self, budget: Budget) -> Result<CoreTransducer> {
        let inners: Vec<FiniteTransducer> = self.factors.iter().map(|f| f.inner().clone()).collect();
        let prod = core(&product(&inners)?, budget.kmax)?;
        let n = prod.params().n;
        multiply_cores(&prod, &permutation_core(n, &self.perm)?, budget)
    }
}

pub fn wreath_coordinates(t: &CoreTransducer, budget: Budget) -> Result<WreathCoordinates> {
    let sigma = psi(t)?;
    let n = t.params().n;
    let untwisted = multiply_cores(t, &permutation_core(n, &sigma.inverse())?, budget)?;
    let factors = decompose(&untwisted, budget)?;
    Ok(WreathCoordinates { factors, perm: sigma })
}
