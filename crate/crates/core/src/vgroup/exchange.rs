use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::words::{MultiWord, Params, PrefixCode};

/// An element of `dV_n`: a bijection between two complete prefix codes,
/// acting by `(w·x) ↦ φ(w)·x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrefixExchange {
    params: Params,
    /// `(w, φ(w))`, sorted by `w`.
    pairs: Vec<(MultiWord, MultiWord)>,
}

impl PrefixExchange {
    pub fn new(p: Params, mut pairs: Vec<(MultiWord, MultiWord)>) -> Result<Self> {
        PrefixCode::validate(pairs.iter().map(|x| x.0.clone()).collect(), p)?;
        PrefixCode::validate(pairs.iter().map(|x| x.1.clone()).collect(), p)?;
        pairs.sort();
        Ok(Self { params: p, pairs })
    }

    pub fn identity(p: Params) -> Self {
        Self { params: p, pairs: vec![(MultiWord::empty(p.d), MultiWord::empty(p.d))] }
    }

    /// Builds from a bijection between codes, pairing members in sorted order.
    pub fn from_codes(domain: &PrefixCode, range: &PrefixCode) -> Result<Self> {
        if domain.len() != range.len() {
            return Err(Error::CodeSizeMismatch(domain.len(), range.len()));
        }
        if domain.params() != range.params() {
            return Err(Error::ParamMismatch("codes over different spaces".into()));
        }
        let pairs = domain.members().iter().cloned().zip(range.members().iter().cloned()).collect();
        Ok(Self { params: domain.params(), pairs })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn pairs(&self) -> &[(MultiWord, MultiWord)] {
        &self.pairs
    }

    pub fn domain_code(&self) -> PrefixCode {
        PrefixCode::validate(self.pairs.iter().map(|x| x.0.clone()).collect(), self.params).expect("checked on construction")
    }

    pub fn range_code(&self) -> PrefixCode {
        PrefixCode::validate(self.pairs.iter().map(|x| x.1.clone()).collect(), self.params).expect("checked on construction")
    }

    /// The longest prefix of the image determined by the prefix `x`: the
    /// common prefix of the images of every code cone meeting the cone
    /// over `x`.
    pub fn eval(&self, x: &MultiWord) -> Result<MultiWord> {
        x.check(self.params)?;
        let images = self.pairs.iter().filter(|(w, _)| w.comparable(x)).map(|(w, v)| {
            let j = w.join(x).expect("comparable");
            v.concat(&j.subtract(w).expect("join extends w")).expect("same dimension")
        });
        let images: Vec<MultiWord> = images.collect();
        MultiWord::lcp(&images)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.params != other.params {
            return Err(Error::ParamMismatch(format!("{:?} and {:?}", self.params, other.params)));
        }
        let mut pairs = Vec::new();
        for (w, fw) in &self.pairs {
            for (v, gv) in &other.pairs {
                if let Some(j) = fw.join(v) {
                    let dom = w.concat(&j.subtract(fw)?)?;
                    let ran = gv.concat(&j.subtract(v)?)?;
                    pairs.push((dom, ran));
                }
            }
        }
        Ok(Self::new(self.params, pairs)?.simplified())
    }

    pub fn invert(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        pairs.sort();
        Self { params: self.params, pairs }
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    /// Repeatedly replaces `n` pairs `(u·a, v·a)`, `a` running over one
    /// coordinate's letters, by `(u, v)`.
    pub fn simplified(&self) -> Self {
        let mut pairs = self.pairs.clone();
        loop {
            let mut changed = false;
            for i in 0..self.params.d {
                let mut groups: BTreeMap<(MultiWord, MultiWord), Vec<usize>> = BTreeMap::new();
                for (k, (a, b)) in pairs.iter().enumerate() {
                    let (Some(&x), Some(&y)) = (a.coord(i).last(), b.coord(i).last()) else { continue };
                    if x != y {
                        continue;
                    }
                    let (mut u, mut v) = (a.clone(), b.clone());
                    u.pop(i);
                    v.pop(i);
                    groups.entry((u, v)).or_default().push(k);
                }
                let mut drop = vec![false; pairs.len()];
                let mut added = Vec::new();
                for ((u, v), members) in groups {
                    if members.len() == self.params.n && members.iter().all(|&k| !drop[k]) {
                        for k in members {
                            drop[k] = true;
                        }
                        added.push((u, v));
                    }
                }
                if !added.is_empty() {
                    changed = true;
                    let mut next: Vec<_> =
                        pairs.into_iter().enumerate().filter(|(k, _)| !drop[*k]).map(|(_, p)| p).collect();
                    next.extend(added);
                    next.sort();
                    pairs = next;
                }
            }
            if !changed {
                return Self { params: self.params, pairs };
            }
        }
    }
}
