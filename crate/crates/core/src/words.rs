//! Alphabets, tuples of finite words, cones and complete prefix codes.
//!
//! A [`MultiWord`] is an element of `(X_n^*)^d`: one finite word per
//! coordinate, letters drawn from `0..n`. The literal syntax used across the
//! crate separates coordinates with `|` and writes the empty word as `-`, so
//! `01|-` is the pair `(01, ε)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Letter = u8;

/// Alphabet size `n` and dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    pub n: usize,
    pub d: usize,
}

impl Params {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::BadParams(format!("alphabet size {n} < 2")));
        }
        if n > 10 {
            return Err(Error::BadParams(format!("alphabet size {n} > 10")));
        }
        if d == 0 {
            return Err(Error::BadParams("dimension 0".into()));
        }
        Ok(Self { n, d })
    }

    /// Number of single-coordinate letters, `d·n`.
    pub fn generator_count(&self) -> usize {
        self.n * self.d
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.d).flat_map(move |coord| (0..self.n as u8).map(move |letter| Gen { coord, letter }))
    }

    /// Number of tuples with one letter per coordinate, `n^d`.
    pub fn grid_count(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    /// The tuple of letters encoded by `code`, coordinate 0 most significant.
    pub fn grid_letter(&self, code: usize) -> Vec<Letter> {
        let mut out = vec![0; self.d];
        let mut c = code;
        for i in (0..self.d).rev() {
            out[i] = (c % self.n) as Letter;
            c /= self.n;
        }
        out
    }

    pub fn grid_code(&self, letters: &[Letter]) -> usize {
        letters.iter().fold(0, |acc, &a| acc * self.n + a as usize)
    }

    pub fn grid_word(&self, code: usize) -> MultiWord {
        MultiWord::from_coords(self.grid_letter(code).into_iter().map(|a| vec![a]).collect())
    }

    /// Every `MultiWord` whose coordinates all have length `k`, in lexicographic order.
    pub fn words_of_depth(&self, k: usize) -> Vec<MultiWord> {
        self.words_of_shape(&vec![k; self.d])
    }

    /// Every `MultiWord` with coordinate `i` of length `shape[i]`.
    pub fn words_of_shape(&self, shape: &[usize]) -> Vec<MultiWord> {
        let total: usize = shape.iter().sum();
        let count = self.n.pow(total as u32);
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0u8; total];
        for _ in 0..count {
            let mut coords = Vec::with_capacity(self.d);
            let mut pos = 0;
            for &len in shape {
                coords.push(digits[pos..pos + len].to_vec());
                pos += len;
            }
            out.push(MultiWord { coords });
            for slot in digits.iter_mut().rev() {
                *slot += 1;
                if (*slot as usize) < self.n {
                    break;
                }
                *slot = 0;
            }
        }
        out
    }

    /// Every `MultiWord` with each coordinate of length at most `depth`.
    pub fn words_up_to_depth(&self, depth: usize) -> Vec<MultiWord> {
        let mut shapes = vec![vec![]];
        for _ in 0..self.d {
            shapes = shapes
                .into_iter()
                .flat_map(|s: Vec<usize>| {
                    (0..=depth).map(move |l| {
                        let mut t = s.clone();
                        t.push(l);
                        t
                    })
                })
                .collect();
        }
        shapes.iter().flat_map(|s| self.words_of_shape(s)).collect()
    }
}

/// A single letter placed in one coordinate: the generators of `(X_n^*)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub coord: usize,
    pub letter: Letter,
}

impl Gen {
    pub fn index(&self, n: usize) -> usize {
        self.coord * n + self.letter as usize
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Gen { coord: index / n, letter: (index % n) as Letter }
    }

    pub fn word(&self, d: usize) -> MultiWord {
        MultiWord::letter(d, self.coord, self.letter)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.letter, self.coord)
    }
}

/// An element of `(X_n^*)^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiWord {
    coords: Vec<Vec<Letter>>,
}

impl MultiWord {
    pub fn empty(d: usize) -> Self {
        Self { coords: vec![Vec::new(); d] }
    }

    pub fn from_coords(coords: Vec<Vec<Letter>>) -> Self {
        Self { coords }
    }

    /// The word holding `letter` in `coord` and nothing elsewhere.
    pub fn letter(d: usize, coord: usize, letter: Letter) -> Self {
        let mut w = Self::empty(d);
        w.coords[coord].push(letter);
        w
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> &[Letter] {
        &self.coords[i]
    }

    pub fn coords(&self) -> &[Vec<Letter>] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Vec<Letter>> {
        self.coords
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.coords.iter().map(Vec::len).collect()
    }

    /// Sum of the coordinate lengths.
    pub fn size(&self) -> usize {
        self.coords.iter().map(Vec::len).sum()
    }

    pub fn min_len(&self) -> usize {
        self.coords.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.coords.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(Vec::is_empty)
    }

    pub fn check(&self, p: Params) -> Result<()> {
        if self.dim() != p.d {
            return Err(Error::DimensionMismatch { expected: p.d, found: self.dim() });
        }
        for c in &self.coords {
            if let Some(&bad) = c.iter().find(|&&a| a as usize >= p.n) {
                return Err(Error::BadLetter { letter: bad, n: p.n });
            }
        }
        Ok(())
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// Coordinatewise concatenation `self · other`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = self.clone();
        out.append(other);
        Ok(out)
    }

    /// In-place concatenation; dimensions must agree.
    pub fn append(&mut self, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            a.extend_from_slice(b);
        }
    }

    pub fn push(&mut self, coord: usize, letter: Letter) {
        self.coords[coord].push(letter);
    }

    /// `y − x`: the unique `z` with `x·z = y`.
    pub fn subtract(&self, prefix: &Self) -> Result<Self> {
        self.same_dim(prefix)?;
        if !prefix.is_prefix_of(self) {
            return Err(Error::NotAPrefix { prefix: prefix.clone(), word: self.clone() });
        }
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&prefix.coords)
                .map(|(y, x)| y[x.len()..].to_vec())
                .collect(),
        })
    }

    /// Removes the suffix `suffix`, when every coordinate ends with it.
    pub fn strip_suffix(&self, suffix: &Self) -> Option<Self> {
        if self.dim() != suffix.dim() {
            return None;
        }
        let mut coords = Vec::with_capacity(self.dim());
        for (w, s) in self.coords.iter().zip(&suffix.coords) {
            coords.push(w.strip_suffix(s.as_slice())?.to_vec());
        }
        Some(Self { coords })
    }

    /// Coordinatewise prefix order.
    pub fn is_prefix_of(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self.coords.iter().zip(&other.coords).all(|(a, b)| b.starts_with(a))
    }

    /// True when the cones over `self` and `other` intersect.
    pub fn comparable(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.starts_with(b) || b.starts_with(a))
    }

    /// Coordinatewise longer of two comparable words: the base of the
    /// intersection of their cones.
    pub fn join(&self, other: &Self) -> Option<Self> {
        if !self.comparable(other) {
            return None;
        }
        Some(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| if a.len() >= b.len() { a.clone() } else { b.clone() })
                .collect(),
        })
    }

    /// Longest common prefix of two words of the same dimension.
    pub fn lcp_pair(&self, other: &Self) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| {
                    let l = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                    a[..l].to_vec()
                })
                .collect(),
        }
    }

    /// Coordinatewise longest common prefix of a nonempty collection.
    pub fn lcp<'a, I>(words: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a MultiWord>,
    {
        let mut it = words.into_iter();
        let mut acc = it.next().ok_or(Error::EmptyInput)?.clone();
        for w in it {
            acc.same_dim(w)?;
            for (a, b) in acc.coords.iter_mut().zip(&w.coords) {
                let l = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                a.truncate(l);
            }
        }
        Ok(acc)
    }

    /// Keeps the first `len[i]` letters of coordinate `i`.
    pub fn truncate_to(&self, len: &[usize]) -> Self {
        Self {
            coords: self
                .coords
                .iter()
                .zip(len)
                .map(|(c, &l)| c[..l.min(c.len())].to_vec())
                .collect(),
        }
    }

    /// Drops the last letter of coordinate `coord`, returning it.
    pub fn pop(&mut self, coord: usize) -> Option<Letter> {
        self.coords[coord].pop()
    }

    /// Removes the first letter of coordinate `coord`, returning it.
    pub fn pop_front(&mut self, coord: usize) -> Option<Letter> {
        if self.coords[coord].is_empty() {
            None
        } else {
            Some(self.coords[coord].remove(0))
        }
    }

    /// Permutes coordinates: coordinate `i` of `self` becomes coordinate `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut coords = vec![Vec::new(); self.dim()];
        for (i, c) in self.coords.iter().enumerate() {
            coords[perm[i]] = c.clone();
        }
        Self { coords }
    }

    /// Splits coordinates into consecutive blocks of the given dimensions.
    pub fn split_blocks(&self, dims: &[usize]) -> Vec<MultiWord> {
        let mut out = Vec::with_capacity(dims.len());
        let mut pos = 0;
        for &k in dims {
            out.push(Self { coords: self.coords[pos..pos + k].to_vec() });
            pos += k;
        }
        out
    }

    pub fn join_blocks(blocks: &[MultiWord]) -> Self {
        Self { coords: blocks.iter().flat_map(|b| b.coords.iter().cloned()).collect() }
    }

    /// Order used for naming: total size first, then lexicographic.
    pub fn shortlex_key(&self) -> (usize, &[Vec<Letter>]) {
        (self.size(), &self.coords)
    }
}

impl fmt::Display for MultiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            if c.is_empty() {
                f.write_str("-")?;
            } else {
                for a in c {
                    write!(f, "{a}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl FromStr for MultiWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse { line: 0, message: "empty word literal".into() });
        }
        let mut coords = Vec::new();
        for part in s.split('|') {
            if part == "-" {
                coords.push(Vec::new());
                continue;
            }
            let mut c = Vec::with_capacity(part.len());
            for ch in part.chars() {
                let digit = ch.to_digit(10).ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("bad letter {ch:?} in word {s:?}"),
                })?;
                c.push(digit as Letter);
            }
            if c.is_empty() {
                return Err(Error::Parse { line: 0, message: format!("empty coordinate in {s:?}; use -") });
            }
            coords.push(c);
        }
        Ok(Self { coords })
    }
}

/// Parses a literal and checks it against `p`.
pub fn parse_word(s: &str, p: Params) -> Result<MultiWord> {
    let w: MultiWord = s.parse()?;
    w.check(p)?;
    Ok(w)
}

/// The cone `w𝔠_n^d` of all points extending `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    pub base: MultiWord,
}

impl Cone {
    pub fn new(base: MultiWord) -> Self {
        Self { base }
    }

    /// Cones meet exactly when their bases are coordinatewise comparable.
    pub fn intersects(&self, other: &Cone) -> bool {
        self.base.comparable(&other.base)
    }

    pub fn contains(&self, other: &Cone) -> bool {
        self.base.is_prefix_of(&other.base)
    }

    /// The `n` subcones obtained by extending coordinate `coord`.
    pub fn split(&self, coord: usize, n: usize) -> Vec<Cone> {
        (0..n as Letter)
            .map(|a| {
                let mut b = self.base.clone();
                b.push(coord, a);
                Cone { base: b }
            })
            .collect()
    }
}

/// A complete prefix code: finitely many words whose cones partition the space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    params: Params,
    members: Vec<MultiWord>,
}

/// Cells of the uniform grid of shape `depth` covered by the cone over `w`.
pub(crate) fn cells_of(w: &MultiWord, depth: &[usize], p: Params) -> Vec<MultiWord> {
    let extra: Vec<usize> = depth.iter().zip(w.coords()).map(|(&d, c)| d - c.len()).collect();
    p.words_of_shape(&extra)
        .into_iter()
        .map(|tail| {
            let mut c = w.clone();
            c.append(&tail);
            c
        })
        .collect()
}

/// Hard cap on grid cells examined by exact tiling checks.
pub const MAX_TILING_CELLS: usize = 1 << 22;

impl PrefixCode {
    /// Verifies that the cones over `members` tile the whole space exactly once.
    pub fn validate(members: Vec<MultiWord>, p: Params) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyInput);
        }
        for m in &members {
            m.check(p)?;
        }
        let depth: Vec<usize> =
            (0..p.d).map(|i| members.iter().map(|m| m.coord(i).len()).max().unwrap_or(0)).collect();
        let total_len: usize = depth.iter().sum();
        let total = p
            .n
            .checked_pow(total_len as u32)
            .filter(|&t| t <= MAX_TILING_CELLS)
            .ok_or_else(|| Error::TooLarge(format!("tiling check at depth {depth:?}")))?;
        let mut owner: HashMap<MultiWord, &MultiWord> = HashMap::with_capacity(total);
        for m in &members {
            for cell in cells_of(m, &depth, p) {
                if let Some(prev) = owner.insert(cell, m) {
                    return Err(Error::Overlap(prev.clone(), m.clone()));
                }
            }
        }
        if owner.len() < total {
            let missing = p
                .words_of_shape(&depth)
                .into_iter()
                .find(|c| !owner.contains_key(c))
                .expect("count mismatch implies a missing cell");
            return Err(Error::Uncovered(missing));
        }
        debug_assert_eq!((members.len() - 1) % (p.n - 1), 0);
        let mut members = members;
        members.sort();
        Ok(Self { params: p, members })
    }

    pub fn trivial(p: Params) -> Self {
        Self { params: p, members: vec![MultiWord::empty(p.d)] }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn members(&self) -> &[MultiWord] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The member whose cone contains the point with prefix `x`, if `x` is
    /// long enough to decide it.
    pub fn member_below(&self, x: &MultiWord) -> Option<&MultiWord> {
        self.members.iter().find(|m| m.is_prefix_of(x))
    }

    /// Splits the first member into `n` children along `coord` until the code
    /// has `size` members. `size` must be `1 mod (n−1)`.
    pub fn by_splitting(p: Params, size: usize) -> Result<Self> {
        if size == 0 || !(size - 1).is_multiple_of(p.n - 1) {
            return Err(Error::BadParams(format!("no complete prefix code of size {size} for n={}", p.n)));
        }
        let mut members: BTreeSet<MultiWord> = BTreeSet::new();
        members.insert(MultiWord::empty(p.d));
        let mut turn = 0;
        while members.len() < size {
            let first = members.iter().next().cloned().expect("nonempty");
            members.remove(&first);
            let coord = turn % p.d;
            turn += 1;
            for c in Cone::new(first).split(coord, p.n) {
                members.insert(c.base);
            }
        }
        Ok(Self { params: p, members: members.into_iter().collect() })
    }
}
