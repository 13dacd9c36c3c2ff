use std::fmt;

use crate::algebra::state_images;
use crate::error::{Error, Result};
use crate::transducer::CoreTransducer;
use crate::Budget;

/// A residue modulo `n − 1`. For `n = 2` the group is trivial and the only
/// value is `0 mod 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SigValue {
    pub residue: usize,
    pub modulus: usize,
}

impl SigValue {
    pub fn new(count: usize, n: usize) -> Self {
        let modulus = n - 1;
        Self { residue: count % modulus, modulus }
    }

    pub fn one(n: usize) -> Self {
        Self::new(1, n)
    }

    pub fn is_one(self) -> bool {
        self.residue == 1 % self.modulus
    }
}

impl std::ops::Mul for SigValue {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Self { residue: (self.residue * other.residue) % self.modulus, modulus: self.modulus }
    }
}

impl fmt::Display for SigValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Number of cones in a decomposition of each state's image, reduced
/// modulo `n − 1`; all states must agree. For a `d`-dimensional core this is
/// the signature of the product of its factors.
pub fn sig(t: &CoreTransducer, budget: Budget) -> Result<SigValue> {
    let n = t.params().n;
    let images = state_images(t.inner(), budget.depth)?;
    let counts: Vec<usize> = images.iter().map(|i| i.cone_count()).collect();
    let residues: Vec<usize> = counts.iter().map(|c| c % (n - 1)).collect();
    if residues.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::SigIllDefined(counts));
    }
    Ok(SigValue::new(counts[0], n))
}

pub fn sig_d(ts: &[CoreTransducer], budget: Budget) -> Result<SigValue> {
    let first = ts.first().ok_or(Error::EmptyInput)?;
    let n = first.params().n;
    let mut acc = SigValue::one(n);
    for t in ts {
        if t.params().n != n {
            return Err(Error::ParamMismatch(format!("alphabet sizes {n} and {}", t.params().n)));
        }
        acc = acc * sig(t, budget)?;
    }
    Ok(acc)
}

pub fn kernel_test(ts: &[CoreTransducer], budget: Budget) -> Result<bool> {
    Ok(sig_d(ts, budget)?.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::core;
    use crate::fixtures;
    use crate::words::Params;

    #[test]
    fn binary_signatures_are_trivial() {
        let s = core(&fixtures::swap_zero_double_zero(), 8).unwrap();
        let v = sig(&s, Budget::default()).unwrap();
        assert_eq!(v, SigValue { residue: 0, modulus: 1 });
        assert!(kernel_test(&[s.clone(), s], Budget::default()).unwrap());
    }

    #[test]
    fn ternary_permutation_has_signature_one() {
        let p = Params::new(3, 1).unwrap();
        let t = core(&fixtures::letter_permutation(p, &[1, 2, 0]), 8).unwrap();
        let v = sig(&t, Budget::default()).unwrap();
        assert_eq!(v, SigValue { residue: 1, modulus: 2 });
        let id = crate::CoreTransducer::identity(p);
        assert!(kernel_test(&[id.clone(), id], Budget::default()).unwrap());
    }
}
