//! Workloads shared by the benchmarks.

use dn_core::algebra::compose;
use dn_core::{fixtures, format, FiniteTransducer, PrefixExchange};

/// The ternary swap composed with itself, before minimization.
pub fn ternary_square() -> FiniteTransducer {
    let t = fixtures::swap_zero_double_zero_ternary();
    compose(&t, &t).expect("ternary swap composes")
}

/// The product figure followed by the coordinate swap.
pub fn crossed_product() -> FiniteTransducer {
    compose(&fixtures::product_figure(), &fixtures::coordinate_swap(2)).expect("same range")
}

/// A binary exchange in two dimensions with five cones on each side.
pub fn five_cone_exchange() -> PrefixExchange {
    format::parse_exchange(
        "exchange v1\nn 2\nd 2\n\
         0|0 -> -|11\n\
         00|1 -> 1|01\n\
         01|1 -> 0|0\n\
         10|- -> -|10\n\
         11|- -> 1|00\n",
    )
    .expect("valid exchange")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_build() {
        assert!(ternary_square().state_count() > 1);
        assert_eq!(crossed_product().domain().d, 2);
        assert!(!five_cone_exchange().is_identity());
    }
}
