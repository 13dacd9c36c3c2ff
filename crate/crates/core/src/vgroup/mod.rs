//! Elements of `dV_n` as prefix exchanges, lazy residual exploration, the
//! diagonal presentation and the interleaving conjugation.

mod exchange;
pub mod interleave;
pub mod lazy;

pub use exchange::PrefixExchange;
pub use interleave::{interleave_eval, rationality_probe, PrefixMap, ProbeReport, StateMap};
pub use lazy::{
    diagonal_restrict, lazy_core, InverseSource, LazyTransducer, Piece, PiecewiseSource, ResidualSource,
    StateSource,
};

/// The lazy minimal transducer of a prefix exchange.
pub fn to_lazy_transducer(f: &PrefixExchange, max_states: usize) -> crate::Result<LazyTransducer<PiecewiseSource>> {
    LazyTransducer::new(PiecewiseSource::from_exchange(f), max_states)
}
