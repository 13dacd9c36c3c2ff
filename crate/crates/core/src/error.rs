use thiserror::Error;

use crate::words::MultiWord;

/// Two ways of reading the same pair of letters that disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceWitness {
    pub state: String,
    pub first: (usize, u8),
    pub second: (usize, u8),
    /// End state and output reading `first` then `second`.
    pub forward: (String, MultiWord),
    /// End state and output reading `second` then `first`.
    pub backward: (String, MultiWord),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("letter {letter} out of range for alphabet of size {n}")]
    BadLetter { letter: u8, n: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("{prefix} is not a prefix of {word}")]
    NotAPrefix { prefix: MultiWord, word: MultiWord },
    #[error("empty input")]
    EmptyInput,
    #[error("cones over {0} and {1} overlap")]
    Overlap(MultiWord, MultiWord),
    #[error("cone over {0} is not covered")]
    Uncovered(MultiWord),
    #[error("prefix codes have different sizes ({0} and {1})")]
    CodeSizeMismatch(usize, usize),
    #[error("incoherent transitions at state {}: {:?} then {:?} gives {:?}, reverse gives {:?}", .0.state, .0.first, .0.second, .0.forward, .0.backward)]
    Incoherent(Box<CoherenceWitness>),
    #[error("no transition for state {state} on letter {letter} in coordinate {coord}")]
    PartialDelta { state: String, coord: usize, letter: u8 },
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("duplicate state {0}")]
    DuplicateState(String),
    #[error("degenerate: states {states:?} loop without writing in coordinate {coord}")]
    Degenerate { coord: usize, states: Vec<String> },
    #[error("iteration did not settle within {0} rounds")]
    RoundsExceeded(usize),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("parameter mismatch: {0}")]
    ParamMismatch(String),
    #[error("not synchronizing at any level up to {bound}")]
    NotSynchronizing { bound: usize },
    #[error("state image did not stabilize within {depth} rounds")]
    NoStabilization { depth: usize },
    #[error("injectivity undecided within budget {budget}")]
    InjectivityUnknown { budget: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("coordinate {coord} writes into coordinates {first} and {second}")]
    PsiIllDefined { coord: usize, first: usize, second: usize },
    #[error("coordinate {0} never writes")]
    NeverWrites(usize),
    #[error("{0:?} is not a permutation")]
    NonPermutation(Vec<usize>),
    #[error("not decomposable: {0}")]
    NotDecomposable(String),
    #[error("signature ill-defined: state image counts {0:?}")]
    SigIllDefined(Vec<usize>),
    #[error("not in the kernel of the signature")]
    NotInKernel,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("not a core transducer: {0}")]
    NotACore(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
