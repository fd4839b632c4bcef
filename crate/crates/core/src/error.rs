use thiserror::Error;

/// Errors raised by graph construction and the graphtropy operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate node identifier `{0}`")]
    DuplicateNode(String),
    #[error("unknown node identifier `{0}`")]
    UnknownNode(String),
    #[error("self link on node `{0}`")]
    SelfLink(String),
    #[error("node index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graphs do not share the same ordered node set")]
    NodeSetMismatch,
    #[error("conditioning graph has no distinctions")]
    UndefinedConditional,
    #[error("not a partition graph: {u}~{v} and {v}~{w} but {u}!~{w}")]
    NotAPartitionGraph { u: usize, v: usize, w: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("weighted dits concern different node pairs")]
    PairMismatch,
    #[error("invalid node pair ({0}, {1})")]
    InvalidPair(usize, usize),
    #[error("node weights are required")]
    MissingNodeWeights,
    #[error("mean distinctness of the image pair ({0}, {1}) is zero")]
    DivisionByZeroMu(usize, usize),
    #[error("not a permutation of the node indices")]
    InvalidPermutation,

    #[error("pair is not in the distribution support")]
    NotInSupport,
    #[error("invalid reference pair: {0}")]
    InvalidReferencePair(String),
    #[error("invalid distribution: {0}")]
    BadDistribution(String),

    #[error("graph with {n} nodes exceeds the limit of {limit}")]
    GraphTooLarge { n: usize, limit: usize },
    #[error("search budget of {budget} exceeded")]
    SearchBudgetExceeded { budget: u64 },
    #[error("infeasible constraint: {0}")]
    InfeasibleConstraint(String),
    #[error("no feasible inverse temperature: target mean {target} outside [{min}, {max}]")]
    NoFeasibleBeta { target: f64, min: f64, max: f64 },

    #[error("compression ratio {0} is below 1")]
    InvalidCompressionRatio(f64),
    #[error("empty list")]
    EmptyList,
    #[error("observer with {0} bits needs too many cells")]
    TooManyCells(u32),

    #[error("empty observation trace")]
    EmptyTrace,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("causal rules form a reference cycle through rule {0}")]
    RuleCycle(usize),
    #[error("invalid reference: {0}")]
    InvalidReference(String),
    #[error("trace of length {len} is too short for lag {max_lag}")]
    TraceTooShort { len: usize, max_lag: usize },
    #[error("category `{0}` has no stimulus sequence")]
    EmptyCategory(String),
    #[error("vector or sequence lengths do not match")]
    LengthMismatch,

    #[error("vectors are not orthonormal")]
    NotOrthonormal,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
}

pub type Result<T> = std::result::Result<T, Error>;
