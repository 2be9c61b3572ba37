use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("cover relation contains a cycle through `{0}`")]
    Cycle(String),
    #[error("cover pair ({lower}, {upper}) is implied by other covers")]
    NotTransitivelyReduced { lower: String, upper: String },
    #[error("cover pair ({0}, {0}) is reflexive")]
    SelfCover(String),
    #[error("poset has no unique bottom element")]
    NoBottom,
    #[error("poset has no unique top element")]
    NoTop,
    #[error("poset `{0}` is not a lattice")]
    NotALattice(String),
    #[error("element `{0}` has no unique minimal join-irreducible decomposition")]
    NotLowerLocallyDistributive(String),
    #[error("`{lower}` is not below `{upper}`")]
    Order { lower: String, upper: String },
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {attribute} holds invalid element id {id}")]
    InvalidCoordinate { attribute: usize, id: usize },
    #[error("attribute `{0}` has fewer than two elements")]
    SingletonAttribute(String),
    #[error("a product needs at least one attribute")]
    EmptyProduct,
    #[error("{what} would need {requested} entries, limit is {limit}")]
    Size {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("element is not join-irreducible")]
    NotJoinIrreducible,
    #[error("derivative is not Boolean: the interval [x, x v y] is not a cube")]
    NotBoolean,
    #[error("target is outside the admissible set at attribute {attribute}: {reason}")]
    NotInLtilde { attribute: usize, reason: String },
    #[error("the bottom element is not an interaction target")]
    EmptyTarget,
    #[error("attribute `{0}` is not distributive")]
    NotDistributive(String),
    #[error("attribute `{0}` is not linear")]
    NotLinear(String),
    #[error("coordinate {0} of the target is not join-irreducible")]
    SupportNotIrreducible(usize),
    #[error("invalid subset {subset:?} for support {support:?}")]
    InvalidSubset { subset: Vec<usize>, support: Vec<usize> },
    #[error("player index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("coalition must be non-empty")]
    EmptyCoalition,
    #[error("positive and negative parts overlap")]
    NotDisjoint,
    #[error("expected {expected} values, got {found}")]
    ValueCount { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
