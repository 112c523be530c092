use thiserror::Error;

/// Errors raised while building or validating structures and maps.
///
/// Witnesses are reported by element name so that messages can be shown to
/// users verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order has a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("carrier of size {size} exceeds the supported maximum of {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("no top element")]
    NoTop,
    #[error("`{0}` and `{1}` have no meet")]
    NotMeetSemilattice(String, String),

    #[error("explicit selection requires a family of sets")]
    MissingSets,

    #[error("designated subset {0:?} has no join")]
    MissingJoin(Vec<String>),
    #[error("distributivity fails for a = `{a}` over {set:?}")]
    DistributivityFailure { a: String, set: Vec<String> },

    #[error("map table is not total: `{0}` has no image")]
    TableNotTotal(String),
    #[error("meet not preserved at (`{0}`, `{1}`)")]
    MeetViolation(String, String),
    #[error("top not preserved")]
    TopViolation,
    #[error("join of designated subset {0:?} not preserved")]
    JoinViolation(Vec<String>),
    #[error("maps are not composable")]
    NotComposable,

    #[error("join of `{0}` and `{1}` is undefined")]
    JoinUndefined(String, String),
    #[error("{what} exceeds the capacity bound of {bound}")]
    CapacityExceeded { what: String, bound: usize },

    #[error("image of `{0}` is not complemented in the codomain")]
    ImageNotComplemented(String),
    #[error("factorization through the congruence frame failed: {0}")]
    FactorizationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
