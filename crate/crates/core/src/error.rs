use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("class functions belong to different groups")]
    GroupMismatch,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a normal subgroup")]
    NotNormal,
    #[error("subgroup is not abelian")]
    NotAbelian,
    #[error("character is not trivial on the kernel")]
    NotTrivialOnKernel,
    #[error("class function is not a character: {0}")]
    NotCharacter(String),
    #[error("homomorphism is not surjective; image has order {image_order} in a group of order {target_order}")]
    NotSurjective { image_order: usize, target_order: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
