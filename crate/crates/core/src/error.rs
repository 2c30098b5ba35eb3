use thiserror::Error;

use crate::subgroups::SubgroupList;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    /// A representation handed to the validity check does not even satisfy
    /// the fixed relators.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("gave up after reaching the coset ceiling of {ceiling} (level {level}, {escalations} escalations)")]
    GaveUp { ceiling: usize, level: usize, escalations: usize },

    #[error("resource limit reached: {0}")]
    Resource(String),

    #[error("low-index search stopped early ({reason}); {} subgroups found so far", partial.entries().len())]
    Partial { reason: String, partial: Box<SubgroupList> },
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
