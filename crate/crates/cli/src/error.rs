use thiserror::Error;

/// Everything that can stop a command before it produces a report.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{path}:{line}:{column}: {message}")]
    SpecParse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: invalid spec: {message}")]
    SpecInvalid { path: String, message: String },

    #[error("in {expr:?}: {source}")]
    Element {
        expr: String,
        #[source]
        source: confalg::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Lib(#[from] confalg::Error),
}

impl CliError {
    pub fn element(expr: &str, source: confalg::Error) -> Self {
        CliError::Element {
            expr: expr.to_string(),
            source,
        }
    }

    /// 1 when a check could not be carried to a positive verdict (a
    /// precondition or locality certificate failed); 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        use confalg::Error as E;
        match self {
            CliError::Lib(E::Precondition(_) | E::IndeterminateLocality { .. } | E::IndeterminatePair { .. }) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        use confalg::Error as E;
        match self {
            CliError::Io { .. } => "io",
            CliError::SpecParse { .. } => "spec_parse",
            CliError::SpecInvalid { .. } => "spec_invalid",
            CliError::Element { .. } => "element",
            CliError::Usage(_) => "usage",
            CliError::Lib(e) => match e {
                E::Domain(_) => "domain",
                E::Precondition(_) => "precondition",
                E::Unsupported(_) => "unsupported",
                E::NotLocallyNilpotent { .. } => "not_locally_nilpotent",
                E::IndeterminateLocality { .. } | E::IndeterminatePair { .. } => "indeterminate_locality",
                E::WindowExceeded { .. } => "window_exceeded",
                E::Parse { .. } => "parse",
                E::Validation(_) => "validation",
            },
        }
    }
}
