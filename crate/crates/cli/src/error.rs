use serde::Serialize;

/// A failure reported on stderr as `{"code", "message", "field"}`.
#[derive(Debug, Serialize)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub field: Option<String>,
    #[serde(skip)]
    pub exit: i32,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>, exit: i32) -> Self {
        CliError {
            code,
            message: message.into(),
            field: None,
            exit,
        }
    }

    pub fn usage(message: impl Into<String>, field: &str) -> Self {
        CliError {
            field: (!field.is_empty()).then(|| field.to_string()),
            ..Self::new("usage", message, 1)
        }
    }

    /// Attaches the input a failure came from, unless a finer field is known.
    pub fn in_input(mut self, source: &str) -> Self {
        self.field = Some(match self.field.take() {
            Some(f) => format!("{source}: {f}"),
            None => source.to_string(),
        });
        self
    }
}

impl From<freestein::Error> for CliError {
    fn from(e: freestein::Error) -> Self {
        use freestein::Error as E;
        let message = e.to_string();
        match e {
            E::Inadmissible { .. } => CliError::new("inadmissible", message, 2),
            E::InvalidState(_) => CliError::new("invalid_state", message, 3),
            ref b if b.is_budget() => CliError::new("budget_exceeded", message, 4),
            E::Parse { field, .. } => CliError {
                field: Some(field),
                ..CliError::new("parse", message, 1)
            },
            E::Json(j) => CliError {
                field: Some(format!("line {}, column {}", j.line(), j.column())),
                ..CliError::new("parse", message, 1)
            },
            E::Precondition(_) => CliError::new("precondition", message, 1),
            E::Io(_) => CliError::new("io", message, 1),
            _ => CliError::new("error", message, 1),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("io", e.to_string(), 1)
    }
}
