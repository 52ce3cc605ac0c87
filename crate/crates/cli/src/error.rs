use std::fmt;

/// CLI failure, printed as one `error[tag]: message` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Config(String),
    /// A numerical guard (stability, weak coupling, inversion) tripped.
    Guard(String),
    Verify(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Verify(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Guard(_) => "guard",
            CliError::Verify(_) => "verify",
            CliError::Io(_) => "io",
        }
    }

    /// Maps a core error raised while building or running an experiment.
    /// `source` is the config text, used to point at the offending key.
    pub fn from_core(e: tqc_core::Error, source: Option<&str>) -> Self {
        let line = match (&e, source) {
            (tqc_core::Error::InvalidParameter { name, .. }, Some(text)) => crate::config::key_line(text, name),
            _ => None,
        };
        let msg = match line {
            Some(l) => format!("line {l}: {e}"),
            None => e.to_string(),
        };
        if e.is_numerical_guard() {
            CliError::Guard(msg)
        } else {
            CliError::Config(msg)
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Config(m) | CliError::Guard(m) | CliError::Verify(m) | CliError::Io(m)) = self;
        write!(f, "error[{}]: {}", self.tag(), m.replace('\n', " "))
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
