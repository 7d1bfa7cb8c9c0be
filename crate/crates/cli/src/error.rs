use homecrawl_core::discovery::DiscoveryError;
use homecrawl_core::gateway::GatewayError;
use homecrawl_core::linker::LinkError;
use homecrawl_core::ml::MlError;
use homecrawl_core::normalizer::NormalizeError;
use homecrawl_core::rdf::StoreError;
use homecrawl_core::sim::SimError;
use thiserror::Error;

/// Every failure maps to one exit code: 2 configuration, 3 transport,
/// 4 store.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("store error: {0}")]
    Store(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Transport(_) => 3,
            CliError::Store(_) => 4,
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        CliError::Store(e.to_string())
    }
}

impl From<DiscoveryError> for CliError {
    fn from(e: DiscoveryError) -> Self {
        CliError::Transport(e.to_string())
    }
}

impl From<GatewayError> for CliError {
    fn from(e: GatewayError) -> Self {
        CliError::Transport(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Bind(..) => CliError::Transport(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<MlError> for CliError {
    fn from(e: MlError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<NormalizeError> for CliError {
    fn from(e: NormalizeError) -> Self {
        match e {
            NormalizeError::Store(e) => e.into(),
            other => CliError::Transport(other.to_string()),
        }
    }
}

impl From<LinkError> for CliError {
    fn from(e: LinkError) -> Self {
        match e {
            LinkError::Store(e) => e.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}
