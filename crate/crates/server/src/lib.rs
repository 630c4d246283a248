//! Interactive exploration sessions for residue interaction networks.
//!
//! [`session`] holds the pure state machine (events in, new state and phase
//! timings out). [`protocol`] defines the JSON documents exchanged with
//! clients and [`app`] exposes sessions over HTTP and WebSocket.

pub mod app;
pub mod color;
pub mod error;
pub mod protocol;
pub mod session;

pub use error::SessionError;
pub use protocol::{parse_client_message, snapshot, ServerMessage, Snapshot};
pub use session::{create_session, handle_event, SessionOptions, SessionState, Target, TimingBreakdown, UpdateEvent};
