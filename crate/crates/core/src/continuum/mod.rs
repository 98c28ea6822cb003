//! Continuum Wigner-function transport for the protocol families.

pub mod measures;
pub mod protocol;
pub mod wigner;

pub use measures::{fermi_sea_transport, MeasureReport};
pub use protocol::{
    resolve_protocol, ProtocolKind, ResolvedProtocol, Tolerances, WignerProtocol,
    FLAT_EPSILON_MIN, OCCUPATION_FLOOR,
};
pub use wigner::{heaviside, WignerField};
