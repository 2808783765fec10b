//! QQ-systems, Miura opers, quantum Wronskians and the tRS duality.

pub mod cartan;
pub mod miura;
pub mod system;
pub mod trs;
pub mod wronskian;

pub use cartan::CartanData;
pub use miura::*;
pub use system::*;
pub use trs::*;
pub use wronskian::*;
