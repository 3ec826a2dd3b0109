pub mod config;
pub mod enumeration;
pub mod error;
pub mod freegroup;
pub mod io;
pub mod mobius;
pub mod par;
pub mod realstructures;
pub mod schottky;
pub mod verify;

pub use error::{Error, Result};
pub use mobius::{FixedData, MapClass, MobiusMap, Orientation, SpherePoint, C64};
