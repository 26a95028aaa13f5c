pub mod analysis;
pub mod category;
pub mod cell;
pub mod check;
pub mod colimit;
pub mod constructions;
pub mod dump;
pub mod error;
pub mod iso;
pub mod map;
pub mod par;
pub mod precat;
pub mod suite;
pub mod theta;
pub mod window;

pub use cell::Cell;
pub use error::{Error, Result};
pub use map::PrecatMap;
pub use precat::Precat;
pub use theta::{ThetaMorphism, ThetaObject};
pub use window::Window;
