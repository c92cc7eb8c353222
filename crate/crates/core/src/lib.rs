pub mod density;
pub mod drinfeld;
pub mod error;
pub mod frobenius;
pub mod gfq;
pub mod image;
pub mod laurent;
pub mod linalg;
pub mod newton;
pub mod ring;
pub mod tate;
pub mod tau;
