pub mod bits;
pub mod circuit;
pub mod encoding;
pub mod experiments;
pub mod formula;
pub mod generators;
pub mod random;
mod semantic;
pub mod tau;
