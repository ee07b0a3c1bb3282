pub mod cat;
pub mod factor;
pub mod finset;
pub mod json;
pub mod limits;
pub mod monad;
pub mod standard;
