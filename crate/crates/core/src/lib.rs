pub mod bounds;
pub mod cli;
pub mod realfield;
pub mod reduction;
pub mod search;
pub mod sequences;
