//! Text, JSON and DOT formats, and seeded random campaigns.

pub mod campaign;
pub mod document;
pub mod dot;
pub mod edgelist;
