//! Computational experiments around amenability of groups and G-sets:
//! Cayley and Schreier balls, Følner sets, random walks, cogrowth,
//! paradoxical decompositions, self-similar groups, topological full
//! groups and cellular automata on groups.

pub mod error;
pub mod cellauto;
pub mod cogrowth;
pub mod groups;
pub mod orbits;
pub mod paradox;
pub mod randwalk;
pub mod isoperimetry;
pub mod selfsim;
pub mod text;
pub mod topfull;

pub use error::{Error, Result};
pub use groups::{Element, Family, GeneratorWord, Letter, MarkedGroup};
