//! Infinitesimal calculus on truncated Laurent series in a positive
//! infinitesimal ε, with Archimedean oracles to check it against.

pub mod diff;
pub mod expr;
pub mod lc;
pub mod magnitudes;
pub mod oracle;
pub mod sample;
pub mod tlh;
