//! Exact rational computations for cyclic quadratic operads.
//!
//! The crate builds quadratic (colored) operads from generators and
//! relations, the colored "hat" operad of a cyclic operad that encodes an
//! algebra, a module and an invariant inner product, quadratic duals and
//! cobar complexes, and the homotopy inner product data (derivations and
//! module maps on free algebras) including the inductive construction on the
//! simplicial chains of a triangulated Poincaré duality space.
//!
//! All arithmetic is over `Q` with arbitrary precision; every identity is
//! checked exactly.

pub mod algebras;
pub mod commands;
pub mod duality;
pub mod hatop;
pub mod operad;
pub mod par;
pub mod pdspace;
pub mod perm;
pub mod qalg;
pub mod report;
pub mod trees;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("pairing is degenerate")]
    Degenerate,
    #[error("differentials do not compose to zero out of degree {0}")]
    NotAComplex(i32),
    #[error("no admissible edge color: {0}")]
    Coloring(String),
    #[error("invalid tree operation: {0}")]
    Tree(String),
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("operad is not cyclic")]
    NotCyclic,
    #[error("color mismatch: {0}")]
    ColorMismatch(String),
    #[error("cobar differential does not square to zero for {0}")]
    CobarSquare(String),
    #[error("invalid product: {0}")]
    Product(String),
    #[error("local system unsolvable at simplex {simplex:?} (order {order})")]
    Unsolvable { simplex: Vec<usize>, order: usize },
    #[error("no fundamental cycle: {0}")]
    NoFundamentalCycle(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
