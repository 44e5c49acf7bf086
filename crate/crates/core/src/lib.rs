//! Decision engine for nonemptiness of Newton strata in minuscule Schubert
//! cells of the B_dR^+-Grassmannian for GL_n.
//!
//! The question "is the Newton stratum of `b'` inside the Schubert cell of a
//! minuscule `mu` nonempty, starting from `b`?" is equivalent to a purely
//! combinatorial one about Harder-Narasimhan polygons of vector bundles on
//! the Fargues-Fontaine curve: does a minuscule effective modification with
//! the prescribed polygons exist? This crate answers that question with exact
//! rational arithmetic and returns replayable certificates for every positive
//! decision.
//!
//! Module map:
//! * [`polygon`]: slope polygons, the Bruhat and slopewise orders, duals,
//!   direct sums, cocharacters.
//! * [`enumeration`]: complete, duplicate-free streams of concave lattice
//!   polygons under rank/degree/slope-window/envelope constraints.
//! * [`extensions`]: the permutation calculus deciding when a bundle arises
//!   as an extension with prescribed kernel and quotient polygons.
//! * [`strata`]: the decision procedures themselves, certificates, and the
//!   independent certificate replay.
//! * [`oracle`]: brute-force reference implementations and deterministic
//!   corpora, used by the test suites and the self-test command.

pub mod enumeration;
pub mod extensions;
pub mod oracle;
pub mod polygon;
pub mod strata;

pub use extensions::{ExtensionWitness, PermutationWitness, SlopeOrigin};
pub use polygon::{
    slope, ConcavePolygon, DominantCocharacter, MinusculeCocharacter, Run, Slope, TuplarPolygon,
};
pub use strata::{Certificate, Engine, ModificationQuery, StrataError, StratumQuery};
