//! A workbench for finite universal algebra and the tree languages they
//! recognize.
//!
//! The crate covers:
//!
//! * terms over a graded signature, with a prefix (Polish) word codec
//!   whose unique-readability guarantees are enforced by the parser
//!   ([`term`], [`signature`]);
//! * finite algebras with explicit operation tables, homomorphisms,
//!   products, congruences, quotients, and congruence-lattice operations
//!   ([`algebra`], [`congruence`], [`catalog`]);
//! * translation monoids, syntactic congruences of recognized sets, and
//!   their behaviour under onto homomorphisms ([`translation`]);
//! * finite monoids with ω-powers and saturation exponents, and words
//!   extended by ω-powers ([`monoid`], [`omega_word`]);
//! * identities, relatively free algebras in finitely generated classes,
//!   and bounded membership tests for finite quotients ([`variety`]);
//! * term recognizers and their Boolean combinations ([`recognizer`]);
//! * Boolean algebras of subsets with tensor products, canonical meshes,
//!   the star condition, and finite Stone-type duality ([`boole`]);
//! * subterm-indexed separating algebras ([`sigma`]);
//! * self-checking counterexample demonstrations ([`counterexample`]);
//! * JSON wire formats for the above ([`json`]) and seeded random
//!   instance generators ([`random`]).

#![warn(missing_docs)]

pub mod algebra;
pub mod bitset;
pub mod boole;
pub mod catalog;
pub mod congruence;
pub mod counterexample;
pub mod json;
pub mod monoid;
pub mod omega_word;
pub mod random;
pub mod recognizer;
pub mod sigma;
pub mod signature;
pub mod term;
pub mod translation;
pub mod variety;

pub use algebra::{are_isomorphic, AlgebraError, FiniteAlgebra, Homomorphism};
pub use bitset::BitSet;
pub use boole::{BooleError, SetBooleanAlgebra};
pub use congruence::{enumerate_congruences, Congruence};
pub use counterexample::{CounterexampleError, DemoReport};
pub use monoid::{enumerate_monoids, FiniteMonoid};
pub use omega_word::{OmegaWord, OmegaWordError};
pub use recognizer::Recognizer;
pub use sigma::{SigmaAlgebra, SigmaConfig};
pub use signature::{Signature, SignatureError, VariableSet};
pub use term::{parse_polish, Term, TermError};
pub use translation::{syntactic_congruence, translation_monoid, Translation};
pub use variety::{free_algebra, satisfies, FreeAlgebraResult, Identity};
