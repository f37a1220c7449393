//! Mechanized proof-theoretic machinery at desk scale: ordinal notations up
//! to ε_{Ω+1}, a finitary one-sided sequent calculus for KP, lazily branching
//! infinitary derivations, the four bound-tracking proof transformers
//! (weakening, inversion, reduction, cut elimination), the embedding of
//! finitary proofs into the infinitary system, and a reflection pipeline that
//! audits end-sequent truth over a finite set universe.

pub mod embed;
pub mod hfset;
pub mod ord;
pub mod reflect;
pub mod rsderiv;
pub mod kpcalc;
pub mod syntax;
pub mod transforms;
