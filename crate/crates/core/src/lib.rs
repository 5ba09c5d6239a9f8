//! Finite models of bounded involutive BE algebras.
//!
//! Build algebras from tables ([`algebra`], [`text`]), check formulas and
//! named axioms on them ([`term`], [`axioms`]), place them in classes
//! ([`classify`]), move between signatures ([`transforms`]) and enumerate
//! every model of a small size ([`enumerate`]). Bundled examples live in
//! [`corpus`].

pub mod algebra;
pub mod axioms;
pub mod classify;
pub mod corpus;
pub mod enumerate;
pub mod term;
pub mod text;
pub mod transforms;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/classes.md")]
    mod classes {}
    #[doc = include_str!("../../../book/src/signatures.md")]
    mod signatures {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
