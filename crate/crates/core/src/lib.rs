//! Analysis and source-to-source specialization of Prolog procedures.
//!
//! The pipeline reads a program and a set of directionality specifications,
//! verifies each procedure against its specifications by abstract
//! execution, and rewrites it with transformations that preserve the
//! sequence of answer substitutions for every input the specification
//! admits. [`concrete`] is an interpreter for the same language, used as the
//! reference when testing the transformations.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ast;
pub mod normal_form;
pub mod concrete;
pub mod linear;
pub mod abstract_domain;
pub mod abstract_sequence;
pub mod spec_lang;
pub mod analyzer;
pub mod transformer;
