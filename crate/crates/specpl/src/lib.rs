//! Command-line driver, file formats and the differential test harness for
//! the `specpl_core` specializer.

pub mod corpus;
pub mod harness;
pub mod io;
