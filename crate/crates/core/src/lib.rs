//! Memory-access ("mems") based performance analysis for a small C subset.
//!
//! - [`cfront`]: MiniC lexer, parser, resolver and printer.
//! - [`memscount`]: static mems of expressions and statements.
//! - [`instrument`]: source-to-source counter insertion and its inverse.
//! - [`pathex`]: symbolic path enumeration with path conditions.
//! - [`countest`]: model counting and the frequency-weighted estimate.
//! - [`dynexec`]: interpreter, native runner and output parser.
//! - [`lab`]: sweeps, correlations, buckets and reports.

pub mod cfront;
pub mod cli;
pub mod corpus;
pub mod countest;
pub mod dynexec;
pub mod instrument;
pub mod lab;
pub mod memscount;
pub mod pathex;
