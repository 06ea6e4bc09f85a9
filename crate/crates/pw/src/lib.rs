//! File formats and command-line front end for `pw-core`.
//!
//! * [`pwfile`]: the `.pw` diagram language, parser and printer
//! * [`tensor_json`]: tensors as JSON amplitude lists
//! * [`wpg`]: weighted plane graphs with rotation systems
//! * [`dot`]: Graphviz export
//! * [`cli`]: the `pw` subcommands

pub mod cli;
pub mod dot;
pub mod pwfile;
pub mod span;
pub mod tensor_json;
pub mod wpg;

pub use pwfile::{parse_diagram, print_diagram};
pub use span::{ParseError, Position, SourceSpan};
pub use tensor_json::{parse_tensor, print_tensor};
pub use wpg::{parse_wpg, print_wpg, WpgFile};
