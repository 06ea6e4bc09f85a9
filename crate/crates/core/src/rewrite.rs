//! Rewriting diagrams to reduced WGS-X normal form.
//!
//! Normalization runs in three steps:
//!
//! 1. the oriented rules, in priority order with the pivot last, until none
//!    applies;
//! 2. every remaining black node is eliminated against the boundary, and a
//!    WGS-X form `(s, W, b)` is read off;
//! 3. the reduction rules move `b` until no vertex with `b_i = 0` has a
//!    neighbour to its right.
//!
//! The reduced form of a nonzero state is unique: `b` is the lexicographically
//! largest index in the support, `s = Γ_b` and `w_ij = Γ_{b⊕e_i⊕e_j} / s`.

pub mod measure;
pub mod normalize;
pub mod rules;
pub mod wgsx;

use thiserror::Error;

pub use measure::{FusionClasses, MeasureT};
pub use normalize::{
    arc_tensor, arc_to_wgsx, equal, normalize, normalize_traced, reduce_wgsx, step_one_only, Normalized,
    TraceStep,
};
pub use rules::{
    apply_rule, apply_unchecked, apply_wgsx, find_redexes, find_wgsx_redexes, node_class, Anchor,
    NodeClass, Redex, RuleFamily, RuleId,
};
pub use wgsx::Wgsx;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("rule {0} has no redex at the given anchors")]
    NoRedex(RuleId),
    #[error("rule {0} does not act on this kind of diagram")]
    WrongSubstrate(RuleId),
}
