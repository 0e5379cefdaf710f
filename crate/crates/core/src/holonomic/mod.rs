//! Closed braids in negative-then-positive form `N|P` and the rewriting
//! moves between them.
//!
//! Every rewrite is recorded in an [`IsotopyCertificate`] whose steps can be
//! checked one at a time by [`verify_certificate`].

mod certificate;
mod form;
mod pipeline;

pub use certificate::{
    check_step, verify_certificate, verify_certificate_with, Direction, Failure,
    IsotopyCertificate, Move, Side, Step, Verdict,
};
pub use form::HolonomicForm;
pub use pipeline::{
    comb_to_delta_power, destabilize_step, holonomic_normal_form, holonomic_summit, holonomize,
    markov_destabilize, markov_stabilize, replay, replay_with, stabilize_step, v3_move, v3_step,
    ReplayScript, ScriptCommand, V3Move,
};
