//! Garside theory for `B_n`: left normal forms (word problem) and summit
//! forms, summit sets and conjugacy witnesses (conjugacy problem).

mod normal_form;
mod summit;

pub use normal_form::{left_normal_form, negative_split, tau, words_equal, NormalForm};
pub use summit::{
    conjugate_by_simple, conjugate_test, conjugate_test_with, cycle_step, cycle_type, cycling,
    decycle_step, decycling, summit_form, summit_of, summit_set, summit_set_with,
    summit_trajectory, ConjugationWitness, SummitGraph, SUMMIT_SET_SIZE_CAP, SUMMIT_SET_STRAND_CAP,
};
