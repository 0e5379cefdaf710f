//! Braid words, permutations and permutation braids (fragments of `Δ`).

mod perm;
mod simple;
mod word;

pub use perm::Permutation;
pub use simple::{
    is_delta_fragment, permutation_braid_word, positive_equivalent, PermutationBraid,
    POSITIVE_SEARCH_CAP,
};
pub use word::BraidWord;

pub(crate) use word::{parse_strands, same_strands, tokenize, Token};
