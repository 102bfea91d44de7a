//! Text normalization, lexicon polarity, word-list counts and n-gram
//! vectorization.

mod lexicon;
mod normalize;
mod vocab;

pub use lexicon::{count_wordlist, polarity, Lexicon, WordList};
pub use normalize::normalize_text;
pub use vocab::{fit_ngram_vocabulary, vectorize, NgramConfig, NgramKind, NgramVocabulary};
