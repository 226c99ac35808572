//! Toy-English front end: lexicon, tokenizer, template parser, and the
//! bare-plural genericity test.

mod lexicon;
mod parse;

pub use lexicon::{LexEntry, Lexicon, LexiconError, PartOfSpeech};
pub use parse::{
    is_generic, parse, parse_text, tokenize, Complement, NounClass, NounPhrase, ParseError,
    ParsedUtterance, Predicate, VerbFrame,
};
