//! Learns a weighted concept network from paired scenes and toy-English
//! utterances, including generalizations stated as generics ("birds fly",
//! "wugs are animals").

pub mod curriculum;
pub mod graph;
pub mod lang;
pub mod learner;
pub mod matrix;
mod numfmt;
pub mod tasks;

pub use curriculum::{Curriculum, CurriculumError, CurriculumSpec, Phase};
pub use graph::{
    AssocEdge, ConceptId, ConceptKey, ConceptKind, ConceptNetwork, ConceptNode, EdgeLabel,
    GraphError, Neighbor,
};
pub use lang::{Lexicon, ParsedUtterance};
pub use learner::{Learner, LearningInstance, ObservationReport, Situation};
pub use numfmt::format_sig;
pub use tasks::{TaskOptions, TaskResult};
