//! Shared fixtures for the benchmarks.

use genlearn::curriculum::{generate, Curriculum};
use genlearn::{ConceptNetwork, CurriculumSpec, Learner, Lexicon};

pub fn builtin_curriculum(name: &str) -> Curriculum {
    let spec = CurriculumSpec::builtin(name).expect("known built-in curriculum");
    generate(&spec, &Lexicon::default_english()).expect("built-in curricula generate")
}

pub fn trained_network(name: &str) -> ConceptNetwork {
    let curriculum = builtin_curriculum(name);
    let mut learner = Learner::new(Lexicon::default_english());
    learner
        .observe_all(&curriculum.instances)
        .expect("built-in curricula are learnable");
    learner.into_network()
}
