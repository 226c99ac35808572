//! Built-in curricula and the curriculum file format.
//!
//! A [`CurriculumSpec`] lists phases; each phase expands an [`Inventory`]
//! table into (scene, utterance) instances. Instances within a phase are
//! shuffled with a seeded ChaCha stream, one stream per phase, so adding a
//! phase never reorders the others.

mod format;

pub use format::{load_curriculum, save_curriculum};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lang::{Lexicon, PartOfSpeech};
use crate::learner::{Entity, LearningInstance, SceneAction, Situation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Objects,
    Colors,
    Actions,
    Plurals,
    CategoryGenerics,
    ActionGenerics,
    ColorGenerics,
}

impl Phase {
    pub const ALL: [Phase; 7] = [
        Phase::Objects,
        Phase::Colors,
        Phase::Actions,
        Phase::Plurals,
        Phase::CategoryGenerics,
        Phase::ActionGenerics,
        Phase::ColorGenerics,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Objects => "objects",
            Phase::Colors => "colors",
            Phase::Actions => "actions",
            Phase::Plurals => "plurals",
            Phase::CategoryGenerics => "category-generics",
            Phase::ActionGenerics => "action-generics",
            Phase::ColorGenerics => "color-generics",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = CurriculumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Phase::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| CurriculumError::UnknownBuiltin(s.to_string()))
    }
}

/// `reps` presentations of `object` with `color`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorRun {
    pub object: String,
    pub color: String,
    pub reps: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub agent: String,
    pub verb: String,
    pub patient: Option<String>,
}

impl Frame {
    fn new(agent: &str, verb: &str, patient: Option<&str>) -> Self {
        Frame {
            agent: agent.into(),
            verb: verb.into(),
            patient: patient.map(str::to_string),
        }
    }
}

/// The content tables phases draw from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inventory {
    pub objects: Vec<String>,
    /// Category name and its members, in presentation order.
    pub categories: Vec<(String, Vec<String>)>,
    pub colors: Vec<ColorRun>,
    pub actions: Vec<Frame>,
    pub action_generics: Vec<Frame>,
    /// (object, color) pairs taught as `<objects> are <color>`.
    pub color_generics: Vec<(String, String)>,
}

const DEFAULT_OBJECTS: [&str; 27] = [
    "ball",
    "box",
    "book",
    "table",
    "chair",
    "cup",
    "truck",
    "car",
    "house",
    "cookie",
    "paper",
    "watermelon",
    "chicken",
    "beef",
    "cow",
    "bear",
    "bird",
    "cat",
    "dog",
    "baby",
    "mom",
    "dad",
    "hand",
    "head",
    "water",
    "juice",
    "milk",
];

const ANIMALS: [&str; 6] = ["bear", "bird", "cat", "dog", "cow", "chicken"];
const FOODS: [&str; 7] = [
    "cookie",
    "watermelon",
    "chicken",
    "beef",
    "milk",
    "juice",
    "water",
];
const PEOPLE: [&str; 3] = ["mom", "dad", "baby"];

/// Arbitrary colors handed out to objects outside the color-task table.
const PALETTE: [&str; 9] = [
    "red", "blue", "green", "white", "black", "yellow", "orange", "gray", "brown",
];

impl Default for Inventory {
    fn default() -> Self {
        let strings = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();

        let mut colors = Vec::new();
        let mut run = |object: &str, color: &str, reps: u32| {
            colors.push(ColorRun {
                object: object.into(),
                color: color.into(),
                reps,
            })
        };
        for (c, r) in [("blue", 1), ("green", 3), ("light-brown", 1), ("red", 1)] {
            run("cookie", c, r);
        }
        for (c, r) in [("blue", 1), ("dark-brown", 2), ("red", 1), ("white", 1)] {
            run("paper", c, r);
        }
        for c in ["dark-brown", "green", "light-brown", "red"] {
            run("watermelon", c, 1);
        }
        let skip = [
            "cookie",
            "paper",
            "watermelon",
            "water",
            "juice",
            "milk",
            "beef",
        ];
        let others = DEFAULT_OBJECTS
            .iter()
            .filter(|o| !skip.contains(o) && !PEOPLE.contains(o));
        for (i, o) in others.enumerate() {
            for k in 0..3 {
                run(o, PALETTE[(2 * i + k) % PALETTE.len()], 1);
            }
        }

        let mut actions = Vec::new();
        for p in PEOPLE {
            for (v, o) in [
                ("eat", "cookie"),
                ("eat", "watermelon"),
                ("eat", "chicken"),
                ("eat", "beef"),
                ("drink", "milk"),
                ("drink", "juice"),
                ("drink", "water"),
                ("roll", "ball"),
                ("take", "cup"),
                ("take", "book"),
            ] {
                actions.push(Frame::new(p, v, Some(o)));
            }
        }
        for a in ["bear", "cat", "dog", "cow", "chicken"] {
            actions.push(Frame::new(a, "walk", None));
        }
        actions.push(Frame::new("bird", "fly", None));
        for a in ANIMALS {
            actions.push(Frame::new(a, "drink", Some("water")));
        }
        for a in ["cat", "dog"] {
            actions.push(Frame::new(a, "jump", None));
        }

        let mut action_generics = Vec::new();
        for a in ["bear", "dog", "cat", "mom", "dad", "baby"] {
            action_generics.push(Frame::new(a, "sit", None));
        }
        for a in ["cat", "dog", "cow", "chicken", "bear"] {
            action_generics.push(Frame::new(a, "walk", None));
        }
        action_generics.push(Frame::new("bird", "fly", None));
        for p in PEOPLE {
            action_generics.push(Frame::new(p, "eat", None));
        }
        action_generics.push(Frame::new("mom", "eat", Some("cookie")));
        action_generics.push(Frame::new("dad", "eat", Some("watermelon")));
        action_generics.push(Frame::new("dad", "eat", Some("chicken")));

        Inventory {
            objects: strings(&DEFAULT_OBJECTS),
            categories: vec![
                ("animal".into(), strings(&ANIMALS)),
                ("food".into(), strings(&FOODS)),
                ("people".into(), strings(&PEOPLE)),
            ],
            colors,
            actions,
            action_generics,
            color_generics: vec![
                ("watermelon".into(), "green".into()),
                ("paper".into(), "white".into()),
                ("cookie".into(), "light-brown".into()),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurriculumSpec {
    pub name: String,
    pub phases: Vec<Phase>,
    pub inventory: Inventory,
    /// Objects dropped from every table.
    pub exclude: BTreeSet<String>,
    /// Presentations per objects/actions/plurals pairing.
    pub repetitions: u32,
    pub seed: u64,
}

impl CurriculumSpec {
    pub fn new(name: impl Into<String>, phases: &[Phase]) -> Self {
        CurriculumSpec {
            name: name.into(),
            phases: phases.to_vec(),
            inventory: Inventory::default(),
            exclude: BTreeSet::new(),
            repetitions: 1,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn excluding<'a>(mut self, objects: impl IntoIterator<Item = &'a str>) -> Self {
        self.exclude.extend(objects.into_iter().map(str::to_string));
        self
    }

    /// Built-in specs by name; see [`BUILTIN_NAMES`].
    pub fn builtin(name: &str) -> Result<Self, CurriculumError> {
        use Phase::*;
        let phases: &[Phase] = match name {
            "empty" => &[],
            "objects" => &[Objects],
            "colors" => &[Objects, Colors],
            "colors-and-generics" => &[Objects, Colors, ColorGenerics],
            "objects-and-actions" => &[Objects, Actions],
            "objects-and-kinds" => &[Objects, CategoryGenerics],
            "objects-kinds-and-generics" => &[Objects, CategoryGenerics, ActionGenerics],
            "obj-actions-kinds-generics" | "standard" => &[
                Objects,
                Colors,
                Actions,
                Plurals,
                CategoryGenerics,
                ActionGenerics,
                ColorGenerics,
            ],
            other => return Err(CurriculumError::UnknownBuiltin(other.to_string())),
        };
        Ok(CurriculumSpec::new(name, phases))
    }
}

pub const BUILTIN_NAMES: [&str; 9] = [
    "empty",
    "objects",
    "colors",
    "colors-and-generics",
    "objects-and-actions",
    "objects-and-kinds",
    "objects-kinds-and-generics",
    "obj-actions-kinds-generics",
    "standard",
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Curriculum {
    pub name: String,
    pub instances: Vec<LearningInstance>,
}

#[derive(Debug, Error)]
pub enum CurriculumError {
    #[error("unknown lexeme {0:?}")]
    UnknownLexeme(String),
    #[error("unknown built-in curriculum or phase {0:?}")]
    UnknownBuiltin(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct Renderer<'a> {
    lex: &'a Lexicon,
}

impl Renderer<'_> {
    fn pos(&self, lemma: &str) -> Result<PartOfSpeech, CurriculumError> {
        self.lex
            .lemma_pos(lemma)
            .ok_or_else(|| CurriculumError::UnknownLexeme(lemma.to_string()))
    }

    fn check_verb(&self, verb: &str) -> Result<(), CurriculumError> {
        if self.lex.has_verb(verb) {
            Ok(())
        } else {
            Err(CurriculumError::UnknownLexeme(verb.to_string()))
        }
    }

    fn check_color(&self, color: &str) -> Result<(), CurriculumError> {
        if self.lex.has_color(color) {
            Ok(())
        } else {
            Err(CurriculumError::UnknownLexeme(color.to_string()))
        }
    }

    /// `a ball`, `some milk`, `Mom`; an optional color goes after the determiner.
    fn singular(&self, lemma: &str, color: Option<&str>) -> Result<String, CurriculumError> {
        let color = color
            .map(|c| format!("{} ", c.replace('-', " ")))
            .unwrap_or_default();
        Ok(match self.pos(lemma)? {
            PartOfSpeech::ProperNoun => capitalize(lemma),
            PartOfSpeech::MassNoun => format!("some {color}{lemma}"),
            _ => {
                let det = if starts_with_vowel(&color)
                    || (color.is_empty() && starts_with_vowel(lemma))
                {
                    "an"
                } else {
                    "a"
                };
                format!("{det} {color}{lemma}")
            }
        })
    }

    /// Object of a singular-subject frame: mass nouns stay bare.
    fn patient(&self, lemma: &str) -> Result<String, CurriculumError> {
        Ok(match self.pos(lemma)? {
            PartOfSpeech::MassNoun => lemma.to_string(),
            _ => self.singular(lemma, None)?,
        })
    }

    fn plural(&self, lemma: &str) -> Result<String, CurriculumError> {
        self.pos(lemma)?;
        let p = self.lex.pluralize(lemma);
        Ok(if matches!(lemma, "mom" | "dad") {
            capitalize(&p)
        } else {
            p
        })
    }

    fn verb_singular(&self, verb: &str) -> Result<String, CurriculumError> {
        self.lex
            .verb_singular(verb)
            .map(str::to_string)
            .ok_or_else(|| CurriculumError::UnknownLexeme(verb.to_string()))
    }
}

fn starts_with_vowel(s: &str) -> bool {
    s.starts_with(['a', 'e', 'i', 'o', 'u'])
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

fn entity(id: usize, object: &str, color: Option<&str>) -> Entity {
    Entity {
        id: format!("e{id}"),
        object: object.to_string(),
        color: color.map(str::to_string),
    }
}

fn scene(entities: Vec<Entity>, actions: Vec<SceneAction>) -> Situation {
    Situation { entities, actions }
}

/// Expands `spec` into a curriculum. Deterministic in (spec, seed).
pub fn generate(spec: &CurriculumSpec, lexicon: &Lexicon) -> Result<Curriculum, CurriculumError> {
    let r = Renderer { lex: lexicon };
    let inv = &spec.inventory;
    let keep = |o: &str| !spec.exclude.contains(o) && inv.objects.iter().any(|x| x == o);
    let reps = spec.repetitions.max(1);

    for o in &inv.objects {
        r.pos(o)?;
    }

    let mut instances = Vec::new();
    for (phase_idx, &phase) in spec.phases.iter().enumerate() {
        let mut batch: Vec<LearningInstance> = Vec::new();
        match phase {
            Phase::Objects => {
                for o in inv.objects.iter().filter(|o| keep(o)) {
                    for _ in 0..reps {
                        batch.push(LearningInstance::new(
                            scene(vec![entity(1, o, None)], vec![]),
                            r.singular(o, None)?,
                        ));
                    }
                }
            }
            Phase::Colors => {
                for run in inv.colors.iter().filter(|c| keep(&c.object)) {
                    r.check_color(&run.color)?;
                    for _ in 0..run.reps {
                        batch.push(LearningInstance::new(
                            scene(vec![entity(1, &run.object, Some(&run.color))], vec![]),
                            r.singular(&run.object, Some(&run.color))?,
                        ));
                    }
                }
            }
            Phase::Actions => {
                for f in inv
                    .actions
                    .iter()
                    .filter(|f| keep(&f.agent) && f.patient.as_deref().is_none_or(keep))
                {
                    r.check_verb(&f.verb)?;
                    let mut entities = vec![entity(1, &f.agent, None)];
                    let mut text = format!(
                        "{} {}",
                        r.singular(&f.agent, None)?,
                        r.verb_singular(&f.verb)?
                    );
                    if let Some(p) = &f.patient {
                        entities.push(entity(2, p, None));
                        text.push(' ');
                        text.push_str(&r.patient(p)?);
                    }
                    let action = SceneAction {
                        verb: f.verb.clone(),
                        agent: "e1".into(),
                        patient: f.patient.as_ref().map(|_| "e2".to_string()),
                    };
                    for _ in 0..reps {
                        batch.push(LearningInstance::new(
                            scene(entities.clone(), vec![action.clone()]),
                            text.clone(),
                        ));
                    }
                }
            }
            Phase::Plurals => {
                for o in inv.objects.iter().filter(|o| keep(o)) {
                    if r.pos(o)? != PartOfSpeech::Noun && r.pos(o)? != PartOfSpeech::ProperNoun {
                        continue;
                    }
                    let pl = r.plural(o)?.to_lowercase();
                    for (word, n) in [("two", 2), ("many", 3)] {
                        let entities: Vec<Entity> = (1..=n).map(|i| entity(i, o, None)).collect();
                        for _ in 0..reps {
                            batch.push(LearningInstance::new(
                                scene(entities.clone(), vec![]),
                                format!("{word} {pl}"),
                            ));
                        }
                    }
                }
            }
            Phase::CategoryGenerics => {
                for (cat, members) in &inv.categories {
                    for m in members.iter().filter(|m| keep(m)) {
                        batch.push(LearningInstance::new(
                            scene(vec![entity(1, m, None), entity(2, m, None)], vec![]),
                            format!("{} are {}", r.plural(m)?, r.lex.pluralize(cat)),
                        ));
                    }
                }
            }
            Phase::ActionGenerics => {
                for f in inv
                    .action_generics
                    .iter()
                    .filter(|f| keep(&f.agent) && f.patient.as_deref().is_none_or(keep))
                {
                    r.check_verb(&f.verb)?;
                    let mut entities = vec![entity(1, &f.agent, None), entity(2, &f.agent, None)];
                    let mut actions = Vec::new();
                    let mut text = format!("{} {}", r.plural(&f.agent)?, f.verb);
                    match &f.patient {
                        Some(p) => {
                            entities.push(entity(3, p, None));
                            entities.push(entity(4, p, None));
                            for (a, b) in [("e1", "e3"), ("e2", "e4")] {
                                actions.push(SceneAction {
                                    verb: f.verb.clone(),
                                    agent: a.into(),
                                    patient: Some(b.into()),
                                });
                            }
                            text.push(' ');
                            text.push_str(&r.plural(p)?);
                        }
                        None => {
                            for a in ["e1", "e2"] {
                                actions.push(SceneAction {
                                    verb: f.verb.clone(),
                                    agent: a.into(),
                                    patient: None,
                                });
                            }
                        }
                    }
                    batch.push(LearningInstance::new(scene(entities, actions), text));
                }
            }
            Phase::ColorGenerics => {
                for (o, c) in inv.color_generics.iter().filter(|(o, _)| keep(o)) {
                    r.check_color(c)?;
                    batch.push(LearningInstance::new(
                        scene(vec![entity(1, o, Some(c)), entity(2, o, Some(c))], vec![]),
                        format!("{} are {}", r.plural(o)?, c.replace('-', " ")),
                    ));
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(phase_idx as u64);
        batch.shuffle(&mut rng);
        instances.extend(batch);
    }

    Ok(Curriculum {
        name: spec.name.clone(),
        instances,
    })
}
