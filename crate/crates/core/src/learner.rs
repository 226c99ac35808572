//! Turns (situation, utterance) pairs into concept-network updates.
//!
//! Non-generic utterances nudge associations with the plateauing update.
//! Generic utterances go through [`process_generic`], which maximizes the
//! stated association and handles the two category cases: a new category
//! ("dogs are animals") and a new member of a known category ("wugs are
//! animals"), the latter inheriting the member-average feature vector.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{ConceptId, ConceptKey, ConceptKind, ConceptNetwork, EdgeLabel, GraphError};
use crate::lang::{parse_text, Complement, Lexicon, ParseError, ParsedUtterance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entity {
    pub id: String,
    pub object: String,
    pub color: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SceneAction {
    pub verb: String,
    pub agent: String,
    pub patient: Option<String>,
}

/// Symbolic scene: labeled entities and the actions among them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Situation {
    pub entities: Vec<Entity>,
    pub actions: Vec<SceneAction>,
}

impl Situation {
    pub fn validate(&self) -> Result<(), LearnError> {
        let mut ids = HashSet::new();
        for e in &self.entities {
            if !ids.insert(e.id.as_str()) {
                return Err(LearnError::Situation(format!(
                    "duplicate entity id {}",
                    e.id
                )));
            }
        }
        for a in &self.actions {
            for p in std::iter::once(&a.agent).chain(a.patient.as_ref()) {
                if !ids.contains(p.as_str()) {
                    return Err(LearnError::Situation(format!(
                        "action {} references undeclared entity {p}",
                        a.verb
                    )));
                }
            }
        }
        Ok(())
    }

    fn entity(&self, id: &str) -> Option<&Entity> {
        self.entities.iter().find(|e| e.id == id)
    }

    fn has_object(&self, lemma: &str) -> bool {
        self.entities.iter().any(|e| e.object == lemma)
    }

    fn has_colored(&self, lemma: &str, color: &str) -> bool {
        self.entities
            .iter()
            .any(|e| e.object == lemma && e.color.as_deref() == Some(color))
    }

    fn has_action(&self, verb: &str, agent: &str, patient: Option<&str>) -> bool {
        self.actions.iter().any(|a| {
            a.verb == verb
                && self.entity(&a.agent).is_some_and(|e| e.object == agent)
                && match patient {
                    None => true,
                    Some(p) => a
                        .patient
                        .as_deref()
                        .and_then(|id| self.entity(id))
                        .is_some_and(|e| e.object == p),
                }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearningInstance {
    pub situation: Situation,
    pub utterance: String,
}

impl LearningInstance {
    pub fn new(situation: Situation, utterance: impl Into<String>) -> Self {
        LearningInstance {
            situation,
            utterance: utterance.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeUpdate {
    pub source: ConceptKey,
    pub label: EdgeLabel,
    pub target: ConceptKey,
    pub old: f64,
    pub new: f64,
    pub generic: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservationReport {
    pub index: usize,
    pub utterance: String,
    pub generic: bool,
    pub touched: Vec<ConceptKey>,
    pub updates: Vec<EdgeUpdate>,
    /// Lemmas the utterance names but the scene does not show.
    pub mismatches: Vec<String>,
}

/// One journal line: index, genericity, then each edge write as `old -> new`.
impl fmt::Display for ObservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\tgeneric={}\t{:?}",
            self.index,
            u8::from(self.generic),
            self.utterance
        )?;
        for u in &self.updates {
            write!(
                f,
                "\t{} {} {} {} -> {}{}",
                u.source,
                u.label,
                u.target,
                u.old,
                u.new,
                if u.generic { " (generic)" } else { "" }
            )?;
        }
        for m in &self.mismatches {
            write!(f, "\tmismatch:{m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("cannot parse {utterance:?}: {source}")]
    Parse {
        utterance: String,
        source: ParseError,
    },
    #[error("ill-formed situation: {0}")]
    Situation(String),
    #[error("cannot learn from {0:?}: neither noun is known")]
    Unlearnable(String),
    #[error("not a generic utterance")]
    NotGeneric,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

struct Recorder<'a> {
    net: &'a mut ConceptNetwork,
    report: ObservationReport,
}

impl<'a> Recorder<'a> {
    fn concept(&mut self, name: &str, kind: ConceptKind) -> Result<ConceptId, GraphError> {
        let id = self.net.add_concept(name, kind)?;
        let key = ConceptKey::new(kind, name);
        if !self.report.touched.contains(&key) {
            self.report.touched.push(key);
        }
        Ok(id)
    }

    fn write(
        &mut self,
        src: ConceptId,
        dst: ConceptId,
        label: EdgeLabel,
        how: Write,
    ) -> Result<(), GraphError> {
        let old = self.net.get_strength(src, dst, label);
        let new = match how {
            Write::Observe => self.net.observe_association(src, dst, label)?,
            Write::Generic => self.net.assert_generic(src, dst, label)?,
            Write::Inferred(w) => self.net.set_inferred(src, dst, label, w)?,
        };
        let key = |id| self.net.node(id).expect("node just used").key();
        self.report.updates.push(EdgeUpdate {
            source: key(src),
            label,
            target: key(dst),
            old,
            new,
            generic: matches!(how, Write::Generic),
        });
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Write {
    Observe,
    Generic,
    Inferred(f64),
}

/// Lemmas the utterance commits to that the scene does not show.
fn scene_mismatches(parsed: &ParsedUtterance, scene: &Situation) -> Vec<String> {
    let mut out = Vec::new();
    let complement_np = match &parsed.predicate {
        Some(p) => match p.complement {
            Complement::Noun(i) => Some(i),
            Complement::Color(_) => None,
        },
        None => None,
    };
    for (i, np) in parsed.noun_phrases.iter().enumerate() {
        if Some(i) == complement_np {
            continue;
        }
        if !scene.has_object(&np.lemma) {
            out.push(np.lemma.clone());
        } else if let Some(color) = &np.modifier {
            if !scene.has_colored(&np.lemma, color) {
                out.push(format!("{color} {}", np.lemma));
            }
        }
    }
    if let Some(p) = &parsed.predicate {
        if let Complement::Color(color) = &p.complement {
            let subject = &parsed.noun_phrases[p.subject].lemma;
            if scene.has_object(subject) && !scene.has_colored(subject, color) {
                out.push(format!("{color} {subject}"));
            }
        }
    }
    if let Some(v) = &parsed.verb {
        let agent = &parsed.noun_phrases[v.subject].lemma;
        let patient = v.object.map(|o| parsed.noun_phrases[o].lemma.as_str());
        if !scene.has_action(&v.lemma, agent, patient) {
            out.push(v.lemma.clone());
        }
    }
    out
}

/// Learns from one instance. Scene/utterance mismatches are reported, not fatal.
pub fn observe(
    net: &mut ConceptNetwork,
    lexicon: &Lexicon,
    instance: &LearningInstance,
) -> Result<ObservationReport, LearnError> {
    instance.situation.validate()?;
    let parsed = parse_text(&instance.utterance, lexicon).map_err(|source| LearnError::Parse {
        utterance: instance.utterance.clone(),
        source,
    })?;
    let mut report = if parsed.is_generic {
        process_generic(net, &parsed, &instance.situation)?
    } else {
        observe_plain(net, &parsed)?
    };
    report.utterance = instance.utterance.clone();
    report.mismatches = scene_mismatches(&parsed, &instance.situation);
    Ok(report)
}

fn observe_plain(
    net: &mut ConceptNetwork,
    parsed: &ParsedUtterance,
) -> Result<ObservationReport, LearnError> {
    let mut rec = Recorder {
        net,
        report: ObservationReport::default(),
    };
    let mut nouns = Vec::with_capacity(parsed.noun_phrases.len());
    for np in &parsed.noun_phrases {
        nouns.push(rec.concept(&np.lemma, ConceptKind::Object)?);
    }
    for (np, &obj) in parsed.noun_phrases.iter().zip(&nouns) {
        // Counted plurals only refresh the node.
        if np.quantified {
            continue;
        }
        if let Some(color) = &np.modifier {
            let c = rec.concept(color, ConceptKind::Attribute)?;
            rec.write(obj, c, EdgeLabel::Is, Write::Observe)?;
        }
    }
    if let Some(v) = &parsed.verb {
        let action = rec.concept(&v.lemma, ConceptKind::Action)?;
        rec.write(nouns[v.subject], action, EdgeLabel::Slot1, Write::Observe)?;
        if let Some(o) = v.object {
            rec.write(nouns[o], action, EdgeLabel::Slot2, Write::Observe)?;
        }
    }
    Ok(rec.report)
}

/// Member-average outgoing weights of `category`, keyed by (target, label).
pub fn member_average(
    net: &ConceptNetwork,
    category: ConceptId,
) -> Result<BTreeMap<(ConceptId, EdgeLabel), f64>, GraphError> {
    let members: Vec<ConceptId> = net.members_of(category)?.iter().map(|n| n.id).collect();
    let mut sums: BTreeMap<(ConceptId, EdgeLabel), f64> = BTreeMap::new();
    for &m in &members {
        for n in net.neighbors(m)? {
            *sums.entry((n.node.id, n.label)).or_insert(0.0) += n.weight;
        }
    }
    let count = members.len() as f64;
    for w in sums.values_mut() {
        *w /= count;
    }
    Ok(sums)
}

/// Applies a generic utterance. All writes maximize, except the features a
/// novel category member inherits, which are written as revisable inferences.
pub fn process_generic(
    net: &mut ConceptNetwork,
    parsed: &ParsedUtterance,
    _situation: &Situation,
) -> Result<ObservationReport, LearnError> {
    if !parsed.is_generic {
        return Err(LearnError::NotGeneric);
    }
    let mut rec = Recorder {
        net,
        report: ObservationReport {
            generic: true,
            ..ObservationReport::default()
        },
    };
    let nps = &parsed.noun_phrases;

    if let Some(v) = &parsed.verb {
        let subject = rec.concept(&nps[v.subject].lemma, ConceptKind::Object)?;
        let action = rec.concept(&v.lemma, ConceptKind::Action)?;
        rec.write(subject, action, EdgeLabel::Slot1, Write::Generic)?;
        if let Some(o) = v.object {
            let object = rec.concept(&nps[o].lemma, ConceptKind::Object)?;
            rec.write(object, action, EdgeLabel::Slot2, Write::Generic)?;
        }
    } else if let Some(p) = &parsed.predicate {
        let subject_name = &nps[p.subject].lemma;
        match &p.complement {
            Complement::Color(color) => {
                let subject = rec.concept(subject_name, ConceptKind::Object)?;
                let c = rec.concept(color, ConceptKind::Attribute)?;
                rec.write(subject, c, EdgeLabel::Is, Write::Generic)?;
            }
            Complement::Noun(ci) => {
                let category_name = &nps[*ci].lemma;
                let known_subject = rec.net.find(subject_name, ConceptKind::Object);
                let known_category = rec.net.find(category_name, ConceptKind::Category);
                match (known_subject, known_category) {
                    (None, None) => {
                        return Err(LearnError::Unlearnable(format!(
                            "{} are {}",
                            subject_name, category_name
                        )))
                    }
                    (None, Some(category)) => {
                        // Snapshot before the novel member joins.
                        let inherited = member_average(rec.net, category)?;
                        let subject = rec.concept(subject_name, ConceptKind::Object)?;
                        rec.concept(category_name, ConceptKind::Category)?;
                        rec.write(subject, category, EdgeLabel::Is, Write::Generic)?;
                        for ((target, label), w) in inherited {
                            if w > 0.0
                                && target != subject
                                && !(target == category && label == EdgeLabel::Is)
                            {
                                rec.write(subject, target, label, Write::Inferred(w))?;
                            }
                        }
                    }
                    (Some(subject), _) => {
                        rec.concept(subject_name, ConceptKind::Object)?;
                        let category = rec.concept(category_name, ConceptKind::Category)?;
                        rec.write(subject, category, EdgeLabel::Is, Write::Generic)?;
                    }
                }
            }
        }
    } else {
        // Bare "bears": nothing to associate.
        for np in nps {
            rec.concept(&np.lemma, ConceptKind::Object)?;
        }
    }
    Ok(rec.report)
}

/// Owns a network and a lexicon and numbers the instances it consumes.
#[derive(Clone, Debug)]
pub struct Learner {
    lexicon: Lexicon,
    network: ConceptNetwork,
    seen: usize,
}

impl Learner {
    pub fn new(lexicon: Lexicon) -> Self {
        Self::with_network(lexicon, ConceptNetwork::new())
    }

    pub fn with_network(lexicon: Lexicon, network: ConceptNetwork) -> Self {
        Learner {
            lexicon,
            network,
            seen: 0,
        }
    }

    pub fn observe(
        &mut self,
        instance: &LearningInstance,
    ) -> Result<ObservationReport, LearnError> {
        let mut report = observe(&mut self.network, &self.lexicon, instance)?;
        report.index = self.seen;
        self.seen += 1;
        Ok(report)
    }

    /// Parses `utterance` against an empty scene; handy for generics.
    pub fn hear(&mut self, utterance: &str) -> Result<ObservationReport, LearnError> {
        self.observe(&LearningInstance::new(Situation::default(), utterance))
    }

    pub fn observe_all<'i>(
        &mut self,
        instances: impl IntoIterator<Item = &'i LearningInstance>,
    ) -> Result<Vec<ObservationReport>, LearnError> {
        instances.into_iter().map(|i| self.observe(i)).collect()
    }

    pub fn network(&self) -> &ConceptNetwork {
        &self.network
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn into_network(self) -> ConceptNetwork {
        self.network
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entity(id: &str, object: &str, color: Option<&str>) -> Entity {
        Entity {
            id: id.into(),
            object: object.into(),
            color: color.map(str::to_string),
        }
    }

    fn learner() -> Learner {
        Learner::new(Lexicon::default_english())
    }

    fn strength(
        net: &ConceptNetwork,
        s: (&str, ConceptKind),
        l: EdgeLabel,
        d: (&str, ConceptKind),
    ) -> f64 {
        match (net.find(s.0, s.1), net.find(d.0, d.1)) {
            (Some(a), Some(b)) => net.get_strength(a, b, l),
            _ => 0.0,
        }
    }

    use ConceptKind::{Action as A, Attribute as At, Category as C, Object as O};

    #[test]
    fn color_observation() {
        let mut l = learner();
        let scene = Situation {
            entities: vec![entity("e1", "cookie", Some("blue"))],
            actions: vec![],
        };
        let r = l
            .observe(&LearningInstance::new(scene, "a blue cookie"))
            .unwrap();
        assert!(!r.generic);
        assert!(r.mismatches.is_empty());
        assert_eq!(r.updates.len(), 1);
        assert_eq!((r.updates[0].old, r.updates[0].new), (0.0, 0.2));
        assert_eq!(
            strength(l.network(), ("cookie", O), EdgeLabel::Is, ("blue", At)),
            0.2
        );
    }

    #[test]
    fn transitive_frame_uses_both_slots() {
        let mut l = learner();
        let scene = Situation {
            entities: vec![entity("e1", "mom", None), entity("e2", "juice", None)],
            actions: vec![SceneAction {
                verb: "drink".into(),
                agent: "e1".into(),
                patient: Some("e2".into()),
            }],
        };
        let r = l
            .observe(&LearningInstance::new(scene, "Mom drinks juice"))
            .unwrap();
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        let net = l.network();
        assert_eq!(
            strength(net, ("mom", O), EdgeLabel::Slot1, ("drink", A)),
            0.2
        );
        assert_eq!(
            strength(net, ("juice", O), EdgeLabel::Slot2, ("drink", A)),
            0.2
        );
        assert_eq!(
            strength(net, ("juice", O), EdgeLabel::Slot1, ("drink", A)),
            0.0
        );
    }

    #[test]
    fn counted_plural_adds_no_edges() {
        let mut l = learner();
        let scene = Situation {
            entities: vec![entity("e1", "ball", None), entity("e2", "ball", None)],
            actions: vec![],
        };
        let r = l
            .observe(&LearningInstance::new(scene, "two balls"))
            .unwrap();
        assert!(r.updates.is_empty());
        assert!(l.network().find("ball", O).is_some());
        assert_eq!(l.network().edge_count(), 0);
    }

    #[test]
    fn mismatch_reported_but_learned() {
        let mut l = learner();
        let scene = Situation {
            entities: vec![entity("e1", "truck", Some("red"))],
            actions: vec![],
        };
        let r = l
            .observe(&LearningInstance::new(scene, "a blue cookie"))
            .unwrap();
        assert_eq!(r.mismatches, ["cookie"]);
        assert_eq!(
            strength(l.network(), ("cookie", O), EdgeLabel::Is, ("blue", At)),
            0.2
        );
    }

    #[test]
    fn generic_color_predicate() {
        let mut l = learner();
        l.hear("a green watermelon").unwrap();
        let r = l.hear("watermelons are green").unwrap();
        assert!(r.generic);
        assert_eq!((r.updates[0].old, r.updates[0].new), (0.2, 1.0));
        assert_eq!(
            strength(l.network(), ("watermelon", O), EdgeLabel::Is, ("green", At)),
            1.0
        );
    }

    #[test]
    fn generic_action_with_object() {
        let mut l = learner();
        l.hear("cats eat cookies").unwrap();
        let net = l.network();
        assert_eq!(strength(net, ("cat", O), EdgeLabel::Slot1, ("eat", A)), 1.0);
        assert_eq!(
            strength(net, ("cookie", O), EdgeLabel::Slot2, ("eat", A)),
            1.0
        );
    }

    #[test]
    fn new_category_from_known_member() {
        let mut l = learner();
        l.hear("a dog").unwrap();
        l.hear("dogs are animals").unwrap();
        let net = l.network();
        let animal = net.find("animal", C).expect("category created");
        assert_eq!(strength(net, ("dog", O), EdgeLabel::Is, ("animal", C)), 1.0);
        assert_eq!(net.members_of(animal).unwrap().len(), 1);
    }

    #[test]
    fn both_unknown_is_unlearnable() {
        let mut l = learner();
        assert!(matches!(
            l.hear("wugs are animals"),
            Err(LearnError::Unlearnable(_))
        ));
    }

    #[test]
    fn novel_member_inherits_member_average() {
        let mut l = learner();
        for s in [
            "a dog",
            "a cat",
            "dogs are animals",
            "cats are animals",
            "dogs sit",
            "a red dog",
        ] {
            l.hear(s).unwrap();
        }
        let r = l.hear("wugs are animals").unwrap();
        assert!(r.updates[0].generic);
        let net = l.network();
        assert_eq!(strength(net, ("wug", O), EdgeLabel::Is, ("animal", C)), 1.0);
        assert_eq!(strength(net, ("wug", O), EdgeLabel::Slot1, ("sit", A)), 0.5);
        assert_eq!(strength(net, ("wug", O), EdgeLabel::Is, ("red", At)), 0.1);
        let wug = net.find("wug", O).unwrap();
        let sit = net.find("sit", A).unwrap();
        assert!(!net.edge(wug, sit, EdgeLabel::Slot1).unwrap().generic_origin);
        assert_eq!(net.neighbors(wug).unwrap().len(), 3);
    }

    #[test]
    fn inherited_features_do_not_track_later_members() {
        let mut l = learner();
        for s in [
            "a dog",
            "dogs are animals",
            "dogs sit",
            "wugs are animals",
            "a cat",
            "cats walk",
            "cats are animals",
        ] {
            l.hear(s).unwrap();
        }
        let net = l.network();
        assert_eq!(strength(net, ("wug", O), EdgeLabel::Slot1, ("sit", A)), 1.0);
        assert_eq!(
            strength(net, ("wug", O), EdgeLabel::Slot1, ("walk", A)),
            0.0
        );
    }

    #[test]
    fn shared_member_in_two_categories() {
        let mut l = learner();
        for s in ["a chicken", "chickens are animals", "chickens are foods"] {
            l.hear(s).unwrap();
        }
        let net = l.network();
        let chicken = net.find("chicken", O).unwrap();
        for cat in ["animal", "food"] {
            let c = net.find(cat, C).unwrap();
            assert!(net.members_of(c).unwrap().iter().any(|n| n.id == chicken));
        }
    }

    #[test]
    fn situation_validation() {
        let dup = Situation {
            entities: vec![entity("e1", "dog", None), entity("e1", "cat", None)],
            actions: vec![],
        };
        assert!(dup.validate().is_err());
        let dangling = Situation {
            entities: vec![entity("e1", "dog", None)],
            actions: vec![SceneAction {
                verb: "eat".into(),
                agent: "e1".into(),
                patient: Some("e9".into()),
            }],
        };
        assert!(dangling.validate().is_err());
    }

    #[test]
    fn parse_failure_is_an_error() {
        let mut l = learner();
        assert!(matches!(l.hear("dog the"), Err(LearnError::Parse { .. })));
    }

    #[test]
    fn journal_line() {
        let mut l = learner();
        let r = l.hear("a blue cookie").unwrap();
        let line = r.to_string();
        assert!(
            line.starts_with("0\tgeneric=0\t\"a blue cookie\""),
            "{line}"
        );
        assert!(
            line.contains("object/cookie is attribute/blue 0 -> 0.2"),
            "{line}"
        );
        assert!(line.contains("mismatch:cookie"), "{line}");
    }
}
