//! Plain-text curriculum files.
//!
//! ```text
//! curriculum demo
//! # comment
//! instance
//!   scene: entity e1 mom ; entity e2 ball color=red ; action roll agent=e1 patient=e2
//!   say: Mom rolls a red ball
//! ```

use super::{Curriculum, CurriculumError};
use crate::lang::{parse_text, Lexicon};
use crate::learner::{Entity, LearningInstance, SceneAction, Situation};

fn err(line: usize, reason: impl Into<String>) -> CurriculumError {
    CurriculumError::Parse {
        line,
        reason: reason.into(),
    }
}

pub fn save_curriculum(curriculum: &Curriculum) -> String {
    let mut out = String::new();
    if !curriculum.name.is_empty() {
        out.push_str(&format!("curriculum {}\n", curriculum.name));
    }
    for inst in &curriculum.instances {
        out.push_str("\ninstance\n  scene:");
        let mut items = Vec::new();
        for e in &inst.situation.entities {
            let mut s = format!("entity {} {}", e.id, e.object);
            if let Some(c) = &e.color {
                s.push_str(&format!(" color={c}"));
            }
            items.push(s);
        }
        for a in &inst.situation.actions {
            let mut s = format!("action {} agent={}", a.verb, a.agent);
            if let Some(p) = &a.patient {
                s.push_str(&format!(" patient={p}"));
            }
            items.push(s);
        }
        if !items.is_empty() {
            out.push(' ');
            out.push_str(&items.join(" ; "));
        }
        out.push_str(&format!("\n  say: {}\n", inst.utterance));
    }
    out
}

struct Pending {
    line: usize,
    situation: Situation,
    utterance: Option<String>,
}

/// Parses and checks a curriculum file: every utterance must parse, every
/// verb and color must be in `lexicon`, and every scene must be well formed.
pub fn load_curriculum(text: &str, lexicon: &Lexicon) -> Result<Curriculum, CurriculumError> {
    let mut name = String::new();
    let mut instances = Vec::new();
    let mut pending: Option<Pending> = None;

    let finish = |p: Pending, out: &mut Vec<LearningInstance>| -> Result<(), CurriculumError> {
        let utterance = p
            .utterance
            .ok_or_else(|| err(p.line, "instance has no say: line"))?;
        p.situation
            .validate()
            .map_err(|e| err(p.line, e.to_string()))?;
        out.push(LearningInstance::new(p.situation, utterance));
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("curriculum ") {
            if pending.is_some() || !instances.is_empty() || !name.is_empty() {
                return Err(err(line_no, "curriculum header must come first"));
            }
            name = rest.trim().to_string();
        } else if line == "instance" {
            if let Some(p) = pending.take() {
                finish(p, &mut instances)?;
            }
            pending = Some(Pending {
                line: line_no,
                situation: Situation::default(),
                utterance: None,
            });
        } else if let Some(rest) = line.strip_prefix("scene:") {
            let p = pending
                .as_mut()
                .ok_or_else(|| err(line_no, "scene: outside an instance"))?;
            parse_scene(rest, lexicon, &mut p.situation).map_err(|r| err(line_no, r))?;
        } else if let Some(rest) = line.strip_prefix("say:") {
            let p = pending
                .as_mut()
                .ok_or_else(|| err(line_no, "say: outside an instance"))?;
            if p.utterance.is_some() {
                return Err(err(line_no, "instance has two say: lines"));
            }
            let utterance = rest.trim().to_string();
            parse_text(&utterance, lexicon).map_err(|e| err(line_no, e.to_string()))?;
            p.utterance = Some(utterance);
        } else {
            let word = line.split_whitespace().next().unwrap_or(line);
            return Err(err(line_no, format!("unknown record {word:?}")));
        }
    }
    if let Some(p) = pending.take() {
        finish(p, &mut instances)?;
    }
    Ok(Curriculum { name, instances })
}

fn parse_scene(text: &str, lexicon: &Lexicon, scene: &mut Situation) -> Result<(), String> {
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let mut words = item.split_whitespace();
        match words.next() {
            Some("entity") => {
                let id = words.next().ok_or("entity needs an id")?;
                let object = words.next().ok_or("entity needs an object")?;
                let mut color = None;
                for w in words {
                    let c = w
                        .strip_prefix("color=")
                        .ok_or_else(|| format!("unexpected {w:?} in entity"))?;
                    if !lexicon.has_color(c) {
                        return Err(format!("unknown color {c:?}"));
                    }
                    color = Some(c.to_string());
                }
                scene.entities.push(Entity {
                    id: id.into(),
                    object: object.into(),
                    color,
                });
            }
            Some("action") => {
                let verb = words.next().ok_or("action needs a verb")?;
                if !lexicon.has_verb(verb) {
                    return Err(format!("unknown verb {verb:?}"));
                }
                let (mut agent, mut patient) = (None, None);
                for w in words {
                    if let Some(a) = w.strip_prefix("agent=") {
                        agent = Some(a.to_string());
                    } else if let Some(p) = w.strip_prefix("patient=") {
                        patient = Some(p.to_string());
                    } else {
                        return Err(format!("unexpected {w:?} in action"));
                    }
                }
                scene.actions.push(SceneAction {
                    verb: verb.into(),
                    agent: agent.ok_or("action needs agent=")?,
                    patient,
                });
            }
            Some(other) => return Err(format!("unknown scene item {other:?}")),
            None => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curriculum::{generate, CurriculumSpec};

    const SAMPLE: &str = "\
curriculum demo
# a comment
instance
  scene: entity e1 mom ; entity e2 ball color=red ; action roll agent=e1 patient=e2
  say: Mom rolls a red ball

instance
  scene:
  say: wugs are animals
";

    #[test]
    fn loads_sample() {
        let c = load_curriculum(SAMPLE, &Lexicon::default_english()).unwrap();
        assert_eq!(c.name, "demo");
        assert_eq!(c.instances.len(), 2);
        let s = &c.instances[0].situation;
        assert_eq!(s.entities[1].color.as_deref(), Some("red"));
        assert_eq!(s.actions[0].patient.as_deref(), Some("e2"));
        assert!(c.instances[1].situation.entities.is_empty());
    }

    #[test]
    fn round_trips_generated() {
        let lex = Lexicon::default_english();
        let c = generate(
            &CurriculumSpec::builtin("standard").unwrap().with_seed(3),
            &lex,
        )
        .unwrap();
        let text = save_curriculum(&c);
        assert_eq!(load_curriculum(&text, &lex).unwrap(), c);
    }

    #[test]
    fn unknown_verb_names_line_and_token() {
        let bad = SAMPLE.replace("action roll", "action bounce");
        let e = load_curriculum(&bad, &Lexicon::default_english()).unwrap_err();
        let msg = e.to_string();
        assert!(
            msg.starts_with("line 4:") && msg.contains("bounce"),
            "{msg}"
        );
    }

    #[test]
    fn bad_utterance_and_structure() {
        let lex = Lexicon::default_english();
        let bad = SAMPLE.replace("Mom rolls a red ball", "Mom rolls a glorp");
        let msg = load_curriculum(&bad, &lex).unwrap_err().to_string();
        assert!(msg.starts_with("line 5:") && msg.contains("glorp"), "{msg}");

        let missing = "instance\n  scene: entity e1 dog\n";
        assert!(load_curriculum(missing, &lex).is_err());
        let dangling = "instance\n  scene: action walk agent=e9\n  say: a dog walks\n";
        assert!(load_curriculum(dangling, &lex).is_err());
        assert!(load_curriculum("bogus\n", &lex).is_err());
        assert!(load_curriculum("say: a dog\n", &lex).is_err());
    }
}
