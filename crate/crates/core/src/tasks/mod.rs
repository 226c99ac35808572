//! The three evaluation tasks: generic color predicates, category inference
//! for novel objects, and the joint animal/food category.

mod chart;

pub use chart::{grouped_bar_chart, BarGroup};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::curriculum::{generate, CurriculumError, CurriculumSpec, Inventory, Phase};
use crate::graph::{ConceptKey, ConceptKind, ConceptNetwork, EdgeLabel};
use crate::lang::Lexicon;
use crate::learner::{LearnError, Learner};
use crate::matrix::{build_matrix, category_similarity, CategoryVectorMode, MatrixError};
use crate::numfmt::format_sig;

pub const TASK1_GENERICS: [&str; 3] = [
    "watermelons are green",
    "papers are white",
    "cookies are light brown",
];

/// Objects whose color strengths task 1 reports.
pub const TASK1_OBJECTS: [&str; 3] = ["cookie", "paper", "watermelon"];

pub const TASK2_CURRICULA: [&str; 3] = [
    "objects-and-kinds",
    "objects-kinds-and-generics",
    "obj-actions-kinds-generics",
];

/// Novel objects and the category each is taught into, in presentation order.
pub const TASK2_NOVEL: [(&str, &str); 3] =
    [("wug", "animal"), ("vonk", "food"), ("snarp", "people")];

pub const CATEGORIES: [&str; 3] = ["animal", "food", "people"];

/// Task-3 conditions: label and which of chicken, beef, cow are taught.
pub const TASK3_CONDITIONS: [(&str, &[&str]); 4] = [
    ("none", &[]),
    ("beef+cow", &["beef", "cow"]),
    ("chicken", &["chicken"]),
    ("chicken+beef+cow", &["chicken", "beef", "cow"]),
];

const TASK3_VARIABLE: [&str; 3] = ["chicken", "beef", "cow"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TaskOptions {
    pub seed: u64,
    pub inventory: Inventory,
    pub category_mode: CategoryVectorMode,
}

impl TaskOptions {
    pub fn with_seed(seed: u64) -> Self {
        TaskOptions {
            seed,
            ..TaskOptions::default()
        }
    }
}

/// One measured value. `before` is set only for before/after measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskRow {
    pub condition: String,
    pub subject: String,
    pub target: String,
    pub metric: String,
    pub before: Option<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskResult {
    pub task: u8,
    pub rows: Vec<TaskRow>,
    pub checks: Vec<Check>,
}

impl TaskResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Value of the row matching (condition, subject, target).
    pub fn value(&self, condition: &str, subject: &str, target: &str) -> Option<f64> {
        self.row(condition, subject, target).map(|r| r.value)
    }

    pub fn row(&self, condition: &str, subject: &str, target: &str) -> Option<&TaskRow> {
        self.rows
            .iter()
            .find(|r| r.condition == condition && r.subject == subject && r.target == target)
    }

    /// The task's table: `task1.csv`, `task2.csv` or `task3.csv` layout.
    pub fn to_csv(&self) -> String {
        let fmt = |x: f64| format_sig(x, 6);
        let mut out = String::new();
        match self.task {
            1 => {
                out.push_str("object,color,before,after\n");
                for r in &self.rows {
                    let before = r.before.map(fmt).unwrap_or_default();
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        r.subject,
                        r.target,
                        before,
                        fmt(r.value)
                    ));
                }
            }
            2 => {
                out.push_str("curriculum,object,animal,food,people\n");
                for (cond, subject) in self.groups() {
                    let v = |c: &str| self.value(&cond, &subject, c).map(fmt).unwrap_or_default();
                    out.push_str(&format!(
                        "{cond},{subject},{},{},{}\n",
                        v("animal"),
                        v("food"),
                        v("people")
                    ));
                }
            }
            _ => {
                out.push_str("condition,animal,food\n");
                for (cond, subject) in self.groups() {
                    let v = |c: &str| self.value(&cond, &subject, c).map(fmt).unwrap_or_default();
                    out.push_str(&format!("{cond},{},{}\n", v("animal"), v("food")));
                }
            }
        }
        out
    }

    /// Distinct (condition, subject) pairs in row order.
    fn groups(&self) -> Vec<(String, String)> {
        let mut seen = Vec::new();
        for r in &self.rows {
            let g = (r.condition.clone(), r.subject.clone());
            if !seen.contains(&g) {
                seen.push(g);
            }
        }
        seen
    }

    /// Grouped bar chart of the task's table.
    pub fn to_svg(&self) -> String {
        match self.task {
            1 => {
                let groups = self
                    .rows
                    .iter()
                    .map(|r| BarGroup {
                        label: format!("{} {}", r.subject, r.target),
                        values: vec![r.before.unwrap_or(0.0), r.value],
                    })
                    .collect::<Vec<_>>();
                grouped_bar_chart("Object-color strength", &["before", "after"], &groups)
            }
            2 => {
                let groups = self
                    .groups()
                    .into_iter()
                    .map(|(cond, subject)| BarGroup {
                        label: format!("{subject} ({cond})"),
                        values: CATEGORIES
                            .iter()
                            .map(|c| self.value(&cond, &subject, c).unwrap_or(0.0))
                            .collect(),
                    })
                    .collect::<Vec<_>>();
                grouped_bar_chart("Novel object to category similarity", &CATEGORIES, &groups)
            }
            _ => {
                let groups = self
                    .groups()
                    .into_iter()
                    .map(|(cond, subject)| BarGroup {
                        label: cond.clone(),
                        values: ["animal", "food"]
                            .iter()
                            .map(|c| self.value(&cond, &subject, c).unwrap_or(0.0))
                            .collect(),
                    })
                    .collect::<Vec<_>>();
                grouped_bar_chart("Wug similarity by condition", &["animal", "food"], &groups)
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("unknown task {0}")]
    UnknownTask(String),
    #[error(transparent)]
    Curriculum(#[from] CurriculumError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub fn run_task(task: u8, opts: &TaskOptions) -> Result<TaskResult, TaskError> {
    match task {
        1 => run_task1(opts),
        2 => run_task2(opts),
        3 => run_task3(opts),
        other => Err(TaskError::UnknownTask(other.to_string())),
    }
}

fn train(spec: &CurriculumSpec, lexicon: &Lexicon) -> Result<Learner, TaskError> {
    let curriculum = generate(spec, lexicon)?;
    let mut learner = Learner::new(lexicon.clone());
    learner.observe_all(&curriculum.instances)?;
    Ok(learner)
}

/// Networks before and after the three color generics.
pub fn task1_networks(opts: &TaskOptions) -> Result<(ConceptNetwork, ConceptNetwork), TaskError> {
    let mut spec =
        CurriculumSpec::new("task1", &[Phase::Objects, Phase::Colors]).with_seed(opts.seed);
    spec.inventory = opts.inventory.clone();
    let mut learner = train(&spec, &Lexicon::default_english())?;
    let before = learner.network().clone();
    for g in TASK1_GENERICS {
        learner.hear(g)?;
    }
    Ok((before, learner.into_network()))
}

/// Edges whose weight or origin differ between two networks, plus edges
/// present in only one of them.
pub fn changed_edges(
    a: &ConceptNetwork,
    b: &ConceptNetwork,
) -> Vec<(ConceptKey, EdgeLabel, ConceptKey)> {
    let (ea, eb) = (a.canonical_edges(), b.canonical_edges());
    let keys: BTreeSet<_> = ea.keys().chain(eb.keys()).collect();
    keys.into_iter()
        .filter(|k| match (ea.get(*k), eb.get(*k)) {
            (Some((wa, ga)), Some((wb, gb))) => wa.to_bits() != wb.to_bits() || ga != gb,
            _ => true,
        })
        .cloned()
        .collect()
}

fn strength(net: &ConceptNetwork, object: &str, color: &str) -> f64 {
    match (
        net.find(object, ConceptKind::Object),
        net.find(color, ConceptKind::Attribute),
    ) {
        (Some(o), Some(c)) => net.get_strength(o, c, EdgeLabel::Is),
        _ => 0.0,
    }
}

pub fn run_task1(opts: &TaskOptions) -> Result<TaskResult, TaskError> {
    let (before, after) = task1_networks(opts)?;

    let mut pairs: Vec<(String, String)> = opts
        .inventory
        .colors
        .iter()
        .filter(|c| TASK1_OBJECTS.contains(&c.object.as_str()))
        .map(|c| (c.object.clone(), c.color.clone()))
        .collect();
    pairs.sort();
    pairs.dedup();

    let rows: Vec<TaskRow> = pairs
        .iter()
        .map(|(o, c)| TaskRow {
            condition: "task1".into(),
            subject: o.clone(),
            target: c.clone(),
            metric: "strength".into(),
            before: Some(strength(&before, o, c)),
            value: strength(&after, o, c),
        })
        .collect();

    let mut checks = Vec::new();
    let taught: Vec<(String, String)> = opts
        .inventory
        .color_generics
        .iter()
        .filter(|(o, _)| TASK1_OBJECTS.contains(&o.as_str()))
        .cloned()
        .collect();
    let raised = rows
        .iter()
        .filter(|r| taught.contains(&(r.subject.clone(), r.target.clone())))
        .all(|r| r.value == 1.0);
    checks.push(Check::new(
        "generic colors reach 1.0",
        raised,
        format!("{} statements", taught.len()),
    ));
    let unchanged = rows
        .iter()
        .filter(|r| !taught.contains(&(r.subject.clone(), r.target.clone())))
        .all(|r| r.before.map(f64::to_bits) == Some(r.value.to_bits()));
    checks.push(Check::new("other colors unchanged", unchanged, ""));
    let mut argmax_ok = true;
    for (o, c) in &taught {
        let best = rows
            .iter()
            .filter(|r| &r.subject == o)
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .map(|r| r.target.as_str());
        argmax_ok &= best == Some(c.as_str());
    }
    checks.push(Check::new("typical color is strongest", argmax_ok, ""));
    let diff = changed_edges(&before, &after).len();
    checks.push(Check::new(
        "only generic edges change",
        diff == taught.len(),
        format!("{diff} edges changed"),
    ));

    Ok(TaskResult {
        task: 1,
        rows,
        checks,
    })
}

fn similarity_rows(
    net: &ConceptNetwork,
    condition: &str,
    subject: &str,
    categories: &[&str],
    mode: CategoryVectorMode,
) -> Result<Vec<TaskRow>, TaskError> {
    let matrix = build_matrix(net);
    let key = ConceptKey {
        kind: ConceptKind::Object,
        name: subject.to_string(),
    };
    categories
        .iter()
        .map(|c| {
            Ok(TaskRow {
                condition: condition.into(),
                subject: subject.into(),
                target: c.to_string(),
                metric: "cosine".into(),
                before: None,
                value: category_similarity(net, &matrix, &key, c, mode)?,
            })
        })
        .collect()
}

/// A Task-2 curriculum's trained network after the three novel generics.
pub fn task2_network(curriculum: &str, opts: &TaskOptions) -> Result<ConceptNetwork, TaskError> {
    let mut spec = CurriculumSpec::builtin(curriculum)?.with_seed(opts.seed);
    spec.inventory = opts.inventory.clone();
    let mut learner = train(&spec, &Lexicon::default_english())?;
    for (novel, category) in TASK2_NOVEL {
        learner.hear(&format!(
            "{}s are {}",
            novel,
            learner.lexicon().pluralize(category)
        ))?;
    }
    Ok(learner.into_network())
}

fn off_category_mass(result: &TaskResult, curriculum: &str, novel: &str, taught: &str) -> f64 {
    CATEGORIES
        .iter()
        .filter(|&&c| c != taught)
        .filter_map(|c| result.value(curriculum, novel, c))
        .sum()
}

pub fn run_task2(opts: &TaskOptions) -> Result<TaskResult, TaskError> {
    let nets = std::thread::scope(|s| {
        let handles: Vec<_> = TASK2_CURRICULA
            .iter()
            .map(|c| s.spawn(move || task2_network(c, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("task thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut rows = Vec::new();
    for (curriculum, net) in TASK2_CURRICULA.iter().zip(&nets) {
        for (novel, _) in TASK2_NOVEL {
            rows.extend(similarity_rows(
                net,
                curriculum,
                novel,
                &CATEGORIES,
                opts.category_mode,
            )?);
        }
    }
    let mut result = TaskResult {
        task: 2,
        rows,
        checks: Vec::new(),
    };

    let mut argmax_ok = true;
    for curriculum in TASK2_CURRICULA {
        for (novel, taught) in TASK2_NOVEL {
            let v = |c: &str| result.value(curriculum, novel, c).unwrap_or(0.0);
            argmax_ok &= CATEGORIES.iter().all(|&c| c == taught || v(taught) > v(c));
        }
    }
    let c1 = TASK2_CURRICULA[0];
    let snarp = |c: &str| result.value(c1, "snarp", c).unwrap_or(f64::NAN);
    let snarp_ok =
        (snarp("people") - 1.0).abs() <= 1e-6 && snarp("animal") == 0.0 && snarp("food") == 0.0;
    let mut mono_ok = true;
    for (novel, taught) in TASK2_NOVEL {
        let masses: Vec<f64> = TASK2_CURRICULA
            .iter()
            .map(|c| off_category_mass(&result, c, novel, taught))
            .collect();
        mono_ok &= masses.windows(2).all(|w| w[0] <= w[1] + 1e-12);
    }
    result.checks = vec![
        Check::new(
            "taught category is most similar",
            argmax_ok,
            "all curricula",
        ),
        Check::new(
            "snarp matches only people in curriculum 1",
            snarp_ok,
            format!("people {:.6}", snarp("people")),
        ),
        Check::new("off-category similarity grows with curriculum", mono_ok, ""),
    ];
    Ok(result)
}

/// A Task-3 condition's trained network after "wugs are animals".
pub fn task3_network(taught: &[&str], opts: &TaskOptions) -> Result<ConceptNetwork, TaskError> {
    let spec = CurriculumSpec::new(
        "task3",
        &[
            Phase::Objects,
            Phase::CategoryGenerics,
            Phase::ActionGenerics,
        ],
    )
    .with_seed(opts.seed)
    .excluding(
        TASK3_VARIABLE
            .iter()
            .copied()
            .filter(|o| !taught.contains(o)),
    );
    let spec = CurriculumSpec {
        inventory: opts.inventory.clone(),
        ..spec
    };
    let mut learner = train(&spec, &Lexicon::default_english())?;
    learner.hear("wugs are animals")?;
    Ok(learner.into_network())
}

pub fn run_task3(opts: &TaskOptions) -> Result<TaskResult, TaskError> {
    let nets = std::thread::scope(|s| {
        let handles: Vec<_> = TASK3_CONDITIONS
            .iter()
            .map(|(_, taught)| s.spawn(move || task3_network(taught, opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("task thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut rows = Vec::new();
    for ((label, _), net) in TASK3_CONDITIONS.iter().zip(&nets) {
        rows.extend(similarity_rows(
            net,
            label,
            "wug",
            &["animal", "food"],
            opts.category_mode,
        )?);
    }
    let mut result = TaskResult {
        task: 3,
        rows,
        checks: Vec::new(),
    };

    let food = |c: &str| result.value(c, "wug", "food").unwrap_or(f64::NAN);
    let animal = |c: &str| result.value(c, "wug", "animal").unwrap_or(f64::NAN);
    let zero_ok = food("none") == 0.0 && food("beef+cow") == 0.0;
    let order_ok = food("chicken") > food("chicken+beef+cow") && food("chicken+beef+cow") > 0.0;
    let animal_ok = TASK3_CONDITIONS.iter().all(|(c, _)| animal(c) > food(c));
    let detail = format!(
        "food: chicken {:.6}, chicken+beef+cow {:.6}",
        food("chicken"),
        food("chicken+beef+cow")
    );
    result.checks = vec![
        Check::new("no food similarity without chicken", zero_ok, ""),
        Check::new("chicken alone links wug to food most", order_ok, detail),
        Check::new("wug closer to animal than food", animal_ok, ""),
    ];
    Ok(result)
}
