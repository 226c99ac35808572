use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use genlearn::curriculum::{generate, load_curriculum, CurriculumSpec};
use genlearn::graph::{load_network, save_network, PersistError};
use genlearn::matrix::{
    agglomerative_order, build_matrix, category_similarity, cosine_similarity, membership,
    CategoryVectorMode, ConceptMatrix, ConceptVector,
};
use genlearn::tasks::{run_task, TaskOptions};
use genlearn::{ConceptKey, ConceptKind, ConceptNetwork, Learner, Lexicon};

#[derive(Parser)]
#[command(
    name = "genlearn",
    version,
    about = "Learn and inspect concept networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a network on a curriculum file or a built-in curriculum.
    Learn {
        /// Path to a curriculum file, or `builtin:NAME`.
        #[arg(long)]
        curriculum: String,
        /// Where to write the trained network.
        #[arg(long)]
        network: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print one journal line per instance to stdout.
        #[arg(long)]
        trace: bool,
    },
    /// List a concept's outgoing and incoming edges.
    Query {
        #[arg(long)]
        network: PathBuf,
        /// `name` or `kind/name`.
        concept: String,
    },
    /// Cosine similarity of two concepts; categories use their member mean.
    Similar {
        #[arg(long)]
        network: PathBuf,
        a: String,
        b: String,
    },
    /// Run an evaluation task and write its table and chart.
    RunTask {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        task: u8,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the concept matrix or its clustering.
    Export {
        #[arg(long)]
        network: PathBuf,
        what: ExportKind,
        /// Output directory; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Matrix,
    Clusters,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Learn {
            curriculum,
            network,
            seed,
            trace,
        } => cmd_learn(&curriculum, &network, seed, trace),
        Command::Query { network, concept } => cmd_query(&network, &concept),
        Command::Similar { network, a, b } => cmd_similar(&network, &a, &b),
        Command::RunTask { task, out, seed } => cmd_run_task(task, &out, seed),
        Command::Export { network, what, out } => cmd_export(&network, what, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn cmd_learn(source: &str, out: &Path, seed: u64, trace: bool) -> CmdResult {
    let lexicon = Lexicon::default_english();
    let curriculum = match source.strip_prefix("builtin:") {
        Some(name) => {
            let spec = CurriculumSpec::builtin(name)
                .map_err(|e| Failure::Usage(e.to_string()))?
                .with_seed(seed);
            generate(&spec, &lexicon).map_err(|e| Failure::Usage(e.to_string()))?
        }
        None => {
            let path = Path::new(source);
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            load_curriculum(&text, &lexicon)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
    };

    let mut learner = Learner::new(lexicon);
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    for inst in &curriculum.instances {
        let report = learner
            .observe(inst)
            .map_err(|e| Failure::Usage(format!("instance {:?}: {e}", inst.utterance)))?;
        if trace {
            writeln!(stdout, "{report}").map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    let net = learner.into_network();
    let file = fs::File::create(out).map_err(|e| Failure::io(out, e))?;
    save_network(&net, io::BufWriter::new(file)).map_err(|e| Failure::io(out, e))?;
    eprintln!(
        "learned {} instances: {} concepts, {} edges -> {}",
        curriculum.instances.len(),
        net.node_count(),
        net.edge_count(),
        out.display()
    );
    Ok(())
}

fn open_network(path: &Path) -> Result<ConceptNetwork, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::io(path, e))?;
    load_network(BufReader::new(file)).map_err(|e| match e {
        PersistError::Io(e) => Failure::io(path, e),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })
}

/// Accepts `kind/name`, or a bare name looked up in object, attribute,
/// action, category order.
fn resolve(net: &ConceptNetwork, spec: &str) -> Result<ConceptKey, Failure> {
    let key = if spec.contains('/') {
        let key: ConceptKey = spec.parse().map_err(|e| Failure::Usage(format!("{e}")))?;
        net.find_key(&key).map(|_| key)
    } else {
        ConceptKind::ALL.into_iter().find_map(|kind| {
            net.find(spec, kind).map(|_| ConceptKey {
                kind,
                name: spec.to_string(),
            })
        })
    };
    key.ok_or_else(|| Failure::Usage(format!("unknown concept {spec:?}")))
}

fn cmd_query(path: &Path, concept: &str) -> CmdResult {
    let net = open_network(path)?;
    let key = resolve(&net, concept)?;
    let id = net.find_key(&key).expect("resolved concept exists");
    let fmt_w = |w: f64| genlearn::format_sig(w, 6);
    let mut out = String::new();
    for n in net.neighbors(id).expect("valid id") {
        let flag = if n.generic_origin { "\tgeneric" } else { "" };
        out.push_str(&format!(
            "-> {}\t{}\t{}{flag}\n",
            n.node.key(),
            n.label,
            fmt_w(n.weight)
        ));
    }
    for n in net.incoming(id).expect("valid id") {
        let flag = if n.generic_origin { "\tgeneric" } else { "" };
        out.push_str(&format!(
            "<- {}\t{}\t{}{flag}\n",
            n.node.key(),
            n.label,
            fmt_w(n.weight)
        ));
    }
    print!("{out}");
    Ok(())
}

fn vector_of(net: &ConceptNetwork, matrix: &ConceptMatrix, key: &ConceptKey) -> ConceptVector {
    if key.kind == ConceptKind::Category {
        let members = membership(net, &key.name);
        if let Ok(v) = matrix.category_vector(&key.name, &members) {
            return v;
        }
        return ConceptVector::zeros(matrix.columns().len());
    }
    matrix
        .concept_vector(key)
        .expect("resolved concept has a matrix row")
}

fn cmd_similar(path: &Path, a: &str, b: &str) -> CmdResult {
    let net = open_network(path)?;
    let (ka, kb) = (resolve(&net, a)?, resolve(&net, b)?);
    let matrix = build_matrix(&net);
    let sim = match (
        ka.kind == ConceptKind::Category,
        kb.kind == ConceptKind::Category,
    ) {
        (false, true) | (true, false) => {
            let (concept, category) = if kb.kind == ConceptKind::Category {
                (&ka, &kb)
            } else {
                (&kb, &ka)
            };
            category_similarity(
                &net,
                &matrix,
                concept,
                &category.name,
                CategoryVectorMode::default(),
            )
        }
        _ => cosine_similarity(
            &vector_of(&net, &matrix, &ka),
            &vector_of(&net, &matrix, &kb),
        ),
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{sim:.6}");
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn cmd_run_task(task: u8, out: &Path, seed: u64) -> CmdResult {
    let result =
        run_task(task, &TaskOptions::with_seed(seed)).map_err(|e| Failure::Usage(e.to_string()))?;
    fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    write_file(&out.join(format!("task{task}.csv")), &result.to_csv())?;
    write_file(&out.join(format!("task{task}.svg")), &result.to_svg())?;
    for check in &result.checks {
        println!("{check}");
    }
    let status = if result.passed() { "PASS" } else { "FAIL" };
    println!("{status} task {task}");
    Ok(())
}

fn cmd_export(path: &Path, what: ExportKind, out: Option<&Path>) -> CmdResult {
    let net = open_network(path)?;
    let matrix = build_matrix(&net);
    let (name, text) = match what {
        ExportKind::Matrix => ("matrix.csv", matrix.to_csv()),
        ExportKind::Clusters => ("clusters.txt", agglomerative_order(&matrix).to_text()),
    };
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
            write_file(&dir.join(name), &text)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
