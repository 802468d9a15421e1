use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use l6n1_core::generator::EnumerationFilter;
use l6n1_core::link_invariants::{
    is_l6n1_capped, jones_capped, kauffman_bracket_capped, InvariantError, LaurentPolynomial, DEFAULT_CROSSING_CAP,
};
use l6n1_core::reduction::{classify_irreducible, reduce, ReductionError};
use l6n1_core::resolver::{resolve_l6n1, ResolveError};
use l6n1_core::{
    enumerate_projections, parse_diagram, parse_projection, random_projection, serialize_diagram, serialize_projection,
    Diagram, Projection,
};

const CAP_VAR: &str = "L6N1_MAX_CROSSINGS";

/// Reduce projections of three-component links and resolve them into L6n1.
#[derive(Parser)]
#[command(name = "l6n1", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a projection and report whether it is pairwise crossing.
    Check { file: PathBuf },
    /// Reduce a projection to P1 or P2.
    Reduce {
        file: PathBuf,
        /// Write the reduction trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Resolve a pairwise-crossing projection into an L6n1 diagram.
    Resolve {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        cap: Cap,
    },
    /// Report invariants of a diagram and whether it is L6n1.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        cap: Cap,
    },
    /// Print invariants of a diagram.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        bracket: bool,
        #[arg(long)]
        jones: bool,
        #[arg(long)]
        linking: bool,
        /// Render polynomials in t = A^-4.
        #[arg(long)]
        t: bool,
        #[command(flatten)]
        cap: Cap,
    },
    /// List projection classes with a given number of vertices.
    Enumerate {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        pairwise_crossing: bool,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Generate a random pairwise-crossing projection.
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
struct Cap {
    /// Largest diagram the invariant engine accepts (default 20, or the
    /// L6N1_MAX_CROSSINGS environment variable).
    #[arg(long)]
    max_crossings: Option<usize>,
}

impl Cap {
    fn get(&self) -> anyhow::Result<usize> {
        if let Some(n) = self.max_crossings {
            return Ok(n);
        }
        match std::env::var(CAP_VAR) {
            Ok(v) => v.trim().parse().with_context(|| format!("{CAP_VAR}={v:?} is not a number")),
            Err(_) => Ok(DEFAULT_CROSSING_CAP),
        }
    }
}

enum Failure {
    /// Bad input or usage: exit 2.
    Input(anyhow::Error),
    /// A property does not hold: exit 1.
    Verdict(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn verdict(e: impl std::fmt::Display) -> Failure {
    Failure::Verdict(e.to_string())
}

fn read(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_projection(path: &Path) -> anyhow::Result<Projection> {
    let text = read(path)?;
    parse_projection(&text).with_context(|| format!("{}", path.display()))
}

fn load_diagram(path: &Path) -> anyhow::Result<Diagram> {
    let text = read(path)?;
    parse_diagram(&text).with_context(|| format!("{}", path.display()))
}

fn reduction_failure(e: ReductionError) -> Failure {
    match e {
        ReductionError::NotPairwiseCrossing => verdict("not pairwise crossing"),
        e => Failure::Input(anyhow!(e)),
    }
}

fn resolve_failure(e: ResolveError) -> Failure {
    match e {
        ResolveError::NotPairwiseCrossing => verdict("not pairwise crossing"),
        e => Failure::Input(anyhow!(e)),
    }
}

fn invariant_failure(e: InvariantError) -> Failure {
    match e {
        InvariantError::TooManyCrossings { .. } => {
            Failure::Input(anyhow!("{e}; raise --max-crossings or {CAP_VAR}"))
        }
        InvariantError::WrongComponentCount(_) => verdict(e),
        e => Failure::Input(anyhow!(e)),
    }
}

fn render(p: &LaurentPolynomial, t: bool) -> String {
    if t {
        p.to_t_string()
    } else {
        p.to_string()
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { file } => {
            let p = load_projection(&file)?;
            let t = p.type_counts();
            println!("vertices {}", p.vertex_count());
            println!(
                "types BR {} BG {} RG {} mono {}",
                t.blue_red,
                t.blue_green,
                t.red_green,
                t.mono_total()
            );
            if !p.is_pairwise_crossing() {
                return Err(verdict("not pairwise crossing"));
            }
            println!("pairwise crossing");
        }
        Command::Reduce { file, trace } => {
            let p = load_projection(&file)?;
            let (last, steps) = reduce(&p).map_err(reduction_failure)?;
            let class = classify_irreducible(&last).map_err(reduction_failure)?;
            if let Some(path) = trace {
                fs::write(&path, steps.to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
            println!("# class {class}");
            println!("# steps {}", steps.len());
            print!("{}", serialize_projection(&last));
        }
        Command::Resolve { file, output, cap } => {
            let cap = cap.get()?;
            let p = load_projection(&file)?;
            let d = resolve_l6n1(&p).map_err(resolve_failure)?;
            let report = is_l6n1_capped(&d.link_diagram(), cap).map_err(invariant_failure)?;
            if !report.is_l6n1() {
                return Err(verdict("resolved diagram failed the L6n1 check"));
            }
            write_or_print(output.as_deref(), &serialize_diagram(&d))?;
        }
        Command::Verify { file, cap } => {
            let cap = cap.get()?;
            let d = load_diagram(&file)?.link_diagram();
            let report = is_l6n1_capped(&d, cap).map_err(invariant_failure)?;
            let [a, b, c] = report.linking;
            println!("crossings {}", d.crossing_count());
            println!("components {}", d.component_count());
            println!("linking {a} {b} {c}");
            println!("jones {}", report.jones);
            println!("l6n1 {}", if report.is_l6n1() { "yes" } else { "no" });
            if !report.is_l6n1() {
                return Err(verdict("not L6n1"));
            }
        }
        Command::Invariants {
            file,
            bracket,
            jones,
            linking,
            t,
            cap,
        } => {
            let cap = cap.get()?;
            let d = load_diagram(&file)?.link_diagram();
            let all = !(bracket || jones || linking);
            let o = d.canonical_orientation();
            if all || bracket {
                let b = kauffman_bracket_capped(&d, cap).map_err(invariant_failure)?;
                println!("bracket {}", render(&b, t));
            }
            if all || jones {
                let j = jones_capped(&d, &o, cap).map_err(invariant_failure)?;
                println!("jones {}", render(&j, t));
            }
            if all || linking {
                let lk: Vec<String> = d.linking_numbers(&o).iter().map(i64::to_string).collect();
                println!("linking {}", lk.join(" "));
                println!("writhe {}", d.writhe(&o));
            }
        }
        Command::Enumerate {
            vertices,
            pairwise_crossing,
            connected,
            count_only,
        } => {
            let mut f = EnumerationFilter::new(vertices);
            if pairwise_crossing {
                f = f.pairwise_crossing();
            }
            if connected {
                f = f.connected();
            }
            let ps = enumerate_projections(f).map_err(|e| Failure::Input(anyhow!(e)))?;
            if count_only {
                println!("{}", ps.len());
            } else {
                let records: Vec<String> = ps.iter().map(serialize_projection).collect();
                print!("{}", records.join("\n"));
            }
        }
        Command::Random { vertices, seed } => {
            let p = random_projection(vertices, seed).map_err(|e| Failure::Input(anyhow!(e)))?;
            print!("{}", serialize_projection(&p));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict(why)) => {
            eprintln!("l6n1: {why}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("l6n1: {e:#}");
            ExitCode::from(2)
        }
    }
}
