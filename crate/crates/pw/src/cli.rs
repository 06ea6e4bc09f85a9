use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pw_core::fkt::{matching_weight_fkt_with, scalar_eval_fkt_with};
use pw_core::graph::{to_embedded_form, to_graph_form_with, OpenPlaneGraph};
use pw_core::logc::format_complex;
use pw_core::matchgate::{mgi_check, synthesize, MatchgateError};
use pw_core::oracle::{graph_tensor, interpret, scalar_brute};
use pw_core::rewrite::{equal, normalize_traced};
use pw_core::{BitWord, LogComplex, Tensor, TermDiagram, Tolerance};

use crate::dot::to_dot;
use crate::pwfile::{parse_diagram, print_diagram};
use crate::tensor_json::parse_tensor;
use crate::wpg::{parse_wpg, print_wpg};

pub const EPSILON_VAR: &str = "PW_EPSILON";

#[derive(Parser, Debug)]
#[command(name = "pw", version, about = "Planar W-calculus diagrams, matchgates and planar matchings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EvalMethod {
    Oracle,
    Fkt,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatchMethod {
    Fkt,
    Brute,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Dot,
    Wpg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a diagram; states print one `<bits> <value>` line per index.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "oracle")]
        method: EvalMethod,
        /// A single coefficient, indexed by reversed inputs then outputs.
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Print the reduced normal form.
    Normalize {
        file: PathBuf,
        /// Write the rewrite trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Exit 0 when both diagrams denote the same map, 1 otherwise.
    Equal { a: PathBuf, b: PathBuf },
    /// Check the matchgate identities of a tensor.
    Mgi { tensor: PathBuf },
    /// Build a diagram for a matchgate tensor.
    Synth {
        tensor: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Total weight of perfect matchings of a plane graph.
    Matchings {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "fkt")]
        method: MatchMethod,
    },
    /// Convert a diagram to another format.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
}

/// How a command ended: a verdict (0 or 1) or an input error (2).
enum Failure {
    Verdict(i32),
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn tolerance() -> Result<Tolerance, Failure> {
    match std::env::var(EPSILON_VAR) {
        Err(_) => Ok(Tolerance::default()),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(eps) if eps.is_finite() && eps >= 0.0 => Ok(Tolerance::new(eps)),
            _ => Err(Failure::Input(format!("{EPSILON_VAR}={s} is not a non-negative number"))),
        },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<TermDiagram, Failure> {
    let text = read(path)?;
    parse_diagram(&text).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn load_tensor(path: &Path) -> Result<Tensor, Failure> {
    let text = read(path)?;
    parse_tensor(&text).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))
}

fn print_state(out: &mut dyn Write, t: &Tensor, coeff: Option<&str>) -> Result<(), Failure> {
    if let Some(bits) = coeff {
        let alpha = BitWord::parse(bits).map_err(|e| Failure::Input(format!("--coeff {bits}: {e}")))?;
        if alpha.len() != t.wires() {
            return Err(Failure::Input(format!(
                "--coeff needs {} bits, got {}",
                t.wires(),
                alpha.len()
            )));
        }
        writeln!(out, "{}", format_complex(t.get(&alpha)))?;
    } else if t.wires() == 0 {
        writeln!(out, "{}", format_complex(t.amplitudes()[0]))?;
    } else {
        for alpha in BitWord::all(t.wires()) {
            writeln!(out, "{} {}", alpha, format_complex(t.get(&alpha)))?;
        }
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let tol = tolerance()?;
    match cli.command {
        Command::Eval { file, method, coeff } => {
            let d = load_diagram(&file)?;
            match method {
                EvalMethod::Oracle => print_state(out, &interpret(&d)?, coeff.as_deref())?,
                EvalMethod::Brute => {
                    let t = graph_tensor(&to_graph_form_with(&d, &tol))?;
                    print_state(out, &t, coeff.as_deref())?
                }
                EvalMethod::Fkt => {
                    if !d.is_scalar() {
                        return Err(Failure::Input(format!(
                            "fkt needs a scalar diagram, {} has type {} -> {}",
                            file.display(),
                            d.n_inputs(),
                            d.n_outputs()
                        )));
                    }
                    if coeff.as_deref().is_some_and(|b| !b.is_empty()) {
                        return Err(Failure::Input("a scalar diagram has only the empty coefficient".into()));
                    }
                    writeln!(out, "{}", scalar_eval_fkt_with(&d, &tol)?)?;
                }
            }
        }
        Command::Normalize { file, trace } => {
            let d = load_diagram(&file)?;
            let result = normalize_traced(&d, &tol);
            if let Some(path) = trace {
                let mut text = String::new();
                for step in &result.trace {
                    text.push_str(&format!("{step}\n"));
                }
                std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            writeln!(out, "{}", result.form)?;
        }
        Command::Equal { a, b } => {
            let (da, db) = (load_diagram(&a)?, load_diagram(&b)?);
            let same = equal(&da, &db, &tol);
            writeln!(out, "{same}")?;
            if !same {
                return Err(Failure::Verdict(1));
            }
        }
        Command::Mgi { tensor } => {
            let t = load_tensor(&tensor)?;
            let report = mgi_check(&t, &tol)?;
            match report.witness {
                None => writeln!(out, "pass")?,
                Some(w) => {
                    writeln!(out, "fail")?;
                    writeln!(out, "{w}")?;
                    return Err(Failure::Verdict(1));
                }
            }
        }
        Command::Synth { tensor, output } => {
            let t = load_tensor(&tensor)?;
            let d = match synthesize(&t, &tol) {
                Ok(d) => d,
                Err(MatchgateError::NotMatchgate(w)) => {
                    writeln!(out, "fail")?;
                    writeln!(out, "{w}")?;
                    return Err(Failure::Verdict(1));
                }
                Err(e) => return Err(e.into()),
            };
            let text = format!("{}\n", print_diagram(&d));
            match output {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
                }
                None => out.write_all(text.as_bytes())?,
            }
        }
        Command::Matchings { graph, method } => {
            let text = read(&graph)?;
            let file = parse_wpg(&text).map_err(|e| Failure::Input(format!("{}:{e}", graph.display())))?;
            let value = match method {
                MatchMethod::Fkt => matching_weight_fkt_with(&file.graph, &tol),
                MatchMethod::Brute => LogComplex::from_complex(scalar_brute(&file.graph.to_graph_form())?),
            };
            writeln!(out, "{value}")?;
        }
        Command::Convert { file, to } => {
            let d = load_diagram(&file)?;
            match to {
                Target::Dot => out.write_all(to_dot(&OpenPlaneGraph::from_term(&d)).as_bytes())?,
                Target::Wpg => {
                    if !d.is_scalar() {
                        return Err(Failure::Input(format!(
                            "wpg output needs a scalar diagram, {} has type {} -> {}",
                            file.display(),
                            d.n_inputs(),
                            d.n_outputs()
                        )));
                    }
                    let e = to_embedded_form(&d);
                    let mut factor = e.form.scalar;
                    for l in &e.form.loops {
                        factor *= pw_core::complex::ONE + l;
                    }
                    writeln!(out, "# factor {}", format_complex(factor))?;
                    out.write_all(print_wpg(&e.plane_graph()).as_bytes())?;
                }
            }
        }
    }
    Ok(())
}

/// Runs the tool on `args` (program name first) and returns the exit code:
/// 0 on success or a positive verdict, 1 on a negative verdict, 2 on bad input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(Failure::Verdict(code)) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
