use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use univalent_completion::group::FiniteGroup;
use univalent_completion::homotopy::{
    fundamental_group_presentation, pi0, presented_order, GroupOrder, GroupPresentation,
};
use univalent_completion::io::{self, Document, Kind};
use univalent_completion::lifting::{check_kan_complex, check_kan_fibration, terminal_map};
use univalent_completion::sgpd::{
    action_space, classifying_space, constant_group, discrete, indiscrete, letters,
    validate_action, validate_groupoid,
};
use univalent_completion::sset::{validate_sset, SimplicialMap, TruncatedSimplicialSet};
use univalent_completion::univalence::{
    split_nonunivalent, two_point_fiber, univalence_certificate, univalent_completion,
};
use univalent_completion::{Budget, Error, Verdict};

/// Certificates and completions of finite truncated Kan fibrations.
///
/// Exit status: 0 every certificate passes, 1 certified failure, 2 unknown
/// or budget exhausted, 3 input error.
#[derive(Parser)]
#[command(name = "ucomp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Truncation to work at; inputs above it are truncated.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Largest number of simplices any one construction may produce.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Write the output document here instead of standard output.
    #[arg(short = 'o', global = true)]
    output: Option<PathBuf>,
    /// Coset enumeration bound for fundamental group comparisons.
    #[arg(long, global = true, default_value_t = 4096)]
    coset_bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Structural identities of an sset, map, groupoid or action document.
    Validate { input: Option<PathBuf> },
    /// Horn filling against a map.
    CheckKan { input: Option<PathBuf> },
    /// Horn filling in a simplicial set.
    CheckKanComplex { input: Option<PathBuf> },
    /// Classifying space of a groupoid document.
    Bg { input: Option<PathBuf> },
    /// The projection `B(X_𝔾) → B𝔾` of an action document.
    ActionSpace { input: Option<PathBuf> },
    /// Components, and the fundamental group at a vertex.
    Pi {
        input: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
    },
    /// Univalent completion of a map document.
    Complete { input: Option<PathBuf> },
    /// Univalence certificate of a map document.
    CheckUnivalence { input: Option<PathBuf> },
    /// Writes a demo document: constant-group Z2|Z3|S3, indiscrete N,
    /// discrete N, two-point-fiber, split-nonunivalent.
    Demo { name: String, arg: Option<String> },
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: &'static str,
    verdict: Verdict,
    detail: T,
}

struct Output {
    doc: Document,
    verdict: Verdict,
}

fn input_error(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

fn read(input: &Option<PathBuf>) -> Result<Document, Error> {
    let mut text = String::new();
    match input {
        Some(path) => {
            text = fs::read_to_string(path)
                .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| input_error(format!("standard input: {e}")))?;
        }
    }
    io::parse(&text)
}

fn at_dim(map: SimplicialMap, max_dim: Option<usize>) -> Result<SimplicialMap, Error> {
    match max_dim {
        Some(n) if n != map.dom().max_dim() => map.truncate(n),
        _ => Ok(map),
    }
}

fn sset_at_dim(
    s: TruncatedSimplicialSet,
    max_dim: Option<usize>,
) -> Result<TruncatedSimplicialSet, Error> {
    match max_dim {
        Some(n) if n != s.max_dim() => s.truncate(n),
        _ => Ok(s),
    }
}

fn report<T: Serialize>(command: &'static str, verdict: Verdict, detail: T) -> Output {
    Output {
        doc: io::document(
            Kind::Certificate,
            &Report {
                command,
                verdict,
                detail,
            },
        ),
        verdict,
    }
}

fn violations(command: &'static str, list: Vec<String>) -> Output {
    report(command, Verdict::from_bool(list.is_empty()), list)
}

#[derive(Serialize)]
struct PiDetail {
    components: Vec<Vec<String>>,
    presentation: Option<GroupPresentation>,
    order: Option<GroupOrder>,
}

fn run(cli: &Cli, budget: &Budget) -> Result<Output, Error> {
    let read_map = |input: &Option<PathBuf>| -> Result<SimplicialMap, Error> {
        at_dim(
            io::read_map(&io::payload(&read(input)?, Kind::Map)?)?,
            cli.max_dim,
        )
    };
    let read_sset = |input: &Option<PathBuf>| -> Result<Arc<TruncatedSimplicialSet>, Error> {
        Ok(Arc::new(sset_at_dim(
            io::read_sset(&io::payload(&read(input)?, Kind::Sset)?)?,
            cli.max_dim,
        )?))
    };
    match &cli.command {
        Command::Validate { input } => {
            let doc = read(input)?;
            let list = match doc.kind {
                Kind::Sset => {
                    validate_sset(&io::read_sset(&io::payload(&doc, Kind::Sset)?)?).violations
                }
                Kind::Map => {
                    let map = io::read_map(&io::payload(&doc, Kind::Map)?)?;
                    let mut list = prefixed("domain", validate_sset(map.dom()).violations);
                    list.extend(prefixed("codomain", validate_sset(map.cod()).violations));
                    list.extend(map.validate().violations);
                    list
                }
                Kind::Groupoid => {
                    validate_groupoid(&io::read_groupoid(&io::payload(&doc, Kind::Groupoid)?)?)
                        .violations
                }
                Kind::Action => {
                    validate_action(&io::read_action(&io::payload(&doc, Kind::Action)?)?).violations
                }
                other => return Err(input_error(format!("cannot validate a {other:?} document"))),
            };
            Ok(violations("validate", list))
        }
        Command::CheckKan { input } => {
            let map = read_map(input)?;
            let cert = check_kan_fibration(&map, map.dom().max_dim(), budget)?;
            Ok(report("check-kan", cert.verdict(), cert))
        }
        Command::CheckKanComplex { input } => {
            let s = read_sset(input)?;
            let cert = check_kan_complex(&s, s.max_dim(), budget)?;
            Ok(report("check-kan-complex", cert.verdict(), cert))
        }
        Command::Bg { input } => {
            let g = Arc::new(io::read_groupoid(&io::payload(
                &read(input)?,
                Kind::Groupoid,
            )?)?);
            let list = validate_groupoid(&g).violations;
            if !list.is_empty() {
                return Ok(violations("bg", list));
            }
            let bg = classifying_space(&g, budget)?;
            Ok(Output {
                doc: io::document(Kind::Sset, &io::sset_doc(&bg.sset)),
                verdict: Verdict::Pass,
            })
        }
        Command::ActionSpace { input } => {
            let a = io::read_action(&io::payload(&read(input)?, Kind::Action)?)?;
            let list = validate_action(&a).violations;
            if !list.is_empty() {
                return Ok(violations("action-space", list));
            }
            let space = action_space(&a, budget)?;
            Ok(Output {
                doc: io::document(Kind::Map, &io::map_doc(&space.projection)),
                verdict: Verdict::Pass,
            })
        }
        Command::Pi { input, base } => {
            let s = read_sset(input)?;
            let comps = pi0(&s);
            let components = comps.labelled(&s);
            let (presentation, order) = match base {
                Some(id) => {
                    let v = s
                        .index_of(0, id)
                        .ok_or_else(|| input_error(format!("--base: no vertex '{id}'")))?;
                    let comp = univalent_completion::homotopy::component(&s, v)?;
                    let pres =
                        fundamental_group_presentation(comp.dom(), comp.local(0, v).unwrap())?;
                    let order = presented_order(&pres, cli.coset_bound);
                    (Some(pres), Some(order))
                }
                None => (None, None),
            };
            let verdict = if order == Some(GroupOrder::Unknown) {
                Verdict::Unknown
            } else {
                Verdict::Pass
            };
            Ok(report(
                "pi",
                verdict,
                PiDetail {
                    components,
                    presentation,
                    order,
                },
            ))
        }
        Command::Complete { input } => {
            let map = read_map(input)?;
            let cert = check_kan_fibration(&map, map.dom().max_dim(), budget)?;
            if !cert.passed() {
                return Ok(report("complete", Verdict::Fail, cert));
            }
            let result = univalent_completion(&map, &cert, cli.coset_bound, budget)?;
            let summary = result.summary();
            Ok(Output {
                verdict: summary.verdict,
                doc: io::document(Kind::Completion, &summary),
            })
        }
        Command::CheckUnivalence { input } => {
            let map = read_map(input)?;
            let cert = check_kan_fibration(&map, map.dom().max_dim(), budget)?;
            let u_cert = check_kan_complex(map.cod(), map.dom().max_dim(), budget)?;
            if !cert.passed() {
                return Ok(report("check-univalence", Verdict::Fail, cert));
            }
            if !u_cert.passed() {
                return Ok(report("check-univalence", Verdict::Fail, u_cert));
            }
            debug_assert!(u_cert.is_about(&terminal_map(map.cod())));
            let r = univalence_certificate(&map, &cert, &u_cert, cli.coset_bound, budget)?;
            Ok(report("check-univalence", r.verdict, r))
        }
        Command::Demo { name, arg } => demo(name, arg.as_deref(), cli.max_dim.unwrap_or(2)),
    }
}

fn prefixed(what: &str, list: Vec<String>) -> Vec<String> {
    list.into_iter().map(|v| format!("{what}: {v}")).collect()
}

fn demo(name: &str, arg: Option<&str>, n: usize) -> Result<Output, Error> {
    let count = || -> Result<usize, Error> {
        arg.ok_or_else(|| input_error(format!("demo {name} needs a number of objects")))?
            .parse()
            .map_err(|_| input_error(format!("demo {name}: not a number")))
    };
    let doc = match name {
        "constant-group" => {
            let g = arg.ok_or_else(|| input_error("demo constant-group needs Z2, Z3 or S3"))?;
            let group = FiniteGroup::by_name(g)
                .ok_or_else(|| input_error(format!("unknown group '{g}'")))?;
            io::document(
                Kind::Groupoid,
                &io::groupoid_doc(&constant_group(&group, n)?),
            )
        }
        "indiscrete" => io::document(
            Kind::Groupoid,
            &io::groupoid_doc(&indiscrete(&letters(count()?), n)?),
        ),
        "discrete" => io::document(
            Kind::Groupoid,
            &io::groupoid_doc(&discrete(&letters(count()?), n)?),
        ),
        "two-point-fiber" => io::document(Kind::Map, &io::map_doc(&two_point_fiber(n)?)),
        "split-nonunivalent" => io::document(Kind::Map, &io::map_doc(&split_nonunivalent(n)?)),
        _ => return Err(input_error(format!("unknown demo '{name}'"))),
    };
    Ok(Output {
        doc,
        verdict: Verdict::Pass,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = cli.budget.map(Budget::with_simplices).unwrap_or_default();
    match run(&cli, &budget) {
        Ok(out) => {
            let text = io::serialize(&out.doc);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(match out.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Unknown => 2,
            })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget { .. } => 2,
                Error::Failed(_) => 1,
                _ => 3,
            })
        }
    }
}
