use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use dycktri::cayley::{cayley_cells, render_mixed_svg};
use dycktri::constructors::{dyck, dyck_flip, extended_dyck, extended_rational_dyck, rational_dyck, staircase};
use dycktri::ensembles::{
    check_axioms, dyck_ensemble, ensemble_from_triangulation, extended_dyck_ensemble, triangulation_from_ensemble,
    MatchingEnsemble,
};
use dycktri::extension::{
    check_skeleton_compatibility, extend_skeleton, flipped_extended_boundary, mother_of_all_examples,
    restrict_to_skeleton, Extension, SkeletonTriangulation,
};
use dycktri::regularity::{
    dyck_heights, extended_dyck_heights, find_heights, random_regular_triangulation, verify_heights, HeightFunction,
};
use dycktri::render::{render_ascii, render_grid_svg};
use dycktri::Triangulation;

/// Construct, verify, extend and certify triangulations of products of two
/// simplices. Commands read JSON on standard input and write JSON on standard
/// output, so they compose in shell pipelines.
#[derive(Parser)]
#[command(name = "dycktri", version)]
struct Cli {
    /// Read input from this file instead of standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named triangulation.
    Build {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that the input is a triangulation.
    Verify,
    /// Matching ensembles.
    Ensemble {
        #[command(subcommand)]
        action: EnsembleAction,
    },
    /// Partial triangulations on a skeleton.
    Skeleton {
        #[command(subcommand)]
        action: SkeletonAction,
    },
    /// Height functions and regularity.
    Heights {
        #[command(subcommand)]
        action: HeightsAction,
    },
    /// Draw a triangulation.
    Render {
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Mixed cells of the Cayley trick, as JSON.
    Cayley,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Staircase,
    Dyck,
    DyckFlip,
    ExtendedDyck,
    RationalDyck,
    ExtendedRationalDyck,
    RandomRegular,
}

#[derive(Subcommand)]
enum EnsembleAction {
    /// Matching ensemble of a triangulation.
    FromTriangulation,
    /// Check the supports, closure and linkage axioms.
    Check,
    /// Rebuild the triangulation of an ensemble.
    Reconstruct,
    /// The rotation-rule ensemble of the Dyck path triangulation.
    Dyck {
        #[arg(long)]
        n: usize,
    },
    /// The ensemble of the extended Dyck path triangulation.
    ExtendedDyck {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum SkeletonAction {
    /// Restrict a triangulation to the faces with k rows.
    Restrict {
        #[arg(long)]
        k: usize,
    },
    /// Check that the faces of a skeleton agree on their intersections.
    Check,
    /// Extend a skeleton to a full triangulation or print the obstruction.
    Extend,
    /// The extended Dyck boundary with the Dyck facet flipped.
    FlippedExtendedBoundary {
        #[arg(long)]
        n: usize,
    },
    /// The cyclic skeleton on three squares.
    Mother,
}

#[derive(Subcommand)]
enum HeightsAction {
    Dyck {
        #[arg(long)]
        n: usize,
    },
    Extended {
        #[arg(long)]
        n: usize,
    },
    /// Search for rational heights inducing the input triangulation.
    Find,
    /// Check that the given heights induce the input triangulation.
    Verify {
        #[arg(long)]
        heights: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
    MixedSvg,
}

enum Failure {
    /// The input was well formed but failed the requested check.
    Rejected(String),
    /// Bad arguments, unreadable or malformed input, or a library error.
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<dycktri::Error> for Failure {
    fn from(e: dycktri::Error) -> Self {
        Failure::Usage(e.into())
    }
}

type Outcome = Result<String, Failure>;

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            io::stdin().read_to_string(&mut text).context("reading standard input")?;
        }
    }
    Ok(text)
}

fn parse<T: DeserializeOwned>(text: &str, what: &str) -> anyhow::Result<T> {
    serde_json::from_str(text).with_context(|| format!("parse error in {what} JSON"))
}

fn json<T: Serialize>(value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn need(value: Option<usize>, flag: &str) -> anyhow::Result<usize> {
    value.with_context(|| format!("missing --{flag}"))
}

fn build(family: Family, m: Option<usize>, n: Option<usize>, r: Option<usize>, seed: u64) -> Outcome {
    let t = match family {
        Family::Staircase => staircase(need(m, "m")?, need(n, "n")?)?,
        Family::Dyck => dyck(need(n, "n")?)?,
        Family::DyckFlip => dyck_flip(need(n, "n")?)?,
        Family::ExtendedDyck => extended_dyck(need(n, "n")?)?,
        Family::RationalDyck => rational_dyck(need(r, "r")?, need(n, "n")?)?,
        Family::ExtendedRationalDyck => extended_rational_dyck(need(r, "r")?, need(n, "n")?)?,
        Family::RandomRegular => random_regular_triangulation(need(m, "m")?, need(n, "n")?, seed)?.0,
    };
    json(&t)
}

fn run(cli: Cli) -> Outcome {
    let input = || read_input(&cli.input);
    let triangulation = || -> anyhow::Result<Triangulation> { parse(&input()?, "triangulation") };
    match cli.command {
        Command::Build { family, m, n, r, seed } => build(family, m, n, r, seed),
        Command::Verify => {
            let report = triangulation()?.verify();
            if report.is_triangulation() {
                Ok(format!("{report}\n"))
            } else {
                Err(Failure::Rejected(report.to_string()))
            }
        }
        Command::Ensemble { action } => match action {
            EnsembleAction::FromTriangulation => json(&ensemble_from_triangulation(&triangulation()?)?),
            EnsembleAction::Check => {
                let e: MatchingEnsemble = parse(&input()?, "ensemble")?;
                let report = check_axioms(&e);
                if report.passes() {
                    Ok(report.to_string())
                } else {
                    Err(Failure::Rejected(report.to_string()))
                }
            }
            EnsembleAction::Reconstruct => {
                let e: MatchingEnsemble = parse(&input()?, "ensemble")?;
                match triangulation_from_ensemble(&e) {
                    Ok(t) => json(&t),
                    Err(dycktri::Error::AxiomFailure(report)) => Err(Failure::Rejected(report.to_string())),
                    Err(other) => Err(other.into()),
                }
            }
            EnsembleAction::Dyck { n } => json(&dyck_ensemble(n)?),
            EnsembleAction::ExtendedDyck { n } => json(&extended_dyck_ensemble(n)?),
        },
        Command::Skeleton { action } => match action {
            SkeletonAction::Restrict { k } => json(&restrict_to_skeleton(&triangulation()?, k)?),
            SkeletonAction::Check => {
                let s: SkeletonTriangulation = parse(&input()?, "skeleton")?;
                match check_skeleton_compatibility(&s) {
                    Ok(()) => Ok("compatible\n".to_string()),
                    Err(w) => Err(Failure::Rejected(w.to_string())),
                }
            }
            SkeletonAction::Extend => {
                let s: SkeletonTriangulation = parse(&input()?, "skeleton")?;
                match extend_skeleton(&s) {
                    Ok(Extension::Extended(t)) => json(&t),
                    Ok(Extension::NonExtendable(w)) => {
                        let detail = serde_json::to_string(&w).map_err(anyhow::Error::from)?;
                        Err(Failure::Rejected(format!("not extendable: {w}\n{detail}")))
                    }
                    Err(dycktri::Error::Incompatible(w)) => Err(Failure::Rejected(w.to_string())),
                    Err(other) => Err(other.into()),
                }
            }
            SkeletonAction::FlippedExtendedBoundary { n } => json(&flipped_extended_boundary(n)?),
            SkeletonAction::Mother => json(&mother_of_all_examples()),
        },
        Command::Heights { action } => match action {
            HeightsAction::Dyck { n } => json(&dyck_heights(n)?),
            HeightsAction::Extended { n } => json(&extended_dyck_heights(n)?),
            HeightsAction::Find => match find_heights(&triangulation()?)? {
                Some(h) => json(&h),
                None => Err(Failure::Rejected("no height function induces this triangulation".into())),
            },
            HeightsAction::Verify { heights } => {
                let text =
                    std::fs::read_to_string(&heights).with_context(|| format!("reading {}", heights.display()))?;
                let h: HeightFunction = parse(&text, "height function")?;
                match verify_heights(&triangulation()?, &h)? {
                    None => Ok("heights induce the triangulation\n".to_string()),
                    Some(w) => Err(Failure::Rejected(w.to_string())),
                }
            }
        },
        Command::Render { format } => {
            let t = triangulation()?;
            Ok(match format {
                Format::Ascii => render_ascii(&t),
                Format::Svg => render_grid_svg(&t),
                Format::MixedSvg => render_mixed_svg(&t)?,
            })
        }
        Command::Cayley => json(&cayley_cells(&triangulation()?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Rejected(report)) => {
            eprintln!("{}", report.trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
