use std::fmt::Write as _;
use std::path::PathBuf;

use acthull::data::{emit_hull_svg, Overlay};
use acthull::geometry::PointSet;
use acthull::hull::{
    build_ge, build_revised_ge, BuilderConfig, HullApprox, Scoring, SelectionDomain,
};
use anyhow::{Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use super::{read_vectors, write_text, BuildFlags};
use crate::manifest::Run;

#[derive(Debug, Subcommand)]
pub enum HullCommand {
    /// Build one approximate hull and write it as JSON.
    Build(BuildArgs),
    /// Time GE against RevisedGE on several datasets.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoArg {
    RevisedGe,
    Ge,
}

impl AlgoArg {
    fn name(self) -> &'static str {
        match self {
            AlgoArg::RevisedGe => "revised-ge",
            AlgoArg::Ge => "ge",
        }
    }

    fn build(self, points: &PointSet, cfg: &BuilderConfig) -> acthull::Result<HullApprox> {
        match self {
            AlgoArg::RevisedGe => build_revised_ge(points, cfg),
            AlgoArg::Ge => build_ge(points, cfg),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoringArg {
    Bounded,
    Exhaustive,
}

impl From<ScoringArg> for Scoring {
    fn from(a: ScoringArg) -> Self {
        match a {
            ScoringArg::Bounded => Scoring::Bounded,
            ScoringArg::Exhaustive => Scoring::Exhaustive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionArg {
    Outside,
    Complement,
}

impl From<SelectionArg> for SelectionDomain {
    fn from(a: SelectionArg) -> Self {
        match a {
            SelectionArg::Outside => SelectionDomain::Outside,
            SelectionArg::Complement => SelectionDomain::Complement,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Use only the rows of this class.
    #[arg(long)]
    pub class: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlgoArg::RevisedGe)]
    pub algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = ScoringArg::Bounded)]
    pub scoring: ScoringArg,
    #[arg(long, value_enum, default_value_t = SelectionArg::Outside)]
    pub selection: SelectionArg,
    #[command(flatten)]
    pub build: BuildFlags,
    /// Hull JSON output.
    #[arg(long)]
    pub out: PathBuf,
    /// Scatter plot with the vertices marked (2-D input only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn config(build: &BuildFlags, scoring: ScoringArg, selection: SelectionArg) -> BuilderConfig {
    BuilderConfig {
        scoring: scoring.into(),
        selection: selection.into(),
        ..build.builder()
    }
}

fn build(a: &BuildArgs) -> Result<Run> {
    let data = read_vectors(&a.input)?;
    let data = match a.class {
        Some(c) => {
            let idx = data.class_indices(c);
            anyhow::ensure!(
                !idx.is_empty(),
                "class {c} has no rows in {}",
                a.input.display()
            );
            data.subset(&idx)?
        }
        None => data,
    };
    let cfg = config(&a.build, a.scoring, a.selection);
    let hull = a
        .algo
        .build(&data.vectors, &cfg)
        .context("building the hull")?;
    write_text(&a.out, &(hull.to_json()? + "\n"))?;
    let mut outputs = vec![a.out.clone()];
    if let Some(svg) = &a.svg {
        let title = format!(
            "{} vertices of {} points ({})",
            hull.vertex_indices.len(),
            data.len(),
            a.algo.name()
        );
        let overlay = Overlay::new(hull.vertex_indices.clone(), "crimson", a.algo.name());
        emit_hull_svg(&data.vectors, &[overlay], &title, svg)
            .with_context(|| format!("writing {}", svg.display()))?;
        outputs.push(svg.clone());
    }
    println!(
        "{}: {} vertices, max residual {:.3e} (epsilon {:.3e}), {} QP solves",
        a.algo.name(),
        hull.vertex_indices.len(),
        hull.max_residual,
        hull.epsilon,
        hull.telemetry.qp_solve_count
    );
    Ok(Run {
        seed: Some(a.build.seed),
        inputs: vec![a.input.clone()],
        outputs,
    })
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long, num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "revised-ge,ge"
    )]
    pub algos: Vec<AlgoArg>,
    /// Exhaustive scoring evaluates every candidate as written; bounded
    /// scoring skips provably losing candidates.
    #[arg(long, value_enum, default_value_t = ScoringArg::Exhaustive)]
    pub scoring: ScoringArg,
    #[arg(long, value_enum, default_value_t = SelectionArg::Outside)]
    pub selection: SelectionArg,
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon_rel: f64,
    #[arg(long, value_enum, default_value_t = super::InitArg::Seminmf)]
    pub init: super::InitArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output.
    #[arg(long)]
    pub out: PathBuf,
}

fn bench(a: &BenchArgs) -> Result<Run> {
    let flags = BuildFlags {
        epsilon_rel: a.epsilon_rel,
        init: a.init,
        seed: a.seed,
        zero_tol: acthull::geometry::SolverConfig::default().zero_tol,
    };
    let cfg = config(&flags, a.scoring, a.selection);
    let mut csv =
        String::from("dataset,algo,n,d,vertices,iterations,qp_solve_count,wall_time_secs\n");
    for input in &a.inputs {
        let data = read_vectors(input)?;
        let name = input.file_stem().unwrap_or_default().to_string_lossy();
        for &algo in &a.algos {
            let h = algo
                .build(&data.vectors, &cfg)
                .with_context(|| format!("{} on {}", algo.name(), input.display()))?;
            let t = &h.telemetry;
            writeln!(
                csv,
                "{name},{},{},{},{},{},{},{:.6}",
                algo.name(),
                data.len(),
                data.dim(),
                h.vertex_indices.len(),
                t.iterations,
                t.qp_solve_count,
                t.wall_time_secs
            )?;
            println!(
                "{name:>12} {:>10}: {:>4} vertices {:>9} QP solves {:>9.1} ms",
                algo.name(),
                h.vertex_indices.len(),
                t.qp_solve_count,
                t.wall_time_secs * 1e3
            );
        }
    }
    write_text(&a.out, &csv)?;
    Ok(Run {
        seed: Some(a.seed),
        inputs: a.inputs.clone(),
        outputs: vec![a.out.clone()],
    })
}

pub fn run(c: &HullCommand) -> Result<(&'static str, serde_json::Value, Run)> {
    Ok(match c {
        HullCommand::Build(a) => ("hull build", serde_json::to_value(a)?, build(a)?),
        HullCommand::Bench(a) => ("hull bench", serde_json::to_value(a)?, bench(a)?),
    })
}
