//! Command-line front end. Exit codes: 0 on success, 1 on validation or
//! parse failures, 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirichlet_ensemble::prelude::*;

#[derive(Parser)]
#[command(
    name = "dens",
    version,
    about = "Dirichlet-weighted ensembles of classifier predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratified train/validation/test assignment for a label file.
    Split(SplitArgs),
    /// Generate a synthetic manifest with members of known accuracy.
    Synth(SynthArgs),
    /// Per-member loss and accuracy on both splits.
    Eval(EvalArgs),
    /// Search ensemble weights on the validation split.
    Fit(FitArgs),
    /// Evaluate stored weights on test, or repeat search + evaluation.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Structured,
            Format::Table => ReportFormat::TableText,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the one-member weight vectors.
    #[arg(long)]
    no_vertices: bool,
    #[arg(long, default_value_t = metrics::DEFAULT_EPSILON)]
    epsilon: f64,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            trials: self.trials,
            alpha: self.alpha,
            seed: self.seed,
            include_vertices: !self.no_vertices,
            epsilon: self.epsilon,
            ..SearchConfig::default()
        }
    }
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    classes: usize,
    #[arg(long, default_value_t = 0.10)]
    test_fraction: f64,
    /// Fraction of the post-test remainder used for validation.
    #[arg(long, default_value_t = 0.20)]
    validation_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    /// Output directory; receives manifest.json and its files.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 14)]
    classes: usize,
    #[arg(long, default_value_t = 2520)]
    validation_samples: usize,
    #[arg(long, default_value_t = 1400)]
    test_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Member as NAME:ACCURACY:CONFIDENCE[:GROUP]; repeatable.
    #[arg(long = "member", value_parser = parse_member, conflicts_with = "pair")]
    members: Vec<(String, SynthMemberSpec)>,
    /// Emit a complementary pair instead (each member right on half the rows).
    #[arg(long)]
    pair: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, default_value_t = metrics::DEFAULT_EPSILON)]
    epsilon: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Where to store the chosen weights.
    #[arg(long)]
    weights_out: PathBuf,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Evaluate these stored weights on test.
    #[arg(long, conflicts_with = "repeats")]
    weights: Option<PathBuf>,
    /// Repeat search + test evaluation with seeds seed..seed+N.
    #[arg(long)]
    repeats: Option<usize>,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: Output,
}

fn parse_member(s: &str) -> std::result::Result<(String, SynthMemberSpec), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err("expected NAME:ACCURACY:CONFIDENCE[:GROUP]".into());
    }
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    let mut spec = SynthMemberSpec::new(num(parts[1])?, num(parts[2])?);
    if let Some(g) = parts.get(3) {
        spec = spec.in_group(g.parse().map_err(|e| format!("`{g}`: {e}"))?);
    }
    Ok((parts[0].to_string(), spec))
}

/// Four members shaped like the published four-model result: two weak and
/// two strong learners with independent errors.
fn default_members() -> Vec<(String, SynthMemberSpec)> {
    [
        ("mobilenet", 0.76, 0.45),
        ("mobilenet_v2", 0.55, 0.40),
        ("vgg16", 0.96, 0.60),
        ("vgg19", 0.94, 0.55),
    ]
    .into_iter()
    .map(|(n, a, c)| (n.to_string(), SynthMemberSpec::new(a, c)))
    .collect()
}

fn emit(report: &ReportDocument, output: &Output) -> Result<()> {
    let bytes = report::emit_report(report, output.format.into());
    match &output.out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn run_split(args: &SplitArgs) -> Result<()> {
    let labels = io::read_labels(&args.labels, args.classes)?;
    let spec = SplitSpec {
        test_fraction: args.test_fraction,
        validation_fraction: args.validation_fraction,
        seed: args.seed,
    };
    let assignment = split::stratified_split(&labels, &spec)?;
    io::write_assignment(&args.out, &assignment)?;
    let (train, val, test) = assignment.counts();
    println!("train {train}\nvalidation {val}\ntest {test}");
    Ok(())
}

fn member_seed(base: u64, k: usize, split: u64) -> u64 {
    base.wrapping_mul(0x100_0000_01b3)
        .wrapping_add((k as u64) << 1 | split)
        .wrapping_add(2)
}

fn run_synth(args: &SynthArgs) -> Result<()> {
    let catalog = ClassCatalog::numbered(args.classes)?;
    let labels_val = synth::gen_labels(args.validation_samples, args.classes, args.seed)?;
    let labels_test =
        synth::gen_labels(args.test_samples, args.classes, args.seed.wrapping_add(1))?;

    let members = if args.pair {
        let (va, vb) =
            synth::gen_complementary_pair(&labels_val, 0.9, 0.6, member_seed(args.seed, 0, 0))?;
        let (ta, tb) =
            synth::gen_complementary_pair(&labels_test, 0.9, 0.6, member_seed(args.seed, 0, 1))?;
        vec![
            Member {
                name: "a".into(),
                validation: va,
                test: ta,
            },
            Member {
                name: "b".into(),
                validation: vb,
                test: tb,
            },
        ]
    } else {
        let specs = if args.members.is_empty() {
            default_members()
        } else {
            args.members.clone()
        };
        specs
            .iter()
            .enumerate()
            .map(|(k, (name, spec))| {
                Ok(Member {
                    name: name.clone(),
                    validation: synth::gen_member(&labels_val, spec, member_seed(args.seed, k, 0))?,
                    test: synth::gen_member(&labels_test, spec, member_seed(args.seed, k, 1))?,
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    let data = Dataset::new(MemberSet::new(catalog, members)?, labels_val, labels_test)?;
    let path = io::write_dataset(&args.out, &data)?;
    println!("{}", path.display());
    Ok(())
}

fn run_eval(args: &EvalArgs) -> Result<()> {
    let data = io::load_manifest(&args.manifest)?;
    emit(
        &ReportDocument::evaluation(&data, args.epsilon)?,
        &args.output,
    )
}

fn member_names(data: &Dataset) -> Vec<&str> {
    data.members.names().collect()
}

fn run_fit(args: &FitArgs) -> Result<()> {
    let data = io::load_manifest(&args.manifest)?;
    let cfg = args.search.config();
    let found = ensemble::search_weights(&data.members, &data.labels_validation, &cfg)?;
    io::write_weights(&args.weights_out, &member_names(&data), &found.weights)?;
    emit(&ReportDocument::fit(&data, &cfg, &found)?, &args.output)
}

fn run_report(args: &ReportArgs) -> Result<()> {
    let data = io::load_manifest(&args.manifest)?;
    let cfg = args.search.config();
    let doc = match (&args.weights, args.repeats) {
        (Some(path), _) => {
            let weights = io::read_weights(path, &member_names(&data))?;
            ReportDocument::with_weights(&data, &weights, cfg.epsilon)?
        }
        (None, repeats) => {
            let repeats = repeats.unwrap_or(10);
            let rep = ensemble::run_repeated(
                &data.members,
                &data.labels_validation,
                &data.labels_test,
                &cfg,
                repeats,
            )?;
            ReportDocument::repeated(&data, &cfg, rep)?
        }
    };
    emit(&doc, &args.output)
}

fn ensure_parent(path: Option<&Path>) {
    if let Some(parent) = path
        .and_then(Path::parent)
        .filter(|p| !p.as_os_str().is_empty())
    {
        let _ = std::fs::create_dir_all(parent);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Split(a) => {
            ensure_parent(Some(&a.out));
            run_split(a)
        }
        Command::Synth(a) => run_synth(a),
        Command::Eval(a) => run_eval(a),
        Command::Fit(a) => {
            ensure_parent(Some(&a.weights_out));
            run_fit(a)
        }
        Command::Report(a) => run_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
