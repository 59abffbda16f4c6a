use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use moncomp_core::{Point, Sample};

/// Everything that determines a run. Output location and format are not
/// part of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Compress and reconstruct one sample with the ladder scheme.
    Ladder(LadderArgs),
    /// Check a scheme on one sample or on every subset of a pool.
    Validate(ValidateArgs),
    /// Apply a scheme transform and write the resulting table scheme.
    Transform {
        #[command(subcommand)]
        #[serde(flatten)]
        op: TransformOp,
    },
    /// Monte Carlo regret of the leave-one-out learner.
    Learn(LearnArgs),
    /// Monte Carlo regret of the empirical-selection learner.
    LwLearn(LwLearnArgs),
    /// Compression extracted from the max learner.
    Extract(ExtractArgs),
    /// Decide a bounded (p, q, r) reconstruction instance.
    Pqr(PqrArgs),
    /// Mean regret of the leave-one-out learner across sample sizes.
    Scaling(ScalingArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ladder(_) => "ladder",
            Command::Validate(_) => "validate",
            Command::Transform { op } => match op {
                TransformOp::Uniformize(_) => "transform-uniformize",
                TransformOp::Decrease(_) => "transform-decrease",
                TransformOp::Perfect(_) => "transform-perfect",
                TransformOp::Lift(_) => "transform-lift",
            },
            Command::Learn(_) => "learn",
            Command::LwLearn(_) => "lw-learn",
            Command::Extract(_) => "extract",
            Command::Pqr(_) => "pqr",
            Command::Scaling(_) => "scaling",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    #[default]
    Omega,
    Ladder,
    Table,
}

/// `omega` has size 1; `ladder` with size `d` runs on depth `d - 1`; `table`
/// reads a scheme file.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = SchemeKind::Omega)]
    #[serde(default)]
    pub scheme: SchemeKind,
    /// Scheme size.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Table scheme JSON file.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct DistArgs {
    /// Uniform distribution on `{0..N-1}`, or on the grid `[0,N)^(depth+1)`
    /// for deeper ladders.
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_support")]
    pub support: u64,
    /// Distribution JSON file (`support`, `weights`); overrides `--support`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist_file: Option<PathBuf>,
}

fn default_support() -> u64 {
    10
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ClassArgs {
    /// Concept class JSON file; defaults to all finite subsets.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct LadderArgs {
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub depth: usize,
    /// JSON list of points; naturals may be written bare.
    #[arg(long, value_parser = parse_sample)]
    pub sample: SampleArg,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ValidateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    /// Validate just this sample.
    #[arg(long, value_parser = parse_sample)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleArg>,
    /// Otherwise validate every subset of `{0..pool-1}` (or the grid) ...
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_support")]
    pub pool: u64,
    /// ... of size at most `p`.
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_p")]
    pub p: usize,
    #[arg(long, default_value_t = 1_000_000)]
    #[serde(default = "default_cap")]
    pub cap: u64,
}

fn default_p() -> usize {
    3
}

fn default_cap() -> u64 {
    1_000_000
}

#[derive(Clone, Debug, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum TransformOp {
    /// Combine per-size table schemes into one scheme with side information.
    Uniformize(UniformizeArgs),
    /// Reduce a (k+1)->k scheme on {0..pool-1} to a k->(k-1) scheme on {0..subpool-1}.
    Decrease(DecreaseArgs),
    /// Search a (p, q, q+1) pair and turn it into a p->(p-1)->p scheme.
    Perfect(PqrArgs),
    /// Lift a class to labeled points and compare VC dimensions.
    Lift(LiftArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthKind {
    #[default]
    Identity,
    Power,
    Tower,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct UniformizeArgs {
    /// `M=PATH`: the table scheme handling samples of size `M`.
    #[arg(long = "member", value_parser = parse_member, required = true)]
    pub members: Vec<(u64, PathBuf)>,
    /// Family size.
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = GrowthKind::Identity)]
    #[serde(default)]
    pub growth: GrowthKind,
    #[arg(long, default_value_t = 2)]
    #[serde(default = "two")]
    pub base: u64,
    /// Validate and tabulate on subsets of `{0..pool-1}` ...
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_support")]
    pub pool: u64,
    /// ... of size at most `max_p`.
    #[arg(long, default_value_t = 4)]
    #[serde(default = "four")]
    pub max_p: usize,
}

fn one() -> usize {
    1
}

fn two() -> u64 {
    2
}

fn four() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct DecreaseArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 100)]
    #[serde(default = "hundred")]
    pub pool: u64,
    #[arg(long, default_value_t = 10)]
    #[serde(default = "ten")]
    pub subpool: u64,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct LiftArgs {
    #[arg(long)]
    pub class_file: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct LearnArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub class: ClassArgs,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "thousand")]
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct LwLearnArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub class: ClassArgs,
    /// Sample size; derived from `epsilon` and `delta` when absent.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    #[serde(default = "third")]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    #[serde(default = "third")]
    pub delta: f64,
    /// Runs per distribution.
    #[arg(long, default_value_t = 500)]
    #[serde(default = "five_hundred")]
    pub trials: usize,
    /// Draw this many random distributions on `{0..pool-1}` instead of
    /// using `--support`/`--dist-file`.
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub random_dists: usize,
    #[arg(long, default_value_t = 100)]
    #[serde(default = "hundred")]
    pub pool: u64,
    #[arg(long, default_value_t = 30)]
    #[serde(default = "thirty")]
    pub max_support: usize,
}

fn hundred() -> u64 {
    100
}

fn ten() -> u64 {
    10
}

fn three() -> usize {
    3
}

fn eight() -> usize {
    8
}

fn five_hundred() -> usize {
    500
}

fn thousand() -> usize {
    1000
}

fn third() -> f64 {
    1.0 / 3.0
}

fn default_ms() -> Vec<usize> {
    vec![9, 19, 39, 79, 159]
}

fn thirty() -> usize {
    30
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ExtractArgs {
    /// Sample size of the max learner.
    #[arg(long, default_value_t = 3)]
    #[serde(default = "three")]
    pub d0: usize,
    /// Largest sample the extracted scheme accepts.
    #[arg(long, default_value_t = 8)]
    #[serde(default = "eight")]
    pub m: usize,
    /// Random samples (sizes 0..=m, values below `pool`) to check.
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "thousand")]
    pub samples: usize,
    #[arg(long, default_value_t = 100)]
    #[serde(default = "hundred")]
    pub pool: u64,
    /// Also trace this sample.
    #[arg(long, value_parser = parse_sample)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleArg>,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct PqrArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub budget: usize,
    #[arg(long, default_value_t = 1_000_000)]
    #[serde(default = "default_cap")]
    pub cap: u64,
}

#[derive(Clone, Debug, PartialEq, Args, Serialize, Deserialize)]
pub struct ScalingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub class: ClassArgs,
    #[arg(long, value_delimiter = ',', default_value = "9,19,39,79,159")]
    #[serde(default = "default_ms")]
    pub ms: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "thousand")]
    pub trials: usize,
}

/// A sample whose points may be bare naturals on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<PointArg>", into = "Sample")]
pub struct SampleArg(pub Sample);

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
enum PointArg {
    Nat(u64),
    Tuple(Vec<u64>),
}

impl From<Vec<PointArg>> for SampleArg {
    fn from(v: Vec<PointArg>) -> Self {
        SampleArg(
            v.into_iter()
                .map(|p| match p {
                    PointArg::Nat(n) => Point::nat(n),
                    PointArg::Tuple(c) => Point::new(c),
                })
                .collect(),
        )
    }
}

impl From<SampleArg> for Sample {
    fn from(s: SampleArg) -> Self {
        s.0
    }
}

fn parse_sample(s: &str) -> Result<SampleArg, String> {
    serde_json::from_str(s).map_err(|e| format!("not a JSON sample: {e}"))
}

fn parse_member(s: &str) -> Result<(u64, PathBuf), String> {
    let (m, path) = s.split_once('=').ok_or("expected M=PATH")?;
    let m = m.parse().map_err(|e| format!("bad size {m:?}: {e}"))?;
    Ok((m, PathBuf::from(path)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Cli;
    use clap::Parser;

    fn parsed(args: &[&str]) -> ExperimentConfig {
        let cli = Cli::try_parse_from(std::iter::once("moncomp").chain(args.iter().copied())).unwrap();
        ExperimentConfig { seed: cli.seed, command: cli.command.unwrap() }
    }

    #[test]
    fn json_round_trip() {
        let cases: [&[&str]; 10] = [
            &["ladder", "--depth", "1", "--sample", "[[2,5],[1,7]]"],
            &["validate", "--scheme", "ladder", "--d", "2", "--p", "2"],
            &["transform", "uniformize", "--member", "1=a.json", "--member", "4=b.json", "--growth", "tower"],
            &["transform", "decrease", "--k", "2"],
            &["transform", "perfect", "--n", "6", "--p", "3", "--q", "1", "--r", "2", "--budget", "4"],
            &["transform", "lift", "--class-file", "h.json"],
            &["--seed", "9", "learn", "--m", "9", "--support", "20"],
            &["lw-learn", "--m", "7", "--random-dists", "4"],
            &["extract", "--sample", "[7,3,9,1]"],
            &["scaling", "--ms", "3,5", "--class-file", "c.json"],
        ];
        for args in cases {
            let cfg = parsed(args);
            let text = serde_json::to_string(&cfg).unwrap();
            assert_eq!(serde_json::from_str::<ExperimentConfig>(&text).unwrap(), cfg, "{text}");
        }
    }

    #[test]
    fn defaults_fill_in() {
        let cfg: ExperimentConfig = serde_json::from_str(r#"{"seed":1,"command":"learn","m":3}"#).unwrap();
        assert_eq!(cfg, parsed(&["--seed", "1", "learn", "--m", "3"]));
        assert_eq!(cfg.command.name(), "learn");
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"seed":0,"command":"transform","op":"decrease","pool":50,"subpool":10,"k":1}"#)
                .unwrap();
        assert_eq!(cfg.command.name(), "transform-decrease");
    }

    #[test]
    fn member_syntax() {
        assert_eq!(parse_member("4=x/y.json").unwrap(), (4, PathBuf::from("x/y.json")));
        assert!(parse_member("x.json").is_err());
        assert!(parse_member("four=x.json").is_err());
    }
}
