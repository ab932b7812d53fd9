//! Command-line interface.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use circ_spectra_core::graphs::DEFAULT_EPSILON;
use circ_spectra_core::numerics::{chi_square, ks_statistic, GaussianMixture};
use circ_spectra_core::sampler::{ensemble_shape, DEFAULT_MAX_VALUES};
use circ_spectra_core::{
    spectral_law, surrogate_params, EnsembleConfig, Error as CoreError, GraphKind, GraphSpec, Histogram, LawMethod,
    MixturePart, ModelParams, Observable, SpectralLaw, TauScenario, WishartIndex,
};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::output::{write_artifacts, Artifact, Format, Table, VERSION};
use crate::parallel;
use crate::params::{params_hash, params_json, read_params};
use crate::presets::{preset, PresetModel, PRESET_NAMES};

/// Samples with `|x|` at or below this are treated as exactly real and
/// dropped when comparing against an exclusion density.
pub const FORCED_REAL_CUTOFF: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "circ-spectra",
    version = VERSION,
    about = "Eigenvalue statistics of random circulant matrices and graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean vector and covariance of the eigenvalue coordinates.
    Law(LawArgs),
    /// Tabulate an analytic density.
    Density(DensityArgs),
    /// Monte Carlo matrix ensemble.
    Simulate(SimulateArgs),
    /// Random circulant graph ensemble.
    Graph(GraphArgs),
    /// Goodness of fit of a sample file against an analytic density.
    Compare(CompareArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Law(_) => "law",
            Command::Density(_) => "density",
            Command::Simulate(_) => "simulate",
            Command::Graph(_) => "graph",
            Command::Compare(_) => "compare",
        }
    }
}

/// `MIN:MAX:STEP`, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected MIN:MAX:STEP, got {s:?}"));
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let g = Grid {
            min: num(parts[0])?,
            max: num(parts[1])?,
            step: num(parts[2])?,
        };
        if !(g.min.is_finite() && g.max.is_finite() && g.step > 0.0 && g.step.is_finite() && g.max >= g.min) {
            return Err(format!("need finite MIN <= MAX and STEP > 0, got {s:?}"));
        }
        if g.len() > 10_000_001 {
            return Err(format!("grid {s:?} has more than 10^7 points"));
        }
        Ok(g)
    }
}

impl Grid {
    pub fn len(&self) -> usize {
        // The tolerance keeps MAX itself when (MAX − MIN)/STEP is an integer
        // up to rounding.
        ((self.max - self.min) / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.min + self.step * i as f64).collect()
    }
}

/// Histogram binning: `auto` (Freedman–Diaconis) or an edge grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Bins {
    Auto,
    Edges(Grid),
}

impl FromStr for Bins {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Bins::Auto);
        }
        let g: Grid = s.parse()?;
        if g.len() < 2 {
            return Err(format!("bin grid {s:?} needs at least two edges"));
        }
        Ok(Bins::Edges(g))
    }
}

impl Bins {
    fn edges(&self, samples: &[f64]) -> Result<Vec<f64>> {
        match self {
            Bins::Auto => Ok(circ_spectra_core::sampler::auto_edges(samples)?),
            Bins::Edges(g) => Ok(g.points()),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamsArgs {
    /// Named configuration (fig1, fig4, fig5, fig7, fig10a, fig10b, fig12, fig13, fig14, fig15).
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES), conflicts_with_all = ["params", "n"])]
    pub preset: Option<String>,
    /// JSON parameter file with fields n, u, v, sigma2, tau2.
    #[arg(long, value_name = "FILE", conflicts_with = "n")]
    pub params: Option<PathBuf>,
    /// Matrix size for inline parameters.
    #[arg(long)]
    pub n: Option<usize>,
    /// Means of A's first column: one value for all entries or N values (default 0).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "n")]
    pub u: Vec<f64>,
    /// Means of B's first column (default 0).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "n")]
    pub v: Vec<f64>,
    /// Variances of A's first column (default 1).
    #[arg(long, value_delimiter = ',', requires = "n")]
    pub sigma2: Vec<f64>,
    /// Variances of B's first column (default 1).
    #[arg(long, value_delimiter = ',', requires = "n")]
    pub tau2: Vec<f64>,
}

fn broadcast(name: &str, xs: &[f64], n: usize, default: f64) -> Result<Vec<f64>> {
    match xs.len() {
        0 => Ok(vec![default; n]),
        1 => Ok(vec![xs[0]; n]),
        k if k == n => Ok(xs.to_vec()),
        k => Err(CliError::config(format!("--{name} has {k} values, expected 1 or {n}"))),
    }
}

impl ParamsArgs {
    pub fn resolve(&self) -> Result<ModelParams> {
        if let Some(name) = &self.preset {
            return Ok(preset(name).expect("validated preset name").params());
        }
        if let Some(path) = &self.params {
            return read_params(path);
        }
        let Some(n) = self.n else {
            return Err(CliError::config("one of --preset, --params or --n is required"));
        };
        if n == 0 {
            return Err(CliError::config("--n must be at least 1"));
        }
        Ok(ModelParams::new(
            broadcast("u", &self.u, n, 0.0)?,
            broadcast("v", &self.v, n, 0.0)?,
            broadcast("sigma2", &self.sigma2, n, 1.0)?,
            broadcast("tau2", &self.tau2, n, 1.0)?,
        )?)
    }

    fn preset_model(&self) -> Option<PresetModel> {
        self.preset.as_deref().and_then(preset).map(|p| p.model)
    }

    fn preset_m(&self) -> Option<usize> {
        self.preset.as_deref().and_then(preset).map(|p| p.m)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output directory; without it results go to stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Overwrite existing files.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    #[default]
    ClosedForm,
    MatrixProduct,
}

impl From<MethodArg> for LawMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => LawMethod::ClosedForm,
            MethodArg::MatrixProduct => LawMethod::MatrixProduct,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LawArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long, value_enum, default_value_t)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DensityKind {
    /// Ordered joint density at the rows of --eta-file.
    Jpdf,
    /// Symmetrized joint density at the rows of --eta-file (N <= 8).
    JpdfUnordered,
    /// Density of one eigenvalue in the complex plane on --grid x --grid-y.
    Joint,
    /// Density of a real part on --grid.
    Re,
    /// Density of an imaginary part on --grid.
    Im,
    /// Density of a modulus-squared eigenvalue on --grid.
    Wishart,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    #[arg(long, value_enum)]
    pub density: DensityKind,
    /// Eigenvalue index (1-based) for an ordered density; omit for the
    /// unordered (generic eigenvalue) density.
    #[arg(long)]
    pub index: Option<usize>,
    /// Leave out eigenvalues that are real in every real-circulant sample.
    #[arg(long)]
    pub exclude_forced_real: bool,
    #[arg(long, value_name = "MIN:MAX:STEP", allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    #[arg(long, value_name = "MIN:MAX:STEP", allow_hyphen_values = true)]
    pub grid_y: Option<Grid>,
    /// CSV of eigenvalue vectors (re_1,im_1,...,re_N,im_N) for jpdf densities.
    #[arg(long, value_name = "FILE")]
    pub eta_file: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ObservableArg {
    /// Real and imaginary parts of the eigenvalues of H.
    Eta,
    /// Eigenvalues of (H + H†)/2.
    R,
    /// Eigenvalues of (H − H†)/2i.
    J,
    /// Eigenvalues of HH†.
    W,
}

impl From<ObservableArg> for Observable {
    fn from(o: ObservableArg) -> Self {
        match o {
            ObservableArg::Eta => Observable::EtaFull,
            ObservableArg::R => Observable::WignerR,
            ObservableArg::J => Observable::WignerJ,
            ObservableArg::W => Observable::WishartW,
        }
    }
}

fn column_names(observable: Observable, n: usize, ordered: bool) -> Vec<String> {
    let stem = match observable {
        Observable::EtaFull => None,
        Observable::WignerR => Some("r"),
        Observable::WignerJ => Some("j"),
        Observable::WishartW => Some("w"),
    };
    match (stem, ordered) {
        (None, false) => vec!["re".into(), "im".into()],
        (None, true) => (1..=n).flat_map(|j| [format!("re_{j}"), format!("im_{j}")]).collect(),
        (Some(s), false) => vec![s.into()],
        (Some(s), true) => (1..=n).map(|j| format!("{s}_{j}")).collect(),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// Number of matrices (default: the preset's, else 10000).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum)]
    pub observable: Option<ObservableArg>,
    /// One row per matrix (true) or one row per eigenvalue (false).
    #[arg(long, action = ArgAction::Set, value_name = "BOOL")]
    pub ordered: Option<bool>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Histogram of pooled values: `auto` or MIN:MAX:STEP edges. For the
    /// eta observable this bins the real part of a 2-D histogram.
    #[arg(long, allow_hyphen_values = true)]
    pub bins: Option<Bins>,
    /// Imaginary-part bins for the eta observable (default auto).
    #[arg(long, allow_hyphen_values = true)]
    pub bins_y: Option<Bins>,
    /// Skip the samples table.
    #[arg(long)]
    pub no_samples: bool,
    /// Add streaming mean and covariance to the summary.
    #[arg(long)]
    pub moments: bool,
    /// Largest sample table held in memory, in values.
    #[arg(long, default_value_t = DEFAULT_MAX_VALUES)]
    pub max_values: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Directed,
    Undirected,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TauArg {
    Zero,
    Eps,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    /// Graph configuration (fig7, fig10a, fig10b, fig12, fig13).
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability.
    #[arg(long)]
    pub p1: Option<f64>,
    /// Second edge type probability (double graphs).
    #[arg(long)]
    pub p2: Option<f64>,
    /// Number of graphs (default: the preset's, else 1000).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Surrogate treatment of zero imaginary-part variances.
    #[arg(long, value_enum)]
    pub tau_scenario: Option<TauArg>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Also write the adjacency first columns.
    #[arg(long)]
    pub columns: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_VALUES)]
    pub max_values: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CompareDensity {
    Re,
    Im,
    Wishart,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    #[command(flatten)]
    pub params: ParamsArgs,
    /// CSV sample file, e.g. from `simulate` or `graph`.
    #[arg(long, value_name = "FILE")]
    pub samples: PathBuf,
    /// Column to test (default: re, im or w, suffixed with _INDEX when
    /// --index is given).
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum)]
    pub density: CompareDensity,
    /// Eigenvalue index (1-based) for an ordered density.
    #[arg(long)]
    pub index: Option<usize>,
    /// Compare against the exclusion density; for imaginary parts, samples
    /// with |x| <= 1e-9 are dropped first.
    #[arg(long)]
    pub exclude_forced_real: bool,
    /// Chi-square bins (default auto).
    #[arg(long, allow_hyphen_values = true)]
    pub bins: Option<Bins>,
    /// Pool bins until each expects at least this many samples.
    #[arg(long, default_value_t = 5.0)]
    pub min_expected: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parse arguments and run. Returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::config(e.render().to_string().trim().to_owned());
            eprintln!("{}", err.to_json());
            return err.exit_code();
        }
    };
    let result = parallel::thread_pool().and_then(|pool| pool.install(|| run(&cli.command)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Law(a) => law(a),
        Command::Density(a) => density(a),
        Command::Simulate(a) => simulate(a),
        Command::Graph(a) => graph(a),
        Command::Compare(a) => compare(a),
    }
}

struct Emit<'a, C: Serialize> {
    subcommand: &'a str,
    output: &'a OutputArgs,
    seed: u64,
    params: Option<&'a ModelParams>,
    config: &'a C,
}

impl<C: Serialize> Emit<'_, C> {
    fn emit(&self, artifacts: &[Artifact]) -> Result<()> {
        match &self.output.out {
            Some(dir) => {
                let hash = self.params.map(params_hash);
                write_artifacts(
                    dir,
                    self.output.force,
                    artifacts,
                    self.subcommand,
                    self.seed,
                    hash.as_deref(),
                    self.config,
                )?;
            }
            None => {
                let text: Vec<&str> = artifacts.iter().map(|a| a.contents.as_str()).collect();
                print!("{}", text.join("\n"));
            }
        }
        Ok(())
    }
}

fn table_artifact(stem: &str, table: &Table, format: Format) -> Artifact {
    Artifact::new(format!("{stem}.{}", format.extension()), table.render(format))
}

fn json_artifact<T: Serialize>(name: &str, value: &T) -> Artifact {
    let mut s = serde_json::to_string_pretty(value).expect("document serializes");
    s.push('\n');
    Artifact::new(name, s)
}

/// 1-based CLI index to a checked 0-based eigenvalue index.
fn eigen_index(index: usize, n: usize) -> Result<usize> {
    if index == 0 || index > n {
        return Err(CliError::config(format!("--index must lie in 1..={n}, got {index}")));
    }
    Ok(index - 1)
}

fn law(a: &LawArgs) -> Result<()> {
    let params = a.params.resolve()?;
    let law = spectral_law(&params, a.method.into());
    let artifacts = match a.output.format {
        Format::Csv => {
            let (nu, cov) = law_tables(&law);
            vec![
                table_artifact("nu", &nu, Format::Csv),
                table_artifact("cov", &cov, Format::Csv),
            ]
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                n: usize,
                nu: &'a [f64],
                cov: Vec<&'a [f64]>,
            }
            let t = law.cov();
            let doc = Doc {
                n: law.n(),
                nu: law.nu(),
                cov: (0..t.rows()).map(|r| t.row(r)).collect(),
            };
            vec![json_artifact("law.json", &doc)]
        }
    };
    Emit {
        subcommand: "law",
        output: &a.output,
        seed: 0,
        params: Some(&params),
        config: a,
    }
    .emit(&artifacts)
}

/// `k,nu` and `k,l,T` tables with 1-based coordinate labels.
pub fn law_tables(law: &SpectralLaw) -> (Table, Table) {
    let mut nu = Table::new(["k", "nu"]);
    for (k, &x) in law.nu().iter().enumerate() {
        nu.push(vec![(k + 1) as f64, x]);
    }
    let mut cov = Table::new(["k", "l", "T"]);
    let t = law.cov();
    for k in 0..t.rows() {
        for l in 0..t.cols() {
            cov.push(vec![(k + 1) as f64, (l + 1) as f64, t[(k, l)]]);
        }
    }
    (nu, cov)
}

fn single_gaussian(law: &SpectralLaw, coord: usize) -> Result<GaussianMixture> {
    let var = law.cov()[(coord, coord)];
    if var <= law.degeneracy_tolerance() {
        return Err(CoreError::SingularComponent { index: coord / 2 }.into());
    }
    Ok(GaussianMixture::new(vec![1.0], vec![law.nu()[coord]], vec![var])?)
}

/// Law of a real or imaginary part: one ordered coordinate or the
/// generic-eigenvalue mixture.
fn part_law(law: &SpectralLaw, part: MixturePart, index: Option<usize>, exclude: bool) -> Result<GaussianMixture> {
    match index {
        Some(i) => {
            if exclude {
                return Err(CliError::config(
                    "--exclude-forced-real applies to the unordered density only",
                ));
            }
            let j = eigen_index(i, law.n())?;
            let coord = 2 * j + usize::from(part == MixturePart::Im);
            single_gaussian(law, coord)
        }
        None => Ok(law.mixture_law(part, exclude)?),
    }
}

fn require<T: Copy>(x: Option<T>, flag: &str, what: &str) -> Result<T> {
    x.ok_or_else(|| CliError::config(format!("{flag} is required for {what}")))
}

fn density(a: &DensityArgs) -> Result<()> {
    let params = a.params.resolve()?;
    let law = spectral_law(&params, LawMethod::ClosedForm);
    let n = law.n();
    let table = match a.density {
        DensityKind::Re | DensityKind::Im => {
            let part = if a.density == DensityKind::Re {
                MixturePart::Re
            } else {
                MixturePart::Im
            };
            let grid = require(a.grid, "--grid", "this density")?;
            let mix = part_law(&law, part, a.index, a.exclude_forced_real)?;
            let mut t = Table::new(["x", "density"]);
            for x in grid.points() {
                t.push(vec![x, mix.pdf(x)]);
            }
            t
        }
        DensityKind::Wishart => {
            if a.exclude_forced_real {
                return Err(CliError::config("--exclude-forced-real does not apply to wishart"));
            }
            let grid = require(a.grid, "--grid", "this density")?;
            let index = match a.index {
                Some(i) => WishartIndex::Ordered(eigen_index(i, n)?),
                None => WishartIndex::Unordered,
            };
            let mut t = Table::new(["x", "density"]);
            for x in grid.points() {
                let d = if x < 0.0 { 0.0 } else { law.wishart_density(index, x)? };
                t.push(vec![x, d]);
            }
            t
        }
        DensityKind::Joint => {
            if a.exclude_forced_real {
                return Err(CliError::config("--exclude-forced-real does not apply to joint"));
            }
            let gx = require(a.grid, "--grid", "this density")?;
            let gy = a.grid_y.unwrap_or(gx);
            let js: Vec<usize> = match a.index {
                Some(i) => vec![eigen_index(i, n)?],
                None => (0..n).collect(),
            };
            let parts = js
                .iter()
                .map(|&j| law.marginal(&[2 * j, 2 * j + 1]))
                .collect::<circ_spectra_core::Result<Vec<_>>>()?;
            let mut t = Table::new(["x", "y", "density"]);
            for x in gx.points() {
                for y in gy.points() {
                    let mut s = 0.0;
                    for p in &parts {
                        s += p.density(&[x, y])?;
                    }
                    t.push(vec![x, y, s / parts.len() as f64]);
                }
            }
            t
        }
        DensityKind::Jpdf | DensityKind::JpdfUnordered => {
            if a.index.is_some() || a.exclude_forced_real {
                return Err(CliError::config(
                    "--index and --exclude-forced-real do not apply to jpdf",
                ));
            }
            let path = a
                .eta_file
                .as_deref()
                .ok_or_else(|| CliError::config("--eta-file is required for jpdf"))?;
            let etas = read_table(path)?;
            if etas.columns.len() != 2 * n {
                return Err(CliError::Parse {
                    path: path.to_owned(),
                    message: format!("expected {} columns, found {}", 2 * n, etas.columns.len()),
                });
            }
            let ordered = match a.density {
                DensityKind::Jpdf => Some(law.ordered_jpdf()?),
                _ => None,
            };
            let mut t = Table::new(["row", "log_density", "density"]);
            for (i, eta) in etas.rows.iter().enumerate() {
                let log = match &ordered {
                    Some(j) => j.log_density(eta)?,
                    None => law.log_jpdf_unordered(eta)?,
                };
                t.push(vec![(i + 1) as f64, log, log.exp()]);
            }
            t
        }
    };
    Emit {
        subcommand: "density",
        output: &a.output,
        seed: 0,
        params: Some(&params),
        config: a,
    }
    .emit(&[table_artifact("density", &table, a.output.format)])
}

fn read_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Table::parse_csv(&text).map_err(|message| CliError::Parse {
        path: path.to_owned(),
        message,
    })
}

fn histogram_table(h: &Histogram) -> Table {
    let values = h.density();
    let counts = h.counts();
    match h.dims() {
        1 => {
            let e = h.edges(0);
            let mut t = Table::new(["lo", "hi", "count", "density"]);
            for b in 0..counts.len() {
                t.push(vec![e[b], e[b + 1], counts[b] as f64, values[b]]);
            }
            t
        }
        _ => {
            let (ex, ey) = (h.edges(0), h.edges(1));
            let ny = ey.len() - 1;
            let mut t = Table::new(["x_lo", "x_hi", "y_lo", "y_hi", "count", "density"]);
            for b in 0..counts.len() {
                let (i, j) = (b / ny, b % ny);
                t.push(vec![ex[i], ex[i + 1], ey[j], ey[j + 1], counts[b] as f64, values[b]]);
            }
            t
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulateSummary {
    n: usize,
    m: usize,
    observable: Observable,
    ordered: bool,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    histogram: Option<HistogramSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    moments: Option<MomentsSummary>,
}

#[derive(Debug, Serialize)]
struct HistogramSummary {
    bins: usize,
    total: u64,
    overflow: u64,
}

#[derive(Debug, Serialize)]
struct MomentsSummary {
    columns: Vec<String>,
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

fn simulate(a: &SimulateArgs) -> Result<()> {
    let params = a.params.resolve()?;
    let n = params.n();
    let (preset_obs, preset_ordered) = match a.params.preset_model() {
        Some(PresetModel::Matrix {
            observable, ordered, ..
        }) => (observable, ordered),
        _ => (Observable::EtaFull, false),
    };
    let observable = a.observable.map(Observable::from).unwrap_or(preset_obs);
    let ordered = a.ordered.unwrap_or(preset_ordered);
    let m = a.m.or(a.params.preset_m()).unwrap_or(10_000);
    if m == 0 {
        return Err(CliError::config("--m must be at least 1"));
    }
    let mut config = EnsembleConfig::new(m, observable, ordered, a.seed);
    config.max_values = a.max_values;
    let two_d = observable == Observable::EtaFull;
    if a.bins_y.is_some() && !(two_d && a.bins.is_some()) {
        return Err(CliError::config("--bins-y needs --bins and the eta observable"));
    }
    let bins_y = if two_d {
        Some(a.bins_y.unwrap_or(Bins::Auto))
    } else {
        None
    };
    let auto_bins = a.bins == Some(Bins::Auto) || (a.bins.is_some() && bins_y == Some(Bins::Auto));
    let samples = if !a.no_samples || auto_bins {
        Some(parallel::sample_ensemble(&params, &config)?)
    } else {
        None
    };

    let mut artifacts = Vec::new();
    if let (Some(s), false) = (&samples, a.no_samples) {
        let mut t = Table::new(column_names(observable, n, ordered));
        t.rows = s.iter_rows().map(<[f64]>::to_vec).collect();
        artifacts.push(table_artifact("samples", &t, a.output.format));
    }

    let mut hist_summary = None;
    if let Some(bins) = a.bins {
        let k = observable.values_per_eigenvalue();
        let h = match &samples {
            Some(s) => {
                // Pooled per-eigenvalue values in matrix order.
                let flat = s.as_slice();
                let xs: Vec<f64> = flat.iter().step_by(k).copied().collect();
                match bins_y {
                    None => Histogram::from_samples(&xs, bins.edges(&xs)?)?,
                    Some(by) => {
                        let ys: Vec<f64> = flat.iter().skip(1).step_by(2).copied().collect();
                        let pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
                        Histogram::from_pairs(&pairs, bins.edges(&xs)?, by.edges(&ys)?)?
                    }
                }
            }
            None => {
                let template = match bins_y {
                    None => Histogram::new_1d(bins.edges(&[])?)?,
                    Some(by) => Histogram::new_2d(bins.edges(&[])?, by.edges(&[])?)?,
                };
                parallel::ensemble_histogram(&params, observable, a.seed, m, &template)
            }
        };
        hist_summary = Some(HistogramSummary {
            bins: h.counts().len(),
            total: h.total(),
            overflow: h.overflow(),
        });
        artifacts.push(table_artifact("histogram", &histogram_table(&h), a.output.format));
    }

    let moments = if a.moments {
        let acc = parallel::ensemble_moments(&params, observable, a.seed, m);
        let cov = acc.covariance()?;
        Some(MomentsSummary {
            columns: column_names(observable, n, true),
            mean: acc.mean().to_vec(),
            cov: (0..cov.rows()).map(|r| cov.row(r).to_vec()).collect(),
        })
    } else {
        None
    };
    let (rows, cols) = ensemble_shape(n, &config);
    debug_assert!(samples.as_ref().map_or(true, |s| (s.rows(), s.cols()) == (rows, cols)));
    let summary = SimulateSummary {
        n,
        m,
        observable,
        ordered,
        seed: a.seed,
        histogram: hist_summary,
        moments,
    };
    artifacts.push(json_artifact("summary.json", &summary));
    Emit {
        subcommand: "simulate",
        output: &a.output,
        seed: a.seed,
        params: Some(&params),
        config: a,
    }
    .emit(&artifacts)
}

fn graph_spec(a: &GraphArgs) -> Result<(GraphSpec, usize)> {
    let base = match &a.preset {
        Some(name) => {
            let p = preset(name).expect("validated preset name");
            let spec = *p
                .graph()
                .ok_or_else(|| CliError::config(format!("preset {name} is not a graph setup")))?;
            Some((spec, p.m))
        }
        None => None,
    };
    let kind = match (a.kind, &base) {
        (Some(KindArg::Directed), _) => GraphKind::Directed,
        (Some(KindArg::Undirected), _) => GraphKind::Undirected,
        (Some(KindArg::Double), _) => GraphKind::DoubleDirected,
        (None, Some((s, _))) => s.kind(),
        (None, None) => return Err(CliError::config("--kind is required without --preset")),
    };
    let n =
        a.n.or(base.map(|b| b.0.n()))
            .ok_or_else(|| CliError::config("--n is required without --preset"))?;
    let p1 =
        a.p1.or(base.map(|b| b.0.p1()))
            .ok_or_else(|| CliError::config("--p1 is required without --preset"))?;
    let p2 = match kind {
        GraphKind::DoubleDirected => Some(
            a.p2.or(base.and_then(|b| b.0.p2()))
                .ok_or_else(|| CliError::config("--p2 is required for double graphs"))?,
        ),
        _ => {
            if a.p2.is_some() {
                return Err(CliError::config("--p2 applies to double graphs only"));
            }
            None
        }
    };
    let tau = match (a.tau_scenario, &base) {
        (Some(TauArg::Zero), _) => TauScenario::ExactZero,
        (Some(TauArg::Eps), _) => TauScenario::Epsilon(a.epsilon),
        (None, Some((s, _))) => match s.tau_scenario() {
            TauScenario::Epsilon(_) => TauScenario::Epsilon(a.epsilon),
            t => t,
        },
        (None, None) => TauScenario::ExactZero,
    };
    let m = a.m.or(base.map(|b| b.1)).unwrap_or(1000);
    if m == 0 {
        return Err(CliError::config("--m must be at least 1"));
    }
    Ok((GraphSpec::new(n, kind, p1, p2, tau)?, m))
}

fn graph(a: &GraphArgs) -> Result<()> {
    let (spec, m) = graph_spec(a)?;
    let n = spec.n();
    let values = m.saturating_mul(2 * n);
    if values > a.max_values {
        return Err(CoreError::Capacity {
            what: "stored spectrum values",
            requested: values,
            limit: a.max_values,
        }
        .into());
    }
    let surrogate = surrogate_params(&spec);
    let mut spectrum = Table::new(["re", "im"]);
    spectrum.rows = parallel::graph_spectrum(&spec, m, a.seed)
        .into_iter()
        .map(|(re, im)| vec![re, im])
        .collect();
    let mut artifacts = vec![
        table_artifact("spectrum", &spectrum, a.output.format),
        Artifact::new("surrogate.json", params_json(&surrogate) + "\n"),
    ];
    if a.columns {
        let names = (1..=n)
            .map(|j| format!("a_{j}"))
            .chain((1..=n).map(|j| format!("b_{j}")));
        let mut t = Table::new(names);
        t.rows = parallel::graph_columns(&spec, m, a.seed)
            .iter()
            .map(|fc| fc.a().iter().chain(fc.b()).copied().collect())
            .collect();
        artifacts.push(table_artifact("columns", &t, a.output.format));
    }
    Emit {
        subcommand: "graph",
        output: &a.output,
        seed: a.seed,
        params: Some(&surrogate),
        config: a,
    }
    .emit(&artifacts)
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub density: CompareDensity,
    pub column: String,
    pub samples: usize,
    pub dropped: usize,
    pub ks: f64,
    pub chi_square: f64,
    pub dof: usize,
}

fn compare(a: &CompareArgs) -> Result<()> {
    let params = a.params.resolve()?;
    let law = spectral_law(&params, LawMethod::ClosedForm);
    let table = read_table(&a.samples)?;
    let column = match &a.column {
        Some(c) => c.clone(),
        None => {
            let stem = match a.density {
                CompareDensity::Re => "re",
                CompareDensity::Im => "im",
                CompareDensity::Wishart => "w",
            };
            match a.index {
                Some(i) => format!("{stem}_{i}"),
                None if table.columns.len() == 1 => table.columns[0].clone(),
                None => stem.to_owned(),
            }
        }
    };
    let raw = table.column(&column).ok_or_else(|| CliError::Parse {
        path: a.samples.clone(),
        message: format!("no column named {column:?}"),
    })?;
    let drop_real = a.exclude_forced_real && a.density == CompareDensity::Im;
    let mut xs: Vec<f64> = raw
        .iter()
        .copied()
        .filter(|x| !(drop_real && x.abs() <= FORCED_REAL_CUTOFF))
        .collect();
    let dropped = raw.len() - xs.len();
    if xs.is_empty() {
        return Err(CoreError::EmptyInput.into());
    }
    xs.sort_by(f64::total_cmp);
    let edges = a.bins.unwrap_or(Bins::Auto).edges(&xs)?;
    let mut hist = Histogram::new_1d(edges.clone())?;
    xs.iter().for_each(|&x| hist.add(x));

    let (ks, chi) = match a.density {
        CompareDensity::Re | CompareDensity::Im => {
            let part = if a.density == CompareDensity::Re {
                MixturePart::Re
            } else {
                MixturePart::Im
            };
            let mix = part_law(&law, part, a.index, a.exclude_forced_real)?;
            let cdf = |x: f64| mix.cdf(x);
            (
                ks_statistic(&xs, cdf)?,
                chi_square(&edges, hist.counts(), cdf, a.min_expected)?,
            )
        }
        CompareDensity::Wishart => {
            if a.exclude_forced_real {
                return Err(CliError::config("--exclude-forced-real does not apply to wishart"));
            }
            let index = match a.index {
                Some(i) => WishartIndex::Ordered(eigen_index(i, law.n())?),
                None => WishartIndex::Unordered,
            };
            if xs[0] < 0.0 {
                return Err(CoreError::Domain {
                    what: "modulus-squared sample",
                    value: xs[0],
                }
                .into());
            }
            let at_samples = law.wishart_cdf_sorted(index, &xs)?;
            let at_edges = law.wishart_cdf_sorted(index, &edges)?;
            let lookup = |points: &[f64], values: &[f64], x: f64| values[points.partition_point(|&p| p < x)];
            (
                ks_statistic(&xs, |x| lookup(&xs, &at_samples, x))?,
                chi_square(&edges, hist.counts(), |x| lookup(&edges, &at_edges, x), a.min_expected)?,
            )
        }
    };
    let report = CompareReport {
        density: a.density,
        column,
        samples: xs.len(),
        dropped,
        ks,
        chi_square: chi.statistic,
        dof: chi.dof,
    };
    let mut residuals = Table::new(["lo", "hi", "residual"]);
    for &(lo, hi, r) in &chi.residuals {
        residuals.push(vec![lo, hi, r]);
    }
    let report_artifact = json_artifact("compare.json", &report);
    if a.output.out.is_some() {
        print!("{}", report_artifact.contents);
    }
    Emit {
        subcommand: "compare",
        output: &a.output,
        seed: 0,
        params: Some(&params),
        config: a,
    }
    .emit(&[
        report_artifact,
        table_artifact("residuals", &residuals, a.output.format),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:200:0.5".parse().unwrap();
        assert_eq!(g.len(), 401);
        assert_eq!(*g.points().last().unwrap(), 200.0);
        let g: Grid = "-1:1:0.1".parse().unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!("2:2:1".parse::<Grid>().unwrap().len(), 1);
        assert!("1:0:1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert_eq!("auto".parse::<Bins>().unwrap(), Bins::Auto);
        assert!("2:2:1".parse::<Bins>().is_err());
    }

    #[test]
    fn headers() {
        assert_eq!(
            column_names(Observable::EtaFull, 2, true),
            ["re_1", "im_1", "re_2", "im_2"]
        );
        assert_eq!(column_names(Observable::EtaFull, 2, false), ["re", "im"]);
        assert_eq!(column_names(Observable::WishartW, 3, true), ["w_1", "w_2", "w_3"]);
        assert_eq!(column_names(Observable::WignerR, 3, false), ["r"]);
    }

    #[test]
    fn inline_params_broadcast() {
        let cli = Cli::try_parse_from(["x", "law", "--n", "3", "--u", "-1", "--sigma2", "1,2,3"]).unwrap();
        let Command::Law(a) = cli.command else { panic!() };
        let p = a.params.resolve().unwrap();
        assert_eq!(p.u(), &[-1.0; 3]);
        assert_eq!(p.sigma2(), &[1.0, 2.0, 3.0]);
        assert_eq!(p.tau2(), &[1.0; 3]);
        let cli = Cli::try_parse_from(["x", "law", "--n", "3", "--u", "1,2"]).unwrap();
        let Command::Law(a) = cli.command else { panic!() };
        assert!(a.params.resolve().is_err());
    }
}
