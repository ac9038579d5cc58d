use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::{Serialize, Serializer};

#[derive(Debug, Parser, Serialize)]
#[command(name = "rsum", version, about = "Riemann sums, densities and summation identities over arithmetic point sets")]
pub struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", content = "params", rename_all = "lowercase")]
pub enum Command {
    /// Scaled Riemann sums and the extrapolated density of a point set.
    Density(DensityArgs),
    /// Fraction of coprime pairs in [1, N]^2.
    Coprime(CoprimeArgs),
    /// Primitive Pythagorean triples ordered by hypotenuse.
    Ppt(PptArgs),
    /// Ratios z_N / N of the N-th hypotenuse.
    Lehmer(LehmerArgs),
    /// Generator pairs in a sector of the (m, n) plane.
    Sector(SectorArgs),
    /// Angular distribution of rational points on the unit circle.
    Equidist(EquidistArgs),
    /// Hypotenuse multiplicities against their prime factorization.
    Fermat(FermatArgs),
    /// Exact Möbius inclusion-exclusion identities on random lattice functions.
    Iep(IepArgs),
    /// Derangement probabilities against 1/e.
    Derange(DerangeArgs),
    /// Gaussian Poisson summation on Z^d.
    Poisson(PoissonArgs),
    /// Points of a cut-and-project set.
    Modelset(ModelsetArgs),
    /// Bragg peaks of a cut-and-project set.
    Spectrum(SpectrumArgs),
    /// Fourier expansion of sums over primitive lattice points.
    Primqc(PrimqcArgs),
    /// Density of primitive points twisted by a rational character.
    Twisted(TwistedArgs),
}

/// Point sets accepted by `density`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetName {
    /// `prim<d>`
    Prim(usize),
    /// `z<d>`
    Integer(usize),
    Star,
    Odd,
    Fibonacci,
}

impl FromStr for SetName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let dim = |rest: &str| {
            rest.parse::<usize>()
                .ok()
                .filter(|&d| (1..=8).contains(&d))
                .ok_or_else(|| format!("bad dimension in `{s}` (expected 1..=8)"))
        };
        match s {
            "star" => Ok(SetName::Star),
            "odd" => Ok(SetName::Odd),
            "fibonacci" => Ok(SetName::Fibonacci),
            _ if s.starts_with("prim") => Ok(SetName::Prim(dim(&s[4..])?)),
            _ if s.starts_with('z') => Ok(SetName::Integer(dim(&s[1..])?)),
            _ => Err(format!("unknown set `{s}` (expected prim<d>, z<d>, star, odd or fibonacci)")),
        }
    }
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetName::Prim(d) => write!(f, "prim{d}"),
            SetName::Integer(d) => write!(f, "z{d}"),
            SetName::Star => f.write_str("star"),
            SetName::Odd => f.write_str("odd"),
            SetName::Fibonacci => f.write_str("fibonacci"),
        }
    }
}

impl Serialize for SetName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Ball,
    Box,
    Bump,
}

/// Test function centred at the origin.
#[derive(Debug, Args, Serialize)]
pub struct FunctionArgs {
    /// Test function shape.
    #[arg(long = "f", value_enum, default_value_t = Shape::Ball)]
    pub shape: Shape,

    /// Radius (half side length for boxes).
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ScheduleArgs {
    /// Largest eps; the schedule halves from here.
    #[arg(long, default_value_t = 0.0625)]
    pub eps_start: f64,

    /// Halving stops at the first eps at or below this value.
    #[arg(long, default_value_t = 1.0 / 4096.0)]
    pub eps_min: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    /// `prim<d>`, `z<d>`, star, odd or fibonacci.
    #[arg(long)]
    pub set: SetName,

    #[command(flatten)]
    #[serde(flatten)]
    pub function: FunctionArgs,

    #[command(flatten)]
    #[serde(flatten)]
    pub schedule: ScheduleArgs,

    /// Relative tolerance against the known density.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CoprimeArgs {
    /// Values of N, comma separated; the check uses the last one.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000u64])]
    pub n: Vec<u64>,

    /// Relative tolerance against 6/pi^2.
    #[arg(long, default_value_t = 0.005)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PptArgs {
    /// Largest hypotenuse.
    #[arg(long)]
    pub zmax: u64,

    /// CSV table with columns N,x,y,z to compare against.
    #[arg(long)]
    pub golden: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LehmerArgs {
    /// Indices N, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SectorArgs {
    /// Bound on m^2 + n^2.
    #[arg(long, default_value_t = 1_000_000)]
    pub bound: u64,

    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,

    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,

    /// Relative tolerance against the limiting density.
    #[arg(long, default_value_t = 0.02)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EquidistArgs {
    /// Arc start in radians.
    #[arg(long, default_value_t = 0.0)]
    pub theta1: f64,

    /// Arc end in radians (exclusive).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    pub theta2: f64,

    /// Height bound.
    #[arg(long, default_value_t = 100_000)]
    pub hmax: u64,

    /// Relative tolerance for count and ratio.
    #[arg(long, default_value_t = 0.02)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct FermatArgs {
    #[arg(long, default_value_t = 10_000)]
    pub zmax: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct IepArgs {
    /// Number of random functions.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,

    /// Fix the dimension (2 or 3); by default every fourth trial is 3-dimensional.
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub dim: Option<u8>,
}

#[derive(Debug, Args, Serialize)]
pub struct DerangeArgs {
    #[arg(long, default_value_t = 20)]
    pub n_max: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct PoissonArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub dim: u8,

    /// Gaussian widths t in exp(-pi |x|^2 / t).
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 4.0])]
    pub t: Vec<f64>,

    /// Shift, comma separated; entries may be fractions like 1/3. Defaults to 0.
    #[arg(long, value_delimiter = ',', value_parser = parse_real, allow_hyphen_values = true)]
    pub eta: Vec<f64>,

    /// Bound on the absolute error.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SchemeArgs {
    /// JSON scheme file; defaults to the Fibonacci scheme.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelsetArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,

    #[arg(long, default_value_t = 1000.0)]
    pub radius: f64,

    /// Relative tolerance of the counted density against vol(W)/covolume.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scheme: SchemeArgs,

    /// Largest |xi| kept.
    #[arg(long, default_value_t = 2.0)]
    pub cutoff: f64,

    /// Smallest |amplitude| kept.
    #[arg(long, default_value_t = 1e-3)]
    pub floor: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct PrimqcArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub dim: u8,

    /// Radius of the bump test function.
    #[arg(long, default_value_t = 6.0)]
    pub radius: f64,

    /// Truncation N of the Möbius sum.
    #[arg(long, default_value_t = 8)]
    pub n: u64,

    /// Frequency cutoffs, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [4.0, 8.0, 16.0, 32.0])]
    pub cutoff: Vec<f64>,

    /// Bound on the final error relative to the point sum.
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,

    /// List the coefficients up to the first cutoff instead of checking.
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TwistedArgs {
    /// Rational frequency, comma separated, e.g. 1/2,0.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_ratio, allow_hyphen_values = true)]
    #[serde(serialize_with = "ser_ratios")]
    pub eta: Vec<Ratio<i64>>,

    #[command(flatten)]
    #[serde(flatten)]
    pub function: FunctionArgs,

    #[command(flatten)]
    #[serde(flatten)]
    pub schedule: ScheduleArgs,

    /// Relative tolerance against the limiting coefficient.
    #[arg(long, default_value_t = 0.03)]
    pub tol: f64,
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, String> {
    let r: Ratio<i64> = s.trim().parse().map_err(|_| format!("`{s}` is not a fraction p/q"))?;
    Ok(r)
}

fn parse_real(s: &str) -> Result<f64, String> {
    if s.contains('/') {
        let r = parse_ratio(s)?;
        Ok(*r.numer() as f64 / *r.denom() as f64)
    } else {
        s.trim().parse().map_err(|_| format!("`{s}` is not a number"))
    }
}

fn ser_ratios<S: Serializer>(v: &[Ratio<i64>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn set_names_round_trip() {
        for s in ["prim2", "prim3", "z1", "star", "odd", "fibonacci"] {
            assert_eq!(s.parse::<SetName>().unwrap().to_string(), s);
        }
        assert!("prim0".parse::<SetName>().is_err());
        assert!("prim".parse::<SetName>().is_err());
        assert!("square".parse::<SetName>().is_err());
    }

    #[test]
    fn fractions_parse() {
        assert_eq!(parse_real("1/4").unwrap(), 0.25);
        assert_eq!(parse_real("-0.5").unwrap(), -0.5);
        assert_eq!(parse_ratio("2/4").unwrap(), Ratio::new(1, 2));
        assert!(parse_ratio("1/0").is_err());
    }
}
