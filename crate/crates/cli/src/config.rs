//! Serializable run configuration. A saved config replays a run exactly.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use uavg_core::Copies;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A copy count on the command line: a positive integer or `inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BigN(pub Copies);

impl BigN {
    /// Finite power of two, as the simulators need.
    pub fn power_of_two(self) -> Option<u64> {
        match self.0 {
            Copies::Finite(n) if n.is_power_of_two() => Some(n),
            _ => None,
        }
    }
}

impl FromStr for BigN {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.parse::<Copies>().map(BigN).map_err(|_| format!("`{s}` is not a positive integer or `inf`"))
    }
}

impl fmt::Display for BigN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for BigN {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Copies::Finite(n) => s.serialize_u64(n),
            Copies::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BigN {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) if n >= 1 => Ok(BigN(Copies::Finite(n))),
            Raw::Num(n) => Err(serde::de::Error::custom(format!("N must be positive, got {n}"))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct AnalyticArgs {
    /// ps-single, fidelity-single, ps-4mode, fidelity-4mode, ps-type2,
    /// fidelity-type2, ps-first-order, fidelity-first-order or ps-gaussian-exact
    #[arg(long)]
    pub formula: String,
    /// Restrict to one printed variant (default: all of them)
    #[arg(long)]
    #[serde(default)]
    pub variant: Option<String>,
    /// Noise variances; V = dν for the first-order formulas
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub nu: Vec<f64>,
    /// Copy counts, `inf` for the limit
    #[arg(long = "big-n", value_delimiter = ',')]
    #[serde(default)]
    pub big_n: Vec<BigN>,
    /// Path depth d for ps-gaussian-exact
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_depth")]
    pub depth: u32,
}

fn default_depth() -> u32 {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Single,
    FourMode,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseArg {
    Gaussian,
    Uniform,
    /// ±sqrt(ν), fourth moment ν²
    TwoPoint,
}

/// Dual-rail input of the single-qubit family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum QubitInput {
    #[default]
    H,
    V,
    /// (H + V)/√2
    D,
    /// (H + iV)/√2
    R,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct McArgs {
    #[arg(long, value_enum, default_value_t = Family::Single)]
    pub family: Family,
    /// Single-qubit gate: I, X, Y, Z, H or Z_alpha(<radians>)
    #[arg(long, default_value = "H")]
    #[serde(default = "default_gate")]
    pub gate: String,
    #[arg(long, value_enum, default_value_t = QubitInput::H)]
    #[serde(default)]
    pub input: QubitInput,
    /// Photons injected into a fusion network (modes 1 and 3 for two)
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_photons")]
    pub photons: u8,
    /// Angle noise law (default: two-point for type2, gaussian otherwise)
    #[arg(long, value_enum)]
    #[serde(default)]
    pub noise: Option<NoiseArg>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub nu: Vec<f64>,
    /// Copy counts, powers of two
    #[arg(long = "big-n", value_delimiter = ',')]
    #[serde(default)]
    pub big_n: Vec<BigN>,
    /// Samples per grid point
    #[arg(long)]
    pub samples: u64,
    /// Master seed; grid point k runs on a seed derived from it
    #[arg(long)]
    pub seed: u64,
    /// Where to write the variant discrimination report (default: stderr)
    #[arg(long)]
    #[serde(default)]
    pub report: Option<PathBuf>,
}

fn default_gate() -> String {
    "H".into()
}

fn default_photons() -> u8 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct EncodeArgs {
    /// Copy counts, powers of two up to 8
    #[arg(long = "big-n", value_delimiter = ',', default_value = "2")]
    pub big_n: Vec<BigN>,
    /// Splitter angle deviations δθ
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub dtheta: Vec<f64>,
    #[arg(long, default_value = "H")]
    #[serde(default = "default_gate")]
    pub gate: String,
    /// Independent δθ on each rail instead of one per splitter
    #[arg(long)]
    #[serde(default)]
    pub uncorrelated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct ParityArgs {
    /// Qubits per copy
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub n: Vec<usize>,
    /// Redundant copies
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub q: Vec<usize>,
    /// Per-qubit herald probabilities
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub p: Vec<f64>,
    /// Noise variances; each (ν, N) gives p = 1 − P_s of an averaged gate
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub nu: Vec<f64>,
    #[arg(long = "big-n", value_delimiter = ',')]
    #[serde(default)]
    pub big_n: Vec<BigN>,
    /// Path depth of the averaged gate behind each qubit
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_depth")]
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct FtArgs {
    /// Threshold curve CSV (`epsilon,gamma` with a `# code: <name>` line)
    #[arg(long)]
    pub curve: PathBuf,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub eps: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub gamma: Vec<f64>,
    /// Copy counts, powers of two
    #[arg(long = "big-n", value_delimiter = ',', default_value = "1")]
    pub big_n: Vec<BigN>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form success probabilities and fidelities
    Analytic(AnalyticArgs),
    /// Monte Carlo ensembles beside every printed expansion
    Mc(McArgs),
    /// Output deviation of an exact-gate tree against encoder splitter error
    EncodeCheck(EncodeArgs),
    /// Logical success probability of the parity code
    Parity(ParityArgs),
    /// Fault-tolerance verdicts on an (ε, γ, N) grid
    FtRegion(FtArgs),
}

impl Command {
    pub fn is_stochastic(&self) -> bool {
        matches!(self, Command::Mc(_))
    }
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self { command, format: Format::Csv, out: None, svg: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_n_round_trips() {
        for s in ["1", "16", "inf"] {
            let n: BigN = s.parse().unwrap();
            let json = serde_json::to_string(&n).unwrap();
            assert_eq!(serde_json::from_str::<BigN>(&json).unwrap(), n);
            assert_eq!(n.to_string(), s);
        }
        assert!("0".parse::<BigN>().is_err());
        assert!(serde_json::from_str::<BigN>("0").is_err());
    }

    #[test]
    fn config_round_trips() {
        let cfg = RunConfig {
            command: Command::Mc(McArgs {
                family: Family::Type2,
                gate: "H".into(),
                input: QubitInput::D,
                photons: 2,
                noise: Some(NoiseArg::TwoPoint),
                nu: vec![0.01, 0.1 + 0.2],
                big_n: vec![BigN(Copies::Finite(4))],
                samples: 10,
                seed: u64::MAX,
                report: None,
            }),
            format: Format::Json,
            out: Some("x.json".into()),
            svg: None,
        };
        assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let cfg = RunConfig::from_json(r#"{"command":{"analytic":{"formula":"ps-single"}}}"#).unwrap();
        let Command::Analytic(a) = cfg.command else { panic!() };
        assert!(a.nu.is_empty() && a.variant.is_none());
        assert_eq!(a.depth, 3);
        assert_eq!(cfg.format, Format::Csv);
    }
}
