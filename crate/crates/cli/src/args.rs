use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ops::RangeInclusive;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "mgr", version, about = "Modular Golomb rulers, difference packings and nonexistence certificates")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for the search engine.
    #[arg(long, global = true, env = "MGR_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// Node budget for searches; unlimited when absent.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Result cache (line-delimited JSON, appended to).
    #[arg(long, global = true, env = "MGR_CACHE")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Backtracking search for a (v,k)-MGR.
    Search {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "first")]
        mode: Mode,
    },
    /// All moduli admitting a k-mark MGR.
    Spectrum {
        #[arg(long)]
        k: usize,
    },
    /// Shortest rotation of a (v,k)-MGR; without --v, the optimal plain Golomb ruler.
    MinLength {
        #[arg(long)]
        v: Option<u32>,
        #[arg(long)]
        k: usize,
    },
    /// Check a ruler record read from a JSON file.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// Explicit constructions.
    Construct {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        v: Option<u32>,
        /// Drop this many marks from a Bose ruler.
        #[arg(long)]
        delete: Option<usize>,
    },
    /// Nonexistence certificates for MGRs.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Optical orthogonal codes.
    #[command(subcommand)]
    Ooc(OocCmd),
    /// Cyclic Steiner 2-designs.
    #[command(subcommand)]
    Steiner(SteinerCmd),
    /// Cyclic relative difference families.
    #[command(subcommand)]
    Rdf(RdfCmd),
    /// Number-theory predicates.
    #[command(subcommand)]
    Nt(NtCmd),
    /// Reference table reproduction.
    #[command(subcommand)]
    Table(TableCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    First,
    All,
    Prove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Singer,
    Bose,
    Ruzsa,
    ExistSmall,
    ExistAny,
}

#[derive(Debug, Subcommand)]
pub enum CertifyCmd {
    /// Try every nonexistence rule on (v,k).
    Mgr {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: u64,
        /// Print the trace in text output.
        #[arg(long)]
        trace: bool,
    },
    /// Scan a parametric nonexistence family.
    #[command(subcommand)]
    Family(MgrFamilyCmd),
}

#[derive(Debug, Subcommand)]
pub enum MgrFamilyCmd {
    MainNonexist {
        #[arg(long)]
        t: u64,
    },
    New35 {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        ell: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum OocCmd {
    /// Verify a code read from a JSON file.
    Verify {
        #[arg(long)]
        file: PathBuf,
        /// Also require the leave of a cyclic Steiner system.
        #[arg(long)]
        steiner: bool,
    },
    /// Certify that no optimal (v,k,1)-OOC exists.
    Certify {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: u64,
    },
    /// Search for an optimal (v,k,1)-OOC as a difference packing.
    Search {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        k: usize,
    },
    /// Scan a nonexistence family.
    #[command(subcommand)]
    Family(OocFamilyCmd),
}

#[derive(Debug, Subcommand)]
pub enum OocFamilyCmd {
    Thm43 {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        v_max: u64,
    },
    RSet {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        k_min: u64,
        #[arg(long)]
        k_max: u64,
    },
    N3Ell1 {
        #[arg(long)]
        k_max: u64,
    },
    N3Ell2 {
        #[arg(long)]
        k_max: u64,
    },
    KHalf {
        #[arg(long)]
        k_min: u64,
        #[arg(long)]
        k_max: u64,
    },
    Infinite {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SteinerCmd {
    Check {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RdfCmd {
    Check {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        w: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Debug, Subcommand)]
pub enum NtCmd {
    /// Is n a sum of two squares.
    TwoSquares { n: u64 },
    /// Is n a sum of three squares.
    ThreeSquares { n: u64 },
    /// n parts in [0, bound] whose squares sum to target.
    SumSquares {
        #[arg(long)]
        target: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: u64,
        #[arg(long, value_enum)]
        parity: Option<ParityArg>,
    },
    /// Smallest s with s+1..s+t all outside the sums of two squares.
    ConsecutiveNonTwoSquares {
        t: usize,
        /// Use the Chinese-remainder construction instead of the scan.
        #[arg(long)]
        crt: bool,
    },
    /// Are n, n+1 both outside the sums of three squares.
    ConsecutiveNonThreeSquares { n: u64 },
    /// Does a x^2 + b y^2 = z^2 have a nontrivial solution.
    Ternary {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    Factor { n: u64 },
    Prime { n: u64 },
}

#[derive(Debug, Subcommand)]
pub enum TableCmd {
    /// Spectrum rows for a range of k, e.g. `--k 3..5`.
    Reproduce {
        #[arg(long, value_parser = parse_k_range)]
        k: RangeInclusive<usize>,
    },
}

/// `a..b` and `a..=b` are both inclusive; a single number is a one-element range.
pub fn parse_k_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected K or A..B, got {s:?}");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a < 3 || b < a {
        return Err(format!("need 3 <= A <= B, got {s:?}"));
    }
    Ok(a..=b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("3..5").unwrap(), 3..=5);
        assert_eq!(parse_k_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_k_range("7").unwrap(), 7..=7);
        assert!(parse_k_range("5..3").is_err());
        assert!(parse_k_range("2..4").is_err());
        assert!(parse_k_range("x").is_err());
    }
}
