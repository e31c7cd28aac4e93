use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_zeta::laplacian::LaplacianKind;
use graph_zeta::{Complex64, Graph};

#[derive(Debug, Parser)]
#[command(name = "graph-zeta", version, about = "Secular and zeta functions of discrete graph Laplacians")]
pub struct Cli {
    /// Graph file: JSON or an edge list (`u v [w]` per line).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Standard,
    Generalized,
}

#[derive(Debug, Args)]
pub struct KindOpt {
    /// Operator; defaults to generalized for weighted graphs.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
}

impl KindOpt {
    pub fn resolve(&self, g: &Graph) -> LaplacianKind {
        match self.kind {
            Some(KindArg::Standard) => LaplacianKind::Standard,
            Some(KindArg::Generalized) => LaplacianKind::Generalized,
            None => LaplacianKind::natural_for(g),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplacian eigenvalues, optionally beside the zeros of Z_S.
    Spectrum {
        #[command(flatten)]
        kind: KindOpt,
        /// Also scan the real axis for zeros of the secular function.
        #[arg(long)]
        zeros: bool,
    },
    /// Run every identity check; exits 2 if any fails.
    Verify {
        /// Random spectral points per sweep.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Corrupts one vertex scattering element before checking.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Primitive periodic orbit counts, or the orbits themselves.
    Orbits {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Enumerate back-scatter-free orbits only.
        #[arg(long)]
        non_backtracking: bool,
        /// Write every orbit as a JSON line instead of counts.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = graph_zeta::orbits::DEFAULT_CATALOG_CAP)]
        cap: usize,
    },
    /// Z_S from the determinant and from the truncated orbit product.
    Zeta {
        /// Spectral parameter, `re` or `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        lambda: Complex64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[command(flatten)]
        kind: KindOpt,
    },
    /// Ihara zeta: orbit product against the three-term determinant.
    Ihara {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        u: Complex64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// Also recover orbit counts up to this length from the determinant.
        #[arg(long)]
        counts: Option<usize>,
    },
    /// Stark edge zeta with constant or seeded random weights.
    Stark {
        /// Constant weight on every transition.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "random_eta")]
        u: Option<Complex64>,
        /// Independent uniform weights in [0, MAX], drawn from the seed.
        #[arg(long, value_name = "MAX")]
        random_eta: Option<f64>,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Smoothed density, smooth term and orbit sum on a grid.
    Trace {
        #[arg(long, default_value_t = graph_zeta::trace::DEFAULT_EPSILON)]
        eps: f64,
        /// `min:max:steps`; defaults to one unit beyond the spectrum range.
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Option<(f64, f64, usize)>,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 4)]
        max_rep: usize,
        #[command(flatten)]
        kind: KindOpt,
    },
    /// Classical map |U|² or the back-scatter-free map at the special point.
    Classical {
        /// Real spectral parameter.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required_unless_present = "sharp")]
        lambda: Option<Complex64>,
        /// Use the back-scatter-free map (regular graphs, valency > 2).
        #[arg(long, conflicts_with = "lambda")]
        sharp: bool,
        /// Evolve a point mass on bond 0 for this many steps.
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        kind: KindOpt,
    },
}

/// `"re"` or `"re,im"`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("{p:?} is not a number"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re` or `re,im`, got {s:?}")),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(z)
}

/// `"min:max:steps"`.
pub fn parse_grid(s: &str) -> std::result::Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected `min:max:steps`, got {s:?}"));
    };
    let min: f64 = a.trim().parse().map_err(|_| format!("bad grid minimum {a:?}"))?;
    let max: f64 = b.trim().parse().map_err(|_| format!("bad grid maximum {b:?}"))?;
    let steps: usize = n.trim().parse().map_err(|_| format!("bad step count {n:?}"))?;
    if !(min < max) || steps == 0 {
        return Err(format!("grid needs min < max and steps > 0, got {s:?}"));
    }
    Ok((min, max, steps))
}
