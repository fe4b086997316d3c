use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "symquot",
    version,
    about = "Stability, invariants and multiplicities for linear torus and SU(2) actions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Representation config (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub rep: Option<PathBuf>,

    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Zero-level threshold on ‖Φ‖.
    #[arg(long = "tol-phi", global = true, value_name = "X")]
    pub tol_phi: Option<f64>,

    /// Stopping threshold on ‖grad μ‖.
    #[arg(long = "tol-grad", global = true, value_name = "X")]
    pub tol_grad: Option<f64>,

    /// Flow time horizon.
    #[arg(long, global = true, value_name = "T")]
    pub tmax: Option<f64>,

    /// Largest degree searched for Hilbert basis generators.
    #[arg(long = "degree-cap", global = true, default_value_t = 12)]
    pub degree_cap: u32,

    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Tables as CSV instead of JSON.
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one point or a seeded batch of points.
    Classify {
        /// Comma-separated complex coordinates, e.g. `1,0.5-2i,i`.
        #[arg(long, conflicts_with = "batch")]
        point: Option<String>,
        /// Number of seeded random points.
        #[arg(long)]
        batch: Option<usize>,
    },
    /// Dump the descent trajectory of one point.
    Flow {
        /// Starting point; a seeded random point when omitted.
        #[arg(long)]
        point: Option<String>,
        /// Record every N-th accepted step (0: first and last only).
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Minimize the Kempf–Ness function of one point.
    Kn {
        #[arg(long)]
        point: Option<String>,
    },
    /// Hilbert basis of the invariant monoid and orbit-type strata.
    Invariants,
    /// Multiplicity table over levels and degrees.
    Multiplicity {
        /// Level `a,b,...` (components integers or p/q); repeatable. For
        /// SU(2) a single highest weight m. Defaults to the config level.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Vec<String>,
        /// Degrees as `k`, `lo..hi` (inclusive) or a comma list.
        #[arg(long, default_value = "0..8")]
        degree: String,
    },
    /// Ehrhart fit of the fiber polytope counting function.
    Ehrhart {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 1)]
        k0: u64,
        #[arg(long, default_value_t = 6)]
        rmax: u64,
    },
    /// Compare invariant counts against lattice-point counts.
    VerifyQr {
        #[arg(long, allow_hyphen_values = true)]
        lambda: Vec<String>,
        #[arg(long, default_value = "0..8")]
        degree: String,
        /// Additional seeded random torus instances.
        #[arg(long, default_value_t = 0)]
        batch: usize,
    },
    /// Residuals of the momentum-map identities at seeded random points.
    Identities {
        #[arg(long, default_value_t = 20)]
        batch: usize,
    },
}
