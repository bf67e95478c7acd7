//! `towerforge`: command-line access to relative class numbers, multiplicative
//! orders and class-tower certificates for cyclotomic function fields.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use towerforge_core::{CertMode, PlusRegularSource};

#[derive(Parser, Debug)]
#[command(name = "towerforge", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Size of the constant field; must be a prime power.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// Characteristic of the constant field.
    #[arg(long = "char-p", global = true)]
    pub char_p: Option<u64>,
    /// Degree of the constant field over F_p.
    #[arg(long = "ext-degree", global = true)]
    pub ext_degree: Option<u32>,
    /// Defining polynomial of F_q over F_p in the variable x, e.g. "x^2+1".
    #[arg(long = "field-modulus", global = true)]
    pub field_modulus: Option<String>,
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Tab-separated cache of computed relative class numbers.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
    /// Work ceiling: residue-table size for class numbers, Pollard-rho
    /// iterations for `order`.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<u64>,
    /// Recompute cache hits and fail if they differ.
    #[arg(long = "verify-cache", global = true)]
    pub verify_cache: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Relative class number h⁻ of K(λ_{𝔭^m}) and h̃⁻ of its maximal real subfield quotient.
    Hminus {
        #[arg(long)]
        prime: String,
        #[arg(long)]
        m: u32,
        /// Also print the prime factorization of h⁻.
        #[arg(long)]
        factor: bool,
        /// Write every odd L(0, χ) as TSV to this path.
        #[arg(long, value_name = "PATH")]
        dump: Option<PathBuf>,
    },
    /// Multiplicative order of p modulo h.
    Order {
        #[arg(long)]
        p: String,
        #[arg(long)]
        h: String,
    },
    /// Check the class-tower conditions for one (𝔭, m, h).
    Certify {
        #[arg(long)]
        prime: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        h: String,
        #[arg(long = "plus-regular", default_value = "unknown")]
        plus_regular: PlusRegularSource,
        #[arg(long, default_value = "both")]
        mode: CertMode,
    },
    /// Sweep all monic irreducible 𝔭 and levels m, certifying every usable prime h | h̃⁻.
    Search {
        #[arg(long = "max-deg")]
        max_deg: u32,
        #[arg(long = "max-m")]
        max_m: u32,
        #[arg(long = "plus-regular", default_value = "unknown")]
        plus_regular: PlusRegularSource,
        #[arg(long, default_value = "both")]
        mode: CertMode,
    },
    /// Irreducibility test in F_q[t].
    Irreducible {
        #[arg(long)]
        poly: String,
    },
    /// Carlitz action polynomial ρ_f, optionally with its roots in F_{q^N}.
    Carlitz {
        #[arg(long)]
        f: String,
        /// Count f-torsion points in the degree-N extension of F_q.
        #[arg(long = "torsion-in", value_name = "N")]
        torsion_in: Option<u32>,
        /// Index of the image of t in F_{q^N}; defaults to a primitive element.
        #[arg(long, requires = "torsion_in")]
        theta: Option<u32>,
    },
    /// Discriminant exponents for a compositum of Artin-Schreier extensions.
    Ledger {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        h: u32,
        /// Pole order of the Artin-Schreier generator at the ramified prime.
        #[arg(long)]
        w: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("towerforge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
