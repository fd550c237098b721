//! `qlga`: batch front end for lattice validation, evolution, spectra and sweeps.
//!
//! Exit status: 0 on success, 1 for unreadable or invalid input, 2 for numerical
//! failures (non-unitary operator, eigen-solver breakdown, singular systems).

use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use qlga::dynamics::{binomial_packet_for, evolve, EvolveOptions, PacketSpec};
use qlga::lattice::{assemble_operator, validate_config, LatticeConfig, OperatorError, RawConfig};
use qlga::output::{heatmap_scale_text, write_pgm};
use qlga::spectral::{
    boundary_sweep, dispersion_omega, eigenfunction_type3, full_spectrum, quantization_roots,
    reflection_type1, reflection_type2, write_roots_csv, write_sweep_csv, SpectralError,
    SweepParam,
};
use qlga::weights::RuleParams;

/// Residual above which an assembled operator counts as non-unitary.
const UNITARITY_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "qlga",
    version,
    about = "One-particle quantum lattice-gas automata"
)]
struct Cli {
    /// Assert that no random number generator is involved (always true).
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// Lattice configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration and report the unitarity of its operator.
    Validate(ConfigArg),
    /// Evolve a binomial wave packet and record site probabilities.
    Evolve {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutArg,
        /// `k0,x0,width,epsilon`
        #[arg(long)]
        packet: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        stride: usize,
        /// Also write a grayscale spacetime image.
        #[arg(long)]
        heatmap: bool,
        /// Probability mapped to white in the heatmap.
        #[arg(long, default_value_t = 0.1)]
        clip: f64,
    },
    /// Full eigen-decomposition of the operator.
    Spectrum {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Spectra while one boundary parameter varies on both sides.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutArg,
        /// upsilon, zeta or theta_prime
        #[arg(long)]
        param: String,
        /// `a:b:n`, n evenly spaced values in [a, b)
        #[arg(long)]
        grid: String,
    },
    /// Tabulate the dispersion relation.
    Dispersion {
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, default_value_t = std::f64::consts::PI, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long, default_value_t = 65)]
        n: usize,
    },
    /// Allowed wavenumbers between two coupling boundaries (rho = 0, upsilon = 0).
    Roots {
        #[arg(long = "N", alias = "n")]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Reflection amplitude at a single boundary.
    Reflection {
        #[arg(long = "type", value_enum)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        rho: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        epsilon: i8,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        upsilon: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        zeta: f64,
        #[arg(
            long = "theta-prime",
            default_value_t = 0.0,
            allow_hyphen_values = true
        )]
        theta_prime: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
    #[value(name = "III")]
    Three,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn input(e: impl Display) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::ParamNotApplicable { .. } | SpectralError::Config(_) => {
                Failure::input(e)
            }
            SpectralError::Operator(OperatorError::CapExceeded { .. }) => Failure::input(e),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

#[derive(Serialize)]
struct Manifest {
    subcommand: &'static str,
    config: Option<String>,
    options: serde_json::Value,
    files: Vec<EmittedFile>,
}

#[derive(Serialize)]
struct EmittedFile {
    name: String,
    sha256: String,
}

/// Collects files written to the output directory, each written atomically.
struct Emitter {
    dir: PathBuf,
    files: Vec<EmittedFile>,
}

impl Emitter {
    fn new(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Outcome {
        let fail =
            |e: std::io::Error| Failure::Input(format!("{}: {e}", self.dir.join(name).display()));
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(fail)?;
        tmp.write_all(bytes).map_err(fail)?;
        tmp.persist(self.dir.join(name))
            .map_err(|e| fail(e.error))?;
        let digest = Sha256::digest(bytes);
        self.files.push(EmittedFile {
            name: name.to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        });
        Ok(())
    }

    fn finish(
        mut self,
        subcommand: &'static str,
        config: &Path,
        options: serde_json::Value,
    ) -> Outcome {
        let manifest = Manifest {
            subcommand,
            config: Some(config.display().to_string()),
            options,
            files: std::mem::take(&mut self.files),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        self.write("manifest.json", text.as_bytes())
    }
}

fn load(path: &Path) -> Result<LatticeConfig<f64>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let raw = RawConfig::from_json(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    validate_config(&raw).map_err(|e| Failure::Input(format!("invalid configuration:\n{e}")))
}

fn parse_packet(s: &str) -> Result<PacketSpec<f64>, Failure> {
    let bad = || Failure::Input(format!("--packet expects k0,x0,width,epsilon; got {s:?}"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let epsilon: i8 = parts[3].parse().map_err(|_| bad())?;
    if epsilon != 1 && epsilon != -1 {
        return Err(bad());
    }
    Ok(PacketSpec {
        k0: parts[0].parse().map_err(|_| bad())?,
        center: parts[1].parse().map_err(|_| bad())?,
        width: parts[2].parse().map_err(|_| bad())?,
        epsilon,
    })
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Input(format!("--grid expects a:b:n; got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / n as f64).collect())
}

fn validate(args: ConfigArg) -> Outcome {
    let cfg = load(&args.config)?;
    let op = assemble_operator(&cfg);
    let rep = op.unitarity_report().map_err(Failure::input)?;
    println!("configuration valid: {} sites", cfg.size());
    println!("full residual: {:.3e}", rep.full_residual());
    println!("physical residual: {:.3e}", rep.physical_residual());
    for c in &rep.corners {
        println!(
            "corner {} site {} {:?}-mover: amplitude {:.16e}{:+.16e}i, modulus {:.16e}",
            c.corner.side,
            c.corner.site,
            c.corner.mover,
            c.amplitude.re,
            c.amplitude.im,
            c.amplitude.norm()
        );
    }
    if !rep.physical_ok(UNITARITY_TOL)
        || (op.corners().is_empty() && rep.full_residual() > UNITARITY_TOL)
    {
        return Err(Failure::Numerical(
            "operator is not unitary within 1e-12".into(),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(args) => validate(args),
        Command::Evolve {
            config,
            out,
            packet,
            steps,
            stride,
            heatmap,
            clip,
        } => {
            let cfg = load(&config.config)?;
            let spec = parse_packet(&packet)?;
            if stride == 0 {
                return Err(Failure::Input("--stride must be positive".into()));
            }
            if !(clip > 0.0) {
                return Err(Failure::Input("--clip must be positive".into()));
            }
            let op = assemble_operator(&cfg);
            let s0 = binomial_packet_for(&spec, &op).map_err(Failure::input)?;
            let tr = evolve(
                &op,
                &s0,
                EvolveOptions {
                    steps,
                    stride,
                    keep_amplitudes: false,
                },
            )
            .map_err(Failure::input)?;
            let mut em = Emitter::new(&out.out)?;
            let mut csv = Vec::new();
            tr.write_csv(&mut csv).expect("in-memory write");
            em.write("trajectory.csv", &csv)?;
            if heatmap {
                let mut pgm = Vec::new();
                write_pgm(&tr, clip, &mut pgm).expect("in-memory write");
                em.write("heatmap.pgm", &pgm)?;
                let scale = heatmap_scale_text(clip, tr.frames.len(), op.size());
                em.write("heatmap.txt", scale.as_bytes())?;
            }
            let drift = tr.max_norm_drift();
            println!("{} frames, norm drift {drift:.3e}", tr.frames.len());
            em.finish(
                "evolve",
                &config.config,
                serde_json::json!({ "packet": packet, "steps": steps, "stride": stride, "heatmap": heatmap, "clip": clip }),
            )
        }
        Command::Spectrum { config, out } => {
            let cfg = load(&config.config)?;
            let s = full_spectrum(&assemble_operator(&cfg))?;
            let mut csv = Vec::new();
            s.write_csv(&mut csv).expect("in-memory write");
            let mut em = Emitter::new(&out.out)?;
            em.write("spectrum.csv", &csv)?;
            println!(
                "{} eigenpairs, max residual {:.3e}",
                s.modes.len(),
                s.max_residual()
            );
            em.finish("spectrum", &config.config, serde_json::json!({}))
        }
        Command::Sweep {
            config,
            out,
            param,
            grid,
        } => {
            let cfg = load(&config.config)?;
            let which = SweepParam::parse(&param)
                .ok_or_else(|| Failure::Input(format!("unknown sweep parameter {param:?}")))?;
            let values = parse_grid(&grid)?;
            let points = boundary_sweep(&cfg, which, &values)?;
            let mut csv = Vec::new();
            write_sweep_csv(&points, &mut csv).expect("in-memory write");
            let mut em = Emitter::new(&out.out)?;
            em.write("sweep.csv", &csv)?;
            println!("{} grid points", points.len());
            em.finish(
                "sweep",
                &config.config,
                serde_json::json!({ "param": param, "grid": grid }),
            )
        }
        Command::Dispersion {
            rho,
            theta,
            kmin,
            kmax,
            n,
        } => {
            if n == 0 {
                return Err(Failure::Input("--n must be positive".into()));
            }
            let p = RuleParams::new(rho, theta);
            println!("k,omega");
            for i in 0..n {
                let k = if n == 1 {
                    kmin
                } else {
                    kmin + (kmax - kmin) * i as f64 / (n - 1) as f64
                };
                println!("{:.16e},{:.16e}", k, dispersion_omega(k, p));
            }
            Ok(())
        }
        Command::Roots { n, theta } => {
            if n < 3 {
                return Err(Failure::Input("--N must be at least 3".into()));
            }
            let roots = quantization_roots(n, theta);
            write_roots_csv(&roots, std::io::stdout().lock()).map_err(Failure::input)
        }
        Command::Reflection {
            kind,
            k,
            rho,
            theta,
            epsilon,
            upsilon,
            zeta,
            theta_prime,
        } => {
            if epsilon != 1 && epsilon != -1 {
                return Err(Failure::Input("--epsilon must be 1 or -1".into()));
            }
            let p = RuleParams::new(rho, theta);
            let (a, extra) = match kind {
                Kind::One => (reflection_type1(k, epsilon, p, upsilon)?, None),
                Kind::Two => (reflection_type2(k, epsilon, p, zeta)?, None),
                Kind::Three => {
                    let e = eigenfunction_type3(k, epsilon, p, theta_prime, upsilon, zeta)?;
                    (e.amplitude, Some(e.psi_minus_0))
                }
            };
            println!("A = {:.16e}{:+.16e}i", a.re, a.im);
            println!("|A| = {:.16e}", a.norm());
            if let Some(u) = extra {
                println!("psi_minus(0) = {:.16e}{:+.16e}i", u.re, u.im);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(2)
        }
    }
}
