//! Command-line front end. The binary only forwards its arguments to [`run`].
//!
//! Exit codes: 0 success, 2 usage or domain error (including I/O), 3 numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mass::{critical_mass_double_star, critical_mass_star, m_star, MassParams};
use crate::report::{
    Format, LevelRow, RunConfig, SectionTiming, SpectralReport, SpectrumSection, SweepRow, SweepSection,
    ThresholdRow, WitnessSection,
};
use crate::schur::{absence_threshold, certify_ell1, certify_ell3};
use crate::spectral::{bound_states_from, existence_threshold, solve_sector, witness_sequence, Trial, SWEEP_TOL};
use crate::TWO_PI_SQ;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "trimer", version, about = "Spectral features of the 2+1 fermionic trimer with zero-range interaction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON file with run parameters; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output path, `-` for standard output.
    #[arg(long, short, global = true)]
    output: Option<String>,
    /// Root-finding tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Record wall-clock time per section (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// m*, m**, the existence threshold and the absence-certificate root.
    Thresholds,
    /// Schur certificate for sector 1 or 3 at one mass.
    Certify {
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        m: Option<f64>,
    },
    /// Lowest eigenvalue, certificates and bound-state energies over a mass range.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        m_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        m_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        grid_n: Option<usize>,
    },
    /// Converged bound states at one mass.
    Spectrum {
        #[arg(long)]
        m: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long)]
        grid_n: Option<usize>,
    },
    /// Singular sequence at the bottom of the essential spectrum.
    Witness {
        #[arg(long)]
        m: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<u32>>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::UnsupportedSector(_) | Error::Shape(_) | Error::Config(_) => EXIT_USAGE,
        Error::Accuracy { .. } | Error::Bracket { .. } | Error::Numerical(_) => EXIT_NUMERICAL,
    }
}

/// Parse `args` (program name first), run the command and write the report.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let (report, status) = match execute(&cli.command, &config, stderr) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    if let Err(e) = emit(&report, &config, stdout) {
        let _ = writeln!(stderr, "error: cannot write {}: {e}", config.output);
        return EXIT_USAGE;
    }
    status
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        c.format = f;
    }
    if let Some(o) = &cli.output {
        c.output = o.clone();
    }
    if let Some(t) = cli.tol {
        c.tol = t;
    }
    if cli.timings {
        c.timings = true;
    }
    match &cli.command {
        Command::Thresholds => {}
        Command::Certify { ell, m } => {
            set(&mut c.ell, *ell);
            set_opt(&mut c.m, *m);
        }
        Command::Sweep { m_min, m_max, points, alpha, ell, grid_n } => {
            set_opt(&mut c.m_min, *m_min);
            set_opt(&mut c.m_max, *m_max);
            set(&mut c.points, *points);
            set_opt(&mut c.alpha, *alpha);
            set(&mut c.ell, *ell);
            set(&mut c.grid_n, *grid_n);
        }
        Command::Spectrum { m, alpha, ell, grid_n } => {
            set_opt(&mut c.m, *m);
            set_opt(&mut c.alpha, *alpha);
            set(&mut c.ell, *ell);
            set(&mut c.grid_n, *grid_n);
        }
        Command::Witness { m, alpha, lambda, indices } => {
            set_opt(&mut c.m, *m);
            set_opt(&mut c.alpha, *alpha);
            set(&mut c.lambda, *lambda);
            if let Some(ix) = indices {
                c.indices = ix.clone();
            }
        }
    }
    c.validate()?;
    Ok(c)
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

fn emit(report: &SpectralReport, config: &RunConfig, stdout: &mut dyn Write) -> std::io::Result<()> {
    if config.output == "-" {
        report.write_to(config.format, stdout)
    } else {
        let mut f = std::fs::File::create(&config.output)?;
        report.write_to(config.format, &mut f)?;
        if config.format == Format::Csv {
            // CSV holds one table; the configuration travels in a sidecar.
            let mut meta = std::fs::File::create(format!("{}.meta.json", config.output))?;
            report.write_to(Format::Json, &mut meta)?;
        }
        Ok(())
    }
}

struct Timer {
    on: bool,
    sections: Vec<SectionTiming>,
}

impl Timer {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let out = f()?;
        if self.on {
            self.sections.push(SectionTiming { section: name.into(), seconds: t.elapsed().as_secs_f64() });
        }
        Ok(out)
    }

    fn finish(self) -> Option<Vec<SectionTiming>> {
        self.on.then_some(self.sections)
    }
}

fn require(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("missing required parameter --{name}")))
}

fn execute(cmd: &Command, c: &RunConfig, stderr: &mut dyn Write) -> Result<(SpectralReport, i32)> {
    let mut timer = Timer { on: c.timings, sections: Vec::new() };
    let mut status = EXIT_OK;
    let mut report = match cmd {
        Command::Thresholds => {
            let mut r = SpectralReport::new("thresholds", c);
            let trial = Trial { a: c.trial_a, b: c.trial_b };
            let rows = vec![
                ("m_star", timer.time("m_star", || critical_mass_star(c.tol))?),
                ("m_double_star", timer.time("m_double_star", || critical_mass_double_star(c.tol))?),
                ("m_existence", timer.time("m_existence", || existence_threshold(trial, c.tol))?),
                ("absence_root_upper_bound", timer.time("absence_root", || absence_threshold(c.tol))?),
            ];
            r.thresholds = Some(
                rows.into_iter()
                    .map(|(q, v)| ThresholdRow { quantity: q.into(), value: v, reciprocal: 1.0 / v, tolerance: c.tol })
                    .collect(),
            );
            r.notes.push(
                "absence_root_upper_bound bounds the absence threshold from above; it is not the threshold itself"
                    .into(),
            );
            r
        }
        Command::Certify { .. } => {
            let m = require(c.m, "m")?;
            let cert = timer.time("certificate", || match c.ell {
                1 => certify_ell1(m),
                3 => certify_ell3(m),
                other => Err(Error::Domain(format!("certificates exist for ell = 1 or 3, got {other}"))),
            })?;
            let mut r = SpectralReport::new("certify", c);
            r.certificates = Some(vec![cert]);
            r
        }
        Command::Sweep { .. } => {
            let lo = require(c.m_min, "m-min")?;
            let hi = require(c.m_max, "m-max")?;
            if c.points == 0 {
                return Err(Error::Config("empty mass grid: --points must be at least 1".into()));
            }
            if !(lo <= hi) || (c.points > 1 && lo == hi) {
                return Err(Error::Config(format!("need m-min < m-max, got {lo} and {hi}")));
            }
            if !(lo > m_star()) {
                return Err(Error::Domain(format!("sweep masses must exceed m* = {}", m_star())));
            }
            let masses: Vec<f64> = (0..c.points)
                .map(|k| if c.points == 1 { lo } else { lo + (hi - lo) * k as f64 / (c.points - 1) as f64 })
                .collect();
            let alpha = c.alpha.unwrap_or(-1.0);
            let solver = c.solver()?;
            let ell = c.ell;
            let rows = timer.time("sweep", || {
                masses
                    .par_iter()
                    .map(|&m| {
                        let params = MassParams::new(m)?;
                        let sol = solve_sector(ell, &params, &solver)?;
                        let states = bound_states_from(&sol, alpha)?;
                        let c1 = certify_ell1(m)?;
                        let c3 = certify_ell3(m)?;
                        Ok(SweepRow {
                            m,
                            epsilon_min: sol.epsilon_min,
                            c1_bound: c1.bound,
                            c3_bound: c3.bound,
                            certifies_absence: c1.certifies_absence,
                            energies: states.states.iter().map(|s| s.energy).collect(),
                            tolerance: solver.drift_tol,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            let violations = rows
                .windows(2)
                .enumerate()
                .filter(|(_, p)| p[1].epsilon_min < p[0].epsilon_min - SWEEP_TOL * TWO_PI_SQ)
                .map(|(k, _)| k)
                .collect();
            let mut r = SpectralReport::new("sweep", c);
            r.sweep = Some(SweepSection { ell, alpha, rows, violations });
            r
        }
        Command::Spectrum { .. } => {
            let m = require(c.m, "m")?;
            let alpha = c.alpha.unwrap_or(-1.0);
            let solver = c.solver()?;
            let params = MassParams::new(m)?;
            let (sol, states) = timer.time("spectrum", || {
                let sol = solve_sector(c.ell, &params, &solver)?;
                let states = bound_states_from(&sol, alpha)?;
                Ok((sol, states))
            })?;
            let mut r = SpectralReport::new("spectrum", c);
            if let Some(n) = &states.note {
                r.notes.push(n.clone());
            }
            r.spectrum = Some(SpectrumSection {
                m,
                alpha,
                ell: c.ell,
                epsilon_min: sol.epsilon_min,
                picture: states.picture,
                levels: states
                    .states
                    .iter()
                    .enumerate()
                    .map(|(k, s)| LevelRow {
                        level: k,
                        epsilon: s.epsilon,
                        energy: s.energy,
                        residual: s.residual,
                        drift: s.drift,
                    })
                    .collect(),
                tolerance: solver.drift_tol,
            });
            r
        }
        Command::Witness { .. } => {
            let m = c.m.unwrap_or(1.0);
            let alpha = c.alpha.unwrap_or(-TWO_PI_SQ);
            let table = timer.time("witness", || witness_sequence(m, alpha, c.lambda, &c.indices))?;
            let residuals_decay = table.residuals_decay();
            let gram_decays = table.gram_decays();
            let mut r = SpectralReport::new("witness", c);
            if table.rows.len() < 2 {
                let _ = writeln!(stderr, "warning: a single index gives no decay to check");
                r.notes.push("single index: decay check skipped".into());
            } else if !(residuals_decay && gram_decays) {
                status = EXIT_NUMERICAL;
                let _ = writeln!(
                    stderr,
                    "witness decay failed: residuals_decay = {residuals_decay}, gram_decays = {gram_decays}"
                );
            }
            r.witness = Some(WitnessSection {
                m,
                alpha,
                lambda: c.lambda,
                r0: table.r0,
                rows: table.rows,
                residuals_decay,
                gram_decays,
                tolerance: 1e-11,
            });
            r
        }
    };
    report.timings = timer.finish();
    Ok((report, status))
}
