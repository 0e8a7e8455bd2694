use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ldcu_mhd::driver::{self, Comparison, LimiterChoice, Mode, PartialConfig};
use ldcu_mhd::Error;

const AFTER_HELP: &str = "\
Problems: brio-wu-1d, dai-woodward, ryu-jones, vortex, sine, brio-wu-2d,
orszag-tang, rotor, blast, challenging-blast.

A config file holds `key = value` lines named like the long flags
(e.g. `nx = 200`, `no-correction = true`); flags override the file.

--compare-correction on a 1-D problem runs the scheme with and without the
correction term and a reference on `reference-cells` cells (uncorrected,
cached by a hash of its settings under $LDCU_MHD_CACHE or the system temp
directory). The contact is located on the reference, remapped to the run
grid, as the cell with the largest relative density variation in excess of
the relative pressure variation. Reported per run: the number of cells
strictly between the 5% and 95% levels of the jump (levels read 20 cells
either side of the contact) within 20 cells of it, and the l1 density
distance to the reference over the same window.

Exit status: 0 success, 1 I/O failure, 2 configuration error, 3 solver abort.";

#[derive(Parser, Debug)]
#[command(name = "ldcu-mhd", version, about = "Low-dissipation central-upwind ideal MHD solver", after_help = AFTER_HELP)]
struct Cli {
    /// Benchmark problem
    #[arg(long)]
    problem: Option<String>,
    /// Cells along x
    #[arg(long)]
    nx: Option<usize>,
    /// Cells along y (2-D; defaults to nx)
    #[arg(long)]
    ny: Option<usize>,
    /// CFL number in (0, 1); default 0.4 in 1-D, 0.45 in 2-D
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long, value_parser = ["minmod", "mc", "none"])]
    limiter: Option<String>,
    /// MC limiter parameter in [1, 2]
    #[arg(long)]
    theta: Option<f64>,
    /// Drop the low-dissipation correction term
    #[arg(long)]
    no_correction: bool,
    #[arg(long)]
    t_final: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write intermediate states every N steps
    #[arg(long)]
    dump_every: Option<usize>,
    /// Comma-separated grid sizes, e.g. "50,100,200,400"
    #[arg(long)]
    convergence: Option<String>,
    #[arg(long)]
    compare_correction: bool,
    /// 1-D: integrate the semi-discrete form with RK3
    #[arg(long)]
    semi_discrete: bool,
    /// Cells of the 1-D reference solution
    #[arg(long)]
    reference_cells: Option<usize>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Key = value settings file
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Cli {
    fn partial(&self) -> Result<PartialConfig, Error> {
        Ok(PartialConfig {
            problem: self.problem.clone(),
            nx: self.nx,
            ny: self.ny,
            cfl: self.cfl,
            limiter: self.limiter.as_deref().map(LimiterChoice::parse).transpose()?,
            theta: self.theta,
            use_correction: self.no_correction.then_some(false),
            t_final: self.t_final,
            out: self.out.clone(),
            dump_every: self.dump_every,
            semi_discrete: self.semi_discrete.then_some(true),
            reference_cells: self.reference_cells,
            cache_dir: self.cache_dir.clone(),
            convergence: self.convergence.as_deref().map(driver::parse_grid_list).transpose()?,
            compare_correction: self.compare_correction.then_some(true),
        })
    }
}

fn execute(cli: &Cli) -> Result<(), Error> {
    let base = match &cli.config {
        Some(path) => PartialConfig::from_file(path)?,
        None => PartialConfig::default(),
    };
    let (cfg, mode) = base.overridden_by(cli.partial()?).resolve()?;
    match mode {
        Mode::Run => {
            let s = driver::run(&cfg)?;
            println!(
                "{}: {} steps to t = {} in {:.2} s; outputs in {}",
                cfg.problem,
                s.manifest.steps,
                s.manifest.t_reached,
                s.manifest.wall_time_s,
                cfg.out.display()
            );
        }
        Mode::Convergence(grids) => {
            let (table, _) = driver::convergence_study(&cfg, &grids)?;
            print!("{}", table.to_text(&[0, 7]));
        }
        Mode::CompareCorrection => match driver::compare_correction(&cfg)?.0 {
            Comparison::Contact(c) => {
                println!("contact at x = {:.4} (cell {})", c.contact_x, c.window.center);
                for (tag, m) in [("corrected", &c.corrected), ("uncorrected", &c.uncorrected)] {
                    println!("{tag:<12} transition cells {:>3}  window l1 {:.4e}", m.sharpness, m.l1_window);
                }
            }
            Comparison::Field(f) => {
                println!("density l1 difference {:.4e}", f.density_l1_difference);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::UnknownProblem(_) | Error::ShapeMismatch { .. } => 2,
                Error::Parse { .. } if cli.config.is_some() => 2,
                ref e if e.is_solver_failure() => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
