use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swe::cli::{self, parse_wb, parse_writer, WbSetting, Writer};

#[derive(Parser)]
#[command(name = "swe", version, about = "Well-balanced WENO shallow water solver")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one simulation.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        tf: Option<f64>,
        #[arg(long, value_parser = parse_wb)]
        wb: Option<WbSetting>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = parse_writer)]
        writer: Option<Writer>,
    },
    /// Errors and observed orders over a list of meshes.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "25,50,100")]
        meshes: String,
    },
    /// Print reconstruction coefficients and ideal weights.
    GenWeno {
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value = "interfaces,gauss4")]
        points: String,
    },
}

fn execute(cmd: Cmd) -> swe::Result<()> {
    match cmd {
        Cmd::Run { config, nx, ny, cfl, tf, wb, out, writer } => {
            let mut cfg = cli::parse_config(&config)?;
            cfg.nx = nx.or(cfg.nx);
            cfg.ny = ny.or(cfg.ny);
            cfg.cfl = cfl.or(cfg.cfl);
            cfg.tf = tf.or(cfg.tf);
            cfg.wb = wb.unwrap_or(cfg.wb);
            cfg.out = out.unwrap_or(cfg.out);
            cfg.writer = writer.unwrap_or(cfg.writer);
            let s = cli::run(&cfg)?;
            print!("{}", s.render());
        }
        Cmd::Convergence { config, meshes } => {
            let cfg = cli::parse_config(&config)?;
            let table = cli::convergence(&cfg, &cli::parse_meshes(&meshes)?)?;
            print!("{}", table.render());
        }
        Cmd::GenWeno { r, points } => print!("{}", cli::gen_weno(r, &points)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(args.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
