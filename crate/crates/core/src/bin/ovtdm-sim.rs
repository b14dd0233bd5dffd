//! Command-line BER sweeps.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use ovtdm::link::{ReceiverConfig, Scheme};
use ovtdm::sim::{efficiency_table_csv, run_sweep, write_csv, EbN0Range, SchemeKind, SweepConfig, WaveformSpec};
use ovtdm::tpc::FbbaConfig;
use ovtdm::Error;

#[derive(Debug, Parser)]
#[command(name = "ovtdm-sim", version, about = "Monte Carlo BER sweeps for coded OvTDM and QAM baselines")]
struct Cli {
    /// turbo-ovtdm-a | turbo-ovtdm-b | qam-tpc | ovtdm-single | bpsk
    #[arg(long, default_value = "turbo-ovtdm-a")]
    scheme: SchemeKind,
    /// Overlap coefficient.
    #[arg(long, default_value_t = 6)]
    k: usize,
    /// QAM order for qam-tpc.
    #[arg(long, default_value_t = 64)]
    m: usize,
    /// Eb/N0 grid in dB as start:stop:step, or a single value.
    #[arg(long, default_value = "4:7:0.2")]
    ebn0: EbN0Range,
    /// Maximum frames per point.
    #[arg(long, default_value_t = 100_000)]
    frames: u64,
    /// Stop a point after this many bit errors.
    #[arg(long, default_value_t = 200)]
    min_errors: u64,
    /// Stop a point after this many information bits.
    #[arg(long, default_value_t = 50_000_000)]
    max_bits: u64,
    #[arg(long, default_value_t = 6)]
    global_iters: usize,
    #[arg(long, default_value_t = 5)]
    ovtdm_iters: usize,
    #[arg(long, default_value_t = 4)]
    tpc_iters: usize,
    /// Flipped least-reliable positions in the component decoder.
    #[arg(long, default_value_t = 5)]
    list_bits: usize,
    /// chebyshev80 | rect | file:<path>
    #[arg(long, default_value = "chebyshev80")]
    waveform: WaveformSpec,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the symbol-efficiency / Shannon-limit table and exit.
    #[arg(long)]
    emit_efficiency_table: bool,
    /// Write wall_seconds as 0 for byte-reproducible output.
    #[arg(long)]
    no_timing: bool,
}

impl Cli {
    fn sweep_config(&self) -> SweepConfig {
        let receiver = ReceiverConfig {
            scheme: if self.scheme == SchemeKind::TurboB { Scheme::B } else { Scheme::A },
            global_iterations: self.global_iters,
            ovtdm_iterations: self.ovtdm_iters,
            fbba: FbbaConfig {
                q: self.list_bits,
                tpc_iterations: self.tpc_iters,
                ..FbbaConfig::default()
            },
            ..ReceiverConfig::default()
        };
        SweepConfig {
            scheme: self.scheme,
            k: self.k,
            m: self.m,
            ebn0: self.ebn0,
            max_frames: self.frames,
            min_bit_errors: self.min_errors,
            max_info_bits: self.max_bits,
            seed: self.seed,
            receiver,
            waveform: self.waveform.clone(),
            noise: true,
            record_timing: !self.no_timing,
        }
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: &Cli) -> Result<(), Error> {
    if cli.emit_efficiency_table {
        let mut out = output(cli.out.as_ref())?;
        out.write_all(efficiency_table_csv().as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::Io(e.to_string()))?;
        return Ok(());
    }
    let cfg = cli.sweep_config();
    cfg.validate()?;
    let records = run_sweep(&cfg)?;
    write_csv(output(cli.out.as_ref())?, &records)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
