//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 malformed input file, 4 codec.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bitstream::{compress, decompress, parse};
use crate::cloud::{read_ply, voxelize, write_ply, PlyFormat, VoxelizedCloud};
use crate::codec::{CodecParams, Execution, Transform, DEFAULT_ALPHA};
use crate::error::{Error, ErrorClass, Result};
use crate::eval::{evaluate, rd_sweep, synth_cloud, write_report, RdPoint, DEFAULT_Q_LIST};

#[derive(Debug, Parser)]
#[command(name = "ssgt", version, about = "Point cloud attribute codec (SSGT and RAHT)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress a PLY file or synthetic cloud.
    Encode {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long)]
        output: PathBuf,
    },
    /// Reconstruct a PLY file from a compressed file.
    Decode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Encode, decode and measure one configuration.
    Eval {
        #[command(flatten)]
        codec: CodecArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Rate-distortion sweep over a list of quantization steps.
    Sweep {
        #[command(flatten)]
        codec: CodecArgs,
        /// Comma-separated quantization steps.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_Q_LIST)]
        q_list: Vec<f64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the header of a compressed file.
    Info {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
struct CodecArgs {
    /// PLY path, or `synth:seed=S,n=N`.
    #[arg(long)]
    input: String,
    /// ssgt or raht. `sweep` runs both when omitted.
    #[arg(long)]
    transform: Option<Transform>,
    #[arg(long, default_value_t = 10)]
    depth: u8,
    #[arg(long, default_value_t = 2)]
    step: u8,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// One step for all channels, or `Qy:Qcb:Qcr`.
    #[arg(long, default_value = "1", value_parser = parse_q)]
    q: [f64; 3],
}

impl CodecArgs {
    fn params(&self, transform: Transform) -> CodecParams {
        let base = match transform {
            Transform::Ssgt => CodecParams::ssgt(self.depth, self.step),
            Transform::Raht => CodecParams::raht(self.depth),
        };
        CodecParams { q: self.q, ..base.with_alpha(self.alpha) }
    }
}

/// Parses `Q` or `Qy:Qcb:Qcr`.
pub fn parse_q(text: &str) -> Result<[f64; 3]> {
    let values: Vec<f64> = text
        .split(':')
        .map(|v| v.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::InvalidParams(format!("bad quantization step '{text}': {e}")))?;
    match values[..] {
        [q] => Ok([q; 3]),
        [y, cb, cr] => Ok([y, cb, cr]),
        _ => Err(Error::InvalidParams(format!("expected Q or Qy:Qcb:Qcr, got '{text}'"))),
    }
}

/// Parses `synth:seed=S,n=N`. Returns `None` for anything else.
pub fn parse_synth(input: &str) -> Option<Result<(u64, usize)>> {
    let fields = input.strip_prefix("synth:")?;
    let (mut seed, mut n) = (None, None);
    for part in fields.split(',') {
        let ok = part.split_once('=').and_then(|(key, value)| match key.trim() {
            "seed" => value.trim().parse().ok().map(|v| seed = Some(v)),
            "n" => value.trim().parse().ok().map(|v| n = Some(v)),
            _ => None,
        });
        if ok.is_none() {
            return Some(Err(Error::InvalidParams(format!("bad synthetic input '{input}'"))));
        }
    }
    Some(match (seed, n) {
        (Some(seed), Some(n)) => Ok((seed, n)),
        _ => Err(Error::InvalidParams(format!("synthetic input '{input}' needs seed and n"))),
    })
}

fn read_file(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    let path = path.as_ref();
    fs::read(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_cloud(input: &str, depth: u8) -> Result<VoxelizedCloud> {
    if let Some(parsed) = parse_synth(input) {
        let (seed, n) = parsed?;
        return synth_cloud(seed, n, depth);
    }
    voxelize(&read_ply(&read_file(input)?)?, depth)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit_report(rows: &[RdPoint], report: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match report {
        Some(path) => {
            let mut buf = Vec::new();
            write_report(rows, &mut buf)?;
            write_atomic(path, &buf)
        }
        None => write_report(rows, out),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let exec = Execution::default();
    match cli.command {
        Command::Encode { codec, output } => {
            let params = codec.params(codec.transform.unwrap_or(Transform::Ssgt));
            params.validate()?;
            let cloud = load_cloud(&codec.input, codec.depth)?;
            let file = compress(&cloud, &params, exec)?;
            write_atomic(&output, &file.bytes)?;
            writeln!(out, "points={}", file.header.point_count)?;
            writeln!(out, "bpp={}", file.bpp())?;
            writeln!(out, "attribute_bits={}", file.header.attribute_bits())?;
            writeln!(out, "geometry_bytes={}", file.header.geometry_bytes)?;
            writeln!(out, "file_bytes={}", file.bytes.len())?;
        }
        Command::Decode { input, output } => {
            let decoded = decompress(&read_file(&input)?, exec)?;
            write_atomic(&output, &write_ply(&decoded.cloud.to_raw(), PlyFormat::BinaryLittleEndian))?;
            writeln!(out, "points={}", decoded.cloud.len())?;
        }
        Command::Eval { codec, report } => {
            let params = codec.params(codec.transform.unwrap_or(Transform::Ssgt));
            params.validate()?;
            let cloud = load_cloud(&codec.input, codec.depth)?;
            let row = evaluate(&codec.input, &cloud, &params, exec)?;
            emit_report(&[row], report.as_deref(), out)?;
        }
        Command::Sweep { codec, q_list, report } => {
            let transforms = match codec.transform {
                Some(t) => vec![t],
                None => vec![Transform::Raht, Transform::Ssgt],
            };
            let configs: Vec<CodecParams> = transforms.into_iter().map(|t| codec.params(t)).collect();
            for c in &configs {
                c.validate()?;
            }
            if q_list.is_empty() {
                return Err(Error::InvalidParams("empty Q list".into()));
            }
            for &q in &q_list {
                configs[0].with_q(q).validate()?;
            }
            let cloud = load_cloud(&codec.input, codec.depth)?;
            let rows = rd_sweep(&codec.input, &cloud, &configs, &q_list, exec)?;
            emit_report(&rows, report.as_deref(), out)?;
        }
        Command::Info { input } => {
            let bytes = read_file(&input)?;
            let h = parse(&bytes)?.header;
            writeln!(out, "transform={}", h.transform)?;
            writeln!(out, "depth={}", h.depth)?;
            writeln!(out, "step={}", h.step)?;
            writeln!(out, "alpha={}", h.alpha)?;
            writeln!(out, "q={}:{}:{}", h.q[0], h.q[1], h.q[2])?;
            writeln!(out, "points={}", h.point_count)?;
            writeln!(out, "geometry_bytes={}", h.geometry_bytes)?;
            writeln!(out, "payload_bits={}:{}:{}", h.payload_bits[0], h.payload_bits[1], h.payload_bits[2])?;
            writeln!(out, "origin={}:{}:{}", h.origin[0], h.origin[1], h.origin[2])?;
            writeln!(out, "edge={}", h.edge)?;
            writeln!(out, "bpp={}", h.attribute_bits() as f64 / h.point_count.max(1) as f64)?;
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Normal output goes to `out`, diagnostics to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ErrorClass::Usage.exit_code() } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.class().exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_forms() {
        assert_eq!(parse_q("15").unwrap(), [15.0; 3]);
        assert_eq!(parse_q("10:20:30").unwrap(), [10.0, 20.0, 30.0]);
        assert!(parse_q("1:2").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn synth_input() {
        assert_eq!(parse_synth("synth:seed=42,n=5000").unwrap().unwrap(), (42, 5000));
        assert_eq!(parse_synth("synth:n=3,seed=1").unwrap().unwrap(), (1, 3));
        assert!(parse_synth("cloud.ply").is_none());
        assert!(parse_synth("synth:seed=1").unwrap().is_err());
        assert!(parse_synth("synth:seed=a,n=2").unwrap().is_err());
        assert!(parse_synth("synth:foo=1,n=2").unwrap().is_err());
    }
}
