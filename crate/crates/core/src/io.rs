//! Checkpoints, diagnostic series files, reports, and run directories.
//!
//! Checkpoints are a small binary format — magic, version, endianness tag,
//! grid shape, time/step/dissipation accumulator, model parameters, then
//! the raw spectral coefficients as little-endian doubles — chosen so a
//! reload reproduces the simulation state bit-for-bit and a resumed run is
//! indistinguishable from an uninterrupted one. Series files are the CSV
//! rows of [`TimeSeriesRecord`] at full round-trip precision; reports and
//! config echoes are JSON. Run directories are never overwritten: name
//! collisions get a timestamp suffix.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::diagnostics::TimeSeriesRecord;
use crate::error::{Error, Result};
use crate::field::{Rank, SpectralField};
use crate::grid::Grid;
use crate::integrator::SimState;
use crate::rhs::ModelParams;

const MAGIC: [u8; 4] = *b"OBCP";
const VERSION: u32 = 1;
/// Written as four known bytes; reads back wrong on a byte-order mismatch.
const ENDIAN_TAG: u32 = 0x0102_0304;

/// A reloaded checkpoint: the exact simulation state plus the parameters
/// it was produced with.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub params: ModelParams,
    pub state: SimState,
}

/// Writes the complete simulation state. The file reproduces the state
/// bit-for-bit on reload.
pub fn write_checkpoint(path: &Path, state: &SimState, params: &ModelParams) -> Result<()> {
    let grid = state.u.grid();
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&MAGIC)?;
    write_u32(&mut w, VERSION)?;
    write_u32(&mut w, ENDIAN_TAG)?;
    write_u32(&mut w, grid.dim() as u32)?;
    write_u32(&mut w, grid.n() as u32)?;
    write_f64(&mut w, state.t)?;
    write_u64(&mut w, state.step_count)?;
    write_f64(&mut w, state.dissipation_integral)?;
    for v in [params.k, params.b, params.nu, params.eta, params.mu, params.alpha] {
        write_f64(&mut w, v)?;
    }
    write_field(&mut w, &state.u)?;
    write_field(&mut w, &state.tau)?;
    w.flush()?;
    Ok(())
}

/// Reads a checkpoint, validating framing, parameters, and finiteness.
pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic)?;
    if magic != MAGIC {
        return Err(Error::Checkpoint(format!(
            "bad magic {magic:02x?}; not a checkpoint file"
        )));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported checkpoint version {version} (expected {VERSION})"
        )));
    }
    let endian = read_u32(&mut r)?;
    if endian != ENDIAN_TAG {
        return Err(Error::Checkpoint(format!(
            "endianness tag mismatch: {endian:#010x}"
        )));
    }
    let dim = read_u32(&mut r)? as usize;
    let n = read_u32(&mut r)? as usize;
    let grid = Grid::new(dim, n)?;
    let t = read_f64(&mut r)?;
    let step_count = read_u64(&mut r)?;
    let dissipation_integral = read_f64(&mut r)?;
    let raw: Vec<f64> = (0..6).map(|_| read_f64(&mut r)).collect::<Result<_>>()?;
    let params = ModelParams {
        k: raw[0],
        b: raw[1],
        nu: raw[2],
        eta: raw[3],
        mu: raw[4],
        alpha: raw[5],
    };
    params.validate()?;
    if !(t.is_finite() && dissipation_integral.is_finite()) {
        return Err(Error::Checkpoint(format!(
            "non-finite header values: t = {t}, dissipation = {dissipation_integral}"
        )));
    }
    let u = read_field(&mut r, grid, Rank::Vector)?;
    let tau = read_field(&mut r, grid, Rank::SymTensor)?;
    let mut trailing = [0u8; 1];
    match r.read(&mut trailing)? {
        0 => {}
        _ => {
            return Err(Error::Checkpoint(
                "trailing data after the stress coefficients".into(),
            ))
        }
    }
    if u.has_non_finite() || tau.has_non_finite() {
        return Err(Error::Checkpoint("non-finite field coefficients".into()));
    }
    Ok(Checkpoint {
        params,
        state: SimState {
            t,
            u,
            tau,
            step_count,
            dissipation_integral,
        },
    })
}

/// Reads a checkpoint for resuming on a known grid, refusing a mismatch.
pub fn resume_checkpoint(path: &Path, grid: Grid) -> Result<Checkpoint> {
    let ck = read_checkpoint(path)?;
    let found = ck.state.u.grid();
    if found.dim() != grid.dim() || found.n() != grid.n() {
        return Err(Error::Checkpoint(format!(
            "grid mismatch: checkpoint is {}D n = {}, run wants {}D n = {}",
            found.dim(),
            found.n(),
            grid.dim(),
            grid.n()
        )));
    }
    Ok(ck)
}

fn write_field(w: &mut impl Write, f: &SpectralField) -> Result<()> {
    let comps = f.rank().components(f.grid().dim());
    write_u32(w, comps as u32)?;
    for c in 0..comps {
        for v in f.comp(c) {
            write_f64(w, v.re)?;
            write_f64(w, v.im)?;
        }
    }
    Ok(())
}

fn read_field(r: &mut impl Read, grid: Grid, rank: Rank) -> Result<SpectralField> {
    let expected = rank.components(grid.dim());
    let comps = read_u32(r)? as usize;
    if comps != expected {
        return Err(Error::Checkpoint(format!(
            "component count {comps} does not match the expected {expected}"
        )));
    }
    let mut f = SpectralField::zeros(grid, rank);
    for c in 0..comps {
        let comp = f.comp_mut(c);
        for v in comp.iter_mut() {
            let re = read_f64(r)?;
            let im = read_f64(r)?;
            *v = Complex64::new(re, im);
        }
    }
    Ok(f)
}

fn write_u32(w: &mut impl Write, v: u32) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

fn write_u64(w: &mut impl Write, v: u64) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

fn write_f64(w: &mut impl Write, v: f64) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == ErrorKind::UnexpectedEof {
            Error::Checkpoint("file truncated".into())
        } else {
            Error::Io(e)
        }
    })
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

// ------------------------------------------------------------------
// Series files
// ------------------------------------------------------------------

/// Writes the diagnostic series as CSV: the fixed header, then one row per
/// record at full precision. An empty series produces a header-only file.
pub fn emit_series(path: &Path, records: &[TimeSeriesRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", TimeSeriesRecord::CSV_HEADER)?;
    for rec in records {
        writeln!(w, "{}", rec.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a series file back; an exact inverse of [`emit_series`].
pub fn read_series(path: &Path) -> Result<Vec<TimeSeriesRecord>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Data("series file is empty (missing header)".into()))?;
    if header != TimeSeriesRecord::CSV_HEADER {
        return Err(Error::Data(format!("unexpected series header '{header}'")));
    }
    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let values: Vec<f64> = line
            .split(',')
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    Error::Data(format!("row {}: bad value '{s}'", idx + 1))
                })
            })
            .collect::<Result<_>>()?;
        if values.len() != 11 {
            return Err(Error::Data(format!(
                "row {}: expected 11 columns, found {}",
                idx + 1,
                values.len()
            )));
        }
        out.push(TimeSeriesRecord {
            t: values[0],
            l2_u: values[1],
            h1_u: values[2],
            hm1_u: values[3],
            l2_tau: values[4],
            h1_tau: values[5],
            hs_tau: values[6],
            l2_gamma: values[7],
            besov_u: values[8],
            energy: values[9],
            budget_residual: values[10],
        });
    }
    Ok(out)
}

// ------------------------------------------------------------------
// JSON reports and config echoes
// ------------------------------------------------------------------

/// Writes any serializable value as pretty JSON (reports, fit summaries,
/// config echoes).
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Data(format!("serialization failed: {e}")))?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Reads a JSON value written by [`write_json`].
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

// ------------------------------------------------------------------
// Run directories
// ------------------------------------------------------------------

/// Creates a fresh directory `base/name`, never reusing an existing one:
/// on collision the name gets a timestamp (and, failing that, a counter)
/// suffix. Returns the path actually created.
pub fn create_run_dir(base: &Path, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(base)?;
    let try_create = |candidate: PathBuf| -> Result<Option<PathBuf>> {
        match fs::create_dir(&candidate) {
            Ok(()) => Ok(Some(candidate)),
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Ok(None),
            Err(e) => Err(e.into()),
        }
    };
    if let Some(dir) = try_create(base.join(name))? {
        return Ok(dir);
    }
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    if let Some(dir) = try_create(base.join(format!("{name}-{stamp}")))? {
        return Ok(dir);
    }
    for i in 2.. {
        if let Some(dir) = try_create(base.join(format!("{name}-{stamp}-{i}")))? {
            return Ok(dir);
        }
    }
    unreachable!("the counter loop always finds a free name");
}
