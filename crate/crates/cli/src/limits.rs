//! Memory cap from `BUTTERFLY_MEM_MB`, checked against rough per-command estimates.

use anyhow::{bail, Result};
use butterfly_core::butterfly::vertex_count;
use butterfly_core::Error;

pub const ENV_VAR: &str = "BUTTERFLY_MEM_MB";
const DEFAULT_MB: u64 = 4096;

/// Bytes per vertex of a generated butterfly with both labelings.
const BYTES_PER_VERTEX: u64 = 96;

pub fn cap_bytes() -> Result<u64> {
    match std::env::var(ENV_VAR) {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(mb) if mb > 0 => Ok(mb << 20),
            _ => bail!(Error::Domain(format!("{ENV_VAR} must be a positive number of megabytes, got {v:?}"))),
        },
        Err(_) => Ok(DEFAULT_MB << 20),
    }
}

/// Vertex cap to hand to the generator.
pub fn max_vertices() -> Result<usize> {
    Ok((cap_bytes()? / BYTES_PER_VERTEX).min(usize::MAX as u64) as usize)
}

pub fn require(bytes: u64, what: &str) -> Result<()> {
    let cap = cap_bytes()?;
    if bytes > cap {
        bail!(Error::Resource(format!(
            "{what} needs about {} MiB, above the {} MiB cap set by {ENV_VAR}",
            bytes >> 20,
            cap >> 20
        )));
    }
    Ok(())
}

/// Dense bit-packed elimination on an `n × n` matrix.
pub fn dense_gf2_bytes(n: usize) -> u64 {
    let n = n as u64;
    n * n.div_ceil(64) * 8
}

pub fn butterfly_bytes(r: u32) -> u64 {
    vertex_count(r).map_or(u64::MAX, |n| n as u64 * BYTES_PER_VERTEX)
}
