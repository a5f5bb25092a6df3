//! Binary dump of dense complex matrices for debugging.
//!
//! Layout, little-endian throughout:
//!
//! | bytes  | field                  |
//! |--------|------------------------|
//! | 0..4   | magic `b"CFIE"`        |
//! | 4..8   | kind code (`u32`)      |
//! | 8..16  | `N` (`u64`)            |
//! | 16..24 | `Re k` (`f64`)         |
//! | 24..32 | `Im k` (`f64`)         |
//!
//! followed by `N²` row-major `complex128` entries (real part first).

use std::io::{Read, Write};

use faer::{Mat, MatRef};

use crate::bem::{GalerkinMatrix, OperatorKind};
use crate::{c64, Error, Result};

pub const MAGIC: [u8; 4] = *b"CFIE";
pub const HEADER_BYTES: usize = 32;

/// What a dumped matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpKind {
    SingleLayer,
    DoubleLayer,
    Hypersingular,
    Gram,
    /// The preconditioned system matrix `C`.
    System,
    /// The circle matrix `C_c`.
    CircleSystem,
}

impl DumpKind {
    pub fn code(self) -> u32 {
        match self {
            Self::SingleLayer => 1,
            Self::DoubleLayer => 2,
            Self::Hypersingular => 3,
            Self::Gram => 4,
            Self::System => 5,
            Self::CircleSystem => 6,
        }
    }

    pub fn from_code(code: u32) -> Result<Self> {
        Ok(match code {
            1 => Self::SingleLayer,
            2 => Self::DoubleLayer,
            3 => Self::Hypersingular,
            4 => Self::Gram,
            5 => Self::System,
            6 => Self::CircleSystem,
            _ => return Err(Error::InvalidInput(format!("unknown dump kind code {code}"))),
        })
    }
}

impl From<OperatorKind> for DumpKind {
    fn from(kind: OperatorKind) -> Self {
        match kind {
            OperatorKind::SingleLayer => Self::SingleLayer,
            OperatorKind::DoubleLayer => Self::DoubleLayer,
            OperatorKind::Hypersingular => Self::Hypersingular,
            OperatorKind::Gram => Self::Gram,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DumpHeader {
    pub kind: DumpKind,
    pub n: u64,
    pub k: c64,
}

pub fn write_matrix<W: Write>(mut out: W, kind: DumpKind, k: c64, m: MatRef<'_, c64>) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    let mut header = [0u8; HEADER_BYTES];
    header[0..4].copy_from_slice(&MAGIC);
    header[4..8].copy_from_slice(&kind.code().to_le_bytes());
    header[8..16].copy_from_slice(&(n as u64).to_le_bytes());
    header[16..24].copy_from_slice(&k.re.to_le_bytes());
    header[24..32].copy_from_slice(&k.im.to_le_bytes());
    out.write_all(&header)?;
    let mut row = Vec::with_capacity(16 * n);
    for i in 0..n {
        row.clear();
        for j in 0..n {
            let z = m[(i, j)];
            row.extend_from_slice(&z.re.to_le_bytes());
            row.extend_from_slice(&z.im.to_le_bytes());
        }
        out.write_all(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Dumps an assembled Galerkin matrix with its own kind and wavenumber
/// (zero for the Gram matrix).
pub fn write_galerkin<W: Write>(out: W, m: &GalerkinMatrix) -> Result<()> {
    let k = m.wavenumber.map(|w| w.value()).unwrap_or_default();
    write_matrix(out, m.kind.into(), k, m.entries.as_ref())
}

pub fn read_matrix<R: Read>(mut input: R) -> Result<(DumpHeader, Mat<c64>)> {
    let mut header = [0u8; HEADER_BYTES];
    input.read_exact(&mut header)?;
    if header[0..4] != MAGIC {
        return Err(Error::InvalidInput("not a matrix dump (bad magic)".into()));
    }
    let word = |a: usize| u32::from_le_bytes(header[a..a + 4].try_into().unwrap());
    let long = |a: usize| u64::from_le_bytes(header[a..a + 8].try_into().unwrap());
    let float = |a: usize| f64::from_le_bytes(header[a..a + 8].try_into().unwrap());
    let head = DumpHeader {
        kind: DumpKind::from_code(word(4))?,
        n: long(8),
        k: c64::new(float(16), float(24)),
    };
    let n = usize::try_from(head.n).map_err(|_| Error::InvalidInput("dump too large".into()))?;
    let mut bytes = vec![0u8; 16 * n * n];
    input.read_exact(&mut bytes)?;
    let at = |p: usize| f64::from_le_bytes(bytes[8 * p..8 * p + 8].try_into().unwrap());
    let m = Mat::from_fn(n, n, |i, j| {
        let p = 2 * (i * n + j);
        c64::new(at(p), at(p + 1))
    });
    Ok((head, m))
}
