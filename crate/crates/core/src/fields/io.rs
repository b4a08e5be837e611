//! Field (de)serialization.
//!
//! Two layouts, both self-describing and carrying the same header data
//! (dims, then per-axis lower/upper/points/boundary), followed by row-major
//! values. Values are stored as `f64` on disk regardless of the in-memory
//! scalar type.
//!
//! CSV (text):
//! ```text
//! ontoqm-field,v1,scalar          (or complex)
//! dims,2
//! axis,0,-8,8,256,vanishing
//! axis,1,-8,8,256,vanishing
//! values
//! 1.25e-3                          (complex rows: re,im)
//! ...
//! ```
//!
//! Binary (little-endian): magic `OQF1`, kind byte (0 scalar / 1 complex),
//! u32 dims, per axis `f64 lower, f64 upper, u64 points, u8 boundary`
//! (0 periodic / 1 vanishing), then the values.

use std::io::{BufRead, Read, Write};

use num_complex::Complex;

use crate::error::{Result, SimError};
use crate::fields::complex_field::ComplexField;
use crate::fields::grid::{Axis, Boundary, Grid};
use crate::fields::scalar_field::ScalarField;
use crate::scalar::Real;

const MAGIC: &[u8; 4] = b"OQF1";

fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::Periodic => "periodic",
        Boundary::Vanishing => "vanishing",
    }
}

fn parse_boundary(s: &str) -> Result<Boundary> {
    match s {
        "periodic" => Ok(Boundary::Periodic),
        "vanishing" => Ok(Boundary::Vanishing),
        other => Err(SimError::Parse(format!("unknown boundary policy '{other}'"))),
    }
}

fn write_csv_header<T: Real, W: Write>(w: &mut W, grid: &Grid<T>, kind: &str) -> Result<()> {
    writeln!(w, "ontoqm-field,v1,{kind}")?;
    writeln!(w, "dims,{}", grid.dims())?;
    for (a, ax) in grid.axes().iter().enumerate() {
        writeln!(
            w,
            "axis,{a},{},{},{},{}",
            ax.lower.to64(),
            ax.upper.to64(),
            ax.points,
            boundary_name(ax.boundary)
        )?;
    }
    writeln!(w, "values")?;
    Ok(())
}

fn read_csv_header<T: Real>(lines: &mut impl Iterator<Item = std::io::Result<String>>, expect_kind: &str) -> Result<Grid<T>> {
    let mut next = || -> Result<String> {
        lines
            .next()
            .ok_or_else(|| SimError::Parse("truncated field file".into()))?
            .map_err(SimError::Io)
    };
    let head = next()?;
    let mut parts = head.split(',');
    if parts.next() != Some("ontoqm-field") || parts.next() != Some("v1") {
        return Err(SimError::Parse("not an ontoqm field file".into()));
    }
    let kind = parts.next().unwrap_or("");
    if kind != expect_kind {
        return Err(SimError::Parse(format!("expected a {expect_kind} field, found '{kind}'")));
    }
    let dims_line = next()?;
    let dims: usize = dims_line
        .strip_prefix("dims,")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| SimError::Parse("bad dims line".into()))?;
    let mut axes = Vec::with_capacity(dims);
    for a in 0..dims {
        let line = next()?;
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 || f[0] != "axis" || f[1] != a.to_string() {
            return Err(SimError::Parse(format!("bad axis line '{line}'")));
        }
        let lower: f64 = f[2].parse().map_err(|_| SimError::Parse("bad axis lower".into()))?;
        let upper: f64 = f[3].parse().map_err(|_| SimError::Parse("bad axis upper".into()))?;
        let points: usize = f[4].parse().map_err(|_| SimError::Parse("bad axis points".into()))?;
        axes.push(Axis::new(T::of(lower), T::of(upper), points, parse_boundary(f[5])?));
    }
    let marker = next()?;
    if marker != "values" {
        return Err(SimError::Parse("missing 'values' marker".into()));
    }
    Grid::new(axes)
}

/// Write a scalar field in the CSV layout.
pub fn write_scalar_csv<T: Real, W: Write>(field: &ScalarField<T>, w: &mut W) -> Result<()> {
    write_csv_header(w, field.grid(), "scalar")?;
    for v in field.values() {
        writeln!(w, "{}", v.to64())?;
    }
    Ok(())
}

/// Read a scalar field from the CSV layout.
pub fn read_scalar_csv<T: Real, R: Read>(r: R) -> Result<ScalarField<T>> {
    let reader = std::io::BufReader::new(r);
    let mut lines = reader.lines();
    let grid = read_csv_header::<T>(&mut lines, "scalar")?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line.map_err(SimError::Io)?;
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| SimError::Parse(format!("bad value '{line}'")))?;
        values.push(T::of(v));
    }
    ScalarField::new(grid, values)
}

/// Write a complex field in the CSV layout (`re,im` rows).
pub fn write_complex_csv<T: Real, W: Write>(field: &ComplexField<T>, w: &mut W) -> Result<()> {
    write_csv_header(w, field.grid(), "complex")?;
    for v in field.values() {
        writeln!(w, "{},{}", v.re.to64(), v.im.to64())?;
    }
    Ok(())
}

/// Read a complex field from the CSV layout.
pub fn read_complex_csv<T: Real, R: Read>(r: R) -> Result<ComplexField<T>> {
    let reader = std::io::BufReader::new(r);
    let mut lines = reader.lines();
    let grid = read_csv_header::<T>(&mut lines, "complex")?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line.map_err(SimError::Io)?;
        if line.is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| SimError::Parse(format!("bad complex row '{line}'")))?;
        let re: f64 = re.parse().map_err(|_| SimError::Parse("bad re".into()))?;
        let im: f64 = im.parse().map_err(|_| SimError::Parse("bad im".into()))?;
        values.push(Complex::new(T::of(re), T::of(im)));
    }
    ComplexField::new(grid, values)
}

fn write_binary_header<T: Real, W: Write>(w: &mut W, grid: &Grid<T>, kind: u8) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&[kind])?;
    w.write_all(&(grid.dims() as u32).to_le_bytes())?;
    for ax in grid.axes() {
        w.write_all(&ax.lower.to64().to_le_bytes())?;
        w.write_all(&ax.upper.to64().to_le_bytes())?;
        w.write_all(&(ax.points as u64).to_le_bytes())?;
        w.write_all(&[match ax.boundary {
            Boundary::Periodic => 0u8,
            Boundary::Vanishing => 1u8,
        }])?;
    }
    Ok(())
}

fn read_binary_header<T: Real, R: Read>(r: &mut R, expect_kind: u8) -> Result<Grid<T>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SimError::Parse("not an ontoqm binary field file".into()));
    }
    let mut kind = [0u8; 1];
    r.read_exact(&mut kind)?;
    if kind[0] != expect_kind {
        return Err(SimError::Parse("field kind mismatch".into()));
    }
    let mut dims = [0u8; 4];
    r.read_exact(&mut dims)?;
    let dims = u32::from_le_bytes(dims) as usize;
    let mut axes = Vec::with_capacity(dims);
    for _ in 0..dims {
        let mut f = [0u8; 8];
        r.read_exact(&mut f)?;
        let lower = f64::from_le_bytes(f);
        r.read_exact(&mut f)?;
        let upper = f64::from_le_bytes(f);
        r.read_exact(&mut f)?;
        let points = u64::from_le_bytes(f) as usize;
        let mut b = [0u8; 1];
        r.read_exact(&mut b)?;
        let boundary = match b[0] {
            0 => Boundary::Periodic,
            1 => Boundary::Vanishing,
            other => return Err(SimError::Parse(format!("unknown boundary byte {other}"))),
        };
        axes.push(Axis::new(T::of(lower), T::of(upper), points, boundary));
    }
    Grid::new(axes)
}

pub fn write_scalar_binary<T: Real, W: Write>(field: &ScalarField<T>, w: &mut W) -> Result<()> {
    write_binary_header(w, field.grid(), 0)?;
    for v in field.values() {
        w.write_all(&v.to64().to_le_bytes())?;
    }
    Ok(())
}

pub fn read_scalar_binary<T: Real, R: Read>(mut r: R) -> Result<ScalarField<T>> {
    let grid = read_binary_header::<T, _>(&mut r, 0)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut buf = [0u8; 8];
    for _ in 0..grid.len() {
        r.read_exact(&mut buf)?;
        values.push(T::of(f64::from_le_bytes(buf)));
    }
    ScalarField::new(grid, values)
}

pub fn write_complex_binary<T: Real, W: Write>(field: &ComplexField<T>, w: &mut W) -> Result<()> {
    write_binary_header(w, field.grid(), 1)?;
    for v in field.values() {
        w.write_all(&v.re.to64().to_le_bytes())?;
        w.write_all(&v.im.to64().to_le_bytes())?;
    }
    Ok(())
}

pub fn read_complex_binary<T: Real, R: Read>(mut r: R) -> Result<ComplexField<T>> {
    let grid = read_binary_header::<T, _>(&mut r, 1)?;
    let mut values = Vec::with_capacity(grid.len());
    let mut buf = [0u8; 8];
    for _ in 0..grid.len() {
        r.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        let im = f64::from_le_bytes(buf);
        values.push(Complex::new(T::of(re), T::of(im)));
    }
    ComplexField::new(grid, values)
}
