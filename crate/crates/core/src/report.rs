//! Row model and CSV rendering for counting runs.

use std::io::{self, Write};

use crate::asymptotics::{main_term_algebraic, main_term_vectors};
use crate::enumeration::{classify_by_ideal, count_algebraic, enumerate_vectors, EnumerationOptions, EnumerationResult};
use crate::heights::weil_height;
use crate::mahler::mahler_k;
use crate::numberfield::{FieldElement, Omega, PlaceSet};
use crate::rational::{format_sig, from_f64_sig, parse, to_decimal, to_f64, Rational};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "H,count,main_term,ratio,ideals,candidates,millis";

/// What a grid run counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountKind {
    /// Points of `O_S^n`.
    Vectors { n: u32 },
    /// Algebraic numbers of degree `e` integral over `O_S`.
    Algebraic { e: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountRow {
    pub h: Rational,
    pub count: u128,
    /// `None` outside the asymptotic regime `H >= 2`.
    pub main_term: Option<f64>,
    pub ideals: usize,
    pub candidates: u128,
    pub millis: u128,
}

impl CountRow {
    pub fn ratio(&self) -> Option<f64> {
        self.main_term.map(|m| self.count as f64 / m)
    }

    pub fn csv_line(&self, timing: bool) -> String {
        let na = || "NA".to_string();
        format!(
            "{},{},{},{},{},{},{}",
            to_decimal(&self.h),
            self.count,
            self.main_term.map(|m| format_sig(m, 15)).unwrap_or_else(na),
            self.ratio().map(|r| format_sig(r, 15)).unwrap_or_else(na),
            self.ideals,
            self.candidates,
            if timing { self.millis.to_string() } else { na() },
        )
    }
}

/// Parses a grid given either as a comma separated list of exact numbers or
/// as `from:to:steps`, a geometric progression whose interior values are
/// rounded to 12 significant digits. The result is sorted and deduplicated.
pub fn parse_grid(spec: &str) -> Result<Vec<Rational>> {
    let mut values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!("grid {spec:?} is not from:to:steps")));
        }
        let from = parse(parts[0])?;
        let to = parse(parts[1])?;
        let steps: u32 = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("grid steps {:?} is not a positive integer", parts[2])))?;
        geometric(&from, &to, steps)?
    } else {
        spec.split(',').map(parse).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(Error::Config("empty grid".into()));
    }
    if let Some(bad) = values.iter().find(|h| **h <= Rational::from_integer(0.into())) {
        return Err(Error::Config(format!("grid height {bad} is not positive")));
    }
    values.sort();
    values.dedup();
    Ok(values)
}

pub fn geometric(from: &Rational, to: &Rational, steps: u32) -> Result<Vec<Rational>> {
    if steps == 0 {
        return Err(Error::Config("grid needs at least one step".into()));
    }
    let zero = Rational::from_integer(0.into());
    if *from <= zero || *to < *from {
        return Err(Error::Config(format!("grid range {from}:{to} is not increasing and positive")));
    }
    if steps == 1 {
        return Ok(vec![from.clone()]);
    }
    let (a, b) = (to_f64(from).ln(), to_f64(to).ln());
    let mut out = vec![from.clone()];
    for i in 1..steps - 1 {
        let t = i as f64 / (steps - 1) as f64;
        out.push(from_f64_sig((a + (b - a) * t).exp(), 12));
    }
    out.push(to.clone());
    Ok(out)
}

fn main_term(ps: &PlaceSet, kind: CountKind, h: &Rational) -> Option<f64> {
    let hf = to_f64(h);
    match kind {
        CountKind::Vectors { n } => main_term_vectors(ps, n, hf).ok(),
        CountKind::Algebraic { e } => main_term_algebraic(ps, e, hf).ok(),
    }
}

pub fn run_one(ps: &PlaceSet, kind: CountKind, h: &Rational, opts: &EnumerationOptions) -> Result<EnumerationResult> {
    match kind {
        CountKind::Vectors { n } => enumerate_vectors(ps, n, h, opts),
        CountKind::Algebraic { e } => count_algebraic(ps, e, h, opts),
    }
}

pub fn row_from(ps: &PlaceSet, kind: CountKind, h: &Rational, res: &EnumerationResult) -> CountRow {
    CountRow {
        h: h.clone(),
        count: res.count,
        main_term: main_term(ps, kind, h),
        ideals: res.per_ideal.len(),
        candidates: res.candidates,
        millis: res.millis,
    }
}

/// One row per grid height, in increasing order of `H`.
pub fn count_rows(ps: &PlaceSet, kind: CountKind, grid: &[Rational], opts: &EnumerationOptions) -> Result<Vec<CountRow>> {
    let mut grid = grid.to_vec();
    grid.sort();
    grid.iter().map(|h| Ok(row_from(ps, kind, h, &run_one(ps, kind, h, opts)?))).collect()
}

pub fn write_csv<W: Write>(w: &mut W, rows: &[CountRow], timing: bool) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line(timing))?;
    }
    Ok(())
}

pub fn csv_string(rows: &[CountRow], timing: bool) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows, timing).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn coord_header(prefix: &str, count: usize, quadratic: bool) -> Vec<String> {
    let mut h = Vec::new();
    for u in 1..=count {
        if quadratic {
            h.push(format!("{prefix}{u}_x"));
            h.push(format!("{prefix}{u}_y"));
        } else {
            h.push(format!("{prefix}{u}_num"));
        }
        h.push(format!("{prefix}{u}_den"));
    }
    h
}

fn coord_cells(a: &FieldElement, quadratic: bool, out: &mut Vec<String>) {
    let (x, y, den) = a.integral_repr();
    out.push(x.to_string());
    if quadratic {
        out.push(y.to_string());
    }
    out.push(den.to_string());
}

/// Header of [`write_materialized`] output.
pub fn materialized_header(ps: &PlaceSet, kind: CountKind) -> String {
    let quadratic = ps.field.omega != Omega::Rational;
    let (prefix, width) = match kind {
        CountKind::Vectors { n } => ("a", n as usize),
        CountKind::Algebraic { e } => ("c", e as usize),
    };
    let mut header = vec!["H".to_string()];
    header.extend(coord_header(prefix, width, quadratic));
    header.push("height".into());
    header.push("ideal".into());
    header.join(",")
}

/// One CSV row per materialised point (`(x + y omega) / den` per coordinate)
/// or polynomial (its non-leading coefficients `a_1 .. a_e`, highest first),
/// after the grid height and followed by the decimal height and the
/// classifying ideal exponents.
pub fn write_materialized<W: Write>(
    w: &mut W,
    ps: &PlaceSet,
    kind: CountKind,
    h: &Rational,
    res: &EnumerationResult,
) -> Result<()> {
    let quadratic = ps.field.omega != Omega::Rational;
    let io = |e: io::Error| Error::Config(format!("writing output: {e}"));
    let rows: Vec<(Vec<FieldElement>, f64)> = match kind {
        CountKind::Vectors { .. } => res
            .points
            .iter()
            .map(|p| Ok((p.clone(), weil_height(&ps.field, p)?.value)))
            .collect::<Result<_>>()?,
        CountKind::Algebraic { e } => res
            .polys
            .iter()
            .map(|f| {
                let coeffs: Vec<FieldElement> = (1..=e as usize).map(|j| f.coeff_of_power(e as usize - j)).collect();
                Ok((coeffs, mahler_k(&ps.field, f)?.value.powf(1.0 / e as f64)))
            })
            .collect::<Result<_>>()?,
    };
    for (coords, height) in rows {
        let mut cells = vec![to_decimal(h)];
        for a in &coords {
            coord_cells(a, quadratic, &mut cells);
        }
        cells.push(format_sig(height, 15));
        cells.push(classify_by_ideal(ps, &coords)?.label());
        writeln!(w, "{}", cells.join(",")).map_err(io)?;
    }
    Ok(())
}
