//! CSV emission: comma separated, `\n` line endings, one header row.

use std::io::{self, Write};

use ibg_core::harness::{RunResult, WelfareRow};
use ibg_core::model::DecisionMatrix;

pub const WELFARE_HEADER: &str = "w,strategy,mean_welfare,stderr,realizations";
pub const LEARNING_CURVE_HEADER: &str = "slot,dish,strong_distance,weak_distance";
pub const PER_CUSTOMER_HEADER: &str = "slot,customer,cumulative_utility";
pub const NE_MATRIX_HEADER: &str = "dish,customer,decision";

/// `%g` with six significant digits: fixed notation for exponents in
/// `-4..6`, scientific otherwise, trailing zeros dropped.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // the exponent after rounding to six digits decides the notation
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_welfare<W: Write + ?Sized>(out: &mut W, rows: &[WelfareRow]) -> io::Result<()> {
    writeln!(out, "{WELFARE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_g(r.w),
            r.strategy,
            fmt_g(r.mean_welfare),
            fmt_g(r.stderr),
            r.realizations
        )?;
    }
    Ok(())
}

/// One row per slot and dish; `strong_distance` is the dish's own distance.
pub fn write_learning_curve<W: Write + ?Sized>(out: &mut W, run: Option<&RunResult>) -> io::Result<()> {
    writeln!(out, "{LEARNING_CURVE_HEADER}")?;
    let Some(run) = run else { return Ok(()) };
    let c = &run.convergence;
    for (t, (strong, weak)) in c.strong_per_dish.iter().zip(&c.weak_distance).enumerate() {
        for (j, (s, w)) in strong.iter().zip(weak).enumerate() {
            writeln!(out, "{t},{j},{},{}", fmt_g(*s), fmt_g(*w))?;
        }
    }
    Ok(())
}

pub fn write_per_customer<W: Write + ?Sized>(out: &mut W, run: Option<&RunResult>) -> io::Result<()> {
    writeln!(out, "{PER_CUSTOMER_HEADER}")?;
    let Some(run) = run else { return Ok(()) };
    for (t, totals) in run.cumulative.iter().enumerate() {
        for (i, u) in totals.iter().enumerate() {
            writeln!(out, "{t},{i},{}", fmt_g(*u))?;
        }
    }
    Ok(())
}

pub fn write_ne_matrix<W: Write + ?Sized>(out: &mut W, d: &DecisionMatrix) -> io::Result<()> {
    writeln!(out, "{NE_MATRIX_HEADER}")?;
    for j in 0..d.dishes() {
        for i in 0..d.customers() {
            writeln!(out, "{j},{i},{}", u8::from(d.get(j, i)))?;
        }
    }
    Ok(())
}

/// Reads a matrix written by [`write_ne_matrix`].
pub fn read_ne_matrix(text: &str) -> Result<DecisionMatrix, String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(NE_MATRIX_HEADER) {
        return Err(format!("expected header `{NE_MATRIX_HEADER}`"));
    }
    let mut cells = Vec::new();
    for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<usize>, _> = fields.iter().map(|f| f.parse::<usize>()).collect();
        match parsed.as_deref() {
            Ok([j, i, v]) if *v <= 1 => cells.push((*j, *i, *v == 1)),
            _ => return Err(format!("line {}: expected `dish,customer,0|1`", k + 2)),
        }
    }
    let dishes = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let customers = cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
    if dishes * customers != cells.len() {
        return Err(format!("{} cells do not fill a {dishes}x{customers} grid", cells.len()));
    }
    let mut d = DecisionMatrix::zeros(dishes, customers);
    let mut seen = vec![false; dishes * customers];
    for (j, i, v) in cells {
        if std::mem::replace(&mut seen[j * customers + i], true) {
            return Err(format!("cell ({j}, {i}) appears twice"));
        }
        d.set(j, i, v);
    }
    Ok(d)
}
