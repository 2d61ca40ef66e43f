//! Sweep records, CSV emission and number formatting.

use std::io::Write;

use crate::CliError;

pub const CSV_HEADER: &str = "parameter,value,method,graph_id";
const SIGNIFICANT_DIGITS: i32 = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    /// p, e or θ.
    pub parameter: f64,
    pub value: f64,
    pub method: String,
    pub graph_id: String,
}

impl SweepRecord {
    pub fn new(parameter: f64, value: f64, method: impl Into<String>, graph_id: impl Into<String>) -> Self {
        SweepRecord { parameter, value, method: method.into(), graph_id: graph_id.into() }
    }
}

/// Plain decimal with 12 significant digits; `-0` prints as `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return format!("{:.*}", (SIGNIFICANT_DIGITS - 1) as usize, 0.0);
    }
    // Exponent after rounding to 12 significant digits.
    let sci = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, v);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (SIGNIFICANT_DIGITS - 1 - exp).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Integers print without a fractional part; everything else as in
/// [`format_number`] with trailing zeros removed.
pub fn format_short(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let s = format_number(v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Write `records` as CSV. Rows must be nonempty, finite and sorted by
/// parameter.
pub fn emit_csv(records: &[SweepRecord], out: &mut dyn Write) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::EmptySweep);
    }
    if records.windows(2).any(|w| w[1].parameter < w[0].parameter) {
        return Err(CliError::UnsortedSweep);
    }
    if let Some(r) = records.iter().find(|r| !r.parameter.is_finite() || !r.value.is_finite()) {
        return Err(CliError::NotFinite(format!("{} at parameter {}", r.method, r.parameter)));
    }
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for r in records {
        text.push_str(&format!("{},{},{},{}\n", format_number(r.parameter), format_number(r.value), r.method, r.graph_id));
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// `start:stop:step`, inclusive of `stop` to within 1e-12.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("grid {spec:?} is not start:stop:step"));
    let parts: Vec<f64> = spec.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else { return Err(bad()) };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(CliError::Usage(format!("grid {spec:?} needs step > 0 and start <= stop")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    let mut out: Vec<f64> = (0..=count).map(|i| start + i as f64 * step).filter(|&v| v <= stop + 1e-12).collect();
    if let Some(last) = out.last_mut() {
        if (*last - stop).abs() <= 1e-12 {
            *last = stop;
        }
    }
    Ok(out)
}
