//! Text formats: numeric formatting for emitted tables and parsers for the
//! small inputs accepted on the command line.

use crate::error::{Error, Result};
use crate::fitting::DepthSeries;

/// Formats with 9 significant digits in the style of C's `%.9g`.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn parse_err(line: usize, detail: impl Into<String>) -> Error {
    Error::Parse {
        line,
        detail: detail.into(),
    }
}

/// Two-column `ell,value` CSV. A non-numeric first line is a header; blank
/// lines and lines starting with `#` are skipped.
pub fn parse_depth_series(text: &str) -> Result<DepthSeries> {
    let header_candidate = first_content_line(text);
    let mut points = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(parse_err(
                line_no,
                format!("expected 2 columns, found {}", fields.len()),
            ));
        }
        match (fields[0].parse::<f64>(), fields[1].parse::<f64>()) {
            (Ok(ell), Ok(value)) => {
                if !(ell.is_finite() && value.is_finite()) {
                    return Err(parse_err(line_no, "values must be finite"));
                }
                points.push((ell, value));
            }
            _ if index == header_candidate => continue,
            _ => return Err(parse_err(line_no, format!("non-numeric row `{line}`"))),
        }
    }
    DepthSeries::new(points).map_err(|e| parse_err(0, e.to_string()))
}

fn first_content_line(text: &str) -> usize {
    text.lines()
        .position(|l| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .unwrap_or(0)
}

/// `from:to:step`, inclusive of `to` up to rounding.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(parse_err(0, format!("range `{spec}` must be from:to:step")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(0, format!("range `{spec}` has a non-numeric part")))?;
    let (from, to, step) = (nums[0], nums[1], nums[2]);
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || to < from {
        return Err(parse_err(
            0,
            format!("range `{spec}` needs finite from <= to and step > 0"),
        ));
    }
    let steps = ((to - from) / step + 1e-9).floor();
    if steps.is_nan() || steps >= 1_000_000.0 {
        return Err(parse_err(0, format!("range `{spec}` has too many points")));
    }
    let count = steps as usize + 1;
    Ok((0..count).map(|i| from + step * i as f64).collect())
}

/// Comma-separated numbers.
pub fn parse_number_list(spec: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = spec
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_err(0, format!("`{p}` is not a finite number")))
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(parse_err(0, "empty list"));
    }
    Ok(out)
}

/// Exit-set variants: `9,37;9,19,37`.
pub fn parse_exit_variants(spec: &str) -> Result<Vec<Vec<usize>>> {
    spec.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| parse_err(0, format!("`{p}` is not a layer index")))
                })
                .collect()
        })
        .collect()
}

/// Validation grid: `q=6,7,8,10;ell=5,15,25,35`.
pub fn parse_grid(spec: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut qs = None;
    let mut ells = None;
    for part in spec.split(';') {
        let (key, values) = part
            .split_once('=')
            .ok_or_else(|| parse_err(0, format!("grid part `{part}` must be key=list")))?;
        let list = parse_number_list(values)?;
        match key.trim() {
            "q" => qs = Some(list),
            "ell" => ells = Some(list),
            other => return Err(parse_err(0, format!("unknown grid key `{other}`"))),
        }
    }
    match (qs, ells) {
        (Some(q), Some(e)) => Ok((q, e)),
        _ => Err(parse_err(0, "grid needs both q= and ell= lists")),
    }
}
