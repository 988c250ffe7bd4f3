//! Fixed-precision report output: tables, JSON documents and the
//! reproducibility header every run writes.

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::construct::SweepRow;

/// Significant digits of every number in a report.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with 12 significant digits, without trailing zeros; exponent form
/// outside `[1e-5, 1e12)`.
pub fn fmt_sig(x: f64) -> String {
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
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        fmt_sig(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// Rounds every float in a JSON tree; integers are left alone.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round_sig(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproHeader {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub args: Value,
}

impl ReproHeader {
    pub fn new(command: &str, config: &RunConfig, args: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: config.random_seed,
            config: config.clone(),
            args,
        }
    }

    /// One `# `-prefixed line for CSV output.
    pub fn comment_line(&self) -> String {
        let json = serde_json::to_string(&round_json(
            serde_json::to_value(self).expect("header serializes"),
        ))
        .expect("header serializes");
        format!("# {json}\n")
    }
}

/// `{"header": …, "result": …}` with floats rounded, pretty-printed.
pub fn json_document<T: Serialize>(header: &ReproHeader, result: &T) -> serde_json::Result<String> {
    let doc = serde_json::json!({
        "header": serde_json::to_value(header)?,
        "result": serde_json::to_value(result)?,
    });
    let mut s = serde_json::to_string_pretty(&round_json(doc))?;
    s.push('\n');
    Ok(s)
}

pub const SWEEP_HEADER: &str = "t,q,crossing_number,alpha_best,alpha_worst,ratio_to_lower_bound";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.t,
            r.q,
            r.crossing_number,
            fmt_sig(r.alpha_best),
            fmt_sig(r.alpha_worst),
            fmt_sig(r.ratio_to_lower_bound)
        ));
    }
    out
}

/// Ratios of the correction table: 1.0–2.5 by 0.1 and 3.0–10 by 0.5, then 20.
pub fn correction_ratios() -> Vec<f64> {
    let mut v: Vec<f64> = (10..=25).map(|k| f64::from(k) / 10.0).collect();
    v.extend((6..=20).map(|k| f64::from(k) / 2.0));
    v.push(20.0);
    v
}

/// Two side-by-side blocks, like the printed layout:
/// `ratio,p1,p2,p3,ratio,p1,p2,p3`.
pub fn correction_table_csv(cell: impl Fn(f64, u32) -> f64) -> String {
    let ratios = correction_ratios();
    let (left, right) = ratios.split_at(ratios.len() / 2);
    let mut out = String::from("ratio,p1,p2,p3,ratio,p1,p2,p3\n");
    for (a, b) in left.iter().zip(right) {
        let mut fields = Vec::with_capacity(8);
        for r in [*a, *b] {
            fields.push(fmt_sig(r));
            fields.extend((1..=3).map(|p| format!("{:.7}", cell(r, p))));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_sig(-0.000123456789012345), "-0.000123456789012");
        assert_eq!(fmt_sig(1.5e20), "1.5e20");
        assert_eq!(fmt_sig(2.5e-9), "2.5e-9");
        assert_eq!(fmt_sig(52203.0), "52203");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [1.0 / 3.0, 123_456.789_012_345_67, 9.999999999999999] {
            let r = round_sig(x);
            assert_eq!(round_sig(r), r);
        }
    }

    #[test]
    fn table_has_32_rows_of_96_cells() {
        assert_eq!(correction_ratios().len(), 32);
        let csv = correction_table_csv(|_, _| 1.0);
        assert_eq!(csv.lines().count(), 17);
        let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(first[0], "1");
        assert_eq!(first[4], "3");
    }
}
