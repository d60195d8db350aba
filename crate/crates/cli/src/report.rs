//! Run reports: the `qml-report/1` JSON document, spectral profile
//! serialization, and CSV emission (one file per profile under
//! `profiles/`, 17 significant digits, `.` decimal separator).

use qmod_core::{fit_decay, schatten_1inf_indicator, SpectralProfile, VerificationReport};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

#[derive(Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    /// The only field allowed to differ between identical runs.
    pub timestamp: String,
    pub command: String,
    pub config: BTreeMap<String, serde_json::Value>,
    pub reports: Vec<VerificationReport>,
    pub profiles: Vec<NamedProfile>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<DimRow>,
}

#[derive(Serialize)]
pub struct DimRow {
    pub component: String,
    pub degree: u32,
    pub ideal_dim: usize,
    pub quotient_dim: usize,
}

#[derive(Serialize)]
pub struct ProfileRow {
    pub degree: u32,
    pub singular_values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_im: Option<f64>,
    pub trusted: bool,
}

#[derive(Serialize)]
pub struct NamedProfile {
    pub name: String,
    pub shift: u32,
    pub rows: Vec<ProfileRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indicator_max: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indicator_table: Vec<(u32, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_r_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl NamedProfile {
    /// Wrap a spectral profile; degree-preserving (shift 0) operators also get
    /// the weak-trace-class indicator, a block-norm decay fit, and a verdict.
    pub fn from_profile(name: &str, p: &SpectralProfile, max_degree: u32) -> Self {
        let rows = p
            .rows
            .iter()
            .map(|r| ProfileRow {
                degree: r.degree,
                singular_values: r.singulars.clone(),
                trace_re: r.trace.map(|t| t.re),
                trace_im: r.trace.map(|t| t.im),
                trusted: r.trusted,
            })
            .collect();
        let mut out = NamedProfile {
            name: name.to_string(),
            shift: p.shift,
            rows,
            indicator_max: None,
            indicator_table: Vec::new(),
            decay_exponent: None,
            decay_r_squared: None,
            verdict: None,
        };
        if p.shift == 0 {
            let (max, table) = schatten_1inf_indicator(p);
            // bounded evidence: the tail of the table has stopped growing
            // (last value within 10% of the running maximum)
            let last = table.last().map(|&(_, v)| v).unwrap_or(0.0);
            out.verdict = Some(if last <= 1.1 * max && max > 0.0 {
                format!("consistent with (1,∞) at D = {max_degree}")
            } else {
                "not (1,∞)-consistent at this truncation".to_string()
            });
            out.indicator_max = Some(max);
            out.indicator_table = table;
            let norms: Vec<(f64, f64)> = p
                .block_norms()
                .iter()
                .map(|&(k, v)| (k as f64, v))
                .collect();
            let (k_min, k_max) = qmod_core::spectral::default_decay_window(max_degree);
            if let Ok(fit) = fit_decay(&norms, k_min, k_max) {
                out.decay_exponent = Some(fit.exponent);
                out.decay_r_squared = Some(fit.r_squared);
            }
        }
        out
    }
}

/// Serialize the report with every float printed by serde_json's shortest
/// round-trip formatter; field order is fixed by the struct definitions, so
/// two identical runs differ only in the timestamp line.
pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// CSV with columns degree,index,singular_value,trusted; untrusted degrees
/// appear as a single row with an empty value column.
pub fn render_csv(profile: &NamedProfile) -> String {
    let mut out = String::from("degree,index,singular_value,trusted\n");
    for row in &profile.rows {
        if row.singular_values.is_empty() {
            out.push_str(&format!("{},0,,{}\n", row.degree, row.trusted));
            continue;
        }
        for (i, v) in row.singular_values.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", row.degree, i, fmt17(*v), row.trusted));
        }
    }
    out
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sanitize_name(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() { "profile".to_string() } else { s }
}

/// Write report.json and profiles/*.csv. Everything is rendered in memory
/// first; only then are files created, so a failing run leaves no output.
pub fn write_outputs(out_dir: &Path, report: &RunReport) -> std::io::Result<()> {
    let json = render_json(report);
    let csvs: Vec<(String, String)> = report
        .profiles
        .iter()
        .map(|p| (format!("{}.csv", sanitize_name(&p.name)), render_csv(p)))
        .collect();
    std::fs::create_dir_all(out_dir)?;
    let mut f = std::fs::File::create(out_dir.join("report.json"))?;
    f.write_all(json.as_bytes())?;
    if !csvs.is_empty() {
        let pdir = out_dir.join("profiles");
        std::fs::create_dir_all(&pdir)?;
        for (name, body) in csvs {
            std::fs::write(pdir.join(name), body)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for v in [1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 12345.678901234567] {
            let s = fmt17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{s}");
        }
    }

    #[test]
    fn csv_shape_and_separator() {
        let p = NamedProfile {
            name: "t".into(),
            shift: 0,
            rows: vec![
                ProfileRow {
                    degree: 0,
                    singular_values: vec![1.5, 0.25],
                    trace_re: None,
                    trace_im: None,
                    trusted: true,
                },
                ProfileRow {
                    degree: 1,
                    singular_values: vec![],
                    trace_re: None,
                    trace_im: None,
                    trusted: false,
                },
            ],
            indicator_max: None,
            indicator_table: vec![],
            decay_exponent: None,
            decay_r_squared: None,
            verdict: None,
        };
        let csv = render_csv(&p);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "degree,index,singular_value,trusted");
        assert!(lines[1].starts_with("0,0,1.5000000000000000e0,true"));
        assert!(lines[2].starts_with("0,1,2.5000000000000000e-1,true"));
        assert_eq!(lines[3], "1,0,,false");
        assert!(!csv.contains(';'));
    }

    #[test]
    fn sanitized_names_are_filesystem_safe() {
        assert_eq!(sanitize_name("compress S_{z1}"), "compress_s__z1_");
        assert_eq!(sanitize_name(""), "profile");
    }
}
