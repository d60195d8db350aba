//! Ideal specification documents: JSON schema, validation with field-path
//! errors, and preset expansion into explicit graded ideals.

use num_complex::Complex64 as Cx;
use qmod_core::poly::{HPoly, MultiIndex, ThetaDirection};
use qmod_core::{ideal_power, j_theta, GradedIdeal, QmodError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpecDoc {
    pub d: usize,
    #[serde(default)]
    pub components: Vec<ComponentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presets: Option<PresetDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub name: String,
    pub generators: Vec<GeneratorDoc>,
    pub assumed: Assumed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub coefficients: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub re: f64,
    pub im: f64,
    pub alpha: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Assumed {
    Prime,
    Primary,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetDoc {
    pub kind: PresetKind,
    pub theta: Vec<ReIm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    JTheta,
    JThetaPower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

/// A validated specification: the raw document (for echo and round-trip)
/// plus the expanded graded ideals, one per component with presets appended.
#[derive(Debug, Clone)]
pub struct ParsedSpec {
    pub doc: IdealSpecDoc,
    pub d: usize,
    pub components: Vec<(String, GradedIdeal)>,
}

impl ParsedSpec {
    pub fn ideals(&self) -> Vec<GradedIdeal> {
        self.components.iter().map(|(_, i)| i.clone()).collect()
    }

    /// (theta, N) when the spec is a single line-power component, which the
    /// summand-structured experiments require.
    pub fn line_power(&self) -> Option<(ThetaDirection, u32)> {
        if self.components.len() != 1 {
            return None;
        }
        self.components[0]
            .1
            .structure()
            .map(|lp| (lp.theta.clone(), lp.power))
    }
}

/// The built-in default: the squared diagonal line J² in d = 3.
pub fn default_doc() -> IdealSpecDoc {
    IdealSpecDoc {
        d: 3,
        components: vec![],
        presets: Some(PresetDoc {
            kind: PresetKind::JThetaPower,
            theta: vec![
                ReIm { re: 1.0, im: 0.0 },
                ReIm { re: 1.0, im: 0.0 },
                ReIm { re: 1.0, im: 0.0 },
            ],
            power: Some(2),
        }),
    }
}

pub fn parse_ideal_spec(text: &str) -> Result<ParsedSpec, QmodError> {
    let doc: IdealSpecDoc = serde_json::from_str(text)
        .map_err(|e| QmodError::SpecParse(format!("document: {e}")))?;
    validate(doc)
}

pub fn validate(doc: IdealSpecDoc) -> Result<ParsedSpec, QmodError> {
    let d = doc.d;
    if d < 1 {
        return Err(QmodError::SpecParse("d: must be >= 1".into()));
    }
    let mut components = Vec::new();
    for (ci, comp) in doc.components.iter().enumerate() {
        let mut gens = Vec::new();
        for (gi, gen) in comp.generators.iter().enumerate() {
            if gen.coefficients.is_empty() {
                return Err(QmodError::SpecParse(format!(
                    "generator {gi}: no coefficient terms"
                )));
            }
            let mut terms = Vec::new();
            for (ti, term) in gen.coefficients.iter().enumerate() {
                if term.alpha.len() != d {
                    return Err(QmodError::SpecParse(format!(
                        "generator {gi} term {ti}: alpha length {} ≠ d={d}",
                        term.alpha.len()
                    )));
                }
                terms.push((
                    MultiIndex(term.alpha.clone()),
                    Cx::new(term.re, term.im),
                ));
            }
            let p = HPoly::from_terms(d, terms).map_err(|e| match e {
                QmodError::NonHomogeneous(a, b) => QmodError::SpecParse(format!(
                    "generator {gi}: mixed degrees {a} and {b}"
                )),
                other => other,
            })?;
            if p.is_zero() {
                return Err(QmodError::SpecParse(format!(
                    "generator {gi}: all coefficients vanish"
                )));
            }
            gens.push(p);
        }
        let ideal = GradedIdeal::new(d, gens).map_err(|e| {
            QmodError::SpecParse(format!("components[{ci}]: {e}"))
        })?;
        components.push((comp.name.clone(), ideal));
    }
    if let Some(preset) = &doc.presets {
        if preset.theta.len() != d {
            return Err(QmodError::SpecParse(format!(
                "presets.theta: length {} ≠ d={d}",
                preset.theta.len()
            )));
        }
        let theta = ThetaDirection::new(
            preset.theta.iter().map(|t| Cx::new(t.re, t.im)).collect(),
        )
        .map_err(|e| QmodError::SpecParse(format!("presets.theta: {e}")))?;
        let base = j_theta(&theta)?;
        let (name, ideal) = match preset.kind {
            PresetKind::JTheta => {
                if preset.power.map(|p| p != 1).unwrap_or(false) {
                    return Err(QmodError::SpecParse(
                        "presets.power: j_theta takes power 1".into(),
                    ));
                }
                ("preset:j_theta".to_string(), base)
            }
            PresetKind::JThetaPower => {
                let power = preset.power.ok_or_else(|| {
                    QmodError::SpecParse("presets.power: required for j_theta_power".into())
                })?;
                if power < 1 {
                    return Err(QmodError::SpecParse("presets.power: must be >= 1".into()));
                }
                (
                    format!("preset:j_theta_power^{power}"),
                    ideal_power(&base, power)?,
                )
            }
        };
        components.push((name, ideal));
    }
    if components.is_empty() {
        return Err(QmodError::SpecParse(
            "components: no components and no presets".into(),
        ));
    }
    Ok(ParsedSpec {
        doc,
        d,
        components,
    })
}
