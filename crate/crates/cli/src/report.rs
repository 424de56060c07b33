//! Report bodies for each subcommand, rendered as JSON or CSV.

use num_complex::Complex64;
use serde::Serialize;
use triband_core::numfmt::{complex9, round9, sig9};
use triband_core::spectrum::{SpectralSet, SpectrumSegment};
use triband_core::verify::CriterionOutcome;

pub const SCHEMA_VERSION: u32 = 1;

/// JSON number rounded to 9 significant digits, with `-0` folded to `0`.
pub fn num(x: f64) -> f64 {
    let v = round9(x);
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JsonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for JsonComplex {
    fn from(z: Complex64) -> Self {
        Self {
            re: num(z.re),
            im: num(z.im),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<I: Serialize, R: Serialize> {
    pub schema: u32,
    pub command: &'static str,
    /// Argument literals exactly as given on the command line.
    pub input: I,
    /// Parsed operator entries at full precision.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<ParsedOperator>,
    pub result: R,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExactComplex {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParsedOperator {
    pub r: ExactComplex,
    pub s: ExactComplex,
}

impl ParsedOperator {
    pub fn new(r: Complex64, s: Complex64) -> Self {
        Self {
            r: ExactComplex { re: r.re, im: r.im },
            s: ExactComplex { re: s.re, im: s.im },
        }
    }
}

impl<I: Serialize, R: Serialize> Envelope<I, R> {
    pub fn new(command: &'static str, input: I, result: R) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command,
            input,
            operator: None,
            result,
        }
    }

    pub fn with_operator(mut self, op: ParsedOperator) -> Self {
        self.operator = Some(op);
        self
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JsonSet {
    Empty,
    Segment { low: JsonComplex, high: JsonComplex },
    ComplementOfSegment { low: JsonComplex, high: JsonComplex },
}

impl From<SpectralSet> for JsonSet {
    fn from(set: SpectralSet) -> Self {
        match set {
            SpectralSet::Empty => JsonSet::Empty,
            SpectralSet::Segment(seg) => JsonSet::Segment {
                low: seg.endpoint_low.into(),
                high: seg.endpoint_high.into(),
            },
            SpectralSet::ComplementOf(seg) => JsonSet::ComplementOfSegment {
                low: seg.endpoint_low.into(),
                high: seg.endpoint_high.into(),
            },
        }
    }
}

fn set_kind(set: &SpectralSet) -> (&'static str, Option<SpectrumSegment>) {
    match set {
        SpectralSet::Empty => ("empty", None),
        SpectralSet::Segment(seg) => ("segment", Some(*seg)),
        SpectralSet::ComplementOf(seg) => ("complement_of_segment", Some(*seg)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    pub space: String,
    pub p: f64,
    pub spectrum: JsonSet,
    pub point: JsonSet,
    pub residual: JsonSet,
    pub continuous: JsonSet,
    pub resolvent_set: JsonSet,
    pub adjoint_point: JsonSet,
}

/// CSV columns: `part,kind,low,high`.
pub fn spectrum_csv(parts: &[(&str, SpectralSet)]) -> String {
    let mut out = String::from("part,kind,low,high\n");
    for (name, set) in parts {
        let (kind, seg) = set_kind(set);
        let (low, high) = seg.map_or((String::new(), String::new()), |s| {
            (complex9(s.endpoint_low), complex9(s.endpoint_high))
        });
        out.push_str(&format!("{name},{kind},{low},{high}\n"));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyResult {
    pub class: &'static str,
    pub on_segment: bool,
    pub endpoint: bool,
    pub ratio_q: JsonComplex,
    pub alpha1: JsonComplex,
    pub alpha2: JsonComplex,
    pub alpha1_abs: f64,
    pub double_root: bool,
    pub distance_to_segment: f64,
}

/// CSV columns: `key,value`.
pub fn classify_csv(r: &ClassifyResult) -> String {
    let c = |z: JsonComplex| complex9(Complex64::new(z.re, z.im));
    let rows = [
        ("class", r.class.to_string()),
        ("on_segment", r.on_segment.to_string()),
        ("endpoint", r.endpoint.to_string()),
        ("ratio_q", c(r.ratio_q)),
        ("alpha1", c(r.alpha1)),
        ("alpha2", c(r.alpha2)),
        ("alpha1_abs", sig9(r.alpha1_abs)),
        ("double_root", r.double_root.to_string()),
        ("distance_to_segment", sig9(r.distance_to_segment)),
    ];
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolveRow {
    pub k: usize,
    pub x: JsonComplex,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<JsonComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diff: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolveResult {
    pub alpha1: JsonComplex,
    pub forced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_diff: Option<f64>,
    pub rows: Vec<ResolveRow>,
}

/// CSV columns: `k,x_k,oracle_k,diff`; oracle columns are empty without `--oracle`.
pub fn resolve_csv(x: &[Complex64], oracle: Option<&[Complex64]>) -> String {
    let mut out = String::from("k,x_k,oracle_k,diff\n");
    for (k, xk) in x.iter().enumerate() {
        let (o, d) = match oracle {
            Some(o) => (complex9(o[k]), sig9((xk - o[k]).norm())),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!("{k},{},{o},{d}\n", complex9(*xk)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EigsResult {
    pub order: usize,
    pub method: &'static str,
    pub eigenvalues: Vec<JsonComplex>,
}

/// CSV columns: `j,re,im`, ascending along the segment.
pub fn eigs_csv(values: &[Complex64]) -> String {
    let mut out = String::from("j,re,im\n");
    for (j, z) in values.iter().enumerate() {
        out.push_str(&format!("{j},{},{}\n", sig9(z.re), sig9(z.im)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// `null` where `U_N - lambda I` is exactly singular.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PseudospecResult {
    pub order: usize,
    pub re_points: usize,
    pub im_points: usize,
    pub points: Vec<GridRow>,
}

/// CSV columns: `lambda_re,lambda_im,value` with `value = 1/sigma_min(U_N - lambda I)`.
pub fn pseudospec_csv(rows: &[(Complex64, f64)]) -> String {
    let mut out = String::with_capacity(rows.len() * 40 + 32);
    out.push_str("lambda_re,lambda_im,value\n");
    for (z, v) in rows {
        out.push_str(&format!("{},{},{}\n", sig9(z.re), sig9(z.im), sig9(*v)));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyRow {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
    pub threshold: String,
}

impl From<&CriterionOutcome> for VerifyRow {
    fn from(o: &CriterionOutcome) -> Self {
        Self {
            id: o.id,
            name: o.name,
            passed: o.passed,
            measured: o.measured.clone(),
            threshold: o.threshold.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyResult {
    pub passed: usize,
    pub total: usize,
    pub criteria: Vec<VerifyRow>,
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// One line per criterion followed by a summary line.
pub fn verify_table(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{} {:>2}  {}  measured: {}  threshold: {}\n",
            verdict(o.passed),
            o.id,
            o.name,
            o.measured,
            o.threshold
        ));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
    out
}

/// CSV columns: `id,result,name,measured,threshold`.
pub fn verify_csv(outcomes: &[CriterionOutcome]) -> String {
    let mut out = String::from("id,result,name,measured,threshold\n");
    for o in outcomes {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            o.id,
            verdict(o.passed),
            csv_field(o.name),
            csv_field(&o.measured),
            csv_field(&o.threshold)
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_numbers_are_rounded() {
        let z: JsonComplex = Complex64::new(0.1 + 0.2, -0.0).into();
        assert_eq!(serde_json::to_string(&z).unwrap(), r#"{"re":0.3,"im":0.0}"#);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("say \"x\", y"), "\"say \"\"x\"\", y\"");
    }

    #[test]
    fn resolve_rows() {
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25)];
        assert_eq!(resolve_csv(&x, None), "k,x_k,oracle_k,diff\n0,1,,\n1,0.5-0.25i,,\n");
        let o = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)];
        assert_eq!(
            resolve_csv(&x, Some(&o)),
            "k,x_k,oracle_k,diff\n0,1,1,0\n1,0.5-0.25i,0.5,0.25\n"
        );
    }
}
