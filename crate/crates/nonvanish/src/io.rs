//! File schemas: region and function specs (hand-validated JSON with
//! path-qualified diagnostics and hard size limits — these parsers face
//! untrusted input), report JSON, polynomial JSON, and the scan CSV.

use num_complex::Complex64;
use serde_json::Value;

use crate::engine::{ApproximationReport, TargetFunction};
use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::region::{CompactRegion, ComponentShape, Filament, JordanComponent};
use crate::zeta::{ScanRecord, ZetaEvaluator};

pub const SCHEMA_VERSION: &str = "1";

const MAX_COMPONENTS: usize = 64;
const MAX_POLYGON_VERTICES: usize = 8192;
const MAX_FOURIER_TERMS: usize = 128;
const MAX_FILAMENTS: usize = 256;
const MAX_FILAMENT_POINTS: usize = 65536;
const MAX_ISOLATED_POINTS: usize = 4096;
const MAX_POLY_COEFFS: usize = 256;
const MAX_COMPOSE_DEPTH: usize = 16;
const MAX_SCAN_ROWS: usize = 10_000_000;

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), message: message.into() }
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| schema_err(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema_err(path, "expected an array"))
}

fn as_finite_f64(v: &Value, path: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| schema_err(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(schema_err(path, "number must be finite"));
    }
    Ok(x)
}

fn as_pair(v: &Value, path: &str) -> Result<[f64; 2]> {
    let arr = as_array(v, path)?;
    if arr.len() != 2 {
        return Err(schema_err(path, format!("expected [re, im], got {} entries", arr.len())));
    }
    Ok([
        as_finite_f64(&arr[0], &format!("{path}[0]"))?,
        as_finite_f64(&arr[1], &format!("{path}[1]"))?,
    ])
}

fn check_keys(obj: &serde_json::Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema_err(
                &format!("{path}.{key}"),
                format!("unknown key \"{key}\", expected one of {allowed:?}"),
            ));
        }
    }
    Ok(())
}

fn check_schema_version(obj: &serde_json::Map<String, Value>, path: &str) -> Result<()> {
    match obj.get("schema") {
        Some(Value::String(s)) if s == SCHEMA_VERSION => Ok(()),
        Some(other) => Err(schema_err(
            &format!("{path}.schema"),
            format!("unsupported schema version {other}, expected \"{SCHEMA_VERSION}\""),
        )),
        None => Err(schema_err(&format!("{path}.schema"), "missing required key \"schema\"")),
    }
}

// ---------------------------------------------------------------- regions

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentSpec {
    Disc { center: [f64; 2], radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    Starlike { center: [f64; 2], fourier_cos: Vec<f64>, fourier_sin: Vec<f64> },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegionSpec {
    pub components: Vec<ComponentSpec>,
    pub filaments: Vec<Vec<[f64; 2]>>,
    pub points: Vec<[f64; 2]>,
}

impl RegionSpec {
    pub fn disc(center: (f64, f64), radius: f64) -> Self {
        RegionSpec {
            components: vec![ComponentSpec::Disc { center: [center.0, center.1], radius }],
            ..Default::default()
        }
    }

    pub fn build(&self) -> Result<CompactRegion> {
        let mut components = Vec::with_capacity(self.components.len());
        for (i, spec) in self.components.iter().enumerate() {
            let shape = match spec {
                ComponentSpec::Disc { center, radius } => ComponentShape::Disc {
                    center: Complex64::new(center[0], center[1]),
                    radius: *radius,
                },
                ComponentSpec::Polygon { vertices } => ComponentShape::Polygon {
                    vertices: vertices.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
                },
                ComponentSpec::Starlike { center, fourier_cos, fourier_sin } => {
                    ComponentShape::Starlike {
                        center: Complex64::new(center[0], center[1]),
                        cos_coeffs: fourier_cos.clone(),
                        sin_coeffs: fourier_sin.clone(),
                    }
                }
            };
            components.push(JordanComponent::new(i as u32, shape)?);
        }
        let mut filaments = Vec::with_capacity(self.filaments.len());
        for f in &self.filaments {
            filaments.push(Filament::new(f.iter().map(|p| Complex64::new(p[0], p[1])).collect())?);
        }
        let points = self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        CompactRegion::new(components, filaments, points)
    }

    pub fn to_json(&self) -> String {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| match c {
                ComponentSpec::Disc { center, radius } => serde_json::json!({
                    "type": "disc", "center": center, "radius": radius
                }),
                ComponentSpec::Polygon { vertices } => serde_json::json!({
                    "type": "polygon", "vertices": vertices
                }),
                ComponentSpec::Starlike { center, fourier_cos, fourier_sin } => serde_json::json!({
                    "type": "starlike", "center": center,
                    "fourier_cos": fourier_cos, "fourier_sin": fourier_sin
                }),
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({
            "schema": SCHEMA_VERSION,
            "components": components,
            "filaments": self.filaments,
            "points": self.points,
        }))
        .expect("region spec serializes")
    }
}

pub fn parse_region_json(text: &str) -> Result<RegionSpec> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| schema_err("$", format!("invalid JSON: {e}")))?;
    let obj = as_object(&value, "$")?;
    check_keys(obj, &["schema", "components", "filaments", "points"], "$")?;
    check_schema_version(obj, "$")?;

    let mut spec = RegionSpec::default();
    if let Some(v) = obj.get("components") {
        let arr = as_array(v, "$.components")?;
        if arr.len() > MAX_COMPONENTS {
            return Err(schema_err("$.components", format!("too many components (max {MAX_COMPONENTS})")));
        }
        for (i, cv) in arr.iter().enumerate() {
            let path = format!("$.components[{i}]");
            let cobj = as_object(cv, &path)?;
            let kind = cobj
                .get("type")
                .and_then(|t| t.as_str())
                .ok_or_else(|| schema_err(&format!("{path}.type"), "missing or non-string \"type\""))?;
            let comp = match kind {
                "disc" => {
                    check_keys(cobj, &["type", "center", "radius"], &path)?;
                    let center = as_pair(
                        cobj.get("center").ok_or_else(|| schema_err(&format!("{path}.center"), "missing key"))?,
                        &format!("{path}.center"),
                    )?;
                    let radius = as_finite_f64(
                        cobj.get("radius").ok_or_else(|| schema_err(&format!("{path}.radius"), "missing key"))?,
                        &format!("{path}.radius"),
                    )?;
                    if radius <= 0.0 {
                        return Err(schema_err(&format!("{path}.radius"), "radius must be positive"));
                    }
                    ComponentSpec::Disc { center, radius }
                }
                "polygon" => {
                    check_keys(cobj, &["type", "vertices"], &path)?;
                    let vs = as_array(
                        cobj.get("vertices").ok_or_else(|| schema_err(&format!("{path}.vertices"), "missing key"))?,
                        &format!("{path}.vertices"),
                    )?;
                    if vs.len() < 3 || vs.len() > MAX_POLYGON_VERTICES {
                        return Err(schema_err(
                            &format!("{path}.vertices"),
                            format!("vertex count must be in 3..={MAX_POLYGON_VERTICES}"),
                        ));
                    }
                    let vertices = vs
                        .iter()
                        .enumerate()
                        .map(|(j, v)| as_pair(v, &format!("{path}.vertices[{j}]")))
                        .collect::<Result<Vec<_>>>()?;
                    ComponentSpec::Polygon { vertices }
                }
                "starlike" => {
                    check_keys(cobj, &["type", "center", "fourier_cos", "fourier_sin"], &path)?;
                    let center = as_pair(
                        cobj.get("center").ok_or_else(|| schema_err(&format!("{path}.center"), "missing key"))?,
                        &format!("{path}.center"),
                    )?;
                    let cos_path = format!("{path}.fourier_cos");
                    let cos = as_array(
                        cobj.get("fourier_cos").ok_or_else(|| schema_err(&cos_path, "missing key"))?,
                        &cos_path,
                    )?;
                    if cos.is_empty() || cos.len() > MAX_FOURIER_TERMS {
                        return Err(schema_err(&cos_path, format!("length must be in 1..={MAX_FOURIER_TERMS}")));
                    }
                    let fourier_cos = cos
                        .iter()
                        .enumerate()
                        .map(|(j, v)| as_finite_f64(v, &format!("{cos_path}[{j}]")))
                        .collect::<Result<Vec<_>>>()?;
                    let sin_path = format!("{path}.fourier_sin");
                    let fourier_sin = match cobj.get("fourier_sin") {
                        None => Vec::new(),
                        Some(v) => {
                            let arr = as_array(v, &sin_path)?;
                            if arr.len() > MAX_FOURIER_TERMS {
                                return Err(schema_err(&sin_path, format!("length must be at most {MAX_FOURIER_TERMS}")));
                            }
                            arr.iter()
                                .enumerate()
                                .map(|(j, v)| as_finite_f64(v, &format!("{sin_path}[{j}]")))
                                .collect::<Result<Vec<_>>>()?
                        }
                    };
                    ComponentSpec::Starlike { center, fourier_cos, fourier_sin }
                }
                other => {
                    return Err(schema_err(
                        &format!("{path}.type"),
                        format!("unknown component type \"{other}\", expected disc | polygon | starlike"),
                    ))
                }
            };
            spec.components.push(comp);
        }
    }
    if let Some(v) = obj.get("filaments") {
        let arr = as_array(v, "$.filaments")?;
        if arr.len() > MAX_FILAMENTS {
            return Err(schema_err("$.filaments", format!("too many filaments (max {MAX_FILAMENTS})")));
        }
        for (i, fv) in arr.iter().enumerate() {
            let path = format!("$.filaments[{i}]");
            let pts = as_array(fv, &path)?;
            if pts.len() < 2 || pts.len() > MAX_FILAMENT_POINTS {
                return Err(schema_err(&path, format!("point count must be in 2..={MAX_FILAMENT_POINTS}")));
            }
            spec.filaments.push(
                pts.iter()
                    .enumerate()
                    .map(|(j, p)| as_pair(p, &format!("{path}[{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    if let Some(v) = obj.get("points") {
        let arr = as_array(v, "$.points")?;
        if arr.len() > MAX_ISOLATED_POINTS {
            return Err(schema_err("$.points", format!("too many points (max {MAX_ISOLATED_POINTS})")));
        }
        spec.points = arr
            .iter()
            .enumerate()
            .map(|(j, p)| as_pair(p, &format!("$.points[{j}]")))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(spec)
}

// --------------------------------------------------------------- functions

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionSpec {
    Const { value: [f64; 2] },
    Poly { coeffs: Vec<[f64; 2]> },
    Exp,
    Rational { num: Vec<[f64; 2]>, den: Vec<[f64; 2]> },
    ZetaShift { t: f64 },
    Compose { outer: Box<FunctionSpec>, inner: Box<FunctionSpec> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionFile {
    pub spec: FunctionSpec,
    pub zero_free_interior: bool,
}

impl FunctionSpec {
    fn build_inner(&self, ev: &ZetaEvaluator) -> Result<TargetFunction> {
        Ok(match self {
            FunctionSpec::Const { value } => {
                TargetFunction::constant(Complex64::new(value[0], value[1]))
            }
            FunctionSpec::Poly { coeffs } => {
                TargetFunction::poly(ComplexPolynomial::from_pairs(coeffs))
            }
            FunctionSpec::Exp => TargetFunction::exp(),
            FunctionSpec::Rational { num, den } => TargetFunction::rational(
                ComplexPolynomial::from_pairs(num),
                ComplexPolynomial::from_pairs(den),
            )?,
            FunctionSpec::ZetaShift { t } => TargetFunction::zeta_shift(*t, ev.clone()),
            FunctionSpec::Compose { outer, inner } => TargetFunction::compose(
                outer.build_inner(ev)?,
                inner.build_inner(ev)?,
            ),
        })
    }

    pub fn to_json_value(&self) -> Value {
        match self {
            FunctionSpec::Const { value } => serde_json::json!({"type": "const", "value": value}),
            FunctionSpec::Poly { coeffs } => serde_json::json!({"type": "poly", "coeffs": coeffs}),
            FunctionSpec::Exp => serde_json::json!({"type": "exp"}),
            FunctionSpec::Rational { num, den } => {
                serde_json::json!({"type": "rational", "num": num, "den": den})
            }
            FunctionSpec::ZetaShift { t } => serde_json::json!({"type": "zeta_shift", "t": t}),
            FunctionSpec::Compose { outer, inner } => serde_json::json!({
                "type": "compose",
                "outer": outer.to_json_value(),
                "inner": inner.to_json_value(),
            }),
        }
    }
}

impl FunctionFile {
    pub fn build(&self, ev: &ZetaEvaluator) -> Result<TargetFunction> {
        Ok(self.spec.build_inner(ev)?.with_zero_free_flag(self.zero_free_interior))
    }

    pub fn to_json(&self) -> String {
        let mut value = self.spec.to_json_value();
        let obj = value.as_object_mut().expect("function value is an object");
        obj.insert("schema".into(), Value::String(SCHEMA_VERSION.into()));
        if self.zero_free_interior {
            obj.insert("zero_free_interior".into(), Value::Bool(true));
        }
        serde_json::to_string_pretty(&value).expect("function spec serializes")
    }
}

fn parse_function_node(value: &Value, path: &str, depth: usize) -> Result<FunctionSpec> {
    if depth > MAX_COMPOSE_DEPTH {
        return Err(schema_err(path, format!("compose nesting deeper than {MAX_COMPOSE_DEPTH}")));
    }
    let obj = as_object(value, path)?;
    let kind = obj
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| schema_err(&format!("{path}.type"), "missing or non-string \"type\""))?;
    let top_level_keys: &[&str] = if depth == 0 { &["schema", "zero_free_interior"] } else { &[] };
    let with_top = |keys: &[&'static str]| -> Vec<&'static str> {
        keys.iter().chain(top_level_keys.iter()).copied().collect()
    };
    let parse_coeffs = |key: &str| -> Result<Vec<[f64; 2]>> {
        let cpath = format!("{path}.{key}");
        let arr = as_array(
            obj.get(key).ok_or_else(|| schema_err(&cpath, "missing key"))?,
            &cpath,
        )?;
        if arr.is_empty() || arr.len() > MAX_POLY_COEFFS {
            return Err(schema_err(&cpath, format!("length must be in 1..={MAX_POLY_COEFFS}")));
        }
        arr.iter()
            .enumerate()
            .map(|(j, v)| as_pair(v, &format!("{cpath}[{j}]")))
            .collect()
    };
    match kind {
        "const" => {
            check_keys(obj, &with_top(&["type", "value"]), path)?;
            let value = as_pair(
                obj.get("value").ok_or_else(|| schema_err(&format!("{path}.value"), "missing key"))?,
                &format!("{path}.value"),
            )?;
            Ok(FunctionSpec::Const { value })
        }
        "poly" => {
            check_keys(obj, &with_top(&["type", "coeffs"]), path)?;
            Ok(FunctionSpec::Poly { coeffs: parse_coeffs("coeffs")? })
        }
        "exp" => {
            check_keys(obj, &with_top(&["type"]), path)?;
            Ok(FunctionSpec::Exp)
        }
        "rational" => {
            check_keys(obj, &with_top(&["type", "num", "den"]), path)?;
            let num = parse_coeffs("num")?;
            let den = parse_coeffs("den")?;
            if den.iter().all(|c| c[0] == 0.0 && c[1] == 0.0) {
                return Err(schema_err(&format!("{path}.den"), "denominator must not be identically zero"));
            }
            Ok(FunctionSpec::Rational { num, den })
        }
        "zeta_shift" => {
            check_keys(obj, &with_top(&["type", "t"]), path)?;
            let t = as_finite_f64(
                obj.get("t").ok_or_else(|| schema_err(&format!("{path}.t"), "missing key"))?,
                &format!("{path}.t"),
            )?;
            if t.abs() > 1e6 {
                return Err(schema_err(&format!("{path}.t"), "|t| must be at most 1e6"));
            }
            Ok(FunctionSpec::ZetaShift { t })
        }
        "compose" => {
            check_keys(obj, &with_top(&["type", "outer", "inner"]), path)?;
            let outer = obj
                .get("outer")
                .ok_or_else(|| schema_err(&format!("{path}.outer"), "missing key"))?;
            let inner = obj
                .get("inner")
                .ok_or_else(|| schema_err(&format!("{path}.inner"), "missing key"))?;
            Ok(FunctionSpec::Compose {
                outer: Box::new(parse_function_node(outer, &format!("{path}.outer"), depth + 1)?),
                inner: Box::new(parse_function_node(inner, &format!("{path}.inner"), depth + 1)?),
            })
        }
        other => Err(schema_err(
            &format!("{path}.type"),
            format!("unknown function type \"{other}\", expected const | poly | exp | rational | zeta_shift | compose"),
        )),
    }
}

pub fn parse_function_json(text: &str) -> Result<FunctionFile> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| schema_err("$", format!("invalid JSON: {e}")))?;
    let obj = as_object(&value, "$")?;
    check_schema_version(obj, "$")?;
    let zero_free_interior = match obj.get("zero_free_interior") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => {
            return Err(schema_err("$.zero_free_interior", "expected a boolean"));
        }
    };
    let spec = parse_function_node(&value, "$", 0)?;
    Ok(FunctionFile { spec, zero_free_interior })
}

// ----------------------------------------------------- reports, polynomials

pub fn parse_report_json(text: &str) -> Result<ApproximationReport> {
    let report: ApproximationReport = serde_json::from_str(text)
        .map_err(|e| schema_err("$", format!("invalid report: {e}")))?;
    if report.schema != SCHEMA_VERSION {
        return Err(schema_err("$.schema", format!("unsupported schema version {}", report.schema)));
    }
    if !report.polynomial.iter().all(|c| c[0].is_finite() && c[1].is_finite()) {
        return Err(schema_err("$.polynomial", "coefficients must be finite"));
    }
    Ok(report)
}

pub fn report_to_json(report: &ApproximationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Interchange form of a polynomial: array of [re, im], ascending degree.
pub fn parse_polynomial_json(text: &str) -> Result<ComplexPolynomial> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| schema_err("$", format!("invalid JSON: {e}")))?;
    let arr = as_array(&value, "$")?;
    if arr.is_empty() || arr.len() > MAX_POLY_COEFFS {
        return Err(schema_err("$", format!("length must be in 1..={MAX_POLY_COEFFS}")));
    }
    let pairs = arr
        .iter()
        .enumerate()
        .map(|(j, v)| as_pair(v, &format!("$[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexPolynomial::from_pairs(&pairs))
}

pub fn polynomial_to_json(p: &ComplexPolynomial) -> String {
    serde_json::to_string(&p.to_pairs()).expect("polynomial serializes")
}

// ------------------------------------------------------------------- CSV

pub const SCAN_CSV_HEADER: &str = "t,d_t,zero_free,min_modulus";

pub fn scan_record_to_csv(r: &ScanRecord) -> String {
    format!("{},{},{},{}", r.t, r.d_t, r.zero_free, r.min_modulus_on_k)
}

/// Parses scan CSV output, tolerating a trailing newline. Used for resume
/// and by the fuzz harness.
pub fn parse_scan_csv(text: &str) -> Result<Vec<ScanRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim_end() == SCAN_CSV_HEADER => {}
        Some(other) => {
            return Err(schema_err("line 1", format!("bad header {other:?}, expected {SCAN_CSV_HEADER:?}")));
        }
        None => return Err(schema_err("line 1", "empty file")),
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let path = format!("line {}", i + 2);
        if line.trim().is_empty() {
            continue;
        }
        if records.len() >= MAX_SCAN_ROWS {
            return Err(schema_err(&path, format!("too many rows (max {MAX_SCAN_ROWS})")));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(schema_err(&path, format!("expected 4 fields, got {}", fields.len())));
        }
        let parse_float = |s: &str, what: &str| -> Result<f64> {
            let x: f64 = s
                .trim()
                .parse()
                .map_err(|_| schema_err(&path, format!("bad {what} value {s:?}")))?;
            if !x.is_finite() {
                return Err(schema_err(&path, format!("{what} must be finite")));
            }
            Ok(x)
        };
        let zero_free = match fields[2].trim() {
            "true" => true,
            "false" => false,
            other => return Err(schema_err(&path, format!("bad zero_free value {other:?}"))),
        };
        records.push(ScanRecord {
            t: parse_float(fields[0], "t")?,
            d_t: parse_float(fields[1], "d_t")?,
            zero_free,
            min_modulus_on_k: parse_float(fields[3], "min_modulus")?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_roundtrip() {
        let text = r#"{
            "schema": "1",
            "components": [
                {"type": "disc", "center": [0.0, 0.0], "radius": 1.0},
                {"type": "starlike", "center": [3.0, 0.0], "fourier_cos": [1.0, 0.0, 0.2], "fourier_sin": []}
            ],
            "filaments": [[[-1.0, -2.0], [1.0, -2.0]]],
            "points": [[5.0, 5.0]]
        }"#;
        let spec = parse_region_json(text).unwrap();
        assert_eq!(spec.components.len(), 2);
        assert_eq!(spec.filaments.len(), 1);
        assert_eq!(spec.points.len(), 1);
        let re_parsed = parse_region_json(&spec.to_json()).unwrap();
        assert_eq!(spec, re_parsed);
        let region = spec.build().unwrap();
        assert_eq!(region.components.len(), 2);
    }

    #[test]
    fn region_diagnostics_name_the_key() {
        let missing_schema = parse_region_json(r#"{"components": []}"#).unwrap_err();
        assert!(missing_schema.to_string().contains("$.schema"), "{missing_schema}");

        let bad_radius = parse_region_json(
            r#"{"schema":"1","components":[{"type":"disc","center":[0,0],"radius":-1}]}"#,
        )
        .unwrap_err();
        assert!(bad_radius.to_string().contains("radius"), "{bad_radius}");

        let unknown = parse_region_json(
            r#"{"schema":"1","components":[{"type":"disc","centre":[0,0],"radius":1}]}"#,
        )
        .unwrap_err();
        assert!(unknown.to_string().contains("centre"), "{unknown}");
    }

    #[test]
    fn region_rejects_nan() {
        let err = parse_region_json(
            r#"{"schema":"1","components":[],"points":[[null,0]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("points"));
    }

    #[test]
    fn function_roundtrip_and_compose_depth() {
        let text = r#"{"schema":"1","type":"compose","outer":{"type":"exp"},"inner":{"type":"poly","coeffs":[[0,0],[2,0]]}}"#;
        let file = parse_function_json(text).unwrap();
        let f = file.build(&ZetaEvaluator::default()).unwrap();
        let z = Complex64::new(0.25, 0.1);
        assert!((f.eval(z) - (z * 2.0).exp()).norm() < 1e-14);
        let reparsed = parse_function_json(&file.to_json()).unwrap();
        assert_eq!(file, reparsed);

        // Depth bomb rejected.
        let mut bomb = String::new();
        for _ in 0..40 {
            bomb.push_str(r#"{"type":"compose","outer":{"type":"exp"},"inner":"#);
        }
        bomb.push_str(r#"{"type":"exp"}"#);
        for _ in 0..40 {
            bomb.push('}');
        }
        let full = format!(r#"{{"schema":"1","type":"compose","outer":{bomb},"inner":{{"type":"exp"}}}}"#);
        assert!(parse_function_json(&full).is_err());
    }

    #[test]
    fn function_diagnostics() {
        let err = parse_function_json(r#"{"schema":"1","type":"poly"}"#).unwrap_err();
        assert!(err.to_string().contains("$.coeffs"), "{err}");
        let err = parse_function_json(r#"{"schema":"1","type":"warp"}"#).unwrap_err();
        assert!(err.to_string().contains("warp"), "{err}");
    }

    #[test]
    fn polynomial_json_roundtrip() {
        let p = ComplexPolynomial::from_pairs(&[[1.0, 2.0], [0.0, -0.5]]);
        let text = polynomial_to_json(&p);
        let q = parse_polynomial_json(&text).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn scan_csv_roundtrip() {
        let records = vec![
            ScanRecord { t: 0.0, d_t: 1.25, zero_free: true, min_modulus_on_k: 0.5 },
            ScanRecord { t: 0.5, d_t: 0.03125, zero_free: false, min_modulus_on_k: 1e-9 },
        ];
        let mut text = String::from(SCAN_CSV_HEADER);
        text.push('\n');
        for r in &records {
            text.push_str(&scan_record_to_csv(r));
            text.push('\n');
        }
        let parsed = parse_scan_csv(&text).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn scan_csv_rejects_garbage() {
        assert!(parse_scan_csv("").is_err());
        assert!(parse_scan_csv("a,b,c\n").is_err());
        assert!(parse_scan_csv("t,d_t,zero_free,min_modulus\n1,2,maybe,4\n").is_err());
        assert!(parse_scan_csv("t,d_t,zero_free,min_modulus\n1,2,true\n").is_err());
        assert!(parse_scan_csv("t,d_t,zero_free,min_modulus\ninf,2,true,4\n").is_err());
    }
}
