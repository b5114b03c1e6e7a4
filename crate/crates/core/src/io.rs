//! JSON encodings, canonical number formatting and mesh/CSV export.
//!
//! Output is byte-deterministic: keys in fixed order, floats at 17 significant
//! digits with trailing zeros trimmed (C's `%.17g`), LF line endings.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::geometry::{Annulus, LVec3, SplitCurve, Surface};
use crate::interpolate::SearchReport;
use crate::series::{Coeffs, LaurentMap, SplitFourierSeries};
use crate::split::SplitComplex;
use crate::verify::VerificationReport;

/// Format like C's `%.17g`, which round-trips every finite `f64`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> Result<Value> {
    if !x.is_finite() {
        return Err(Error::Format(format!("non-finite number {x} cannot be written")));
    }
    let n: Number = serde_json::from_str(&fmt_g17(x))
        .map_err(|e| Error::Format(format!("number formatting: {e}")))?;
    Ok(Value::Number(n))
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Value, key: &str) -> Option<&'a Value> {
    obj.as_object().and_then(|m| m.get(key))
}

fn req<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    field(obj, key).ok_or_else(|| Error::Format(format!("missing field \"{key}\"")))
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Format(format!("\"{what}\" must be a finite number")))
}

fn as_i32(v: &Value, what: &str) -> Result<i32> {
    v.as_i64()
        .and_then(|n| i32::try_from(n).ok())
        .ok_or_else(|| Error::Format(format!("\"{what}\" must be an integer")))
}

pub fn split_to_json(z: SplitComplex) -> Result<Value> {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re)?);
    m.insert("im".into(), num(z.im)?);
    Ok(Value::Object(m))
}

pub fn split_from_json(v: &Value) -> Result<SplitComplex> {
    Ok(SplitComplex::new(
        as_f64(req(v, "re")?, "re")?,
        as_f64(req(v, "im")?, "im")?,
    ))
}

fn opt_split(v: &Value, key: &str) -> Result<SplitComplex> {
    field(v, key).map_or(Ok(SplitComplex::ZERO), split_from_json)
}

pub fn series_to_json(f: &SplitFourierSeries) -> Result<Value> {
    let coeffs = f
        .coeffs
        .iter()
        .map(|(n, c)| {
            let mut m = Map::new();
            m.insert("n".into(), json!(n));
            m.insert("re".into(), num(c.re)?);
            m.insert("im".into(), num(c.im)?);
            Ok(Value::Object(m))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = Map::new();
    m.insert("winding".into(), split_to_json(f.winding)?);
    m.insert("coeffs".into(), Value::Array(coeffs));
    Ok(Value::Object(m))
}

pub fn series_from_json(v: &Value) -> Result<SplitFourierSeries> {
    let winding = opt_split(v, "winding")?;
    let mut coeffs = Coeffs::new();
    if let Some(list) = field(v, "coeffs") {
        let list = list
            .as_array()
            .ok_or_else(|| Error::Format("\"coeffs\" must be an array".into()))?;
        for entry in list {
            let n = as_i32(req(entry, "n")?, "n")?;
            let c = SplitComplex::new(
                as_f64(req(entry, "re")?, "re")?,
                as_f64(req(entry, "im")?, "im")?,
            );
            coeffs.add_at(n, c);
        }
    }
    Ok(SplitFourierSeries::new(winding, coeffs.pruned()))
}

pub fn laurent_to_json(h: &LaurentMap) -> Result<Value> {
    let terms = h
        .terms()
        .map(|(n, t)| {
            let mut m = Map::new();
            m.insert("n".into(), json!(n));
            m.insert("a".into(), split_to_json(t.a)?);
            m.insert("b".into(), split_to_json(t.b)?);
            Ok(Value::Object(m))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = Map::new();
    m.insert("log_z".into(), split_to_json(h.log_z)?);
    m.insert("log_zbar".into(), split_to_json(h.log_zbar)?);
    m.insert("terms".into(), Value::Array(terms));
    Ok(Value::Object(m))
}

pub fn laurent_from_json(v: &Value) -> Result<LaurentMap> {
    let mut h = LaurentMap::new(opt_split(v, "log_z")?, opt_split(v, "log_zbar")?);
    if let Some(list) = field(v, "terms") {
        let list = list
            .as_array()
            .ok_or_else(|| Error::Format("\"terms\" must be an array".into()))?;
        for entry in list {
            let n = as_i32(req(entry, "n")?, "n")?;
            let prev = h.term(n);
            h.set_term(n, prev.a + opt_split(entry, "a")?, prev.b + opt_split(entry, "b")?);
        }
    }
    Ok(h)
}

pub fn curve_to_json(c: &SplitCurve) -> Result<Value> {
    let mut m = Map::new();
    m.insert("w".into(), series_to_json(&c.w)?);
    m.insert("third".into(), series_to_json(&c.u3)?);
    Ok(Value::Object(m))
}

/// Parse a curve; third components failing the realness predicate are rejected.
pub fn curve_from_json(v: &Value) -> Result<SplitCurve> {
    let w = field(v, "w").map_or(Ok(SplitFourierSeries::default()), series_from_json)?;
    let u3 = field(v, "third").map_or(Ok(SplitFourierSeries::default()), series_from_json)?;
    SplitCurve::new(w, u3)
}

pub fn surface_to_json(s: &Surface) -> Result<Value> {
    let mut domain = Map::new();
    domain.insert("rho_min".into(), num(s.domain.rho_min)?);
    domain.insert("rho_max".into(), num(s.domain.rho_max)?);
    let mut m = Map::new();
    m.insert("h".into(), laurent_to_json(&s.h)?);
    m.insert("omega".into(), laurent_to_json(&s.omega)?);
    m.insert("domain".into(), Value::Object(domain));
    Ok(Value::Object(m))
}

pub fn surface_from_json(v: &Value) -> Result<Surface> {
    let h = laurent_from_json(req(v, "h")?)?;
    let omega = field(v, "omega").map_or(Ok(LaurentMap::zero()), laurent_from_json)?;
    let domain = match field(v, "domain") {
        Some(d) => Annulus::new(
            as_f64(req(d, "rho_min")?, "rho_min")?,
            as_f64(req(d, "rho_max")?, "rho_max")?,
        )?,
        None => Annulus::standard(),
    };
    Surface::new(h, omega, domain)
}

pub fn report_to_json(r: &VerificationReport) -> Result<Value> {
    let singular = r
        .singular_points
        .iter()
        .map(|&(rho, theta)| Ok(Value::Array(vec![num(rho)?, num(theta)?])))
        .collect::<Result<Vec<_>>>()?;
    let range = |v: &[f64]| -> Result<Value> {
        let lo = v.first().copied().unwrap_or(0.0);
        let hi = v.last().copied().unwrap_or(0.0);
        Ok(Value::Array(vec![num(lo)?, num(hi)?]))
    };
    let mut grid = Map::new();
    grid.insert("n_rho".into(), json!(r.grid.rhos.len()));
    grid.insert("n_theta".into(), json!(r.grid.thetas.len()));
    grid.insert("rho_range".into(), range(&r.grid.rhos)?);
    grid.insert("theta_range".into(), range(&r.grid.thetas)?);
    let mut m = Map::new();
    m.insert("wave_residual_max".into(), num(r.wave_residual_max)?);
    m.insert("conformal_residual_max".into(), num(r.conformal_residual_max)?);
    m.insert("cross_residual_max".into(), num(r.cross_residual_max)?);
    m.insert("det_min".into(), num(r.det_min)?);
    m.insert("det_max".into(), num(r.det_max)?);
    m.insert("singular_points".into(), Value::Array(singular));
    m.insert("classification".into(), json!(r.classification.as_str()));
    m.insert("grid".into(), Value::Object(grid));
    m.insert("delta".into(), num(r.delta)?);
    m.insert("delta2".into(), num(r.delta2)?);
    Ok(Value::Object(m))
}

/// `{"candidates": [...], "surface": <surface or null>}`.
pub fn search_to_json(rep: &SearchReport, surface: Option<&Surface>) -> Result<Value> {
    let candidates = rep
        .candidates
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("r".into(), num(c.r)?);
            m.insert("norm".into(), num(c.norm)?);
            m.insert("feasible".into(), json!(c.feasible));
            Ok(Value::Object(m))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = Map::new();
    m.insert("candidates".into(), Value::Array(candidates));
    m.insert(
        "surface".into(),
        surface.map_or(Ok(Value::Null), surface_to_json)?,
    );
    Ok(Value::Object(m))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn load_surface(path: &Path) -> Result<Surface> {
    surface_from_json(&read_json(path)?)
}

pub fn load_curve(path: &Path) -> Result<SplitCurve> {
    curve_from_json(&read_json(path)?)
}

/// Write via a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn save_json(path: &Path, v: &Value) -> Result<()> {
    write_atomic(path, to_pretty(v).as_bytes())
}

/// Parameter grid for mesh export; `ρ` and `θ` are uniformly spaced.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshSpec {
    pub n_rho: usize,
    pub n_theta: usize,
    pub rho_range: (f64, f64),
    pub theta_range: (f64, f64),
}

impl MeshSpec {
    pub fn validate(&self, surface: &Surface) -> Result<()> {
        if self.n_rho < 2 || self.n_theta < 2 {
            return Err(Error::DomainError(format!(
                "mesh needs at least 2x2 vertices, got {}x{}",
                self.n_rho, self.n_theta
            )));
        }
        let (lo, hi) = self.rho_range;
        if !(lo < hi) || !(self.theta_range.0 < self.theta_range.1) {
            return Err(Error::DomainError("mesh ranges must be nonempty".into()));
        }
        if !surface.domain.contains(lo) || !surface.domain.contains(hi) {
            return Err(Error::GridOutsideDomain(format!(
                "mesh ρ range [{lo}, {hi}] leaves [{}, {}]",
                surface.domain.rho_min, surface.domain.rho_max
            )));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
    }

    /// Grid points in row-major order (`ρ` outer, `θ` inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let thetas: Vec<f64> =
            Self::axis(self.theta_range.0, self.theta_range.1, self.n_theta).collect();
        Self::axis(self.rho_range.0, self.rho_range.1, self.n_rho)
            .flat_map(|r| thetas.iter().map(move |&t| (r, t)))
            .collect()
    }
}

fn vertex_line(p: LVec3) -> String {
    format!("v {} {} {}\n", fmt_g17(p.x1), fmt_g17(p.x2), fmt_g17(p.x3))
}

/// Wavefront OBJ text: vertices row-major, then 1-based quad faces.
pub fn mesh_obj(surface: &Surface, spec: &MeshSpec) -> Result<String> {
    spec.validate(surface)?;
    let mut out = String::new();
    for (rho, theta) in spec.points() {
        out.push_str(&vertex_line(surface.eval(rho, theta)?));
    }
    let idx = |i: usize, j: usize| i * spec.n_theta + j + 1;
    for i in 0..spec.n_rho - 1 {
        for j in 0..spec.n_theta - 1 {
            out.push_str(&format!(
                "f {} {} {} {}\n",
                idx(i, j),
                idx(i, j + 1),
                idx(i + 1, j + 1),
                idx(i + 1, j)
            ));
        }
    }
    Ok(out)
}

/// CSV with header `rho,theta,x1,x2,x3,detg`.
pub fn mesh_csv(surface: &Surface, spec: &MeshSpec) -> Result<String> {
    spec.validate(surface)?;
    let mut out = String::from("rho,theta,x1,x2,x3,detg\n");
    for (rho, theta) in spec.points() {
        let p = surface.eval(rho, theta)?;
        let det = surface.metric(rho, theta)?.det();
        let row = [rho, theta, p.x1, p.x2, p.x3, det].map(fmt_g17).join(",");
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

pub fn export_obj(surface: &Surface, spec: &MeshSpec, path: &Path) -> Result<()> {
    write_atomic(path, mesh_obj(surface, spec)?.as_bytes())
}

pub fn export_csv(surface: &Surface, spec: &MeshSpec, path: &Path) -> Result<()> {
    write_atomic(path, mesh_csv(surface, spec)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-1.0), "-1");
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1e20), "1e+20");
        assert_eq!(fmt_g17(123456.0), "123456");
        assert_eq!(fmt_g17(-2.5e-300), "-2.5e-300");
        assert_eq!(fmt_g17(1e16), "10000000000000000");
        assert_eq!(fmt_g17(1e17), "1e+17");
        assert_eq!(fmt_g17(12345678901234567.0), "12345678901234568");
        assert_eq!(fmt_g17(0.0001), "0.0001");
        assert_eq!(fmt_g17(1.234e-5), "1.234e-05");
    }

    #[test]
    fn split_json_shape() {
        let v = split_to_json(SplitComplex::new(0.5, -2.0)).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"re":0.5,"im":-2}"#);
        assert_eq!(split_from_json(&v).unwrap(), SplitComplex::new(0.5, -2.0));
    }

    #[test]
    fn non_real_third_component_is_rejected() {
        let v: Value = serde_json::from_str(
            r#"{"w": {"coeffs": []}, "third": {"coeffs": [{"n": 1, "re": 0, "im": 1}]}}"#,
        )
        .unwrap();
        assert!(matches!(curve_from_json(&v), Err(Error::RealnessViolation(_))));
    }

    #[test]
    fn flat_plane_mesh() {
        let s = Surface::flat_plane();
        let spec = MeshSpec {
            n_rho: 2,
            n_theta: 2,
            rho_range: (1.0, 2.0),
            theta_range: (0.0, 1.0),
        };
        let obj = mesh_obj(&s, &spec).unwrap();
        let lines: Vec<&str> = obj.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "v 1 0 0");
        assert_eq!(lines[4], "f 1 2 4 3");
        let csv = mesh_csv(&s, &spec).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "rho,theta,x1,x2,x3,detg");
        assert_eq!(rows[1], "1,0,1,0,0,-1");
        assert_eq!(rows.len(), 5);
    }

    #[test]
    fn mesh_counts() {
        let s = Surface::flat_plane();
        for (nr, nt) in [(2, 3), (5, 4), (7, 11)] {
            let spec = MeshSpec {
                n_rho: nr,
                n_theta: nt,
                rho_range: (0.5, 2.0),
                theta_range: (-1.0, 1.0),
            };
            let obj = mesh_obj(&s, &spec).unwrap();
            assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), nr * nt);
            assert_eq!(
                obj.lines().filter(|l| l.starts_with("f ")).count(),
                (nr - 1) * (nt - 1)
            );
            assert_eq!(mesh_csv(&s, &spec).unwrap().lines().count(), nr * nt + 1);
        }
        let bad = MeshSpec {
            n_rho: 2,
            n_theta: 2,
            rho_range: (0.1, 2.0),
            theta_range: (0.0, 1.0),
        };
        assert!(matches!(mesh_obj(&s, &bad), Err(Error::GridOutsideDomain(_))));
    }
}
