//! Construction specs: a name plus parameters, turned into a precat.

use std::path::Path;

use serde_json::Value;
use theta_core::category::{CategoryJson, FiniteCategory};
use theta_core::constructions::monoidal::{ck_monoidal, MonoidObject};
use theta_core::constructions::upsilon::{face_map, upsilon_with, Face, Indexing};
use theta_core::constructions::{cell, delooping, nerve, sigma, suspension, suspension_iso_variant, whitehead, Pointed};
use theta_core::{analysis, Error, PrecatMap, Precat, Result};

pub const NAMES: &[&str] = &[
    "nerve",
    "upsilon",
    "cell",
    "boundary",
    "sigma",
    "suspension",
    "suspension-iso",
    "delooping",
    "whitehead",
    "ck",
    "truncate",
];

/// Parameters of a construction; command-line flags override `--params`.
#[derive(Clone, Debug, Default)]
pub struct Spec {
    pub name: String,
    pub inputs: Vec<String>,
    pub k: Option<usize>,
    pub i: Option<usize>,
    pub n: Option<usize>,
    pub category: Option<String>,
    pub face: Option<String>,
    pub monoid: Option<String>,
    pub table: Option<Vec<Vec<u32>>>,
}

/// A built precat, and the map it naturally comes with (if any).
pub struct Built {
    pub precat: Precat,
    pub map: Option<PrecatMap>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

impl Spec {
    /// Fills unset fields from a JSON object.
    pub fn merge_params(&mut self, params: &str) -> Result<()> {
        let v: Value = serde_json::from_str(params).map_err(|e| bad(format!("--params is not JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| bad("--params must be a JSON object"))?;
        for (key, val) in obj {
            let as_usize = || val.as_u64().map(|x| x as usize).ok_or_else(|| bad(format!("param {key} must be a non-negative integer")));
            let as_string = || val.as_str().map(str::to_string).ok_or_else(|| bad(format!("param {key} must be a string")));
            match key.as_str() {
                "k" => self.k = self.k.or(Some(as_usize()?)),
                "i" => self.i = self.i.or(Some(as_usize()?)),
                "n" => self.n = self.n.or(Some(as_usize()?)),
                "category" => self.category = self.category.clone().or(Some(as_string()?)),
                "face" => self.face = self.face.clone().or(Some(as_string()?)),
                "monoid" => self.monoid = self.monoid.clone().or(Some(as_string()?)),
                "inputs" => {
                    if self.inputs.is_empty() {
                        self.inputs = serde_json::from_value(val.clone()).map_err(|_| bad("param inputs must be a list of strings"))?;
                    }
                }
                "table" => {
                    self.table = Some(serde_json::from_value(val.clone()).map_err(|_| bad("param table must be a square integer matrix"))?);
                }
                other => return Err(bad(format!("unknown parameter {other:?}"))),
            }
        }
        Ok(())
    }

    fn need_k(&self) -> Result<usize> {
        self.k.ok_or_else(|| bad(format!("{} needs --k", self.name)))
    }

    fn single_input(&self) -> Result<&str> {
        match self.inputs.as_slice() {
            [one] => Ok(one),
            _ => Err(bad(format!("{} takes exactly one input token", self.name))),
        }
    }

    /// A sensible default window bound: 3, or 2 once levels get long.
    pub fn default_bound(dim: usize) -> u32 {
        if dim <= 2 {
            3
        } else {
            2
        }
    }

    pub fn build(&self, indexing: Indexing) -> Result<Built> {
        let plain = |p: Precat| Ok(Built { precat: p, map: None });
        match self.name.as_str() {
            "nerve" => {
                let c = category(self.category.as_deref().ok_or_else(|| bad("nerve needs --category"))?)?;
                plain(nerve(&c, self.n.unwrap_or(1))?)
            }
            "upsilon" => {
                if self.inputs.is_empty() {
                    return Err(bad("upsilon needs --inputs"));
                }
                let n = self.n.unwrap_or(1);
                let d = n.checked_sub(1).ok_or_else(|| bad("upsilon output needs --n at least 1"))?;
                let inputs = self.inputs.iter().map(|t| Ok(token(t, d)?.space)).collect::<Result<Vec<_>>>()?;
                let big = upsilon_with(&inputs, indexing)?;
                let map = match &self.face {
                    None => None,
                    Some(f) => {
                        let face = parse_face(f)?;
                        let small = upsilon_with(&face.domain_inputs(&inputs)?, indexing)?;
                        Some(face_map(face, &small, &big, indexing)?)
                    }
                };
                Ok(Built { precat: big, map })
            }
            "cell" | "boundary" => {
                let i = self.i.ok_or_else(|| bad(format!("{} needs --i", self.name)))?;
                let c = cell(i, self.n.unwrap_or(i))?;
                let p = if self.name == "cell" { c.cell.clone() } else { c.boundary.clone() };
                Ok(Built { precat: p, map: Some(c.inclusion) })
            }
            "sigma" => {
                let k = self.need_k()?;
                plain(sigma(k, self.n.unwrap_or(k))?.space)
            }
            "suspension" | "suspension-iso" | "delooping" => {
                let n = self.n.unwrap_or(2);
                let d = n.checked_sub(1).ok_or_else(|| bad(format!("{} needs --n at least 1", self.name)))?;
                let a = token(self.single_input()?, d)?;
                match self.name.as_str() {
                    "suspension" => plain(suspension(&a)?.object),
                    "suspension-iso" => plain(suspension_iso_variant(&a)?.object),
                    _ => plain(delooping(&a)),
                }
            }
            "whitehead" => {
                let a = token(self.single_input()?, self.n.unwrap_or(1))?;
                let (p, inc) = whitehead(&a, self.need_k()?)?;
                Ok(Built { precat: p, map: Some(inc) })
            }
            "ck" => {
                let k = self.need_k()?;
                let carrier_dim = self.n.unwrap_or(k).checked_sub(k).ok_or_else(|| bad("ck needs --n at least --k"))?;
                let mon = match (&self.table, self.monoid.as_deref()) {
                    (Some(t), _) => MonoidObject::discrete("M", carrier_dim, t.clone())?,
                    (None, None | Some("Z2")) => MonoidObject::z2(carrier_dim),
                    (None, Some(other)) => return Err(bad(format!("unknown monoid {other:?}; give --params with a table"))),
                };
                plain(ck_monoidal(&mon, k)?)
            }
            "truncate" => {
                let a = token(self.single_input()?, self.n.unwrap_or(1))?;
                let w = theta_core::Window { bound: 3, length: None };
                plain(analysis::truncate(&a.space, self.need_k()?, &w)?)
            }
            other => Err(bad(format!("unknown construction {other:?}; known: {}", NAMES.join(", ")))),
        }
    }
}

fn parse_face(s: &str) -> Result<Face> {
    match s {
        "drop-first" => Ok(Face::DropFirst),
        "drop-last" => Ok(Face::DropLast),
        _ => s
            .strip_prefix("merge:")
            .and_then(|i| i.parse().ok())
            .map(Face::Merge)
            .ok_or_else(|| bad(format!("unknown face {s:?}; use drop-first, drop-last or merge:<i>"))),
    }
}

/// A named category, or a path to a category JSON file.
pub fn category(s: &str) -> Result<FiniteCategory> {
    if Path::new(s).is_file() {
        let text = std::fs::read_to_string(s).map_err(|e| bad(format!("cannot read {s}: {e}")))?;
        let j: CategoryJson = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
        return FiniteCategory::from_json(&j);
    }
    FiniteCategory::named(s)
}

/// An input token at dimension `d`, pointed at its natural base object:
/// `empty`, `point`, `<N>point`, `nerve:<cat>`, `sigma<k>`, `F<i>`, `dF<i>`.
pub fn token(t: &str, d: usize) -> Result<Pointed> {
    let first_object = |p: Precat| -> Result<Pointed> {
        let objs = p.objects()?;
        let a = objs.cells().first().cloned().ok_or_else(|| bad(format!("{t} has no objects to point at")))?;
        Pointed::new(p, a)
    };
    if t == "empty" {
        // no base point; only usable where the point is ignored
        return Ok(Pointed { space: theta_core::precat::empty(d), point: theta_core::Cell::Unit });
    }
    if t == "point" {
        return first_object(theta_core::precat::terminal(d));
    }
    if let Some(k) = t.strip_suffix("point").and_then(|k| k.parse::<u32>().ok()) {
        return first_object(theta_core::precat::discrete(d, k));
    }
    if let Some(c) = t.strip_prefix("nerve:") {
        return first_object(nerve(&category(c)?, d)?);
    }
    if let Some(k) = t.strip_prefix("sigma").and_then(|k| k.parse::<usize>().ok()) {
        return sigma(k, d);
    }
    if let Some(i) = t.strip_prefix("dF").and_then(|k| k.parse::<usize>().ok()) {
        return first_object(cell(i, d)?.boundary);
    }
    if let Some(i) = t.strip_prefix('F').and_then(|k| k.parse::<usize>().ok()) {
        return first_object(cell(i, d)?.cell);
    }
    Err(bad(format!("unknown input token {t:?}")))
}
