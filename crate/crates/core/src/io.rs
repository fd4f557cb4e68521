//! JSON file formats and a registry of loaded objects.
//!
//! Space: `{"name", "points", "opens"}`. Function:
//! `{"name"?, "domain", "codomain", "map": {label: label}}`. Multimap: the
//! same with label lists as values. Reglue datum:
//! `{"name"?, "Z", "pX", "pY", "pXinv"}`. Functions and multimaps name their
//! spaces; reglue data name a space and three functions.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::multifunction::{MultiMap, PointMap};
use crate::splithomeo::ReglueDatum;
use crate::topology::FinSpace;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub name: String,
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

impl SpaceFile {
    /// Opens are listed in the space's canonical order.
    pub fn from_space(s: &FinSpace) -> SpaceFile {
        SpaceFile {
            name: s.name().to_string(),
            points: s.labels().to_vec(),
            opens: s.opens().iter().map(|o| s.labels_of(o)).collect(),
        }
    }

    pub fn to_space(&self) -> Result<FinSpace> {
        FinSpace::build(&self.name, &self.points, &self.opens)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub domain: String,
    pub codomain: String,
    pub map: Map<String, Value>,
}

impl FunctionFile {
    pub fn from_map(name: Option<&str>, f: &PointMap) -> FunctionFile {
        let (x, y) = (f.domain(), f.codomain());
        FunctionFile {
            name: name.map(str::to_string),
            domain: x.name().to_string(),
            codomain: y.name().to_string(),
            map: (0..x.len())
                .map(|p| (x.label(p).to_string(), Value::String(y.label(f.apply(p)).to_string())))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiMapFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub domain: String,
    pub codomain: String,
    pub map: Map<String, Value>,
}

impl MultiMapFile {
    pub fn from_multimap(name: Option<&str>, m: &MultiMap) -> MultiMapFile {
        let (x, y) = (m.domain(), m.codomain());
        MultiMapFile {
            name: name.map(str::to_string),
            domain: x.name().to_string(),
            codomain: y.name().to_string(),
            map: (0..x.len())
                .map(|p| {
                    let vals = y.labels_of(m.value(p)).into_iter().map(Value::String).collect();
                    (x.label(p).to_string(), Value::Array(vals))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReglueFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "Z")]
    pub z: String,
    #[serde(rename = "pX")]
    pub px: String,
    #[serde(rename = "pY")]
    pub py: String,
    #[serde(rename = "pXinv")]
    pub pxinv: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Space,
    Function,
    MultiMap,
    Reglue,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Space => "space",
            Kind::Function => "function",
            Kind::MultiMap => "multimap",
            Kind::Reglue => "reglue datum",
        }
    }
}

/// Guesses the file kind from its fields.
pub fn detect_kind(v: &Value) -> Result<Kind> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("top level is not an object".into()))?;
    if obj.contains_key("points") {
        return Ok(Kind::Space);
    }
    if obj.contains_key("pX") {
        return Ok(Kind::Reglue);
    }
    match obj.get("map").and_then(Value::as_object) {
        Some(m) if m.values().any(Value::is_array) => Ok(Kind::MultiMap),
        Some(_) => Ok(Kind::Function),
        None => Err(Error::Parse("cannot tell what kind of file this is".into())),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn as_label(v: &Value) -> Result<&str> {
    v.as_str()
        .ok_or_else(|| Error::Parse(format!("expected a point label, found {v}")))
}

/// Named spaces, functions, multimaps and reglue data.
#[derive(Debug, Default, Clone)]
pub struct Workspace {
    spaces: BTreeMap<String, Arc<FinSpace>>,
    maps: BTreeMap<String, PointMap>,
    multimaps: BTreeMap<String, MultiMap>,
    reglues: BTreeMap<String, ReglueDatum>,
}

fn insert<T: PartialEq>(reg: &mut BTreeMap<String, T>, kind: Kind, name: &str, value: T) -> Result<()> {
    match reg.get(name) {
        Some(old) if *old == value => Ok(()),
        Some(_) => Err(Error::DuplicateName {
            kind: kind.as_str(),
            name: name.to_string(),
        }),
        None => {
            reg.insert(name.to_string(), value);
            Ok(())
        }
    }
}

fn lookup<'a, T>(reg: &'a BTreeMap<String, T>, kind: Kind, name: &str) -> Result<&'a T> {
    reg.get(name).ok_or_else(|| Error::DanglingReference {
        kind: kind.as_str(),
        name: name.to_string(),
    })
}

impl Workspace {
    pub fn new() -> Workspace {
        Workspace::default()
    }

    pub fn space(&self, name: &str) -> Result<&Arc<FinSpace>> {
        lookup(&self.spaces, Kind::Space, name)
    }

    pub fn map(&self, name: &str) -> Result<&PointMap> {
        lookup(&self.maps, Kind::Function, name)
    }

    pub fn multimap(&self, name: &str) -> Result<&MultiMap> {
        lookup(&self.multimaps, Kind::MultiMap, name)
    }

    pub fn reglue(&self, name: &str) -> Result<&ReglueDatum> {
        lookup(&self.reglues, Kind::Reglue, name)
    }

    pub fn add_space(&mut self, s: FinSpace) -> Result<Arc<FinSpace>> {
        let name = s.name().to_string();
        insert(&mut self.spaces, Kind::Space, &name, Arc::new(s))?;
        Ok(self.spaces[&name].clone())
    }

    pub fn add_map(&mut self, name: &str, f: PointMap) -> Result<()> {
        insert(&mut self.maps, Kind::Function, name, f)
    }

    pub fn add_multimap(&mut self, name: &str, m: MultiMap) -> Result<()> {
        insert(&mut self.multimaps, Kind::MultiMap, name, m)
    }

    pub fn add_reglue(&mut self, name: &str, d: ReglueDatum) -> Result<()> {
        insert(&mut self.reglues, Kind::Reglue, name, d)
    }

    /// Parses and registers one object. `default_name` names functions,
    /// multimaps and reglue data whose file has no `name` field. Returns
    /// the kind and registered name.
    pub fn load_value(&mut self, v: Value, default_name: &str, kind: Option<Kind>) -> Result<(Kind, String)> {
        let kind = match kind {
            Some(k) => k,
            None => detect_kind(&v)?,
        };
        let name = match kind {
            Kind::Space => {
                let file: SpaceFile = parse(v)?;
                let s = file.to_space()?;
                self.add_space(s)?;
                file.name
            }
            Kind::Function => {
                let file: FunctionFile = parse(v)?;
                let (x, y) = (self.space(&file.domain)?.clone(), self.space(&file.codomain)?.clone());
                let pairs = file
                    .map
                    .iter()
                    .map(|(k, v)| Ok((k.as_str(), as_label(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                let f = PointMap::from_labels(x, y, &pairs)?;
                let name = file.name.unwrap_or_else(|| default_name.to_string());
                self.add_map(&name, f)?;
                name
            }
            Kind::MultiMap => {
                let file: MultiMapFile = parse(v)?;
                let (x, y) = (self.space(&file.domain)?.clone(), self.space(&file.codomain)?.clone());
                let rows = file
                    .map
                    .iter()
                    .map(|(k, v)| {
                        let vals = v
                            .as_array()
                            .ok_or_else(|| Error::Parse(format!("value of `{k}` is not a list")))?
                            .iter()
                            .map(as_label)
                            .collect::<Result<Vec<_>>>()?;
                        Ok((k.as_str(), vals))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let m = MultiMap::from_labels(x, y, &rows)?;
                let name = file.name.unwrap_or_else(|| default_name.to_string());
                self.add_multimap(&name, m)?;
                name
            }
            Kind::Reglue => {
                let file: ReglueFile = parse(v)?;
                let d = ReglueDatum::new(
                    self.space(&file.z)?.clone(),
                    self.map(&file.px)?.clone(),
                    self.map(&file.py)?.clone(),
                    self.map(&file.pxinv)?.clone(),
                )?;
                let name = file.name.unwrap_or_else(|| default_name.to_string());
                self.add_reglue(&name, d)?;
                name
            }
        };
        Ok((kind, name))
    }

    pub fn load_str(&mut self, text: &str, default_name: &str, kind: Option<Kind>) -> Result<(Kind, String)> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        self.load_value(v, default_name, kind)
    }

    /// Loads a file. A reference to a space or function that is not loaded
    /// yet is resolved from `<name>.json` next to the file, if it exists.
    pub fn load(&mut self, path: &Path, kind: Option<Kind>) -> Result<(Kind, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("unnamed")
            .to_string();
        let dir = path.parent().unwrap_or(Path::new("."));
        // Each retry loads one missing dependency, so this terminates.
        let mut tried = Vec::new();
        loop {
            match self.load_str(&text, &stem, kind) {
                Err(Error::DanglingReference { kind: k, name }) => {
                    let candidate = dir.join(format!("{name}.json"));
                    if tried.contains(&name) || !candidate.is_file() || candidate == path {
                        return Err(Error::DanglingReference { kind: k, name });
                    }
                    tried.push(name);
                    self.load(&candidate, None)?;
                }
                other => return other,
            }
        }
    }
}

pub fn space_json(s: &FinSpace) -> Value {
    serde_json::to_value(SpaceFile::from_space(s)).expect("plain data")
}

pub fn function_json(name: Option<&str>, f: &PointMap) -> Value {
    serde_json::to_value(FunctionFile::from_map(name, f)).expect("plain data")
}

pub fn multimap_json(name: Option<&str>, m: &MultiMap) -> Value {
    serde_json::to_value(MultiMapFile::from_multimap(name, m)).expect("plain data")
}
