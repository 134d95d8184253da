//! The JSON tower document: named groups, modules, towers, maps and
//! G-sets plus a list of analysis requests. Everything is validated at load
//! time and errors carry JSON-pointer locations.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abelian::FiniteAbelianGroup;
use crate::burnside::GSet;
use crate::cohomology::{cohomology_group, Cochain};
use crate::error::{Error, Result};
use crate::gmodule::GModule;
use crate::groups::{parse_builtin, FiniteGroup};
use crate::linalg::Matrix;
use crate::postnikov::{PostnikovTower, Stage, TowerMap};

pub const FORMAT_VERSION: u32 = 1;

/// A group: a builtin spec such as `"dihedral:4"`, the name of a group in
/// the document, or an explicit multiplication table.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GroupSource {
    Named(String),
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ActionSource {
    /// Only `"trivial"` is accepted.
    Keyword(String),
    Generators {
        generators: Vec<usize>,
        matrices: Vec<Vec<Vec<i64>>>,
    },
    Table {
        table: Vec<Vec<Vec<i64>>>,
    },
}

impl Default for ActionSource {
    fn default() -> Self {
        ActionSource::Keyword("trivial".into())
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSource {
    /// Defaults to the group of the enclosing tower for inline modules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSource>,
    /// Orders of the cyclic factors.
    pub factors: Vec<u64>,
    #[serde(default)]
    pub action: ActionSource,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ModuleRef {
    Named(String),
    Inline(ModuleSource),
}

/// A k-invariant: `"zero"`, a cochain table (one coordinate vector per tuple
/// in lexicographic order), or coordinates of a class in the basis the
/// cohomology engine reports.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum KSource {
    Keyword(String),
    Table(Vec<Vec<i64>>),
    Class { class: Vec<i64> },
}

impl Default for KSource {
    fn default() -> Self {
        KSource::Keyword("zero".into())
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StageSource {
    pub level: usize,
    pub module: ModuleRef,
    #[serde(default)]
    pub k: KSource,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSource {
    pub group: GroupSource,
    #[serde(default)]
    pub stages: Vec<StageSource>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum HomSource {
    Table(Vec<usize>),
    Generators { generators: Vec<usize>, images: Vec<usize> },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StageMapSource {
    pub level: usize,
    /// Rows indexed by the target factors, columns by the source factors.
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessSource {
    pub level: usize,
    pub table: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapSource {
    pub source: String,
    pub target: String,
    pub phi1: HomSource,
    #[serde(default)]
    pub stage_maps: Vec<StageMapSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<WitnessSource>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GSetSource {
    pub group: GroupSource,
    pub size: usize,
    /// When present, `permutations` lists the action of these elements
    /// only; otherwise one permutation per group element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    pub permutations: Vec<Vec<usize>>,
}

/// One analysis, either from the document or from command-line flags.
#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentSource {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSource>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSource>,
    #[serde(default)]
    pub towers: BTreeMap<String, TowerSource>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSource>,
    #[serde(default)]
    pub gsets: BTreeMap<String, GSetSource>,
    #[serde(default)]
    pub requests: Vec<Request>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// A loaded and validated document.
#[derive(Clone, Debug, Default)]
pub struct TowerDocument {
    pub version: u32,
    pub groups: BTreeMap<String, Arc<FiniteGroup>>,
    pub modules: BTreeMap<String, GModule>,
    pub towers: BTreeMap<String, Arc<PostnikovTower>>,
    pub maps: BTreeMap<String, TowerMap>,
    pub gsets: BTreeMap<String, GSet>,
    pub requests: Vec<Request>,
}

/// Escape a key for use as a JSON-pointer segment.
pub fn pointer_segment(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn at(section: &str, key: &str) -> String {
    format!("/{section}/{}", pointer_segment(key))
}

pub fn load(path: &Path) -> Result<TowerDocument> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::input(
            path.display().to_string(),
            format!("cannot read the document: {e}"),
            "pass the path of a JSON tower document",
        )
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<TowerDocument> {
    let mut de = serde_json::Deserializer::from_str(text);
    let source: DocumentSource = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let location = if path == "." {
            String::new()
        } else {
            format!("/{}", path.replace('.', "/").replace('[', "/").replace(']', ""))
        };
        Error::input(location, e.into_inner().to_string(), "see docs/tower-document.schema.json for the format")
    })?;
    TowerDocument::from_source(source)
}

/// Caches groups by their spelling so that every reference to the same
/// group shares one instance.
#[derive(Default)]
struct Resolver {
    named: BTreeMap<String, Arc<FiniteGroup>>,
    builtin: BTreeMap<String, Arc<FiniteGroup>>,
}

impl Resolver {
    fn group(&mut self, g: &GroupSource, location: &str) -> Result<Arc<FiniteGroup>> {
        match g {
            GroupSource::Named(name) => {
                if let Some(g) = self.named.get(name) {
                    return Ok(g.clone());
                }
                if let Some(g) = self.builtin.get(name) {
                    return Ok(g.clone());
                }
                let g = Arc::new(parse_builtin(name).map_err(|e| {
                    Error::input(
                        location,
                        format!("'{name}' is neither a group of the document nor a builtin ({e})"),
                        "use a name from /groups or a builtin such as cyclic:4, sym:3, dihedral:4, product:[cyclic:2,cyclic:3]",
                    )
                })?);
                self.builtin.insert(name.clone(), g.clone());
                Ok(g)
            }
            GroupSource::Table { table, labels } => {
                let mut g = FiniteGroup::from_table("table", table.clone()).map_err(|e| e.within(&format!("{location}/table")))?;
                if let Some(l) = labels {
                    if l.len() != g.order() {
                        return Err(Error::input(
                            format!("{location}/labels"),
                            format!("{} labels for a group of order {}", l.len(), g.order()),
                            "give one label per element",
                        ));
                    }
                    g = g.with_labels(l.clone());
                }
                Ok(Arc::new(g))
            }
        }
    }
}

fn matrix(rows: &[Vec<i64>], nrows: usize, ncols: usize, location: &str) -> Result<Matrix<i64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::input(
            location,
            format!("expected a {nrows} x {ncols} matrix"),
            "rows are indexed by target factors and columns by source factors",
        ));
    }
    let mut m = Matrix::zeros(nrows, ncols);
    for (i, r) in rows.iter().enumerate() {
        for (j, &x) in r.iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(m)
}

fn module(res: &mut Resolver, src: &ModuleSource, default_group: Option<&Arc<FiniteGroup>>, location: &str) -> Result<GModule> {
    let group = match (&src.group, default_group) {
        (Some(g), _) => res.group(g, &format!("{location}/group"))?,
        (None, Some(g)) => g.clone(),
        (None, None) => {
            return Err(Error::input(format!("{location}/group"), "missing group", "named modules must name their group"))
        }
    };
    let abelian = FiniteAbelianGroup::new(src.factors.clone()).map_err(|e| e.within(&format!("{location}/factors")))?;
    let r = abelian.rank();
    let within = |e: Error| e.within(location);
    match &src.action {
        ActionSource::Keyword(w) if w == "trivial" => Ok(GModule::trivial(group, abelian)),
        ActionSource::Keyword(w) => Err(Error::input(
            format!("{location}/action"),
            format!("unknown action '{w}'"),
            "use \"trivial\", {\"generators\", \"matrices\"} or {\"table\"}",
        )),
        ActionSource::Generators { generators, matrices } => {
            if generators.len() != matrices.len() {
                return Err(Error::input(
                    format!("{location}/action"),
                    "generators and matrices differ in length",
                    "give one matrix per generator",
                ));
            }
            if let Some(i) = generators.iter().position(|&g| g >= group.order()) {
                return Err(Error::input(
                    format!("{location}/action/generators/{i}"),
                    "generator out of range",
                    "generators are element indices",
                ));
            }
            let ms = matrices
                .iter()
                .enumerate()
                .map(|(i, m)| matrix(m, r, r, &format!("{location}/action/matrices/{i}")))
                .collect::<Result<Vec<_>>>()?;
            GModule::from_generators(group, abelian, generators, &ms).map_err(within)
        }
        ActionSource::Table { table } => {
            let ms = table
                .iter()
                .enumerate()
                .map(|(i, m)| matrix(m, r, r, &format!("{location}/action/table/{i}")))
                .collect::<Result<Vec<_>>>()?;
            GModule::from_table(group, abelian, ms).map_err(within)
        }
    }
}

fn tower(res: &mut Resolver, modules: &BTreeMap<String, GModule>, name: &str, src: &TowerSource, location: &str) -> Result<PostnikovTower> {
    let base = res.group(&src.group, &format!("{location}/group"))?;
    let mut stages = Vec::with_capacity(src.stages.len());
    for (i, s) in src.stages.iter().enumerate() {
        let sl = format!("{location}/stages/{i}");
        let m = match &s.module {
            ModuleRef::Named(n) => modules.get(n).cloned().ok_or_else(|| {
                Error::input(format!("{sl}/module"), format!("unknown module '{n}'"), "define it under /modules")
            })?,
            ModuleRef::Inline(m) => module(res, m, Some(&base), &format!("{sl}/module"))?,
        };
        if **m.group() != *base {
            return Err(Error::input(
                format!("{sl}/module"),
                "module is not over the tower's group",
                "refer to the group by the same name in both places",
            ));
        }
        let degree = s.level + 1;
        let k = match &s.k {
            KSource::Keyword(w) if w == "zero" => Cochain::zero(&m, degree),
            KSource::Keyword(w) => {
                return Err(Error::input(format!("{sl}/k"), format!("unknown k '{w}'"), "use \"zero\", a cochain table or {\"class\": [...]}"))
            }
            KSource::Table(t) => Cochain::from_table(&m, degree, t.clone()),
            KSource::Class { class } => cohomology_group(&m, degree).and_then(|h| h.cocycle_from_coordinates(class)),
        }
        .map_err(|e| e.within(&format!("{sl}/k")))?;
        stages.push(Stage { level: s.level, module: m, k });
    }
    PostnikovTower::new(name, base, stages).map_err(|e| e.within(location))
}

fn tower_map(towers: &BTreeMap<String, Arc<PostnikovTower>>, src: &MapSource, location: &str) -> Result<TowerMap> {
    let lookup = |n: &str, field: &str| {
        towers
            .get(n)
            .cloned()
            .ok_or_else(|| Error::input(format!("{location}/{field}"), format!("unknown tower '{n}'"), "define it under /towers"))
    };
    let (s, t) = (lookup(&src.source, "source")?, lookup(&src.target, "target")?);
    let (g, h) = (s.base(), t.base());
    let phi1 = match &src.phi1 {
        HomSource::Table(v) => v.clone(),
        HomSource::Generators { generators, images } => {
            if generators.len() != images.len() || generators.iter().any(|&x| x >= g.order()) || images.iter().any(|&x| x >= h.order()) {
                return Err(Error::input(
                    format!("{location}/phi1"),
                    "generators and images must be element indices of equal count",
                    "list the image of each generator",
                ));
            }
            g.extend_from_generators(generators, images, h.identity(), |a, b| h.mul(*a, *b))
                .ok_or_else(|| {
                    Error::input(format!("{location}/phi1"), "the images do not define a homomorphism", "check the relations")
                })?
        }
    };
    g.check_homomorphism(h, &phi1).map_err(|e| e.within(&format!("{location}/phi1")))?;
    let mut maps = Vec::new();
    for (i, sm) in src.stage_maps.iter().enumerate() {
        let l = sm.level;
        let rows = t.homotopy(l).rank();
        let cols = s.homotopy(l).rank();
        maps.push((l, matrix(&sm.matrix, rows, cols, &format!("{location}/stage_maps/{i}/matrix"))?));
    }
    let mut witnesses = Vec::new();
    for (i, w) in src.witnesses.iter().flatten().enumerate() {
        let pulled = t.module(w.level).pullback(g.clone(), &phi1);
        let b = Cochain::from_table(&pulled, w.level, w.table.clone())
            .map_err(|e| e.within(&format!("{location}/witnesses/{i}/table")))?;
        witnesses.push((w.level, b));
    }
    TowerMap::new(s, t, phi1, maps, witnesses).map_err(|e| e.within(location))
}

fn gset(res: &mut Resolver, src: &GSetSource, location: &str) -> Result<GSet> {
    let g = res.group(&src.group, &format!("{location}/group"))?;
    let within = |e: Error| e.within(location);
    match &src.generators {
        Some(gens) => {
            if gens.len() != src.permutations.len() || gens.iter().any(|&x| x >= g.order()) {
                return Err(Error::input(
                    format!("{location}/generators"),
                    "generators must be element indices, one per permutation",
                    "list the permutation of each generator",
                ));
            }
            GSet::from_generators(g, src.size, gens, &src.permutations).map_err(within)
        }
        None => {
            if src.permutations.iter().any(|p| p.len() != src.size) {
                return Err(Error::input(format!("{location}/permutations"), "a permutation has the wrong length", "each lists g·x for every x"));
            }
            GSet::new(g, src.permutations.clone()).map_err(within)
        }
    }
}

impl TowerDocument {
    pub fn from_source(src: DocumentSource) -> Result<Self> {
        if src.version != FORMAT_VERSION {
            return Err(Error::input(
                "/version",
                format!("unsupported format version {}", src.version),
                format!("this build reads version {FORMAT_VERSION}"),
            ));
        }
        let mut res = Resolver::default();
        let mut doc = TowerDocument {
            version: src.version,
            ..Default::default()
        };
        for (name, g) in &src.groups {
            let loc = at("groups", name);
            if let GroupSource::Named(n) = g {
                if n == name || src.groups.contains_key(n) {
                    return Err(Error::input(loc, "groups may not refer to other document groups", "use a builtin or a table"));
                }
            }
            let group = res.group(g, &loc)?;
            let group = Arc::new(Arc::unwrap_or_clone(group).with_name(name.clone()));
            res.named.insert(name.clone(), group.clone());
            doc.groups.insert(name.clone(), group);
        }
        for (name, m) in &src.modules {
            let m = module(&mut res, m, None, &at("modules", name))?;
            doc.modules.insert(name.clone(), m);
        }
        for (name, t) in &src.towers {
            let t = tower(&mut res, &doc.modules, name, t, &at("towers", name))?;
            doc.towers.insert(name.clone(), Arc::new(t));
        }
        for (name, m) in &src.maps {
            let m = tower_map(&doc.towers, m, &at("maps", name))?;
            doc.maps.insert(name.clone(), m);
        }
        for (name, s) in &src.gsets {
            let s = gset(&mut res, s, &at("gsets", name))?;
            doc.gsets.insert(name.clone(), s);
        }
        for (i, r) in src.requests.iter().enumerate() {
            doc.check_request(r).map_err(|e| e.within(&format!("/requests/{i}")))?;
        }
        doc.requests = src.requests;
        Ok(doc)
    }

    /// Checks that every name the request mentions resolves.
    pub fn check_request(&self, r: &Request) -> Result<()> {
        fn has<T>(m: &BTreeMap<String, T>, key: &Option<String>, field: &str, section: &str) -> Result<()> {
            match key {
                Some(k) if !m.contains_key(k) => Err(Error::input(
                    format!("/{field}"),
                    format!("unknown {field} '{k}'"),
                    format!("define it under /{section}"),
                )),
                _ => Ok(()),
            }
        }
        has(&self.towers, &r.tower, "tower", "towers")?;
        has(&self.maps, &r.map, "map", "maps")?;
        has(&self.gsets, &r.gset, "gset", "gsets")
    }

    /// The named tower, or the only tower when no name is given.
    pub fn tower(&self, name: Option<&str>) -> Result<&Arc<PostnikovTower>> {
        pick(&self.towers, name, "tower", "towers")
    }

    pub fn map(&self, name: Option<&str>) -> Result<&TowerMap> {
        pick(&self.maps, name, "map", "maps")
    }

    pub fn gset(&self, name: Option<&str>) -> Result<&GSet> {
        pick(&self.gsets, name, "gset", "gsets")
    }

    /// A document group by name, else a builtin.
    pub fn group(&self, spec: &str) -> Result<Arc<FiniteGroup>> {
        if let Some(g) = self.groups.get(spec) {
            return Ok(g.clone());
        }
        parse_builtin(spec).map(Arc::new).map_err(|e| e.within("/group"))
    }
}

fn pick<'a, T>(m: &'a BTreeMap<String, T>, name: Option<&str>, what: &str, section: &str) -> Result<&'a T> {
    match name {
        Some(n) => m.get(n).ok_or_else(|| {
            Error::input(format!("/{section}/{}", pointer_segment(n)), format!("no {what} named '{n}'"), format!("define it under /{section}"))
        }),
        None if m.len() == 1 => Ok(m.values().next().expect("one entry")),
        None => Err(Error::input(
            format!("/{section}"),
            format!("{} {section} in the document", m.len()),
            format!("select one with --{what}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "version": 1,
        "towers": {
            "X": {
                "group": "cyclic:2",
                "stages": [{"level": 2, "module": {"factors": [3], "action": {"generators": [1], "matrices": [[[2]]]}}, "k": "zero"}]
            }
        }
    }"#;

    #[test]
    fn loads_example() {
        let d = parse(EXAMPLE).unwrap();
        let t = d.tower(None).unwrap();
        assert_eq!(t.homotopy(2).order(), 3);
        assert!(!t.module(2).is_trivial_action());
    }

    #[test]
    fn empty_document() {
        let d = parse("{}").unwrap();
        assert!(d.towers.is_empty() && d.requests.is_empty());
    }

    #[test]
    fn rejects_non_cocycle() {
        // indicator of (1,1,1) on Z/2 with values in Z/3; its coboundary is
        // 2 at (1,1,1,1)
        let doc = r#"{"towers": {"T": {"group": "cyclic:2", "stages": [
            {"level": 2, "module": {"factors": [3]}, "k": [[0],[0],[0],[0],[0],[0],[0],[1]]}]}}}"#;
        let e = parse(doc).unwrap_err();
        assert!(e.location().starts_with("/towers/T/stages/0/k"), "{e}");
        assert!(e.to_string().contains("1, 1, 1, 1"), "{e}");
    }

    #[test]
    fn located_errors() {
        let e = parse(r#"{"towers": {"T": {"group": "cyclic:0"}}}"#).unwrap_err();
        assert_eq!(e.location(), "/towers/T/group");
        let e = parse(r#"{"towers": {"T": {"group": "cyclic:2", "stages": [{"level": 1, "module": {"factors": [2]}}]}}}"#).unwrap_err();
        assert_eq!(e.location(), "/towers/T/stages/0/level");
        let e = parse(r#"{"towers": {"T": {"grop": "cyclic:2"}}}"#).unwrap_err();
        assert!(e.location().starts_with("/towers/T"), "{e}");
        let e = parse(r#"{"requests": [{"command": "decompose", "tower": "nope"}]}"#).unwrap_err();
        assert_eq!(e.location(), "/requests/0/tower");
    }

    #[test]
    fn maps_and_gsets() {
        let doc = r#"{
            "towers": {"A": {"group": "cyclic:2"}, "B": {"group": "cyclic:4"}},
            "maps": {"f": {"source": "A", "target": "B", "phi1": {"generators": [1], "images": [2]}}},
            "gsets": {"S": {"group": "cyclic:2", "size": 3, "generators": [1], "permutations": [[1, 0, 2]]}}
        }"#;
        let d = parse(doc).unwrap();
        assert_eq!(d.map(Some("f")).unwrap().phi1, vec![0, 2]);
        assert_eq!(d.gset(None).unwrap().fixed_points(), vec![2]);
        assert!(d.tower(None).is_err());
    }
}
