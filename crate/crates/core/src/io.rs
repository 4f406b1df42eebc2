//! JSON file formats for categories, diagrams and functors.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cat::{validate_category, FinCat, Functor, FunctorMaps, MarkedFinCat, MarkedFunctor, RawCategory};
use crate::diagram::CatDiagram;
use crate::error::{CatError, Result};
use crate::limits::SetDiagram;
use crate::localization::{PresentedCat, Probe};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CatError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| CatError::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Validates a raw table together with its optional marking. Isomorphisms
/// are marked implicitly; a listed set that is not closed under composition
/// is rejected.
pub fn marked_from_raw(raw: &RawCategory) -> Result<MarkedFinCat> {
    let cat = Arc::new(validate_category(raw)?);
    let mut idx: Vec<usize> = cat.isomorphisms();
    for m in raw.marked.iter().flatten() {
        idx.push(cat.morphism_index(m)?);
    }
    MarkedFinCat::new(cat, &idx)
}

/// The table of a marked category, listing its non-identity marked morphisms.
pub fn marked_to_raw(c: &MarkedFinCat) -> RawCategory {
    let mut raw = c.cat.to_raw();
    raw.marked = Some(c.marking.indices().filter(|&f| !c.cat.is_identity(f)).map(|f| c.cat.morphism_id(f).to_string()).collect());
    raw
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFunctor {
    pub object_map: BTreeMap<String, String>,
    #[serde(default)]
    pub morphism_map: BTreeMap<String, String>,
}

impl RawFunctor {
    pub fn of(f: &Functor) -> Self {
        RawFunctor { object_map: f.object_map_ids(), morphism_map: f.morphism_map_ids() }
    }

    pub fn of_maps(dom: &Arc<FinCat>, cod: &Arc<FinCat>, m: &FunctorMaps) -> Self {
        Self::of(&Functor::new_unchecked(dom.clone(), cod.clone(), m.clone()))
    }

    pub fn resolve(&self, dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> Result<Functor> {
        Functor::from_ids(dom.clone(), cod.clone(), &self.object_map, &self.morphism_map)
    }
}

/// A category given inline or as a path relative to the referring file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatRef {
    Inline(RawCategory),
    File(String),
}

impl CatRef {
    pub fn load(&self, dir: Option<&Path>) -> Result<RawCategory> {
        match self {
            CatRef::Inline(r) => Ok(r.clone()),
            CatRef::File(p) => read_json(&dir.map_or_else(|| Path::new(p).to_path_buf(), |d| d.join(p))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDiagram {
    pub base: CatRef,
    pub fibers: BTreeMap<String, CatRef>,
    /// Identity morphisms of the base may be omitted.
    #[serde(default)]
    pub transitions: BTreeMap<String, RawFunctor>,
}

impl RawDiagram {
    pub fn of(d: &CatDiagram) -> Self {
        let b = d.base_cat();
        let fibers = (0..b.object_count())
            .map(|i| (b.object_id(i).to_string(), CatRef::Inline(marked_to_raw(d.marked_fiber(i)))))
            .collect();
        let transitions = b
            .non_identity_morphisms()
            .map(|m| {
                let f = RawFunctor::of_maps(d.fiber(b.src(m)), d.fiber(b.tgt(m)), d.transition(m));
                (b.morphism_id(m).to_string(), f)
            })
            .collect();
        RawDiagram { base: CatRef::Inline(marked_to_raw(d.base())), fibers, transitions }
    }

    /// Validates the diagram; fibers without a marking are flat.
    pub fn resolve(&self, dir: Option<&Path>) -> Result<CatDiagram> {
        let base = marked_from_raw(&self.base.load(dir)?)?;
        let b = base.cat.clone();
        for k in self.fibers.keys() {
            b.object_index(k)?;
        }
        for k in self.transitions.keys() {
            b.morphism_index(k)?;
        }
        let fibers = (0..b.object_count())
            .map(|i| {
                let id = b.object_id(i);
                let raw = self.fibers.get(id).ok_or_else(|| missing(format!("no fiber for {id}")))?;
                marked_from_raw(&raw.load(dir)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let transitions = (0..b.morphism_count())
            .map(|m| {
                let (s, t) = (&fibers[b.src(m)].cat, &fibers[b.tgt(m)].cat);
                match self.transitions.get(b.morphism_id(m)) {
                    Some(f) => Ok(f.resolve(s, t)?.maps().clone()),
                    None if b.is_identity(m) => Ok(FunctorMaps::identity(s)),
                    None => Err(missing(format!("no transition for {}", b.morphism_id(m)))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        CatDiagram::new(base, fibers, transitions)
    }
}

fn missing(reason: String) -> CatError {
    CatError::InvalidDiagram { reason, witness: vec![] }
}

pub fn read_marked_category(path: &Path) -> Result<MarkedFinCat> {
    marked_from_raw(&read_json(path)?)
}

pub fn read_diagram(path: &Path) -> Result<CatDiagram> {
    read_json::<RawDiagram>(path)?.resolve(path.parent())
}

pub fn read_presentation(path: &Path) -> Result<PresentedCat> {
    read_json(path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProbe {
    pub name: String,
    pub category: CatRef,
}

/// A probe manifest: a JSON list of named categories.
pub fn read_probes(path: &Path) -> Result<Vec<Probe>> {
    let raw: Vec<RawProbe> = read_json(path)?;
    raw.iter()
        .map(|p| Ok(Probe { name: p.name.clone(), cat: Arc::new(validate_category(&p.category.load(path.parent())?)?) }))
        .collect()
}

/// A marked functor file: domain, codomain and the maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMarkedFunctor {
    pub dom: CatRef,
    pub cod: CatRef,
    pub functor: RawFunctor,
}

impl RawMarkedFunctor {
    pub fn of(t: &MarkedFunctor) -> Self {
        RawMarkedFunctor {
            dom: CatRef::Inline(marked_to_raw(&t.dom)),
            cod: CatRef::Inline(marked_to_raw(&t.cod)),
            functor: RawFunctor::of(&t.functor),
        }
    }

    pub fn resolve(&self, dir: Option<&Path>) -> Result<MarkedFunctor> {
        let dom = marked_from_raw(&self.dom.load(dir)?)?;
        let cod = marked_from_raw(&self.cod.load(dir)?)?;
        let f = self.functor.resolve(&dom.cat, &cod.cat)?;
        MarkedFunctor::new(f, dom, cod)
    }
}

/// A set-valued diagram file: elements per object, and each action as an
/// element map. Identity actions may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSetDiagram {
    pub base: CatRef,
    pub values: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

impl RawSetDiagram {
    pub fn of(d: &SetDiagram) -> Self {
        let b = &d.base;
        let values = (0..b.object_count()).map(|i| (b.object_id(i).to_string(), d.values[i].clone())).collect();
        let actions = b
            .non_identity_morphisms()
            .map(|m| {
                let (s, t) = (&d.values[b.src(m)], &d.values[b.tgt(m)]);
                let map = d.actions[m].iter().enumerate().map(|(x, &y)| (s[x].clone(), t[y].clone())).collect();
                (b.morphism_id(m).to_string(), map)
            })
            .collect();
        RawSetDiagram { base: CatRef::Inline(b.to_raw()), values, actions }
    }

    pub fn resolve(&self, dir: Option<&Path>) -> Result<SetDiagram> {
        let b = Arc::new(validate_category(&self.base.load(dir)?)?);
        for k in self.values.keys() {
            b.object_index(k)?;
        }
        for k in self.actions.keys() {
            b.morphism_index(k)?;
        }
        let values: Vec<Vec<String>> = (0..b.object_count())
            .map(|i| self.values.get(b.object_id(i)).cloned().ok_or_else(|| missing(format!("no value for {}", b.object_id(i)))))
            .collect::<Result<_>>()?;
        let actions = (0..b.morphism_count())
            .map(|m| {
                let (s, t) = (&values[b.src(m)], &values[b.tgt(m)]);
                match self.actions.get(b.morphism_id(m)) {
                    None if b.is_identity(m) => Ok((0..s.len()).collect()),
                    None => Err(missing(format!("no action for {}", b.morphism_id(m)))),
                    Some(map) => s
                        .iter()
                        .map(|x| {
                            let y = map.get(x).ok_or_else(|| missing(format!("{} does not act on {x}", b.morphism_id(m))))?;
                            t.iter().position(|z| z == y).ok_or_else(|| missing(format!("unknown element {y}")))
                        })
                        .collect(),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SetDiagram::new(b, values, actions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::standard;
    use crate::samples::point_into_pair;

    #[test]
    fn marked_round_trip() {
        let m = MarkedFinCat::from_ids(standard::chain2(), &["id_0", "id_1", "id_2", "u"]).unwrap();
        let raw = marked_to_raw(&m);
        assert_eq!(raw.marked.as_deref(), Some(&["u".to_string()][..]));
        assert_eq!(marked_from_raw(&raw).unwrap(), m);
    }

    #[test]
    fn isomorphisms_are_marked_implicitly() {
        let m = marked_from_raw(&standard::walking_iso().to_raw()).unwrap();
        assert!(m.is_sharp());
    }

    #[test]
    fn unclosed_marking_is_rejected() {
        let mut raw = standard::chain2().to_raw();
        raw.marked = Some(vec!["u".into(), "v".into()]);
        assert!(matches!(marked_from_raw(&raw), Err(CatError::InvalidMarking(_))));
    }

    #[test]
    fn diagram_round_trip() {
        let d = point_into_pair(MarkedFinCat::sharp(standard::arrow()));
        let raw = RawDiagram::of(&d);
        let text = serde_json::to_string(&raw).unwrap();
        let back: RawDiagram = serde_json::from_str(&text).unwrap();
        let e = back.resolve(None).unwrap();
        assert_eq!(e.base(), d.base());
        assert_eq!(e.fibers(), d.fibers());
        assert_eq!(e.transitions(), d.transitions());
    }

    #[test]
    fn set_diagram_round_trip() {
        let b = Arc::new(standard::arrow());
        let values = vec![vec!["x".into(), "y".into()], vec!["z".into()]];
        let d = SetDiagram::new(b, values, vec![vec![0, 1], vec![0], vec![0, 0]]).unwrap();
        let back = RawSetDiagram::of(&d).resolve(None).unwrap();
        assert_eq!(back.values, d.values);
        assert_eq!(back.actions, d.actions);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"base": {"objects": ["0"]}, "fibers": {}, "extra": 1}"#;
        assert!(serde_json::from_str::<RawDiagram>(text).is_err());
    }
}
