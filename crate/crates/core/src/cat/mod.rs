//! Finite categories given by explicit composition tables.
//!
//! Objects and morphisms are identified by string ids. A [`FinCat`] always
//! stores both lists sorted by id, so index order is the lexicographic id
//! order and every canonical choice downstream can use plain indices.

mod functor;
mod marking;
mod ops;
pub mod standard;

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

pub use functor::{Functor, FunctorMaps, NatTrans};
pub use marking::{saturate_marking, validate_marking, MarkedFinCat, MarkedFunctor, Marking};
pub use ops::{
    full_subcategory, marked_subcategory, opposite, opposite_marked, product, product_functor_maps, product_marked,
};
pub(crate) use ops::pair_id;

use crate::error::{CatError, Result, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismData {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A validated finite category.
#[derive(Clone)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<MorphismData>,
    identity: Vec<usize>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
    in_pos: Vec<usize>,
    // comp[g][in_pos[f]] = g∘f, defined for tgt(f) == src(g)
    comp: Vec<Vec<usize>>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    inverses: OnceLock<Vec<Option<usize>>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identity == other.identity
            && self.comp == other.comp
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.iter().map(|m| &m.id).collect::<Vec<_>>())
            .finish()
    }
}

/// Index relabelling produced when a category is built from unsorted parts.
#[derive(Debug, Clone)]
pub struct Relabel {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

/// Builds a category from parts given in arbitrary order.
///
/// Indices passed to `build` and to the composition closure are builder
/// indices; the returned [`Relabel`] maps them to the final sorted indices.
#[derive(Debug, Default, Clone)]
pub struct CatBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, usize, usize)>,
    identity: Vec<Option<usize>>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, id: impl Into<String>) -> usize {
        self.objects.push(id.into());
        self.identity.push(None);
        self.objects.len() - 1
    }

    pub fn morphism(&mut self, id: impl Into<String>, src: usize, tgt: usize) -> usize {
        self.morphisms.push((id.into(), src, tgt));
        self.morphisms.len() - 1
    }

    pub fn identity(&mut self, object: usize, id: impl Into<String>) -> usize {
        let m = self.morphism(id, object, object);
        self.identity[object] = Some(m);
        m
    }

    /// Declares an already added morphism as the identity of `object`.
    pub fn set_identity(&mut self, object: usize, morphism: usize) {
        self.identity[object] = Some(morphism);
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    /// Finishes the category. `comp(g, f)` must return the builder index of
    /// g∘f for every composable pair; no axiom checking is done here.
    pub fn build(self, mut comp: impl FnMut(usize, usize) -> usize) -> Result<(FinCat, Relabel)> {
        let n = self.objects.len();
        let m = self.morphisms.len();
        let mut ob_order: Vec<usize> = (0..n).collect();
        ob_order.sort_by(|&a, &b| self.objects[a].cmp(&self.objects[b]));
        let mut ob_new = vec![0; n];
        for (new, &old) in ob_order.iter().enumerate() {
            ob_new[old] = new;
        }
        let mut mor_order: Vec<usize> = (0..m).collect();
        mor_order.sort_by(|&a, &b| self.morphisms[a].0.cmp(&self.morphisms[b].0));
        let mut mor_new = vec![0; m];
        for (new, &old) in mor_order.iter().enumerate() {
            mor_new[old] = new;
        }
        let mut dup = Vec::new();
        for w in ob_order.windows(2) {
            if self.objects[w[0]] == self.objects[w[1]] {
                dup.push(format!("duplicate object id {}", self.objects[w[0]]));
            }
        }
        for w in mor_order.windows(2) {
            if self.morphisms[w[0]].0 == self.morphisms[w[1]].0 {
                dup.push(format!("duplicate morphism id {}", self.morphisms[w[0]].0));
            }
        }
        if !dup.is_empty() {
            return Err(CatError::MalformedTable(dup));
        }
        let objects: Vec<String> = ob_order.iter().map(|&o| self.objects[o].clone()).collect();
        let morphisms: Vec<MorphismData> = mor_order
            .iter()
            .map(|&o| {
                let (id, s, t) = &self.morphisms[o];
                MorphismData { id: id.clone(), src: ob_new[*s], tgt: ob_new[*t] }
            })
            .collect();
        let mut identity = vec![0; n];
        for (old, id) in self.identity.iter().enumerate() {
            match id {
                Some(i) => identity[ob_new[old]] = mor_new[*i],
                None => {
                    return Err(CatError::MalformedTable(vec![format!(
                        "object {} has no identity",
                        self.objects[old]
                    )]))
                }
            }
        }
        let mut cat = FinCat::skeleton_parts(objects, morphisms, identity);
        for g_new in 0..m {
            let src = cat.morphisms[g_new].src;
            let row: Vec<usize> = cat.incoming[src]
                .iter()
                .map(|&f_new| mor_new[comp(mor_order[g_new], mor_order[f_new])])
                .collect();
            cat.comp[g_new] = row;
        }
        Ok((cat, Relabel { objects: ob_new, morphisms: mor_new }))
    }
}

impl FinCat {
    /// Index structures without the composition table.
    fn skeleton_parts(objects: Vec<String>, morphisms: Vec<MorphismData>, identity: Vec<usize>) -> FinCat {
        let n = objects.len();
        let m = morphisms.len();
        let object_index = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let morphism_index = morphisms.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        let mut in_pos = vec![0; m];
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, d) in morphisms.iter().enumerate() {
            in_pos[k] = incoming[d.tgt].len();
            incoming[d.tgt].push(k);
            outgoing[d.src].push(k);
            homs.entry((d.src, d.tgt)).or_default().push(k);
        }
        FinCat {
            objects,
            morphisms,
            identity,
            object_index,
            morphism_index,
            incoming,
            outgoing,
            in_pos,
            comp: vec![Vec::new(); m],
            homs,
            inverses: OnceLock::new(),
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorphismData] {
        &self.morphisms
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn morphism_id(&self, f: usize) -> &str {
        &self.morphisms[f].id
    }

    pub fn object_index(&self, id: &str) -> Result<usize> {
        self.object_index.get(id).copied().ok_or_else(|| CatError::UnknownObject(id.to_string()))
    }

    pub fn morphism_index(&self, id: &str) -> Result<usize> {
        self.morphism_index.get(id).copied().ok_or_else(|| CatError::UnknownMorphism(id.to_string()))
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.morphisms[f].tgt
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.morphisms[f].src] == f
    }

    /// g∘f. Panics if the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        assert_eq!(self.tgt(f), self.src(g), "composing non-composable morphisms");
        self.comp[g][self.in_pos[f]]
    }

    /// Composes a path given in application order (first morphism first).
    pub fn compose_path(&self, path: &[usize]) -> Option<usize> {
        let (&first, rest) = path.split_first()?;
        let mut acc = first;
        for &g in rest {
            if self.tgt(acc) != self.src(g) {
                return None;
            }
            acc = self.compose(g, acc);
        }
        Some(acc)
    }

    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.homs.get(&(x, y)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn incoming(&self, x: usize) -> &[usize] {
        &self.incoming[x]
    }

    pub fn outgoing(&self, x: usize) -> &[usize] {
        &self.outgoing[x]
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphism_count()).filter(move |&f| !self.is_identity(f))
    }

    /// All composable pairs (g, f) of non-identity morphisms, g after f.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.non_identity_morphisms().flat_map(move |f| {
            self.outgoing[self.tgt(f)]
                .iter()
                .copied()
                .filter(move |&g| !self.is_identity(g))
                .map(move |g| (g, f))
        })
    }

    fn inverse_table(&self) -> &[Option<usize>] {
        self.inverses.get_or_init(|| {
            (0..self.morphism_count())
                .map(|f| {
                    let (s, t) = (self.src(f), self.tgt(f));
                    self.hom(t, s).iter().copied().find(|&g| {
                        self.compose(g, f) == self.identity[s] && self.compose(f, g) == self.identity[t]
                    })
                })
                .collect()
        })
    }

    /// The two-sided inverse of `f`, found by exhaustive search of Hom(tgt f, src f).
    pub fn inverse(&self, f: usize) -> Option<usize> {
        self.inverse_table()[f]
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    /// `is_iso` by morphism id.
    pub fn is_iso_id(&self, f: &str) -> Result<bool> {
        Ok(self.is_iso(self.morphism_index(f)?))
    }

    pub fn isomorphisms(&self) -> Vec<usize> {
        (0..self.morphism_count()).filter(|&f| self.is_iso(f)).collect()
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.morphism_count()).all(|f| self.is_iso(f))
    }

    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.homs.values().all(|h| h.len() <= 1)
    }

    /// Exhaustive re-check of the unit and associativity laws.
    pub fn check_axioms(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for x in 0..self.object_count() {
            let i = self.identity[x];
            if self.src(i) != x || self.tgt(i) != x {
                violations.push(Violation::IdentityNotEndo {
                    object: self.objects[x].clone(),
                    morphism: self.morphism_id(i).to_string(),
                });
            }
        }
        for g in 0..self.morphism_count() {
            for &f in &self.incoming[self.src(g)] {
                let h = self.compose(g, f);
                if self.src(h) != self.src(f) || self.tgt(h) != self.tgt(g) {
                    violations.push(Violation::CompositeTyping {
                        after: self.morphism_id(g).into(),
                        before: self.morphism_id(f).into(),
                        equals: self.morphism_id(h).into(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        for f in 0..self.morphism_count() {
            let (s, t) = (self.src(f), self.tgt(f));
            for (got, after, before) in [
                (self.compose(f, self.identity[s]), f, self.identity[s]),
                (self.compose(self.identity[t], f), self.identity[t], f),
            ] {
                if got != f {
                    violations.push(Violation::UnitLaw {
                        after: self.morphism_id(after).into(),
                        before: self.morphism_id(before).into(),
                        got: self.morphism_id(got).into(),
                        expected: self.morphism_id(f).into(),
                    });
                }
            }
        }
        for f in 0..self.morphism_count() {
            for &g in &self.outgoing[self.tgt(f)] {
                let gf = self.compose(g, f);
                for &h in &self.outgoing[self.tgt(g)] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        violations.push(Violation::Associativity {
                            h: self.morphism_id(h).into(),
                            g: self.morphism_id(g).into(),
                            f: self.morphism_id(f).into(),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }
}

/// Category data as it appears in an input file, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    #[serde(default)]
    pub composition: Vec<RawComposite>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<std::collections::BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComposite {
    pub after: String,
    pub before: String,
    pub equals: String,
}

impl RawMorphism {
    pub fn new(id: &str, src: &str, tgt: &str) -> Self {
        RawMorphism { id: id.into(), src: src.into(), tgt: tgt.into() }
    }
}

impl RawComposite {
    pub fn new(after: &str, before: &str, equals: &str) -> Self {
        RawComposite { after: after.into(), before: before.into(), equals: equals.into() }
    }
}

/// Validates a raw table, reporting every violated axiom.
///
/// Identity composites may be omitted from `composition`; when listed they
/// are checked against the unit laws. Every composable pair of non-identity
/// morphisms must be listed exactly once.
pub fn validate_category(raw: &RawCategory) -> Result<FinCat> {
    let mut malformed = Vec::new();
    let mut report = ValidationReport::default();
    let mut b = CatBuilder::new();
    let mut ob: HashMap<&str, usize> = HashMap::new();
    for o in &raw.objects {
        if ob.insert(o.as_str(), b.object(o.clone())).is_some() {
            malformed.push(format!("duplicate object id {o}"));
        }
    }
    let ident_name = |o: &str| -> String {
        match &raw.identities {
            Some(map) => map.get(o).cloned().unwrap_or_else(|| format!("id_{o}")),
            None => format!("id_{o}"),
        }
    };
    if let Some(map) = &raw.identities {
        for k in map.keys() {
            if !ob.contains_key(k.as_str()) {
                report.violations.push(Violation::DanglingObject {
                    morphism: map[k].clone(),
                    object: k.clone(),
                });
            }
        }
    }
    let mut mor: HashMap<String, usize> = HashMap::new();
    let mut is_ident: Vec<bool> = Vec::new();
    let mut src_of = Vec::new();
    let mut tgt_of = Vec::new();
    let ident_ids: HashMap<String, String> =
        raw.objects.iter().map(|o| (ident_name(o), o.clone())).collect();
    for m in &raw.morphisms {
        let (s, t) = match (ob.get(m.src.as_str()), ob.get(m.tgt.as_str())) {
            (Some(&s), Some(&t)) => (s, t),
            (s, _) => {
                let missing = if s.is_none() { &m.src } else { &m.tgt };
                report.violations.push(Violation::DanglingObject {
                    morphism: m.id.clone(),
                    object: missing.clone(),
                });
                continue;
            }
        };
        if mor.contains_key(&m.id) {
            malformed.push(format!("duplicate morphism id {}", m.id));
            continue;
        }
        if let Some(o) = ident_ids.get(&m.id) {
            if o != &m.src || o != &m.tgt {
                report.violations.push(Violation::IdentityNotEndo { object: o.clone(), morphism: m.id.clone() });
                continue;
            }
        }
        let k = b.morphism(m.id.clone(), s, t);
        mor.insert(m.id.clone(), k);
        is_ident.push(false);
        src_of.push(s);
        tgt_of.push(t);
    }
    for o in &raw.objects {
        let name = ident_name(o);
        let x = ob[o.as_str()];
        let k = match mor.get(&name) {
            Some(&k) => k,
            None => {
                let k = b.morphism(name.clone(), x, x);
                mor.insert(name, k);
                is_ident.push(false);
                src_of.push(x);
                tgt_of.push(x);
                k
            }
        };
        is_ident[k] = true;
        b.set_identity(x, k);
    }
    let names: Vec<String> = b.morphisms.iter().map(|m| m.0.clone()).collect();
    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for e in &raw.composition {
        let entry = format!("{}∘{}={}", e.after, e.before, e.equals);
        let lookup = |id: &str, report: &mut ValidationReport| -> Option<usize> {
            let r = mor.get(id).copied();
            if r.is_none() {
                report.violations.push(Violation::DanglingMorphism { entry: entry.clone(), morphism: id.into() });
            }
            r
        };
        let (g, f, h) = (
            lookup(&e.after, &mut report),
            lookup(&e.before, &mut report),
            lookup(&e.equals, &mut report),
        );
        let (Some(g), Some(f), Some(h)) = (g, f, h) else { continue };
        if tgt_of[f] != src_of[g] {
            report.violations.push(Violation::NotComposable { after: e.after.clone(), before: e.before.clone() });
            continue;
        }
        if src_of[h] != src_of[f] || tgt_of[h] != tgt_of[g] {
            report.violations.push(Violation::CompositeTyping {
                after: e.after.clone(),
                before: e.before.clone(),
                equals: e.equals.clone(),
            });
            continue;
        }
        if table.insert((g, f), h).is_some() {
            malformed.push(format!("duplicate composite entry for ({}, {})", e.after, e.before));
        }
        let expected = if is_ident[f] {
            Some(g)
        } else if is_ident[g] {
            Some(f)
        } else {
            None
        };
        if let Some(exp) = expected {
            if exp != h {
                report.violations.push(Violation::UnitLaw {
                    after: e.after.clone(),
                    before: e.before.clone(),
                    got: e.equals.clone(),
                    expected: names[exp].clone(),
                });
            }
        }
    }
    let m = names.len();
    for f in 0..m {
        for g in 0..m {
            if tgt_of[f] == src_of[g] && !is_ident[f] && !is_ident[g] && !table.contains_key(&(g, f)) {
                malformed.push(format!("missing composite for ({}, {})", names[g], names[f]));
            }
        }
    }
    if !malformed.is_empty() {
        return Err(CatError::MalformedTable(malformed));
    }
    if !report.violations.is_empty() {
        return Err(CatError::Invalid(report));
    }
    let (cat, _) = b.build(|g, f| {
        if let Some(&h) = table.get(&(g, f)) {
            h
        } else if is_ident[f] {
            g
        } else {
            f
        }
    })?;
    let report = cat.check_axioms();
    if report.violations.is_empty() {
        Ok(cat)
    } else {
        Err(CatError::Invalid(report))
    }
}

impl FinCat {
    /// Serializes back to the raw table format: non-identity morphisms,
    /// explicit identities, and all composites of non-identity pairs.
    pub fn to_raw(&self) -> RawCategory {
        let morphisms = self
            .non_identity_morphisms()
            .map(|f| RawMorphism {
                id: self.morphism_id(f).into(),
                src: self.objects[self.src(f)].clone(),
                tgt: self.objects[self.tgt(f)].clone(),
            })
            .collect();
        let mut composition: Vec<RawComposite> = self
            .composable_pairs()
            .map(|(g, f)| RawComposite {
                after: self.morphism_id(g).into(),
                before: self.morphism_id(f).into(),
                equals: self.morphism_id(self.compose(g, f)).into(),
            })
            .collect();
        composition.sort_by(|a, b| (&a.after, &a.before).cmp(&(&b.after, &b.before)));
        let identities = self
            .objects
            .iter()
            .enumerate()
            .map(|(x, o)| (o.clone(), self.morphism_id(self.identity[x]).to_string()))
            .collect();
        RawCategory { objects: self.objects.clone(), morphisms, composition, identities: Some(identities), marked: None }
    }
}
