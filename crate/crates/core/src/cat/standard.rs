//! Small named categories used as examples, probes and generator seeds.

use super::{validate_category, FinCat, RawCategory, RawComposite, RawMorphism};

/// Builds a category from literal tables. Panics on invalid input, so it is
/// only meant for hard-coded data.
pub fn from_table(objects: &[&str], morphisms: &[(&str, &str, &str)], composites: &[(&str, &str, &str)]) -> FinCat {
    let raw = RawCategory {
        objects: objects.iter().map(|s| s.to_string()).collect(),
        morphisms: morphisms.iter().map(|(i, s, t)| RawMorphism::new(i, s, t)).collect(),
        composition: composites.iter().map(|(a, b, e)| RawComposite::new(a, b, e)).collect(),
        identities: None,
        marked: None,
    };
    validate_category(&raw).expect("hard-coded category table is valid")
}

pub fn terminal() -> FinCat {
    from_table(&["*"], &[], &[])
}

pub fn empty() -> FinCat {
    from_table(&[], &[], &[])
}

pub fn discrete(n: usize) -> FinCat {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    from_table(&refs, &[], &[])
}

/// The walking arrow [1] = {0 → 1} with non-identity morphism `u`.
pub fn arrow() -> FinCat {
    from_table(&["0", "1"], &[("u", "0", "1")], &[])
}

/// [2] = {0 → 1 → 2} with `u`, `v` and `vu` = v∘u.
pub fn chain2() -> FinCat {
    from_table(
        &["0", "1", "2"],
        &[("u", "0", "1"), ("v", "1", "2"), ("vu", "0", "2")],
        &[("v", "u", "vu")],
    )
}

/// Two objects with mutually inverse `u: a → b` and `v: b → a`.
pub fn walking_iso() -> FinCat {
    from_table(
        &["a", "b"],
        &[("u", "a", "b"), ("v", "b", "a")],
        &[("v", "u", "id_a"), ("u", "v", "id_b")],
    )
}

/// Two parallel arrows `f, g: a → b`.
pub fn parallel_pair() -> FinCat {
    from_table(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")], &[])
}

/// `s: 0 → 1`, `r: 1 → 0` with r∘s = id and the idempotent e = s∘r.
pub fn split_idempotent() -> FinCat {
    from_table(
        &["0", "1"],
        &[("s", "0", "1"), ("r", "1", "0"), ("e", "1", "1")],
        &[
            ("r", "s", "id_0"),
            ("s", "r", "e"),
            ("e", "e", "e"),
            ("e", "s", "s"),
            ("r", "e", "r"),
        ],
    )
}

/// One object with endomorphisms `a`, `b` and xy = x for x, y ∈ {a, b}.
pub fn left_zero_monoid() -> FinCat {
    from_table(
        &["*"],
        &[("a", "*", "*"), ("b", "*", "*")],
        &[("a", "a", "a"), ("a", "b", "a"), ("b", "a", "b"), ("b", "b", "b")],
    )
}

/// The cospan shape x → z ← y.
pub fn cospan() -> FinCat {
    from_table(&["x", "y", "z"], &[("p", "x", "z"), ("q", "y", "z")], &[])
}

/// The commutative square 0 → 1 → 3, 0 → 2 → 3 with both paths equal.
pub fn commutative_square() -> FinCat {
    from_table(
        &["0", "1", "2", "3"],
        &[("a", "0", "1"), ("b", "1", "3"), ("c", "0", "2"), ("d", "2", "3"), ("diag", "0", "3")],
        &[("b", "a", "diag"), ("d", "c", "diag")],
    )
}

/// Disjoint union, with object and morphism ids prefixed by `l.`/`r.`.
pub fn disjoint_union(a: &FinCat, b: &FinCat) -> FinCat {
    let mut raw = RawCategory::default();
    let mut ids = std::collections::BTreeMap::new();
    for (p, c) in [("l.", a), ("r.", b)] {
        let pre = |s: &str| format!("{p}{s}");
        for (x, o) in c.objects().iter().enumerate() {
            raw.objects.push(pre(o));
            ids.insert(pre(o), pre(c.morphism_id(c.identity(x))));
        }
        for f in c.non_identity_morphisms() {
            raw.morphisms.push(RawMorphism {
                id: pre(c.morphism_id(f)),
                src: pre(c.object_id(c.src(f))),
                tgt: pre(c.object_id(c.tgt(f))),
            });
        }
        for (g, f) in c.composable_pairs() {
            raw.composition.push(RawComposite {
                after: pre(c.morphism_id(g)),
                before: pre(c.morphism_id(f)),
                equals: pre(c.morphism_id(c.compose(g, f))),
            });
        }
    }
    raw.identities = Some(ids);
    validate_category(&raw).expect("disjoint union of valid categories is valid")
}
