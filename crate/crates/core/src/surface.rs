//! Crosscap model of the nonorientable surface and its named curves.
//!
//! Crosscaps carry labels `1..=g`. In the odd layout all of them sit on a
//! circle in label order; in the even layout `g − 1` sit on the circle and one
//! sits at the center, fixed by the rotation. A two-sided curve is recorded by
//! the cyclic sequence of crosscaps it passes through (its trace); its mod-2
//! homology class is the sum of the one-sided classes `x_i` over the trace.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitVec;

/// Smallest genus the model accepts.
pub const MIN_GENUS: usize = 7;
/// Smallest genus for which the reflection is defined.
pub const MIN_REFLECTION_GENUS: usize = 13;
/// Label of the central crosscap in the even layout.
pub const EVEN_CENTER: usize = 3;

/// Shipped curve table for genus 13.
pub const CURVES_G13: &str = include_str!("../data/curves_g13.json");
/// Shipped curve table for genus 14.
pub const CURVES_G14: &str = include_str!("../data/curves_g14.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("genus {genus} is below the supported minimum {min}")]
    GenusTooSmall { genus: usize, min: usize },
    #[error("invalid central crosscap {center} for genus {genus}")]
    BadCenter { genus: usize, center: usize },
    #[error("malformed curve document: {0}")]
    Malformed(String),
    #[error("document genus {found} does not match model genus {expected}")]
    GenusMismatch { expected: usize, found: usize },
    #[error("curve {name}: {reason}")]
    BadTrace { name: String, reason: String },
    #[error("curve {0} has a non-isotropic class (odd trace length)")]
    NonIsotropic(String),
    #[error("duplicate curve name {0}")]
    DuplicateName(String),
    #[error("required curve {0} is missing")]
    MissingName(String),
    #[error("unknown curve {0}")]
    UnknownName(String),
    #[error("image of {name} under {map} has trace {trace:?}, which matches no named curve")]
    NamedCurveMiss {
        name: String,
        map: String,
        trace: Vec<usize>,
    },
    #[error("reflection map is not an involution")]
    NotInvolution,
}

/// Placement of the crosscaps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscapModel {
    genus: usize,
    /// Labels in rotation order; `T` moves `circle[p]` to `circle[p + 1]`.
    circle: Vec<usize>,
    center: Option<usize>,
}

impl CrosscapModel {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn is_odd(&self) -> bool {
        self.genus % 2 == 1
    }

    /// `r` with `g = 2r + 1` or `g = 2r + 2`.
    pub fn r(&self) -> usize {
        (self.genus - 1) / 2
    }

    pub fn circle(&self) -> &[usize] {
        &self.circle
    }

    pub fn center(&self) -> Option<usize> {
        self.center
    }

    /// Order of the rotation: `g` or `g − 1`.
    pub fn rotation_order(&self) -> usize {
        self.circle.len()
    }

    /// Label at circle position `p`, taken modulo the circle size.
    pub fn at(&self, p: i64) -> usize {
        let n = self.circle.len() as i64;
        self.circle[p.rem_euclid(n) as usize]
    }

    /// Image of a label under `T^k`.
    pub fn rotate_label(&self, label: usize, k: i64) -> usize {
        match self.circle.iter().position(|&l| l == label) {
            Some(p) => self.at(p as i64 + k),
            None => label,
        }
    }

    /// `T^k` as a 1-based label map (index 0 unused).
    pub fn rotation_map(&self, k: i64) -> Vec<usize> {
        let mut map: Vec<usize> = (0..=self.genus).collect();
        for (p, &l) in self.circle.iter().enumerate() {
            map[l] = self.at(p as i64 + k);
        }
        map
    }

    /// The reflection as a 1-based label map (index 0 unused).
    pub fn reflection_map(&self) -> Result<Vec<usize>, SurfaceError> {
        let mut map: Vec<usize> = (0..=self.genus).collect();
        for (i, j) in reflection_homology_images(self)? {
            map[i] = j;
        }
        Ok(map)
    }
}

/// Model for genus `g ≥ 7`, using [`EVEN_CENTER`] in the even case.
pub fn build_model(genus: usize) -> Result<CrosscapModel, SurfaceError> {
    if genus % 2 == 1 {
        build_model_with_center(genus, 0)
    } else {
        build_model_with_center(genus, EVEN_CENTER)
    }
}

/// Model with an explicit central crosscap for the even layout. The odd
/// layout ignores `center`. The center must lie in `2..=5`, the labels the
/// reflection exchanges near crosscap 1.
pub fn build_model_with_center(genus: usize, center: usize) -> Result<CrosscapModel, SurfaceError> {
    if genus < MIN_GENUS {
        return Err(SurfaceError::GenusTooSmall {
            genus,
            min: MIN_GENUS,
        });
    }
    if genus % 2 == 1 {
        return Ok(CrosscapModel {
            genus,
            circle: (1..=genus).collect(),
            center: None,
        });
    }
    if !(2..=5).contains(&center) {
        return Err(SurfaceError::BadCenter { genus, center });
    }
    Ok(CrosscapModel {
        genus,
        circle: (1..=genus).filter(|&l| l != center).collect(),
        center: Some(center),
    })
}

/// The reflection's action on the one-sided classes, as `(i, σ(i))` pairs for
/// every label. Odd genus: `(2 3)(g−2 g)`. Even genus: `(2 3)(4 5)(g−2 g)`.
pub fn reflection_homology_images(
    model: &CrosscapModel,
) -> Result<Vec<(usize, usize)>, SurfaceError> {
    let g = model.genus;
    if g < MIN_REFLECTION_GENUS {
        return Err(SurfaceError::GenusTooSmall {
            genus: g,
            min: MIN_REFLECTION_GENUS,
        });
    }
    let swaps: &[(usize, usize)] = if model.is_odd() {
        &[(2, 3), (g - 2, g)]
    } else {
        &[(2, 3), (4, 5), (g - 2, g)]
    };
    let mut map: Vec<usize> = (0..=g).collect();
    for &(i, j) in swaps {
        map[i] = j;
        map[j] = i;
    }
    if (1..=g).any(|i| map[map[i]] != i) {
        return Err(SurfaceError::NotInvolution);
    }
    Ok((1..=g).map(|i| (i, map[i])).collect())
}

/// One entry of a curve document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub name: String,
    pub trace: Vec<usize>,
}

/// A curve document: `{"genus": g, "curves": [{"name": .., "trace": [..]}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDoc {
    pub genus: usize,
    pub curves: Vec<CurveSpec>,
}

impl CurveDoc {
    pub fn parse(text: &str) -> Result<Self, SurfaceError> {
        serde_json::from_str(text).map_err(|e| SurfaceError::Malformed(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"genus\": {},\n  \"curves\": [\n", self.genus));
        for (i, c) in self.curves.iter().enumerate() {
            let trace: Vec<String> = c.trace.iter().map(|t| t.to_string()).collect();
            out.push_str(&format!(
                "    {{\"name\": \"{}\", \"trace\": [{}]}}{}\n",
                c.name,
                trace.join(", "),
                if i + 1 == self.curves.len() { "" } else { "," }
            ));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// A validated named two-sided curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub trace: Vec<usize>,
}

/// Validated curve table; immutable after loading.
#[derive(Debug, Clone)]
pub struct CurveTable {
    model: CrosscapModel,
    curves: Vec<Curve>,
    by_name: HashMap<String, usize>,
    /// Normalized trace to the first curve (document order) carrying it.
    by_trace: HashMap<Vec<usize>, usize>,
}

/// Names every table for the model's genus must contain.
pub fn required_names(model: &CrosscapModel) -> Vec<String> {
    let r = model.r();
    let mut names = vec!["a1".to_string(), "a2".to_string(), "a3".to_string()];
    names.extend((1..=r).map(|i| format!("b{i}")));
    names.extend((1..r).map(|i| format!("c{i}")));
    if !model.is_odd() {
        names.push(format!("d{r}"));
    }
    names.push("e".into());
    names.push("f".into());
    names.extend((1..=model.rotation_order()).map(|i| format!("gamma{i}")));
    names
}

/// Lexicographically least sequence among all cyclic rotations and reversals.
pub fn normalize_trace(trace: &[usize]) -> Vec<usize> {
    let n = trace.len();
    let mut best: Option<Vec<usize>> = None;
    let reversed: Vec<usize> = trace.iter().rev().copied().collect();
    for seq in [trace, reversed.as_slice()] {
        for s in 0..n {
            let cand: Vec<usize> = (0..n).map(|i| seq[(s + i) % n]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Validates a document against the model.
pub fn load_curves(model: &CrosscapModel, doc: &CurveDoc) -> Result<CurveTable, SurfaceError> {
    if doc.genus != model.genus {
        return Err(SurfaceError::GenusMismatch {
            expected: model.genus,
            found: doc.genus,
        });
    }
    let mut curves = Vec::with_capacity(doc.curves.len());
    let mut by_name = HashMap::new();
    let mut by_trace = HashMap::new();
    for spec in &doc.curves {
        validate_trace(model, spec)?;
        if by_name.contains_key(&spec.name) {
            return Err(SurfaceError::DuplicateName(spec.name.clone()));
        }
        let idx = curves.len();
        by_name.insert(spec.name.clone(), idx);
        by_trace.entry(normalize_trace(&spec.trace)).or_insert(idx);
        curves.push(Curve {
            name: spec.name.clone(),
            trace: spec.trace.clone(),
        });
    }
    for name in required_names(model) {
        if !by_name.contains_key(&name) {
            return Err(SurfaceError::MissingName(name));
        }
    }
    Ok(CurveTable {
        model: model.clone(),
        curves,
        by_name,
        by_trace,
    })
}

fn validate_trace(model: &CrosscapModel, spec: &CurveSpec) -> Result<(), SurfaceError> {
    let bad = |reason: String| SurfaceError::BadTrace {
        name: spec.name.clone(),
        reason,
    };
    if spec.name.is_empty() {
        return Err(SurfaceError::Malformed("empty curve name".into()));
    }
    if spec.trace.is_empty() {
        return Err(bad("empty trace".into()));
    }
    let mut seen = BTreeSet::new();
    for &i in &spec.trace {
        if i == 0 || i > model.genus {
            return Err(bad(format!("index {i} outside 1..={}", model.genus)));
        }
        if !seen.insert(i) {
            return Err(bad(format!("index {i} repeated")));
        }
    }
    if spec.trace.len() % 2 == 1 {
        return Err(SurfaceError::NonIsotropic(spec.name.clone()));
    }
    Ok(())
}

/// Parses and validates a document in one step.
pub fn load_curves_str(model: &CrosscapModel, text: &str) -> Result<CurveTable, SurfaceError> {
    load_curves(model, &CurveDoc::parse(text)?)
}

/// The shipped table for genus 13 or 14.
pub fn default_table(genus: usize) -> Result<CurveTable, SurfaceError> {
    let model = build_model(genus)?;
    let text = default_document(genus).ok_or_else(|| {
        SurfaceError::Malformed(format!("no shipped curve table for genus {genus}"))
    })?;
    load_curves_str(&model, text)
}

/// Raw text of the shipped table, if one exists for `genus`.
pub fn default_document(genus: usize) -> Option<&'static str> {
    match genus {
        13 => Some(CURVES_G13),
        14 => Some(CURVES_G14),
        _ => None,
    }
}

impl CurveTable {
    pub fn model(&self) -> &CrosscapModel {
        &self.model
    }

    pub fn genus(&self) -> usize {
        self.model.genus
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn get(&self, name: &str) -> Result<&Curve, SurfaceError> {
        self.by_name
            .get(name)
            .map(|&i| &self.curves[i])
            .ok_or_else(|| SurfaceError::UnknownName(name.to_string()))
    }

    /// Normalized trace of a named curve.
    pub fn normalized(&self, name: &str) -> Result<Vec<usize>, SurfaceError> {
        Ok(normalize_trace(&self.get(name)?.trace))
    }

    /// First name in document order whose trace normalizes to `trace`.
    pub fn lookup_trace(&self, trace: &[usize]) -> Option<&str> {
        self.by_trace
            .get(&normalize_trace(trace))
            .map(|&i| self.curves[i].name.as_str())
    }

    /// Applies a 1-based label map to a named curve and looks up the result.
    pub fn map_curve(&self, name: &str, map: &[usize], map_name: &str) -> Result<String, SurfaceError> {
        let image = self.image_trace(name, map)?;
        self.lookup_trace(&image)
            .map(str::to_string)
            .ok_or_else(|| SurfaceError::NamedCurveMiss {
                name: name.to_string(),
                map: map_name.to_string(),
                trace: normalize_trace(&image),
            })
    }

    /// Trace of a named curve after applying a 1-based label map.
    pub fn image_trace(&self, name: &str, map: &[usize]) -> Result<Vec<usize>, SurfaceError> {
        Ok(self.get(name)?.trace.iter().map(|&i| map[i]).collect())
    }
}

/// Name of the curve `T^k(name)`.
pub fn rotate_curve(table: &CurveTable, name: &str, k: i64) -> Result<String, SurfaceError> {
    let map = table.model.rotation_map(k);
    table.map_curve(name, &map, &format!("T^{k}"))
}

/// Name of the curve `σ(name)`.
pub fn reflect_curve(table: &CurveTable, name: &str) -> Result<String, SurfaceError> {
    let map = table.model.reflection_map()?;
    table.map_curve(name, &map, "S")
}

/// Mod-2 homology class of a named curve: bit `i − 1` set for each label `i`
/// on the trace.
pub fn curve_class(table: &CurveTable, name: &str) -> Result<BitVec, SurfaceError> {
    trace_class(table.genus(), &table.get(name)?.trace)
}

/// Class of an arbitrary trace in dimension `genus`.
pub fn trace_class(genus: usize, trace: &[usize]) -> Result<BitVec, SurfaceError> {
    let idx: Vec<usize> = trace.iter().map(|&i| i - 1).collect();
    BitVec::from_indices(genus, &idx).map_err(|e| SurfaceError::Malformed(e.to_string()))
}

/// Generates the curve document for any genus `≥ 13` from the index pattern
/// of the shipped tables.
///
/// Along the circle, the adjacent pairs starting at positions `0, 1, 2, ...`
/// are `a1, b1, c1, b2, c2, ...`; `γ_i` covers the four crosscaps starting at
/// position `i − 1`, so `a2 = γ_1`; `a3` covers the first six; `f = σ(a1)`;
/// `e` has class `a1 + f`. Odd genus closes the orbit with `c_r`; even genus
/// adds `d_r = σ(b_r)`, listed before the `c_i` so that lookups of its trace
/// return `d_r`.
pub fn template_document(model: &CrosscapModel) -> Result<CurveDoc, SurfaceError> {
    let g = model.genus;
    if g < MIN_REFLECTION_GENUS {
        return Err(SurfaceError::GenusTooSmall {
            genus: g,
            min: MIN_REFLECTION_GENUS,
        });
    }
    let r = model.r() as i64;
    let sigma = model.reflection_map()?;
    let run = |start: i64, len: i64| -> Vec<usize> { (0..len).map(|i| model.at(start + i)).collect() };
    let mut curves = Vec::new();
    let mut push = |name: String, trace: Vec<usize>| curves.push(CurveSpec { name, trace });

    let a1 = run(0, 2);
    push("a1".into(), a1.clone());
    push("a2".into(), run(0, 4));
    push("a3".into(), run(0, 6));
    for i in 1..=r {
        push(format!("b{i}"), run(2 * i - 1, 2));
    }
    if !model.is_odd() {
        let br = run(2 * r - 1, 2);
        push(format!("d{r}"), br.iter().map(|&i| sigma[i]).collect());
    }
    for i in 1..r {
        push(format!("c{i}"), run(2 * i, 2));
    }
    if model.is_odd() {
        push(format!("c{r}"), run(2 * r, 2));
    }
    let f: Vec<usize> = a1.iter().map(|&i| sigma[i]).collect();
    let e: Vec<usize> = {
        let a: BTreeSet<usize> = a1.iter().copied().collect();
        let b: BTreeSet<usize> = f.iter().copied().collect();
        a.symmetric_difference(&b).copied().collect()
    };
    push("e".into(), e);
    push("f".into(), f);
    for i in 1..=model.rotation_order() as i64 {
        push(format!("gamma{i}"), run(i - 1, 4));
    }
    Ok(CurveDoc { genus: g, curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(g: usize) -> CurveTable {
        default_table(g).unwrap()
    }

    #[test]
    fn build_model_examples() {
        let m = build_model(13).unwrap();
        assert!(m.is_odd());
        assert_eq!(m.circle().len(), 13);
        assert_eq!(m.center(), None);
        let m = build_model(14).unwrap();
        assert_eq!(m.circle().len(), 13);
        assert_eq!(m.center(), Some(EVEN_CENTER));
        assert_eq!(
            build_model(6),
            Err(SurfaceError::GenusTooSmall { genus: 6, min: 7 })
        );
    }

    #[test]
    fn shipped_tables_match_template() {
        for g in [13, 14] {
            let model = build_model(g).unwrap();
            let doc = CurveDoc::parse(default_document(g).unwrap()).unwrap();
            assert_eq!(doc, template_document(&model).unwrap(), "genus {g}");
        }
    }

    #[test]
    fn load_examples() {
        let model = build_model(13).unwrap();
        let t = table(13);
        assert_eq!(t.get("b1").unwrap().trace, vec![2, 3]);
        let mut doc = template_document(&model).unwrap();
        doc.curves[0].trace = vec![1, 1];
        assert!(matches!(load_curves(&model, &doc), Err(SurfaceError::BadTrace { .. })));
        let mut doc = template_document(&model).unwrap();
        doc.curves.retain(|c| c.name != "e");
        assert_eq!(
            load_curves(&model, &doc).unwrap_err(),
            SurfaceError::MissingName("e".into())
        );
        let mut doc = template_document(&model).unwrap();
        doc.curves[0].trace = vec![1, 2, 3];
        assert_eq!(
            load_curves(&model, &doc).unwrap_err(),
            SurfaceError::NonIsotropic("a1".into())
        );
        let mut doc = template_document(&model).unwrap();
        doc.curves.push(doc.curves[0].clone());
        assert_eq!(
            load_curves(&model, &doc).unwrap_err(),
            SurfaceError::DuplicateName("a1".into())
        );
        assert!(matches!(
            load_curves_str(&model, "{\"genus\": 13}"),
            Err(SurfaceError::Malformed(_))
        ));
    }

    #[test]
    fn rotate_examples() {
        let t = table(13);
        assert_eq!(rotate_curve(&t, "b1", 1).unwrap(), "c1");
        assert_eq!(rotate_curve(&t, "a1", 0).unwrap(), "a1");
        assert_eq!(rotate_curve(&t, "gamma10", -4).unwrap(), "gamma6");
        let t = table(14);
        assert_eq!(rotate_curve(&t, "b1", 1).unwrap(), "c1");
        assert_eq!(rotate_curve(&t, "c5", -12).unwrap(), "b6");
        assert!(matches!(
            rotate_curve(&t, "b6", 1),
            Err(SurfaceError::NamedCurveMiss { .. })
        ));
    }

    #[test]
    fn reflect_examples() {
        for g in [13, 14] {
            let t = table(g);
            assert_eq!(reflect_curve(&t, "a1").unwrap(), "f");
            let gname = format!("gamma{}", g - 3);
            assert_eq!(reflect_curve(&t, &gname).unwrap(), gname);
        }
        assert_eq!(reflect_curve(&table(13), "b6").unwrap(), "c5");
        assert_eq!(reflect_curve(&table(14), "b6").unwrap(), "d6");
    }

    #[test]
    fn reflection_images() {
        let m = build_model(13).unwrap();
        let imgs = reflection_homology_images(&m).unwrap();
        assert!(imgs.contains(&(2, 3)));
        assert!(imgs.contains(&(4, 4)));
        assert!(imgs.contains(&(13, 11)));
        for i in 4..=10 {
            assert!(imgs.contains(&(i, i)));
        }
        let m = build_model(14).unwrap();
        let imgs = reflection_homology_images(&m).unwrap();
        assert!(imgs.contains(&(4, 5)));
        assert!(imgs.contains(&(14, 12)));
        assert!(reflection_homology_images(&build_model(11).unwrap()).is_err());
    }

    #[test]
    fn class_examples() {
        let t = table(13);
        let b1 = curve_class(&t, "b1").unwrap();
        assert_eq!(b1.support(), vec![1, 2]);
        for c in t.curves() {
            let v = curve_class(&t, &c.name).unwrap();
            assert!(!v.dot(&v).unwrap(), "{}", c.name);
        }
        assert_eq!(curve_class(&t, "gamma1").unwrap(), curve_class(&t, "a2").unwrap());
        assert!(curve_class(&t, "zz").is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_trace(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(normalize_trace(&[2, 1, 3]), vec![1, 2, 3]);
        assert_eq!(normalize_trace(&[14, 12]), vec![12, 14]);
        assert_eq!(normalize_trace(&[5, 9, 7, 6]), vec![5, 6, 7, 9]);
    }

    #[test]
    fn named_curve_miss() {
        let t = table(13);
        assert!(matches!(
            rotate_curve(&t, "f", 1),
            Err(SurfaceError::NamedCurveMiss { .. })
        ));
        assert!(matches!(
            reflect_curve(&t, "c1"),
            Err(SurfaceError::NamedCurveMiss { .. })
        ));
    }
}
