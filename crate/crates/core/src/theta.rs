//! The index site Θⁿ.
//!
//! Θⁿ is the quotient of Δⁿ in which every object `(M, 0, M')` is identified
//! with `M`, and in which a morphism only remembers its components up to and
//! including the first constant one. Objects are stored without trailing
//! zeros; padding to Δⁿ only happens transiently while normalizing or
//! composing.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An order-preserving map `{0..a} -> {0..b}` given by its image list.
pub type Monotone = Vec<u32>;

fn is_constant(map: &[u32]) -> bool {
    map.windows(2).all(|w| w[0] == w[1])
}

fn is_monotone(map: &[u32]) -> bool {
    map.windows(2).all(|w| w[0] <= w[1])
}

/// All order-preserving maps `{0..a} -> {0..b}`, in lexicographic order.
pub fn monotone_maps(a: u32, b: u32) -> Vec<Monotone> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a as usize + 1);
    fn rec(a: u32, b: u32, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<Monotone>) {
        if cur.len() == a as usize + 1 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=b {
            cur.push(v);
            rec(a, b, v, cur, out);
            cur.pop();
        }
    }
    rec(a, b, 0, &mut cur, &mut out);
    out
}

/// An object `M = (m₁, …, m_k)` of Θⁿ with every `mᵢ ≥ 1` and `k ≤ n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThetaObject {
    n: usize,
    entries: Vec<u32>,
}

impl ThetaObject {
    /// Builds the class representative of `entries`: everything from the
    /// first zero on is dropped.
    pub fn new(n: usize, entries: &[i64]) -> Result<Self> {
        let mut kept = Vec::new();
        for &e in entries {
            if e < 0 {
                return Err(Error::InvalidObject(format!("negative entry {e} in {entries:?}")));
            }
            if e == 0 {
                break;
            }
            kept.push(u32::try_from(e).map_err(|_| Error::InvalidObject(format!("entry {e} too large")))?);
        }
        if kept.len() > n {
            return Err(Error::InvalidObject(format!(
                "length {} exceeds ambient dimension {n}",
                kept.len()
            )));
        }
        Ok(ThetaObject { n, entries: kept })
    }

    pub(crate) fn from_entries(n: usize, entries: Vec<u32>) -> Self {
        debug_assert!(entries.len() <= n && entries.iter().all(|&e| e > 0));
        ThetaObject { n, entries }
    }

    /// The length-zero object `0`.
    pub fn zero(n: usize) -> Self {
        ThetaObject { n, entries: Vec::new() }
    }

    /// `1ⁱ = (1, …, 1)`.
    pub fn ones(n: usize, i: usize) -> Self {
        assert!(i <= n);
        ThetaObject { n, entries: vec![1; i] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at a position of the zero-padded Δⁿ tuple.
    pub fn padded(&self, j: usize) -> u32 {
        self.entries.get(j).copied().unwrap_or(0)
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn entry_sum(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// First entry, or 0 for the length-zero object.
    pub fn head(&self) -> u32 {
        self.padded(0)
    }

    /// The remaining entries as an object of Θⁿ⁻¹.
    pub fn tail(&self) -> ThetaObject {
        assert!(self.n >= 1);
        ThetaObject {
            n: self.n - 1,
            entries: self.entries.iter().skip(1).copied().collect(),
        }
    }

    /// `(p, tail)` as an object of Θⁿ⁺¹. For `p = 0` the tail is forgotten.
    pub fn cons(p: u32, tail: &ThetaObject) -> ThetaObject {
        if p == 0 {
            return ThetaObject::zero(tail.n + 1);
        }
        let mut entries = Vec::with_capacity(tail.len() + 1);
        entries.push(p);
        entries.extend_from_slice(&tail.entries);
        ThetaObject { n: tail.n + 1, entries }
    }

    /// The same entries viewed in a different ambient dimension.
    pub fn with_n(&self, n: usize) -> Result<ThetaObject> {
        if self.len() > n {
            return Err(Error::InvalidObject(format!("{self} does not fit in dimension {n}")));
        }
        Ok(ThetaObject { n, entries: self.entries.clone() })
    }

    /// Ordering used for dumps: length, then entries lexicographically.
    pub fn dump_cmp(&self, other: &Self) -> Ordering {
        (self.len(), &self.entries).cmp(&(other.len(), &other.entries))
    }

    /// Ordering used by the isomorphism search: length, then entry sum.
    pub fn search_cmp(&self, other: &Self) -> Ordering {
        (self.len(), self.entry_sum(), &self.entries).cmp(&(other.len(), other.entry_sum(), &other.entries))
    }
}

impl fmt::Display for ThetaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ThetaObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

/// A morphism of Θⁿ in normal form.
///
/// `components[j]` is the image list of the map `{0..m_j} -> {0..m'_j}` on
/// the padded objects. Components are kept up to and including the first
/// constant one; a constant landing in a padded target position is forced
/// (its value is 0) and is not stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThetaMorphism {
    source: ThetaObject,
    target: ThetaObject,
    components: Vec<Monotone>,
}

impl ThetaMorphism {
    pub fn source(&self) -> &ThetaObject {
        &self.source
    }

    pub fn target(&self) -> &ThetaObject {
        &self.target
    }

    pub fn components(&self) -> &[Monotone] {
        &self.components
    }

    pub fn n(&self) -> usize {
        self.source.n
    }

    pub fn identity(m: &ThetaObject) -> Self {
        let components = m.entries.iter().map(|&e| (0..=e).collect()).collect();
        ThetaMorphism { source: m.clone(), target: m.clone(), components }
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && *self == ThetaMorphism::identity(&self.source)
    }

    /// The first component as a map `{0..source.head()} -> {0..target.head()}`,
    /// or `None` when it is forced (target of length zero).
    pub fn first(&self) -> Option<&Monotone> {
        self.components.first()
    }

    /// True when the first component is constant (the morphism factors
    /// through the object `0`).
    pub fn factors_through_zero(&self) -> bool {
        match self.components.first() {
            None => true,
            Some(c) => is_constant(c),
        }
    }

    /// The morphism of Θⁿ⁻¹ formed by the components after the first.
    /// Only meaningful when the first component is not constant.
    pub fn rest(&self) -> ThetaMorphism {
        ThetaMorphism {
            source: self.source.tail(),
            target: self.target.tail(),
            components: self.components.iter().skip(1).cloned().collect(),
        }
    }

    /// `(first, rest)` as a morphism of Θⁿ⁺¹ whose first component is the
    /// non-constant map `first: {0..a} -> {0..target_head}`.
    pub fn prepend(first: Monotone, target_head: u32, rest: &ThetaMorphism) -> ThetaMorphism {
        debug_assert!(!is_constant(&first));
        let source = ThetaObject::cons(first.len() as u32 - 1, &rest.source);
        let target = ThetaObject::cons(target_head, &rest.target);
        let mut components = Vec::with_capacity(rest.components.len() + 1);
        components.push(first);
        components.extend(rest.components.iter().cloned());
        ThetaMorphism { source, target, components }
    }

    /// The vertex map `0 -> M` picking vertex `v` in the first direction.
    pub fn vertex(target: &ThetaObject, v: u32) -> ThetaMorphism {
        let source = ThetaObject::zero(target.n);
        let components = if target.is_empty() { Vec::new() } else { vec![vec![v]] };
        ThetaMorphism { source, target: target.clone(), components }
    }

    /// The unique degeneracy `M -> 0`.
    pub fn to_zero(source: &ThetaObject) -> ThetaMorphism {
        ThetaMorphism {
            source: source.clone(),
            target: ThetaObject::zero(source.n),
            components: Vec::new(),
        }
    }

    /// A lift to Δⁿ between the zero-padded objects; discarded components
    /// are filled with constant-0 maps.
    pub fn lift(&self) -> Vec<Monotone> {
        (0..self.n())
            .map(|j| match self.components.get(j) {
                Some(c) => c.clone(),
                None => vec![0; self.source.padded(j) as usize + 1],
            })
            .collect()
    }
}

impl fmt::Display for ThetaMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[", self.source, self.target)?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for (k, v) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, "]")
    }
}

/// Wire form of a morphism.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MorphismJson {
    pub source: Vec<u32>,
    pub target: Vec<u32>,
    pub components: Vec<Vec<u32>>,
}

impl ThetaMorphism {
    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            source: self.source.entries.clone(),
            target: self.target.entries.clone(),
            components: self.components.clone(),
        }
    }

    /// Parses a stored normal form, rejecting anything that is not one.
    pub fn from_json(n: usize, j: &MorphismJson) -> Result<ThetaMorphism> {
        let obj = |e: &[u32]| -> Result<ThetaObject> {
            if e.contains(&0) {
                return Err(Error::InvalidObject(format!("{e:?} has a zero entry")));
            }
            ThetaObject::new(n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>())
        };
        let source = obj(&j.source)?;
        let target = obj(&j.target)?;
        let f = normalize_morphism(&source, &target, &{
            let mut lift = j.components.clone();
            for k in lift.len()..n {
                lift.push(vec![0; source.padded(k) as usize + 1]);
            }
            lift
        })?;
        if f.components != j.components {
            return Err(Error::InvalidMorphism(format!("{j:?} is not in normal form")));
        }
        Ok(f)
    }
}

/// Reduces a Δⁿ morphism between the zero-padded objects to its normal form.
pub fn normalize_morphism(source: &ThetaObject, target: &ThetaObject, lift: &[Monotone]) -> Result<ThetaMorphism> {
    let n = source.n;
    if target.n != n {
        return Err(Error::InvalidMorphism(format!(
            "ambient dimensions differ: {} vs {}",
            source.n, target.n
        )));
    }
    if lift.len() != n {
        return Err(Error::InvalidMorphism(format!("expected {n} components, got {}", lift.len())));
    }
    for (j, c) in lift.iter().enumerate() {
        let (a, b) = (source.padded(j), target.padded(j));
        if c.len() != a as usize + 1 {
            return Err(Error::InvalidMorphism(format!(
                "component {} has {} values, source entry is {a}",
                j + 1,
                c.len()
            )));
        }
        if c.iter().any(|&v| v > b) {
            return Err(Error::InvalidMorphism(format!(
                "component {} leaves {{0..{b}}}: {c:?}",
                j + 1
            )));
        }
        if !is_monotone(c) {
            return Err(Error::InvalidMorphism(format!("component {} is not monotone: {c:?}", j + 1)));
        }
    }
    Ok(normalize_unchecked(source, target, lift))
}

fn normalize_unchecked(source: &ThetaObject, target: &ThetaObject, lift: &[Monotone]) -> ThetaMorphism {
    let t = target.len();
    let mut components = Vec::new();
    for (j, c) in lift.iter().enumerate() {
        if is_constant(c) {
            if j < t {
                components.push(c.clone());
            }
            break;
        }
        components.push(c.clone());
    }
    ThetaMorphism { source: source.clone(), target: target.clone(), components }
}

/// `f ∘ g`, for `g: M -> M'` and `f: M' -> M''`.
pub fn compose(f: &ThetaMorphism, g: &ThetaMorphism) -> Result<ThetaMorphism> {
    if g.target != f.source {
        return Err(Error::Composition(format!(
            "target {} of the first map is not the source {} of the second",
            g.target, f.source
        )));
    }
    Ok(compose_unchecked(f, g))
}

pub(crate) fn compose_unchecked(f: &ThetaMorphism, g: &ThetaMorphism) -> ThetaMorphism {
    let (fl, gl) = (f.lift(), g.lift());
    let lift: Vec<Monotone> = fl
        .iter()
        .zip(gl.iter())
        .map(|(fc, gc)| gc.iter().map(|&v| fc[v as usize]).collect())
        .collect();
    normalize_unchecked(&g.source, &f.target, &lift)
}

/// Every morphism `source -> target` in normal form, in a fixed order.
pub fn enumerate_morphisms(source: &ThetaObject, target: &ThetaObject) -> Vec<ThetaMorphism> {
    assert_eq!(source.n, target.n, "objects live in different ambient dimensions");
    let n = source.n;
    let (s, t) = (source.len(), target.len());
    let mut out = Vec::new();
    let mut prefix: Vec<Monotone> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        j: usize,
        n: usize,
        s: usize,
        t: usize,
        source: &ThetaObject,
        target: &ThetaObject,
        prefix: &mut Vec<Monotone>,
        out: &mut Vec<ThetaMorphism>,
    ) {
        let finish = |comps: Vec<Monotone>, out: &mut Vec<ThetaMorphism>| {
            out.push(ThetaMorphism { source: source.clone(), target: target.clone(), components: comps });
        };
        if j == n || j >= t {
            // Either all n directions used, or the target is padded here and
            // the remaining constant is forced.
            finish(prefix.clone(), out);
            return;
        }
        let (a, b) = (source.padded(j), target.padded(j));
        for c in 0..=b {
            let mut comps = prefix.clone();
            comps.push(vec![c; a as usize + 1]);
            finish(comps, out);
        }
        if j < s {
            for m in monotone_maps(a, b) {
                if is_constant(&m) {
                    continue;
                }
                prefix.push(m);
                rec(j + 1, n, s, t, source, target, prefix, out);
                prefix.pop();
            }
        }
    }
    rec(0, n, s, t, source, target, &mut prefix, &mut out);
    out
}

/// The `p` Segal faces `(1, tail) -> (p, tail)` sending `0 ↦ i, 1 ↦ i+1`.
pub fn segal_face_family(p: u32, tail: &ThetaObject) -> Result<Vec<ThetaMorphism>> {
    segal_faces_in_direction(&ThetaObject::zero(0), p, tail)
}

/// Segal faces in direction `|prefix| + 1`: maps
/// `(prefix, 1, tail) -> (prefix, p, tail)` that are identities except in
/// that direction.
pub fn segal_faces_in_direction(prefix: &ThetaObject, p: u32, tail: &ThetaObject) -> Result<Vec<ThetaMorphism>> {
    if p < 1 {
        return Err(Error::InvalidArgument(format!("Segal faces need p >= 1, got {p}")));
    }
    let n = prefix.len() + 1 + tail.n;
    let build = |q: u32| {
        let mut e = prefix.entries.clone();
        e.push(q);
        e.extend_from_slice(&tail.entries);
        ThetaObject::from_entries(n, e)
    };
    let (src, tgt) = (build(1), build(p));
    Ok((0..p)
        .map(|i| {
            let mut lift: Vec<Monotone> = prefix.entries.iter().map(|&e| (0..=e).collect()).collect();
            lift.push(vec![i, i + 1]);
            lift.extend(tail.entries.iter().map(|&e| (0..=e).collect::<Vec<u32>>()));
            while lift.len() < n {
                lift.push(vec![0]);
            }
            normalize_unchecked(&src, &tgt, &lift)
        })
        .collect())
}

/// The vertex maps `prefix -> (prefix, p, tail)` in direction `|prefix|+1`.
pub(crate) fn vertex_in_direction(prefix: &ThetaObject, p: u32, tail: &ThetaObject, v: u32) -> ThetaMorphism {
    let n = prefix.len() + 1 + tail.n;
    let src = ThetaObject::from_entries(n, prefix.entries.clone());
    let mut e = prefix.entries.clone();
    e.push(p);
    e.extend_from_slice(&tail.entries);
    let tgt = ThetaObject::from_entries(n, e);
    let mut lift: Vec<Monotone> = prefix.entries.iter().map(|&e| (0..=e).collect()).collect();
    lift.push(vec![v]);
    while lift.len() < n {
        lift.push(vec![0]);
    }
    normalize_unchecked(&src, &tgt, &lift)
}

/// Elementary faces and degeneracies landing in `target`, with sources whose
/// entries stay `<= bound`. Identities are never returned.
pub fn generators_into(target: &ThetaObject, bound: u32) -> Vec<ThetaMorphism> {
    let n = target.n;
    let t = target.len();
    let mut out = Vec::new();
    for j in 0..n.min(t + 1) {
        let m = target.padded(j);
        let mut push = |src_j: u32, comp: Monotone| {
            let mut e: Vec<u32> = (0..n).map(|k| target.padded(k)).collect();
            e[j] = src_j;
            let cut = e.iter().position(|&x| x == 0).unwrap_or(n);
            e.truncate(cut);
            let source = ThetaObject::from_entries(n, e);
            let lift: Vec<Monotone> = (0..n)
                .map(|k| {
                    if k == j {
                        comp.clone()
                    } else {
                        let a = source.padded(k);
                        let b = target.padded(k);
                        if a == b {
                            (0..=a).collect()
                        } else {
                            vec![0; a as usize + 1]
                        }
                    }
                })
                .collect();
            let f = normalize_unchecked(&source, target, &lift);
            if !f.is_identity() && !out.contains(&f) {
                out.push(f);
            }
        };
        if m >= 1 {
            for skip in 0..=m {
                let comp: Monotone = (0..=m).filter(|&v| v != skip).collect();
                push(m - 1, comp);
            }
        }
        if m < bound {
            for hit in 0..=m {
                let comp: Monotone = (0..=m + 1).map(|v| if v > hit { v - 1 } else { v }).collect();
                push(m + 1, comp);
            }
        }
    }
    out
}

/// Factors a morphism into elementary generators (in application order:
/// the returned list `[u₁, …, u_r]` satisfies `f = u_r ∘ … ∘ u₁`).
pub fn factor_into_generators(f: &ThetaMorphism) -> Vec<ThetaMorphism> {
    let n = f.n();
    let lift = f.lift();
    let mut steps = Vec::new();
    // Current object as a padded Δⁿ tuple; change one direction at a time,
    // last direction first so that truncations happen as late as possible.
    let mut cur: Vec<u32> = (0..n).map(|j| f.source.padded(j)).collect();
    let obj = |e: &[u32]| {
        let cut = e.iter().position(|&x| x == 0).unwrap_or(e.len());
        ThetaObject::from_entries(n, e[..cut].to_vec())
    };
    for j in (0..n).rev() {
        let map = &lift[j];
        let b = f.target.padded(j);
        // codegeneracies: collapse repeated values one at a time
        let mut word: Vec<u32> = map.clone();
        let mut saved: Option<Vec<u32>> = None;
        loop {
            let pos = word.windows(2).position(|w| w[0] == w[1]);
            let Some(i) = pos else { break };
            // σ hitting i twice: {0..len-1} -> {0..len-2}
            let len = word.len() as u32;
            if len == 2 {
                // Direction j is about to vanish: empty the later directions
                // first so every step stays elementary. The component of j
                // is then constant, so what they are rebuilt with afterwards
                // does not matter.
                saved = Some(cur.clone());
                for k in (j + 1..n).rev() {
                    while cur[k] > 0 {
                        let top = cur[k];
                        let comp: Monotone = (0..=top).map(|v| v.min(top - 1)).collect();
                        let src = obj(&cur);
                        let mut next = cur.clone();
                        next[k] = top - 1;
                        let tgt = obj(&next);
                        let full: Vec<Monotone> = (0..n)
                            .map(|q| if q == k { comp.clone() } else { (0..=cur[q]).collect() })
                            .collect();
                        steps.push(normalize_unchecked(&src, &tgt, &full));
                        cur = next;
                    }
                }
            }
            let comp: Monotone = (0..len).map(|v| if v > i as u32 { v - 1 } else { v }).collect();
            let src = obj(&cur);
            let mut next = cur.clone();
            next[j] = len - 2;
            let tgt = obj(&next);
            let full: Vec<Monotone> = (0..n)
                .map(|k| if k == j { comp.clone() } else { (0..=cur[k]).collect() })
                .collect();
            steps.push(normalize_unchecked(&src, &tgt, &full));
            word.remove(i + 1);
            cur = next;
        }
        // cofaces: insert missing values in increasing order
        let mut img = word.clone();
        for v in 0..=b {
            if img.contains(&v) {
                continue;
            }
            // δ skipping position of v among {0..img.len()}
            let len = img.len() as u32;
            let pos = img.iter().position(|&x| x > v).unwrap_or(img.len()) as u32;
            let comp: Monotone = (0..len).map(|x| if x >= pos { x + 1 } else { x }).collect();
            let src = obj(&cur);
            let mut next = cur.clone();
            next[j] = len;
            let tgt = obj(&next);
            let full: Vec<Monotone> = (0..n)
                .map(|k| if k == j { comp.clone() } else { (0..=cur[k]).collect() })
                .collect();
            steps.push(normalize_unchecked(&src, &tgt, &full));
            img.insert(pos as usize, v);
            cur = next;
        }
        if let Some(saved) = saved {
            for k in j + 1..n {
                while cur[k] < saved[k] {
                    let len = cur[k] + 1;
                    let src = obj(&cur);
                    let mut next = cur.clone();
                    next[k] = len;
                    let tgt = obj(&next);
                    let full: Vec<Monotone> = (0..n).map(|q| (0..=cur[q]).collect()).collect();
                    steps.push(normalize_unchecked(&src, &tgt, &full));
                    cur = next;
                }
            }
        }
    }
    steps.retain(|g| !g.is_identity());
    steps
}

#[cfg(test)]
mod tests;
