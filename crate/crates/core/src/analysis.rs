//! Segal maps, the category of a nerve, truncations and connectivity.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::category::{Arrow, FiniteCategory};
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{from_fns, Precat, Presheaf};
use crate::theta::{normalize_morphism, segal_faces_in_direction, vertex_in_direction, ThetaMorphism, ThetaObject};
use crate::window::Window;

/// One Segal map `A(prefix, p, tail) -> A(prefix, 1, tail) ×_{A(prefix)} … `.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SegalMap {
    pub prefix: Vec<u32>,
    pub p: u32,
    pub tail: Vec<u32>,
    pub source_size: usize,
    /// Size of the iterated fiber product.
    pub target_size: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl SegalMap {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SegalReport {
    pub precat: String,
    pub window: Window,
    pub maps: Vec<SegalMap>,
}

impl SegalReport {
    /// Every Segal map in the window is a bijection.
    pub fn strict(&self) -> bool {
        self.maps.iter().all(SegalMap::bijective)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SegalMap> {
        self.maps.iter().filter(|m| !m.bijective())
    }
}

/// The Segal map in direction `|prefix| + 1` at `(prefix, p, tail)`.
pub fn segal_map(a: &Precat, prefix: &ThetaObject, p: u32, tail: &ThetaObject) -> Result<SegalMap> {
    let faces = segal_faces_in_direction(prefix, p, tail)?;
    let one = faces[0].source().clone();
    let (s, t) = (vertex_in_direction(prefix, 1, tail, 0), vertex_in_direction(prefix, 1, tail, 1));
    let edges = a.evaluate(&one)?;
    // fiber product size by counting paths of length p through the objects
    let ends: Vec<(Cell, Cell)> =
        edges.cells().iter().map(|e| Ok((a.act_raw(&s, e)?, a.act_raw(&t, e)?))).collect::<Result<_>>()?;
    let mut paths: HashMap<&Cell, usize> = HashMap::new();
    for (_, y) in &ends {
        *paths.entry(y).or_default() += 1;
    }
    for _ in 1..p {
        let mut next: HashMap<&Cell, usize> = HashMap::new();
        for (x, y) in &ends {
            if let Some(&k) = paths.get(x) {
                *next.entry(y).or_default() += k;
            }
        }
        paths = next;
    }
    let target_size: usize = paths.values().sum();
    let cells = a.evaluate(faces[0].target())?;
    let mut images = HashSet::with_capacity(cells.len());
    for c in cells.cells() {
        let img: Vec<Cell> = faces.iter().map(|f| a.act_raw(f, c)).collect::<Result<_>>()?;
        images.insert(img);
    }
    Ok(SegalMap {
        prefix: prefix.entries().to_vec(),
        p,
        tail: tail.entries().to_vec(),
        source_size: cells.len(),
        target_size,
        injective: images.len() == cells.len(),
        surjective: images.len() == target_size,
    })
}

/// All Segal maps with `p ≥ 2` whose level lies in the window, in every
/// direction.
pub fn segal_check(a: &Precat, w: &Window) -> Result<SegalReport> {
    let n = a.dim();
    let mut maps = Vec::new();
    for d in 0..n {
        let prefixes: Vec<ThetaObject> =
            Window { bound: w.bound, length: None }.objects(d).into_iter().filter(|m| m.len() == d).collect();
        let tails = Window { bound: w.bound, length: None }.objects(n - d - 1);
        for prefix in &prefixes {
            for tail in &tails {
                for p in 2..=w.bound {
                    let mut e = prefix.entries().to_vec();
                    e.push(p);
                    e.extend_from_slice(tail.entries());
                    let level = ThetaObject::new(n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
                    if w.contains(&level) {
                        maps.push(segal_map(a, prefix, p, tail)?);
                    }
                }
            }
        }
    }
    Ok(SegalReport { precat: a.name().to_string(), window: *w, maps })
}

/// A morphism `(q) -> (p)` acting only in the first direction.
fn first_direction(n: usize, q: u32, p: u32, comp: Vec<u32>) -> Result<ThetaMorphism> {
    let (s, t) = (ThetaObject::new(n, &[q as i64])?, ThetaObject::new(n, &[p as i64])?);
    let mut lift = vec![comp];
    lift.resize(n, vec![0]);
    normalize_morphism(&s, &t, &lift)
}

/// Reads the category off levels `(0)` to `(3)` of a precat whose Segal maps
/// in the first direction are bijective there (and up to the window bound).
pub fn category_from_nerve(a: &Precat, w: &Window) -> Result<FiniteCategory> {
    let n = a.dim();
    if n == 0 {
        return Err(Error::NotACategory("a 0-precat has no arrows".into()));
    }
    let zero = ThetaObject::zero(n);
    for p in 2..=w.bound.max(3) {
        let sm = segal_map(a, &ThetaObject::zero(0), p, &ThetaObject::zero(n - 1))?;
        if !sm.bijective() {
            return Err(Error::NotACategory(format!(
                "{}: Segal map at p={p} has source {} and target {}",
                a.name(),
                sm.source_size,
                sm.target_size
            )));
        }
    }
    let objs = a.evaluate(&zero)?;
    let one = ThetaObject::new(n, &[1])?;
    let arrows_l = a.evaluate(&one)?;
    let (s, t) = (first_direction(n, 0, 1, vec![0])?, first_direction(n, 0, 1, vec![1])?);
    let mut arrows = Vec::with_capacity(arrows_l.len());
    for c in arrows_l.cells() {
        let src = objs.position(&a.act_raw(&s, c)?).expect("vertex is an object");
        let tgt = objs.position(&a.act_raw(&t, c)?).expect("vertex is an object");
        arrows.push(Arrow { name: c.to_string(), source: src, target: tgt });
    }
    let identities: Vec<u32> = objs
        .cells()
        .iter()
        .map(|x| Ok(arrows_l.position(&a.degenerate(x, &one)?).expect("degeneracy is an arrow")))
        .collect::<Result<_>>()?;
    let faces = [vec![0, 1], vec![1, 2], vec![0, 2]]
        .into_iter()
        .map(|c| first_direction(n, 1, 2, c))
        .collect::<Result<Vec<_>>>()?;
    let mut compose = Vec::new();
    for c in a.evaluate(&ThetaObject::new(n, &[2])?)?.cells() {
        let idx: Vec<u32> = faces
            .iter()
            .map(|f| Ok(arrows_l.position(&a.act_raw(f, c)?).expect("face is an arrow")))
            .collect::<Result<_>>()?;
        compose.push([idx[1], idx[0], idx[2]]);
    }
    let names = objs.cells().iter().map(|c| c.to_string()).collect();
    FiniteCategory::new(format!("Cat({})", a.name()), names, arrows, identities, &compose)
        .map_err(|e| Error::NotACategory(e.to_string()))
}

/// A partition of the objects of a precat.
#[derive(Clone, Debug)]
pub struct Classes {
    /// One representative per class, sorted.
    pub reps: Vec<Cell>,
    class_of: HashMap<Cell, Cell>,
    members: HashMap<Cell, Vec<Cell>>,
}

impl Classes {
    fn discrete(cells: &[Cell]) -> Classes {
        Classes {
            reps: cells.to_vec(),
            class_of: cells.iter().map(|c| (c.clone(), c.clone())).collect(),
            members: cells.iter().map(|c| (c.clone(), vec![c.clone()])).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn class_of(&self, c: &Cell) -> Result<&Cell> {
        self.class_of.get(c).ok_or_else(|| Error::Domain(format!("{c} is not an object")))
    }

    pub fn members(&self, rep: &Cell) -> &[Cell] {
        self.members.get(rep).map_or(&[], |v| v.as_slice())
    }
}

/// Isomorphism classes of objects after truncating to a set.
pub fn tau_zero(a: &Precat, w: &Window) -> Result<Classes> {
    require_strict(a, w)?;
    tau0(a)
}

fn require_strict(a: &Precat, w: &Window) -> Result<()> {
    let report = segal_check(a, w)?;
    if let Some(m) = report.failures().next() {
        return Err(Error::RequiresCat(format!(
            "{} is not strictly Segal: map at prefix {:?}, p={}, tail {:?} has source {} and target {}",
            a.name(),
            m.prefix,
            m.p,
            m.tail,
            m.source_size,
            m.target_size
        )));
    }
    Ok(())
}

const TAU_LEVELS: u32 = 3;

fn tau0(a: &Precat) -> Result<Classes> {
    let n = a.dim();
    let objs = a.objects()?;
    if n == 0 {
        return Ok(Classes::discrete(objs.cells()));
    }
    let slices: Vec<Classes> = (0..=TAU_LEVELS).map(|p| tau0(&a.slice(p, None)?)).collect::<Result<_>>()?;
    let slices = Arc::new(slices);
    let (sl, base, keep) = (slices.clone(), a.clone(), slices.clone());
    let nerve = from_fns(
        format!("tau({})", a.name()),
        1,
        move |m| {
            let p = m.head();
            sl.get(p as usize)
                .map(|c| c.reps.clone())
                .ok_or_else(|| Error::OutsideWindow(format!("truncation only reads levels up to {TAU_LEVELS}")))
        },
        move |f, c| {
            let (q, p) = (f.source().head(), f.target().head());
            let g = lift_first(&base, f, q, p)?;
            let target = &slices[q as usize];
            let img = target.class_of(&base.act_raw(&g, c)?)?.clone();
            for other in slices[p as usize].members(c) {
                if target.class_of(&base.act_raw(&g, other)?)? != &img {
                    return Err(Error::RequiresCat(format!("{} does not act on classes of {c}", base.name())));
                }
            }
            Ok(img)
        },
    );
    let cat = category_from_nerve(&nerve, &Window { bound: TAU_LEVELS, length: None }).map_err(|e| match e {
        Error::NotACategory(m) => Error::RequiresCat(m),
        other => other,
    })?;
    let iso = cat.iso_classes();
    let s0 = &keep[0];
    let mut class_of = HashMap::new();
    let mut members: HashMap<Cell, Vec<Cell>> = HashMap::new();
    let mut reps = Vec::new();
    for x in objs.cells() {
        let i = s0.reps.iter().position(|r| r == s0.class_of(x).expect("object")).expect("rep");
        let rep = s0.reps[iso[i] as usize].clone();
        if !reps.contains(&rep) {
            reps.push(rep.clone());
        }
        members.entry(rep.clone()).or_default().push(x.clone());
        class_of.insert(x.clone(), rep);
    }
    reps.sort();
    Ok(Classes { reps, class_of, members })
}

/// `f: (q) -> (p)` of Θ¹ as a first-direction morphism of the precat's Θⁿ.
fn lift_first(a: &Precat, f: &ThetaMorphism, q: u32, p: u32) -> Result<ThetaMorphism> {
    let comp = f.lift().into_iter().next().unwrap_or_else(|| vec![0; q as usize + 1]);
    first_direction(a.dim(), q, p, comp)
}

/// `τ≤k(A)`, a k-precat: levels of length below `k` are those of `A`, a
/// level `(p₁, …, p_k)` is `τ₀` of the iterated slice `A_{p₁/…/p_k/}`.
pub fn truncate(a: &Precat, k: usize, w: &Window) -> Result<Precat> {
    if k > a.dim() {
        return Err(Error::InvalidArgument(format!("cannot truncate a {}-precat at level {k}", a.dim())));
    }
    require_strict(a, w)?;
    Ok(Precat::new(
        format!("t<={k}({})", a.name()),
        Truncation { a: a.clone(), k, classes: RwLock::new(HashMap::new()) },
    ))
}

struct Truncation {
    a: Precat,
    k: usize,
    classes: RwLock<HashMap<ThetaObject, Arc<Classes>>>,
}

impl Truncation {
    fn lift(&self, m: &ThetaObject) -> Result<ThetaObject> {
        m.with_n(self.a.dim())
    }

    fn classes(&self, m: &ThetaObject) -> Result<Arc<Classes>> {
        if let Some(c) = self.classes.read().expect("lock poisoned").get(m) {
            return Ok(c.clone());
        }
        let mut s = self.a.clone();
        for &p in m.entries() {
            s = s.slice(p, None)?;
        }
        let c = Arc::new(tau0(&s)?);
        self.classes.write().expect("lock poisoned").insert(m.clone(), c.clone());
        Ok(c)
    }
}

impl Presheaf for Truncation {
    fn dim(&self) -> usize {
        self.k
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        if m.len() < self.k {
            return Ok(self.a.evaluate(&self.lift(m)?)?.cells().to_vec());
        }
        Ok(self.classes(m)?.reps.clone())
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let (s, t) = (self.lift(f.source())?, self.lift(f.target())?);
        let mut lift = f.lift();
        lift.resize(self.a.dim(), vec![0]);
        let g = normalize_morphism(&s, &t, &lift)?;
        let img = self.a.act_raw(&g, c)?;
        if f.source().len() < self.k {
            return Ok(img);
        }
        let src = self.classes(f.source())?;
        let rep = src.class_of(&img)?.clone();
        if f.target().len() == self.k {
            for other in self.classes(f.target())?.members(c) {
                if src.class_of(&self.a.act_raw(&g, other)?)? != &rep {
                    return Err(Error::RequiresCat(format!("truncation of {} is not well defined", self.a.name())));
                }
            }
        }
        Ok(rep)
    }
}

/// Whether `A` is equivalent to the point: one class of objects and every
/// hom contractible.
pub fn equivalent_to_point(a: &Precat, w: &Window) -> Result<bool> {
    require_strict(a, w)?;
    contractible(a)
}

fn contractible(a: &Precat) -> Result<bool> {
    let objs = a.objects()?;
    if a.dim() == 0 {
        return Ok(objs.len() == 1);
    }
    if tau0(a)?.len() != 1 {
        return Ok(false);
    }
    for x in objs.cells() {
        for y in objs.cells() {
            if !contractible(&a.hom(x, y)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `A` is k-connected when `τ≤k(A)` is equivalent to the point.
pub fn is_k_connected(a: &Precat, k: usize, w: &Window) -> Result<bool> {
    if k >= a.dim() {
        return equivalent_to_point(a, w);
    }
    let t = truncate(a, k, w)?;
    contractible(&t)
}

/// The minimal dimension of a map of finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MinDim0 {
    Zero,
    One,
    Infinite,
}

impl fmt::Display for MinDim0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MinDim0::Zero => "0",
            MinDim0::One => "1",
            MinDim0::Infinite => "inf",
        })
    }
}

impl MinDim0 {
    /// `images[i]` is the image of element `i`.
    pub fn of_function(images: &[usize], codomain: usize) -> MinDim0 {
        let hit: HashSet<usize> = images.iter().copied().collect();
        if hit.len() < codomain {
            MinDim0::Zero
        } else if images.len() == codomain {
            MinDim0::Infinite
        } else {
            MinDim0::One
        }
    }
}

/// `m(f)` for a map of 0-precats: ∞ for a bijection, 1 when surjective.
pub fn min_dim_sets(f: &PrecatMap) -> Result<MinDim0> {
    if f.domain().dim() != 0 {
        return Err(Error::InvalidArgument("minimal dimension is only computed for maps of sets".into()));
    }
    let zero = ThetaObject::zero(0);
    let (dom, cod) = (f.domain().evaluate(&zero)?, f.codomain().evaluate(&zero)?);
    let images = dom
        .cells()
        .iter()
        .map(|c| {
            let img = f.apply_raw(&zero, c)?;
            cod.position(&img).map(|i| i as usize).ok_or_else(|| Error::Domain(format!("{img} is not in the codomain")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MinDim0::of_function(&images, cod.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::categories_isomorphic;
    use crate::constructions::delooping::delooping;
    use crate::constructions::monoidal::{ck_monoidal, MonoidObject};
    use crate::constructions::nerve::nerve;
    use crate::constructions::suspension::Pointed;
    use crate::constructions::upsilon::upsilon;
    use crate::precat::{discrete, empty, terminal};

    fn w(b: u32) -> Window {
        Window::new(b).unwrap()
    }

    #[test]
    fn nerves_are_strict_and_round_trip() {
        for c in [FiniteCategory::interval(), FiniteCategory::iso_interval(), FiniteCategory::kronecker()] {
            let nc = nerve(&c, 1).unwrap();
            assert!(segal_check(&nc, &w(3)).unwrap().strict());
            let back = category_from_nerve(&nc, &w(3)).unwrap();
            assert!(categories_isomorphic(&c, &back));
        }
        let n2 = nerve(&FiniteCategory::interval(), 2).unwrap();
        assert!(segal_check(&n2, &w(2)).unwrap().strict());
    }

    #[test]
    fn upsilon_is_strict() {
        let u = upsilon(&[discrete(1, 2), terminal(1)]).unwrap();
        assert!(segal_check(&u, &w(2)).unwrap().strict());
    }

    #[test]
    fn delooping_of_two_points_is_not_strict() {
        let x = delooping(&Pointed::new(discrete(1, 2), Cell::Atom(0)).unwrap());
        let r = segal_check(&x, &w(2)).unwrap();
        let m = r.maps.iter().find(|m| m.p == 2 && m.prefix.is_empty() && m.tail.is_empty()).unwrap();
        assert_eq!((m.source_size, m.target_size), (3, 4));
        assert!(matches!(category_from_nerve(&x, &w(2)), Err(Error::NotACategory(_))));
        assert!(matches!(tau_zero(&x, &w(2)), Err(Error::RequiresCat(_))));
    }

    #[test]
    fn tau_zero_of_intervals() {
        let ni = nerve(&FiniteCategory::interval(), 1).unwrap();
        let nb = nerve(&FiniteCategory::iso_interval(), 1).unwrap();
        assert_eq!(tau_zero(&ni, &w(3)).unwrap().len(), 2);
        assert_eq!(tau_zero(&nb, &w(3)).unwrap().len(), 1);
        assert!(equivalent_to_point(&nb, &w(3)).unwrap());
        assert!(!equivalent_to_point(&ni, &w(3)).unwrap());
        assert!(equivalent_to_point(&terminal(2), &w(2)).unwrap());
        assert!(!equivalent_to_point(&empty(1), &w(2)).unwrap());
    }

    #[test]
    fn truncations() {
        // τ≤1 of a nerve seen as a 2-precat is the nerve as a 1-precat.
        let c = FiniteCategory::kronecker();
        let t = truncate(&nerve(&c, 2).unwrap(), 1, &w(2)).unwrap();
        assert!(t.window_equal(&nerve(&c, 1).unwrap(), &w(3)).unwrap());
        // τ≤1(c¹(ℤ/2)) has one object and two arrows.
        let c1 = ck_monoidal(&MonoidObject::z2(0), 1).unwrap();
        let t1 = truncate(&c1, 1, &w(2)).unwrap();
        let cat = category_from_nerve(&t1, &w(3)).unwrap();
        assert!(categories_isomorphic(&cat, &FiniteCategory::z2()));
    }

    #[test]
    fn connectivity() {
        let c1 = ck_monoidal(&MonoidObject::z2(0), 1).unwrap();
        assert!(is_k_connected(&c1, 0, &w(2)).unwrap());
        assert!(!is_k_connected(&c1, 1, &w(2)).unwrap());
        let ni = nerve(&FiniteCategory::interval(), 1).unwrap();
        assert!(!is_k_connected(&ni, 0, &w(2)).unwrap());
        let nb = nerve(&FiniteCategory::iso_interval(), 1).unwrap();
        assert!(is_k_connected(&nb, 0, &w(2)).unwrap());
    }

    #[test]
    fn min_dim_table() {
        assert_eq!(MinDim0::of_function(&[0, 1], 2), MinDim0::Infinite);
        assert_eq!(MinDim0::of_function(&[0, 0], 1), MinDim0::One);
        assert_eq!(MinDim0::of_function(&[], 1), MinDim0::Zero);
        let f = PrecatMap::to_terminal(&discrete(0, 2), &terminal(0)).unwrap();
        assert_eq!(min_dim_sets(&f).unwrap(), MinDim0::One);
    }
}
