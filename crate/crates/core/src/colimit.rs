//! Pushouts of precats, computed levelwise.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{Precat, Presheaf};
use crate::theta::{ThetaMorphism, ThetaObject};
use crate::window::Window;

/// The pushout of a span `P <-f- R -g-> Q` with its coprojections.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Precat,
    /// `P -> P ∪^R Q`
    pub left: PrecatMap,
    /// `Q -> P ∪^R Q`
    pub right: PrecatMap,
}

struct Classes {
    /// Tagged cell to the representative of its class.
    rep: HashMap<Cell, Cell>,
    reps: Vec<Cell>,
}

struct PushoutBody {
    f: PrecatMap,
    g: PrecatMap,
    classes: RwLock<HashMap<ThetaObject, Arc<Classes>>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl PushoutBody {
    fn classes(&self, m: &ThetaObject) -> Result<Arc<Classes>> {
        if let Some(c) = self.classes.read().expect("lock poisoned").get(m) {
            return Ok(c.clone());
        }
        let (p, q, r) = (self.f.codomain(), self.g.codomain(), self.f.domain());
        let mut tagged: Vec<Cell> = Vec::new();
        for x in p.evaluate(m)?.cells() {
            tagged.push(Cell::left(x.clone()));
        }
        for y in q.evaluate(m)?.cells() {
            tagged.push(Cell::right(y.clone()));
        }
        let index: HashMap<Cell, usize> = tagged.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let mut parent: Vec<usize> = (0..tagged.len()).collect();
        for z in r.evaluate(m)?.cells() {
            let a = Cell::left(self.f.apply_raw(m, z)?);
            let b = Cell::right(self.g.apply_raw(m, z)?);
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return Err(Error::Construction(format!(
                    "span leg sends {z} outside its codomain at level {m}"
                )));
            };
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                // keep the smaller tagged cell as root
                if tagged[ri] < tagged[rj] {
                    parent[rj] = ri;
                } else {
                    parent[ri] = rj;
                }
            }
        }
        let mut rep = HashMap::with_capacity(tagged.len());
        let mut reps = Vec::new();
        for i in 0..tagged.len() {
            let root = find(&mut parent, i);
            if root == i {
                reps.push(tagged[i].clone());
            }
            rep.insert(tagged[i].clone(), tagged[root].clone());
        }
        let classes = Arc::new(Classes { rep, reps });
        self.classes.write().expect("lock poisoned").insert(m.clone(), classes.clone());
        Ok(classes)
    }

    fn class_of(&self, m: &ThetaObject, tagged: &Cell) -> Result<Cell> {
        self.classes(m)?
            .rep
            .get(tagged)
            .cloned()
            .ok_or_else(|| Error::Domain(format!("{tagged} is not a cell of the pushout summands at {m}")))
    }
}

impl Presheaf for PushoutBody {
    fn dim(&self) -> usize {
        self.f.domain().dim()
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        Ok(self.classes(m)?.reps.clone())
    }

    fn act(&self, u: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let moved = match c {
            Cell::Left(x) => Cell::left(self.f.codomain().act_raw(u, x)?),
            Cell::Right(y) => Cell::right(self.g.codomain().act_raw(u, y)?),
            other => return Err(Error::Domain(format!("{other} is not a pushout cell"))),
        };
        self.class_of(u.source(), &moved)
    }
}

/// `P ∪^R Q` for `f: R -> P` and `g: R -> Q`.
///
/// Cells are equivalence classes of tagged cells `L x`, `R y`, represented
/// by their least member.
pub fn pushout(f: &PrecatMap, g: &PrecatMap) -> Result<Pushout> {
    pushout_named(
        format!("({} u^{} {})", f.codomain().name(), f.domain().name(), g.codomain().name()),
        f,
        g,
    )
}

pub fn pushout_named(name: impl Into<String>, f: &PrecatMap, g: &PrecatMap) -> Result<Pushout> {
    if !f.domain().same(g.domain()) && f.domain().name() != g.domain().name() {
        return Err(Error::InvalidArgument(format!(
            "span legs have different domains {} and {}",
            f.domain().name(),
            g.domain().name()
        )));
    }
    let body = Arc::new(PushoutBody { f: f.clone(), g: g.clone(), classes: RwLock::new(HashMap::new()) });
    let object = Precat::new(name, SharedBody(body.clone()));
    let b1 = body.clone();
    let left = PrecatMap::new("inl", f.codomain(), &object, move |m, x| b1.class_of(m, &Cell::left(x.clone())))?;
    let b2 = body;
    let right = PrecatMap::new("inr", g.codomain(), &object, move |m, y| b2.class_of(m, &Cell::right(y.clone())))?;
    Ok(Pushout { object, left, right })
}

struct SharedBody(Arc<PushoutBody>);

impl Presheaf for SharedBody {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        self.0.cells(m)
    }

    fn act(&self, u: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        self.0.act(u, c)
    }
}

impl Pushout {
    /// The map out of the pushout determined by a cocone `a: P -> Z`,
    /// `b: Q -> Z`. Compatibility is checked on the window when given.
    pub fn induced(&self, a: &PrecatMap, b: &PrecatMap, check: Option<&Window>) -> Result<PrecatMap> {
        if let Some(w) = check {
            self.check_cocone(a, b, w)?;
        }
        let (a2, b2) = (a.clone(), b.clone());
        PrecatMap::new(
            format!("[{},{}]", a.name(), b.name()),
            &self.object,
            a.codomain(),
            move |m, c| match c {
                Cell::Left(x) => a2.apply_raw(m, x),
                Cell::Right(y) => b2.apply_raw(m, y),
                other => Err(Error::Domain(format!("{other} is not a pushout cell"))),
            },
        )
    }

    fn check_cocone(&self, a: &PrecatMap, b: &PrecatMap, w: &Window) -> Result<()> {
        // Every identified pair of tagged cells must have the same image.
        let inl = self.left.tables(w)?;
        let inr = self.right.tables(w)?;
        for m in w.objects(self.object.dim()) {
            let mut image: HashMap<Cell, Cell> = HashMap::new();
            for (x, cls) in &inl[&m] {
                let v = a.apply_raw(&m, x)?;
                if let Some(prev) = image.insert(cls.clone(), v.clone()) {
                    if prev != v {
                        return Err(Error::Construction(format!("cocone is not compatible at {m} (cell {x})")));
                    }
                }
            }
            for (y, cls) in &inr[&m] {
                let v = b.apply_raw(&m, y)?;
                if let Some(prev) = image.insert(cls.clone(), v.clone()) {
                    if prev != v {
                        return Err(Error::Construction(format!("cocone is not compatible at {m} (cell {y})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `P ⊔ Q`, the pushout over the empty precat.
pub fn coproduct(p: &Precat, q: &Precat) -> Result<Pushout> {
    let e = crate::precat::empty(p.dim());
    let f = PrecatMap::from_empty(&e, p)?;
    let g = PrecatMap::from_empty(&e, q)?;
    pushout_named(format!("({} + {})", p.name(), q.name()), &f, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precat::{discrete, subpresheaf, terminal};

    #[test]
    fn gluing_two_points_along_a_point() {
        let two = discrete(1, 2);
        let pt = terminal(1);
        let f = PrecatMap::new("f", &pt, &two, |_, _| Ok(Cell::Atom(0))).unwrap();
        let g = PrecatMap::new("g", &pt, &two, |_, _| Ok(Cell::Atom(1))).unwrap();
        let po = pushout(&f, &g).unwrap();
        let w = Window::new(2).unwrap();
        for m in w.objects(1) {
            assert_eq!(po.object.count(&m).unwrap(), 3);
        }
        assert!(po.left.is_natural(&w).unwrap());
        assert!(po.right.is_natural(&w).unwrap());
        let i = po.left.apply(&ThetaObject::zero(1), &Cell::Atom(0)).unwrap();
        let j = po.right.apply(&ThetaObject::zero(1), &Cell::Atom(1)).unwrap();
        assert_eq!(i, j);
    }

    #[test]
    fn collapsing_a_subobject() {
        let three = discrete(1, 3);
        let sub = subpresheaf("{0,1}", &three, |_, c| Ok(*c != Cell::Atom(2)));
        let inc = PrecatMap::inclusion(&sub, &three).unwrap();
        let bang = PrecatMap::to_terminal(&sub, &terminal(1)).unwrap();
        let po = pushout(&inc, &bang).unwrap();
        assert_eq!(po.object.count(&ThetaObject::zero(1)).unwrap(), 2);
        let w = Window::new(2).unwrap();
        let to_pt = PrecatMap::to_terminal(&three, &terminal(1)).unwrap();
        let id_pt = PrecatMap::identity(&terminal(1));
        let ind = po.induced(&to_pt, &id_pt, Some(&w)).unwrap();
        assert!(ind.is_natural(&w).unwrap());
    }

    #[test]
    fn incompatible_cocone_is_rejected() {
        let two = discrete(1, 2);
        let pt = terminal(1);
        let f = PrecatMap::new("f", &pt, &two, |_, _| Ok(Cell::Atom(0))).unwrap();
        let g = PrecatMap::new("g", &pt, &two, |_, _| Ok(Cell::Atom(1))).unwrap();
        let po = pushout(&f, &g).unwrap();
        let id = PrecatMap::identity(&two);
        let w = Window::new(1).unwrap();
        assert!(po.induced(&id, &id, Some(&w)).is_err());
    }

    #[test]
    fn coproduct_counts_add() {
        let s = coproduct(&discrete(2, 2), &discrete(2, 3)).unwrap();
        assert_eq!(s.object.count(&ThetaObject::zero(2)).unwrap(), 5);
    }
}
