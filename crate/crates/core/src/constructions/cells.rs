use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::upsilon::{upsilon, upsilon_map, Indexing};
use crate::cell::Cell;
use crate::colimit::pushout_named;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{empty, terminal, Precat, Presheaf};
use crate::theta::{compose, enumerate_morphisms, ThetaMorphism, ThetaObject};

/// A cell `Fⁱ` with its boundary inclusion `∂Fⁱ -> Fⁱ`.
#[derive(Clone, Debug)]
pub struct CellPair {
    pub cell: Precat,
    pub boundary: Precat,
    pub inclusion: PrecatMap,
}

/// `∂Fⁱ -> Fⁱ` as n-precats, for `0 ≤ i ≤ n+1`.
///
/// For `i ≤ n` this is Υ applied `i` times to `∅ -> ∗`; for `i = n+1` the
/// cell is `Fⁿ` and the boundary is `Fⁿ ∪^{∂Fⁿ} Fⁿ` with the fold map.
pub fn cell(i: usize, n: usize) -> Result<CellPair> {
    if i > n + 1 {
        return Err(Error::InvalidArgument(format!("no cell F{i} in dimension {n}")));
    }
    if i == n + 1 {
        let top = cell(n, n)?;
        let po = pushout_named(format!("dF{i}"), &top.inclusion, &top.inclusion)?;
        let id = PrecatMap::identity(&top.cell);
        let fold = po.induced(&id, &id, None)?.renamed(format!("dF{i}->F{i}"));
        return Ok(CellPair { cell: top.cell, boundary: po.object, inclusion: fold });
    }
    let base = n - i;
    let (mut c, mut b) = (terminal(base), empty(base));
    let mut inc = PrecatMap::from_empty(&b, &c)?;
    for _ in 0..i {
        let (c2, b2) = (upsilon(std::slice::from_ref(&c))?, upsilon(std::slice::from_ref(&b))?);
        inc = upsilon_map(&[inc], &b2, &c2, Indexing::Full)?;
        (c, b) = (c2, b2);
    }
    let cell = rename(&c, format!("F{i}"));
    let boundary = rename(&b, format!("dF{i}"));
    let inclusion = inc.with_domain(&boundary).with_codomain(&cell).renamed(format!("dF{i}->F{i}"));
    Ok(CellPair { cell, boundary, inclusion })
}

/// The same presheaf under another name (sharing the level cache).
pub(crate) fn rename(p: &Precat, name: String) -> Precat {
    struct Alias(Precat);
    impl Presheaf for Alias {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
            Ok(self.0.evaluate(m)?.cells().to_vec())
        }
        fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
            self.0.act_raw(f, c)
        }
    }
    Precat::new(name, Alias(p.clone()))
}

/// The representable presheaf `h(M)`; the cells at `U` are the morphisms
/// `U -> M`, numbered in enumeration order.
pub fn representable(m: &ThetaObject) -> Precat {
    Precat::new(format!("h{m}"), Representable { m: m.clone(), homs: RwLock::new(HashMap::new()) })
}

struct Representable {
    m: ThetaObject,
    homs: RwLock<HashMap<ThetaObject, Arc<Vec<ThetaMorphism>>>>,
}

impl Representable {
    fn homs(&self, u: &ThetaObject) -> Arc<Vec<ThetaMorphism>> {
        if let Some(h) = self.homs.read().expect("lock poisoned").get(u) {
            return h.clone();
        }
        let h = Arc::new(enumerate_morphisms(u, &self.m));
        self.homs.write().expect("lock poisoned").insert(u.clone(), h.clone());
        h
    }
}

impl Presheaf for Representable {
    fn dim(&self) -> usize {
        self.m.n()
    }

    fn cells(&self, u: &ThetaObject) -> Result<Vec<Cell>> {
        Ok((0..self.homs(u).len() as u32).map(Cell::Atom).collect())
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let Cell::Atom(i) = c else {
            return Err(Error::Domain(format!("{c} is not a cell of h{}", self.m)));
        };
        let g = &self.homs(f.target())[*i as usize];
        let gf = compose(g, f)?;
        let pos = self.homs(f.source()).iter().position(|h| *h == gf).expect("composite is enumerated");
        Ok(Cell::Atom(pos as u32))
    }
}
