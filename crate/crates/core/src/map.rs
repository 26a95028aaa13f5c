use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::par;
use crate::precat::Precat;
use crate::theta::ThetaObject;
use crate::window::Window;

pub type CellFn = Arc<dyn Fn(&ThetaObject, &Cell) -> Result<Cell> + Send + Sync>;

/// A natural family of functions `domain_M -> codomain_M`.
///
/// Naturality is not enforced at construction; it is validated on a window
/// with [`PrecatMap::naturality_violations`].
#[derive(Clone)]
pub struct PrecatMap {
    name: String,
    domain: Precat,
    codomain: Precat,
    func: CellFn,
}

impl fmt::Debug for PrecatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.domain.name(), self.codomain.name())
    }
}

/// A naturality square that fails to commute.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NaturalityViolation {
    pub morphism: String,
    pub cell: String,
    pub down_then_across: String,
    pub across_then_down: String,
}

impl PrecatMap {
    pub fn new<F>(name: impl Into<String>, domain: &Precat, codomain: &Precat, f: F) -> Result<PrecatMap>
    where
        F: Fn(&ThetaObject, &Cell) -> Result<Cell> + Send + Sync + 'static,
    {
        if domain.dim() != codomain.dim() {
            return Err(Error::InvalidArgument(format!(
                "map between precats of dimensions {} and {}",
                domain.dim(),
                codomain.dim()
            )));
        }
        Ok(PrecatMap { name: name.into(), domain: domain.clone(), codomain: codomain.clone(), func: Arc::new(f) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Precat {
        &self.domain
    }

    pub fn codomain(&self) -> &Precat {
        &self.codomain
    }

    pub fn identity(p: &Precat) -> PrecatMap {
        PrecatMap::new(format!("id_{}", p.name()), p, p, |_, c| Ok(c.clone())).expect("same dimension")
    }

    /// The unique map to a terminal precat.
    pub fn to_terminal(p: &Precat, terminal: &Precat) -> Result<PrecatMap> {
        PrecatMap::new(format!("!_{}", p.name()), p, terminal, |_, _| Ok(Cell::Unit))
    }

    /// The unique map out of an empty precat.
    pub fn from_empty(empty: &Precat, p: &Precat) -> Result<PrecatMap> {
        PrecatMap::new(format!("0->{}", p.name()), empty, p, |_, c| {
            Err(Error::Domain(format!("the empty precat has no cell {c}")))
        })
    }

    /// Inclusion of a sub-presheaf whose cells are cells of the target.
    pub fn inclusion(sub: &Precat, whole: &Precat) -> Result<PrecatMap> {
        PrecatMap::new(format!("{}>->{}", sub.name(), whole.name()), sub, whole, |_, c| Ok(c.clone()))
    }

    /// Applies the map, checking that `c` lies in the domain at `m`.
    pub fn apply(&self, m: &ThetaObject, c: &Cell) -> Result<Cell> {
        if !self.domain.evaluate(m)?.contains(c) {
            return Err(Error::Domain(format!("cell {c} is not at level {m} of {}", self.domain.name())));
        }
        (self.func)(m, c)
    }

    pub fn apply_raw(&self, m: &ThetaObject, c: &Cell) -> Result<Cell> {
        (self.func)(m, c)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &PrecatMap) -> Result<PrecatMap> {
        if !self.codomain.same(&next.domain) && self.codomain.name() != next.domain.name() {
            return Err(Error::Composition(format!(
                "codomain {} does not match domain {}",
                self.codomain.name(),
                next.domain.name()
            )));
        }
        let (a, b) = (self.func.clone(), next.func.clone());
        PrecatMap::new(format!("{};{}", self.name, next.name), &self.domain, &next.codomain, move |m, c| {
            b(m, &a(m, c)?)
        })
    }

    /// The same function with a different name or retargeted at an equal
    /// codomain (used after rebuilding a precat from the same inputs).
    pub fn with_codomain(&self, codomain: &Precat) -> PrecatMap {
        PrecatMap { name: self.name.clone(), domain: self.domain.clone(), codomain: codomain.clone(), func: self.func.clone() }
    }

    pub fn with_domain(&self, domain: &Precat) -> PrecatMap {
        PrecatMap { name: self.name.clone(), domain: domain.clone(), codomain: self.codomain.clone(), func: self.func.clone() }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> PrecatMap {
        self.name = name.into();
        self
    }

    /// Naturality squares over every window generator, plus membership of
    /// every image in the codomain.
    pub fn naturality_violations(&self, w: &Window) -> Result<Vec<NaturalityViolation>> {
        let n = self.domain.dim();
        let mut out = Vec::new();
        for m in w.objects(n) {
            let cod = self.codomain.evaluate(&m)?;
            for c in self.domain.evaluate(&m)?.cells() {
                let img = (self.func)(&m, c)?;
                if !cod.contains(&img) {
                    out.push(NaturalityViolation {
                        morphism: format!("id{m}"),
                        cell: c.to_string(),
                        down_then_across: img.to_string(),
                        across_then_down: "<not in codomain>".into(),
                    });
                }
            }
        }
        let gens = w.generators(n);
        let found: Vec<Result<Vec<NaturalityViolation>>> = par::map(&gens, |g| {
            let mut v = Vec::new();
            for c in self.domain.evaluate(g.target())?.cells() {
                let a = (self.func)(g.source(), &self.domain.act_raw(g, c)?)?;
                let b = self.codomain.act_raw(g, &(self.func)(g.target(), c)?)?;
                if a != b {
                    v.push(NaturalityViolation {
                        morphism: g.to_string(),
                        cell: c.to_string(),
                        down_then_across: a.to_string(),
                        across_then_down: b.to_string(),
                    });
                }
            }
            Ok(v)
        });
        for r in found {
            out.extend(r?);
        }
        Ok(out)
    }

    pub fn is_natural(&self, w: &Window) -> Result<bool> {
        Ok(self.naturality_violations(w)?.is_empty())
    }

    pub fn injective_at(&self, m: &ThetaObject) -> Result<bool> {
        let cells = self.domain.evaluate(m)?;
        let mut seen = std::collections::HashSet::with_capacity(cells.len());
        for c in cells.cells() {
            if !seen.insert((self.func)(m, c)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn surjective_at(&self, m: &ThetaObject) -> Result<bool> {
        let mut hit = std::collections::HashSet::new();
        for c in self.domain.evaluate(m)?.cells() {
            hit.insert((self.func)(m, c)?);
        }
        Ok(hit.len() == self.codomain.count(m)?)
    }

    /// Injective at every window level of non-maximal length.
    pub fn is_cofibration(&self, w: &Window) -> Result<bool> {
        let n = self.domain.dim();
        for m in w.objects(n) {
            if m.len() < n && !self.injective_at(&m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Bijective at every window level.
    pub fn is_bijective_on(&self, w: &Window) -> Result<bool> {
        for m in w.objects(self.domain.dim()) {
            if !self.injective_at(&m)? || !self.surjective_at(&m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Levelwise lookup tables.
    pub fn from_tables(
        name: impl Into<String>,
        domain: &Precat,
        codomain: &Precat,
        tables: HashMap<ThetaObject, HashMap<Cell, Cell>>,
    ) -> Result<PrecatMap> {
        PrecatMap::new(name, domain, codomain, move |m, c| {
            tables
                .get(m)
                .ok_or_else(|| Error::OutsideWindow(format!("no table for level {m}")))?
                .get(c)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("cell {c} missing from table at {m}")))
        })
    }

    /// The tables of this map over a window.
    pub fn tables(&self, w: &Window) -> Result<HashMap<ThetaObject, HashMap<Cell, Cell>>> {
        let mut out = HashMap::new();
        for m in w.objects(self.domain.dim()) {
            let mut t = HashMap::new();
            for c in self.domain.evaluate(&m)?.cells() {
                t.insert(c.clone(), (self.func)(&m, c)?);
            }
            out.insert(m, t);
        }
        Ok(out)
    }

    /// The levelwise inverse of a map that is bijective on the window.
    pub fn inverse_on(&self, w: &Window) -> Result<PrecatMap> {
        let mut inv = HashMap::new();
        for (m, t) in self.tables(w)? {
            let mut back = HashMap::new();
            for (a, b) in t {
                if back.insert(b, a).is_some() {
                    return Err(Error::InvalidArgument(format!("{} is not injective at {m}", self.name)));
                }
            }
            if back.len() != self.codomain.count(&m)? {
                return Err(Error::InvalidArgument(format!("{} is not surjective at {m}", self.name)));
            }
            inv.insert(m, back);
        }
        PrecatMap::from_tables(format!("{}^-1", self.name), &self.codomain, &self.domain, inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precat::{discrete, terminal};

    #[test]
    fn terminal_map_is_natural() {
        let w = Window::new(2).unwrap();
        let f = PrecatMap::to_terminal(&discrete(1, 3), &terminal(1)).unwrap();
        assert!(f.is_natural(&w).unwrap());
        assert!(f.surjective_at(&ThetaObject::zero(1)).unwrap());
        assert!(!f.injective_at(&ThetaObject::zero(1)).unwrap());
    }

    #[test]
    fn inclusion_of_a_point_is_a_cofibration() {
        let w = Window::new(2).unwrap();
        let two = discrete(1, 2);
        let one = crate::precat::subpresheaf("{0}", &two, |_, c| Ok(*c == Cell::Atom(0)));
        let inc = PrecatMap::inclusion(&one, &two).unwrap();
        assert!(inc.is_natural(&w).unwrap());
        assert!(inc.is_cofibration(&w).unwrap());
    }

    #[test]
    fn collapsing_objects_is_not_a_cofibration_for_positive_n() {
        let w = Window::new(2).unwrap();
        let f = PrecatMap::to_terminal(&discrete(1, 2), &terminal(1)).unwrap();
        assert!(!f.is_cofibration(&w).unwrap());
        // For sets the only level has maximal length.
        let f0 = PrecatMap::to_terminal(&discrete(0, 2), &terminal(0)).unwrap();
        assert!(f0.is_cofibration(&w).unwrap());
    }
}
