use std::sync::Arc;

use super::suspension::{Pointed, Suspension};
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{Precat, Presheaf};
use crate::theta::{ThetaMorphism, ThetaObject};

/// The wedge model `X(A, a)` of the suspension: at `(p, U)` the base cell
/// plus `p` copies of `A(U) \ {d*(a)}`.
pub fn delooping(a: &Pointed) -> Precat {
    Precat::new(format!("X({},{})", a.space.name(), a.point), Delooping { a: Arc::new(a.clone()) })
}

struct Delooping {
    a: Arc<Pointed>,
}

impl Presheaf for Delooping {
    fn dim(&self) -> usize {
        self.a.dim() + 1
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        let mut out = vec![Cell::Unit];
        if m.is_empty() {
            return Ok(out);
        }
        let tail = m.tail();
        let base = self.a.space.degenerate(&self.a.point, &tail)?;
        let level = self.a.space.evaluate(&tail)?;
        for i in 1..=m.head() {
            out.extend(level.cells().iter().filter(|x| **x != base).map(|x| Cell::Wedge(i, Arc::new(x.clone()))));
        }
        Ok(out)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let (i, x) = match c {
            Cell::Unit => return Ok(Cell::Unit),
            Cell::Wedge(i, x) => (*i, x),
            other => return Err(Error::Domain(format!("{other} is not a cell of the delooping"))),
        };
        if f.factors_through_zero() {
            return Ok(Cell::Unit);
        }
        let first = f.first().expect("nonconstant first component");
        let Some(j) = (1..first.len()).find(|&j| first[j - 1] < i && i <= first[j]) else {
            return Ok(Cell::Unit);
        };
        let rest = f.rest();
        let y = self.a.space.act_raw(&rest, x)?;
        if y == self.a.space.degenerate(&self.a.point, rest.source())? {
            Ok(Cell::Unit)
        } else {
            Ok(Cell::Wedge(j as u32, Arc::new(y)))
        }
    }
}

/// The comparison `X(A, a) -> Σ(A, a)`: the `i`-th wedge copy goes to the
/// simplex of `Υ(A)` stepping from 0 to 1 between vertices `i−1` and `i`.
pub fn delooping_to_suspension(x: &Precat, s: &Suspension) -> Result<PrecatMap> {
    let (left, sigma, point) = (s.pushout.left.clone(), s.object.clone(), s.point.clone());
    PrecatMap::new("X->S", x, &s.object, move |m, c| match c {
        Cell::Unit => sigma.degenerate(&point, m),
        Cell::Wedge(i, a) => {
            let p = m.head();
            let mut y = vec![0; *i as usize];
            y.resize(p as usize + 1, 1);
            left.apply_raw(m, &Cell::simplex(y, vec![(**a).clone()]))
        }
        other => Err(Error::Domain(format!("{other} is not a cell of the delooping"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_functoriality;
    use crate::constructions::suspension::suspension;
    use crate::precat::discrete;
    use crate::window::Window;

    #[test]
    fn wedge_counts() {
        let a = Pointed::new(discrete(1, 2), Cell::Atom(0)).unwrap();
        let x = delooping(&a);
        for p in 0..4 {
            assert_eq!(x.count(&ThetaObject::new(2, &[p]).unwrap()).unwrap(), p as usize + 1);
        }
    }

    #[test]
    fn comparison_is_a_natural_bijection() {
        let w = Window::new(2).unwrap();
        let a = Pointed::new(discrete(1, 2), Cell::Atom(0)).unwrap();
        let x = delooping(&a);
        assert!(check_functoriality(&x, &w, true).unwrap().passed());
        let s = suspension(&a).unwrap();
        let f = delooping_to_suspension(&x, &s).unwrap();
        assert!(f.is_natural(&w).unwrap());
        assert!(f.is_bijective_on(&w).unwrap());
    }
}
