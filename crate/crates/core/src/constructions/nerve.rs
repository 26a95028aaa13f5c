use std::sync::Arc;

use crate::category::FiniteCategory;
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::precat::{Precat, Presheaf};
use crate::theta::{ThetaMorphism, ThetaObject};

/// The nerve of a finite category as an n-precat, constant in the
/// directions after the first.
pub fn nerve(c: &FiniteCategory, n: usize) -> Result<Precat> {
    if n < 1 {
        return Err(Error::InvalidArgument("a nerve needs ambient dimension at least 1".into()));
    }
    Ok(Precat::new(format!("N({})", c.name()), Nerve { cat: Arc::new(c.clone()), n }))
}

/// The object cell `x` of a nerve.
pub fn object(x: u32) -> Cell {
    Cell::chain(x, Vec::new())
}

/// In a category with exactly one arrow between any two objects, the chain
/// through the given vertices.
pub fn thin_chain(c: &FiniteCategory, vertices: &[u32]) -> Result<Cell> {
    let mut arrows = Vec::with_capacity(vertices.len().saturating_sub(1));
    for w in vertices.windows(2) {
        match c.hom(w[0], w[1]).as_slice() {
            [a] => arrows.push(*a),
            _ => return Err(Error::InvalidArgument(format!("{} is not thin between {} and {}", c.name(), w[0], w[1]))),
        }
    }
    Ok(Cell::chain(vertices[0], arrows))
}

struct Nerve {
    cat: Arc<FiniteCategory>,
    n: usize,
}

fn chain_parts(c: &Cell) -> Result<(u32, &[u32])> {
    match c {
        Cell::Chain { start, arrows } => Ok((*start, arrows)),
        other => Err(Error::Domain(format!("{other} is not a nerve cell"))),
    }
}

impl Nerve {
    fn vertices(&self, start: u32, arrows: &[u32]) -> Vec<u32> {
        let mut v = vec![start];
        v.extend(arrows.iter().map(|&a| self.cat.arrow(a).target));
        v
    }

    fn identities(&self, x: u32, q: u32) -> Cell {
        Cell::chain(x, vec![self.cat.identity(x); q as usize])
    }
}

impl Presheaf for Nerve {
    fn dim(&self) -> usize {
        self.n
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        let p = m.head() as usize;
        let mut out = Vec::new();
        let mut stack: Vec<(u32, Vec<u32>)> = (0..self.cat.object_count() as u32).map(|x| (x, Vec::new())).collect();
        while let Some((start, arrows)) = stack.pop() {
            if arrows.len() == p {
                out.push(Cell::chain(start, arrows));
                continue;
            }
            let at = arrows.last().map_or(start, |&a| self.cat.arrow(a).target);
            for a in self.cat.arrows_from(at) {
                let mut next = arrows.clone();
                next.push(a);
                stack.push((start, next));
            }
        }
        Ok(out)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let (start, arrows) = chain_parts(c)?;
        let vertices = self.vertices(start, arrows);
        let q = f.source().head();
        let first = match f.first() {
            None => return Ok(self.identities(vertices[0], q)),
            Some(first) => first,
        };
        if f.factors_through_zero() {
            return Ok(self.identities(vertices[first[0] as usize], q));
        }
        let mut out = Vec::with_capacity(q as usize);
        for j in 1..first.len() {
            let (lo, hi) = (first[j - 1] as usize, first[j] as usize);
            let mut acc = self.cat.identity(vertices[lo]);
            for a in &arrows[lo..hi] {
                acc = self.cat.compose(*a, acc);
            }
            out.push(acc);
        }
        Ok(Cell::chain(vertices[first[0] as usize], out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_functoriality;
    use crate::window::Window;

    fn obj(n: usize, e: &[i64]) -> ThetaObject {
        ThetaObject::new(n, e).unwrap()
    }

    #[test]
    fn counts() {
        let ni = nerve(&FiniteCategory::interval(), 1).unwrap();
        for p in 0..4 {
            assert_eq!(ni.count(&obj(1, &[p])).unwrap(), p as usize + 2);
        }
        let nb = nerve(&FiniteCategory::iso_interval(), 2).unwrap();
        assert_eq!(nb.count(&obj(2, &[1])).unwrap(), 4);
        assert_eq!(nb.count(&obj(2, &[1, 3])).unwrap(), 4);
    }

    #[test]
    fn functorial() {
        let w = Window::new(2).unwrap();
        for c in [FiniteCategory::interval(), FiniteCategory::kronecker(), FiniteCategory::z2()] {
            for n in 1..=2 {
                let r = check_functoriality(&nerve(&c, n).unwrap(), &w, n == 1).unwrap();
                assert!(r.passed(), "{:?}", r.violations.first());
            }
        }
    }

    #[test]
    fn degeneracy_inserts_identities() {
        let c = FiniteCategory::interval();
        let ni = nerve(&c, 1).unwrap();
        let m = obj(1, &[2]);
        let d = ni.degenerate(&object(1), &m).unwrap();
        assert_eq!(d, Cell::chain(1, vec![c.identity(1), c.identity(1)]));
    }
}
