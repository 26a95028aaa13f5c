//! Iterated monoidal delooping `cᵏ(M)` of a monoid object in n-precats.

use std::sync::Arc;

use super::upsilon::for_each_tuple;
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{from_fns, product, terminal, Precat, Presheaf};
use crate::theta::{ThetaMorphism, ThetaObject};
use crate::window::Window;

/// A monoid `(M, mult, unit)` in n-precats.
#[derive(Clone, Debug)]
pub struct MonoidObject {
    pub carrier: Precat,
    /// `M × M -> M`
    pub mult: PrecatMap,
    /// `∗ -> M`
    pub unit: PrecatMap,
    pub commutative: bool,
}

impl MonoidObject {
    pub fn new(carrier: Precat, mult: PrecatMap, unit: PrecatMap, commutative: bool) -> MonoidObject {
        MonoidObject { carrier, mult, unit, commutative }
    }

    /// A finite monoid as a constant n-precat; element 0 is the unit.
    pub fn discrete(name: &str, n: usize, table: Vec<Vec<u32>>) -> Result<MonoidObject> {
        let k = table.len() as u32;
        if k == 0 || table.iter().any(|r| r.len() != k as usize || r.iter().any(|&x| x >= k)) {
            return Err(Error::InvalidArgument("multiplication table must be square over 0..k".into()));
        }
        let carrier = from_fns(name, n, move |_| Ok((0..k).map(Cell::Atom).collect()), |_, c| Ok(c.clone()));
        let mm = product(&carrier, &carrier)?;
        let commutative = (0..k as usize).all(|a| (0..k as usize).all(|b| table[a][b] == table[b][a]));
        let t = Arc::new(table);
        let mult = PrecatMap::new("mult", &mm, &carrier, move |_, c| match c.as_pair() {
            (Cell::Atom(a), Cell::Atom(b)) => Ok(Cell::Atom(t[*a as usize][*b as usize])),
            _ => Err(Error::Domain(format!("{c} is not a pair of elements"))),
        })?;
        let unit = PrecatMap::new("unit", &terminal(n), &carrier, |_, _| Ok(Cell::Atom(0)))?;
        let m = MonoidObject { carrier, mult, unit, commutative };
        Ok(m)
    }

    /// ℤ/2 as a constant n-precat.
    pub fn z2(n: usize) -> MonoidObject {
        MonoidObject::discrete("Z2", n, vec![vec![0, 1], vec![1, 0]]).expect("valid table")
    }

    /// Associativity, unit laws and (when claimed) commutativity on a window.
    pub fn check_laws(&self, w: &Window) -> Result<bool> {
        for m in w.objects(self.carrier.dim()) {
            let e = self.unit.apply_raw(&m, &Cell::Unit)?;
            let level = self.carrier.evaluate(&m)?;
            let mul = |a: &Cell, b: &Cell| self.mult.apply_raw(&m, &Cell::pair(a.clone(), b.clone()));
            for a in level.cells() {
                if mul(&e, a)? != *a || mul(a, &e)? != *a {
                    return Ok(false);
                }
                for b in level.cells() {
                    if self.commutative && mul(a, b)? != mul(b, a)? {
                        return Ok(false);
                    }
                    for c in level.cells() {
                        if mul(&mul(a, b)?, c)? != mul(a, &mul(b, c)?)? {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// `cᵏ(M)`: an (n+k)-precat with a single cell on every level of length
/// below `k`, and grids of cells of `M` above.
pub fn ck_monoidal(mon: &MonoidObject, k: usize) -> Result<Precat> {
    if k == 0 {
        return Err(Error::InvalidArgument("the delooping degree must be at least 1".into()));
    }
    if k >= 2 && !mon.commutative {
        return Err(Error::InvalidArgument(format!("c{k} needs a commutative monoid")));
    }
    Ok(Precat::new(format!("c{k}({})", mon.carrier.name()), Ck { mon: mon.clone(), k }))
}

struct Ck {
    mon: MonoidObject,
    k: usize,
}

impl Ck {
    /// Splits `(p₁, …, p_k, tail)`.
    fn split(&self, m: &ThetaObject) -> (Vec<u32>, ThetaObject) {
        let mut tail = m.clone();
        let mut dims = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            dims.push(tail.head());
            tail = tail.tail();
        }
        (dims, tail)
    }

    fn unit_grid(&self, m: &ThetaObject) -> Result<Cell> {
        let (dims, tail) = self.split(m);
        let e = self.mon.unit.apply_raw(&tail, &Cell::Unit)?;
        let size: u32 = dims.iter().product();
        Ok(Cell::Grid(vec![e; size as usize].into()))
    }
}

fn row_major(index: &[u32], dims: &[u32]) -> usize {
    index.iter().zip(dims).fold(0usize, |acc, (&i, &d)| acc * d as usize + i as usize)
}

impl Presheaf for Ck {
    fn dim(&self) -> usize {
        self.mon.carrier.dim() + self.k
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        if m.len() < self.k {
            return Ok(vec![Cell::Unit]);
        }
        let (dims, tail) = self.split(m);
        let size: u32 = dims.iter().product();
        let level = self.mon.carrier.evaluate(&tail)?;
        let choices: Vec<&[Cell]> = vec![level.cells(); size as usize];
        let mut out = Vec::new();
        for_each_tuple(&choices, |t| out.push(Cell::Grid(t.to_vec().into())));
        Ok(out)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        if f.source().len() < self.k {
            return Ok(Cell::Unit);
        }
        let x = match c {
            Cell::Unit => return self.unit_grid(f.source()),
            Cell::Grid(x) => x,
            other => return Err(Error::Domain(format!("{other} is not a cell of c{}", self.k))),
        };
        let comps = f.components();
        if comps.len() < self.k || comps[..self.k].iter().any(|c| c.iter().all(|&v| v == c[0])) {
            return self.unit_grid(f.source());
        }
        let mut rest = f.clone();
        for _ in 0..self.k {
            rest = rest.rest();
        }
        let (tdims, ttail) = self.split(f.target());
        let (sdims, _) = self.split(f.source());
        let size: u32 = sdims.iter().product();
        let mut out = Vec::with_capacity(size as usize);
        let mut j = vec![0u32; self.k];
        for _ in 0..size {
            // the box ∏ (f_d(j_d), f_d(j_d + 1)] of target entries
            let ranges: Vec<(u32, u32)> = (0..self.k).map(|d| (comps[d][j[d] as usize], comps[d][j[d] as usize + 1])).collect();
            let mut acc = self.mon.unit.apply_raw(&ttail, &Cell::Unit)?;
            let mut idx: Vec<u32> = ranges.iter().map(|r| r.0).collect();
            if ranges.iter().all(|r| r.0 < r.1) {
                loop {
                    acc = self.mon.mult.apply_raw(&ttail, &Cell::pair(acc, x[row_major(&idx, &tdims)].clone()))?;
                    let mut d = self.k;
                    let mut done = true;
                    while d > 0 {
                        d -= 1;
                        idx[d] += 1;
                        if idx[d] < ranges[d].1 {
                            done = false;
                            break;
                        }
                        idx[d] = ranges[d].0;
                    }
                    if done {
                        break;
                    }
                }
            }
            out.push(self.mon.carrier.act_raw(&rest, &acc)?);
            let mut d = self.k;
            while d > 0 {
                d -= 1;
                j[d] += 1;
                if j[d] < sdims[d] {
                    break;
                }
                j[d] = 0;
            }
        }
        Ok(Cell::Grid(out.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_functoriality;

    #[test]
    fn c1_of_z2_counts() {
        let c = ck_monoidal(&MonoidObject::z2(0), 1).unwrap();
        for p in 0..4 {
            assert_eq!(c.count(&ThetaObject::new(1, &[p]).unwrap()).unwrap(), 1 << p);
        }
    }

    #[test]
    fn functorial() {
        let w = Window::new(2).unwrap();
        for k in 1..=2 {
            let c = ck_monoidal(&MonoidObject::z2(0), k).unwrap();
            let r = check_functoriality(&c, &w, false).unwrap();
            assert!(r.passed(), "k={k}: {:?}", r.violations.first());
        }
        let c = ck_monoidal(&MonoidObject::z2(1), 1).unwrap();
        assert!(check_functoriality(&c, &w, false).unwrap().passed());
    }

    #[test]
    fn noncommutative_needs_k_one() {
        // the monoid {1, a, b} with xy = y for x, y ≠ 1
        let m = MonoidObject::discrete("R", 0, vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap();
        assert!(!m.commutative);
        assert!(m.check_laws(&Window::new(1).unwrap()).unwrap());
        assert!(ck_monoidal(&m, 2).is_err());
        let c = ck_monoidal(&m, 1).unwrap();
        assert!(check_functoriality(&c, &Window::new(2).unwrap(), false).unwrap().passed());
    }
}
