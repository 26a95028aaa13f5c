//! Pushout-products and the decompositions of products of Υ's.

use std::collections::HashMap;

use serde::Serialize;

use super::upsilon::{face_map, object, simplex_parts, upsilon_map, upsilon_with, Face, Indexing};
use crate::cell::Cell;
use crate::colimit::{pushout, pushout_named, Pushout};
use crate::error::{Error, Result};
use crate::iso::iso_windowed;
use crate::map::PrecatMap;
use crate::precat::{product, terminal, Precat};
use crate::window::Window;

/// `f × g` between already built products.
pub fn product_map(f: &PrecatMap, g: &PrecatMap, domain: &Precat, codomain: &Precat) -> Result<PrecatMap> {
    let (f2, g2) = (f.clone(), g.clone());
    PrecatMap::new(format!("{}x{}", f.name(), g.name()), domain, codomain, move |m, c| {
        let (x, y) = c.as_pair();
        Ok(Cell::pair(f2.apply_raw(m, x)?, g2.apply_raw(m, y)?))
    })
}

/// `P × Q -> Q × P`.
pub fn swap(domain: &Precat, codomain: &Precat) -> Result<PrecatMap> {
    PrecatMap::new("swap", domain, codomain, |_, c| {
        let (x, y) = c.as_pair();
        Ok(Cell::pair(y.clone(), x.clone()))
    })
}

/// The pushout-product `f □ g` of `f: A -> B`, `g: C -> D`.
#[derive(Clone, Debug)]
pub struct PushoutProduct {
    /// `A×D ∪^{A×C} B×C`
    pub domain: Pushout,
    /// The induced map to `B×D`.
    pub map: PrecatMap,
}

pub fn pushout_product(f: &PrecatMap, g: &PrecatMap) -> Result<PushoutProduct> {
    let (a, b, c, d) = (f.domain(), f.codomain(), g.domain(), g.codomain());
    let (ac, ad, bc, bd) = (product(a, c)?, product(a, d)?, product(b, c)?, product(b, d)?);
    let (ida, idb) = (PrecatMap::identity(a), PrecatMap::identity(b));
    let (idc, idd) = (PrecatMap::identity(c), PrecatMap::identity(d));
    let po = pushout_named(
        format!("({} [] {})", f.name(), g.name()),
        &product_map(&ida, g, &ac, &ad)?,
        &product_map(f, &idc, &ac, &bc)?,
    )?;
    let map = po.induced(&product_map(f, &idd, &ad, &bd)?, &product_map(&idb, g, &bc, &bd)?, None)?;
    Ok(PushoutProduct { domain: po, map })
}

/// `P ∪^∗ Q`, identifying the object `p` of `P` with the object `q` of `Q`.
pub fn join(left: &Precat, p: &Cell, right: &Precat, q: &Cell) -> Result<Pushout> {
    let pt = terminal(left.dim());
    let (l, p2) = (left.clone(), p.clone());
    let (r, q2) = (right.clone(), q.clone());
    let a = PrecatMap::new("pick", &pt, left, move |m, _| l.degenerate(&p2, m))?;
    let b = PrecatMap::new("pick", &pt, right, move |m, _| r.degenerate(&q2, m))?;
    pushout_named(format!("({} v {})", left.name(), right.name()), &a, &b)
}

/// Two sides of a claimed isomorphism, with a canonical comparison map
/// between them (in either direction) when one is available.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Precat,
    pub rhs: Precat,
    pub comparison: Option<PrecatMap>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityVerdict {
    pub holds: bool,
    /// `"counts"`, `"comparison"` or `"search"`: the step that decided.
    pub method: &'static str,
    pub detail: String,
}

impl IdentityCheck {
    /// Compares level counts first, then checks the comparison map is a
    /// natural bijection, falling back to an isomorphism search when there
    /// is no comparison map.
    pub fn verify(&self, w: &Window) -> Result<IdentityVerdict> {
        let n = self.lhs.dim();
        for m in w.objects(n) {
            let (l, r) = (self.lhs.count(&m)?, self.rhs.count(&m)?);
            if l != r {
                return Ok(IdentityVerdict {
                    holds: false,
                    method: "counts",
                    detail: format!("level {m}: {l} vs {r} cells"),
                });
            }
        }
        if let Some(f) = &self.comparison {
            let natural = match f.naturality_violations(w) {
                Ok(v) => v.is_empty(),
                Err(e) => {
                    return Ok(IdentityVerdict { holds: false, method: "comparison", detail: e.to_string() });
                }
            };
            let bijective = natural && f.is_bijective_on(w)?;
            return Ok(IdentityVerdict {
                holds: bijective,
                method: "comparison",
                detail: format!("natural: {natural}, bijective: {bijective}"),
            });
        }
        let found = iso_windowed(&self.lhs, &self.rhs, w)?;
        Ok(IdentityVerdict {
            holds: found.is_some(),
            method: "search",
            detail: if found.is_some() { "isomorphism found".into() } else { "no isomorphism".into() },
        })
    }
}

fn ups(inputs: &[&Precat], ix: Indexing) -> Result<Precat> {
    upsilon_with(&inputs.iter().map(|p| (*p).clone()).collect::<Vec<_>>(), ix)
}

/// `Q(A,B,C,D) = Υ²(A,D) ∪^{Υ²(A,C)} Υ²(B,C)` for `f: A -> B`, `g: C -> D`.
pub fn q_construction(f: &PrecatMap, g: &PrecatMap) -> Result<Pushout> {
    let (a, b, c, d) = (f.domain(), f.codomain(), g.domain(), g.codomain());
    let ix = Indexing::Full;
    let (uac, uad, ubc) = (ups(&[a, c], ix)?, ups(&[a, d], ix)?, ups(&[b, c], ix)?);
    let left = upsilon_map(&[PrecatMap::identity(a), g.clone()], &uac, &uad, ix)?;
    let right = upsilon_map(&[f.clone(), PrecatMap::identity(c)], &uac, &ubc, ix)?;
    pushout_named(format!("Q({},{},{},{})", a.name(), b.name(), c.name(), d.name()), &left, &right)
}

/// `Υ(A)∨Υ(D) ∪^{Υ(A)∨Υ(C)} Υ(B)∨Υ(C)` against `Υ(B)∨Υ(D)`.
pub fn rem1(f: &PrecatMap, g: &PrecatMap) -> Result<IdentityCheck> {
    let ix = Indexing::Full;
    let (a, b, c, d) = (f.domain(), f.codomain(), g.domain(), g.codomain());
    let (ua, ub, uc, ud) = (ups(&[a], ix)?, ups(&[b], ix)?, ups(&[c], ix)?, ups(&[d], ix)?);
    let uf = upsilon_map(std::slice::from_ref(f), &ua, &ub, ix)?;
    let ug = upsilon_map(std::slice::from_ref(g), &uc, &ud, ix)?;
    let (o0, o1) = (object(0), object(1));
    let wad = join(&ua, &o1, &ud, &o0)?;
    let wac = join(&ua, &o1, &uc, &o0)?;
    let wbc = join(&ub, &o1, &uc, &o0)?;
    let wbd = join(&ub, &o1, &ud, &o0)?;
    let phi = wac.induced(&wad.left, &ug.then(&wad.right)?, None)?;
    let psi = wac.induced(&uf.then(&wbc.left)?, &wbc.right, None)?;
    let lhs = pushout(&phi, &psi)?;
    let to_bd_1 = wad.induced(&uf.then(&wbd.left)?, &wbd.right, None)?;
    let to_bd_2 = wbc.induced(&wbd.left, &ug.then(&wbd.right)?, None)?;
    let comparison = lhs.induced(&to_bd_1, &to_bd_2, None)?;
    Ok(IdentityCheck { name: "rem1".into(), lhs: lhs.object, rhs: wbd.object, comparison: Some(comparison) })
}

/// `Υ(B)×Υ(D)` against `Υ²(B,D) ∪^{Υ(B×D)} Υ²(D,B)`.
pub fn square(b: &Precat, d: &Precat, ix: Indexing) -> Result<IdentityCheck> {
    let (ub, ud) = (ups(&[b], ix)?, ups(&[d], ix)?);
    let lhs = product(&ub, &ud)?;
    let (bd, db) = (product(b, d)?, product(d, b)?);
    let (ubd, udb) = (ups(&[&bd], ix)?, ups(&[&db], ix)?);
    let (t1, t2) = (ups(&[b, d], ix)?, ups(&[d, b], ix)?);
    let leg1 = face_map(Face::Merge(1), &ubd, &t1, ix)?;
    let leg2 = upsilon_map(&[swap(&bd, &db)?], &ubd, &udb, ix)?.then(&face_map(Face::Merge(1), &udb, &t2, ix)?)?;
    let rhs = pushout(&leg1, &leg2)?;
    let comparison = rhs.induced(&triangle_to_product(&t1, &lhs, false, ix)?, &triangle_to_product(&t2, &lhs, true, ix)?, None)?;
    Ok(IdentityCheck { name: "square".into(), lhs, rhs: rhs.object, comparison: Some(comparison) })
}

/// `Υ²(X, Y) -> Υ(B)×Υ(D)` sending vertex `w` to `([w≥1], [w≥2])`, or with
/// the coordinates swapped when `flip`.
fn triangle_to_product(t: &Precat, prod: &Precat, flip: bool, ix: Indexing) -> Result<PrecatMap> {
    PrecatMap::new("tri", t, prod, move |_, c| {
        let (w, factors) = simplex_parts(c)?;
        let by_index: HashMap<u32, &Cell> = ix.factor_indices(w).into_iter().zip(factors).collect();
        let coord = |step: u32| -> Result<Cell> {
            let y: Vec<u32> = w.iter().map(|&v| u32::from(v >= step)).collect();
            if y[0] == *y.last().expect("vertices") {
                return Ok(Cell::simplex(y, Vec::new()));
            }
            let x = by_index
                .get(&step)
                .ok_or_else(|| Error::Construction(format!("no factor E_{step} on {c}")))?;
            Ok(Cell::simplex(y, vec![(*x).clone()]))
        };
        let (first, second) = (coord(1)?, coord(2)?);
        Ok(if flip { Cell::pair(second, first) } else { Cell::pair(first, second) })
    })
}

/// `Υ(A)×Υ(D) ∪^{Υ(A)×Υ(C)} Υ(B)×Υ(C)` against
/// `Q(A,B,C,D) ∪^{Υ(W)} Q(C,D,A,B)` with `W = A×D ∪^{A×C} B×C`.
pub fn rem2(f: &PrecatMap, g: &PrecatMap) -> Result<IdentityCheck> {
    let ix = Indexing::Full;
    let (a, b, c, d) = (f.domain(), f.codomain(), g.domain(), g.codomain());
    let (ua, ub, uc, ud) = (ups(&[a], ix)?, ups(&[b], ix)?, ups(&[c], ix)?, ups(&[d], ix)?);
    let uf = upsilon_map(std::slice::from_ref(f), &ua, &ub, ix)?;
    let ug = upsilon_map(std::slice::from_ref(g), &uc, &ud, ix)?;
    let (uac, uad, ubc) = (product(&ua, &uc)?, product(&ua, &ud)?, product(&ub, &uc)?);
    let lhs = pushout(
        &product_map(&PrecatMap::identity(&ua), &ug, &uac, &uad)?,
        &product_map(&uf, &PrecatMap::identity(&uc), &uac, &ubc)?,
    )?;

    let q1 = q_construction(f, g)?;
    let q2 = q_construction(g, f)?;
    let w = pushout_product(f, g)?.domain;
    let y = ups(&[&w.object], ix)?;
    let (l1, r1) = (q1.left.clone(), q1.right.clone());
    let to_q1 = PrecatMap::new("Y->Q1", &y, &q1.object, move |m, cell| {
        let (v, factors) = simplex_parts(cell)?;
        let v2: Vec<u32> = v.iter().map(|x| 2 * x).collect();
        match factors.first() {
            None => l1.apply_raw(m, &Cell::simplex(v2, Vec::new())),
            Some(Cell::Left(ad)) => {
                let (x, z) = ad.as_pair();
                l1.apply_raw(m, &Cell::simplex(v2, vec![x.clone(), z.clone()]))
            }
            Some(Cell::Right(bc)) => {
                let (x, z) = bc.as_pair();
                r1.apply_raw(m, &Cell::simplex(v2, vec![x.clone(), z.clone()]))
            }
            Some(other) => Err(Error::Domain(format!("{other} is not a cell of the pushout-product"))),
        }
    })?;
    let (l2, r2) = (q2.left.clone(), q2.right.clone());
    let to_q2 = PrecatMap::new("Y->Q2", &y, &q2.object, move |m, cell| {
        let (v, factors) = simplex_parts(cell)?;
        let v2: Vec<u32> = v.iter().map(|x| 2 * x).collect();
        match factors.first() {
            None => l2.apply_raw(m, &Cell::simplex(v2, Vec::new())),
            Some(Cell::Left(ad)) => {
                let (x, z) = ad.as_pair();
                r2.apply_raw(m, &Cell::simplex(v2, vec![z.clone(), x.clone()]))
            }
            Some(Cell::Right(bc)) => {
                let (x, z) = bc.as_pair();
                l2.apply_raw(m, &Cell::simplex(v2, vec![z.clone(), x.clone()]))
            }
            Some(other) => Err(Error::Domain(format!("{other} is not a cell of the pushout-product"))),
        }
    })?;
    let rhs = pushout(&to_q1, &to_q2)?;
    Ok(IdentityCheck { name: "rem2".into(), lhs: lhs.object, rhs: rhs.object, comparison: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::ThetaObject;
    use crate::check::check_functoriality;
    use crate::precat::{discrete, empty, terminal};

    fn w2() -> Window {
        Window::new(2).unwrap()
    }

    fn pt_in_two() -> PrecatMap {
        PrecatMap::new("0", &terminal(1), &discrete(1, 2), |_, _| Ok(Cell::Atom(0))).unwrap()
    }

    #[test]
    fn pushout_product_of_boundary_inclusions() {
        let f = pt_in_two();
        let g = PrecatMap::from_empty(&empty(1), &terminal(1)).unwrap();
        let pp = pushout_product(&f, &g).unwrap();
        assert!(pp.map.is_natural(&w2()).unwrap());
        assert_eq!(pp.domain.object.count(&ThetaObject::zero(1)).unwrap(), 1);
    }

    #[test]
    fn square_holds_and_legacy_indexing_breaks_it() {
        let (b, d) = (discrete(1, 2), terminal(1));
        let ok = square(&b, &d, Indexing::Full).unwrap();
        let m = ThetaObject::new(2, &[1]).unwrap();
        assert_eq!(ok.lhs.count(&m).unwrap(), 12);
        assert!(ok.verify(&w2()).unwrap().holds);
        let bad = square(&b, &d, Indexing::StepEndpoints).unwrap();
        let v = bad.verify(&w2()).unwrap();
        assert!(!v.holds);
        assert_eq!(v.method, "counts");
    }

    #[test]
    fn rem1_and_rem2_for_a_point_in_two_points() {
        let f = pt_in_two();
        let g = PrecatMap::identity(&terminal(1));
        let r1 = rem1(&f, &g).unwrap();
        assert!(r1.verify(&w2()).unwrap().holds);
        let r2 = rem2(&f, &g).unwrap();
        assert!(check_functoriality(&r2.rhs, &w2(), false).unwrap().passed());
        assert!(r2.verify(&w2()).unwrap().holds);
    }
}
