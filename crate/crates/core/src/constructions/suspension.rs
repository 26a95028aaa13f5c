use super::cells::cell;
use super::nerve::{nerve, thin_chain};
use super::upsilon::{object, simplex_parts, upsilon, upsilon_map, Indexing};
use crate::category::FiniteCategory;
use crate::cell::Cell;
use crate::colimit::{pushout_named, Pushout};
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{point_of, terminal, Precat};
use crate::theta::ThetaObject;

/// A precat with a chosen object.
#[derive(Clone, Debug)]
pub struct Pointed {
    pub space: Precat,
    pub point: Cell,
}

impl Pointed {
    pub fn new(space: Precat, point: Cell) -> Result<Pointed> {
        if !space.objects()?.contains(&point) {
            return Err(Error::Domain(format!("{point} is not an object of {}", space.name())));
        }
        Ok(Pointed { space, point })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// `Σ(A, a)` with the pieces it was glued from.
#[derive(Clone, Debug)]
pub struct Suspension {
    pub object: Precat,
    /// The single object of `Σ(A, a)`.
    pub point: Cell,
    pub pushout: Pushout,
    /// `Υ(A)`, the left summand.
    pub upsilon: Precat,
}

impl Suspension {
    pub fn pointed(&self) -> Pointed {
        Pointed { space: self.object.clone(), point: self.point.clone() }
    }

    /// The canonical map `A -> Σ_{1/}(o, o)`: a cell `x` at `U` goes to the
    /// class of the arrow of `Υ(A)` with factor `x` at `(1, U)`.
    pub fn loop_map(&self, a: &Pointed) -> Result<PrecatMap> {
        let hom = self.object.hom(&self.point, &self.point)?;
        let left = self.pushout.left.clone();
        PrecatMap::new("loop", &a.space, &hom, move |u, x| {
            let m = ThetaObject::cons(1, u);
            left.apply_raw(&m, &Cell::simplex(vec![0, 1], vec![x.clone()]))
        })
    }
}

fn finish(po: Pushout, ups: Precat) -> Result<Suspension> {
    let point = po.left.apply_raw(&ThetaObject::zero(ups.dim()), &object(0))?;
    Ok(Suspension { object: po.object.clone(), point, pushout: po, upsilon: ups })
}

/// `Σ(A, a) = Υ(A) ∪^{Υ({a})} ∗`.
pub fn suspension(a: &Pointed) -> Result<Suspension> {
    let n = a.dim();
    let pt = point_of(&a.space, &a.point)?;
    let ups_pt = upsilon(std::slice::from_ref(&pt))?;
    let ups_a = upsilon(std::slice::from_ref(&a.space))?;
    let inc = upsilon_map(&[PrecatMap::inclusion(&pt, &a.space)?], &ups_pt, &ups_a, Indexing::Full)?;
    let bang = PrecatMap::to_terminal(&ups_pt, &terminal(n + 1))?;
    let name = format!("S({},{})", a.space.name(), a.point);
    let po = pushout_named(name, &inc, &bang)?;
    finish(po, ups_a)
}

/// The variant `Υ(A) ∪^{Υ({a})} N(Ī)`, gluing the base arrow to an
/// isomorphism instead of collapsing it.
pub fn suspension_iso_variant(a: &Pointed) -> Result<Suspension> {
    let n = a.dim();
    let pt = point_of(&a.space, &a.point)?;
    let ups_pt = upsilon(std::slice::from_ref(&pt))?;
    let ups_a = upsilon(std::slice::from_ref(&a.space))?;
    let inc = upsilon_map(&[PrecatMap::inclusion(&pt, &a.space)?], &ups_pt, &ups_a, Indexing::Full)?;
    let ibar = FiniteCategory::iso_interval();
    let target = nerve(&ibar, n + 1)?;
    let to_ibar = PrecatMap::new("Y{a}->N(Ibar)", &ups_pt, &target, move |_, c| {
        let (y, _) = simplex_parts(c)?;
        thin_chain(&ibar, y)
    })?;
    let name = format!("S~({},{})", a.space.name(), a.point);
    let po = pushout_named(name, &inc, &to_ibar)?;
    finish(po, ups_a)
}

/// `σᵏ = Fᵏ ∪^{∂Fᵏ} ∗` as a pointed n-precat, `k ≤ n`.
pub fn sigma(k: usize, n: usize) -> Result<Pointed> {
    if k > n {
        return Err(Error::InvalidArgument(format!("sigma{k} needs dimension at least {k}, got {n}")));
    }
    let c = cell(k, n)?;
    let bang = PrecatMap::to_terminal(&c.boundary, &terminal(n))?;
    let po = pushout_named(format!("sigma{k}"), &c.inclusion, &bang)?;
    let point = po.right.apply_raw(&ThetaObject::zero(n), &Cell::Unit)?;
    Ok(Pointed { space: po.object, point })
}
