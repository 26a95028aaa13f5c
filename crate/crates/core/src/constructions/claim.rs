//! The objects behind the cylinder decomposition for a monomorphism
//! `i: E -> F`.

use super::nerve::{nerve, object};
use crate::category::FiniteCategory;
use crate::cell::Cell;
use crate::colimit::{pushout, pushout_named, Pushout};
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{discrete, product, terminal, Precat};
use crate::window::Window;

use super::products::{product_map, IdentityCheck};

#[derive(Clone, Debug)]
pub struct ClaimObjects {
    /// `F ∪^E F`.
    pub doubled: Pushout,
    /// `F ∪^E F -> F`.
    pub fold: PrecatMap,
    /// `E×Ī ∪^{E×{0,1}} F×{0,1}` against
    /// `(F×{0} ∪^{E×{0}} E×Ī) ∪^{E×Ī} (F×{1} ∪^{E×{1}} E×Ī)`.
    pub decomposition: IdentityCheck,
    /// The three pieces of the right-hand side collapse onto `F`, `E`, `F`.
    pub collapse_first: PrecatMap,
    pub collapse_middle: PrecatMap,
    pub collapse_last: PrecatMap,
    /// The right-hand side mapped onto `F ∪^E F`.
    pub to_doubled: PrecatMap,
    /// The left-hand side mapped into `F×Ī`.
    pub to_cylinder: PrecatMap,
}

fn first_projection(p: &Precat, to: &Precat) -> Result<PrecatMap> {
    PrecatMap::new("pr1", p, to, |_, c| Ok(c.as_pair().0.clone()))
}

pub fn claim_objects(i: &PrecatMap) -> Result<ClaimObjects> {
    let (e, f) = (i.domain(), i.codomain());
    let n = e.dim();
    if n < 1 {
        return Err(Error::InvalidArgument("the cylinder needs dimension at least 1".into()));
    }
    let doubled = pushout_named(format!("({} u^{} {})", f.name(), e.name(), f.name()), i, i)?;
    let id_f = PrecatMap::identity(f);
    let fold = doubled.induced(&id_f, &id_f, None)?.renamed("fold");

    let ibar = nerve(&FiniteCategory::iso_interval(), n)?;
    let (two, pt) = (discrete(n, 2), terminal(n));
    let ib = ibar.clone();
    let ends = PrecatMap::new("{0,1}->Ibar", &two, &ibar, move |m, c| match c {
        Cell::Atom(v) => ib.degenerate(&object(*v), m),
        other => Err(Error::Domain(format!("{other} is not an endpoint"))),
    })?;
    let end = |v: u32| -> Result<PrecatMap> {
        let ib = ibar.clone();
        PrecatMap::new(format!("{{{v}}}"), &pt, &ibar, move |m, _| ib.degenerate(&object(v), m))
    };
    let (e_i, e_2, f_2) = (product(e, &ibar)?, product(e, &two)?, product(f, &two)?);
    let (id_e, id_2) = (PrecatMap::identity(e), PrecatMap::identity(&two));
    let lhs = pushout(&product_map(&id_e, &ends, &e_2, &e_i)?, &product_map(i, &id_2, &e_2, &f_2)?)?;

    let (e_pt, f_pt) = (product(e, &pt)?, product(f, &pt)?);
    let id_pt = PrecatMap::identity(&pt);
    let side = |v: u32| -> Result<Pushout> {
        pushout_named(
            format!("(F{v} u E x Ibar)"),
            &product_map(i, &id_pt, &e_pt, &f_pt)?,
            &product_map(&id_e, &end(v)?, &e_pt, &e_i)?,
        )
    };
    let (p0, p1) = (side(0)?, side(1)?);
    let rhs = pushout(&p0.right, &p1.right)?;

    let (rl, rr) = (p0.left.then(&rhs.left)?, p1.left.then(&rhs.right)?);
    let f_part = PrecatMap::new("Fx{0,1}->rhs", &f_2, &rhs.object, move |m, c| {
        let (x, v) = c.as_pair();
        let at = Cell::pair(x.clone(), Cell::Unit);
        match v {
            Cell::Atom(0) => rl.apply_raw(m, &at),
            Cell::Atom(1) => rr.apply_raw(m, &at),
            other => Err(Error::Domain(format!("{other} is not an endpoint"))),
        }
    })?;
    let comparison = lhs.induced(&p0.right.then(&rhs.left)?, &f_part, None)?;

    let e_to_f = first_projection(&e_i, e)?.then(i)?;
    let collapse_first = p0.induced(&first_projection(&f_pt, f)?, &e_to_f, None)?.renamed("collapse0");
    let collapse_last = p1.induced(&first_projection(&f_pt, f)?, &e_to_f, None)?.renamed("collapse1");
    let collapse_middle = first_projection(&e_i, e)?.renamed("collapseE");
    let to_doubled =
        rhs.induced(&collapse_first.then(&doubled.left)?, &collapse_last.then(&doubled.right)?, None)?.renamed("to_doubled");
    let f_i = product(f, &ibar)?;
    let to_cylinder = lhs
        .induced(
            &product_map(i, &PrecatMap::identity(&ibar), &e_i, &f_i)?,
            &product_map(&id_f, &ends, &f_2, &f_i)?,
            None,
        )?
        .renamed("to_cylinder");

    Ok(ClaimObjects {
        doubled,
        fold,
        decomposition: IdentityCheck {
            name: "cylinder".into(),
            lhs: lhs.object,
            rhs: rhs.object,
            comparison: Some(comparison),
        },
        collapse_first,
        collapse_middle,
        collapse_last,
        to_doubled,
        to_cylinder,
    })
}

/// Windowed verdict on the claim objects: the decomposition holds, every
/// structure map is natural, and the square
/// `lhs -> F×Ī -> F` = `lhs -> rhs -> F ∪^E F -> F` commutes.
pub fn prove_claim(i: &PrecatMap, w: &Window) -> Result<(bool, String)> {
    let c = claim_objects(i)?;
    let verdict = c.decomposition.verify(w)?;
    if !verdict.holds {
        return Ok((false, format!("decomposition: {}", verdict.detail)));
    }
    for (name, m) in [
        ("fold", &c.fold),
        ("collapse0", &c.collapse_first),
        ("collapseE", &c.collapse_middle),
        ("collapse1", &c.collapse_last),
        ("to_doubled", &c.to_doubled),
        ("to_cylinder", &c.to_cylinder),
    ] {
        if !m.is_natural(w)? {
            return Ok((false, format!("{name} is not natural")));
        }
    }
    let comparison = c.decomposition.comparison.as_ref().expect("comparison is built");
    let fi = c.to_cylinder.codomain().clone();
    let down = c.to_cylinder.then(&first_projection(&fi, i.codomain())?)?;
    let around = comparison.then(&c.to_doubled)?.then(&c.fold)?;
    for m in w.objects(i.domain().dim()) {
        for x in c.decomposition.lhs.evaluate(&m)?.cells() {
            if down.apply_raw(&m, x)? != around.apply_raw(&m, x)? {
                return Ok((false, format!("square fails at {m} on {x}")));
            }
        }
    }
    Ok((true, "decomposition, structure maps and square verified".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::ThetaObject;

    #[test]
    fn two_points_in_three() {
        let i = PrecatMap::new("i", &discrete(1, 2), &discrete(1, 3), |_, c| Ok(c.clone())).unwrap();
        let w = Window::new(2).unwrap();
        let (ok, detail) = prove_claim(&i, &w).unwrap();
        assert!(ok, "{detail}");
        let c = claim_objects(&i).unwrap();
        assert_eq!(c.doubled.object.count(&ThetaObject::zero(1)).unwrap(), 4);
    }
}
