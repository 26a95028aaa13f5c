use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::suspension::Pointed;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{subpresheaf, Precat};
use crate::theta::{enumerate_morphisms, ThetaMorphism, ThetaObject};
use crate::window::Window;

type Probes = RwLock<HashMap<ThetaObject, Arc<Vec<ThetaMorphism>>>>;

/// The Whitehead sub-presheaf `A^{>k}`: cells all of whose restrictions to
/// objects of length at most `k` are degenerate at the base point.
///
/// Only test objects with entries up to the largest entry of the level are
/// used; an object `U` with larger entries maps into the level only through
/// maps factoring over such a test object, so nothing is lost.
pub fn whitehead(a: &Pointed, k: usize) -> Result<(Precat, PrecatMap)> {
    let n = a.dim();
    if k > n {
        return Err(Error::InvalidArgument(format!("Whitehead level {k} exceeds dimension {n}")));
    }
    let probes: Arc<Probes> = Arc::new(RwLock::new(HashMap::new()));
    let (space, point) = (a.space.clone(), a.point.clone());
    let sub = subpresheaf(format!("Wh>{k}({})", a.space.name()), &a.space, move |m, c| {
        for u in probe_morphisms(&probes, m, k).iter() {
            if space.act_raw(u, c)? != space.degenerate(&point, u.source())? {
                return Ok(false);
            }
        }
        Ok(true)
    });
    let inc = PrecatMap::inclusion(&sub, &a.space)?;
    Ok((sub, inc))
}

fn probe_morphisms(cache: &Probes, m: &ThetaObject, k: usize) -> Arc<Vec<ThetaMorphism>> {
    if let Some(v) = cache.read().expect("lock poisoned").get(m) {
        return v.clone();
    }
    let w = Window { bound: m.max_entry().max(1), length: Some(k) };
    let v: Vec<ThetaMorphism> = w.objects(m.n()).iter().flat_map(|u| enumerate_morphisms(u, m)).collect();
    let v = Arc::new(v);
    cache.write().expect("lock poisoned").insert(m.clone(), v.clone());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FiniteCategory;
    use crate::check::check_functoriality;
    use crate::constructions::nerve::{nerve, object};

    #[test]
    fn whitehead_of_a_nerve() {
        let w = Window::new(2).unwrap();
        let a = Pointed::new(nerve(&FiniteCategory::interval(), 1).unwrap(), object(0)).unwrap();
        let (w0, inc) = whitehead(&a, 0).unwrap();
        // only degeneracies of object 0 survive
        for m in w.objects(1) {
            assert_eq!(w0.count(&m).unwrap(), 1);
        }
        assert!(inc.is_natural(&w).unwrap());
        assert!(check_functoriality(&w0, &w, false).unwrap().passed());
        let (w1, _) = whitehead(&a, 1).unwrap();
        assert_eq!(w1.count(&ThetaObject::new(1, &[2]).unwrap()).unwrap(), 1);
        assert!(whitehead(&a, 2).is_err());
    }
}
