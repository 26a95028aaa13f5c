use std::collections::HashMap;

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::precat::{Precat, Presheaf};
use crate::theta::{monotone_maps, ThetaMorphism, ThetaObject};

/// Which factors a simplex of Υᵏ carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Indexing {
    /// One factor `E_j` for every `j` with `y₀ < j ≤ y_p`.
    #[default]
    Full,
    /// One factor per distinct vertex value above `y₀` only. This drops the
    /// factors a step jumps over, and is kept as a negative control.
    StepEndpoints,
}

impl Indexing {
    /// The (1-based) indices `j` of the factors carried by a simplex with
    /// these vertices.
    pub fn factor_indices(self, vertices: &[u32]) -> Vec<u32> {
        let (lo, hi) = (vertices[0], *vertices.last().expect("nonempty vertex list"));
        match self {
            Indexing::Full => (lo + 1..=hi).collect(),
            Indexing::StepEndpoints => {
                let mut v: Vec<u32> = vertices.iter().copied().filter(|&y| y > lo).collect();
                v.dedup();
                v
            }
        }
    }
}

/// Υᵏ(E₁, …, E_k): an (n+1)-precat with objects `0, …, k`.
pub fn upsilon(inputs: &[Precat]) -> Result<Precat> {
    upsilon_with(inputs, Indexing::Full)
}

pub fn upsilon_with(inputs: &[Precat], indexing: Indexing) -> Result<Precat> {
    let Some(first) = inputs.first() else {
        return Err(Error::InvalidArgument("Υ needs at least one input".into()));
    };
    let n = first.dim();
    if inputs.iter().any(|e| e.dim() != n) {
        return Err(Error::InvalidArgument("Υ inputs must share one dimension".into()));
    }
    let names: Vec<&str> = inputs.iter().map(|e| e.name()).collect();
    let tag = match indexing {
        Indexing::Full => "",
        Indexing::StepEndpoints => "'",
    };
    let name = if inputs.len() == 1 {
        format!("Y{tag}({})", names[0])
    } else {
        format!("Y{}{tag}({})", inputs.len(), names.join(","))
    };
    Ok(Precat::new(name, Upsilon { inputs: inputs.to_vec(), n, indexing }))
}

/// The simplex `(y; factors)` as seen by its factor index.
pub fn simplex_parts(c: &Cell) -> Result<(&[u32], &[Cell])> {
    match c {
        Cell::Simplex { vertices, factors } => Ok((vertices, factors)),
        other => Err(Error::Domain(format!("{other} is not a cell of Υ"))),
    }
}

/// The object `i` of Υᵏ.
pub fn object(i: u32) -> Cell {
    Cell::simplex(vec![i], Vec::new())
}

struct Upsilon {
    inputs: Vec<Precat>,
    n: usize,
    indexing: Indexing,
}

impl Presheaf for Upsilon {
    fn dim(&self) -> usize {
        self.n + 1
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        let k = self.inputs.len() as u32;
        if m.is_empty() {
            return Ok((0..=k).map(object).collect());
        }
        let tail = m.tail();
        let levels: Vec<_> = self.inputs.iter().map(|e| e.evaluate(&tail)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for y in monotone_maps(m.head(), k) {
            let idx = self.indexing.factor_indices(&y);
            let choices: Vec<&[Cell]> = idx.iter().map(|&j| levels[j as usize - 1].cells()).collect();
            for_each_tuple(&choices, |t| out.push(Cell::simplex(y.clone(), t.to_vec())));
        }
        Ok(out)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let (y, factors) = simplex_parts(c)?;
        let q = f.source().head();
        let first = match f.first() {
            None => return Ok(Cell::simplex(vec![y[0]; q as usize + 1], Vec::new())),
            Some(first) => first,
        };
        if f.factors_through_zero() {
            return Ok(Cell::simplex(vec![y[first[0] as usize]; q as usize + 1], Vec::new()));
        }
        let z: Vec<u32> = first.iter().map(|&i| y[i as usize]).collect();
        let old = self.indexing.factor_indices(y);
        let rest = f.rest();
        let mut out = Vec::new();
        for j in self.indexing.factor_indices(&z) {
            let pos = old
                .iter()
                .position(|&o| o == j)
                .ok_or_else(|| Error::Construction(format!("factor E_{j} missing from {c}")))?;
            out.push(self.inputs[j as usize - 1].act_raw(&rest, &factors[pos])?);
        }
        Ok(Cell::simplex(z, out))
    }
}

/// Calls `f` on every tuple of the cartesian product, in lexicographic order.
pub(crate) fn for_each_tuple(choices: &[&[Cell]], mut f: impl FnMut(&[Cell])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; choices.len()];
    let mut cur: Vec<Cell> = choices.iter().map(|c| c[0].clone()).collect();
    loop {
        f(&cur);
        let mut d = choices.len();
        loop {
            if d == 0 {
                return;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < choices[d].len() {
                cur[d] = choices[d][idx[d]].clone();
                break;
            }
            idx[d] = 0;
            cur[d] = choices[d][0].clone();
        }
    }
}

/// Υᵏ(f₁, …, f_k) between already built Υ's, applied factorwise.
pub fn upsilon_map(maps: &[PrecatMap], domain: &Precat, codomain: &Precat, indexing: Indexing) -> Result<PrecatMap> {
    let maps: Vec<PrecatMap> = maps.to_vec();
    let name = format!("Y({})", maps.iter().map(|f| f.name()).collect::<Vec<_>>().join(","));
    PrecatMap::new(name, domain, codomain, move |m, c| {
        let (y, factors) = simplex_parts(c)?;
        if factors.is_empty() {
            return Ok(c.clone());
        }
        let tail = m.tail();
        let out = indexing
            .factor_indices(y)
            .iter()
            .zip(factors)
            .map(|(&j, x)| maps[j as usize - 1].apply_raw(&tail, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Cell::simplex(y.to_vec(), out))
    })
}

/// Υᵏ(f₁, …, f_k) with freshly built domain and codomain.
pub fn upsilon_of_maps(maps: &[PrecatMap]) -> Result<PrecatMap> {
    let doms: Vec<Precat> = maps.iter().map(|f| f.domain().clone()).collect();
    let cods: Vec<Precat> = maps.iter().map(|f| f.codomain().clone()).collect();
    upsilon_map(maps, &upsilon(&doms)?, &upsilon(&cods)?, Indexing::Full)
}

/// A face of Υᵏ: a map out of some Υᵏ⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    /// Υ(E₂, …, E_k) on objects 1..k.
    DropFirst,
    /// Υ(E₁, …, E_{k−1}) on objects 0..k−1.
    DropLast,
    /// Υ(…, E_i × E_{i+1}, …) skipping object `i` (1 ≤ i < k).
    Merge(u32),
}

impl Face {
    fn vertex(self, v: u32) -> u32 {
        match self {
            Face::DropLast => v,
            Face::DropFirst => v + 1,
            Face::Merge(i) => {
                if v < i {
                    v
                } else {
                    v + 1
                }
            }
        }
    }

    /// The inputs of the domain Υ of this face, given those of the codomain.
    pub fn domain_inputs(self, inputs: &[Precat]) -> Result<Vec<Precat>> {
        let k = inputs.len();
        match self {
            Face::DropFirst if k >= 2 => Ok(inputs[1..].to_vec()),
            Face::DropLast if k >= 2 => Ok(inputs[..k - 1].to_vec()),
            Face::Merge(i) if i >= 1 && (i as usize) < k => {
                let i = i as usize;
                let mut v = inputs[..i - 1].to_vec();
                v.push(crate::precat::product(&inputs[i - 1], &inputs[i])?);
                v.extend_from_slice(&inputs[i + 1..]);
                Ok(v)
            }
            _ => Err(Error::InvalidArgument(format!("{self:?} is not a face of Υ^{k}"))),
        }
    }
}

/// The face map `small -> big` between Υ's built from compatible inputs
/// (`small` built from [`Face::domain_inputs`]).
pub fn face_map(face: Face, small: &Precat, big: &Precat, indexing: Indexing) -> Result<PrecatMap> {
    PrecatMap::new(format!("{face:?}"), small, big, move |_, c| {
        let (y, factors) = simplex_parts(c)?;
        let z: Vec<u32> = y.iter().map(|&v| face.vertex(v)).collect();
        let mut by_index: HashMap<u32, Cell> = HashMap::new();
        for (&j, x) in indexing.factor_indices(y).iter().zip(factors) {
            match face {
                Face::DropLast => {
                    by_index.insert(j, x.clone());
                }
                Face::DropFirst => {
                    by_index.insert(j + 1, x.clone());
                }
                Face::Merge(i) => {
                    if j < i {
                        by_index.insert(j, x.clone());
                    } else if j == i {
                        let (a, b) = x.as_pair();
                        by_index.insert(i, a.clone());
                        by_index.insert(i + 1, b.clone());
                    } else {
                        by_index.insert(j + 1, x.clone());
                    }
                }
            }
        }
        let out = indexing
            .factor_indices(&z)
            .iter()
            .map(|j| {
                by_index
                    .get(j)
                    .cloned()
                    .ok_or_else(|| Error::Construction(format!("{face:?} has no factor E_{j} for {c}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cell::simplex(z, out))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::check_functoriality;
    use crate::precat::{discrete, empty, terminal};
    use crate::window::Window;

    fn obj(n: usize, e: &[i64]) -> ThetaObject {
        ThetaObject::new(n, e).unwrap()
    }

    #[test]
    fn counts_of_small_upsilons() {
        let pt = terminal(0);
        let u1 = upsilon(std::slice::from_ref(&pt)).unwrap();
        // Υ(∗) is the arrow: p+2 cells at level (p).
        for p in 0..4 {
            assert_eq!(u1.count(&obj(1, &[p])).unwrap(), p as usize + 2);
        }
        let u2 = upsilon(&[pt.clone(), pt.clone()]).unwrap();
        assert_eq!(u2.count(&obj(1, &[1])).unwrap(), 6);
        let two = discrete(1, 2);
        let u = upsilon(&[two.clone(), terminal(1)]).unwrap();
        // level (1): constant 3, steps 0→1 (2), 1→2 (1), 0→2 (2·1)
        assert_eq!(u.count(&obj(2, &[1])).unwrap(), 8);
        let legacy = upsilon_with(&[two, terminal(1)], Indexing::StepEndpoints).unwrap();
        assert_eq!(legacy.count(&obj(2, &[1])).unwrap(), 7);
        assert_eq!(upsilon(&[empty(0)]).unwrap().count(&obj(1, &[2])).unwrap(), 2);
    }

    #[test]
    fn functorial_in_both_indexings() {
        let w = Window::new(2).unwrap();
        for ix in [Indexing::Full, Indexing::StepEndpoints] {
            let u = upsilon_with(&[discrete(1, 2), terminal(1)], ix).unwrap();
            let r = check_functoriality(&u, &w, false).unwrap();
            assert!(r.passed(), "{ix:?}: {:?}", r.violations.first());
        }
        let u = upsilon(&[terminal(0), discrete(0, 2), terminal(0)]).unwrap();
        assert!(check_functoriality(&u, &w, true).unwrap().passed());
    }

    #[test]
    fn faces_are_natural() {
        let w = Window::new(2).unwrap();
        let inputs = [discrete(1, 2), terminal(1), discrete(1, 3)];
        let big = upsilon(&inputs).unwrap();
        for face in [Face::DropFirst, Face::DropLast, Face::Merge(1), Face::Merge(2)] {
            let small = upsilon(&face.domain_inputs(&inputs).unwrap()).unwrap();
            let f = face_map(face, &small, &big, Indexing::Full).unwrap();
            assert!(f.is_natural(&w).unwrap(), "{face:?}");
            for m in w.objects(2) {
                assert!(f.injective_at(&m).unwrap());
            }
        }
        assert!(Face::Merge(3).domain_inputs(&inputs).is_err());
    }

    #[test]
    fn upsilon_on_maps_is_natural() {
        let w = Window::new(2).unwrap();
        let f = PrecatMap::to_terminal(&discrete(1, 3), &terminal(1)).unwrap();
        let g = PrecatMap::identity(&discrete(1, 2));
        let u = upsilon_of_maps(&[f, g]).unwrap();
        assert!(u.is_natural(&w).unwrap());
    }
}
