//! Windowed isomorphism search between two precats.
//!
//! The search works on cell indices. Cells of both sides are first split by
//! a joint colour refinement along the window generators; then levels are
//! matched in order of (length, entry sum) by backtracking, with every
//! generator between already matched cells checked as soon as both ends
//! are assigned.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::map::PrecatMap;
use crate::par;
use crate::precat::Precat;
use crate::theta::ThetaObject;
use crate::window::Window;

const NONE: u32 = u32::MAX;

/// Upper bound on backtracking steps before the search gives up.
pub const SEARCH_BUDGET: u64 = 20_000_000;

struct Side {
    sizes: Vec<usize>,
    /// Per generator: target-level cell index to source-level cell index.
    act: Vec<Vec<u32>>,
    /// Per generator: source-level cell index to the target cells over it.
    pre: Vec<Vec<Vec<u32>>>,
}

struct Shape {
    objects: Vec<ThetaObject>,
    /// (source level, target level) per generator.
    gens: Vec<(usize, usize)>,
    into: Vec<Vec<usize>>,
    out_of: Vec<Vec<usize>>,
}

fn shape(n: usize, w: &Window) -> Shape {
    let objects = w.objects(n);
    let index: HashMap<&ThetaObject, usize> = objects.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let gens: Vec<(usize, usize)> = w.generators(n).iter().map(|g| (index[g.source()], index[g.target()])).collect();
    let mut into = vec![Vec::new(); objects.len()];
    let mut out_of = vec![Vec::new(); objects.len()];
    for (gi, &(s, t)) in gens.iter().enumerate() {
        into[t].push(gi);
        out_of[s].push(gi);
    }
    Shape { objects, gens, into, out_of }
}

fn side(p: &Precat, w: &Window, sh: &Shape) -> Result<(Side, Vec<Vec<crate::cell::Cell>>)> {
    let levels = p.window_levels(w)?;
    let cells: Vec<Vec<crate::cell::Cell>> = levels.iter().map(|(_, l)| l.cells().to_vec()).collect();
    let sizes = cells.iter().map(|c| c.len()).collect();
    let generators = w.generators(p.dim());
    let acts: Vec<Result<Vec<u32>>> = par::map_range(generators.len(), |gi| {
        let g = &generators[gi];
        let (s, t) = sh.gens[gi];
        let src = &levels[s].1;
        levels[t]
            .1
            .cells()
            .iter()
            .map(|c| {
                let img = p.act_raw(g, c)?;
                src.position(&img).ok_or_else(|| {
                    Error::Construction(format!("{}: {g} sends {c} to {img}, not a cell", p.name()))
                })
            })
            .collect()
    });
    let act: Vec<Vec<u32>> = acts.into_iter().collect::<Result<_>>()?;
    let pre = act
        .iter()
        .enumerate()
        .map(|(gi, a)| {
            let mut v = vec![Vec::new(); levels[sh.gens[gi].0].1.len()];
            for (c, &img) in a.iter().enumerate() {
                v[img as usize].push(c as u32);
            }
            v
        })
        .collect();
    Ok((Side { sizes, act, pre }, cells))
}

fn refine(sh: &Shape, p: &Side, q: &Side) -> (Vec<Vec<u32>>, Vec<Vec<u32>>, bool) {
    let init = |s: &Side| -> Vec<Vec<u32>> { s.sizes.iter().enumerate().map(|(l, &k)| vec![l as u32; k]).collect() };
    let (mut cp, mut cq) = (init(p), init(q));
    let mut classes = p.sizes.iter().filter(|&&k| k > 0).count();
    loop {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut step = |s: &Side, col: &Vec<Vec<u32>>| -> Vec<Vec<u32>> {
            let mut out = Vec::with_capacity(col.len());
            for l in 0..col.len() {
                let mut level = Vec::with_capacity(col[l].len());
                for c in 0..col[l].len() {
                    let mut sig = vec![col[l][c]];
                    for &gi in &sh.into[l] {
                        sig.push(col[sh.gens[gi].0][s.act[gi][c] as usize]);
                    }
                    for &gi in &sh.out_of[l] {
                        let t = sh.gens[gi].1;
                        let mut v: Vec<u32> = s.pre[gi][c].iter().map(|&e| col[t][e as usize]).collect();
                        v.sort_unstable();
                        sig.push(u32::MAX);
                        sig.extend(v);
                    }
                    let next = ids.len() as u32;
                    level.push(*ids.entry(sig).or_insert(next));
                }
                out.push(level);
            }
            out
        };
        let np = step(p, &cp);
        let nq = step(q, &cq);
        let count = ids.len();
        cp = np;
        cq = nq;
        if count <= classes {
            break;
        }
        classes = count;
    }
    // Every colour must occur equally often on both sides.
    let mut balance: HashMap<u32, i64> = HashMap::new();
    for l in &cp {
        for &c in l {
            *balance.entry(c).or_default() += 1;
        }
    }
    for l in &cq {
        for &c in l {
            *balance.entry(c).or_default() -= 1;
        }
    }
    let ok = balance.values().all(|&v| v == 0);
    (cp, cq, ok)
}

/// Searches for a levelwise bijection `P -> Q` commuting with every window
/// generator. `Ok(None)` means there is none on this window.
pub fn iso_windowed(p: &Precat, q: &Precat, w: &Window) -> Result<Option<PrecatMap>> {
    if p.dim() != q.dim() {
        return Ok(None);
    }
    let n = p.dim();
    let sh = shape(n, w);
    for m in &sh.objects {
        if p.count(m)? != q.count(m)? {
            return Ok(None);
        }
    }
    let (ps, pcells) = side(p, w, &sh)?;
    let (qs, qcells) = side(q, w, &sh)?;
    let (cp, cq, balanced) = refine(&sh, &ps, &qs);
    if !balanced {
        return Ok(None);
    }

    // Candidate buckets per (level, colour) on the Q side.
    let mut bucket: HashMap<(usize, u32), Vec<u32>> = HashMap::new();
    for (l, cols) in cq.iter().enumerate() {
        for (d, &col) in cols.iter().enumerate() {
            bucket.entry((l, col)).or_default().push(d as u32);
        }
    }
    let mut level_order: Vec<usize> = (0..sh.objects.len()).collect();
    level_order.sort_by(|&a, &b| sh.objects[a].search_cmp(&sh.objects[b]));
    let mut order: Vec<(usize, u32)> = Vec::new();
    for &l in &level_order {
        let mut cells: Vec<u32> = (0..ps.sizes[l] as u32).collect();
        cells.sort_by_key(|&c| (bucket[&(l, cp[l][c as usize])].len(), c));
        order.extend(cells.into_iter().map(|c| (l, c)));
    }

    let mut phi: Vec<Vec<u32>> = ps.sizes.iter().map(|&k| vec![NONE; k]).collect();
    let mut used: Vec<Vec<bool>> = qs.sizes.iter().map(|&k| vec![false; k]).collect();
    let mut ptr = vec![0usize; order.len()];
    let consistent = |phi: &Vec<Vec<u32>>, l: usize, c: u32, d: u32| -> bool {
        for &gi in &sh.into[l] {
            let s = sh.gens[gi].0;
            let pc = phi[s][ps.act[gi][c as usize] as usize];
            if pc != NONE && qs.act[gi][d as usize] != pc {
                return false;
            }
        }
        for &gi in &sh.out_of[l] {
            let t = sh.gens[gi].1;
            for &e in &ps.pre[gi][c as usize] {
                let fe = phi[t][e as usize];
                if fe != NONE && qs.act[gi][fe as usize] != d {
                    return false;
                }
            }
        }
        true
    };

    let mut k = 0usize;
    let mut steps: u64 = 0;
    while k < order.len() {
        steps += 1;
        if steps > SEARCH_BUDGET {
            return Err(Error::Construction(format!(
                "isomorphism search between {} and {} exceeded its budget",
                p.name(),
                q.name()
            )));
        }
        let (l, c) = order[k];
        let cands = &bucket[&(l, cp[l][c as usize])];
        let mut found = None;
        while ptr[k] < cands.len() {
            let d = cands[ptr[k]];
            ptr[k] += 1;
            if !used[l][d as usize] && consistent(&phi, l, c, d) {
                found = Some(d);
                break;
            }
        }
        match found {
            Some(d) => {
                phi[l][c as usize] = d;
                used[l][d as usize] = true;
                k += 1;
            }
            None => {
                ptr[k] = 0;
                if k == 0 {
                    return Ok(None);
                }
                k -= 1;
                let (pl, pc) = order[k];
                let d = phi[pl][pc as usize];
                used[pl][d as usize] = false;
                phi[pl][pc as usize] = NONE;
            }
        }
    }

    let mut tables = HashMap::new();
    for (l, m) in sh.objects.iter().enumerate() {
        let t: HashMap<_, _> = pcells[l]
            .iter()
            .enumerate()
            .map(|(c, cell)| (cell.clone(), qcells[l][phi[l][c] as usize].clone()))
            .collect();
        tables.insert(m.clone(), t);
    }
    PrecatMap::from_tables(format!("iso({},{})", p.name(), q.name()), p, q, tables).map(Some)
}
