//! Canonical windowed JSON dumps and precats read back from them.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::precat::{Precat, Presheaf};
use crate::theta::{factor_into_generators, MorphismJson, ThetaMorphism, ThetaObject};
use crate::window::Window;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelDump {
    pub object: Vec<u32>,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionDump {
    pub morphism: MorphismJson,
    pub map: BTreeMap<String, String>,
}

/// A window of a precat: every level plus the action of every window
/// generator (other morphisms act through their factorization).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Dump {
    pub n: usize,
    pub window: Window,
    pub levels: Vec<LevelDump>,
    pub actions: Vec<ActionDump>,
}

impl Dump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serializes")
    }

    pub fn from_json(s: &str) -> Result<Dump> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }
}

fn labels(cells: &[Cell]) -> Result<Vec<String>> {
    let mut out: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
    out.sort();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Format("two cells of one level print the same label".into()));
    }
    Ok(out)
}

pub fn dump(p: &Precat, w: &Window) -> Result<Dump> {
    let n = p.dim();
    let mut levels = Vec::new();
    for (m, level) in p.window_levels(w)? {
        levels.push(LevelDump { object: m.entries().to_vec(), cells: labels(level.cells())? });
    }
    let mut gens = w.generators(n);
    gens.sort_by(|a, b| {
        a.target()
            .dump_cmp(b.target())
            .then_with(|| a.source().dump_cmp(b.source()))
            .then_with(|| a.components().cmp(b.components()))
    });
    let mut actions = Vec::new();
    for g in gens {
        let mut map = BTreeMap::new();
        for c in p.evaluate(g.target())?.cells() {
            map.insert(c.to_string(), p.act_raw(&g, c)?.to_string());
        }
        actions.push(ActionDump { morphism: g.to_json(), map });
    }
    Ok(Dump { n, window: *w, levels, actions })
}

struct Table {
    n: usize,
    window: Window,
    levels: HashMap<ThetaObject, Vec<Cell>>,
    actions: HashMap<ThetaMorphism, HashMap<Cell, Cell>>,
}

impl Presheaf for Table {
    fn dim(&self) -> usize {
        self.n
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        self.levels
            .get(m)
            .cloned()
            .ok_or_else(|| Error::OutsideWindow(format!("level {m} is outside the dumped window B={}", self.window.bound)))
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        // `f = u_r ∘ … ∘ u₁` acts as `u₁* ∘ … ∘ u_r*`.
        let mut cur = c.clone();
        for g in factor_into_generators(f).into_iter().rev() {
            let table = self
                .actions
                .get(&g)
                .ok_or_else(|| Error::OutsideWindow(format!("no action recorded for {g}")))?;
            cur = table
                .get(&cur)
                .cloned()
                .ok_or_else(|| Error::Domain(format!("{cur} is not a cell at level {}", g.target())))?;
        }
        Ok(cur)
    }
}

/// Reads a dump back as a precat defined on the dumped window.
pub fn load(d: &Dump, name: impl Into<String>) -> Result<Precat> {
    let n = d.n;
    let mut levels = HashMap::new();
    for l in &d.levels {
        let m = ThetaObject::new(n, &l.object.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
        if m.len() != l.object.len() {
            return Err(Error::Format(format!("level object {:?} has a zero entry", l.object)));
        }
        let cells: Vec<Cell> = l.cells.iter().map(|s| Cell::label(s)).collect();
        if levels.insert(m.clone(), cells).is_some() {
            return Err(Error::Format(format!("level {m} appears twice")));
        }
    }
    for m in d.window.objects(n) {
        if !levels.contains_key(&m) {
            return Err(Error::Format(format!("window level {m} is missing")));
        }
    }
    let mut actions = HashMap::new();
    for a in &d.actions {
        let f = ThetaMorphism::from_json(n, &a.morphism)?;
        let (src, tgt) = (&levels[f.source()], &levels[f.target()]);
        let mut table = HashMap::new();
        for (k, v) in &a.map {
            let (kc, vc) = (Cell::label(k), Cell::label(v));
            if !tgt.contains(&kc) || !src.contains(&vc) {
                return Err(Error::Format(format!("action of {f} maps {k} to {v}, not cells of the right levels")));
            }
            table.insert(kc, vc);
        }
        if table.len() != tgt.len() {
            return Err(Error::Format(format!("action of {f} is not total")));
        }
        actions.insert(f, table);
    }
    for g in d.window.generators(n) {
        if !actions.contains_key(&g) {
            return Err(Error::Format(format!("no action recorded for generator {g}")));
        }
    }
    Ok(Precat::new(name, Table { n, window: d.window, levels, actions }))
}
