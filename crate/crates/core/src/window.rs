use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theta::{enumerate_morphisms, generators_into, ThetaMorphism, ThetaObject};

/// A finite set of levels of Θⁿ: every object whose entries are `<= bound`
/// and whose length is `<= length` (the ambient dimension when unset).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(rename = "B")]
    pub bound: u32,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
}

pub const DEFAULT_BOUND: u32 = 3;

impl Default for Window {
    fn default() -> Self {
        Window { bound: DEFAULT_BOUND, length: None }
    }
}

impl Window {
    pub fn new(bound: u32) -> Result<Self> {
        if bound < 1 {
            return Err(Error::InvalidArgument("window bound must be at least 1".into()));
        }
        Ok(Window { bound, length: None })
    }

    pub fn with_length(mut self, length: usize) -> Self {
        self.length = Some(length);
        self
    }

    pub fn max_len(&self, n: usize) -> usize {
        self.length.map_or(n, |l| l.min(n))
    }

    pub fn contains(&self, m: &ThetaObject) -> bool {
        m.len() <= self.max_len(m.n()) && m.max_entry() <= self.bound
    }

    /// Window objects sorted by length, then entries.
    pub fn objects(&self, n: usize) -> Vec<ThetaObject> {
        let mut out = vec![ThetaObject::zero(n)];
        let mut frontier = vec![Vec::<u32>::new()];
        for _ in 0..self.max_len(n) {
            let mut next = Vec::new();
            for e in &frontier {
                for v in 1..=self.bound {
                    let mut e2 = e.clone();
                    e2.push(v);
                    out.push(ThetaObject::from_entries(n, e2.clone()));
                    next.push(e2);
                }
            }
            frontier = next;
        }
        out.sort_by(|a, b| a.dump_cmp(b));
        out
    }

    /// Elementary faces and degeneracies between window objects. Every window
    /// morphism is a composite of these.
    pub fn generators(&self, n: usize) -> Vec<ThetaMorphism> {
        self.objects(n)
            .iter()
            .flat_map(|m| generators_into(m, self.bound))
            .filter(|g| self.contains(g.source()))
            .collect()
    }

    /// Every morphism between window objects.
    pub fn morphisms(&self, n: usize) -> Vec<ThetaMorphism> {
        let objs = self.objects(n);
        let mut out = Vec::new();
        for s in &objs {
            for t in &objs {
                out.extend(enumerate_morphisms(s, t));
            }
        }
        out
    }
}
