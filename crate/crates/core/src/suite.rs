//! The verification suite: every exact identity the library promises,
//! each checked on a window and timed.

use std::time::Instant;

use serde::Serialize;

use crate::analysis::{min_dim_sets, MinDim0};
use crate::category::FiniteCategory;
use crate::cell::Cell;
use crate::constructions::claim::prove_claim;
use crate::constructions::delooping::{delooping, delooping_to_suspension};
use crate::constructions::monoidal::{ck_monoidal, MonoidObject};
use crate::constructions::nerve::{self, nerve};
use crate::constructions::products::{pushout_product, rem1, rem2, square};
use crate::constructions::suspension::{sigma, suspension, Pointed};
use crate::constructions::upsilon::Indexing;
use crate::constructions::whitehead::whitehead;
use crate::error::{Error, Result};
use crate::iso::iso_windowed;
use crate::map::PrecatMap;
use crate::par;
use crate::precat::{discrete, empty, terminal, Precat};
use crate::theta::ThetaObject;
use crate::window::Window;

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    /// Overrides every item's default window bound.
    pub window: Option<u32>,
    /// Run a single item.
    pub only: Option<String>,
    /// Υ indexing used by the square identity.
    pub indexing: Indexing,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub name: String,
    pub anchor: String,
    pub window: u32,
    pub passed: bool,
    pub detail: String,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub entries: Vec<SuiteEntry>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

struct Item {
    name: &'static str,
    anchor: &'static str,
    default_window: u32,
    run: fn(&Window, &SuiteOptions) -> Result<(bool, String)>,
}

const ITEMS: &[Item] = &[
    Item { name: "casezero", anchor: "casezero", default_window: 2, run: |_, _| casezero_item() },
    Item { name: "delooping", anchor: "itsasuspension", default_window: 2, run: |w, _| delooping_item(w) },
    Item { name: "proveclaim", anchor: "proveclaim", default_window: 3, run: |w, _| proveclaim_item(w) },
    Item { name: "rem1", anchor: "rem1", default_window: 2, run: |w, _| rem_item(w, 1) },
    Item { name: "rem2", anchor: "rem2", default_window: 2, run: |w, _| rem_item(w, 2) },
    Item { name: "square", anchor: "square", default_window: 2, run: |w, o| square_item(w, o.indexing) },
    Item { name: "suspension-tower", anchor: "itsanothersuspension", default_window: 2, run: |w, _| tower_item(w) },
    Item { name: "whitehead-homs", anchor: "prooflemma3bis", default_window: 3, run: |w, _| whitehead_item(w, Law::Homs) },
    Item { name: "whitehead-levels", anchor: "prooflemma2", default_window: 3, run: |w, _| whitehead_item(w, Law::Levels) },
    Item {
        name: "whitehead-recursion",
        anchor: "prooflemma3",
        default_window: 3,
        run: |w, _| whitehead_item(w, Law::Recursion),
    },
];

pub fn item_names() -> Vec<&'static str> {
    ITEMS.iter().map(|i| i.name).collect()
}

/// Runs the selected items (in parallel when enabled); entries come back
/// sorted by name. Item failures are verdicts, not errors.
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteResult> {
    if let Some(w) = opts.window {
        if w < 2 {
            return Err(Error::InvalidArgument("the suite needs a window bound of at least 2".into()));
        }
    }
    let items: Vec<&Item> = ITEMS.iter().filter(|i| opts.only.as_deref().is_none_or(|o| o == i.name)).collect();
    if items.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "unknown suite item {:?}; known: {}",
            opts.only.as_deref().unwrap_or(""),
            item_names().join(", ")
        )));
    }
    let mut entries = par::map(&items, |item| {
        let bound = opts.window.unwrap_or(item.default_window);
        let w = Window { bound, length: None };
        let start = Instant::now();
        let (passed, detail) = match (item.run)(&w, opts) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        SuiteEntry {
            name: item.name.into(),
            anchor: item.anchor.into(),
            window: bound,
            passed,
            detail,
            wall_ms: start.elapsed().as_millis(),
        }
    });
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteResult { entries })
}

/// The four sample precats `∅, ∗, 2∗, N(I)` in dimension `n ≥ 1`.
pub fn samples(n: usize) -> Result<Vec<Precat>> {
    Ok(vec![empty(n), terminal(n), discrete(n, 2), nerve(&FiniteCategory::interval(), n)?])
}

/// Inclusions among the samples: `∅ -> X`, identities, and the object
/// inclusions `∗ -> 2∗ -> N(I)`, `∗ -> N(I)`.
pub fn sample_inclusions(n: usize) -> Result<Vec<PrecatMap>> {
    let s = samples(n)?;
    let (e, pt, two, ni) = (&s[0], &s[1], &s[2], &s[3]);
    let mut out = Vec::new();
    for x in &s[1..] {
        out.push(PrecatMap::from_empty(e, x)?);
    }
    for x in &s {
        out.push(PrecatMap::identity(x));
    }
    out.push(PrecatMap::new("0", pt, two, |_, _| Ok(Cell::Atom(0)))?);
    let n1 = ni.clone();
    out.push(PrecatMap::new("0", pt, ni, move |m, _| n1.degenerate(&nerve::object(0), m))?);
    let n2 = ni.clone();
    out.push(PrecatMap::new("objects", two, ni, move |m, c| match c {
        Cell::Atom(v) => n2.degenerate(&nerve::object(*v), m),
        other => Err(Error::Domain(format!("{other} is not a point"))),
    })?);
    Ok(out)
}

/// `m(x ∧ y)` for `x, y ∈ {a: ∅ -> ∗, b: 2∗ -> ∗}` at n = 0.
pub fn casezero_table() -> Result<Vec<(String, MinDim0)>> {
    let a = PrecatMap::from_empty(&empty(0), &terminal(0))?.renamed("a");
    let b = PrecatMap::to_terminal(&discrete(0, 2), &terminal(0))?.renamed("b");
    let mut out = Vec::new();
    for (x, y) in [(&a, &a), (&a, &b), (&b, &a), (&b, &b)] {
        let pp = pushout_product(x, y)?;
        out.push((format!("{}^{}", x.name(), y.name()), min_dim_sets(&pp.map)?));
    }
    Ok(out)
}

fn casezero_item() -> Result<(bool, String)> {
    let t = casezero_table()?;
    let want = [MinDim0::Zero, MinDim0::One, MinDim0::One, MinDim0::Infinite];
    let ok = t.iter().zip(want).all(|((_, got), w)| *got == w);
    let detail = t.iter().map(|(k, v)| format!("m({k})={v}")).collect::<Vec<_>>().join(", ");
    Ok((ok, detail))
}

/// `σᵏ⁺¹ ≅ Σ(σᵏ, s)` in ambient dimension `k+2`.
pub fn tower_step(k: usize, w: &Window) -> Result<bool> {
    let s = sigma(k, k + 1)?;
    let sus = suspension(&s)?;
    let next = sigma(k + 1, k + 2)?;
    Ok(match iso_windowed(&next.space, &sus.object, w)? {
        Some(f) => f.is_natural(w)? && f.is_bijective_on(w)?,
        None => false,
    })
}

fn tower_item(w: &Window) -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for k in 0..=2 {
        let r = tower_step(k, w)?;
        ok &= r;
        detail.push(format!("k={k}: {}", if r { "iso" } else { "no iso" }));
    }
    Ok((ok, detail.join(", ")))
}

/// The pointed inputs of the delooping identity, as 1-precats.
pub fn delooping_inputs() -> Result<Vec<Pointed>> {
    Ok(vec![
        Pointed::new(discrete(1, 2), Cell::Atom(0))?,
        Pointed::new(nerve(&FiniteCategory::interval(), 1)?, nerve::object(0))?,
        sigma(1, 1)?,
    ])
}

/// `X(A, a) ≅ Σ(A, a)`: both the canonical comparison and a searched
/// isomorphism.
pub fn delooping_identity(a: &Pointed, w: &Window) -> Result<bool> {
    let x = delooping(a);
    let s = suspension(a)?;
    let f = delooping_to_suspension(&x, &s)?;
    if !f.is_natural(w)? || !f.is_bijective_on(w)? {
        return Ok(false);
    }
    Ok(iso_windowed(&x, &s.object, w)?.is_some())
}

fn delooping_item(w: &Window) -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for a in delooping_inputs()? {
        let r = delooping_identity(&a, w)?;
        ok &= r;
        detail.push(format!("{}: {}", a.space.name(), if r { "iso" } else { "no iso" }));
    }
    Ok((ok, detail.join(", ")))
}

fn square_item(w: &Window, ix: Indexing) -> Result<(bool, String)> {
    let s = samples(1)?;
    let mut failed = Vec::new();
    for b in &s {
        for d in &s {
            let v = square(b, d, ix)?.verify(w)?;
            if !v.holds {
                failed.push(format!("B={}, D={}: {}", b.name(), d.name(), v.detail));
            }
        }
    }
    let total = s.len() * s.len();
    Ok(if failed.is_empty() {
        (true, format!("{total} cases"))
    } else {
        (false, format!("{} of {total} cases fail; first: {}", failed.len(), failed[0]))
    })
}

fn rem_item(w: &Window, which: u8) -> Result<(bool, String)> {
    let incs = sample_inclusions(1)?;
    let pairs: Vec<(usize, usize)> = (0..incs.len()).flat_map(|i| (0..incs.len()).map(move |j| (i, j))).collect();
    let results = par::map(&pairs, |&(i, j)| -> Result<Option<String>> {
        let (f, g) = (&incs[i], &incs[j]);
        let check = if which == 1 { rem1(f, g)? } else { rem2(f, g)? };
        let v = check.verify(w)?;
        Ok((!v.holds).then(|| {
            format!(
                "{}->{} / {}->{}: {}",
                f.domain().name(),
                f.codomain().name(),
                g.domain().name(),
                g.codomain().name(),
                v.detail
            )
        }))
    });
    let mut failed = Vec::new();
    for r in results {
        if let Some(msg) = r? {
            failed.push(msg);
        }
    }
    Ok(if failed.is_empty() {
        (true, format!("{} cases", pairs.len()))
    } else {
        (false, format!("{} of {} cases fail; first: {}", failed.len(), pairs.len(), failed[0]))
    })
}

fn proveclaim_item(w: &Window) -> Result<(bool, String)> {
    let i = PrecatMap::new("2*->3*", &discrete(1, 2), &discrete(1, 3), |_, c| Ok(c.clone()))?;
    prove_claim(&i, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Law {
    /// `Wh>k(A)` is a single cell on levels of length at most `k`.
    Levels,
    /// `Wh>k(A)_{p/}(a…a) = Wh>k−1(A_{p/}(a…a), d_p a)`.
    Recursion,
    /// `Wh>0(A)_{1/}(a, a) = A_{1/}(a, a)`.
    Homs,
}

/// The pointed 2-precats the Whitehead laws are checked on.
pub fn whitehead_inputs() -> Result<Vec<Pointed>> {
    Ok(vec![
        Pointed::new(nerve(&FiniteCategory::iso_interval(), 2)?, nerve::object(0))?,
        Pointed::new(ck_monoidal(&MonoidObject::z2(0), 2)?, Cell::Unit)?,
    ])
}

/// Checks one Whitehead law for `k ∈ {0, 1}` on the window.
pub fn whitehead_law(a: &Pointed, law: Law, w: &Window) -> Result<bool> {
    let n = a.dim();
    match law {
        Law::Levels => {
            for k in 0..=1usize {
                let (wh, inc) = whitehead(a, k)?;
                for m in w.objects(n) {
                    if m.len() <= k && wh.count(&m)? != 1 {
                        return Ok(false);
                    }
                }
                if !inc.is_natural(w)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Law::Recursion => {
            for k in 0..=1usize {
                let (wh, _) = whitehead(a, k)?;
                for p in 1..=w.bound {
                    let verts = vec![a.point.clone(); p as usize + 1];
                    let lhs = wh.slice(p, Some(verts.clone()))?;
                    let base = a.space.slice(p, Some(verts))?;
                    let rhs = if k == 0 {
                        base
                    } else {
                        let dp = a.space.degenerate(&a.point, &ThetaObject::new(n, &[p as i64])?)?;
                        whitehead(&Pointed::new(base, dp)?, k - 1)?.0
                    };
                    if !lhs.window_equal(&rhs, w)? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Law::Homs => {
            let (wh, _) = whitehead(a, 0)?;
            let lhs = wh.hom(&a.point, &a.point)?;
            let rhs = a.space.hom(&a.point, &a.point)?;
            lhs.window_equal(&rhs, w)
        }
    }
}

fn whitehead_item(w: &Window, law: Law) -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for a in whitehead_inputs()? {
        let r = whitehead_law(&a, law, w)?;
        ok &= r;
        detail.push(format!("{}: {}", a.space.name(), if r { "holds" } else { "fails" }));
    }
    Ok((ok, detail.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casezero_matches_the_table() {
        let (ok, detail) = casezero_item().unwrap();
        assert!(ok, "{detail}");
    }

    #[test]
    fn unknown_item_is_an_error() {
        let opts = SuiteOptions { only: Some("nope".into()), ..Default::default() };
        assert!(run_suite(&opts).is_err());
    }

    #[test]
    fn sample_inclusions_are_natural_monos() {
        let w = Window::new(2).unwrap();
        for f in sample_inclusions(1).unwrap() {
            assert!(f.is_natural(&w).unwrap(), "{}", f.name());
            for m in w.objects(1) {
                assert!(f.injective_at(&m).unwrap());
            }
        }
    }
}
