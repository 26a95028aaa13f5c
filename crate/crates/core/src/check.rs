//! Extensional law checks on a window.

use serde::Serialize;

use crate::cell::Cell;
use crate::error::Result;
use crate::par;
use crate::precat::Precat;
use crate::theta::{compose, ThetaMorphism};
use crate::window::Window;

/// One failed functoriality law.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FunctorialityViolation {
    pub law: &'static str,
    /// The outer morphism `f`, or the identity for identity-law failures.
    pub f: String,
    /// The inner morphism `g` (empty for single-morphism laws).
    pub g: String,
    pub cell: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorialityReport {
    pub precat: String,
    pub window: Window,
    pub exhaustive: bool,
    pub morphisms_checked: usize,
    pub violations: Vec<FunctorialityViolation>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks identity laws, that every action lands in its source level, and
/// `(f∘g)* = g*∘f*`.
///
/// By default `g` ranges over the window generators and `f` over every
/// window morphism, which implies the law for all composable window pairs.
/// With `exhaustive` every composable pair is tried.
pub fn check_functoriality(p: &Precat, w: &Window, exhaustive: bool) -> Result<FunctorialityReport> {
    let n = p.dim();
    let morphisms = w.morphisms(n);
    let inner = if exhaustive { morphisms.clone() } else { w.generators(n) };
    let mut violations = Vec::new();

    for m in w.objects(n) {
        let id = ThetaMorphism::identity(&m);
        for c in p.evaluate(&m)?.cells() {
            let got = p.act_formula(&id, c)?;
            if &got != c {
                violations.push(FunctorialityViolation {
                    law: "identity",
                    f: id.to_string(),
                    g: String::new(),
                    cell: c.to_string(),
                    expected: c.to_string(),
                    got: got.to_string(),
                });
            }
        }
    }

    let found: Vec<Result<Vec<FunctorialityViolation>>> = par::map(&morphisms, |f| {
        let mut out = Vec::new();
        let src = p.evaluate(f.source())?;
        let tgt = p.evaluate(f.target())?;
        for c in tgt.cells() {
            let fc = p.act_raw(f, c)?;
            if !src.contains(&fc) {
                out.push(FunctorialityViolation {
                    law: "well-typed",
                    f: f.to_string(),
                    g: String::new(),
                    cell: c.to_string(),
                    expected: format!("a cell at level {}", f.source()),
                    got: fc.to_string(),
                });
                continue;
            }
            for g in inner.iter().filter(|g| g.target() == f.source()) {
                let fg = compose(f, g)?;
                let direct = p.act_raw(&fg, c)?;
                let stepwise = p.act_raw(g, &fc)?;
                if direct != stepwise {
                    out.push(violation(f, g, c, &stepwise, &direct));
                }
            }
        }
        Ok(out)
    });
    for r in found {
        violations.extend(r?);
    }
    Ok(FunctorialityReport {
        precat: p.name().to_string(),
        window: *w,
        exhaustive,
        morphisms_checked: morphisms.len(),
        violations,
    })
}

fn violation(f: &ThetaMorphism, g: &ThetaMorphism, c: &Cell, expected: &Cell, got: &Cell) -> FunctorialityViolation {
    FunctorialityViolation {
        law: "composition",
        f: f.to_string(),
        g: g.to_string(),
        cell: c.to_string(),
        expected: expected.to_string(),
        got: got.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precat::{discrete, from_fns};
    use crate::theta::ThetaObject;

    #[test]
    fn discrete_precats_are_functorial() {
        let w = Window::new(2).unwrap();
        let r = check_functoriality(&discrete(2, 3), &w, true).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn corrupted_action_is_reported() {
        // Two cells at every level; the action swaps them along one
        // particular face only.
        let bad = from_fns(
            "corrupt",
            1,
            |_| Ok(vec![Cell::Atom(0), Cell::Atom(1)]),
            |f, c| {
                let special = f.source() == &ThetaObject::new(1, &[1]).unwrap()
                    && f.target() == &ThetaObject::new(1, &[2]).unwrap()
                    && f.components()[0] == vec![0, 2];
                Ok(match (special, c) {
                    (true, Cell::Atom(0)) => Cell::Atom(1),
                    (true, Cell::Atom(1)) => Cell::Atom(0),
                    _ => c.clone(),
                })
            },
        );
        let w = Window::new(2).unwrap();
        let r = check_functoriality(&bad, &w, false).unwrap();
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.law == "composition"));
    }

    #[test]
    fn identity_law_is_checked_against_the_formula() {
        let bad = from_fns("bad-id", 1, |_| Ok(vec![Cell::Atom(0), Cell::Atom(1)]), |_, _| Ok(Cell::Atom(0)));
        let r = check_functoriality(&bad, &Window::new(1).unwrap(), false).unwrap();
        assert!(r.violations.iter().any(|v| v.law == "identity" && v.cell == "1"));
    }
}
