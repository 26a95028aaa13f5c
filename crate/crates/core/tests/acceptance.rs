//! Acceptance run: one PASS/FAIL line per criterion, with its window and
//! time limit. Exits nonzero when any criterion fails.

// The hand-written oracles index by element number on purpose.
#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use theta_core::analysis::{category_from_nerve, is_k_connected, segal_check, MinDim0};
use theta_core::category::{all_monoids, all_preorders, categories_isomorphic, FiniteCategory};
use theta_core::check::check_functoriality;
use theta_core::colimit::pushout_named;
use theta_core::constructions::{
    cell, delooping, nerve, rem1, rem2, sigma, square, suspension, upsilon, Indexing, Pointed,
};
use theta_core::constructions::monoidal::{ck_monoidal, MonoidObject};
use theta_core::iso::iso_windowed;
use theta_core::precat::{discrete, product, terminal};
use theta_core::suite::{
    casezero_table, delooping_identity, delooping_inputs, sample_inclusions, samples, tower_step, whitehead_inputs,
    whitehead_law, Law,
};
use theta_core::{Cell, Precat, PrecatMap, Result, Window};

type Verdict = Result<(bool, String)>;

fn win(b: u32) -> Window {
    Window::new(b).expect("bound is positive")
}

/// Minimal dimension of the corner map of `f ∧ g` for maps of finite sets,
/// computed by hand. A map is given as (codomain size, images). The domain
/// `A×D ∪^{A×C} B×C` is built by union-find over tagged pairs.
fn corner_min_dim(f: (usize, &[usize]), g: (usize, &[usize])) -> MinDim0 {
    let ((b, fa), (d, gc)) = (f, g);
    let (a, c) = (fa.len(), gc.len());
    // Tags: A×D first, then B×C.
    let ad = |i: usize, j: usize| i * d + j;
    let bc = |k: usize, l: usize| a * d + k * c + l;
    let mut parent: Vec<usize> = (0..a * d + b * c).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for i in 0..a {
        for l in 0..c {
            let (x, y) = (root(&mut parent, ad(i, gc[l])), root(&mut parent, bc(fa[i], l)));
            parent[x] = y;
        }
    }
    let mut image_of_class: HashMap<usize, (usize, usize)> = HashMap::new();
    for i in 0..a {
        for j in 0..d {
            image_of_class.insert(root(&mut parent, ad(i, j)), (fa[i], j));
        }
    }
    for k in 0..b {
        for l in 0..c {
            image_of_class.insert(root(&mut parent, bc(k, l)), (k, gc[l]));
        }
    }
    let hit: BTreeSet<(usize, usize)> = image_of_class.values().copied().collect();
    if hit.len() < b * d {
        MinDim0::Zero
    } else if image_of_class.len() == b * d {
        MinDim0::Infinite
    } else {
        MinDim0::One
    }
}

fn casezero() -> Verdict {
    let table = casezero_table()?;
    // a: ∅ -> ∗, b: 2∗ -> ∗
    let a: (usize, &[usize]) = (1, &[]);
    let b: (usize, &[usize]) = (1, &[0, 0]);
    let oracle = [corner_min_dim(a, a), corner_min_dim(a, b), corner_min_dim(b, a), corner_min_dim(b, b)];
    let expected = [MinDim0::Zero, MinDim0::One, MinDim0::One, MinDim0::Infinite];
    let ok = oracle == expected && table.iter().map(|(_, m)| *m).eq(expected);
    let detail = table.iter().map(|(k, v)| format!("m({k})={v}")).collect::<Vec<_>>().join(" ");
    Ok((ok, detail))
}

fn suspension_tower() -> Verdict {
    let w = win(2);
    let mut ok = true;
    let mut detail = Vec::new();
    for k in 0..=2 {
        let r = tower_step(k, &w)?;
        ok &= r;
        detail.push(format!("k={k}:{}", if r { "iso" } else { "none" }));
    }
    Ok((ok, detail.join(" ")))
}

fn delooping_is_suspension() -> Verdict {
    let w = win(2);
    let mut ok = true;
    let mut detail = Vec::new();
    for a in delooping_inputs()? {
        let r = delooping_identity(&a, &w)?;
        ok &= r;
        detail.push(format!("{}:{}", a.space.name(), if r { "iso" } else { "none" }));
    }
    Ok((ok, detail.join(" ")))
}

fn pushout_identities() -> Verdict {
    let w = win(2);
    let s = samples(1)?;
    let mut fails = 0;
    for b in &s {
        for d in &s {
            fails += usize::from(!square(b, d, Indexing::Full)?.verify(&w)?.holds);
        }
    }
    let incs = sample_inclusions(1)?;
    let mut rem_cases = 0;
    for f in &incs {
        for g in &incs {
            fails += usize::from(!rem1(f, g)?.verify(&w)?.holds);
            fails += usize::from(!rem2(f, g)?.verify(&w)?.holds);
            rem_cases += 1;
        }
    }
    // Negative control: the step-endpoint indexing must break the square
    // for E = 2∗, F = ∗.
    let legacy = square(&discrete(1, 2), &terminal(1), Indexing::StepEndpoints)?.verify(&w)?;
    let ok = fails == 0 && !legacy.holds;
    Ok((
        ok,
        format!(
            "{} square + {} rem1 + {} rem2 cases, {fails} failures; legacy square: {}",
            s.len() * s.len(),
            rem_cases,
            rem_cases,
            legacy.detail
        ),
    ))
}

fn proveclaim() -> Verdict {
    let i = PrecatMap::new("2*->3*", &discrete(1, 2), &discrete(1, 3), |_, c| Ok(c.clone()))?;
    theta_core::constructions::claim::prove_claim(&i, &win(3))
}

fn whitehead_laws() -> Verdict {
    let w = win(3);
    let mut ok = true;
    let mut detail = Vec::new();
    for a in whitehead_inputs()? {
        for law in [Law::Levels, Law::Recursion, Law::Homs] {
            let r = whitehead_law(&a, law, &w)?;
            ok &= r;
            if !r {
                detail.push(format!("{} {law:?} fails", a.space.name()));
            }
        }
    }
    if detail.is_empty() {
        detail.push("2 inputs x 3 laws, k in {0,1}".into());
    }
    Ok((ok, detail.join("; ")))
}

/// Number of composable chains of length `p`, from the composition table.
fn chains(c: &FiniteCategory, p: u32) -> usize {
    let objs = c.object_count() as u32;
    let mut ending: Vec<usize> = vec![1; objs as usize];
    for _ in 0..p {
        let mut next = vec![0; objs as usize];
        for x in 0..objs {
            for a in c.arrows_from(x) {
                next[c.arrow(a).target as usize] += ending[x as usize];
            }
        }
        ending = next;
    }
    ending.iter().sum()
}

fn segal_round_trip() -> Verdict {
    let cats: Vec<FiniteCategory> = all_preorders(3)
        .into_iter()
        .chain(all_monoids(3))
        .filter(|c| c.object_count() <= 3 && c.non_identity_count() <= 6)
        .collect();
    let w = win(4);
    let mut bad = Vec::new();
    for c in &cats {
        let nc = nerve(c, 1)?;
        let counts_ok = (0..=4).all(|p| {
            let m = theta_core::ThetaObject::new(1, &[p as i64]).expect("valid object");
            nc.count(&m).ok() == Some(chains(c, p))
        });
        let strict = segal_check(&nc, &w)?.strict();
        let back = category_from_nerve(&nc, &w)?;
        if !(counts_ok && strict && categories_isomorphic(c, &back)) {
            bad.push(c.name().to_string());
        }
    }
    Ok((cats.len() >= 10 && bad.is_empty(), format!("{} categories, failures: {bad:?}", cats.len())))
}

fn strictness_counterexample() -> Verdict {
    let a = Pointed::new(discrete(1, 2), Cell::Atom(0))?;
    let x = delooping(&a);
    let one = x.count(&theta_core::ThetaObject::new(2, &[1])?)?;
    let two = x.count(&theta_core::ThetaObject::new(2, &[2])?)?;
    let r = segal_check(&x, &win(2))?;
    let m = r
        .maps
        .iter()
        .find(|m| m.p == 2 && m.prefix.is_empty() && m.tail.is_empty())
        .expect("the p = 2 map at the bottom is checked");
    let ok = (m.source_size, m.target_size) == (3, 4) && m.source_size == two && m.target_size == one * one;
    Ok((ok, format!("p=2: source {} target {}", m.source_size, m.target_size)))
}

fn connectivity() -> Verdict {
    let w = win(3);
    let z2 = MonoidObject::z2(0);
    let c1 = is_k_connected(&ck_monoidal(&z2, 1)?, 0, &w)?;
    let c2 = is_k_connected(&ck_monoidal(&z2, 2)?, 1, &w)?;
    let ni = is_k_connected(&nerve(&FiniteCategory::interval(), 1)?, 0, &w)?;
    Ok((c1 && c2 && !ni, format!("c1(Z2) 0-conn {c1}, c2(Z2) 1-conn {c2}, N(I) 0-conn {ni}")))
}

fn infrastructure() -> Verdict {
    let w = win(2);
    let mut violations = 0;
    let mut checked = 0;
    let mut zoo: Vec<Precat> = Vec::new();
    for n in 1..=2 {
        zoo.extend(samples(n)?);
        zoo.push(nerve(&FiniteCategory::iso_interval(), n)?);
        zoo.push(upsilon(&[terminal(n - 1), discrete(n - 1, 2)])?);
        let f = cell(n, n)?;
        zoo.push(f.cell);
        zoo.push(f.boundary);
        zoo.push(sigma(n, n)?.space);
    }
    let two = Pointed::new(discrete(1, 2), Cell::Atom(0))?;
    zoo.push(suspension(&two)?.object);
    zoo.push(delooping(&two));
    zoo.push(ck_monoidal(&MonoidObject::z2(0), 2)?);
    for p in &zoo {
        violations += check_functoriality(p, &w, true)?.violations.len();
        checked += 1;
    }

    // Pushouts of spans of inclusions: levelwise |P| + |Q| - |R|, the
    // coprojections are jointly surjective, and the induced map of the
    // universal cocone is the identity.
    let incs = sample_inclusions(1)?;
    let mut pushouts = 0;
    for f in &incs {
        for g in &incs {
            if !f.domain().same(g.domain()) {
                continue;
            }
            let po = pushout_named("po", f, g)?;
            violations += check_functoriality(&po.object, &w, false)?.violations.len();
            for m in w.objects(1) {
                let expect = f.codomain().count(&m)? + g.codomain().count(&m)? - f.domain().count(&m)?;
                let mut hit = BTreeSet::new();
                for c in f.codomain().evaluate(&m)?.cells() {
                    hit.insert(po.left.apply(&m, c)?);
                }
                for c in g.codomain().evaluate(&m)?.cells() {
                    hit.insert(po.right.apply(&m, c)?);
                }
                if po.object.count(&m)? != expect || hit.len() != expect {
                    violations += 1;
                }
            }
            let u = po.induced(&po.left, &po.right, Some(&w))?;
            violations += usize::from(!u.is_natural(&w)?);
            for m in w.objects(1) {
                for c in po.object.evaluate(&m)?.cells() {
                    violations += usize::from(&u.apply(&m, c)? != c);
                }
            }
            pushouts += 1;
        }
    }

    // Products: counts multiply, projections are natural, the pairing of the
    // projections is the identity, and ∗ is a unit.
    let s = samples(2)?;
    for a in &s {
        for b in &s {
            let ab = product(a, b)?;
            let pl = PrecatMap::new("pl", &ab, a, |_, c| Ok(c.as_pair().0.clone()))?;
            let pr = PrecatMap::new("pr", &ab, b, |_, c| Ok(c.as_pair().1.clone()))?;
            violations += usize::from(!pl.is_natural(&w)? || !pr.is_natural(&w)?);
            let (l2, r2) = (pl.clone(), pr.clone());
            let pairing = PrecatMap::new("pair", &ab, &ab, move |m, c| {
                Ok(Cell::pair(l2.apply_raw(m, c)?, r2.apply_raw(m, c)?))
            })?;
            for m in w.objects(2) {
                violations += usize::from(ab.count(&m)? != a.count(&m)? * b.count(&m)?);
                for c in ab.evaluate(&m)?.cells() {
                    violations += usize::from(&pairing.apply(&m, c)? != c);
                }
            }
        }
        let unit = product(&terminal(2), a)?;
        violations += usize::from(iso_windowed(&unit, a, &w)?.is_none());
        for m in w.objects(2) {
            violations += usize::from(terminal(2).count(&m)? != 1);
        }
    }
    Ok((violations == 0, format!("{checked} precats, {pushouts} pushouts, {} products; {violations} violations", s.len() * s.len())))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Verdict,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "casezero minimal-dimension table", limit: secs(1), run: casezero },
        Criterion { id: 2, name: "suspension tower, B=2", limit: secs(60), run: suspension_tower },
        Criterion { id: 3, name: "delooping is a suspension, B=2", limit: secs(60), run: delooping_is_suspension },
        Criterion { id: 4, name: "square, rem1, rem2 + legacy control, B=2", limit: secs(300), run: pushout_identities },
        Criterion { id: 5, name: "three-term decomposition, B=3", limit: secs(300), run: proveclaim },
        Criterion { id: 6, name: "Whitehead laws, B=3", limit: secs(300), run: whitehead_laws },
        Criterion { id: 7, name: "nerve/Segal round trip, p<=4", limit: secs(300), run: segal_round_trip },
        Criterion { id: 8, name: "strictness counterexample 3 vs 4", limit: secs(60), run: strictness_counterexample },
        Criterion { id: 9, name: "connectivity, B=3", limit: secs(300), run: connectivity },
        Criterion { id: 10, name: "infrastructure laws, B=2, n<=2", limit: secs(300), run: infrastructure },
    ];
    let mut all = true;
    for c in &criteria {
        let t = Instant::now();
        let verdict = (c.run)();
        let took = t.elapsed();
        let (ok, detail) = match verdict {
            Ok((ok, d)) => (ok && took <= c.limit, d),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "{} {:>2} {:<42} {:>8.2}s (limit {}s)  {detail}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
