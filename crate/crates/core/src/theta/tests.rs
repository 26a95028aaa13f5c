use super::*;
use proptest::prelude::*;

fn obj(n: usize, e: &[i64]) -> ThetaObject {
    ThetaObject::new(n, e).unwrap()
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Hom count from the recursive description: a morphism into a nonempty
/// target either has a constant first component (one per target vertex) or
/// a non-constant one followed by a morphism of the tails.
fn count_oracle(m: &[u32], t: &[u32]) -> u64 {
    if t.is_empty() {
        return 1;
    }
    let b = t[0] as u64;
    let mut total = b + 1;
    if !m.is_empty() {
        let a = m[0] as u64;
        let nonconstant = binom(a + b + 1, a + 1) - (b + 1);
        total += nonconstant * count_oracle(&m[1..], &t[1..]);
    }
    total
}

fn all_objects(n: usize, bound: u32) -> Vec<ThetaObject> {
    crate::window::Window::new(bound).unwrap().objects(n)
}

#[test]
fn delta_hom_counts() {
    assert_eq!(enumerate_morphisms(&obj(1, &[1]), &obj(1, &[1])).len(), 3);
    assert_eq!(enumerate_morphisms(&obj(1, &[1]), &obj(1, &[2])).len(), 6);
    assert_eq!(enumerate_morphisms(&obj(2, &[1]), &obj(2, &[1, 1])).len(), 4);
}

#[test]
fn zero_truncates() {
    assert_eq!(obj(3, &[2, 0, 5]), obj(3, &[2]));
    assert!(ThetaObject::new(1, &[1, 1]).is_err());
    assert!(ThetaObject::new(2, &[-1]).is_err());
}

#[test]
fn hom_counts_match_recursive_oracle() {
    for n in 1..=3 {
        let objs = all_objects(n, 2);
        for s in &objs {
            for t in &objs {
                let got = enumerate_morphisms(s, t);
                assert_eq!(got.len() as u64, count_oracle(s.entries(), t.entries()), "{s} -> {t}");
                let mut dedup = got.clone();
                dedup.sort_by_key(|f| format!("{f}"));
                dedup.dedup();
                assert_eq!(dedup.len(), got.len());
            }
        }
    }
}

#[test]
fn stored_components_bounded() {
    for n in 1..=3 {
        let objs = all_objects(n, 2);
        for s in &objs {
            for t in &objs {
                for f in enumerate_morphisms(s, t) {
                    assert!(f.components().len() <= (s.len() + 1).min(t.len()));
                }
            }
        }
    }
}

#[test]
fn composition_is_associative_and_unital() {
    let n = 2;
    let objs = all_objects(n, 2);
    for a in &objs {
        for b in &objs {
            for g in enumerate_morphisms(a, b) {
                assert_eq!(compose(&ThetaMorphism::identity(b), &g).unwrap(), g);
                assert_eq!(compose(&g, &ThetaMorphism::identity(a)).unwrap(), g);
            }
        }
    }
    let small = all_objects(n, 1);
    for a in &small {
        for b in &small {
            for c in &small {
                for d in &small {
                    for h in enumerate_morphisms(a, b) {
                        for g in enumerate_morphisms(b, c) {
                            for f in enumerate_morphisms(c, d) {
                                let l = compose(&f, &compose(&g, &h).unwrap()).unwrap();
                                let r = compose(&compose(&f, &g).unwrap(), &h).unwrap();
                                assert_eq!(l, r);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn compose_rejects_mismatch() {
    let f = ThetaMorphism::identity(&obj(1, &[1]));
    let g = ThetaMorphism::identity(&obj(1, &[2]));
    assert!(matches!(compose(&f, &g), Err(Error::Composition(_))));
}

#[test]
fn generators_close_to_all_window_morphisms() {
    for (n, bound) in [(1usize, 3u32), (2, 2)] {
        let w = crate::window::Window::new(bound).unwrap();
        let all: std::collections::HashSet<ThetaMorphism> = w.morphisms(n).into_iter().collect();
        let mut closure: std::collections::HashSet<ThetaMorphism> =
            w.objects(n).iter().map(ThetaMorphism::identity).collect();
        let gens = w.generators(n);
        loop {
            let mut added = Vec::new();
            for f in &closure {
                for g in &gens {
                    if g.target() == f.source() {
                        let h = compose(f, g).unwrap();
                        if !closure.contains(&h) {
                            added.push(h);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            closure.extend(added);
        }
        assert_eq!(closure, all, "n={n} B={bound}");
    }
}

#[test]
fn factorization_recomposes() {
    for n in 1..=3 {
        let w = crate::window::Window::new(2).unwrap();
        for f in w.morphisms(n) {
            let steps = factor_into_generators(&f);
            let mut acc = ThetaMorphism::identity(f.source());
            for s in &steps {
                acc = compose(s, &acc).unwrap();
            }
            assert_eq!(acc, f);
            let gens = w.generators(n);
            for s in &steps {
                assert!(gens.contains(s), "{s} from {f} is not a window generator");
            }
        }
    }
}

#[test]
fn json_roundtrip_rejects_non_normal() {
    let f = enumerate_morphisms(&obj(2, &[1, 1]), &obj(2, &[2, 1]));
    for g in &f {
        assert_eq!(&ThetaMorphism::from_json(2, &g.to_json()).unwrap(), g);
    }
    // constant first component followed by a stored second one
    let bad = MorphismJson { source: vec![1, 1], target: vec![1, 1], components: vec![vec![0, 0], vec![0, 1]] };
    assert!(ThetaMorphism::from_json(2, &bad).is_err());
}

#[test]
fn segal_faces() {
    let fs = segal_face_family(3, &ThetaObject::zero(0)).unwrap();
    assert_eq!(fs.len(), 3);
    assert_eq!(fs[1].components(), &[vec![1, 2]]);
    assert!(segal_face_family(0, &ThetaObject::zero(0)).is_err());
}

fn arb_lift(n: usize, bound: u32) -> impl Strategy<Value = (Vec<u32>, Vec<u32>, Vec<Monotone>)> {
    (prop::collection::vec(0..=bound, n), prop::collection::vec(0..=bound, n)).prop_flat_map(move |(s, t)| {
        let comps: Vec<_> = (0..n)
            .map(|j| prop::collection::vec(0..=t[j], s[j] as usize + 1).prop_map(|mut v| {
                v.sort();
                v
            }))
            .collect();
        (Just(s), Just(t), comps)
    })
}

fn padded_obj(n: usize, e: &[u32]) -> ThetaObject {
    ThetaObject::new(n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap()
}

/// A Δⁿ lift between padded tuples whose entries beyond a zero are not zero
/// is not a morphism of padded objects; restrict to consistent tuples.
fn consistent(e: &[u32]) -> Vec<u32> {
    let cut = e.iter().position(|&x| x == 0).unwrap_or(e.len());
    let mut v = e.to_vec();
    for x in v.iter_mut().skip(cut) {
        *x = 0;
    }
    v
}

proptest! {
    #[test]
    fn composing_normal_forms_matches_composing_lifts(
        (s, m, g) in arb_lift(2, 2),
        seed in prop::collection::vec(0u32..100, 6),
    ) {
        let s = consistent(&s);
        let m = consistent(&m);
        let g: Vec<Monotone> = g.iter().enumerate().map(|(j, c)| {
            let mut c = c.clone();
            c.resize(s[j] as usize + 1, 0);
            c.iter().map(|&v| v.min(m[j])).collect()
        }).collect();
        let t: Vec<u32> = consistent(&[seed[0] % 3, seed[1] % 3]);
        let f: Vec<Monotone> = (0..2).map(|j| {
            let mut c: Vec<u32> = (0..=m[j]).map(|k| (seed[2 + j] + k * seed[4 + j]) % (t[j] + 1)).collect();
            c.sort();
            c
        }).collect();
        let (so, mo, to) = (padded_obj(2, &s), padded_obj(2, &m), padded_obj(2, &t));
        let gn = normalize_morphism(&so, &mo, &g).unwrap();
        let fn_ = normalize_morphism(&mo, &to, &f).unwrap();
        let direct: Vec<Monotone> = f.iter().zip(g.iter()).map(|(fc, gc)| gc.iter().map(|&v| fc[v as usize]).collect()).collect();
        let whole = normalize_morphism(&so, &to, &direct).unwrap();
        prop_assert_eq!(compose(&fn_, &gn).unwrap(), whole);
    }
}

