use proptest::prelude::*;
use theta_core::theta::{compose, enumerate_morphisms, factor_into_generators};
use theta_core::window::Window;
use theta_core::{ThetaMorphism, ThetaObject};

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Morphisms in the quotient of Δⁿ: componentwise monotone maps, where
/// everything after a constant component is forgotten.
fn hom_count(a: &[u32], b: &[u32]) -> u64 {
    match (a.split_first(), b.split_first()) {
        (Some((&a1, at)), Some((&b1, bt))) => {
            let all = binom((a1 + b1 + 1) as u64, (a1 + 1) as u64);
            let constant = b1 as u64 + 1;
            constant + (all - constant) * hom_count(at, bt)
        }
        _ => 1,
    }
}

fn object(n: usize) -> impl Strategy<Value = ThetaObject> {
    prop::collection::vec(0u32..=2, n).prop_map(move |e| {
        ThetaObject::new(n, &e.iter().map(|&x| x as i64).collect::<Vec<_>>()).expect("entries are valid")
    })
}

fn padded(m: &ThetaObject) -> Vec<u32> {
    (0..m.n()).map(|j| m.padded(j)).collect()
}

/// A morphism between two random objects, when one exists (always).
fn morphism(n: usize) -> impl Strategy<Value = ThetaMorphism> {
    (object(n), object(n), any::<prop::sample::Index>()).prop_map(|(s, t, i)| {
        let all = enumerate_morphisms(&s, &t);
        all[i.index(all.len())].clone()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_sets_have_the_expected_size(n in 1usize..=3, s in 0u64..1000, t in 0u64..1000) {
        let w = Window::new(2).unwrap();
        let objs = w.objects(n);
        let (a, b) = (&objs[s as usize % objs.len()], &objs[t as usize % objs.len()]);
        let homs = enumerate_morphisms(a, b);
        prop_assert_eq!(homs.len() as u64, hom_count(&padded(a), &padded(b)));
        let mut dedup = homs.clone();
        dedup.sort_by_key(|f| format!("{f}"));
        dedup.dedup();
        prop_assert_eq!(dedup.len(), homs.len());
    }

    #[test]
    fn composition_is_associative(f in morphism(2), seeds in (any::<prop::sample::Index>(), any::<prop::sample::Index>(), object(2), object(2))) {
        let (i, j, u, v) = seeds;
        let gs = enumerate_morphisms(&u, f.source());
        let g = &gs[i.index(gs.len())];
        let hs = enumerate_morphisms(&v, &u);
        let h = &hs[j.index(hs.len())];
        let left = compose(&compose(&f, g).unwrap(), h).unwrap();
        let right = compose(&f, &compose(g, h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_units(f in morphism(3)) {
        let l = compose(&ThetaMorphism::identity(f.target()), &f).unwrap();
        let r = compose(&f, &ThetaMorphism::identity(f.source())).unwrap();
        prop_assert_eq!(&l, &f);
        prop_assert_eq!(&r, &f);
    }

    #[test]
    fn json_round_trip(f in morphism(3)) {
        prop_assert_eq!(ThetaMorphism::from_json(3, &f.to_json()).unwrap(), f);
    }

    #[test]
    fn factorization_uses_window_generators(f in morphism(3)) {
        let steps = factor_into_generators(&f);
        let gens = Window::new(2).unwrap().generators(3);
        let mut acc = ThetaMorphism::identity(f.source());
        for s in &steps {
            prop_assert!(gens.contains(s), "{} is not a generator", s);
            acc = compose(s, &acc).unwrap();
        }
        prop_assert_eq!(acc, f);
    }
}

#[test]
fn zero_entries_truncate() {
    let m = ThetaObject::new(3, &[2, 0, 1]).unwrap();
    assert_eq!(m.entries(), &[2]);
    assert!(ThetaObject::new(2, &[-1]).is_err());
    // maps into the terminal object are unique
    for s in Window::new(2).unwrap().objects(2) {
        assert_eq!(enumerate_morphisms(&s, &ThetaObject::zero(2)).len(), 1);
    }
}
