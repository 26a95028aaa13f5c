//! Finite categories given by explicit composition tables.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: u32,
    pub target: u32,
}

/// Wire form: `compose` lists triples `[g, f, g∘f]`. Composites with an
/// identity may be omitted.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CategoryJson {
    #[serde(default)]
    pub name: String,
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub identities: Vec<u32>,
    #[serde(default)]
    pub compose: Vec<[u32; 3]>,
}

/// A validated finite category. Arrows are numbered `0..arrows.len()`.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    name: String,
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<u32>,
    compose: HashMap<(u32, u32), u32>,
}

impl FiniteCategory {
    /// Builds and validates a category; composites with identities are
    /// filled in when missing.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<u32>,
        compose: &[[u32; 3]],
    ) -> Result<FiniteCategory> {
        let bad = |m: String| Error::Construction(m);
        if identities.len() != objects.len() {
            return Err(bad(format!("{} identities for {} objects", identities.len(), objects.len())));
        }
        for a in &arrows {
            if a.source as usize >= objects.len() || a.target as usize >= objects.len() {
                return Err(bad(format!("arrow {} has an unknown endpoint", a.name)));
            }
        }
        for (x, &i) in identities.iter().enumerate() {
            let a = arrows.get(i as usize).ok_or_else(|| bad(format!("identity {i} is not an arrow")))?;
            if a.source as usize != x || a.target as usize != x {
                return Err(bad(format!("identity of object {x} is not an endomorphism of it")));
            }
        }
        let mut table = HashMap::new();
        for &[g, f, h] in compose {
            for a in [g, f, h] {
                if a as usize >= arrows.len() {
                    return Err(bad(format!("composition entry mentions unknown arrow {a}")));
                }
            }
            if table.insert((g, f), h).is_some_and(|prev| prev != h) {
                return Err(bad(format!("two values given for {g}∘{f}")));
            }
        }
        for (fi, f) in arrows.iter().enumerate() {
            let fi = fi as u32;
            let (ids, idt) = (identities[f.source as usize], identities[f.target as usize]);
            for (key, val) in [((fi, ids), fi), ((idt, fi), fi)] {
                if *table.entry(key).or_insert(val) != val {
                    return Err(bad(format!("identity law fails for arrow {}", f.name)));
                }
            }
        }
        let c = FiniteCategory { name: name.into(), objects, arrows, identities, compose: table };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Error::Construction(m);
        for (gi, g) in self.arrows.iter().enumerate() {
            for (fi, f) in self.arrows.iter().enumerate() {
                let key = (gi as u32, fi as u32);
                if f.target == g.source {
                    let h = *self
                        .compose
                        .get(&key)
                        .ok_or_else(|| bad(format!("composite {}∘{} missing", g.name, f.name)))?;
                    let ha = &self.arrows[h as usize];
                    if ha.source != f.source || ha.target != g.target {
                        return Err(bad(format!("composite {}∘{} has the wrong endpoints", g.name, f.name)));
                    }
                } else if self.compose.contains_key(&key) {
                    return Err(bad(format!("composite given for non-composable {}∘{}", g.name, f.name)));
                }
            }
        }
        for h in 0..self.arrows.len() as u32 {
            for g in self.arrows_from(self.arrows[h as usize].target) {
                for f in self.arrows_from(self.arrows[g as usize].target) {
                    let l = self.compose(f, self.compose(g, h));
                    let r = self.compose(self.compose(f, g), h);
                    if l != r {
                        return Err(bad(format!("associativity fails on arrows {f}, {g}, {h}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(j: &CategoryJson) -> Result<FiniteCategory> {
        FiniteCategory::new(j.name.clone(), j.objects.clone(), j.arrows.clone(), j.identities.clone(), &j.compose)
    }

    pub fn to_json(&self) -> CategoryJson {
        let mut compose: Vec<[u32; 3]> = self.compose.iter().map(|(&(g, f), &h)| [g, f, h]).collect();
        compose.sort();
        CategoryJson {
            name: self.name.clone(),
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            identities: self.identities.clone(),
            compose,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: u32) -> &Arrow {
        &self.arrows[a as usize]
    }

    pub fn identity(&self, x: u32) -> u32 {
        self.identities[x as usize]
    }

    pub fn is_identity(&self, a: u32) -> bool {
        self.identities[self.arrows[a as usize].source as usize] == a
    }

    /// `g ∘ f`; panics if they are not composable.
    pub fn compose(&self, g: u32, f: u32) -> u32 {
        self.compose[&(g, f)]
    }

    pub fn arrows_from(&self, x: u32) -> Vec<u32> {
        (0..self.arrows.len() as u32).filter(|&a| self.arrows[a as usize].source == x).collect()
    }

    pub fn hom(&self, x: u32, y: u32) -> Vec<u32> {
        (0..self.arrows.len() as u32)
            .filter(|&a| self.arrows[a as usize].source == x && self.arrows[a as usize].target == y)
            .collect()
    }

    pub fn non_identity_count(&self) -> usize {
        self.arrows.len() - self.objects.len()
    }

    /// Objects up to isomorphism: a representative (the least object) for
    /// each object.
    pub fn iso_classes(&self) -> Vec<u32> {
        let n = self.objects.len() as u32;
        let iso = |x: u32, y: u32| {
            self.hom(x, y).iter().any(|&f| {
                self.hom(y, x).iter().any(|&g| {
                    self.compose(g, f) == self.identity(x) && self.compose(f, g) == self.identity(y)
                })
            })
        };
        (0..n).map(|x| (0..=x).find(|&y| iso(y, x)).expect("x ≅ x")).collect()
    }

    // Named examples.

    pub fn point() -> FiniteCategory {
        FiniteCategory::preorder("point", 1, &[]).expect("valid")
    }

    /// `I`: objects 0, 1 and one arrow 0 → 1.
    pub fn interval() -> FiniteCategory {
        FiniteCategory::preorder("I", 2, &[(0, 1)]).expect("valid")
    }

    /// `Ī`: two objects and one isomorphism between them.
    pub fn iso_interval() -> FiniteCategory {
        FiniteCategory::preorder("Ibar", 2, &[(0, 1), (1, 0)]).expect("valid")
    }

    /// The ordinal `{0 < 1 < … < k}`.
    pub fn chain(k: u32) -> FiniteCategory {
        let rel: Vec<(u32, u32)> = (0..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
        FiniteCategory::preorder(format!("[{k}]"), k + 1, &rel).expect("valid")
    }

    /// The thin category generated by a relation (closed reflexively and
    /// transitively).
    pub fn preorder(name: impl Into<String>, size: u32, relation: &[(u32, u32)]) -> Result<FiniteCategory> {
        let s = size as usize;
        let mut le = vec![vec![false; s]; s];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relation {
            if i >= size || j >= size {
                return Err(Error::InvalidArgument(format!("relation pair ({i},{j}) out of range")));
            }
            le[i as usize][j as usize] = true;
        }
        for k in 0..s {
            for i in 0..s {
                for j in 0..s {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        let mut arrows = Vec::new();
        let mut id_of = HashMap::new();
        for i in 0..size {
            for j in 0..size {
                if le[i as usize][j as usize] {
                    id_of.insert((i, j), arrows.len() as u32);
                    arrows.push(Arrow { name: format!("{i}>{j}"), source: i, target: j });
                }
            }
        }
        let identities = (0..size).map(|i| id_of[&(i, i)]).collect();
        let mut compose = Vec::new();
        for (&(i, j), &f) in &id_of {
            for (&(j2, k), &g) in &id_of {
                if j == j2 {
                    compose.push([g, f, id_of[&(i, k)]]);
                }
            }
        }
        FiniteCategory::new(name, (0..size).map(|i| i.to_string()).collect(), arrows, identities, &compose)
    }

    /// The one-object category of a monoid on `{0..m-1}` with unit 0 and
    /// product `table[a][b] = a·b` (composition `g∘f = g·f`).
    pub fn monoid(name: impl Into<String>, table: &[Vec<u32>]) -> Result<FiniteCategory> {
        let m = table.len() as u32;
        let arrows = (0..m).map(|a| Arrow { name: format!("m{a}"), source: 0, target: 0 }).collect();
        let mut compose = Vec::new();
        for g in 0..m {
            for f in 0..m {
                compose.push([g, f, table[g as usize][f as usize]]);
            }
        }
        FiniteCategory::new(name, vec!["0".into()], arrows, vec![0], &compose)
    }

    /// `ℤ/2` as a one-object category.
    pub fn z2() -> FiniteCategory {
        FiniteCategory::monoid("Z2", &[vec![0, 1], vec![1, 0]]).expect("valid")
    }

    /// Two objects with two parallel arrows.
    pub fn kronecker() -> FiniteCategory {
        let arrows = vec![
            Arrow { name: "id0".into(), source: 0, target: 0 },
            Arrow { name: "id1".into(), source: 1, target: 1 },
            Arrow { name: "u".into(), source: 0, target: 1 },
            Arrow { name: "v".into(), source: 0, target: 1 },
        ];
        FiniteCategory::new("kronecker", vec!["0".into(), "1".into()], arrows, vec![0, 1], &[]).expect("valid")
    }

    /// Looks up a named category: `point`, `I`, `Ibar`, `Z2`, `kronecker`,
    /// `chainK`.
    pub fn named(name: &str) -> Result<FiniteCategory> {
        match name {
            "point" | "*" => Ok(FiniteCategory::point()),
            "I" => Ok(FiniteCategory::interval()),
            "Ibar" => Ok(FiniteCategory::iso_interval()),
            "Z2" => Ok(FiniteCategory::z2()),
            "kronecker" => Ok(FiniteCategory::kronecker()),
            _ => {
                if let Some(k) = name.strip_prefix("chain").and_then(|k| k.parse::<u32>().ok()) {
                    if k <= 6 {
                        return Ok(FiniteCategory::chain(k));
                    }
                }
                Err(Error::InvalidArgument(format!("unknown category {name:?}")))
            }
        }
    }
}

/// True if there are bijections on objects and arrows preserving sources,
/// targets, identities and composition.
pub fn categories_isomorphic(a: &FiniteCategory, b: &FiniteCategory) -> bool {
    if a.object_count() != b.object_count() || a.arrows.len() != b.arrows.len() {
        return false;
    }
    let n = a.object_count();
    let mut perm: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn objects(a: &FiniteCategory, b: &FiniteCategory, perm: &mut Vec<u32>, used: &mut Vec<bool>) -> bool {
        let n = a.object_count();
        if perm.len() == n {
            return arrows_match(a, b, perm);
        }
        let x = perm.len() as u32;
        for y in 0..n as u32 {
            if !used[y as usize] && a.hom(x, x).len() == b.hom(y, y).len() {
                used[y as usize] = true;
                perm.push(y);
                if objects(a, b, perm, used) {
                    return true;
                }
                perm.pop();
                used[y as usize] = false;
            }
        }
        false
    }
    objects(a, b, &mut perm, &mut used)
}

fn arrows_match(a: &FiniteCategory, b: &FiniteCategory, perm: &[u32]) -> bool {
    // Hom-sets must correspond; then search arrow bijections hom by hom.
    let homs: Vec<(u32, u32)> = (0..a.object_count() as u32)
        .flat_map(|x| (0..a.object_count() as u32).map(move |y| (x, y)))
        .collect();
    for &(x, y) in &homs {
        if a.hom(x, y).len() != b.hom(perm[x as usize], perm[y as usize]).len() {
            return false;
        }
    }
    let order: Vec<u32> = homs.iter().flat_map(|&(x, y)| a.hom(x, y)).collect();
    let mut map = vec![u32::MAX; a.arrows.len()];
    let mut used = vec![false; b.arrows.len()];
    fn go(a: &FiniteCategory, b: &FiniteCategory, perm: &[u32], order: &[u32], k: usize, map: &mut [u32], used: &mut [bool]) -> bool {
        if k == order.len() {
            return (0..a.arrows.len() as u32).all(|p| {
                (0..a.arrows.len() as u32).all(|q| {
                    a.arrow(q).target != a.arrow(p).source
                        || b.compose(map[p as usize], map[q as usize]) == map[a.compose(p, q) as usize]
                })
            });
        }
        let f = order[k];
        let fa = a.arrow(f);
        for g in b.hom(perm[fa.source as usize], perm[fa.target as usize]) {
            if used[g as usize] || a.is_identity(f) != b.is_identity(g) {
                continue;
            }
            map[f as usize] = g;
            used[g as usize] = true;
            let ok = (0..a.arrows.len() as u32).all(|h| {
                let (x, y) = (h, f);
                let mut pairs = vec![(x, y), (y, x)];
                pairs.dedup();
                pairs.into_iter().all(|(p, q)| {
                    if a.arrow(q).target != a.arrow(p).source {
                        return true;
                    }
                    let (mp, mq, mr) = (map[p as usize], map[q as usize], map[a.compose(p, q) as usize]);
                    mp == u32::MAX || mq == u32::MAX || mr == u32::MAX || b.compose(mp, mq) == mr
                })
            });
            if ok && go(a, b, perm, order, k + 1, map, used) {
                return true;
            }
            used[g as usize] = false;
            map[f as usize] = u32::MAX;
        }
        false
    }
    go(a, b, perm, &order, 0, &mut map, &mut used)
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u32);
            out.push(q);
        }
    }
    out
}

/// Every preorder on 1 to `max_objects` points, one per isomorphism class.
pub fn all_preorders(max_objects: u32) -> Vec<FiniteCategory> {
    let mut out = Vec::new();
    for size in 1..=max_objects {
        let s = size as usize;
        let pairs: Vec<(u32, u32)> = (0..size).flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1 << pairs.len()) {
            let rel: Vec<(u32, u32)> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p).collect();
            let mut le = vec![vec![false; s]; s];
            for &(i, j) in &rel {
                le[i as usize][j as usize] = true;
            }
            let get = |i: usize, j: usize| i == j || le[i][j];
            let transitive = (0..s).all(|i| (0..s).all(|j| (0..s).all(|k| !(get(i, j) && get(j, k)) || get(i, k))));
            if !transitive {
                continue;
            }
            let canon = permutations(s)
                .into_iter()
                .map(|p| {
                    let mut bits: Vec<(u32, u32)> = rel.iter().map(|&(i, j)| (p[i as usize], p[j as usize])).collect();
                    bits.sort();
                    bits
                })
                .min()
                .expect("nonempty");
            if seen.insert(canon.clone()) {
                out.push(FiniteCategory::preorder(format!("preorder{size}:{canon:?}"), size, &canon).expect("valid"));
            }
        }
    }
    out
}

/// Every monoid of order 2..=`max_order`, one per isomorphism class.
pub fn all_monoids(max_order: u32) -> Vec<FiniteCategory> {
    let mut out = Vec::new();
    for m in 2..=max_order {
        let mu = m as usize;
        let free: Vec<(usize, usize)> = (1..mu).flat_map(|a| (1..mu).map(move |b| (a, b))).collect();
        let total = (mu as u64).pow(free.len() as u32);
        let mut seen = BTreeSet::new();
        for code in 0..total {
            let mut t = vec![vec![0u32; mu]; mu];
            t[0] = (0..m).collect();
            for (a, row) in t.iter_mut().enumerate() {
                row[0] = a as u32;
            }
            let mut c = code;
            for &(a, b) in &free {
                t[a][b] = (c % m as u64) as u32;
                c /= m as u64;
            }
            let assoc = (0..mu).all(|a| (0..mu).all(|b| (0..mu).all(|d| t[t[a][b] as usize][d] == t[a][t[b][d] as usize])));
            if !assoc {
                continue;
            }
            let canon = permutations(mu - 1)
                .into_iter()
                .map(|p| {
                    let mut full = vec![0u32];
                    full.extend(p.iter().map(|&x| x + 1));
                    let mut inv = vec![0u32; mu];
                    for (i, &x) in full.iter().enumerate() {
                        inv[x as usize] = i as u32;
                    }
                    (0..mu)
                        .map(|a| (0..mu).map(|b| full[t[inv[a] as usize][inv[b] as usize] as usize]).collect::<Vec<u32>>())
                        .collect::<Vec<_>>()
                })
                .min()
                .expect("nonempty");
            if seen.insert(canon.clone()) {
                out.push(FiniteCategory::monoid(format!("monoid{m}:{canon:?}"), &canon).expect("valid"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_examples() {
        assert_eq!(FiniteCategory::interval().arrows().len(), 3);
        assert_eq!(FiniteCategory::iso_interval().arrows().len(), 4);
        assert_eq!(FiniteCategory::iso_interval().iso_classes(), vec![0, 0]);
        assert_eq!(FiniteCategory::interval().iso_classes(), vec![0, 1]);
        assert_eq!(FiniteCategory::chain(2).arrows().len(), 6);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let arrows = vec![
            Arrow { name: "id".into(), source: 0, target: 0 },
            Arrow { name: "f".into(), source: 0, target: 0 },
        ];
        // f∘f missing
        assert!(FiniteCategory::new("x", vec!["0".into()], arrows.clone(), vec![0], &[]).is_err());
        // wrong identity
        assert!(FiniteCategory::new("x", vec!["0".into()], arrows, vec![0], &[[1, 1, 0], [0, 1, 0]]).is_err());
    }

    #[test]
    fn preorder_counts() {
        // Preorders up to isomorphism on 1, 2, 3 points: 1, 3, 9.
        let all = all_preorders(3);
        let by_size = |k| all.iter().filter(|c| c.object_count() == k).count();
        assert_eq!((by_size(1), by_size(2), by_size(3)), (1, 3, 9));
    }

    #[test]
    fn monoid_counts() {
        // Monoids of order 2 and 3 up to isomorphism: 2 and 7.
        let all = all_monoids(3);
        let by_size = |k| all.iter().filter(|c| c.arrows().len() == k).count();
        assert_eq!((by_size(2), by_size(3)), (2, 7));
    }

    #[test]
    fn isomorphism_ignores_labels() {
        let a = FiniteCategory::preorder("a", 2, &[(0, 1)]).unwrap();
        let b = FiniteCategory::preorder("b", 2, &[(1, 0)]).unwrap();
        assert!(categories_isomorphic(&a, &b));
        assert!(!categories_isomorphic(&a, &FiniteCategory::iso_interval()));
        assert!(!categories_isomorphic(&FiniteCategory::z2(), &all_monoids(2)[0]) || !categories_isomorphic(&FiniteCategory::z2(), &all_monoids(2)[1]));
    }

    #[test]
    fn json_roundtrip() {
        let c = FiniteCategory::kronecker();
        let back = FiniteCategory::from_json(&c.to_json()).unwrap();
        assert!(categories_isomorphic(&c, &back));
    }
}
