//! Finite n-precats: presheaves of finite sets on Θⁿ, evaluated lazily.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::par;
use crate::theta::{ThetaMorphism, ThetaObject};
use crate::window::Window;

/// The levelwise formula behind a [`Precat`].
///
/// `cells` and `act` must be deterministic; `act(f, c)` is only called with
/// `c` a cell of `cells(f.target())`.
pub trait Presheaf: Send + Sync {
    fn dim(&self) -> usize;
    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>>;
    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell>;
}

/// The cells of one level, sorted, with a reverse index.
#[derive(Debug)]
pub struct Level {
    cells: Vec<Cell>,
    index: HashMap<Cell, u32>,
}

impl Level {
    fn new(mut cells: Vec<Cell>) -> Result<Self> {
        cells.sort();
        let before = cells.len();
        cells.dedup();
        if cells.len() != before {
            return Err(Error::Construction("duplicate cell labels within one level".into()));
        }
        let index = cells.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        Ok(Level { cells, index })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.index.contains_key(c)
    }

    pub fn position(&self, c: &Cell) -> Option<u32> {
        self.index.get(c).copied()
    }
}

fn cache_limit() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var("THETA_CACHE_LEVELS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(usize::MAX)
    })
}

struct Inner {
    name: String,
    body: Box<dyn Presheaf>,
    cache: RwLock<HashMap<ThetaObject, Arc<Level>>>,
}

/// An n-precat. Cloning is cheap and shares the level cache.
#[derive(Clone)]
pub struct Precat {
    inner: Arc<Inner>,
}

impl fmt::Debug for Precat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Precat({}, n={})", self.inner.name, self.dim())
    }
}

impl Precat {
    pub fn new(name: impl Into<String>, body: impl Presheaf + 'static) -> Precat {
        Precat {
            inner: Arc::new(Inner {
                name: name.into(),
                body: Box::new(body),
                cache: RwLock::new(HashMap::new()),
            }),
        }
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn dim(&self) -> usize {
        self.inner.body.dim()
    }

    pub fn same(&self, other: &Precat) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    fn check_object(&self, m: &ThetaObject) -> Result<()> {
        if m.n() != self.dim() {
            return Err(Error::Domain(format!(
                "object {m} lives in dimension {}, precat {} has dimension {}",
                m.n(),
                self.name(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// The cell set at `m`, memoized.
    pub fn evaluate(&self, m: &ThetaObject) -> Result<Arc<Level>> {
        self.check_object(m)?;
        if let Some(l) = self.inner.cache.read().expect("cache poisoned").get(m) {
            return Ok(l.clone());
        }
        // Computed outside the lock: nested evaluations may recurse into
        // other precats (or other levels of this one).
        let level = Arc::new(Level::new(self.inner.body.cells(m)?)?);
        let mut cache = self.inner.cache.write().expect("cache poisoned");
        if let Some(existing) = cache.get(m) {
            return Ok(existing.clone());
        }
        if cache.len() < cache_limit() {
            cache.insert(m.clone(), level.clone());
        }
        Ok(level)
    }

    pub fn count(&self, m: &ThetaObject) -> Result<usize> {
        Ok(self.evaluate(m)?.len())
    }

    /// `f*(c)`, checking that `c` lives at the target of `f`.
    pub fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        self.check_object(f.target())?;
        if !self.evaluate(f.target())?.contains(c) {
            return Err(Error::Domain(format!("cell {c} is not at level {} of {}", f.target(), self.name())));
        }
        self.act_raw(f, c)
    }

    /// `f*(c)` without the membership check.
    pub fn act_raw(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        if f.is_identity() {
            return Ok(c.clone());
        }
        self.inner.body.act(f, c)
    }

    /// `f*(c)` straight from the levelwise formula, identities included.
    pub(crate) fn act_formula(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        self.inner.body.act(f, c)
    }

    /// Vertices `(x₀, …, x_p)` of a cell at level `m` (a cell at level 0 is
    /// its own single vertex).
    pub fn vertices(&self, m: &ThetaObject, c: &Cell) -> Result<Vec<Cell>> {
        if m.is_empty() {
            return Ok(vec![c.clone()]);
        }
        (0..=m.head()).map(|v| self.act_raw(&ThetaMorphism::vertex(m, v), c)).collect()
    }

    /// The degeneracy `d*(a)` at level `m` of an object `a`.
    pub fn degenerate(&self, a: &Cell, m: &ThetaObject) -> Result<Cell> {
        self.act_raw(&ThetaMorphism::to_zero(m), a)
    }

    /// All window levels, evaluated on the pool.
    pub fn window_levels(&self, w: &Window) -> Result<Vec<(ThetaObject, Arc<Level>)>> {
        let objs = w.objects(self.dim());
        par::map(&objs, |m| self.evaluate(m).map(|l| (m.clone(), l))).into_iter().collect()
    }

    pub fn objects(&self) -> Result<Arc<Level>> {
        self.evaluate(&ThetaObject::zero(self.dim()))
    }

    /// `A_{p/}(x₀, …, x_p)` as an (n−1)-precat. With `vertices = None` the
    /// whole `A_{p/}` is returned.
    pub fn slice(&self, p: u32, vertices: Option<Vec<Cell>>) -> Result<Precat> {
        if self.dim() == 0 {
            return Err(Error::InvalidArgument("a 0-precat has no slices".into()));
        }
        if let Some(v) = &vertices {
            if v.len() != p as usize + 1 {
                return Err(Error::InvalidArgument(format!("{} vertices given for p = {p}", v.len())));
            }
        }
        let name = match &vertices {
            None => format!("{}_{{{p}/}}", self.name()),
            Some(v) => format!(
                "{}_{{{p}/}}({})",
                self.name(),
                v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ),
        };
        Ok(Precat::new(name, Slice { base: self.clone(), p, vertices }))
    }

    /// `Hom_A(x, y) = A_{1/}(x, y)`.
    pub fn hom(&self, x: &Cell, y: &Cell) -> Result<Precat> {
        self.slice(1, Some(vec![x.clone(), y.clone()]))
    }

    /// Windowed equality of two precats: same cells at every level and the
    /// same action of every window generator.
    pub fn window_equal(&self, other: &Precat, w: &Window) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for m in w.objects(self.dim()) {
            if self.evaluate(&m)?.cells() != other.evaluate(&m)?.cells() {
                return Ok(false);
            }
        }
        let gens = w.generators(self.dim());
        let oks: Vec<Result<bool>> = par::map(&gens, |g| {
            for c in self.evaluate(g.target())?.cells() {
                if self.act_raw(g, c)? != other.act_raw(g, c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        for r in oks {
            if !r? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

struct Slice {
    base: Precat,
    p: u32,
    vertices: Option<Vec<Cell>>,
}

impl Presheaf for Slice {
    fn dim(&self) -> usize {
        self.base.dim() - 1
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        let level = ThetaObject::cons(self.p, m);
        let cells = self.base.evaluate(&level)?;
        match &self.vertices {
            None => Ok(cells.cells().to_vec()),
            Some(want) => {
                let mut out = Vec::new();
                for c in cells.cells() {
                    if &self.base.vertices(&level, c)? == want {
                        out.push(c.clone());
                    }
                }
                Ok(out)
            }
        }
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        if self.p == 0 {
            return Ok(c.clone());
        }
        let lifted = ThetaMorphism::prepend((0..=self.p).collect(), self.p, f);
        self.base.act_raw(&lifted, c)
    }
}

/// The terminal presheaf `∗`.
pub fn terminal(n: usize) -> Precat {
    Precat::new("*", Discrete { n, size: 1 })
}

/// The initial presheaf `∅`.
pub fn empty(n: usize) -> Precat {
    Precat::new("0", Discrete { n, size: 0 })
}

/// The constant presheaf on `{0, …, size−1}`; `discrete(n, 2)` is `2∗`.
pub fn discrete(n: usize, size: u32) -> Precat {
    let name = match size {
        0 => "0".to_string(),
        1 => "*".to_string(),
        k => format!("{k}*"),
    };
    Precat::new(name, Discrete { n, size })
}

struct Discrete {
    n: usize,
    size: u32,
}

impl Presheaf for Discrete {
    fn dim(&self) -> usize {
        self.n
    }

    fn cells(&self, _m: &ThetaObject) -> Result<Vec<Cell>> {
        Ok(if self.size == 1 { vec![Cell::Unit] } else { (0..self.size).map(Cell::Atom).collect() })
    }

    fn act(&self, _f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        Ok(c.clone())
    }
}

/// Objectwise cartesian product.
pub fn product(p: &Precat, q: &Precat) -> Result<Precat> {
    if p.dim() != q.dim() {
        return Err(Error::InvalidArgument(format!(
            "product of precats of dimensions {} and {}",
            p.dim(),
            q.dim()
        )));
    }
    Ok(Precat::new(format!("({}x{})", p.name(), q.name()), Product { left: p.clone(), right: q.clone() }))
}

struct Product {
    left: Precat,
    right: Precat,
}

impl Presheaf for Product {
    fn dim(&self) -> usize {
        self.left.dim()
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        let (a, b) = (self.left.evaluate(m)?, self.right.evaluate(m)?);
        let mut out = Vec::with_capacity(a.len() * b.len());
        for x in a.cells() {
            for y in b.cells() {
                out.push(Cell::pair(x.clone(), y.clone()));
            }
        }
        Ok(out)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        let (x, y) = c.as_pair();
        Ok(Cell::pair(self.left.act_raw(f, x)?, self.right.act_raw(f, y)?))
    }
}

/// A sub-presheaf cut out by a levelwise predicate. The predicate must be
/// closed under the action; `check_functoriality` catches violations.
pub fn subpresheaf<F>(name: impl Into<String>, base: &Precat, keep: F) -> Precat
where
    F: Fn(&ThetaObject, &Cell) -> Result<bool> + Send + Sync + 'static,
{
    Precat::new(name, Sub { base: base.clone(), keep: Box::new(keep) })
}

type Predicate = Box<dyn Fn(&ThetaObject, &Cell) -> Result<bool> + Send + Sync>;

struct Sub {
    base: Precat,
    keep: Predicate,
}

impl Presheaf for Sub {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        let mut out = Vec::new();
        for c in self.base.evaluate(m)?.cells() {
            if (self.keep)(m, c)? {
                out.push(c.clone());
            }
        }
        Ok(out)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        self.base.act_raw(f, c)
    }
}

/// The sub-presheaf `{a}` of degeneracies of an object.
pub fn point_of(base: &Precat, a: &Cell) -> Result<Precat> {
    if !base.objects()?.contains(a) {
        return Err(Error::Domain(format!("{a} is not an object of {}", base.name())));
    }
    let (b, a2) = (base.clone(), a.clone());
    Ok(subpresheaf(format!("{{{a}}}"), base, move |m, c| Ok(*c == b.degenerate(&a2, m)?)))
}

/// A precat given by an explicit function; used for hand-built presheaves.
pub fn from_fns<C, A>(name: impl Into<String>, n: usize, cells: C, act: A) -> Precat
where
    C: Fn(&ThetaObject) -> Result<Vec<Cell>> + Send + Sync + 'static,
    A: Fn(&ThetaMorphism, &Cell) -> Result<Cell> + Send + Sync + 'static,
{
    Precat::new(name, Fns { n, cells: Box::new(cells), act: Box::new(act) })
}

type CellsFn = Box<dyn Fn(&ThetaObject) -> Result<Vec<Cell>> + Send + Sync>;
type ActFn = Box<dyn Fn(&ThetaMorphism, &Cell) -> Result<Cell> + Send + Sync>;

struct Fns {
    n: usize,
    cells: CellsFn,
    act: ActFn,
}

impl Presheaf for Fns {
    fn dim(&self) -> usize {
        self.n
    }

    fn cells(&self, m: &ThetaObject) -> Result<Vec<Cell>> {
        (self.cells)(m)
    }

    fn act(&self, f: &ThetaMorphism, c: &Cell) -> Result<Cell> {
        (self.act)(f, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(n: usize, e: &[i64]) -> ThetaObject {
        ThetaObject::new(n, e).unwrap()
    }

    #[test]
    fn terminal_is_a_singleton_everywhere() {
        let t = terminal(2);
        for m in Window::new(2).unwrap().objects(2) {
            assert_eq!(t.count(&m).unwrap(), 1);
        }
    }

    #[test]
    fn product_counts_multiply() {
        let p = product(&discrete(1, 2), &discrete(1, 3)).unwrap();
        assert_eq!(p.count(&obj(1, &[2])).unwrap(), 6);
    }

    #[test]
    fn evaluation_is_stable() {
        let p = discrete(2, 3);
        let m = obj(2, &[1, 2]);
        let a = p.evaluate(&m).unwrap();
        let b = p.evaluate(&m).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn act_rejects_foreign_cells() {
        let p = discrete(1, 2);
        let m = obj(1, &[1]);
        let f = ThetaMorphism::identity(&m);
        assert!(matches!(p.act(&f, &Cell::Atom(7)), Err(Error::Domain(_))));
        assert!(matches!(p.act(&f, &Cell::Atom(1)), Ok(Cell::Atom(1))));
    }

    #[test]
    fn evaluate_rejects_wrong_dimension() {
        assert!(terminal(1).evaluate(&obj(2, &[1, 1])).is_err());
    }
}
