use std::fmt;
use std::sync::Arc;

/// A cell of a presheaf at some level.
///
/// The variant records which construction produced the cell; the payload is
/// unique within its level. Cells are compared structurally.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Cell {
    /// The unique cell of the terminal presheaf.
    Unit,
    /// An element of a discrete presheaf, or an object label.
    Atom(u32),
    /// A composable chain in a finite category: the start object and the
    /// arrows (empty for a bare object).
    Chain { start: u32, arrows: Arc<[u32]> },
    Pair(Arc<Cell>, Arc<Cell>),
    /// Pushout summands.
    Left(Arc<Cell>),
    Right(Arc<Cell>),
    /// A cell of Υᵏ: the vertex sequence and one factor per `E_j` with
    /// `y₀ < j ≤ y_p`.
    Simplex { vertices: Arc<[u32]>, factors: Arc<[Cell]> },
    /// A grid of carrier cells (monoidal delooping).
    Grid(Arc<[Cell]>),
    /// A cell of the `i`-th wedge summand of the delooping; the base cell is
    /// `Unit`.
    Wedge(u32, Arc<Cell>),
    /// A cell read back from a dump.
    Label(Arc<str>),
}

impl Cell {
    pub fn pair(a: Cell, b: Cell) -> Cell {
        Cell::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn left(a: Cell) -> Cell {
        Cell::Left(Arc::new(a))
    }

    pub fn right(a: Cell) -> Cell {
        Cell::Right(Arc::new(a))
    }

    pub fn simplex(vertices: Vec<u32>, factors: Vec<Cell>) -> Cell {
        Cell::Simplex { vertices: vertices.into(), factors: factors.into() }
    }

    pub fn chain(start: u32, arrows: Vec<u32>) -> Cell {
        Cell::Chain { start, arrows: arrows.into() }
    }

    pub fn label(s: &str) -> Cell {
        Cell::Label(s.into())
    }

    /// Splits a `Pair`; panics on anything else.
    pub fn as_pair(&self) -> (&Cell, &Cell) {
        match self {
            Cell::Pair(a, b) => (a, b),
            other => panic!("expected a pair cell, got {other}"),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Unit => write!(f, "*"),
            Cell::Atom(i) => write!(f, "{i}"),
            Cell::Chain { start, arrows } => {
                write!(f, "<{start}")?;
                for a in arrows.iter() {
                    write!(f, ".a{a}")?;
                }
                write!(f, ">")
            }
            Cell::Pair(a, b) => write!(f, "({a},{b})"),
            Cell::Left(a) => write!(f, "L{a}"),
            Cell::Right(a) => write!(f, "R{a}"),
            Cell::Simplex { vertices, factors } => {
                write!(f, "[")?;
                for (i, v) in vertices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                if !factors.is_empty() {
                    write!(f, "|")?;
                    for (i, c) in factors.iter().enumerate() {
                        if i > 0 {
                            write!(f, ";")?;
                        }
                        write!(f, "{c}")?;
                    }
                }
                write!(f, "]")
            }
            Cell::Grid(cells) => {
                write!(f, "{{")?;
                for (i, c) in cells.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
            Cell::Wedge(i, c) => write!(f, "w{i}:{c}"),
            Cell::Label(s) => write!(f, "{s}"),
        }
    }
}
