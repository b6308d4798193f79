use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Highest total derivative order held in the jet universe.
pub const JET_ORDER_MAX: usize = 4;

/// Direction of a total derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    X,
    T,
}

impl Dir {
    pub fn coord(self) -> Coord {
        match self {
            Dir::X => Coord::X,
            Dir::T => Coord::T,
        }
    }
}

/// Multi-index of a jet coordinate, stored as (t-order, x-order) so that
/// `u_tx` and `u_xt` are the same coordinate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Jet {
    pub t: u8,
    pub x: u8,
}

impl Jet {
    pub const ZERO: Jet = Jet { t: 0, x: 0 };

    pub fn new(t: u8, x: u8) -> Self {
        Jet { t, x }
    }

    pub fn order(self) -> usize {
        self.t as usize + self.x as usize
    }

    pub fn bump(self, dir: Dir) -> Jet {
        match dir {
            Dir::X => Jet { t: self.t, x: self.x + 1 },
            Dir::T => Jet { t: self.t + 1, x: self.x },
        }
    }

    /// Parses a suffix such as `tx`, `xt` or `xxt`.
    pub fn from_suffix(s: &str) -> Option<Jet> {
        let mut jet = Jet::ZERO;
        for ch in s.chars() {
            match ch {
                't' => jet.t += 1,
                'x' => jet.x += 1,
                _ => return None,
            }
        }
        Some(jet)
    }

    pub fn suffix(self) -> String {
        let mut s = "t".repeat(self.t as usize);
        s.push_str(&"x".repeat(self.x as usize));
        s
    }
}

/// Dependent variable: the unknown `u` or the adjoint variable `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    U,
    V,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::U => "u",
            Field::V => "v",
        }
    }
}

/// Base variables an arbitrary function symbol may depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    T,
    X,
    U,
}

impl Base {
    pub fn coord(self) -> Coord {
        match self {
            Base::T => Coord::T,
            Base::X => Coord::X,
            Base::U => Coord::u(),
        }
    }

    pub fn of_coord(c: &Coord) -> Option<Base> {
        match c {
            Coord::T => Some(Base::T),
            Coord::X => Some(Base::X),
            Coord::Dep(Field::U, j) if *j == Jet::ZERO => Some(Base::U),
            _ => None,
        }
    }

    fn letter(self) -> char {
        match self {
            Base::T => 't',
            Base::X => 'x',
            Base::U => 'u',
        }
    }

    fn index(self) -> usize {
        match self {
            Base::T => 0,
            Base::X => 1,
            Base::U => 2,
        }
    }
}

/// An arbitrary (unspecified) function of some base variables, together with
/// the orders of its partial derivatives. `q_tx{t,x}` is `∂²q/∂t∂x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FuncSym {
    pub name: String,
    pub args: Vec<Base>,
    /// Derivative orders in (t, x, u).
    pub derivs: [u8; 3],
}

impl FuncSym {
    pub fn new(name: &str, args: &[Base]) -> Self {
        let mut args = args.to_vec();
        args.sort();
        args.dedup();
        FuncSym {
            name: name.to_string(),
            args,
            derivs: [0; 3],
        }
    }

    pub fn depends_on(&self, b: Base) -> bool {
        self.args.contains(&b)
    }

    pub fn differentiate(&self, b: Base) -> Option<FuncSym> {
        if !self.depends_on(b) {
            return None;
        }
        let mut out = self.clone();
        out.derivs[b.index()] += 1;
        Some(out)
    }

    pub fn derivative_order(&self) -> usize {
        self.derivs.iter().map(|&d| d as usize).sum()
    }

    pub fn suffix(&self) -> String {
        let mut s = String::new();
        for b in [Base::T, Base::X, Base::U] {
            for _ in 0..self.derivs[b.index()] {
                s.push(b.letter());
            }
        }
        s
    }

    pub fn with_suffix(&self, suffix: &str) -> Option<FuncSym> {
        let mut out = self.clone();
        for ch in suffix.chars() {
            let b = match ch {
                't' => Base::T,
                'x' => Base::X,
                'u' => Base::U,
                _ => return None,
            };
            out = out.differentiate(b)?;
        }
        Some(out)
    }
}

/// A coordinate of the symbolic universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coord {
    /// The equation parameter λ.
    Lambda,
    X,
    T,
    /// `u`, `v` and their jets.
    Dep(Field, Jet),
    /// Similarity variable of a reduction.
    Eta,
    /// `f`, `f'`, `f''` of a reduced ODE.
    Reduced(u8),
    /// Named constant symbol (ε, k, Λ, ...).
    Const(String),
    Func(FuncSym),
}

impl Coord {
    pub fn u() -> Coord {
        Coord::Dep(Field::U, Jet::ZERO)
    }

    pub fn v() -> Coord {
        Coord::Dep(Field::V, Jet::ZERO)
    }

    /// Jet of `u` from a suffix such as `"tx"`.
    pub fn u_jet(suffix: &str) -> Coord {
        Coord::Dep(Field::U, Jet::from_suffix(suffix).expect("jet suffix uses only t and x"))
    }

    pub fn v_jet(suffix: &str) -> Coord {
        Coord::Dep(Field::V, Jet::from_suffix(suffix).expect("jet suffix uses only t and x"))
    }

    pub fn constant(name: &str) -> Coord {
        Coord::Const(name.to_string())
    }

    pub fn jet(&self) -> Option<(Field, Jet)> {
        match self {
            Coord::Dep(f, j) => Some((*f, *j)),
            _ => None,
        }
    }

    /// Whether this is a derivative coordinate (order ≥ 1) of `u` or `v`.
    pub fn is_jet(&self) -> bool {
        matches!(self, Coord::Dep(_, j) if j.order() > 0)
    }

    fn class(&self) -> u8 {
        match self {
            Coord::Lambda => 0,
            Coord::X => 1,
            Coord::T => 2,
            Coord::Dep(Field::U, j) if j.order() == 0 => 3,
            Coord::Dep(Field::V, j) if j.order() == 0 => 4,
            Coord::Dep(..) => 5,
            Coord::Eta => 6,
            Coord::Reduced(_) => 7,
            Coord::Const(_) => 8,
            Coord::Func(_) => 9,
        }
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.class().cmp(&other.class()).then_with(|| match (self, other) {
            (Coord::Dep(fa, ja), Coord::Dep(fb, jb)) => ja
                .order()
                .cmp(&jb.order())
                .then(fa.cmp(fb))
                .then(jb.t.cmp(&ja.t))
                .then(ja.x.cmp(&jb.x)),
            (Coord::Reduced(a), Coord::Reduced(b)) => a.cmp(b),
            (Coord::Const(a), Coord::Const(b)) => a.cmp(b),
            (Coord::Func(a), Coord::Func(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Lambda => write!(f, "λ"),
            Coord::X => write!(f, "x"),
            Coord::T => write!(f, "t"),
            Coord::Dep(field, j) if j.order() == 0 => write!(f, "{}", field.name()),
            Coord::Dep(field, j) => write!(f, "{}_{}", field.name(), j.suffix()),
            Coord::Eta => write!(f, "η"),
            Coord::Reduced(n) => write!(f, "f{}", "'".repeat(*n as usize)),
            Coord::Const(name) => write!(f, "{name}"),
            Coord::Func(sym) => {
                write!(f, "{}", sym.name)?;
                let suffix = sym.suffix();
                if !suffix.is_empty() {
                    write!(f, "_{suffix}")?;
                }
                let args: Vec<String> = sym.args.iter().map(|b| b.letter().to_string()).collect();
                write!(f, "{{{}}}", args.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_jets_are_one_coordinate() {
        assert_eq!(Coord::u_jet("tx"), Coord::u_jet("xt"));
        assert_eq!(Coord::u_jet("txx").to_string(), "u_txx");
    }

    #[test]
    fn coordinate_order_follows_convention() {
        let mut cs = vec![
            Coord::u_jet("x"),
            Coord::v(),
            Coord::u(),
            Coord::T,
            Coord::X,
            Coord::Lambda,
            Coord::u_jet("t"),
        ];
        cs.sort();
        let names: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["λ", "x", "t", "u", "v", "u_t", "u_x"]);
    }

    #[test]
    fn func_derivatives_accumulate() {
        let q = FuncSym::new("q", &[Base::X, Base::T]);
        let q_tx = q.differentiate(Base::X).unwrap().differentiate(Base::T).unwrap();
        assert_eq!(Coord::Func(q_tx.clone()).to_string(), "q_tx{t,x}");
        assert!(q.differentiate(Base::U).is_none());
        assert_eq!(q.with_suffix("xt"), Some(q_tx));
    }
}
