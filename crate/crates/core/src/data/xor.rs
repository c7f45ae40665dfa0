//! XOR aggregation trees over the eight variables `a`..`h`, and the two
//! aggregated-XOR datasets built from them.
//!
//! Trees have a small text form, `expr := var | "xor(" expr "," expr ")"`,
//! with whitespace ignored:
//!
//! ```
//! use antilearn_core::data::xor::{Assignment, XorExpr};
//!
//! let e: XorExpr = "xor(a, xor(b,c))".parse().unwrap();
//! let bits = Assignment::from_bits(&[1, 1, 1, 0, 0, 0, 0, 0]);
//! assert_eq!(e.eval(&bits), Ok(true));
//! assert_eq!(e.to_string(), "xor(a,xor(b,c))");
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{BinaryDataset, Encoding};
use crate::error::{Error, Result};

/// Number of input variables in every XOR dataset.
pub const VARIABLES: usize = 8;

/// One of the variables `a`..`h`; index 0 is `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u8);

impl Var {
    pub fn new(name: char) -> Option<Self> {
        match name {
            'a'..='h' => Some(Var(name as u8 - b'a')),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    pub fn name(self) -> char {
        char::from(b'a' + self.0)
    }

    pub fn all() -> impl Iterator<Item = Var> {
        (0..VARIABLES as u8).map(Var)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Partial map from variables to bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Assignment([Option<bool>; VARIABLES]);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `a`..`h` in order; nonzero means true.
    pub fn from_bits(bits: &[u8; VARIABLES]) -> Self {
        let mut a = Self::new();
        for (slot, &b) in a.0.iter_mut().zip(bits) {
            *slot = Some(b != 0);
        }
        a
    }

    pub fn set(&mut self, var: Var, bit: bool) -> &mut Self {
        self.0[var.index()] = Some(bit);
        self
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.0[var.index()]
    }
}

/// A binary tree of XOR nodes with variables at the leaves.
///
/// A variable may appear at several leaves or at none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum XorExpr {
    Var(Var),
    Xor(Box<XorExpr>, Box<XorExpr>),
}

impl XorExpr {
    pub fn var(name: char) -> Self {
        XorExpr::Var(Var::new(name).expect("variable must be in a..=h"))
    }

    pub fn xor(lhs: XorExpr, rhs: XorExpr) -> Self {
        XorExpr::Xor(Box::new(lhs), Box::new(rhs))
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<bool> {
        match self {
            XorExpr::Var(v) => assignment.get(*v).ok_or(Error::UnboundVariable(v.name())),
            XorExpr::Xor(l, r) => Ok(l.eval(assignment)? ^ r.eval(assignment)?),
        }
    }

    /// How many leaves name each variable, indexed `a`..`h`.
    pub fn leaf_counts(&self) -> [usize; VARIABLES] {
        let mut counts = [0; VARIABLES];
        self.visit_leaves(&mut |v| counts[v.index()] += 1);
        counts
    }

    fn visit_leaves(&self, f: &mut impl FnMut(Var)) {
        match self {
            XorExpr::Var(v) => f(*v),
            XorExpr::Xor(l, r) => {
                l.visit_leaves(f);
                r.visit_leaves(f);
            }
        }
    }
}

impl fmt::Display for XorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XorExpr::Var(v) => write!(f, "{v}"),
            XorExpr::Xor(l, r) => write!(f, "xor({l},{r})"),
        }
    }
}

impl FromStr for XorExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input after expression"));
        }
        Ok(expr)
    }
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::ExprParse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        for &b in token.as_bytes() {
            self.skip_ws();
            if self.src.get(self.pos) != Some(&b) {
                return Err(self.error(&format!("expected `{token}`")));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<XorExpr> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'x') => {
                self.expect("xor(")?;
                let lhs = self.expr()?;
                self.expect(",")?;
                let rhs = self.expr()?;
                self.expect(")")?;
                Ok(XorExpr::xor(lhs, rhs))
            }
            Some(&c) => match Var::new(char::from(c)) {
                Some(v) => {
                    self.pos += 1;
                    Ok(XorExpr::Var(v))
                }
                None => Err(self.error("expected a variable a..h or `xor(`")),
            },
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// `xor(xor(xor(a,b), xor(c,d)), xor(xor(e,f), xor(g,h)))`: the balanced tree.
pub fn pyramid_expr() -> XorExpr {
    let x = XorExpr::xor;
    let v = XorExpr::var;
    x(
        x(x(v('a'), v('b')), x(v('c'), v('d'))),
        x(x(v('e'), v('f')), x(v('g'), v('h'))),
    )
}

/// `xor(xor(xor(d,g), xor(a,d)), xor(xor(h,f), xor(d,b)))`: uses `d` three
/// times and never uses `c` or `e`.
pub fn random_expr() -> XorExpr {
    let x = XorExpr::xor;
    let v = XorExpr::var;
    x(
        x(x(v('d'), v('g')), x(v('a'), v('d'))),
        x(x(v('h'), v('f')), x(v('d'), v('b'))),
    )
}

/// Bits of row `index` in enumeration order: binary counting with `a` as the
/// most significant bit.
pub fn row_bits(index: usize) -> [u8; VARIABLES] {
    let mut bits = [0u8; VARIABLES];
    for (j, b) in bits.iter_mut().enumerate() {
        *b = ((index >> (VARIABLES - 1 - j)) & 1) as u8;
    }
    bits
}

/// All 256 assignments of `a`..`h`, labelled by `expr`.
pub fn xor_dataset(name: impl Into<String>, expr: &XorExpr) -> BinaryDataset {
    let feature_names = Var::all().map(|v| v.name().to_string()).collect();
    let mut rows = Vec::with_capacity(1 << VARIABLES);
    let mut labels = Vec::with_capacity(1 << VARIABLES);
    for i in 0..1usize << VARIABLES {
        let bits = row_bits(i);
        let y = expr
            .eval(&Assignment::from_bits(&bits))
            .expect("all eight variables are bound");
        rows.push(bits.iter().map(|&b| f64::from(b)).collect());
        labels.push(u8::from(y));
    }
    BinaryDataset::new(name, feature_names, Encoding::Boolean, rows, labels)
        .expect("enumerated rows are well formed")
}

pub fn pyramid_xor_dataset() -> BinaryDataset {
    xor_dataset("pyramid-xor", &pyramid_expr())
}

pub fn random_xor_dataset() -> BinaryDataset {
    xor_dataset("random-xor", &random_expr())
}
