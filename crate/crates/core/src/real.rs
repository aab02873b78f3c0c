//! Scalar abstraction so the constants pipeline can run in `f64` or in an
//! arbitrary-precision binary float.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

/// Arithmetic needed by the closed-form constant formulas.
pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A literal at the same precision as `self`.
    fn lit(&self, v: f64) -> Self;
    /// A decimal literal rounded once at the working precision.
    fn dec(&self, s: &str) -> Self;
    fn to_f64(&self) -> f64;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn pi(&self) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon(&self) -> f64;
    /// Decimal rendering carrying every significant digit.
    fn render(&self) -> String {
        crate::report::format_float(self.to_f64())
    }

    fn powf(&self, y: &Self) -> Self {
        (self.ln() * y.clone()).exp()
    }
    fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.lit(1.0) / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.lit(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
    fn abs(&self) -> Self {
        if *self < self.lit(0.0) {
            -self.clone()
        } else {
            self.clone()
        }
    }
    fn recip(&self) -> Self {
        self.lit(1.0) / self.clone()
    }
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn lit(&self, v: f64) -> Self {
        v
    }
    fn dec(&self, s: &str) -> Self {
        s.parse().expect("decimal literal")
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn pi(&self) -> Self {
        std::f64::consts::PI
    }
    fn epsilon(&self) -> f64 {
        f64::EPSILON
    }
    fn powf(&self, y: &Self) -> Self {
        f64::powf(*self, *y)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
}

/// Precision mode selected by callers of the constants pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Binary significand of the given number of bits.
    Extended(usize),
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Double => write!(f, "double"),
            Precision::Extended(b) => write!(f, "extended:{b}"),
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "double" => Ok(Precision::Double),
            _ => {
                let bits = s
                    .strip_prefix("extended:")
                    .ok_or_else(|| format!("unknown precision `{s}` (use double or extended:BITS)"))?;
                let bits: usize = bits.parse().map_err(|_| format!("bad bit count in `{s}`"))?;
                if !(64..=4096).contains(&bits) {
                    return Err(format!("extended precision must be 64..=4096 bits, got {bits}"));
                }
                Ok(Precision::Extended(bits))
            }
        }
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

const RM: RoundingMode = RoundingMode::ToEven;

/// Binary floating point with a configurable significand width.
#[derive(Clone)]
pub struct Ext {
    v: BigFloat,
    prec: usize,
}

impl Ext {
    pub fn new(v: f64, prec: usize) -> Self {
        Ext { v: BigFloat::from_f64(v, prec), prec }
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Decimal rendering with all significant digits.
    pub fn to_decimal(&self) -> String {
        self.v.to_string()
    }

    fn wrap(&self, v: BigFloat) -> Self {
        Ext { v, prec: self.prec }
    }
}

impl fmt::Debug for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl PartialEq for Ext {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! ext_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Ext {
            type Output = Ext;
            fn $m(self, rhs: Ext) -> Ext {
                let p = self.prec.max(rhs.prec);
                Ext { v: self.v.$m(&rhs.v, p, RM), prec: p }
            }
        }
    };
}
ext_binop!(Add, add);
ext_binop!(Sub, sub);
ext_binop!(Mul, mul);
ext_binop!(Div, div);

impl Neg for Ext {
    type Output = Ext;
    fn neg(self) -> Ext {
        Ext { v: self.v.neg(), prec: self.prec }
    }
}

impl Real for Ext {
    fn lit(&self, v: f64) -> Self {
        Ext::new(v, self.prec)
    }
    fn dec(&self, s: &str) -> Self {
        CONSTS.with(|c| self.wrap(BigFloat::parse(s, Radix::Dec, self.prec, RM, &mut c.borrow_mut())))
    }
    fn to_f64(&self) -> f64 {
        self.v.to_string().parse().unwrap_or(f64::NAN)
    }
    fn exp(&self) -> Self {
        CONSTS.with(|c| self.wrap(self.v.exp(self.prec, RM, &mut c.borrow_mut())))
    }
    fn ln(&self) -> Self {
        CONSTS.with(|c| self.wrap(self.v.ln(self.prec, RM, &mut c.borrow_mut())))
    }
    fn sin(&self) -> Self {
        CONSTS.with(|c| self.wrap(self.v.sin(self.prec, RM, &mut c.borrow_mut())))
    }
    fn sqrt(&self) -> Self {
        self.wrap(self.v.sqrt(self.prec, RM))
    }
    fn pi(&self) -> Self {
        CONSTS.with(|c| self.wrap(c.borrow_mut().pi(self.prec, RM)))
    }
    fn render(&self) -> String {
        self.to_decimal()
    }
    fn epsilon(&self) -> f64 {
        2f64.powi(1 - self.prec as i32)
    }
}
