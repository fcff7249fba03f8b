//! Exact arithmetic in the parameter ring `Q[q^±1, q_ij^±1 : i < j]`.
//!
//! The free variables are `q` and `q_ij` for `i < j`. Everything else
//! (`q_ji`, `p_ij`, `p_ji`, the diagonal entries) is a derived monomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::Error;

/// A label of a row or column, counted from 1.
pub type Label = u8;

/// Whether q_ij are independent variables or all equal to q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "1param")]
    OneParam,
    #[serde(rename = "multiparam")]
    MultiParam,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::OneParam => "1param",
            Mode::MultiParam => "multiparam",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "1param" | "oneparam" | "one-param" => Ok(Mode::OneParam),
            "multiparam" | "multi-param" => Ok(Mode::MultiParam),
            other => Err(Error::Validation(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamSpec {
    n: usize,
    mode: Mode,
}

impl ParamSpec {
    pub fn new(n: usize, mode: Mode) -> Result<Self, Error> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::Validation(format!("matrix size {n} out of range")));
        }
        Ok(Self { n, mode })
    }

    pub fn multi(n: usize) -> Self {
        Self::new(n, Mode::MultiParam).expect("valid size")
    }

    pub fn one(n: usize) -> Self {
        Self::new(n, Mode::OneParam).expect("valid size")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        Self { n: self.n, mode }
    }

    pub fn check_label(&self, i: Label) -> Result<Label, Error> {
        if i == 0 || i as usize > self.n {
            Err(Error::LabelOutOfRange { label: i as usize, n: self.n })
        } else {
            Ok(i)
        }
    }

    /// `q_ij`; descending indices give the inverse, the diagonal gives 1.
    pub fn q_param(&self, i: Label, j: Label) -> Result<Scalar, Error> {
        self.check_label(i)?;
        self.check_label(j)?;
        Ok(match self.mode {
            Mode::MultiParam => match i.cmp(&j) {
                Ordering::Less => Scalar::var(Var::pair(i, j)),
                Ordering::Greater => Scalar::monomial(Monomial::var_pow(Var::pair(j, i), -1)),
                Ordering::Equal => Scalar::one(),
            },
            Mode::OneParam => Scalar::q_pow(match i.cmp(&j) {
                Ordering::Less => 1,
                Ordering::Greater => -1,
                Ordering::Equal => 0,
            }),
        })
    }

    /// `p_ij = q^2 q_ij^-1` for `i < j`, with `p_ji = p_ij^-1`.
    pub fn p_param(&self, i: Label, j: Label) -> Result<Scalar, Error> {
        self.check_label(i)?;
        self.check_label(j)?;
        Ok(match self.mode {
            Mode::MultiParam => match i.cmp(&j) {
                Ordering::Less => {
                    Scalar::monomial(Monomial::var_pow(Var::Q, 2).mul(&Monomial::var_pow(Var::pair(i, j), -1)))
                }
                Ordering::Greater => {
                    Scalar::monomial(Monomial::var_pow(Var::Q, -2).mul(&Monomial::var_pow(Var::pair(j, i), 1)))
                }
                Ordering::Equal => Scalar::one(),
            },
            Mode::OneParam => Scalar::q_pow(match i.cmp(&j) {
                Ordering::Less => 1,
                Ordering::Greater => -1,
                Ordering::Equal => 0,
            }),
        })
    }
}

/// A parameter variable: `q` or `q_ij` with `i < j`.
///
/// `q` is encoded as the pair `(0, 0)` so that the derived order puts it
/// first and orders the `q_ij` lexicographically by `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    i: Label,
    j: Label,
}

impl Var {
    pub const Q: Var = Var { i: 0, j: 0 };

    pub fn pair(i: Label, j: Label) -> Var {
        assert!(0 < i && i < j, "q_ij requires 0 < i < j");
        Var { i, j }
    }

    pub fn is_q(&self) -> bool {
        self.i == 0
    }

    pub fn indices(&self) -> Option<(Label, Label)> {
        (!self.is_q()).then_some((self.i, self.j))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices() {
            None => f.write_str("q"),
            Some((i, j)) if i < 10 && j < 10 => write!(f, "q{i}{j}"),
            Some((i, j)) => write!(f, "q_{{{i},{j}}}"),
        }
    }
}

/// A Laurent monomial; sparse, sorted by variable, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[(Var, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(smallvec::smallvec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().copied()
    }

    fn merge(&self, other: &Self, sign: i32) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            let pick = match (a.get(x), b.get(y)) {
                (Some(l), Some(r)) => l.0.cmp(&r.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match pick {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push((b[y].0, sign * b[y].1));
                    y += 1;
                }
                Ordering::Equal => {
                    let e = a[x].1 + sign * b[y].1;
                    if e != 0 {
                        out.push((a[x].0, e));
                    }
                    x += 1;
                    y += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.merge(other, -1)
    }

    pub fn inv(&self) -> Self {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Substitutes `q_ij -> q`.
    pub fn specialize(&self) -> Self {
        let total: i32 = self.0.iter().map(|(_, e)| e).sum();
        Self::var_pow(Var::Q, total)
    }
}

/// Lexicographic order on the dense exponent vector `(q, q12, q13, ...)`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut x, mut y) = (0, 0);
        loop {
            let (va, ea, vb, eb) = match (a.get(x), b.get(y)) {
                (None, None) => return Ordering::Equal,
                (Some(l), None) => (l.0, l.1, l.0, 0),
                (None, Some(r)) => (r.0, 0, r.0, r.1),
                (Some(l), Some(r)) => match l.0.cmp(&r.0) {
                    Ordering::Less => (l.0, l.1, l.0, 0),
                    Ordering::Greater => (r.0, 0, r.0, r.1),
                    Ordering::Equal => (l.0, l.1, r.0, r.1),
                },
            };
            match ea.cmp(&eb) {
                Ordering::Equal => {}
                ord => return ord,
            }
            if a.get(x).is_some_and(|l| l.0 == va) {
                x += 1;
            }
            if b.get(y).is_some_and(|r| r.0 == vb) {
                y += 1;
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// An element of the parameter ring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::term(BigRational::from_integer(BigInt::from(c)), Monomial::one())
    }

    pub fn rational(c: BigRational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(BigRational::one(), m)
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var_pow(v, 1))
    }

    pub fn q() -> Self {
        Self::var(Var::Q)
    }

    pub fn q_pow(e: i32) -> Self {
        Self::monomial(Monomial::var_pow(Var::Q, e))
    }

    /// `q_ij` for `i < j` as a free variable.
    pub fn qij(i: Label, j: Label) -> Self {
        Self::var(Var::pair(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn as_monomial(&self) -> Option<(&BigRational, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplies by a single term.
    pub fn mul_term(&self, c: &BigRational, m: &Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    /// Inverse of a single-term Scalar.
    pub fn inv(&self) -> Result<Self, Error> {
        match self.as_monomial() {
            Some((c, m)) => Ok(Self::term(c.recip(), m.inv())),
            None => Err(Error::NonInvertible(self.to_string())),
        }
    }

    pub fn pow(&self, k: i32) -> Result<Self, Error> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// Substitutes `q_ij -> q` for every `i < j`.
    pub fn specialize_one_param(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.specialize(), c.clone());
        }
        out
    }

    /// Whether only `q` occurs.
    pub fn is_one_param(&self) -> bool {
        self.terms.keys().all(|m| m.factors().all(|(v, _)| v.is_q()))
    }

    /// Largest label occurring in any `q_ij`.
    pub fn max_label(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.factors())
            .filter_map(|(v, _)| v.indices())
            .map(|(_, j)| j as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn canonical_string(&self) -> String {
        self.to_string()
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write_rational(f, &abs)?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write_rational(f, &abs)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<i64> for Scalar {
    fn from(c: i64) -> Self {
        Scalar::int(c)
    }
}

impl From<Monomial> for Scalar {
    fn from(m: Monomial) -> Self {
        Scalar::monomial(m)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let (m, c) = small.terms.iter().next().expect("one term");
            return large.mul_term(c, m);
        }
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}
