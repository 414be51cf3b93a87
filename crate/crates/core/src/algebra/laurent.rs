use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exponent vector of a character `e^λ = y_1^{λ_1} ⋯ y_r^{λ_r}`.
pub type Exponent = Vec<i32>;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sparse Laurent polynomial with exact rational coefficients in the
/// characters `y_i = e^{ω_i}` of the torus. Also used for ordinary
/// polynomials in the cohomology model (non-negative exponents only).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, integer(c))
    }

    pub fn monomial(exps: Exponent, c: Rational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The character `e^λ` of a weight in fundamental-weight coordinates.
    pub fn character(weight: &[i64]) -> Self {
        Self::monomial(weight.iter().map(|&x| x as i32).collect(), Rational::one())
    }

    /// `1 − e^λ`.
    pub fn one_minus_character(weight: &[i64]) -> Self {
        Self::one(weight.len()) - Self::character(weight)
    }

    /// The linear form `Σ λ_i x_i`, the cohomological weight of `λ`.
    pub fn linear_form(weight: &[i64]) -> Self {
        let n = weight.len();
        let mut terms = BTreeMap::new();
        for (i, &c) in weight.iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; n];
                e[i] = 1;
                terms.insert(e, integer(c));
            }
        }
        LaurentPoly { nvars: n, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Single term `c·e^λ`, if the polynomial is one.
    pub fn as_monomial(&self) -> Option<(&Exponent, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Image under `e^λ ↦ 1` (restriction to the trivial torus).
    pub fn specialize_characters(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `e^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (add_exp(e, shift), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a linear substitution to exponents (a Weyl group action on
    /// characters, for instance).
    pub fn map_exponents(&self, f: impl Fn(&Exponent) -> Exponent) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(f(e), c.clone());
        }
        out
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn min_exponents(&self) -> Exponent {
        let mut m = vec![i32::MAX; self.nvars];
        for e in self.terms.keys() {
            for (mi, &x) in m.iter_mut().zip(e) {
                *mi = (*mi).min(x);
            }
        }
        m
    }

    /// Exact quotient `a / b`; fails unless `b` divides `a` in the Laurent
    /// polynomial ring.
    pub fn exact_div(&self, b: &LaurentPoly) -> Result<LaurentPoly> {
        if b.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if let Some((be, bc)) = b.as_monomial() {
            let inv: Exponent = be.iter().map(|x| -x).collect();
            return Ok(self.shift(&inv).scale(&bc.recip()));
        }
        // Normalize both to polynomials with b not divisible by any variable;
        // then any Laurent quotient is a polynomial and lex division
        // terminates.
        let mb = b.min_exponents();
        let ma = self.min_exponents();
        let neg = |v: &Exponent| v.iter().map(|x| -x).collect::<Exponent>();
        let bp = b.shift(&neg(&mb));
        let mut r = self.shift(&neg(&ma));
        let (lead_e, lead_c) = bp
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
            .unwrap();
        let mut q = Self::zero(self.nvars);
        while let Some((re, rc)) = r
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            let diff: Exponent = re.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            if diff.iter().any(|&x| x < 0) {
                return Err(Error::NotDivisible(format!(
                    "{self} is not divisible by {b}"
                )));
            }
            let t = rc / &lead_c;
            for (be, bc) in &bp.terms {
                r.add_term(add_exp(be, &diff), -(bc * &t));
            }
            q.terms.insert(diff, t);
        }
        let shift: Exponent = ma.iter().zip(&mb).map(|(a, b)| a - b).collect();
        Ok(q.shift(&shift))
    }

    /// Canonical rendering with variable prefix `var` (`y` for characters).
    /// Terms are listed by decreasing total degree, then decreasing exponent.
    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: i64 = a.iter().map(|&x| x as i64).sum();
            let db: i64 = b.iter().map(|&x| x as i64).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (k, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono = render_monomial(e, var);
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => out.push_str(&render_rational(&abs)),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&render_rational(&abs));
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    /// Inverse of [`LaurentPoly::render`]. Accepts `+`/`-` separated terms of
    /// the form `c`, `c*m`, or `m`, where `m` is a `*`-product of `y<i>^<k>`.
    pub fn parse(s: &str, nvars: usize, var: &str) -> Result<Self> {
        let mut out = Self::zero(nvars);
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bytes = s.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                pieces.push(&s[start..i]);
                start = i;
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1, &piece[1..]),
                b'+' => (1, &piece[1..]),
                _ => (1, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let mut coeff = integer(sign);
            let mut exps = vec![0i32; nvars];
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix(var) {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p),
                        None => (rest, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable in {factor:?}")))?;
                    if idx == 0 || idx > nvars {
                        return Err(Error::Parse(format!("variable {factor:?} out of range")));
                    }
                    let pow: i32 = pow
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    exps[idx - 1] += pow;
                } else {
                    coeff *= parse_rational(factor)?;
                }
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }
}

fn add_exp(a: &[i32], b: &[i32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn render_monomial(e: &[i32], var: &str) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| {
            if x == 1 {
                format!("{var}{}", i + 1)
            } else {
                format!("{var}{}^{x}", i + 1)
            }
        })
        .collect();
    parts.join("*")
}

pub fn render_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("y"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.render("y"))
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exp(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        debug_assert_eq!(self.nvars, rhs.nvars);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        debug_assert_eq!(self.nvars, rhs.nvars);
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c);
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(k: i32) -> LaurentPoly {
        LaurentPoly::character(&[k as i64])
    }

    fn one() -> LaurentPoly {
        LaurentPoly::one(1)
    }

    #[test]
    fn products() {
        assert_eq!((&one() - &y(1)) * (&one() + &y(1)), &one() - &y(2));
        let a = LaurentPoly::parse("3 - 1/2*y1^-2", 1, "y").unwrap();
        assert_eq!(&one() * &a, a);
        let l = LaurentPoly::character(&[1, -2]);
        let m = LaurentPoly::character(&[3, 1]);
        assert_eq!(&l * &m, LaurentPoly::character(&[4, -1]));
    }

    #[test]
    fn exact_division() {
        let a = &one() - &y(2);
        assert_eq!(a.exact_div(&(&one() - &y(1))).unwrap(), &one() + &y(1));
        assert_eq!(a.exact_div(&one()).unwrap(), a);
        let b = &one() + &y(1).scale(&integer(2));
        assert!(matches!(a.exact_div(&b), Err(Error::NotDivisible(_))));
        assert!(a.exact_div(&LaurentPoly::zero(1)).is_err());
        // Laurent quotient with negative exponents
        let c = LaurentPoly::parse("y1^-3 - y1^-1", 1, "y").unwrap();
        let d = LaurentPoly::parse("1 - y1^2", 1, "y").unwrap();
        assert_eq!(c.exact_div(&d).unwrap(), y(-3));
    }

    #[test]
    fn render_and_parse() {
        let p = LaurentPoly::parse("1 - y1^-1", 1, "y").unwrap();
        assert_eq!(p.render("y"), "1 - y1^-1");
        let q = LaurentPoly::parse("-2/3*y1*y2^-1 + 5 + y2^3", 2, "y").unwrap();
        assert_eq!(LaurentPoly::parse(&q.render("y"), 2, "y").unwrap(), q);
        assert_eq!(LaurentPoly::zero(2).render("y"), "0");
        assert!(LaurentPoly::parse("y3", 2, "y").is_err());
        assert!(LaurentPoly::parse("1 +", 2, "y").is_err());
    }

    #[test]
    fn specialization() {
        let p = LaurentPoly::parse("1 - y1^-1", 1, "y").unwrap();
        assert!(p.specialize_characters().is_zero());
        assert!(y(-5).specialize_characters().is_one());
    }
}
