use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::One;

use super::laurent::{integer, LaurentPoly, Rational};
use crate::error::{Error, Result};

/// Default truncation order on total `t`-degree.
pub const DEFAULT_ORDER: u32 = 4;

/// Novikov monomial: either `1` or `Q_α` for a single line degree `α`
/// (a 0-based simple-root index). Products of two `Q`'s vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Novikov {
    One,
    Q(usize),
}

impl Novikov {
    pub(crate) fn mul(self, other: Novikov) -> Option<Novikov> {
        match (self, other) {
            (Novikov::One, n) | (n, Novikov::One) => Some(n),
            _ => None,
        }
    }
}

/// Term key, ordered by Novikov flag, total `t`-degree, then exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub novikov: Novikov,
    pub degree: u32,
    pub exps: Vec<u32>,
}

impl TermKey {
    /// Total `t`-degree plus the Novikov degree.
    pub fn weight(&self) -> u32 {
        self.degree + u32::from(self.novikov != Novikov::One)
    }

    pub fn new(novikov: Novikov, exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        TermKey {
            novikov,
            degree,
            exps,
        }
    }
}

/// Truncated power series in `t_0, …, t_{m-1}` with Novikov part in
/// `{1, Q_α}` and Laurent coefficients; terms of total `t`-degree above
/// `order` are dropped.
#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    nvars: usize,
    rank: usize,
    order: u32,
    terms: BTreeMap<TermKey, LaurentPoly>,
}

impl TSeries {
    pub fn zero(nvars: usize, rank: usize, order: u32) -> Self {
        TSeries {
            nvars,
            rank,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: LaurentPoly) -> Self {
        let mut s = Self::zero(nvars, c.nvars(), order);
        s.add_term(TermKey::new(Novikov::One, vec![0; nvars]), c);
        s
    }

    pub fn one(nvars: usize, rank: usize, order: u32) -> Self {
        Self::constant(nvars, order, LaurentPoly::one(rank))
    }

    /// The single term `c · Q^n · t^exps`.
    pub fn term(order: u32, novikov: Novikov, exps: Vec<u32>, c: LaurentPoly) -> Self {
        let mut s = Self::zero(exps.len(), c.nvars(), order);
        s.add_term(TermKey::new(novikov, exps), c);
        s
    }

    /// The variable `t_k`.
    pub fn var(nvars: usize, rank: usize, order: u32, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Self::term(order, Novikov::One, e, LaurentPoly::one(rank))
    }

    pub fn novikov(nvars: usize, rank: usize, order: u32, alpha: usize) -> Self {
        Self::term(
            order,
            Novikov::Q(alpha),
            vec![0; nvars],
            LaurentPoly::one(rank),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, novikov: Novikov, exps: &[u32]) -> LaurentPoly {
        self.terms
            .get(&TermKey::new(novikov, exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.rank))
    }

    /// Novikov monomials occurring with a nonzero coefficient.
    pub fn novikov_support(&self) -> Vec<Novikov> {
        let mut v: Vec<Novikov> = self.terms.keys().map(|k| k.novikov).collect();
        v.dedup();
        v
    }

    /// Adds `c` to the coefficient of `key`, ignoring terms beyond the order.
    pub fn add_term(&mut self, key: TermKey, c: LaurentPoly) {
        if key.degree > self.order || c.is_zero() {
            return;
        }
        debug_assert_eq!(key.exps.len(), self.nvars);
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn with_order(&self, order: u32) -> Self {
        let mut out = Self::zero(self.nvars, self.rank, order);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.nvars, self.rank, self.order);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map_coeffs(|v| v.scale(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let mut out = Self::zero(self.nvars, self.rank, self.order);
        for (k, v) in &self.terms {
            let c = f(v);
            out.rank = c.nvars();
            out.add_term(k.clone(), c);
        }
        out
    }

    /// Restriction to `t_k = 0`.
    pub fn set_var_zero(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.rank, self.order);
        for (key, v) in &self.terms {
            if key.exps[k] == 0 {
                out.add_term(key.clone(), v.clone());
            }
        }
        out
    }

    /// Restriction to all `t = 0`; what remains is a polynomial in `Q`.
    pub fn at_t_zero(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.rank, self.order);
        for (key, v) in &self.terms {
            if key.degree == 0 {
                out.add_term(key.clone(), v.clone());
            }
        }
        out
    }

    /// `∂/∂t_k`. The result is exact up to order `order − 1`.
    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.rank, self.order.saturating_sub(1));
        for (key, v) in &self.terms {
            let e = key.exps[k];
            if e == 0 {
                continue;
            }
            let mut exps = key.exps.clone();
            exps[k] -= 1;
            out.add_term(TermKey::new(key.novikov, exps), v.scale(&integer(e as i64)));
        }
        out
    }

    fn check_compatible(&self, other: &TSeries) {
        debug_assert_eq!(self.nvars, other.nvars, "t-variable count mismatch");
    }

    /// `exp(s)` truncated at the order of `s`; `s` must have no constant term.
    pub fn exp(&self) -> Result<TSeries> {
        for key in self.terms.keys() {
            if key.weight() == 0 {
                return Err(Error::InvalidArgument(
                    "exp of a series with nonzero constant term".into(),
                ));
            }
        }
        let mut result = Self::one(self.nvars, self.rank, self.order);
        let mut power = Self::one(self.nvars, self.rank, self.order);
        let mut k = 0i64;
        loop {
            k += 1;
            power = &power * self;
            if power.is_zero() {
                break;
            }
            result = &result + &power.scale_rational(&Rational::new(1.into(), factorial(k)));
        }
        Ok(result)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.rank, self.order);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Renders the series with `names[k]` for `t_k` and `y` characters.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(key, c)| {
                let mut mono = Vec::new();
                if let Novikov::Q(a) = key.novikov {
                    mono.push(format!("Q{}", a + 1));
                }
                for (k, &e) in key.exps.iter().enumerate() {
                    if e == 1 {
                        mono.push(names[k].clone());
                    } else if e > 1 {
                        mono.push(format!("{}^{e}", names[k]));
                    }
                }
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

pub(crate) fn factorial(k: i64) -> num::BigInt {
    (1..=k).fold(num::BigInt::one(), |acc, i| acc * i)
}

/// Rational `1/h!` for an exponent vector.
pub fn inverse_factorial(exps: &[u32]) -> Rational {
    let mut d = num::BigInt::one();
    for &e in exps {
        d *= factorial(e as i64);
    }
    Rational::new(num::BigInt::one(), d)
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|k| format!("t{k}")).collect();
        write!(f, "TSeries[N={}]({})", self.order, self.render(&names))
    }
}

impl Add<&TSeries> for &TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        self.check_compatible(rhs);
        let mut out = self.with_order(self.order.min(rhs.order));
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Sub<&TSeries> for &TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        self + &(-rhs)
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        self.map_coeffs(|c| -c)
    }
}

impl Mul<&TSeries> for &TSeries {
    type Output = TSeries;
    fn mul(self, rhs: &TSeries) -> TSeries {
        self.check_compatible(rhs);
        let order = self.order.min(rhs.order);
        let mut out = TSeries::zero(self.nvars, self.rank, order);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                if ka.degree + kb.degree > order {
                    // keys are sorted by degree within each Novikov block
                    continue;
                }
                let Some(nov) = ka.novikov.mul(kb.novikov) else {
                    continue;
                };
                let exps: Vec<u32> = ka.exps.iter().zip(&kb.exps).map(|(a, b)| a + b).collect();
                out.add_term(TermKey::new(nov, exps), ca * cb);
            }
        }
        out
    }
}

impl Add for TSeries {
    type Output = TSeries;
    fn add(self, rhs: TSeries) -> TSeries {
        &self + &rhs
    }
}

impl Sub for TSeries {
    type Output = TSeries;
    fn sub(self, rhs: TSeries) -> TSeries {
        &self - &rhs
    }
}

impl Mul for TSeries {
    type Output = TSeries;
    fn mul(self, rhs: TSeries) -> TSeries {
        &self * &rhs
    }
}
