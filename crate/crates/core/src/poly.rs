//! Sparse multivariate polynomials over the rationals in named parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::kernel::{fmt_rational, Rational};

/// Power product of named variables, sorted by name with positive exponents.
/// Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(String, u32)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Self(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| v == name)
            .map_or(0, |(_, e)| *e)
    }

    /// The monomial with `name` removed.
    pub fn without(&self, name: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| v != name).cloned().collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<&str, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(&other.0) {
            *out.entry(v.as_str()).or_default() += e;
        }
        Monomial(out.into_iter().map(|(v, e)| (v.to_string(), e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Polynomial with rational coefficients; zero coefficients are never stored
/// and terms are kept in the canonical monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(name), Rational::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> ParamPoly {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Replaces every occurrence of `name` by `value`.
    pub fn substitute(&self, name: &str, value: &ParamPoly) -> ParamPoly {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(name);
            let rest = ParamPoly::from_terms([(m.without(name), c.clone())]);
            out = &out + &(&rest * &value.pow(e));
        }
        out
    }

    pub fn evaluate(&self, values: &BTreeMap<String, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = values.get(v)?;
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += t;
        }
        Some(total)
    }

    /// Splits `self = Σ_k c_k · v_k + rest` along the variables `vars`,
    /// requiring every term to be at most linear in them. Returns the
    /// coefficient of each variable and the remainder, or `None` when some
    /// term has total degree above one in `vars`.
    pub fn linear_split(&self, vars: &[String]) -> Option<(Vec<ParamPoly>, ParamPoly)> {
        let mut coeffs = vec![ParamPoly::zero(); vars.len()];
        let mut rest = ParamPoly::zero();
        for (m, c) in &self.terms {
            let hits: Vec<(usize, u32)> = vars
                .iter()
                .enumerate()
                .filter_map(|(i, v)| {
                    let e = m.exponent(v);
                    (e > 0).then_some((i, e))
                })
                .collect();
            match hits.as_slice() {
                [] => rest.add_term(m.clone(), c.clone()),
                [(i, 1)] => coeffs[*i].add_term(m.without(&vars[*i]), c.clone()),
                _ => return None,
            }
        }
        Some((coeffs, rest))
    }

    /// `Some(q)` with `self = q · other` for a rational `q`, when such a
    /// scalar exists and `other` is nonzero.
    pub fn proportionality(&self, other: &ParamPoly) -> Option<Rational> {
        let (m0, c0) = other.terms.iter().next()?;
        let q = self.terms.get(m0).cloned().unwrap_or_else(Rational::zero) / c0;
        (self == &other.scale(&q)).then_some(q)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (m.is_one(), mag.is_one()) {
                (true, _) => f.write_str(&fmt_rational(&mag))?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{}*{m}", fmt_rational(&mag))?,
            }
        }
        Ok(())
    }
}
