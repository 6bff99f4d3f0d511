//! Vectors and 2-forms whose coefficients are polynomials in named
//! parameters: parametric brackets, symbolic closedness, Pfaffians and
//! determinants of symbolic Gram matrices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{ce_differential, pairs, KForm};
use crate::kernel::Rational;
use crate::lie::{LieAlgebra, Vector};
use crate::poly::ParamPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamVector(Vec<ParamPoly>);

impl ParamVector {
    pub fn new(coords: Vec<ParamPoly>) -> Self {
        Self(coords)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![ParamPoly::zero(); n])
    }

    pub fn from_vector(v: &Vector) -> Self {
        Self(v.coords().iter().cloned().map(ParamPoly::constant).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[ParamPoly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ParamPoly::is_zero)
    }

    /// `Some` when every coordinate is constant.
    pub fn to_vector(&self) -> Option<Vector> {
        self.0
            .iter()
            .map(ParamPoly::as_constant)
            .collect::<Option<Vec<_>>>()
            .map(Vector::new)
    }

    pub fn add(&self, other: &ParamVector) -> ParamVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ParamVector) -> ParamVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &ParamPoly) -> ParamVector {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> ParamVector {
        Self(self.0.iter().map(|a| -a).collect())
    }

    pub fn substitute(&self, name: &str, value: &ParamPoly) -> ParamVector {
        Self(self.0.iter().map(|a| a.substitute(name, value)).collect())
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match c.as_constant() {
                Some(k) if k.is_one() => write!(f, "e{}", i + 1)?,
                _ if c.len() == 1 => write!(f, "{c}*e{}", i + 1)?,
                _ => write!(f, "({c})*e{}", i + 1)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Bilinear extension of the bracket to polynomial coefficients.
pub fn parametric_bracket(g: &LieAlgebra, u: &ParamVector, v: &ParamVector) -> ParamVector {
    let n = g.dim();
    let mut out = ParamVector::zero(n);
    for (i, a) in u.0.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
        for (j, b) in v.0.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
            if i == j {
                continue;
            }
            let br = g.bracket_basis(i, j);
            if br.is_zero() {
                continue;
            }
            let ab = a * b;
            for (k, c) in br.coords().iter().enumerate() {
                if !c.is_zero() {
                    out.0[k] = &out.0[k] + &ab.scale(c);
                }
            }
        }
    }
    out
}

/// A 2-form `Σ ω_{ij} α_{ij}` (over `i < j`) with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamTwoForm {
    dim: usize,
    coeffs: BTreeMap<(usize, usize), ParamPoly>,
}

impl ParamTwoForm {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// The fully generic form with one parameter `w{i}{j}` per pair.
    pub fn generic(dim: usize) -> Self {
        let mut out = Self::new(dim);
        for [i, j] in pairs(dim) {
            out.set(i, j, ParamPoly::var(&format!("w{}{}", i + 1, j + 1)));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets the coefficient of `α_i ∧ α_j`, with antisymmetry for `i > j`.
    pub fn set(&mut self, i: usize, j: usize, c: ParamPoly) {
        assert!(i != j && i < self.dim && j < self.dim, "bad pair");
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -&c) };
        if c.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, c);
        }
    }

    /// `ω(e_i, e_j)`.
    pub fn entry(&self, i: usize, j: usize) -> ParamPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.coeffs.get(&(i, j)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => -&self.entry(j, i),
            std::cmp::Ordering::Equal => ParamPoly::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &ParamPoly)> {
        self.coeffs.iter()
    }

    pub fn gram(&self) -> Vec<Vec<ParamPoly>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn pair(&self, u: &ParamVector, v: &ParamVector) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (&(i, j), c) in &self.coeffs {
            let t = &(&u.0[i] * &v.0[j]) - &(&u.0[j] * &v.0[i]);
            if !t.is_zero() {
                out = &out + &(c * &t);
            }
        }
        out
    }

    /// Coefficients of `dω` on `α_{ijk}`, keyed by sorted triples; zero
    /// entries are omitted.
    pub fn differential(&self, g: &LieAlgebra) -> BTreeMap<[usize; 3], ParamPoly> {
        let mut out: BTreeMap<[usize; 3], ParamPoly> = BTreeMap::new();
        for (&(i, j), c) in &self.coeffs {
            let d = ce_differential(g, &KForm::monomial(&[i, j])).expect("degree 2");
            for (idx, k) in d.terms() {
                let key = [idx[0], idx[1], idx[2]];
                let e = out.entry(key).or_default();
                *e = &*e + &c.scale(k);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    pub fn is_closed(&self, g: &LieAlgebra) -> bool {
        self.differential(g).is_empty()
    }

    /// Replaces every occurrence of `name` by `value`.
    pub fn substitute(&self, name: &str, value: &ParamPoly) -> ParamTwoForm {
        let mut out = Self::new(self.dim);
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c.substitute(name, value));
        }
        out
    }

    /// The concrete form obtained by assigning every parameter.
    pub fn specialize(&self, values: &BTreeMap<String, Rational>) -> Option<KForm> {
        let mut out = KForm::zero(2);
        for (&(i, j), c) in &self.coeffs {
            out.add_term(&[i, j], c.evaluate(values)?);
        }
        Some(out)
    }

    /// Pfaffian of the Gram matrix, expanded over perfect matchings.
    pub fn pfaffian(&self) -> Result<ParamPoly> {
        pfaffian(&self.gram())
    }

    pub fn determinant(&self) -> ParamPoly {
        determinant(&self.gram())
    }
}

/// Pfaffian of a symbolic family of 2-forms on `g`.
pub fn parametric_pfaffian(g: &LieAlgebra, family: &ParamTwoForm) -> Result<ParamPoly> {
    if family.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: family.dim(),
        });
    }
    family.pfaffian()
}

/// Pfaffian of an antisymmetric polynomial matrix:
/// `Pf(A) = Σ_j (−1)^{j+1} a_{0j} Pf(A_{0̂ĵ})`, one term per perfect matching.
pub fn pfaffian(m: &[Vec<ParamPoly>]) -> Result<ParamPoly> {
    let n = m.len();
    if n % 2 == 1 {
        return Err(Error::OddDimension(n));
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(pf_rec(m, &idx))
}

fn pf_rec(m: &[Vec<ParamPoly>], idx: &[usize]) -> ParamPoly {
    if idx.is_empty() {
        return ParamPoly::one();
    }
    let first = idx[0];
    let mut out = ParamPoly::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let a = &m[first][j];
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .copied()
            .filter(|&k| k != j)
            .collect();
        let sub = pf_rec(m, &rest);
        let t = a * &sub;
        // pos counts from 1, sign (−1)^{pos+1}
        out = if pos % 2 == 1 { &out + &t } else { &out - &t };
    }
    out
}

/// Leibniz expansion of the determinant.
pub fn determinant(m: &[Vec<ParamPoly>]) -> ParamPoly {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = ParamPoly::zero();
    permute(m, &mut perm, 0, true, &mut out);
    out
}

fn permute(m: &[Vec<ParamPoly>], perm: &mut Vec<usize>, k: usize, even: bool, out: &mut ParamPoly) {
    let n = perm.len();
    if k == n {
        let mut t = ParamPoly::one();
        for (i, &p) in perm.iter().enumerate() {
            if m[i][p].is_zero() {
                return;
            }
            t = &t * &m[i][p];
        }
        *out = if even { &*out + &t } else { &*out - &t };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(m, perm, k + 1, if i == k { even } else { !even }, out);
        perm.swap(k, i);
    }
}
