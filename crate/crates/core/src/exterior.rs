//! Exterior algebra on the dual of a Lie algebra and the
//! Chevalley–Eilenberg differential in degrees one and two.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{fmt_rational, Matrix, Rational};
use crate::lie::{LieAlgebra, Vector};

/// A `k`-form `Σ c_I α_I` over strictly increasing zero-based index tuples.
/// Absent tuples have coefficient zero; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KForm {
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

/// Sign of the permutation sorting `idx`, or `None` if an index repeats.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// `α_{i_1} ∧ … ∧ α_{i_k}` for arbitrary (zero-based) indices, reordered
    /// with the permutation sign; repeated indices give zero.
    pub fn monomial(indices: &[usize]) -> Self {
        Self::term(indices, Rational::one())
    }

    pub fn term(indices: &[usize], coeff: Rational) -> Self {
        let mut f = Self::zero(indices.len());
        f.add_term(indices, coeff);
        f
    }

    /// `self += coeff · α_{indices}` with orientation normalization.
    pub fn add_term(&mut self, indices: &[usize], coeff: Rational) {
        assert_eq!(indices.len(), self.degree, "term degree mismatch");
        let mut idx = indices.to_vec();
        let Some(negative) = sort_sign(&mut idx) else {
            return;
        };
        let c = if negative { -coeff } else { coeff };
        let entry = self.coeffs.entry(idx.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, indices: &[usize]) -> Rational {
        self.coeffs.get(indices).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.coeffs.iter()
    }

    /// Largest index used plus one (zero for the zero form).
    pub fn min_dim(&self) -> usize {
        self.coeffs
            .keys()
            .filter_map(|k| k.last())
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn scale(&self, s: &Rational) -> KForm {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    pub fn add(&self, other: &KForm) -> KForm {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &KForm) -> KForm {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Graded-antisymmetric product. Fails when the result would exceed
    /// degree `dim`.
    pub fn wedge(&self, other: &KForm, dim: usize) -> Result<KForm> {
        let degree = self.degree + other.degree;
        if degree > dim {
            return Err(Error::DegreeOverflow { degree, dim });
        }
        let mut out = Self::zero(degree);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                out.add_term(&idx, ca * cb);
            }
        }
        Ok(out)
    }

    /// Value on `(v_1, …, v_k)` with the determinant convention
    /// `α_I(v_1, …, v_k) = det(α_{i_a}(v_b))`.
    pub fn evaluate(&self, vectors: &[Vector]) -> Rational {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let mut total = Rational::zero();
        for (idx, c) in &self.coeffs {
            let rows: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v.coords()[i].clone()).collect())
                .collect();
            let det = if rows.is_empty() {
                Rational::one()
            } else {
                Matrix::from_rows(&rows)
                    .expect("square")
                    .determinant()
                    .expect("square")
            };
            total += c * det;
        }
        total
    }

    /// `ω(e_i, e_j)` for a 2-form on an `n`-dimensional space.
    pub fn gram_matrix(&self, n: usize) -> Result<Matrix> {
        if self.degree != 2 && !self.is_zero() {
            return Err(Error::UnsupportedDegree {
                degree: self.degree,
            });
        }
        let mut m = Matrix::zeros(n, n);
        for (idx, c) in &self.coeffs {
            let (i, j) = (idx[0], idx[1]);
            if j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: j + 1,
                });
            }
            m.set(i, j, c.clone());
            m.set(j, i, -c);
        }
        Ok(m)
    }

    /// Inverse of [`KForm::gram_matrix`] for antisymmetric input.
    pub fn from_gram(m: &Matrix) -> KForm {
        let mut f = KForm::zero(2);
        for i in 0..m.rows() {
            for j in i + 1..m.cols() {
                let c = m.get(i, j);
                if !c.is_zero() {
                    f.add_term(&[i, j], c.clone());
                }
            }
        }
        f
    }

    /// Compact token: `"13-24"`, `"2*16+25"`, `"0"`. Indices are one-based
    /// digits, so this is only meaningful for dimension at most nine.
    pub fn to_token(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (idx, c)) in self.coeffs.iter().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if neg {
                s.push('-');
            } else if i > 0 {
                s.push('+');
            }
            if !mag.is_one() {
                s.push_str(&fmt_rational(&mag));
                s.push('*');
            }
            for k in idx {
                s.push_str(&(k + 1).to_string());
            }
        }
        s
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (idx, c)) in self.coeffs.iter().enumerate() {
            let neg = *c < Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            f.write_str("a")?;
            for k in idx {
                write!(f, "{}", k + 1)?;
            }
        }
        Ok(())
    }
}

/// Zero-based index pairs `i < j` in lexicographic order.
pub fn pairs(n: usize) -> Vec<[usize; 2]> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| [i, j]))
        .collect()
}

/// Zero-based index triples `i < j < k` in lexicographic order.
pub fn triples(n: usize) -> Vec<[usize; 3]> {
    (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
        .collect()
}

/// `dα_k` for each basis covector: the coefficient of `α_{ij}` is `−c^k_{ij}`.
fn differential_of_basis(g: &LieAlgebra, k: usize) -> KForm {
    let mut f = KForm::zero(2);
    for [i, j] in pairs(g.dim()) {
        let c = g.structure_constant(k, i, j);
        if !c.is_zero() {
            f.add_term(&[i, j], -c);
        }
    }
    f
}

/// Chevalley–Eilenberg differential on 1- and 2-forms. On 2-forms it is
/// extended as an antiderivation: `d(α_i ∧ α_j) = dα_i ∧ α_j − α_i ∧ dα_j`.
pub fn ce_differential(g: &LieAlgebra, f: &KForm) -> Result<KForm> {
    let n = g.dim();
    if f.min_dim() > n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: f.min_dim(),
        });
    }
    match f.degree() {
        1 => {
            let mut out = KForm::zero(2);
            for (idx, c) in f.terms() {
                out = out.add(&differential_of_basis(g, idx[0]).scale(c));
            }
            Ok(out)
        }
        2 => {
            let mut out = KForm::zero(3);
            for (idx, c) in f.terms() {
                let (i, j) = (idx[0], idx[1]);
                let a = differential_of_basis(g, i).wedge(&KForm::monomial(&[j]), n.max(3))?;
                let b = KForm::monomial(&[i]).wedge(&differential_of_basis(g, j), n.max(3))?;
                out = out.add(&a.sub(&b).scale(c));
            }
            Ok(out)
        }
        degree => Err(Error::UnsupportedDegree { degree }),
    }
}

/// Matrix of `d: Λ¹ → Λ²` (columns `α_k`, rows pairs in lexicographic order).
pub fn d1_matrix(g: &LieAlgebra) -> Matrix {
    let n = g.dim();
    let ps = pairs(n);
    let mut m = Matrix::zeros(ps.len(), n);
    for k in 0..n {
        let d = differential_of_basis(g, k);
        for (r, p) in ps.iter().enumerate() {
            m.set(r, k, d.coeff(p));
        }
    }
    m
}

/// Matrix of `d: Λ² → Λ³` (columns pairs, rows triples, lexicographic).
pub fn d2_matrix(g: &LieAlgebra) -> Matrix {
    let n = g.dim();
    let ps = pairs(n);
    let ts = triples(n);
    let mut m = Matrix::zeros(ts.len(), ps.len());
    for (c, p) in ps.iter().enumerate() {
        let d = ce_differential(g, &KForm::monomial(p)).expect("degree 2");
        for (r, t) in ts.iter().enumerate() {
            m.set(r, c, d.coeff(t));
        }
    }
    m
}

/// Reduced echelon basis of the closed 2-forms, columns ordered
/// `α_12 < α_13 < … < α_{n-1,n}`.
pub fn closed_two_forms_basis(g: &LieAlgebra) -> Vec<KForm> {
    let ps = pairs(g.dim());
    let kernel = d2_matrix(g).nullspace();
    if kernel.is_empty() {
        return Vec::new();
    }
    let r = Matrix::from_rows(&kernel).expect("uniform").rref();
    (0..r.rank)
        .map(|i| {
            let mut f = KForm::zero(2);
            for (c, p) in ps.iter().enumerate() {
                let v = r.matrix.get(i, c);
                if !v.is_zero() {
                    f.add_term(p, v.clone());
                }
            }
            f
        })
        .collect()
}

/// `(b_1, b_2)` of the Chevalley–Eilenberg complex.
pub fn betti_numbers(g: &LieAlgebra) -> (usize, usize) {
    let n = g.dim();
    let rank_d1 = d1_matrix(g).rank();
    let b1 = n - rank_d1;
    let ker_d2 = pairs(n).len() - d2_matrix(g).rank();
    (b1, ker_d2 - rank_d1)
}
