//! Lie algebras given by exact structure constants, and subspaces of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::kernel::{fmt_rational, rat, Matrix, Rational};

/// Element of an `n`-dimensional algebra, as coefficients on `e_1 … e_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    /// `e_{i+1}` (zero-based index).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &Rational, other: &Vector) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a += s * b;
            }
        }
    }

    /// Linear combination `Σ coeffs[i] · vectors[i]` in dimension `n`.
    pub fn combination(n: usize, coeffs: &[Rational], vectors: &[Vector]) -> Vector {
        let mut out = Vector::zeros(n);
        for (c, v) in coeffs.iter().zip(vectors) {
            out.add_scaled(c, v);
        }
        out
    }

    fn check_dim(&self, other: &Vector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Vector> for &Rational {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

/// Renders as `e2 - 2*e1`-style sums, `0` for the zero vector.
impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            write!(f, "e{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Outcome of an exhaustive Jacobi check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JacobiReport {
    Pass,
    /// First triple `i < j < k` (zero-based) whose Jacobiator is nonzero.
    Violation {
        triple: (usize, usize, usize),
        jacobiator: Vector,
    },
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass)
    }
}

/// A finite-dimensional Lie algebra with exact structure constants
/// `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    // brackets[i * dim + j] = [e_i, e_j]
    brackets: Vec<Vector>,
}

impl LieAlgebra {
    pub fn abelian(name: impl Into<String>, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            brackets: vec![Vector::zeros(dim); dim * dim],
        }
    }

    /// Builds the algebra from the differentials `dα_1 … dα_n` using
    /// `dα_k(e_i, e_j) = −α_k([e_i, e_j])`: the coefficient of `α_{ij}` in
    /// `dα_k` is `−c^k_{ij}`.
    pub fn from_differentials(name: impl Into<String>, dalpha: &[KForm]) -> Result<Self> {
        let n = dalpha.len();
        let mut g = Self::abelian(name, n);
        for (k, form) in dalpha.iter().enumerate() {
            if form.is_zero() {
                continue;
            }
            if form.degree() != 2 {
                return Err(Error::UnsupportedDegree {
                    degree: form.degree(),
                });
            }
            for (idx, c) in form.terms() {
                let (i, j) = (idx[0], idx[1]);
                if j >= n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: j + 1,
                    });
                }
                let mut v = g.bracket_basis(i, j).clone();
                v.0[k] -= c;
                g.set_bracket(i, j, v);
            }
        }
        Ok(g)
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = −v`.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vector) {
        assert_eq!(v.dim(), self.dim, "bracket value has wrong dimension");
        if i == j {
            assert!(v.is_zero(), "[e_i, e_i] must vanish");
            return;
        }
        self.brackets[j * self.dim + i] = -&v;
        self.brackets[i * self.dim + j] = v;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &Vector {
        &self.brackets[i * self.dim + j]
    }

    /// `c^k_{ij}`, zero-based.
    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.bracket_basis(i, j).0[k]
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(Vector::is_zero)
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        x.check_dim(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for i in 0..n {
            let xi = &x.0[i];
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                let yj = &y.0[j];
                if i == j || yj.is_zero() {
                    continue;
                }
                let b = self.bracket_basis(i, j);
                if b.is_zero() {
                    continue;
                }
                out.add_scaled(&(xi * yj), b);
            }
        }
        out
    }

    /// Matrix of `ad_x` acting on column vectors.
    pub fn ad(&self, x: &Vector) -> Matrix {
        let cols: Vec<Vec<Rational>> = (0..self.dim)
            .map(|j| {
                self.bracket_unchecked(x, &Vector::basis(self.dim, j))
                    .into_coords()
            })
            .collect();
        Matrix::from_columns(&cols).expect("square")
    }

    pub fn check_jacobi(&self) -> JacobiReport {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) = (
                        Vector::basis(n, i),
                        Vector::basis(n, j),
                        Vector::basis(n, k),
                    );
                    let a = self.bracket_unchecked(&ei, self.bracket_basis(j, k));
                    let b = self.bracket_unchecked(&ej, self.bracket_basis(k, i));
                    let c = self.bracket_unchecked(&ek, self.bracket_basis(i, j));
                    let jac = &(&a + &b) + &c;
                    if !jac.is_zero() {
                        return JacobiReport::Violation {
                            triple: (i, j, k),
                            jacobiator: jac,
                        };
                    }
                }
            }
        }
        JacobiReport::Pass
    }

    /// Span of all brackets `[a, b]` with `a ∈ xs`, `b ∈ ys`.
    pub fn bracket_span(&self, xs: &[Vector], ys: &[Vector]) -> Subspace {
        let mut vs = Vec::with_capacity(xs.len() * ys.len());
        for x in xs {
            for y in ys {
                let b = self.bracket_unchecked(x, y);
                if !b.is_zero() {
                    vs.push(b);
                }
            }
        }
        Subspace::span_unchecked(self.dim, vs)
    }

    /// Dimensions of `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …` up to stabilization.
    pub fn lower_central_series(&self) -> Vec<usize> {
        let whole: Vec<Vector> = (0..self.dim).map(|i| Vector::basis(self.dim, i)).collect();
        lower_central_series_of(self, &whole)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last() == Some(&0)
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let b = s.basis();
        for (i, x) in b.iter().enumerate() {
            for y in &b[i + 1..] {
                if !s.contains(&self.bracket_unchecked(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    /// Necessary condition for a subalgebra of a nilpotent algebra:
    /// `dim [s,s] ≤ dim s − 2` and `s` itself nilpotent (for `dim s = 3` this
    /// is `[s,[s,s]] = 0`). Subspaces of dimension at most one pass trivially.
    pub fn nilpotent_subalgebra_filter(&self, s: &Subspace) -> Result<bool> {
        if !self.is_subalgebra(s) {
            return Err(Error::NotSubalgebra);
        }
        if s.dim() <= 1 {
            return Ok(true);
        }
        let derived = self.bracket_span(s.basis(), s.basis());
        if derived.dim() + 2 > s.dim() {
            return Ok(false);
        }
        Ok(lower_central_series_of(self, s.basis()).last() == Some(&0))
    }
}

fn lower_central_series_of(g: &LieAlgebra, gens: &[Vector]) -> Vec<usize> {
    let mut current = Subspace::span_unchecked(g.dim, gens.to_vec());
    let mut dims = vec![current.dim()];
    loop {
        let next = g.bracket_span(gens, current.basis());
        if next.dim() == current.dim() {
            break;
        }
        dims.push(next.dim());
        if next.dim() == 0 {
            break;
        }
        current = next;
    }
    dims
}

/// Linear subspace stored as the nonzero rows of its reduced row-echelon
/// form, so equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        for v in &vectors {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.dim(),
                });
            }
        }
        Ok(Self::span_unchecked(ambient_dim, vectors))
    }

    pub(crate) fn span_unchecked(ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient_dim);
        }
        let rows: Vec<Vec<Rational>> = vectors.into_iter().map(Vector::into_coords).collect();
        let r = Matrix::from_rows(&rows).expect("uniform rows").rref();
        let basis = (0..r.rank)
            .map(|i| Vector(r.matrix.row(i).to_vec()))
            .collect();
        Self {
            ambient_dim,
            basis,
            pivots: r.pivots,
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| Vector::basis(ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Membership: appending `v` to the echelon rows leaves the rank
    /// unchanged. With the rows already reduced this is a single sweep.
    pub fn contains(&self, v: &Vector) -> bool {
        if v.dim() != self.ambient_dim {
            return false;
        }
        let mut r = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = r.0[p].clone();
            if !c.is_zero() {
                r.add_scaled(&-c, row);
            }
        }
        r.is_zero()
    }

    /// Coordinates of `v` on the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &Vector) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v.0[p].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }
}

/// `f ⊕ g = ambient`: dimensions add up and the stacked bases have full rank.
pub fn is_complementary(f: &Subspace, g: &Subspace) -> bool {
    let n = f.ambient_dim;
    if g.ambient_dim != n || f.dim() + g.dim() != n {
        return false;
    }
    let rows: Vec<Vec<Rational>> = f
        .basis
        .iter()
        .chain(&g.basis)
        .map(|v| v.0.clone())
        .collect();
    if rows.is_empty() {
        return n == 0;
    }
    Matrix::from_rows(&rows).expect("uniform rows").rank() == n
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_salamon;
    use crate::kernel::ratio;

    fn algebra(name: &str, tokens: &str) -> LieAlgebra {
        let toks: Vec<&str> = tokens.split(',').collect();
        LieAlgebra::from_differentials(name, &parse_salamon(&toks).unwrap()).unwrap()
    }

    fn e(n: usize, i: usize) -> Vector {
        Vector::basis(n, i - 1)
    }

    fn span(n: usize, vs: &[Vector]) -> Subspace {
        Subspace::span(n, vs.to_vec()).unwrap()
    }

    #[test]
    fn bracket_sign_convention() {
        // dα4 = α12 means −α4([e1,e2]) = 1.
        let g = algebra("L3+A1", "0,0,0,12");
        assert_eq!(g.bracket(&e(4, 1), &e(4, 2)).unwrap(), -&e(4, 4));
        assert_eq!(g.bracket(&e(4, 2), &e(4, 1)).unwrap(), e(4, 4));
    }

    #[test]
    fn bracket_self_vanishes_and_mismatch_errors() {
        let g = algebra("L6,21", "0,0,12,13,14+23,15+24");
        let x = Vector::new(vec![rat(1), ratio(2, 3), rat(-1), rat(0), rat(5), rat(1)]);
        assert!(g.bracket(&x, &x).unwrap().is_zero());
        assert!(matches!(
            g.bracket(&x, &Vector::zeros(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bracket_l4a2_example() {
        // f1 = e1 + Σ a_i e_i, f2 = Σ b_j e_j at a = (1,1,1,1,1), b = (1,0,0,1,0).
        let g = algebra("L4+A2", "0,0,0,0,12,15");
        let f1 = Vector::from_i64(&[1, 1, 1, 1, 1, 1]);
        let f2 = Vector::from_i64(&[0, 1, 0, 0, 1, 0]);
        let expected = -&Vector::from_i64(&[0, 0, 0, 0, 1, 1]);
        assert_eq!(g.bracket(&f1, &f2).unwrap(), expected);
    }

    #[test]
    fn jacobi_pass_and_violation() {
        assert!(LieAlgebra::abelian("A6", 6).check_jacobi().passed());
        let g = algebra("L6,21", "0,0,12,13,14+23,15+24");
        assert!(g.check_jacobi().passed());

        // Add α24 to dα5: d(α24) = α123 ≠ 0, so Jacobi must fail at (e1,e2,e3).
        let mut bad = g.clone();
        let mut v = bad.bracket_basis(1, 3).clone();
        v.0[4] -= rat(1);
        bad.set_bracket(1, 3, v);
        match bad.check_jacobi() {
            JacobiReport::Violation { triple, .. } => assert_eq!(triple, (0, 1, 2)),
            JacobiReport::Pass => panic!("perturbed algebra passed Jacobi"),
        }
    }

    #[test]
    fn lower_central_series_examples() {
        assert_eq!(LieAlgebra::abelian("A4", 4).lower_central_series(), vec![4, 0]);
        assert_eq!(algebra("L4", "0,0,12,13").lower_central_series(), vec![4, 2, 1, 0]);
        assert_eq!(
            algebra("L6,18", "0,0,12,13,14,15").lower_central_series(),
            vec![6, 4, 3, 2, 1, 0]
        );
    }

    #[test]
    fn subalgebra_examples() {
        let l4 = algebra("L4", "0,0,12,13");
        assert!(!l4.is_subalgebra(&span(4, &[e(4, 1), e(4, 2)])));

        let a6 = LieAlgebra::abelian("A6", 6);
        assert!(a6.is_subalgebra(&span(6, &[e(6, 1), e(6, 3), e(6, 5)])));

        let l61 = algebra("L6,1", "0,0,0,0,12,13+24");
        assert!(l61.is_subalgebra(&span(6, &[e(6, 2), e(6, 4), e(6, 6)])));
        assert!(l61.is_subalgebra(&Subspace::whole(6)));
    }

    #[test]
    fn nilpotent_filter() {
        let a6 = LieAlgebra::abelian("A6", 6);
        assert!(a6
            .nilpotent_subalgebra_filter(&span(6, &[e(6, 1), e(6, 4)]))
            .unwrap());

        // span{e1,e2,e3} in L6,18 is not closed: [e1,e3] = −e4.
        let l618 = algebra("L6,18", "0,0,12,13,14,15");
        assert_eq!(
            l618.nilpotent_subalgebra_filter(&span(6, &[e(6, 1), e(6, 2), e(6, 3)])),
            Err(Error::NotSubalgebra)
        );
        // span{e1,e2,e3,...} subalgebra of L6,18 passes.
        let s = span(6, &[e(6, 1), e(6, 5), e(6, 6)]);
        assert!(l618.nilpotent_subalgebra_filter(&s).unwrap());

        // Nilpotent algebras never fail the filter, so the negative case is a
        // solvable algebra: [e1,e2] = e2, [e1,e3] = e3 has dim[s,s] = 2.
        let mut solv = LieAlgebra::abelian("r3", 3);
        solv.set_bracket(0, 1, e(3, 2));
        solv.set_bracket(0, 2, e(3, 3));
        assert!(!solv
            .nilpotent_subalgebra_filter(&Subspace::whole(3))
            .unwrap());
        // [e1,e2] = e2 with e3 central: dim[s,s] = 1 but [s,[s,s]] ≠ 0.
        let mut aff = LieAlgebra::abelian("aff+A1", 3);
        aff.set_bracket(0, 1, e(3, 2));
        assert!(!aff.nilpotent_subalgebra_filter(&Subspace::whole(3)).unwrap());
    }

    #[test]
    fn complementary_examples() {
        let f = span(6, &[e(6, 1), e(6, 3), e(6, 5)]);
        let g = span(6, &[e(6, 2), e(6, 4), e(6, 6)]);
        assert!(is_complementary(&f, &g));
        assert!(!is_complementary(&f, &f));
        let g2 = span(
            6,
            &[&e(6, 1) + &e(6, 2), e(6, 4), &e(6, 5) - &e(6, 6)],
        );
        assert!(is_complementary(&f, &g2));
    }

    #[test]
    fn subspace_canonical_form() {
        let a = span(4, &[Vector::from_i64(&[2, 4, 0, 0]), Vector::from_i64(&[0, 0, 3, 3])]);
        let b = span(4, &[Vector::from_i64(&[1, 2, 1, 1]), Vector::from_i64(&[0, 0, -1, -1])]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 2]);
        assert_eq!(
            a.coordinates(&Vector::from_i64(&[3, 6, 5, 5])),
            Some(vec![rat(3), rat(5)])
        );
        assert!(a.coordinates(&Vector::from_i64(&[1, 0, 0, 0])).is_none());
    }

    #[test]
    fn vector_display() {
        let v = &(&e(6, 2) - &e(6, 1)) - &e(6, 1);
        assert_eq!(v.to_string(), "-2*e1 + e2");
        assert_eq!(Vector::zeros(3).to_string(), "0");
        assert_eq!(Vector::new(vec![ratio(-1, 2), rat(0)]).to_string(), "-1/2*e1");
    }
}
