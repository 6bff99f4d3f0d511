//! Symplectic forms, Lagrangian subalgebras, bi-Lagrangian structures and
//! the associated para-Kähler pair `(I, g)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::{ce_differential, KForm};
use crate::kernel::{Matrix, Rational, Signature};
use crate::lie::{is_complementary, LieAlgebra, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymplecticVerdict {
    Yes,
    NotClosed,
    Degenerate,
}

/// Closedness is checked first, so a form that is neither closed nor
/// non-degenerate reports `NotClosed`.
pub fn is_symplectic(g: &LieAlgebra, w: &KForm) -> Result<SymplecticVerdict> {
    if w.degree() != 2 {
        return Err(Error::UnsupportedDegree {
            degree: w.degree(),
        });
    }
    if !ce_differential(g, w)?.is_zero() {
        return Ok(SymplecticVerdict::NotClosed);
    }
    if w.gram_matrix(g.dim())?.determinant()?.is_zero() {
        return Ok(SymplecticVerdict::Degenerate);
    }
    Ok(SymplecticVerdict::Yes)
}

/// A closed, non-degenerate 2-form together with its Gram matrix
/// `ω(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    form: KForm,
    gram: Matrix,
}

impl SymplecticForm {
    pub fn new(g: &LieAlgebra, w: &KForm) -> Result<Self> {
        match is_symplectic(g, w)? {
            SymplecticVerdict::Yes => Ok(Self {
                form: w.clone(),
                gram: w.gram_matrix(g.dim())?,
            }),
            SymplecticVerdict::NotClosed => Err(Error::NotSymplectic(format!("{w} is not closed"))),
            SymplecticVerdict::Degenerate => {
                Err(Error::NotSymplectic(format!("{w} is degenerate")))
            }
        }
    }

    pub fn form(&self) -> &KForm {
        &self.form
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn pair(&self, x: &Vector, y: &Vector) -> Rational {
        let gy = self.gram.mul_vec(y.coords()).expect("dimension");
        x.coords()
            .iter()
            .zip(&gy)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// `ω^{n/2}`, a nonzero multiple of the volume form exactly when `ω` is
    /// non-degenerate.
    pub fn top_power(&self) -> KForm {
        let n = self.dim();
        let mut p = KForm::zero(0);
        p.add_term(&[], Rational::one());
        for _ in 0..n / 2 {
            p = p.wedge(&self.form, n).expect("degree within bound");
        }
        p
    }
}

/// `dim s = n/2` and `ω` vanishes on every pair of basis vectors of `s`.
pub fn is_lagrangian(w: &SymplecticForm, s: &Subspace) -> bool {
    if 2 * s.dim() != w.dim() {
        return false;
    }
    is_isotropic(w, s.basis())
}

pub(crate) fn is_isotropic(w: &SymplecticForm, basis: &[Vector]) -> bool {
    basis
        .iter()
        .enumerate()
        .all(|(i, x)| basis[i + 1..].iter().all(|y| w.pair(x, y).is_zero()))
}

/// Individual verdicts of a bi-Lagrangian check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiLagrangianReport {
    pub closed: bool,
    pub non_degenerate: bool,
    pub f_subalgebra: bool,
    pub g_subalgebra: bool,
    pub f_lagrangian: bool,
    pub g_lagrangian: bool,
    pub complementary: bool,
}

impl BiLagrangianReport {
    pub fn passed(&self) -> bool {
        self.closed
            && self.non_degenerate
            && self.f_subalgebra
            && self.g_subalgebra
            && self.f_lagrangian
            && self.g_lagrangian
            && self.complementary
    }

    pub fn failures(&self) -> Vec<&'static str> {
        [
            (self.closed, "closed"),
            (self.non_degenerate, "non-degenerate"),
            (self.f_subalgebra, "F subalgebra"),
            (self.g_subalgebra, "G subalgebra"),
            (self.f_lagrangian, "F Lagrangian"),
            (self.g_lagrangian, "G Lagrangian"),
            (self.complementary, "complementary"),
        ]
        .into_iter()
        .filter_map(|(ok, name)| (!ok).then_some(name))
        .collect()
    }
}

pub fn verify_bilagrangian(
    g: &LieAlgebra,
    w: &KForm,
    f: &Subspace,
    g2: &Subspace,
) -> BiLagrangianReport {
    let n = g.dim();
    let closed = w.degree() == 2
        && ce_differential(g, w).map(|d| d.is_zero()).unwrap_or(false);
    let gram = w.gram_matrix(n).ok();
    let non_degenerate = gram
        .as_ref()
        .and_then(|m| m.determinant().ok())
        .is_some_and(|d| !d.is_zero());
    let isotropic = |s: &Subspace| {
        let Some(m) = &gram else { return false };
        2 * s.dim() == n
            && s.basis().iter().enumerate().all(|(i, x)| {
                s.basis()[i + 1..].iter().all(|y| {
                    let my = m.mul_vec(y.coords()).expect("dimension");
                    x.coords()
                        .iter()
                        .zip(&my)
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                        .is_zero()
                })
            })
    };
    BiLagrangianReport {
        closed,
        non_degenerate,
        f_subalgebra: f.ambient_dim() == n && g.is_subalgebra(f),
        g_subalgebra: g2.ambient_dim() == n && g.is_subalgebra(g2),
        f_lagrangian: isotropic(f),
        g_lagrangian: isotropic(g2),
        complementary: is_complementary(f, g2),
    }
}

/// A verified bi-Lagrangian structure `(ω, F, G)` on a Lie algebra.
///
/// Besides the canonical subspaces it remembers the adapted basis it was
/// built from (`F`-basis followed by `G`-basis), which is the basis all
/// connection data is reported in. Projections onto `F` and `G` along the
/// splitting are materialized once as ambient matrices.
#[derive(Clone, Debug)]
pub struct BiLagrangianStructure {
    algebra: LieAlgebra,
    omega: SymplecticForm,
    f: Subspace,
    g: Subspace,
    adapted: Vec<Vector>,
    proj_f: Matrix,
    proj_g: Matrix,
    // (Ωᵀ)^{-1}, used to solve ω(D, ·) = θ for D
    omega_solver: Matrix,
}

impl BiLagrangianStructure {
    /// Builds the structure from explicit bases of `F` and `G`, which become
    /// the adapted basis. Fails with the list of violated conditions when the
    /// data is not bi-Lagrangian or a basis is linearly dependent.
    pub fn new(
        algebra: &LieAlgebra,
        w: &KForm,
        f_basis: Vec<Vector>,
        g_basis: Vec<Vector>,
    ) -> Result<Self> {
        let n = algebra.dim();
        let f = Subspace::span(n, f_basis.clone())?;
        let g = Subspace::span(n, g_basis.clone())?;
        if f.dim() != f_basis.len() || g.dim() != g_basis.len() {
            return Err(Error::InvalidStructure(
                "foliation basis is linearly dependent".into(),
            ));
        }
        let report = verify_bilagrangian(algebra, w, &f, &g);
        if !report.passed() {
            return Err(Error::InvalidStructure(format!(
                "fails: {}",
                report.failures().join(", ")
            )));
        }
        let omega = SymplecticForm::new(algebra, w)?;
        let adapted: Vec<Vector> = f_basis.into_iter().chain(g_basis).collect();
        let basis = Matrix::from_columns(
            &adapted.iter().map(|v| v.coords().to_vec()).collect::<Vec<_>>(),
        )?;
        let inv = basis.inverse().expect("complementary bases are invertible");
        let m = f.dim();
        let mut sel_f = vec![Rational::zero(); n];
        for s in sel_f.iter_mut().take(m) {
            *s = Rational::one();
        }
        let proj_f = basis.mul(&Matrix::diagonal(&sel_f))?.mul(&inv)?;
        let proj_g = Matrix::identity(n).sub(&proj_f)?;
        let omega_solver = omega
            .gram()
            .transpose()
            .inverse()
            .expect("non-degenerate form");
        Ok(Self {
            algebra: algebra.clone(),
            omega,
            f,
            g,
            adapted,
            proj_f,
            proj_g,
            omega_solver,
        })
    }

    /// Same as [`BiLagrangianStructure::new`] using the echelon bases.
    pub fn from_subspaces(algebra: &LieAlgebra, w: &KForm, f: &Subspace, g: &Subspace) -> Result<Self> {
        Self::new(algebra, w, f.basis().to_vec(), g.basis().to_vec())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn omega(&self) -> &SymplecticForm {
        &self.omega
    }

    pub fn f(&self) -> &Subspace {
        &self.f
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }

    pub fn half_dim(&self) -> usize {
        self.f.dim()
    }

    pub fn adapted_basis(&self) -> &[Vector] {
        &self.adapted
    }

    pub fn projection_f(&self) -> &Matrix {
        &self.proj_f
    }

    pub fn projection_g(&self) -> &Matrix {
        &self.proj_g
    }

    pub fn project_f(&self, v: &Vector) -> Vector {
        Vector::new(self.proj_f.mul_vec(v.coords()).expect("dimension"))
    }

    pub fn project_g(&self, v: &Vector) -> Vector {
        Vector::new(self.proj_g.mul_vec(v.coords()).expect("dimension"))
    }

    /// The unique `D` with `ω(D, z) = −ω(y, [x, z])` for all `z`.
    pub fn solve_d(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.algebra.dim();
        let rhs: Vec<Rational> = (0..n)
            .map(|k| {
                let xz = self.algebra.bracket_unchecked(x, &Vector::basis(n, k));
                -self.omega.pair(y, &xz)
            })
            .collect();
        Vector::new(self.omega_solver.mul_vec(&rhs).expect("dimension"))
    }
}

/// The para-Kähler pair in the ambient basis `e_1 … e_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParaKaehlerPair {
    /// `I = P_F − P_G`, acting on column vectors.
    pub i_operator: Matrix,
    /// `g(e_i, e_j) = ω(I e_i, e_j)`.
    pub metric: Matrix,
}

impl ParaKaehlerPair {
    pub fn signature(&self) -> Signature {
        self.metric
            .symmetric_signature()
            .expect("para-Kähler metric is symmetric")
    }
}

pub fn para_kaehler(b: &BiLagrangianStructure) -> ParaKaehlerPair {
    let i_operator = b.proj_f.sub(&b.proj_g).expect("same shape");
    let metric = i_operator
        .transpose()
        .mul(b.omega.gram())
        .expect("same shape");
    ParaKaehlerPair { i_operator, metric }
}
