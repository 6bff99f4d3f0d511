//! Connections on a Lie algebra given by their Christoffel table on a basis,
//! the canonical bi-Lagrangian connection, and the tensors derived from it.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel::{Matrix, Rational};
use crate::lie::{LieAlgebra, Subspace, Vector};
use crate::symplectic::{BiLagrangianStructure, SymplecticForm};

/// A connection stored as `∇_{b_i} b_j` (ambient coordinates) on a basis
/// `b_1 … b_n`, extended bilinearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTable {
    basis: Vec<Vector>,
    to_basis: Matrix,
    table: Vec<Vec<Vector>>,
}

impl ConnectionTable {
    pub fn new(basis: Vec<Vector>, table: Vec<Vec<Vector>>) -> Result<Self> {
        let n = basis.len();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: table.len(),
            });
        }
        let cols: Vec<Vec<Rational>> = basis.iter().map(|v| v.coords().to_vec()).collect();
        let to_basis = Matrix::from_columns(&cols)?
            .inverse()
            .ok_or_else(|| Error::InvalidStructure("connection basis is singular".into()))?;
        Ok(Self {
            basis,
            to_basis,
            table,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// `∇_{b_i} b_j` in ambient coordinates.
    pub fn entry(&self, i: usize, j: usize) -> &Vector {
        &self.table[i][j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: Vector) {
        self.table[i][j] = v;
    }

    /// Coefficients of `v` in the table's basis.
    pub fn basis_coords(&self, v: &Vector) -> Vec<Rational> {
        self.to_basis.mul_vec(v.coords()).expect("dimension")
    }

    /// Christoffel symbols `Γ^k_{ij}`: `∇_{b_i} b_j = Σ_k Γ^k_{ij} b_k`.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> Rational {
        self.basis_coords(&self.table[i][j])[k].clone()
    }

    pub fn nabla(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let xc = self.basis_coords(x);
        let yc = self.basis_coords(y);
        let mut out = Vector::zeros(n);
        for (i, a) in xc.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in yc.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.add_scaled(&(a * b), &self.table[i][j]);
            }
        }
        out
    }

    /// Ambient matrix of `y ↦ ∇_x y`.
    pub fn operator(&self, x: &Vector) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Rational>> = (0..n)
            .map(|j| self.nabla(x, &Vector::basis(n, j)).into_coords())
            .collect();
        Matrix::from_columns(&cols).expect("square")
    }

    /// The same connection tabulated on another basis.
    pub fn rebased(&self, basis: Vec<Vector>) -> Result<ConnectionTable> {
        let table = basis
            .iter()
            .map(|x| basis.iter().map(|y| self.nabla(x, y)).collect())
            .collect();
        ConnectionTable::new(basis, table)
    }

    /// `∇_{e_i} e_j` for the standard basis.
    pub fn ambient_table(&self) -> Vec<Vec<Vector>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.nabla(&Vector::basis(n, i), &Vector::basis(n, j)))
                    .collect()
            })
            .collect()
    }

    /// Same connection, regardless of the basis each table uses.
    pub fn same_as(&self, other: &ConnectionTable) -> bool {
        self.dim() == other.dim() && self.ambient_table() == other.ambient_table()
    }

    /// `∇_x y ∈ s` for all `x` and all `y ∈ s`.
    pub fn preserves(&self, s: &Subspace) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            let x = Vector::basis(n, i);
            s.basis().iter().all(|y| s.contains(&self.nabla(&x, y)))
        })
    }
}

/// The canonical connection of a bi-Lagrangian structure:
/// `∇_x y = D(x_F, y_F)_F + [x_G, y_F]_F + D(x_G, y_G)_G + [x_F, y_G]_G`,
/// tabulated on the adapted basis.
pub fn canonical_connection(b: &BiLagrangianStructure) -> ConnectionTable {
    let basis = b.adapted_basis().to_vec();
    let g = b.algebra();
    let nabla = |x: &Vector, y: &Vector| {
        let (xf, xg) = (b.project_f(x), b.project_g(x));
        let (yf, yg) = (b.project_f(y), b.project_g(y));
        let along_f = &b.solve_d(&xf, &yf) + &g.bracket_unchecked(&xg, &yf);
        let along_g = &b.solve_d(&xg, &yg) + &g.bracket_unchecked(&xf, &yg);
        &b.project_f(&along_f) + &b.project_g(&along_g)
    };
    let table = basis
        .iter()
        .map(|x| basis.iter().map(|y| nabla(x, y)).collect())
        .collect();
    ConnectionTable::new(basis, table).expect("adapted basis is a basis")
}

/// Torsion `T(b_i, b_j) = ∇_{b_i} b_j − ∇_{b_j} b_i − [b_i, b_j]` on the
/// connection's basis.
pub fn torsion(g: &LieAlgebra, c: &ConnectionTable) -> Vec<Vec<Vector>> {
    let b = c.basis();
    b.iter()
        .enumerate()
        .map(|(i, x)| {
            b.iter()
                .enumerate()
                .map(|(j, y)| &(c.entry(i, j) - c.entry(j, i)) - &g.bracket_unchecked(x, y))
                .collect()
        })
        .collect()
}

pub fn is_torsion_free(g: &LieAlgebra, c: &ConnectionTable) -> bool {
    torsion(g, c).iter().flatten().all(Vector::is_zero)
}

/// `(∇_{b_i} ω)(b_j, b_k)` indexed `[i][j][k]`.
pub fn nabla_omega(w: &SymplecticForm, c: &ConnectionTable) -> Vec<Vec<Vec<Rational>>> {
    let b = c.basis();
    let n = b.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| -w.pair(c.entry(i, j), &b[k]) - w.pair(&b[j], c.entry(i, k)))
                        .collect()
                })
                .collect()
        })
        .collect()
}

pub fn is_parallel(w: &SymplecticForm, c: &ConnectionTable) -> bool {
    nabla_omega(w, c).iter().flatten().flatten().all(Zero::is_zero)
}

/// Curvature `R(b_i, b_j) b_k` on the connection's basis, stored as
/// components `R^l_{ijk}` with `R(b_i, b_j) b_k = Σ_l R^l_{ijk} b_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature {
    basis: Vec<Vector>,
    components: Vec<Rational>,
}

impl Curvature {
    fn idx(&self, l: usize, i: usize, j: usize, k: usize) -> usize {
        let n = self.basis.len();
        ((l * n + i) * n + j) * n + k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn component(&self, l: usize, i: usize, j: usize, k: usize) -> &Rational {
        &self.components[self.idx(l, i, j, k)]
    }

    /// `R(b_i, b_j) b_k` in ambient coordinates.
    pub fn on_basis(&self, i: usize, j: usize, k: usize) -> Vector {
        let n = self.dim();
        let coeffs: Vec<Rational> = (0..n).map(|l| self.component(l, i, j, k).clone()).collect();
        Vector::combination(n, &coeffs, &self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    /// `(i, j, k)` with `R(b_i, b_j) b_k ≠ 0`.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if (0..n).any(|l| !self.component(l, i, j, k).is_zero()) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }
}

/// `R(x, y) = [∇_x, ∇_y] − ∇_{[x, y]}`.
pub fn curvature(g: &LieAlgebra, c: &ConnectionTable) -> Curvature {
    let b = c.basis().to_vec();
    let n = b.len();
    // N_i: matrix of ∇_{b_i} in basis coordinates
    let ops: Vec<Matrix> = (0..n)
        .map(|i| {
            let cols: Vec<Vec<Rational>> = (0..n).map(|j| c.basis_coords(c.entry(i, j))).collect();
            Matrix::from_columns(&cols).expect("square")
        })
        .collect();
    let op_of = |coords: &[Rational]| {
        let mut m = Matrix::zeros(n, n);
        for (a, op) in coords.iter().zip(&ops) {
            if !a.is_zero() {
                m = m.add(&scale_matrix(op, a)).expect("same shape");
            }
        }
        m
    };
    let mut components = vec![Rational::zero(); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            let br = c.basis_coords(&g.bracket_unchecked(&b[i], &b[j]));
            let r = ops[i]
                .mul(&ops[j])
                .and_then(|m| m.sub(&ops[j].mul(&ops[i])?))
                .and_then(|m| m.sub(&op_of(&br)))
                .expect("same shape");
            for l in 0..n {
                for k in 0..n {
                    components[((l * n + i) * n + j) * n + k] = r.get(l, k).clone();
                }
            }
        }
    }
    Curvature {
        basis: b,
        components,
    }
}

fn scale_matrix(m: &Matrix, s: &Rational) -> Matrix {
    let e = m.entries().iter().map(|x| x * s).collect();
    Matrix::new(m.rows(), m.cols(), e).expect("shape")
}

/// Verdicts of the curvature identities of a bi-Lagrangian canonical
/// connection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurvatureIdentities {
    /// `R(x, y)z + R(y, z)x + R(z, x)y = 0`.
    pub bianchi: bool,
    /// `R(x, y) = 0` whenever `x, y` lie in the same leaf.
    pub leafwise_flat: bool,
    /// `R(x, y)z = R(x, z)y` whenever `y, z` lie in the same leaf.
    pub leaf_symmetric: bool,
}

impl CurvatureIdentities {
    pub fn passed(&self) -> bool {
        self.bianchi && self.leafwise_flat && self.leaf_symmetric
    }
}

/// Checks the identities on a curvature tabulated on an adapted basis whose
/// first `m` vectors span `F` and remaining vectors span `G`.
pub fn curvature_identities(r: &Curvature, m: usize) -> CurvatureIdentities {
    let n = r.dim();
    let leaf = |i: usize| i < m;
    let mut bianchi = true;
    let mut leafwise_flat = true;
    let mut leaf_symmetric = true;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let c = |a, b, c| r.component(l, a, b, c);
                    let cyc = c(i, j, k) + c(j, k, i) + c(k, i, j);
                    if !cyc.is_zero() {
                        bianchi = false;
                    }
                    if leaf(i) == leaf(j) && !c(i, j, k).is_zero() {
                        leafwise_flat = false;
                    }
                    if leaf(j) == leaf(k) && c(i, j, k) != c(i, k, j) {
                        leaf_symmetric = false;
                    }
                }
            }
        }
    }
    CurvatureIdentities {
        bianchi,
        leafwise_flat,
        leaf_symmetric,
    }
}

/// `Ric(b_i, b_j) = tr(z ↦ R(z, b_i) b_j)`.
pub fn ricci(r: &Curvature) -> Matrix {
    let n = r.dim();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let t = (0..n).fold(Rational::zero(), |acc, k| acc + r.component(k, k, i, j));
            out.set(i, j, t);
        }
    }
    out
}

/// Levi-Civita connection of a non-degenerate symmetric bilinear form with
/// Gram matrix `metric`, tabulated on the standard basis:
/// `2 g(∇_x y, z) = g([x, y], z) − g([y, z], x) + g([z, x], y)`.
pub fn levi_civita(g: &LieAlgebra, metric: &Matrix) -> Result<ConnectionTable> {
    let n = g.dim();
    if metric.rows() != n || !metric.is_square() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: metric.rows(),
        });
    }
    if !metric.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let inv = metric.inverse().ok_or(Error::DegenerateMetric)?;
    let gm = |x: &Vector, y: &Vector| -> Rational {
        let my = metric.mul_vec(y.coords()).expect("dimension");
        x.coords()
            .iter()
            .zip(&my)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    };
    let e: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
    let half = Rational::new(1.into(), 2.into());
    let table = e
        .iter()
        .map(|x| {
            e.iter()
                .map(|y| {
                    let rhs: Vec<Rational> = e
                        .iter()
                        .map(|z| {
                            let t = gm(&g.bracket_unchecked(x, y), z)
                                - gm(&g.bracket_unchecked(y, z), x)
                                + gm(&g.bracket_unchecked(z, x), y);
                            t * &half
                        })
                        .collect();
                    Vector::new(inv.mul_vec(&rhs).expect("dimension"))
                })
                .collect()
        })
        .collect();
    ConnectionTable::new(e, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{parse_salamon, parse_two_form};
    use crate::expr::{parse_vector, parse_vector_list};
    use crate::exterior::KForm;
    use crate::kernel::rat;
    use crate::symplectic::para_kaehler;

    fn algebra(tokens: &str) -> LieAlgebra {
        let toks: Vec<&str> = tokens.split(',').collect();
        LieAlgebra::from_differentials("g", &parse_salamon(&toks).unwrap()).unwrap()
    }

    fn form(token: &str) -> KForm {
        parse_two_form(token, 6).unwrap()
    }

    fn structure(alg: &str, w: &str, f: &str, g: &str) -> BiLagrangianStructure {
        let a = algebra(alg);
        let n = a.dim();
        BiLagrangianStructure::new(
            &a,
            &form(w),
            parse_vector_list(f, n).unwrap(),
            parse_vector_list(g, n).unwrap(),
        )
        .unwrap()
    }

    fn l3a1() -> BiLagrangianStructure {
        structure("0,0,0,12", "14+23", "e1, e3", "e2, e4")
    }

    #[test]
    fn d_solves_defining_equation() {
        let b = l3a1();
        let n = 4;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (Vector::basis(n, i), Vector::basis(n, j));
                let d = b.solve_d(&x, &y);
                for k in 0..n {
                    let z = Vector::basis(n, k);
                    let rhs = -b.omega().pair(&y, &b.algebra().bracket(&x, &z).unwrap());
                    assert_eq!(b.omega().pair(&d, &z), rhs);
                }
            }
        }
        let e1 = Vector::basis(n, 0);
        assert_eq!(b.solve_d(&e1, &e1), parse_vector("-e3", n).unwrap());
    }

    #[test]
    fn canonical_connection_on_l3a1() {
        let b = l3a1();
        let c = canonical_connection(&b);
        let n = 4;
        assert!(is_torsion_free(b.algebra(), &c));
        assert!(is_parallel(b.omega(), &c));
        assert!(c.preserves(b.f()) && c.preserves(b.g()));
        let (e1, e2) = (Vector::basis(n, 0), Vector::basis(n, 1));
        assert_eq!(c.nabla(&e1, &e1), parse_vector("-e3", n).unwrap());
        assert_eq!(c.nabla(&e1, &e2), parse_vector("-e4", n).unwrap());
        let r = curvature(b.algebra(), &c);
        assert!(r.is_zero());
    }

    #[test]
    fn corrupted_table_loses_torsion_freeness() {
        let b = l3a1();
        let mut c = canonical_connection(&b);
        let v = c.entry(0, 1) + &Vector::basis(4, 3);
        c.set_entry(0, 1, v);
        assert!(!is_torsion_free(b.algebra(), &c));
    }

    #[test]
    fn l6_12_curvature() {
        let b = structure(
            "0,0,0,12,14+23,13-24",
            "-15+6*26+7*34",
            "e2, e3, e5",
            "e2-2*e1, e3-e4, -3*e5+e6",
        );
        let c = canonical_connection(&b);
        let n = 6;
        let f1 = Vector::basis(n, 1);
        let f2 = Vector::basis(n, 2);
        assert_eq!(c.nabla(&f1, &f2), parse_vector("-7*e5", n).unwrap());
        let r = curvature(b.algebra(), &c);
        assert!(!r.is_zero());
        assert!(curvature_identities(&r, 3).passed());
        // R(g1, f1) f1 = 208/7 e5
        assert_eq!(r.on_basis(3, 0, 0), parse_vector("208/7*e5", n).unwrap());
        assert!(ricci(&r).is_zero());
        let pk = para_kaehler(&b);
        let lc = levi_civita(b.algebra(), &pk.metric).unwrap();
        assert!(lc.same_as(&c));
    }

    #[test]
    fn levi_civita_of_abelian_is_zero() {
        let a = LieAlgebra::abelian("A4", 4);
        let lc = levi_civita(&a, &Matrix::identity(4)).unwrap();
        assert!(lc.ambient_table().iter().flatten().all(Vector::is_zero));
        let mut degenerate = Matrix::identity(4);
        degenerate.set(3, 3, rat(0));
        assert!(matches!(
            levi_civita(&a, &degenerate),
            Err(Error::DegenerateMetric)
        ));
    }
}
