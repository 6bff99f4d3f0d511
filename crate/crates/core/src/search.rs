//! Budgeted search for bi-Lagrangian witnesses over echelon forms with
//! small rational entries. A failed search is a report, not a proof.

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::KForm;
use crate::kernel::{Matrix, Rational};
use crate::lie::{LieAlgebra, Subspace, Vector};
use crate::symplectic::{is_lagrangian, BiLagrangianStructure, SymplecticForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Coordinate subspaces, then one pivot pattern at a time.
    CoordinateFirst,
    /// All patterns by number of nonzero free entries.
    EchelonGrid,
    /// Coordinate subspaces, then seeded random echelon forms.
    Random,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "coordinatefirst" | "coordinate" => Some(Self::CoordinateFirst),
            "echelongrid" | "grid" => Some(Self::EchelonGrid),
            "random" => Some(Self::Random),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::CoordinateFirst => "coordinateFirst",
            Self::EchelonGrid => "echelonGrid",
            Self::Random => "random",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub seed: u64,
    /// Subspaces examined, foliation candidates and complements together.
    pub budget: u64,
    /// Trial entries are `p/q` with `|p| ≤ height` and `1 ≤ q ≤ height`.
    pub height: u32,
    pub strategy: Strategy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 1_000_000,
            height: 1,
            strategy: Strategy::EchelonGrid,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidConfig("budget must be positive".into()));
        }
        if self.height == 0 {
            return Err(Error::InvalidConfig("height must be at least 1".into()));
        }
        Ok(())
    }
}

/// Rejections per stage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct FilterStats {
    pub not_subalgebra: u64,
    pub nilpotent_filter: u64,
    pub not_lagrangian: u64,
    pub no_complement: u64,
    pub complements_tried: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchStatus {
    Found,
    BudgetExhausted,
    /// Every candidate of the grid was examined.
    GridExhausted { height: u32 },
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub found: Option<BiLagrangianStructure>,
    pub candidates_tried: u64,
    pub stats: FilterStats,
    pub status: SearchStatus,
}

/// `0, 1, −1, 2, −2, …, 1/2, −1/2, …`: integers by size, then fractions by
/// denominator.
pub fn balanced_values(height: u32) -> Vec<Rational> {
    let h = i64::from(height);
    let mut out = vec![Rational::zero()];
    for q in 1..=h {
        for p in 1..=h {
            let v = Rational::new(p.into(), q.into());
            if *v.denom() == q.into() {
                out.push(v.clone());
                out.push(-v);
            }
        }
    }
    out
}

/// Every `k`-subset of `0..n` in lexicographic order.
fn pivot_patterns(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Free positions `(row, column)` of the echelon form with given pivots.
fn free_slots(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

fn echelon(n: usize, pivots: &[usize], slots: &[(usize, usize)], values: &[Rational]) -> Subspace {
    let mut rows: Vec<Vec<Rational>> = pivots
        .iter()
        .map(|&p| {
            let mut v = vec![Rational::zero(); n];
            v[p] = Rational::one();
            v
        })
        .collect();
    for (&(r, c), x) in slots.iter().zip(values) {
        rows[r][c] = x.clone();
    }
    Subspace::span(n, rows.into_iter().map(Vector::new).collect()).expect("echelon rows are independent")
}

/// Assignments of `k` slots with exactly `support` nonzero entries:
/// positions in lexicographic order, values in balanced order.
fn with_support(k: usize, support: usize, nonzero: Vec<Rational>) -> Box<dyn Iterator<Item = Vec<Rational>>> {
    if support == 0 {
        return Box::new(std::iter::once(vec![Rational::zero(); k]));
    }
    Box::new((0..k).combinations(support).flat_map(move |pos| {
        (0..support)
            .map(|_| nonzero.clone().into_iter())
            .multi_cartesian_product()
            .map(move |vals| {
                let mut out = vec![Rational::zero(); k];
                for (&p, v) in pos.iter().zip(vals) {
                    out[p] = v.clone();
                }
                out
            })
    }))
}

/// All assignments of `k` slots ordered by support size.
fn grid(k: usize, nonzero: Vec<Rational>) -> impl Iterator<Item = Vec<Rational>> {
    (0..=k).flat_map(move |s| with_support(k, s, nonzero.clone()))
}

/// Deterministic stream of `dim g / 2`-dimensional subspaces. Finite for the
/// grid strategies, unbounded for `Random`.
pub fn enumerate_candidates(g: &LieAlgebra, cfg: &SearchConfig) -> Box<dyn Iterator<Item = Subspace>> {
    let n = g.dim();
    let patterns = pivot_patterns(n, n / 2);
    let values = balanced_values(cfg.height.max(1));
    let nonzero: Vec<Rational> = values[1..].to_vec();
    let coordinate = {
        let patterns = patterns.clone();
        patterns.into_iter().map(move |p| {
            let slots = free_slots(n, &p);
            echelon(n, &p, &slots, &vec![Rational::zero(); slots.len()])
        })
    };
    match cfg.strategy {
        Strategy::EchelonGrid => {
            let max_free = patterns.iter().map(|p| free_slots(n, p).len()).max().unwrap_or(0);
            Box::new((0..=max_free).flat_map(move |s| {
                let nonzero = nonzero.clone();
                patterns
                    .clone()
                    .into_iter()
                    .filter(move |p| free_slots(n, p).len() >= s)
                    .flat_map(move |p| {
                        let slots = free_slots(n, &p);
                        with_support(slots.len(), s, nonzero.clone()).map(move |v| echelon(n, &p, &slots, &v))
                    })
            }))
        }
        Strategy::CoordinateFirst => Box::new(coordinate.chain(patterns.clone().into_iter().flat_map(
            move |p| {
                let slots = free_slots(n, &p);
                let nz = nonzero.clone();
                let k = slots.len();
                (1..=k)
                    .flat_map(move |s| with_support(k, s, nz.clone()))
                    .map(move |v| echelon(n, &p, &slots, &v))
            },
        ))),
        Strategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Box::new(coordinate.chain(std::iter::from_fn(move || {
                let p = &patterns[rng.gen_range(0..patterns.len())];
                let slots = free_slots(n, p);
                let v: Vec<Rational> = slots
                    .iter()
                    .map(|_| values[rng.gen_range(0..values.len())].clone())
                    .collect();
                Some(echelon(n, p, &slots, &v))
            })))
        }
    }
}

/// Lagrangian complements of a Lagrangian `f`, as graphs of maps from the
/// non-pivot coordinates into `f`. Isotropy is linear in the map; its free
/// variables run over the grid.
struct Complements {
    base: Vec<Vector>,
    particular: Vec<Rational>,
    directions: Vec<Vec<Rational>>,
    m: usize,
    f_basis: Vec<Vector>,
}

impl Complements {
    fn new(w: &SymplecticForm, f: &Subspace) -> Option<Self> {
        let n = f.ambient_dim();
        let m = f.dim();
        let base: Vec<Vector> = (0..n)
            .filter(|c| !f.pivots().contains(c))
            .map(|c| Vector::basis(n, c))
            .collect();
        let fb = f.basis();
        let idx = |a: usize, b: usize| a * m + b;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for a in 0..m {
            for a2 in a + 1..m {
                let mut row = vec![Rational::zero(); m * m];
                for b in 0..m {
                    row[idx(a2, b)] += w.pair(&base[a], &fb[b]);
                    row[idx(a, b)] += w.pair(&fb[b], &base[a2]);
                }
                rows.push(row);
                rhs.push(-w.pair(&base[a], &base[a2]));
            }
        }
        let (particular, directions) = if rows.is_empty() {
            (vec![Rational::zero(); m * m], Matrix::zeros(1, m * m).nullspace())
        } else {
            let a = Matrix::from_rows(&rows).ok()?;
            (a.solve(&rhs).ok()??, a.nullspace())
        };
        Some(Self {
            base,
            particular,
            directions,
            m,
            f_basis: fb.to_vec(),
        })
    }

    fn subspace(&self, t: &[Rational]) -> Subspace {
        let mut psi = self.particular.clone();
        for (d, s) in self.directions.iter().zip(t) {
            if !s.is_zero() {
                for (x, y) in psi.iter_mut().zip(d) {
                    *x += s * y;
                }
            }
        }
        let n = self.base[0].dim();
        let vs = (0..self.m)
            .map(|a| {
                let mut v = self.base[a].clone();
                for b in 0..self.m {
                    v.add_scaled(&psi[a * self.m + b], &self.f_basis[b]);
                }
                v
            })
            .collect();
        Subspace::span(n, vs).expect("graph vectors are independent")
    }
}

fn passes_filters(g: &LieAlgebra, s: &Subspace) -> bool {
    g.is_subalgebra(s) && g.nilpotent_subalgebra_filter(s).unwrap_or(false)
}

/// Walks the Lagrangian complements of `f`. `Err(())` means the budget ran
/// out.
#[allow(clippy::too_many_arguments)]
fn complements(
    g: &LieAlgebra,
    w: &KForm,
    sw: &SymplecticForm,
    f: &Subspace,
    nonzero: &[Rational],
    budget: u64,
    tried: &mut u64,
    stats: &mut FilterStats,
) -> std::result::Result<Option<BiLagrangianStructure>, ()> {
    let Some(comp) = Complements::new(sw, f) else {
        stats.no_complement += 1;
        return Ok(None);
    };
    for t in grid(comp.directions.len(), nonzero.to_vec()) {
        if *tried >= budget {
            return Err(());
        }
        *tried += 1;
        stats.complements_tried += 1;
        let h = comp.subspace(&t);
        if !passes_filters(g, &h) || !is_lagrangian(sw, &h) {
            continue;
        }
        if let Ok(s) = BiLagrangianStructure::from_subspaces(g, w, f, &h) {
            return Ok(Some(s));
        }
    }
    stats.no_complement += 1;
    Ok(None)
}

/// Lagrangian complements of the Lagrangian subspace `f` at the given
/// height, in search order. `None` when `f` is not Lagrangian.
pub fn enumerate_complements(
    w: &SymplecticForm,
    f: &Subspace,
    height: u32,
) -> Option<Box<dyn Iterator<Item = Subspace>>> {
    if !is_lagrangian(w, f) {
        return None;
    }
    let comp = Complements::new(w, f)?;
    let nonzero = balanced_values(height.max(1))[1..].to_vec();
    Some(Box::new(
        grid(comp.directions.len(), nonzero).map(move |t| comp.subspace(&t)),
    ))
}

/// Searches only the complements of a fixed foliation `f`.
pub fn search_complement(g: &LieAlgebra, w: &KForm, f: &Subspace, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let sw = SymplecticForm::new(g, w)?;
    if f.ambient_dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: f.ambient_dim(),
        });
    }
    let values = balanced_values(cfg.height);
    let mut tried = 0;
    let mut stats = FilterStats::default();
    let (found, status) = if !passes_filters(g, f) || !is_lagrangian(&sw, f) {
        stats.not_lagrangian += 1;
        (None, SearchStatus::GridExhausted { height: cfg.height })
    } else {
        match complements(g, w, &sw, f, &values[1..], cfg.budget, &mut tried, &mut stats) {
            Ok(Some(s)) => (Some(s), SearchStatus::Found),
            Ok(None) => (None, SearchStatus::GridExhausted { height: cfg.height }),
            Err(()) => (None, SearchStatus::BudgetExhausted),
        }
    };
    Ok(SearchOutcome {
        found,
        candidates_tried: tried,
        stats,
        status,
    })
}

/// Searches a bi-Lagrangian pair for `(g, w)`; stops at the first pair that
/// verifies or when the budget runs out.
pub fn search_bilagrangian(g: &LieAlgebra, w: &KForm, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let sw = SymplecticForm::new(g, w)?;
    let values = balanced_values(cfg.height);
    let nonzero = &values[1..];
    let mut tried = 0u64;
    let mut stats = FilterStats::default();
    let outcome = |found, tried, stats, status| SearchOutcome {
        found,
        candidates_tried: tried,
        stats,
        status,
    };
    for f in enumerate_candidates(g, cfg) {
        if tried >= cfg.budget {
            return Ok(outcome(None, tried, stats, SearchStatus::BudgetExhausted));
        }
        tried += 1;
        if !g.is_subalgebra(&f) {
            stats.not_subalgebra += 1;
            continue;
        }
        if !g.nilpotent_subalgebra_filter(&f).unwrap_or(false) {
            stats.nilpotent_filter += 1;
            continue;
        }
        if !is_lagrangian(&sw, &f) {
            stats.not_lagrangian += 1;
            continue;
        }
        match complements(g, w, &sw, &f, nonzero, cfg.budget, &mut tried, &mut stats) {
            Ok(Some(s)) => return Ok(outcome(Some(s), tried, stats, SearchStatus::Found)),
            Ok(None) => {}
            Err(()) => return Ok(outcome(None, tried, stats, SearchStatus::BudgetExhausted)),
        }
    }
    Ok(outcome(
        None,
        tried,
        stats,
        SearchStatus::GridExhausted { height: cfg.height },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{builtin, parse_two_form};
    use crate::kernel::ratio;

    fn grid_cfg(height: u32) -> SearchConfig {
        SearchConfig {
            height,
            ..Default::default()
        }
    }

    #[test]
    fn balanced_order() {
        let v = balanced_values(2);
        let want: Vec<Rational> = [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]
            .iter()
            .map(|&(p, q)| ratio(p, q))
            .collect();
        assert_eq!(v, want);
        assert_eq!(balanced_values(3).len(), 1 + 2 * 7);
    }

    #[test]
    fn coordinate_phase_comes_first() {
        let a4 = LieAlgebra::abelian("A4", 4);
        let cfg = SearchConfig {
            strategy: Strategy::CoordinateFirst,
            ..Default::default()
        };
        let first: Vec<Vec<usize>> = enumerate_candidates(&a4, &cfg)
            .take(6)
            .map(|s| s.pivots().to_vec())
            .collect();
        assert_eq!(first, pivot_patterns(4, 2));
        let e = |i| Vector::basis(4, i);
        let s = enumerate_candidates(&a4, &cfg).next().unwrap();
        assert_eq!(s, Subspace::span(4, vec![e(0), e(1)]).unwrap());
    }

    #[test]
    fn grid_counts_per_pattern() {
        let g = LieAlgebra::abelian("A6", 6);
        let all: Vec<Subspace> = enumerate_candidates(&g, &grid_cfg(1)).collect();
        let vals = [ratio(-1, 1), ratio(0, 1), ratio(1, 1)];
        for p in pivot_patterns(6, 3) {
            let k = free_slots(6, &p).len() as u32;
            let with_p: Vec<&Subspace> = all.iter().filter(|s| s.pivots() == p.as_slice()).collect();
            assert_eq!(with_p.len(), 3usize.pow(k));
            for s in with_p {
                assert!(s.basis().iter().flat_map(|v| v.coords()).all(|x| vals.contains(x)));
            }
        }
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn random_stream_is_seeded() {
        let g = LieAlgebra::abelian("A6", 6);
        let cfg = SearchConfig {
            strategy: Strategy::Random,
            seed: 7,
            ..Default::default()
        };
        let a: Vec<Subspace> = enumerate_candidates(&g, &cfg).take(200).collect();
        let b: Vec<Subspace> = enumerate_candidates(&g, &cfg).take(200).collect();
        assert_eq!(a, b);
        let other = SearchConfig { seed: 8, ..cfg };
        let c: Vec<Subspace> = enumerate_candidates(&g, &other).take(200).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn a4_found_in_coordinate_phase() {
        let a4 = LieAlgebra::abelian("A4", 4);
        let w = parse_two_form("12", 4).unwrap().add(&parse_two_form("34", 4).unwrap());
        let out = search_bilagrangian(&a4, &w, &grid_cfg(1)).unwrap();
        let s = out.found.unwrap();
        let e = |i| Vector::basis(4, i);
        assert_eq!(s.f(), &Subspace::span(4, vec![e(0), e(2)]).unwrap());
        assert_eq!(s.g(), &Subspace::span(4, vec![e(1), e(3)]).unwrap());
    }

    #[test]
    fn l4_has_no_witness() {
        let e = builtin().entry("L4").unwrap();
        for h in 1..=2 {
            let out = search_bilagrangian(e.algebra(), e.omega.as_ref().unwrap(), &grid_cfg(h)).unwrap();
            assert!(out.found.is_none());
            assert_eq!(out.status, SearchStatus::GridExhausted { height: h });
        }
        let small = SearchConfig {
            budget: 3,
            ..Default::default()
        };
        let out = search_bilagrangian(e.algebra(), e.omega.as_ref().unwrap(), &small).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExhausted);
        assert_eq!(out.candidates_tried, 3);
    }

    #[test]
    fn rejects_bad_input() {
        let e = builtin().entry("L4").unwrap();
        let bad = SearchConfig {
            budget: 0,
            ..Default::default()
        };
        assert!(matches!(
            search_bilagrangian(e.algebra(), e.omega.as_ref().unwrap(), &bad),
            Err(Error::InvalidConfig(_))
        ));
        let w = parse_two_form("12", 4).unwrap();
        assert!(matches!(
            search_bilagrangian(e.algebra(), &w, &grid_cfg(1)),
            Err(Error::NotSymplectic(_))
        ));
    }

    #[test]
    fn l6_10_recovers_the_printed_witness() {
        let e = builtin().entry("L6,10").unwrap();
        let out = search_bilagrangian(e.algebra(), e.omega.as_ref().unwrap(), &grid_cfg(1)).unwrap();
        assert!(out.found.is_some());
        let (f, g) = e.witness_subspaces().unwrap();
        assert!(enumerate_candidates(e.algebra(), &grid_cfg(1)).any(|s| s == f));
        let w = e.omega.as_ref().unwrap();
        let anchored = search_complement(e.algebra(), w, &f, &grid_cfg(1)).unwrap();
        assert!(anchored.found.is_some());
        let sw = SymplecticForm::new(e.algebra(), w).unwrap();
        assert!(enumerate_complements(&sw, &f, 1).unwrap().any(|h| h == g));
    }
}
