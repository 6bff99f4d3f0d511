//! Reference values of the canonical connection and its curvature on the
//! printed witness bases, and the comparison against computed tables.

use crate::connection::{canonical_connection, curvature, ricci, ConnectionTable, Curvature};
use crate::error::{Error, Result};
use crate::expr::parse_vector;
use crate::lie::Vector;
use crate::symplectic::BiLagrangianStructure;

const BUILTIN: &str = include_str!("../data/golden.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NablaValue {
    pub label: String,
    pub x: Vector,
    pub y: Vector,
    pub value: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureValue {
    pub label: String,
    pub x: Vector,
    pub y: Vector,
    pub z: Vector,
    pub value: Vector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenBlock {
    pub name: String,
    pub nabla: Vec<NablaValue>,
    pub curvature: Vec<CurvatureValue>,
    /// `R = 0` was stated.
    pub flat: bool,
    /// `Ric = 0` was stated.
    pub ricci_flat: bool,
}

/// Splits `a, b` at top-level commas.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// Index of the `)` closing the `(` at `open`.
fn closing(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in s[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn parse_line(block: &mut GoldenBlock, line: &str, dim: usize) -> std::result::Result<(), String> {
    let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "R=0" => {
            block.flat = true;
            return Ok(());
        }
        "Ric=0" => {
            block.ricci_flat = true;
            return Ok(());
        }
        _ => {}
    }
    let (lhs, rhs) = line.split_once('=').ok_or("expected `=`")?;
    let vec = |s: &str| parse_vector(s.trim(), dim).map_err(|e| format!("`{}`: {e}", s.trim()));
    let lhs = lhs.trim();
    let value = vec(rhs)?;
    if let Some(rest) = lhs.strip_prefix("nabla") {
        let close = closing(rest, 0).ok_or("unbalanced parentheses")?;
        let args = split_args(&rest[1..close]);
        if args.len() != 2 || !rest[close + 1..].trim().is_empty() {
            return Err("expected nabla(X, Y)".into());
        }
        block.nabla.push(NablaValue {
            label: line.trim().to_string(),
            x: vec(args[0])?,
            y: vec(args[1])?,
            value,
        });
    } else if let Some(rest) = lhs.strip_prefix('R') {
        let close = closing(rest, 0).ok_or("unbalanced parentheses")?;
        let args = split_args(&rest[1..close]);
        if args.len() != 2 {
            return Err("expected R(X, Y) Z".into());
        }
        block.curvature.push(CurvatureValue {
            label: line.trim().to_string(),
            x: vec(args[0])?,
            y: vec(args[1])?,
            z: vec(&rest[close + 1..])?,
            value,
        });
    } else {
        return Err(format!("unrecognized statement `{lhs}`"));
    }
    Ok(())
}

/// Parses golden blocks; `dim_of` gives the ambient dimension of a named
/// algebra.
pub fn parse_golden(text: &str, dim_of: impl Fn(&str) -> Option<usize>) -> Result<Vec<GoldenBlock>> {
    let mut blocks: Vec<(GoldenBlock, usize)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "version = 1" {
            continue;
        }
        if let Some(name) = line.strip_prefix("[golden ").and_then(|s| s.strip_suffix(']')) {
            let dim = dim_of(name.trim())
                .ok_or_else(|| Error::Catalog(format!("golden line {ln}: unknown algebra `{name}`")))?;
            blocks.push((
                GoldenBlock {
                    name: name.trim().to_string(),
                    ..Default::default()
                },
                dim,
            ));
            continue;
        }
        let (block, dim) = blocks
            .last_mut()
            .ok_or_else(|| Error::Catalog(format!("golden line {ln}: statement outside a block")))?;
        parse_line(block, line, *dim).map_err(|e| Error::Catalog(format!("golden line {ln}: {e}")))?;
    }
    Ok(blocks.into_iter().map(|(b, _)| b).collect())
}

/// The built-in reference values, resolved against the built-in catalog.
pub fn builtin_golden() -> Result<Vec<GoldenBlock>> {
    let cat = crate::catalog::builtin();
    parse_golden(BUILTIN, |name| cat.entry(name).ok().map(|e| e.dim))
}

/// Outcome of comparing one block. `mismatches` are listed values that
/// differ; `unlisted_nonzero` are basis components the reference leaves
/// out but which do not vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GoldenReport {
    pub name: String,
    pub nabla_checked: usize,
    pub curvature_checked: usize,
    pub mismatches: Vec<String>,
    pub unlisted_nonzero: Vec<String>,
    pub flat: bool,
    pub ricci_flat: bool,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.unlisted_nonzero.is_empty()
    }
}

fn basis_index(basis: &[Vector], v: &Vector) -> Option<usize> {
    basis.iter().position(|b| b == v)
}

/// Compares a reference block with the canonical connection of `b`
/// tabulated on its adapted basis.
pub fn compare_golden(block: &GoldenBlock, b: &BiLagrangianStructure) -> GoldenReport {
    let c = canonical_connection(b);
    let r = curvature(b.algebra(), &c);
    compare_tables(block, &c, &r)
}

pub fn compare_tables(block: &GoldenBlock, c: &ConnectionTable, r: &Curvature) -> GoldenReport {
    let basis = c.basis();
    let n = basis.len();
    let mut rep = GoldenReport {
        name: block.name.clone(),
        flat: r.is_zero(),
        ricci_flat: ricci(r).is_zero(),
        ..Default::default()
    };
    let mut listed_nabla = vec![vec![false; n]; n];
    for v in &block.nabla {
        match (basis_index(basis, &v.x), basis_index(basis, &v.y)) {
            (Some(i), Some(j)) => {
                listed_nabla[i][j] = true;
                rep.nabla_checked += 1;
                if c.entry(i, j) != &v.value {
                    rep.mismatches
                        .push(format!("{}: computed {}", v.label, c.entry(i, j)));
                }
            }
            _ => rep
                .mismatches
                .push(format!("{}: arguments are not adapted basis vectors", v.label)),
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !listed_nabla[i][j] && !c.entry(i, j).is_zero() {
                rep.unlisted_nonzero.push(format!(
                    "nabla({}, {}) = {}",
                    basis[i],
                    basis[j],
                    c.entry(i, j)
                ));
            }
        }
    }
    let mut listed_r = vec![false; n * n * n];
    for v in &block.curvature {
        match (
            basis_index(basis, &v.x),
            basis_index(basis, &v.y),
            basis_index(basis, &v.z),
        ) {
            (Some(i), Some(j), Some(k)) => {
                rep.curvature_checked += 1;
                listed_r[(i * n + j) * n + k] = true;
                listed_r[(j * n + i) * n + k] = true;
                let got = r.on_basis(i, j, k);
                let swapped = r.on_basis(j, i, k);
                if got != v.value || swapped != -&v.value {
                    rep.mismatches.push(format!("{}: computed {got}", v.label));
                }
            }
            _ => rep
                .mismatches
                .push(format!("{}: arguments are not adapted basis vectors", v.label)),
        }
    }
    for (i, j, k) in r.nonzero() {
        if !listed_r[(i * n + j) * n + k] {
            rep.unlisted_nonzero.push(format!(
                "R({}, {}) {} = {}",
                basis[i],
                basis[j],
                basis[k],
                r.on_basis(i, j, k)
            ));
        }
    }
    if block.flat && !rep.flat {
        rep.mismatches.push("R = 0 stated, curvature is nonzero".into());
    }
    if block.ricci_flat && !rep.ricci_flat {
        rep.mismatches.push("Ric = 0 stated, Ricci tensor is nonzero".into());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_statements() {
        let text = "[golden X]\nnabla(e2-2*e1, e3-e4) = 7/3*(-3*e5+e6)\nR(e2, e2-2*e1) (e2-2*e1) = -208/21*(-3*e5+e6)\nRic = 0\n";
        let blocks = parse_golden(text, |_| Some(6)).unwrap();
        let b = &blocks[0];
        assert_eq!(b.nabla.len(), 1);
        assert_eq!(b.nabla[0].value, parse_vector("-7*e5 + 7/3*e6", 6).unwrap());
        assert_eq!(b.curvature[0].z, Vector::from_i64(&[-2, 1, 0, 0, 0, 0]));
        assert!(b.ricci_flat && !b.flat);
        assert!(parse_golden("nabla(e1, e1) = 0", |_| Some(2)).is_err());
        assert!(parse_golden("[golden X]\nnabla(e1) = e1", |_| Some(2)).is_err());
    }

    #[test]
    fn builtin_blocks_cover_the_witnesses() {
        let blocks = builtin_golden().unwrap();
        assert_eq!(blocks.len(), 19);
        let cat = crate::catalog::builtin();
        for b in &blocks {
            assert!(cat.entry(&b.name).unwrap().witness.is_some(), "{}", b.name);
        }
    }

    #[test]
    fn builtin_blocks_match() {
        let cat = crate::catalog::builtin();
        for block in builtin_golden().unwrap() {
            let s = cat.entry(&block.name).unwrap().structure().unwrap().unwrap();
            let rep = compare_golden(&block, &s);
            assert!(rep.passed(), "{rep:#?}");
        }
    }

    #[test]
    fn perturbed_value_is_reported() {
        let cat = crate::catalog::builtin();
        let s = cat.entry("L6,12").unwrap().structure().unwrap().unwrap();
        let mut block = builtin_golden()
            .unwrap()
            .into_iter()
            .find(|b| b.name == "L6,12")
            .unwrap();
        assert!(compare_golden(&block, &s).passed());
        block.curvature[0].value = parse_vector("209/7*e5", 6).unwrap();
        let rep = compare_golden(&block, &s);
        assert_eq!(rep.mismatches.len(), 1);
        block.nabla.pop();
        let rep = compare_golden(&block, &s);
        assert_eq!(rep.unlisted_nonzero.len(), 1);
    }
}
