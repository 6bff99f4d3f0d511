//! Symbolic identities behind the non-existence arguments, checked by
//! exact polynomial arithmetic over the catalog algebras.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::exterior::{closed_two_forms_basis, pairs};
use crate::expr::{parse_param_vector, parse_poly};
use crate::kernel::Matrix;
use crate::lie::LieAlgebra;
use crate::parametric::{parametric_bracket, parametric_pfaffian, ParamTwoForm, ParamVector};
use crate::poly::ParamPoly;

const BUILTIN: &str = include_str!("../data/lemmas.txt");

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lemma {
    pub id: String,
    pub algebra: String,
    pub vectors: Vec<(String, String)>,
    pub omega: Option<String>,
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaSet {
    lemmas: Vec<Lemma>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub statement: String,
    pub passed: bool,
    /// What differed, coefficient by coefficient.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub id: String,
    pub algebra: String,
    pub checks: Vec<CheckOutcome>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn parse_lemmas(text: &str) -> Result<LemmaSet> {
    let mut lemmas: Vec<Lemma> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "version = 1" {
            continue;
        }
        let err = |m: String| Error::Catalog(format!("lemma line {ln}: {m}"));
        if let Some(id) = line.strip_prefix("[lemma ").and_then(|s| s.strip_suffix(']')) {
            let id = id.trim();
            if lemmas.iter().any(|l| l.id == id) {
                return Err(err(format!("duplicate lemma `{id}`")));
            }
            lemmas.push(Lemma {
                id: id.to_string(),
                ..Default::default()
            });
            continue;
        }
        let lemma = lemmas
            .last_mut()
            .ok_or_else(|| err("statement outside a lemma block".into()))?;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim().to_string());
        match key {
            "algebra" => lemma.algebra = value,
            "omega" => lemma.omega = Some(value),
            "check" => lemma.checks.push(value),
            k if k.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                lemma.vectors.push((k.to_string(), value))
            }
            k => return Err(err(format!("bad key `{k}`"))),
        }
    }
    for l in &lemmas {
        if l.algebra.is_empty() {
            return Err(Error::Catalog(format!("lemma `{}` names no algebra", l.id)));
        }
    }
    Ok(LemmaSet { lemmas })
}

pub fn builtin_lemmas() -> &'static LemmaSet {
    static SET: OnceLock<LemmaSet> = OnceLock::new();
    SET.get_or_init(|| parse_lemmas(BUILTIN).expect("built-in lemma data parses"))
}

/// Checks one built-in identity against the built-in catalog.
pub fn verify_lemma_identity(id: &str) -> Result<LemmaReport> {
    builtin_lemmas().verify(id, crate::catalog::builtin())
}

pub fn verify_all_lemmas() -> Result<Vec<LemmaReport>> {
    let cat = crate::catalog::builtin();
    let set = builtin_lemmas();
    set.ids().map(|id| set.verify(id, cat)).collect()
}

impl LemmaSet {
    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.lemmas.iter().map(|l| l.id.as_str())
    }

    pub fn lemmas(&self) -> &[Lemma] {
        &self.lemmas
    }

    pub fn get(&self, id: &str) -> Result<&Lemma> {
        self.lemmas
            .iter()
            .find(|l| l.id == id)
            .ok_or_else(|| Error::UnknownLemma(id.to_string()))
    }

    pub fn verify(&self, id: &str, catalog: &Catalog) -> Result<LemmaReport> {
        let lemma = self.get(id)?;
        let g = catalog.entry(&lemma.algebra)?.algebra();
        let ctx = Context::new(lemma, g)?;
        let checks = lemma
            .checks
            .iter()
            .map(|c| {
                let (passed, detail) = match ctx.check(c) {
                    Ok(None) => (true, None),
                    Ok(Some(d)) => (false, Some(d)),
                    Err(e) => (false, Some(format!("cannot evaluate: {e}"))),
                };
                CheckOutcome {
                    statement: c.clone(),
                    passed,
                    detail,
                }
            })
            .collect();
        Ok(LemmaReport {
            id: lemma.id.clone(),
            algebra: lemma.algebra.clone(),
            checks,
        })
    }
}

struct Context<'a> {
    g: &'a LieAlgebra,
    vectors: Vec<(String, ParamVector)>,
    omega: Option<ParamTwoForm>,
}

fn parse_family(src: &str, n: usize) -> Result<ParamTwoForm> {
    let poly = parse_poly(src)?;
    let ps = pairs(n);
    let names: Vec<String> = ps.iter().map(|[i, j]| format!("A{}{}", i + 1, j + 1)).collect();
    let (coeffs, rest) = poly
        .linear_split(&names)
        .ok_or_else(|| Error::Catalog(format!("omega `{src}` is not linear in the A_ij")))?;
    if !rest.is_zero() {
        return Err(Error::Catalog(format!("omega term `{rest}` has no A_ij")));
    }
    let mut out = ParamTwoForm::new(n);
    for ([i, j], c) in ps.into_iter().zip(coeffs) {
        out.set(i, j, c);
    }
    Ok(out)
}

/// Splits at commas outside brackets and parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
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

fn vector_diff(expected: &ParamVector, got: &ParamVector) -> Option<String> {
    let parts: Vec<String> = expected
        .coords()
        .iter()
        .zip(got.coords())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(k, (a, b))| format!("coefficient of e{}: expected {a}, computed {b}", k + 1))
        .collect();
    (!parts.is_empty()).then(|| parts.join("; "))
}

fn poly_diff(expected: &ParamPoly, got: &ParamPoly) -> Option<String> {
    (expected != got).then(|| format!("expected {expected}, computed {got}"))
}

impl<'a> Context<'a> {
    fn new(lemma: &Lemma, g: &'a LieAlgebra) -> Result<Self> {
        let n = g.dim();
        let vectors = lemma
            .vectors
            .iter()
            .map(|(k, v)| Ok((k.clone(), parse_param_vector(v, n)?)))
            .collect::<Result<Vec<_>>>()?;
        let omega = lemma.omega.as_deref().map(|s| parse_family(s, n)).transpose()?;
        Ok(Self { g, vectors, omega })
    }

    fn omega(&self) -> Result<&ParamTwoForm> {
        self.omega
            .as_ref()
            .ok_or_else(|| Error::Catalog("check needs `omega`".into()))
    }

    fn vector(&self, s: &str) -> Result<ParamVector> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let args = split_top(inner);
            if args.len() != 2 {
                return Err(Error::Catalog(format!("bracket `{s}` needs two arguments")));
            }
            let (u, v) = (self.vector(args[0])?, self.vector(args[1])?);
            return Ok(parametric_bracket(self.g, &u, &v));
        }
        if let Some((_, v)) = self.vectors.iter().find(|(k, _)| k == s) {
            return Ok(v.clone());
        }
        Ok(parse_param_vector(s, self.g.dim())?)
    }

    /// `Ok(None)` when the check holds, `Ok(Some(detail))` when it fails.
    fn check(&self, stmt: &str) -> Result<Option<String>> {
        let s = stmt.trim();
        if s == "closed" {
            return self.check_closed();
        }
        if s.starts_with('[') {
            let (lhs, rhs) = s
                .split_once("==")
                .ok_or_else(|| Error::Catalog("expected `==`".into()))?;
            let got = self.vector(lhs)?;
            let expected = parse_param_vector(rhs.trim(), self.g.dim())?;
            return Ok(vector_diff(&expected, &got));
        }
        if let Some(rest) = s.strip_prefix("omega(") {
            let (args, rhs) = rest
                .split_once(")")
                .ok_or_else(|| Error::Catalog("unbalanced `omega(`".into()))?;
            let rhs = rhs
                .trim()
                .strip_prefix("==")
                .ok_or_else(|| Error::Catalog("expected `==`".into()))?;
            let args = split_top(args);
            if args.len() != 2 {
                return Err(Error::Catalog("omega takes two vectors".into()));
            }
            let got = self.omega()?.pair(&self.vector(args[0])?, &self.vector(args[1])?);
            return Ok(poly_diff(&parse_poly(rhs)?, &got));
        }
        if let Some(rest) = s.strip_prefix("pfaffian") {
            return self.check_pfaffian(rest.trim());
        }
        Err(Error::Catalog(format!("unrecognized check `{s}`")))
    }

    fn check_pfaffian(&self, rest: &str) -> Result<Option<String>> {
        let omega = self.omega()?;
        if let Some(rhs) = rest.strip_prefix("^2") {
            if rhs.trim().trim_start_matches("==").trim() != "det" {
                return Err(Error::Catalog("expected `pfaffian^2 == det`".into()));
            }
            let pf = parametric_pfaffian(self.g, omega)?;
            return Ok(poly_diff(&omega.determinant(), &(&pf * &pf)));
        }
        let mut family = omega.clone();
        let mut rest = rest;
        if let Some(r) = rest.strip_prefix('[') {
            let (subs, after) = r
                .split_once(']')
                .ok_or_else(|| Error::Catalog("unbalanced substitution".into()))?;
            for sub in split_top(subs) {
                let (name, value) = sub
                    .split_once('=')
                    .ok_or_else(|| Error::Catalog(format!("bad substitution `{sub}`")))?;
                family = family.substitute(name.trim(), &parse_poly(value)?);
            }
            rest = after.trim();
        }
        let got = parametric_pfaffian(self.g, &family)?;
        if let Some(rhs) = rest.strip_prefix("==") {
            return Ok(poly_diff(&parse_poly(rhs)?, &got));
        }
        if let Some(rhs) = rest.strip_prefix('~') {
            let expected = parse_poly(rhs)?;
            return Ok(match got.proportionality(&expected) {
                Some(q) if !q.is_zero() => None,
                _ => Some(format!(
                    "computed {got}, not a nonzero multiple of {expected}"
                )),
            });
        }
        Err(Error::Catalog("expected `==` or `~` after pfaffian".into()))
    }

    /// dω = 0 identically, and the family spans every closed 2-form.
    fn check_closed(&self) -> Result<Option<String>> {
        let omega = self.omega()?;
        let d = omega.differential(self.g);
        if !d.is_empty() {
            let parts: Vec<String> = d
                .iter()
                .map(|(t, p)| format!("d omega on a{}{}{}: {p}", t[0] + 1, t[1] + 1, t[2] + 1))
                .collect();
            return Ok(Some(parts.join("; ")));
        }
        let params: Vec<String> = omega
            .terms()
            .flat_map(|(_, p)| p.variables())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let ps = pairs(self.g.dim());
        let mut rows = Vec::new();
        for name in &params {
            let mut row = Vec::with_capacity(ps.len());
            for &[i, j] in &ps {
                let (coeffs, _) = omega
                    .entry(i, j)
                    .linear_split(std::slice::from_ref(name))
                    .ok_or_else(|| Error::Catalog("omega is not linear in its parameters".into()))?;
                let c = coeffs[0]
                    .as_constant()
                    .ok_or_else(|| Error::Catalog("omega is not linear in its parameters".into()))?;
                row.push(c);
            }
            rows.push(row);
        }
        let rank = if rows.is_empty() {
            0
        } else {
            Matrix::from_rows(&rows)?.rank()
        };
        let expected = closed_two_forms_basis(self.g).len();
        Ok((rank != expected).then(|| {
            format!(
                "family has dimension {rank}, closed 2-forms have dimension {expected}"
            )
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_identities_hold() {
        for rep in verify_all_lemmas().unwrap() {
            assert!(rep.passed(), "{rep:#?}");
        }
    }

    #[test]
    fn named_identities() {
        assert!(verify_lemma_identity("L6_13_eq").unwrap().passed());
        assert!(verify_lemma_identity("L6_21_series").unwrap().passed());
        assert!(matches!(
            verify_lemma_identity("L6_99_eq"),
            Err(Error::UnknownLemma(_))
        ));
    }

    #[test]
    fn perturbed_identity_names_the_coefficient() {
        let text = "[lemma X]\nalgebra = L6,13\nf1 = e1 + a2*e2 + a3*e3\nf2 = b2*e2 + b3*e3 + b5*e5\ncheck = [f1,f2] == -(b2*e4 + (b5 + a2*b3 + a3*b2)*e6)\n";
        let set = parse_lemmas(text).unwrap();
        let rep = set.verify("X", crate::catalog::builtin()).unwrap();
        assert!(!rep.passed());
        let detail = rep.checks[0].detail.as_deref().unwrap();
        assert!(detail.contains("coefficient of e6"), "{detail}");
        assert!(!detail.contains("coefficient of e4"), "{detail}");
    }

    #[test]
    fn incomplete_family_is_reported() {
        let text = "[lemma X]\nalgebra = L4\nomega = w12*A12 + w14*A14\ncheck = closed\n";
        let rep = parse_lemmas(text)
            .unwrap()
            .verify("X", crate::catalog::builtin())
            .unwrap();
        assert!(rep.checks[0].detail.as_deref().unwrap().contains("dimension 2"));
    }

    #[test]
    fn malformed_data_is_rejected() {
        assert!(parse_lemmas("algebra = L4\n").is_err());
        assert!(parse_lemmas("[lemma X]\ncheck = closed\n").is_err());
    }
}
