//! Built-in catalog of nilpotent Lie algebras with their symplectic forms and
//! bi-Lagrangian witnesses, the Salamon-style token parser, and the
//! line-oriented catalog file format.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use num_traits::One;

use crate::error::{Error, ParseError, Result};
use crate::expr::parse_vector_list;
use crate::exterior::KForm;
use crate::kernel::{parse_rational, Rational};
use crate::lie::{LieAlgebra, Subspace, Vector};
use crate::symplectic::{is_symplectic, verify_bilagrangian, BiLagrangianStructure, SymplecticVerdict};

const BUILTIN: &str = include_str!("../data/catalog.txt");

/// Parses one 2-form token such as `13+42`, `14-25` or `-15+6*26+7*34`.
/// The digit pair `jk` stands for `α_j ∧ α_k`, so `42` is `−α₂₄`. Indices
/// must lie in `1..=n`.
pub fn parse_two_form(token: &str, n: usize) -> Result<KForm, ParseError> {
    let chars: Vec<char> = token.chars().collect();
    let mut form = KForm::zero(2);
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == chars.len() {
        return Err(ParseError::new(0, 0, "empty token"));
    }
    if chars[i] == '0' && chars[i + 1..].iter().all(|c| c.is_whitespace()) {
        return Ok(form);
    }
    let mut first = true;
    while i < chars.len() {
        let mut sign = Rational::one();
        match chars[i] {
            '+' => i += 1,
            '-' => {
                sign = -sign;
                i += 1;
            }
            _ if first => {}
            c => return Err(ParseError::new(0, i, format!("expected `+` or `-`, found `{c}`"))),
        }
        first = false;
        skip_ws(&mut i);
        // optional coefficient `p*` or `p/q*`
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
            i += 1;
        }
        let mut coeff = Rational::one();
        let mut digits_at = start;
        if i < chars.len() && chars[i] == '*' {
            let s: String = chars[start..i].iter().collect();
            coeff = parse_rational(&s)
                .ok_or_else(|| ParseError::new(0, start, format!("bad coefficient `{s}`")))?;
            i += 1;
            digits_at = i;
        } else {
            i = start;
        }
        let mut idx = Vec::new();
        while idx.len() < 2 {
            match chars.get(i) {
                Some(c) if c.is_ascii_digit() => {
                    let k = c.to_digit(10).expect("digit") as usize;
                    if k == 0 || k > n {
                        return Err(ParseError::new(
                            0,
                            i,
                            format!("index {k} out of range 1..={n}"),
                        ));
                    }
                    idx.push(k - 1);
                    i += 1;
                }
                Some(c) => {
                    return Err(ParseError::new(0, i, format!("expected a digit, found `{c}`")))
                }
                None => return Err(ParseError::new(0, i, "expected an index pair")),
            }
        }
        if idx[0] == idx[1] {
            return Err(ParseError::new(
                0,
                digits_at,
                format!("repeated index {}", idx[0] + 1),
            ));
        }
        if chars.get(i).is_some_and(|c| c.is_ascii_digit()) {
            return Err(ParseError::new(0, i, "index pairs have exactly two digits"));
        }
        form.add_term(&idx, sign * coeff);
        skip_ws(&mut i);
    }
    Ok(form)
}

/// Parses a tuple of differentials, one token per dual basis covector, with
/// the dimension taken from the number of tokens. Errors carry the token
/// index and the column inside the token.
pub fn parse_salamon(tokens: &[&str]) -> Result<Vec<KForm>, ParseError> {
    let n = tokens.len();
    tokens
        .iter()
        .enumerate()
        .map(|(k, t)| {
            parse_two_form(t, n).map_err(|mut e| {
                e.item = k;
                e
            })
        })
        .collect()
}

/// Accepts `(0,0,12)` as well as `0,0,12`.
pub fn parse_salamon_tuple(s: &str) -> Result<Vec<KForm>, ParseError> {
    parse_salamon(&split_tuple(s))
}

fn split_tuple(s: &str) -> Vec<&str> {
    let s = s.trim();
    let s = s.strip_prefix('(').unwrap_or(s);
    let s = s.strip_suffix(')').unwrap_or(s);
    s.split(',').map(str::trim).collect()
}

/// Canonical token string of a tuple of differentials.
pub fn salamon_string(forms: &[KForm]) -> String {
    forms.iter().map(KForm::to_token).collect::<Vec<_>>().join(",")
}

/// `α_i ↦ sign_i · α_{perm(i)}`, written `2 1 4 -3 -5 -6` (one-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    negative: Vec<bool>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            negative: vec![false; n],
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut perm = Vec::new();
        let mut negative = Vec::new();
        for t in s.split_whitespace() {
            let (neg, digits) = match t.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, t),
            };
            let k: usize = digits.parse().ok()?;
            if k == 0 {
                return None;
            }
            perm.push(k - 1);
            negative.push(neg);
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        Some(Self { perm, negative })
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && !self.negative.iter().any(|&b| b)
    }

    fn sign(&self, i: usize) -> Rational {
        if self.negative[i] {
            -Rational::one()
        } else {
            Rational::one()
        }
    }

    /// Image of a form under the induced map on the exterior algebra.
    pub fn apply(&self, f: &KForm) -> KForm {
        let mut out = KForm::zero(f.degree());
        for (idx, c) in f.terms() {
            let mut s = c.clone();
            let image: Vec<usize> = idx
                .iter()
                .map(|&i| {
                    s *= self.sign(i);
                    self.perm[i]
                })
                .collect();
            out.add_term(&image, s);
        }
        out
    }

    /// Whether this map intertwines the differentials `source` (tuple basis)
    /// and `target`: `d_target(φ α_i) = φ(d_source α_i)`.
    pub fn intertwines(&self, source: &[KForm], target: &[KForm]) -> bool {
        source.len() == self.perm.len()
            && target.len() == self.perm.len()
            && (0..self.perm.len())
                .all(|i| target[self.perm[i]].scale(&self.sign(i)) == self.apply(&source[i]))
    }
}

impl std::fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .perm
            .iter()
            .zip(&self.negative)
            .map(|(p, &n)| format!("{}{}", if n { "-" } else { "" }, p + 1))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSource {
    BM,
    K,
}

impl FormSource {
    pub fn as_str(self) -> &'static str {
        match self {
            FormSource::BM => "BM",
            FormSource::K => "K",
        }
    }
}

/// Witness bases exactly as printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub f: Vec<Vector>,
    pub g: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    pub k_number: Option<u32>,
    pub extra_aliases: Vec<String>,
    pub dalpha_tokens: Vec<String>,
    pub salamon: Option<Vec<String>>,
    pub salamon_map: Option<SignedPermutation>,
    pub omega: Option<KForm>,
    pub source: Option<FormSource>,
    pub witness: Option<Witness>,
    pub expected_flat: Option<bool>,
    pub expected_betti: Option<(usize, usize)>,
    algebra: LieAlgebra,
}

impl CatalogEntry {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dalpha(&self) -> Vec<KForm> {
        let toks: Vec<&str> = self.dalpha_tokens.iter().map(String::as_str).collect();
        parse_salamon(&toks).expect("validated at load")
    }

    /// The Salamon tuple as printed, e.g. `(0,0,0,12,13+42,14+23)`.
    pub fn salamon_tuple(&self) -> Option<String> {
        self.salamon.as_ref().map(|t| format!("({})", t.join(",")))
    }

    /// Every name this entry answers to.
    pub fn aliases(&self) -> Vec<String> {
        let mut out = vec![self.name.clone()];
        out.extend(self.extra_aliases.iter().cloned());
        if let Some(k) = self.k_number {
            out.push(k.to_string());
        }
        if let Some(t) = self.salamon_tuple() {
            out.push(t);
        }
        out
    }

    pub fn witness_subspaces(&self) -> Option<(Subspace, Subspace)> {
        let w = self.witness.as_ref()?;
        Some((
            Subspace::span(self.dim, w.f.clone()).ok()?,
            Subspace::span(self.dim, w.g.clone()).ok()?,
        ))
    }

    /// The verified structure built on the printed witness bases.
    pub fn structure(&self) -> Option<Result<BiLagrangianStructure>> {
        let w = self.witness.as_ref()?;
        let omega = self.omega.as_ref()?;
        Some(BiLagrangianStructure::new(
            &self.algebra,
            omega,
            w.f.clone(),
            w.g.clone(),
        ))
    }

    /// Self-validation problems; empty when the entry is sound.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let g = &self.algebra;
        let jac = g.check_jacobi();
        if !jac.passed() {
            issues.push("Jacobi identity fails".to_string());
        }
        if !g.is_nilpotent() {
            issues.push("algebra is not nilpotent".to_string());
        }
        if let (Some(tuple), Some(map)) = (&self.salamon, &self.salamon_map) {
            let toks: Vec<&str> = tuple.iter().map(String::as_str).collect();
            match parse_salamon(&toks) {
                Ok(src) if map.intertwines(&src, &self.dalpha()) => {}
                Ok(_) => issues.push(format!("salamon tuple does not match under map {map}")),
                Err(e) => issues.push(format!("salamon tuple: {e}")),
            }
        }
        if let Some(w) = &self.omega {
            match is_symplectic(g, w) {
                Ok(SymplecticVerdict::Yes) => {}
                Ok(v) => issues.push(format!("omega {}: {v:?}", w.to_token())),
                Err(e) => issues.push(e.to_string()),
            }
        }
        if let (Some(w), Some(omega)) = (&self.witness, &self.omega) {
            match (
                Subspace::span(self.dim, w.f.clone()),
                Subspace::span(self.dim, w.g.clone()),
            ) {
                (Ok(f), Ok(gs)) => {
                    let r = verify_bilagrangian(g, omega, &f, &gs);
                    if !r.passed() {
                        issues.push(format!("witness fails: {}", r.failures().join(", ")));
                    }
                }
                _ => issues.push("witness has wrong dimension".to_string()),
            }
        }
        issues
    }
}

/// Loaded catalog. Entries failing self-validation are kept out of
/// `entries` and listed in `flagged` with their problems.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
    flagged: Vec<(String, Vec<String>)>,
}

pub enum CatalogSource<'a> {
    Builtin,
    Path(&'a Path),
}

pub fn load_catalog(source: CatalogSource<'_>) -> Result<Catalog> {
    match source {
        CatalogSource::Builtin => parse_catalog(BUILTIN),
        CatalogSource::Path(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            parse_catalog(&text)
        }
    }
}

/// The built-in catalog, parsed once.
pub fn builtin() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| parse_catalog(BUILTIN).expect("builtin catalog parses"))
}

/// Looks up an entry of the built-in catalog.
pub fn entry(name: &str) -> Result<&'static CatalogEntry> {
    builtin().entry(name)
}

/// Spelling-insensitive key: `L_{6,17}^+`, `L6,17+` and `l6,17+` agree, as
/// do `⊕` and `+`.
pub fn normalize_name(name: &str) -> String {
    name.replace('⊕', "+")
        .replace("\\oplus", "+")
        .chars()
        .filter(|c| !c.is_whitespace() && !"_{}^$".contains(*c))
        .flat_map(char::to_lowercase)
        .collect()
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn flagged(&self) -> &[(String, Vec<String>)] {
        &self.flagged
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry> {
        let key = normalize_name(name);
        if let Some(e) = self
            .entries
            .iter()
            .find(|e| e.aliases().iter().any(|a| normalize_name(a) == key))
        {
            return Ok(e);
        }
        let suggestion = self
            .entries
            .iter()
            .flat_map(|e| e.aliases().into_iter().take(1))
            .map(|a| (strsim::levenshtein(&normalize_name(&a), &key), a))
            .min_by_key(|(d, _)| *d)
            .filter(|(d, _)| *d <= 3)
            .map(|(_, a)| a);
        Err(Error::UnknownEntry {
            name: name.to_string(),
            suggestion,
        })
    }

    /// Serializes to the catalog file format; parsing the result gives back
    /// the same entries.
    pub fn to_text(&self) -> String {
        let mut s = String::from("version = 1\n");
        for e in &self.entries {
            s.push('\n');
            s.push_str(&entry_text(e));
        }
        s
    }
}

fn vector_token(v: &Vector) -> String {
    v.to_string().replace(' ', "")
}

fn vector_list(vs: &[Vector]) -> String {
    vs.iter().map(vector_token).collect::<Vec<_>>().join(", ")
}

fn entry_text(e: &CatalogEntry) -> String {
    let mut s = String::from("[entry]\n");
    let mut field = |k: &str, v: &str| {
        let _ = writeln!(s, "{k} = {v}");
    };
    field("name", &e.name);
    if !e.extra_aliases.is_empty() {
        field("aliases", &e.extra_aliases.join("; "));
    }
    field("dim", &e.dim.to_string());
    if let Some(k) = e.k_number {
        field("k", &k.to_string());
    }
    if let Some(t) = &e.salamon {
        field("salamon", &t.join(","));
    }
    if let Some(m) = &e.salamon_map {
        field("salamonMap", &m.to_string());
    }
    field("dalpha", &e.dalpha_tokens.join(","));
    if let Some(w) = &e.omega {
        field("omega", &w.to_token());
    }
    if let Some(src) = e.source {
        field("source", src.as_str());
    }
    if let Some(w) = &e.witness {
        field("foliationF", &vector_list(&w.f));
        field("foliationG", &vector_list(&w.g));
    }
    if let Some(f) = e.expected_flat {
        field("flat", if f { "true" } else { "false" });
    }
    if let Some((b1, b2)) = e.expected_betti {
        field("betti", &format!("{b1} {b2}"));
    }
    s
}

/// Parses the catalog file format: `key = value` lines grouped into
/// `[entry]` blocks, `#` comments. Schema violations abort with the line
/// number; entries that parse but fail self-validation are flagged.
pub fn parse_catalog(text: &str) -> Result<Catalog> {
    let mut blocks: Vec<(usize, Vec<(usize, String, String)>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[entry]" {
            blocks.push((ln, Vec::new()));
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Catalog(format!("line {ln}: expected `key = value`")))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        match blocks.last_mut() {
            Some((_, fields)) => fields.push((ln, k, v)),
            None if k == "version" => {
                if v != "1" {
                    return Err(Error::Catalog(format!("line {ln}: unsupported version {v}")));
                }
            }
            None => return Err(Error::Catalog(format!("line {ln}: field outside an entry"))),
        }
    }
    let mut cat = Catalog::default();
    for (ln, fields) in blocks {
        let e = parse_entry(ln, &fields)?;
        if cat.entries.iter().any(|x| x.name == e.name) {
            return Err(Error::Catalog(format!("line {ln}: duplicate name {}", e.name)));
        }
        let issues = e.validate();
        if issues.is_empty() {
            cat.entries.push(e);
        } else {
            cat.flagged.push((e.name.clone(), issues));
        }
    }
    Ok(cat)
}

fn parse_entry(start: usize, fields: &[(usize, String, String)]) -> Result<CatalogEntry> {
    let get = |key: &str| fields.iter().find(|(_, k, _)| k == key);
    let bad = |ln: usize, msg: String| Error::Catalog(format!("line {ln}: {msg}"));
    for (ln, k, _) in fields {
        const KNOWN: [&str; 13] = [
            "name", "aliases", "dim", "k", "salamon", "salamonMap", "dalpha", "omega", "source",
            "foliationF", "foliationG", "flat", "betti",
        ];
        if !KNOWN.contains(&k.as_str()) {
            return Err(bad(*ln, format!("unknown field `{k}`")));
        }
    }
    let name = get("name")
        .map(|(_, _, v)| v.clone())
        .ok_or_else(|| bad(start, "entry without name".into()))?;
    let (dim_ln, _, dim_s) = get("dim").ok_or_else(|| bad(start, format!("{name}: missing dim")))?;
    let dim: usize = dim_s
        .parse()
        .map_err(|_| bad(*dim_ln, format!("bad dim `{dim_s}`")))?;
    let (d_ln, _, d_s) = get("dalpha").ok_or_else(|| bad(start, format!("{name}: missing dalpha")))?;
    let dalpha_tokens: Vec<String> = split_tuple(d_s).iter().map(|s| s.to_string()).collect();
    if dalpha_tokens.len() != dim {
        return Err(bad(
            *d_ln,
            format!("{name}: dalpha has {} tokens, dim is {dim}", dalpha_tokens.len()),
        ));
    }
    let toks: Vec<&str> = dalpha_tokens.iter().map(String::as_str).collect();
    let dalpha = parse_salamon(&toks).map_err(|e| bad(*d_ln, format!("{name}: dalpha {e}")))?;
    let algebra = LieAlgebra::from_differentials(name.clone(), &dalpha)?;

    let extra_aliases = get("aliases")
        .map(|(_, _, v)| v.split(';').map(|s| s.trim().to_string()).collect())
        .unwrap_or_default();
    let k_number = match get("k") {
        Some((ln, _, v)) => Some(v.parse().map_err(|_| bad(*ln, format!("bad k `{v}`")))?),
        None => None,
    };
    let salamon = match get("salamon") {
        Some((ln, _, v)) => {
            let t: Vec<String> = split_tuple(v).iter().map(|s| s.to_string()).collect();
            if t.len() != dim {
                return Err(bad(*ln, format!("{name}: salamon has wrong length")));
            }
            let toks: Vec<&str> = t.iter().map(String::as_str).collect();
            parse_salamon(&toks).map_err(|e| bad(*ln, format!("{name}: salamon {e}")))?;
            Some(t)
        }
        None => None,
    };
    let salamon_map = match get("salamonMap") {
        Some((ln, _, v)) => {
            let m = SignedPermutation::parse(v)
                .filter(|m| m.perm.len() == dim)
                .ok_or_else(|| bad(*ln, format!("{name}: bad salamonMap `{v}`")))?;
            Some(m)
        }
        None => salamon.as_ref().map(|_| SignedPermutation::identity(dim)),
    };
    let omega = match get("omega") {
        Some((ln, _, v)) => {
            Some(parse_two_form(v, dim).map_err(|e| bad(*ln, format!("{name}: omega {e}")))?)
        }
        None => None,
    };
    let source = match get("source") {
        Some((_, _, v)) if v == "BM" => Some(FormSource::BM),
        Some((_, _, v)) if v == "K" => Some(FormSource::K),
        Some((ln, _, v)) => return Err(bad(*ln, format!("{name}: unknown source `{v}`"))),
        None => None,
    };
    let witness = match (get("foliationF"), get("foliationG")) {
        (Some((lf, _, f)), Some((lg, _, g))) => {
            let f = parse_vector_list(f, dim).map_err(|e| bad(*lf, format!("{name}: {e}")))?;
            let g = parse_vector_list(g, dim).map_err(|e| bad(*lg, format!("{name}: {e}")))?;
            Some(Witness { f, g })
        }
        (None, None) => None,
        _ => return Err(bad(start, format!("{name}: foliationF and foliationG go together"))),
    };
    let expected_flat = match get("flat") {
        Some((_, _, v)) if v == "true" => Some(true),
        Some((_, _, v)) if v == "false" => Some(false),
        Some((ln, _, v)) => return Err(bad(*ln, format!("{name}: bad flat `{v}`"))),
        None => None,
    };
    let expected_betti = match get("betti") {
        Some((ln, _, v)) => {
            let nums: Vec<usize> = v.split_whitespace().filter_map(|t| t.parse().ok()).collect();
            match nums.as_slice() {
                [b1, b2] => Some((*b1, *b2)),
                _ => return Err(bad(*ln, format!("{name}: bad betti `{v}`"))),
            }
        }
        None => None,
    };
    Ok(CatalogEntry {
        name,
        dim,
        k_number,
        extra_aliases,
        dalpha_tokens,
        salamon,
        salamon_map,
        omega,
        source,
        witness,
        expected_flat,
        expected_betti,
        algebra,
    })
}
