//! End-to-end reproduction of the catalog tables: witnesses, Betti numbers,
//! connection and curvature data, and the lemma identities.

use crate::catalog::{Catalog, CatalogEntry};
use crate::connection::{
    canonical_connection, curvature, curvature_identities, is_parallel, is_torsion_free, levi_civita, ricci,
    Curvature,
};
use crate::exterior::betti_numbers;
use crate::golden::{builtin_golden, compare_golden};
use crate::lemmas::builtin_lemmas;
use crate::report::{Report, Section, Verdict};
use crate::symplectic::{para_kaehler, verify_bilagrangian, BiLagrangianStructure};

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn flat_label(b: bool) -> String {
    if b { "R = 0" } else { "R ≠ 0" }.to_string()
}

/// Witness entries with their structures, in catalog order.
fn witnesses(cat: &Catalog) -> Vec<(&CatalogEntry, Option<BiLagrangianStructure>)> {
    cat.entries()
        .iter()
        .filter_map(|e| e.structure().map(|s| (e, s.ok())))
        .collect()
}

pub fn witness_section(cat: &Catalog) -> Section {
    let mut s = Section::new(
        "Bi-Lagrangian witnesses",
        "Algebra",
        &["omega", "F", "G", "verified"],
    );
    for e in cat.entries() {
        let (Some(w), Some((f, g))) = (e.omega.as_ref(), e.witness_subspaces()) else {
            continue;
        };
        let wit = e.witness.as_ref().expect("witness present");
        let rep = verify_bilagrangian(e.algebra(), w, &f, &g);
        let ok = rep.passed();
        if !ok {
            s.fail(format!("{}: {}", e.name, rep.failures().join(", ")));
        }
        let list = |vs: &[crate::lie::Vector]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
        s.row(
            e.name.clone(),
            vec![w.to_token(), list(&wit.f), list(&wit.g), yes_no(ok)],
        );
    }
    s.checked()
}

pub fn betti_section<'a>(entries: impl IntoIterator<Item = &'a CatalogEntry>) -> Section {
    let mut s = Section::new("Betti numbers", "Algebra", &["k", "b1", "b2", "expected"]);
    for e in entries {
        let (b1, b2) = betti_numbers(e.algebra());
        let expected = match e.expected_betti {
            Some((x, y)) => {
                if (x, y) != (b1, b2) {
                    s.fail(format!("{}: computed ({b1}, {b2}), expected ({x}, {y})", e.name));
                }
                format!("{x} {y}")
            }
            None => "-".into(),
        };
        let k = e.k_number.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
        s.row(e.name.clone(), vec![k, b1.to_string(), b2.to_string(), expected]);
    }
    s.checked()
}

pub fn golden_section(cat: &Catalog) -> Section {
    let mut s = Section::new(
        "Connection reference values",
        "Algebra",
        &["nabla checked", "R checked", "mismatches", "unlisted nonzero"],
    );
    let blocks = match builtin_golden() {
        Ok(b) => b,
        Err(e) => {
            s.fail(e.to_string());
            return s;
        }
    };
    for block in blocks {
        let Some(Ok(b)) = cat.entry(&block.name).ok().and_then(|e| e.structure()) else {
            s.fail(format!("{}: no witness in catalog", block.name));
            continue;
        };
        let rep = compare_golden(&block, &b);
        for m in rep.mismatches.iter().chain(&rep.unlisted_nonzero) {
            s.fail(format!("{}: {m}", block.name));
        }
        s.row(
            block.name.clone(),
            vec![
                rep.nabla_checked.to_string(),
                rep.curvature_checked.to_string(),
                rep.mismatches.len().to_string(),
                rep.unlisted_nonzero.len().to_string(),
            ],
        );
    }
    s.checked()
}

struct Computed {
    r: Curvature,
    ricci_zero: bool,
}

fn computed(b: &BiLagrangianStructure) -> Computed {
    let c = canonical_connection(b);
    let r = curvature(b.algebra(), &c);
    let ricci_zero = ricci(&r).is_zero();
    Computed { r, ricci_zero }
}

/// One row per witness: computed flatness against the catalog value.
pub fn curvature_section(cat: &Catalog) -> Section {
    let mut s = Section::new("Curvature", "Algebra", &["curvature", "expected", "Ricci"]);
    for (e, b) in witnesses(cat) {
        let Some(b) = b else {
            s.fail(format!("{}: witness does not verify", e.name));
            continue;
        };
        let c = computed(&b);
        let flat = c.r.is_zero();
        if let Some(x) = e.expected_flat {
            if x != flat {
                s.fail(format!("{}: computed {}, expected {}", e.name, flat_label(flat), flat_label(x)));
            }
        }
        if !c.ricci_zero {
            s.fail(format!("{}: Ricci tensor is nonzero", e.name));
        }
        s.row(
            e.name.clone(),
            vec![
                flat_label(flat),
                e.expected_flat.map(flat_label).unwrap_or_else(|| "-".into()),
                if c.ricci_zero { "0" } else { "≠ 0" }.into(),
            ],
        );
    }
    s.checked()
}

pub fn axioms_section(cat: &Catalog) -> Section {
    let mut s = Section::new(
        "Connection axioms",
        "Algebra",
        &[
            "torsion-free",
            "parallel omega",
            "preserves F",
            "preserves G",
            "Levi-Civita",
            "signature",
            "Bianchi",
            "leafwise flat",
            "leaf symmetry",
        ],
    );
    for (e, b) in witnesses(cat) {
        let Some(b) = b else {
            s.fail(format!("{}: witness does not verify", e.name));
            continue;
        };
        let g = b.algebra();
        let c = canonical_connection(&b);
        let pk = para_kaehler(&b);
        let sig = pk.signature();
        let m = b.half_dim();
        let lc = levi_civita(g, &pk.metric).map(|lc| lc.same_as(&c)).unwrap_or(false);
        let ids = curvature_identities(&curvature(g, &c), m);
        let checks = [
            is_torsion_free(g, &c),
            is_parallel(b.omega(), &c),
            c.preserves(b.f()),
            c.preserves(b.g()),
            lc,
            sig.positives == m && sig.negatives == m && sig.zeros == 0,
            ids.bianchi,
            ids.leafwise_flat,
            ids.leaf_symmetric,
        ];
        for (ok, name) in checks.iter().zip(&s.columns.clone()) {
            if !ok {
                s.fail(format!("{}: {name}", e.name));
            }
        }
        let mut values: Vec<String> = checks.iter().map(|&b| yes_no(b)).collect();
        values[5] = format!("({}, {})", sig.positives, sig.negatives);
        s.row(e.name.clone(), values);
    }
    s.checked()
}

pub fn lemma_section(cat: &Catalog, only: Option<&str>) -> crate::Result<Section> {
    let mut s = Section::new("Lemma identities", "Identity", &["algebra", "checks", "passed"]);
    let set = builtin_lemmas();
    let ids: Vec<&str> = match only {
        Some(id) => vec![set.get(id)?.id.as_str()],
        None => set.ids().collect(),
    };
    for id in ids {
        let rep = set.verify(id, cat)?;
        let passed = rep.checks.iter().filter(|c| c.passed).count();
        for c in rep.checks.iter().filter(|c| !c.passed) {
            s.fail(format!(
                "{id}: {} ({})",
                c.statement,
                c.detail.as_deref().unwrap_or("failed")
            ));
        }
        s.row(
            id,
            vec![rep.algebra.clone(), rep.checks.len().to_string(), passed.to_string()],
        );
    }
    Ok(s.checked())
}

pub fn catalog_section(cat: &Catalog) -> Section {
    let mut s = Section::new("Catalog validation", "Entry", &["problems"]);
    for (name, problems) in cat.flagged() {
        s.fail(format!("{name}: {}", problems.join("; ")));
        s.row(name.clone(), vec![problems.join("; ")]);
    }
    s.checked()
}

/// Runs every table check against `cat`. The last section summarizes the
/// counts.
pub fn verify_tables(cat: &Catalog) -> Report {
    let mut report = Report::new();
    report.push(catalog_section(cat));
    let wit = witness_section(cat);
    let betti = betti_section(cat.entries().iter().filter(|e| e.dim == 6));
    let golden = golden_section(cat);
    let curv = curvature_section(cat);
    let axioms = axioms_section(cat);
    let lemmas = lemma_section(cat, None).unwrap_or_else(|e| {
        let mut s = Section::new("Lemma identities", "Identity", &[]);
        s.fail(e.to_string());
        s
    });

    let mut summary = Section::new("Summary", "Check", &["result", "verdict"]);
    let count = |s: &Section| format!("{}/{}", s.rows.len() - s.failures.len().min(s.rows.len()), s.rows.len());
    let mut flat_by_dim = [[0usize; 2]; 7];
    let mut ricci6 = [0usize; 2];
    for (e, b) in witnesses(cat) {
        if let Some(b) = b {
            let c = computed(&b);
            let d = e.dim.min(6);
            flat_by_dim[d][usize::from(!c.r.is_zero())] += 1;
            if e.dim == 6 {
                ricci6[0] += usize::from(c.ricci_zero);
                ricci6[1] += 1;
            }
        }
    }
    let lemma_checks: usize = lemmas.rows.iter().filter_map(|r| r.values.get(1)?.parse::<usize>().ok()).sum();
    let lines = [
        ("witnesses verified", count(&wit), wit.verdict),
        ("Betti numbers", count(&betti), betti.verdict),
        ("connection reference values", count(&golden), golden.verdict),
        (
            "curvature",
            format!(
                "{} flat + {} non-flat + {} dim-4 flat + {} dim-2 flat",
                flat_by_dim[6][0], flat_by_dim[6][1], flat_by_dim[4][0], flat_by_dim[2][0]
            ),
            curv.verdict,
        ),
        ("Ricci-flat", format!("{}/{}", ricci6[0], ricci6[1]), curv.verdict),
        ("connection axioms", count(&axioms), axioms.verdict),
        (
            "lemma identities",
            format!(
                "{} identities, {lemma_checks} checks, {}",
                lemmas.rows.len(),
                if lemmas.verdict == Verdict::Pass { "all pass" } else { "failures" }
            ),
            lemmas.verdict,
        ),
    ];
    for (label, result, v) in lines {
        summary.row(label, vec![result, v.to_string()]);
        if v == Verdict::Fail {
            summary.fail(label);
        }
    }
    for s in [wit, betti, golden, curv, axioms, lemmas] {
        report.push(s);
    }
    report.push(summary.checked());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Format;

    #[test]
    fn builtin_tables_verify() {
        let cat = crate::catalog::builtin();
        let r = verify_tables(cat);
        assert!(r.passed(), "{:#?}", r.failures());
        let summary = r.sections.last().unwrap();
        let get = |k: &str| summary.rows.iter().find(|r| r.label == k).unwrap().values[0].clone();
        assert_eq!(get("witnesses verified"), "19/19");
        assert_eq!(get("Betti numbers"), "26/26");
        assert_eq!(get("curvature"), "8 flat + 8 non-flat + 2 dim-4 flat + 1 dim-2 flat");
        assert_eq!(get("Ricci-flat"), "16/16");
        assert_eq!(r.render(Format::Json), verify_tables(cat).render(Format::Json));
    }

    #[test]
    fn unknown_lemma_id() {
        let cat = crate::catalog::builtin();
        assert!(lemma_section(cat, Some("nope")).is_err());
        assert_eq!(lemma_section(cat, Some("L6_13_eq")).unwrap().rows.len(), 1);
    }
}
