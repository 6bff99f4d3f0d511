//! One line per acceptance criterion. Runs without the libtest harness so the
//! ten lines always print; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kunneth::catalog::{builtin, Catalog};
use kunneth::connection::{canonical_connection, curvature, curvature_identities, is_parallel, is_torsion_free, levi_civita, ricci, ConnectionTable};
use kunneth::exterior::{betti_numbers, d1_matrix, d2_matrix};
use kunneth::golden::{builtin_golden, compare_golden};
use kunneth::kernel::ratio;
use kunneth::lemmas::builtin_lemmas;
use kunneth::lie::JacobiReport;
use kunneth::search::{search_bilagrangian, SearchConfig, SearchStatus, Strategy};
use kunneth::symplectic::{para_kaehler, verify_bilagrangian, BiLagrangianStructure};
use kunneth::{LieAlgebra, Matrix, Rational, Vector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const TABLE2: [(&str, usize, usize); 26] = [
    ("A6", 6, 15),
    ("L3+A3", 5, 11),
    ("L5,2+A1", 4, 9),
    ("L3+L3", 4, 8),
    ("L6,1", 4, 8),
    ("L6,2", 4, 8),
    ("L4+A2", 4, 7),
    ("L5,3+A1", 4, 7),
    ("L6,4", 3, 8),
    ("L6,5", 3, 6),
    ("L6,6", 3, 6),
    ("L6,9", 3, 6),
    ("L6,10", 3, 5),
    ("L6,11", 3, 5),
    ("L6,12", 3, 5),
    ("L5,4+A1", 3, 5),
    ("L6,13", 3, 5),
    ("L5,6+A1", 3, 5),
    ("L6,14", 3, 5),
    ("L6,15", 3, 4),
    ("L6,16", 2, 4),
    ("L6,17+", 2, 4),
    ("L6,17-", 2, 4),
    ("L6,18", 2, 3),
    ("L6,19", 2, 3),
    ("L6,21", 2, 3),
];

const FLAT: [&str; 8] = ["A6", "L3+A3", "L5,2+A1", "L6,1", "L5,3+A1", "L6,4", "L6,5", "L6,9"];
const NON_FLAT: [&str; 8] = ["L3+L3", "L6,2", "L6,6", "L6,10", "L6,11", "L6,12", "L5,4+A1", "L6,16"];
const SMALL: [&str; 3] = ["A2", "A4", "L3+A1"];
const NO_WITNESS: [&str; 11] = [
    "L4", "L4+A2", "L6,13", "L5,6+A1", "L6,14", "L6,15", "L6,17+", "L6,17-", "L6,18", "L6,19", "L6,21",
];

fn structure(cat: &Catalog, name: &str) -> Result<BiLagrangianStructure, String> {
    let e = cat.entry(name).map_err(|e| e.to_string())?;
    match e.structure() {
        Some(Ok(b)) => Ok(b),
        Some(Err(err)) => Err(format!("{name}: {err}")),
        None => Err(format!("{name}: no witness")),
    }
}

fn witnessed() -> impl Iterator<Item = &'static str> {
    FLAT.into_iter().chain(NON_FLAT).chain(SMALL)
}

fn all_witnesses(cat: &Catalog) -> Result<Vec<(&'static str, BiLagrangianStructure)>, String> {
    witnessed().map(|n| structure(cat, n).map(|b| (n, b))).collect()
}

fn witnesses(cat: &Catalog) -> Outcome {
    let start = Instant::now();
    let mut counts = [0usize; 7];
    for e in cat.entries() {
        let (Some(w), Some((f, g))) = (e.omega.as_ref(), e.witness_subspaces()) else {
            continue;
        };
        let rep = verify_bilagrangian(e.algebra(), w, &f, &g);
        if !rep.passed() {
            return Err(format!("{}: {}", e.name, rep.failures().join(", ")));
        }
        counts[e.dim.min(6)] += 1;
    }
    let elapsed = start.elapsed();
    if (counts[6], counts[4], counts[2]) != (16, 2, 1) {
        return Err(format!("counts {} + {} + {}", counts[6], counts[4], counts[2]));
    }
    for n in witnessed() {
        structure(cat, n)?;
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("16 + 2 + 1 witnesses verified in {} ms", elapsed.as_millis()))
}

fn betti(cat: &Catalog) -> Outcome {
    for (name, b1, b2) in TABLE2 {
        let e = cat.entry(name).map_err(|e| e.to_string())?;
        let got = betti_numbers(e.algebra());
        if got != (b1, b2) {
            return Err(format!("{name}: computed {got:?}, table ({b1}, {b2})"));
        }
    }
    Ok("26 algebras".into())
}

fn golden(cat: &Catalog) -> Outcome {
    let blocks = builtin_golden().map_err(|e| e.to_string())?;
    let mut values = 0;
    for block in &blocks {
        let b = structure(cat, &block.name)?;
        let rep = compare_golden(block, &b);
        if !rep.passed() {
            let all: Vec<_> = rep.mismatches.iter().chain(&rep.unlisted_nonzero).cloned().collect();
            return Err(format!("{}: {}", block.name, all.join("; ")));
        }
        values += rep.nabla_checked + rep.curvature_checked;
    }
    if blocks.len() != 19 {
        return Err(format!("{} blocks", blocks.len()));
    }
    Ok(format!("19 blocks, {values} values"))
}

/// `R(x, y)z = ∇_x ∇_y z − ∇_y ∇_x z − ∇_[x,y] z`, straight from the table.
fn r_direct(g: &LieAlgebra, c: &ConnectionTable, x: &Vector, y: &Vector, z: &Vector) -> Vector {
    let a = c.nabla(x, &c.nabla(y, z));
    let b = c.nabla(y, &c.nabla(x, z));
    let xy = g.bracket(x, y).unwrap();
    let d = c.nabla(&xy, z);
    let mut out = a;
    out.add_scaled(&Rational::from_integer((-1).into()), &b);
    out.add_scaled(&Rational::from_integer((-1).into()), &d);
    out
}

fn flatness(cat: &Catalog) -> Outcome {
    for (name, flat) in FLAT.iter().map(|n| (n, true)).chain(NON_FLAT.iter().map(|n| (n, false))) {
        let b = structure(cat, name)?;
        let r = curvature(b.algebra(), &canonical_connection(&b));
        if r.is_zero() != flat {
            return Err(format!("{name}: flat = {}", r.is_zero()));
        }
    }
    for name in SMALL {
        let b = structure(cat, name)?;
        if !curvature(b.algebra(), &canonical_connection(&b)).is_zero() {
            return Err(format!("{name}: not flat"));
        }
    }
    let b = structure(cat, "L6,12")?;
    let c = canonical_connection(&b);
    let g = b.algebra();
    let e2 = Vector::from_i64(&[0, 1, 0, 0, 0, 0]);
    let u = Vector::from_i64(&[-2, 1, 0, 0, 0, 0]);
    let first = r_direct(g, &c, &u, &e2, &e2);
    let want = Vector::from_i64(&[0, 0, 0, 0, 1, 0]).scale(&ratio(208, 7));
    if first != want {
        return Err(format!("L6,12: R(e2-2e1, e2)e2 = {first}"));
    }
    let second = r_direct(g, &c, &e2, &u, &u);
    let want = Vector::from_i64(&[0, 0, 0, 0, -3, 1]).scale(&ratio(-208, 21));
    if second != want {
        return Err(format!("L6,12: R(e2, e2-2e1)(e2-2e1) = {second}"));
    }
    Ok("8 flat, 8 non-flat, small cases flat, L6,12 components match".into())
}

fn ricci_flat(cat: &Catalog) -> Outcome {
    for (name, b) in all_witnesses(cat)? {
        let r = curvature(b.algebra(), &canonical_connection(&b));
        // Trace of y -> R(y, b_i) b_j, contracted directly.
        let n = r.dim();
        for i in 0..n {
            for j in 0..n {
                let mut t = Rational::zero();
                for k in 0..n {
                    t += r.component(k, k, i, j);
                }
                if !t.is_zero() {
                    return Err(format!("{name}: Ric({i}, {j}) = {t}"));
                }
            }
        }
        if !ricci(&r).is_zero() {
            return Err(format!("{name}: library Ricci nonzero"));
        }
    }
    Ok("19 witnesses Ricci-flat".into())
}

fn axioms(cat: &Catalog) -> Outcome {
    for (name, b) in all_witnesses(cat)? {
        let g = b.algebra();
        let c = canonical_connection(&b);
        let m = b.half_dim();
        let pk = para_kaehler(&b);
        // I = P_F - P_G squares to the identity and g = IᵀΩ is symmetric.
        let n = g.dim();
        if pk.i_operator.mul(&pk.i_operator).unwrap() != Matrix::identity(n) {
            return Err(format!("{name}: I^2 != 1"));
        }
        if !pk.metric.is_symmetric() {
            return Err(format!("{name}: metric not symmetric"));
        }
        let sig = pk.signature();
        let lc = levi_civita(g, &pk.metric).map_err(|e| format!("{name}: {e}"))?;
        let checks = [
            ("torsion", is_torsion_free(g, &c)),
            ("parallel", is_parallel(b.omega(), &c)),
            ("F", c.preserves(b.f())),
            ("G", c.preserves(b.g())),
            ("Levi-Civita", lc.same_as(&c)),
            ("signature", (sig.positives, sig.negatives, sig.zeros) == (m, m, 0)),
        ];
        if let Some((what, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(format!("{name}: {what}"));
        }
    }
    Ok("19 witnesses: torsion-free, parallel, leaves preserved, Levi-Civita, signature (m, m)".into())
}

fn identities(cat: &Catalog) -> Outcome {
    for (name, b) in all_witnesses(cat)? {
        let g = b.algebra();
        let c = canonical_connection(&b);
        let r = curvature(g, &c);
        let ids = curvature_identities(&r, b.half_dim());
        if !ids.passed() {
            return Err(format!("{name}: {ids:?}"));
        }
        // Independent first Bianchi check on the ambient basis.
        let n = g.dim();
        let e = |i| Vector::basis(n, i);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut s = r_direct(g, &c, &e(i), &e(j), &e(k));
                    let one = Rational::from_integer(1.into());
                    s.add_scaled(&one, &r_direct(g, &c, &e(j), &e(k), &e(i)));
                    s.add_scaled(&one, &r_direct(g, &c, &e(k), &e(i), &e(j)));
                    if !s.is_zero() {
                        return Err(format!("{name}: Bianchi fails at ({i}, {j}, {k})"));
                    }
                }
            }
        }
    }
    Ok("Bianchi, leafwise flatness, leaf symmetry on 19 witnesses".into())
}

fn lemmas(cat: &Catalog) -> Outcome {
    let set = builtin_lemmas();
    let mut checks = 0;
    for id in set.ids() {
        let rep = set.verify(id, cat).map_err(|e| e.to_string())?;
        if let Some(c) = rep.checks.iter().find(|c| !c.passed) {
            return Err(format!("{id}: {} ({})", c.statement, c.detail.clone().unwrap_or_default()));
        }
        checks += rep.checks.len();
    }
    let required = [
        ("L4A2_closed", "pfaffian ~ w16*w25*w34"),
        ("L6_17m_closed", "pfaffian ~ (w16^2 + w26^2)*w15 - w16*w26*(w25 + w14)"),
    ];
    for (id, stmt) in required {
        let l = set.get(id).map_err(|e| e.to_string())?;
        if !l.checks.iter().any(|c| c.replace(' ', "") == stmt.replace(' ', "")) {
            return Err(format!("{id}: missing `{stmt}`"));
        }
    }
    for l in set.lemmas().iter().filter(|l| l.id.ends_with("_closed")) {
        if !l.checks.iter().any(|c| c.replace(' ', "") == "pfaffian^2==det") {
            return Err(format!("{}: no Pf^2 = det check", l.id));
        }
    }
    Ok(format!("{} identities, {checks} checks", set.ids().count()))
}

fn search(cat: &Catalog) -> Outcome {
    let cfg = |height| SearchConfig {
        seed: 0,
        budget: 10_000_000,
        height,
        strategy: Strategy::EchelonGrid,
    };
    for name in FLAT.iter().chain(&NON_FLAT) {
        let e = cat.entry(name).map_err(|e| e.to_string())?;
        let out = search_bilagrangian(e.algebra(), e.omega.as_ref().unwrap(), &cfg(2)).map_err(|e| e.to_string())?;
        let Some(s) = out.found else {
            return Err(format!("{name}: {:?}", out.status));
        };
        if !verify_bilagrangian(e.algebra(), s.omega().form(), s.f(), s.g()).passed() {
            return Err(format!("{name}: returned pair does not verify"));
        }
    }
    for name in NO_WITNESS {
        let e = cat.entry(name).map_err(|e| e.to_string())?;
        let out = search_bilagrangian(e.algebra(), e.omega.as_ref().unwrap(), &cfg(1)).map_err(|e| e.to_string())?;
        if out.found.is_some() || out.status != (SearchStatus::GridExhausted { height: 1 }) {
            return Err(format!("{name}: {:?}", out.status));
        }
    }
    Ok("16 found at height 2, 11 grids exhausted at height 1".into())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows * cols).map(|_| random_rational(rng)).collect();
    Matrix::new(rows, cols, entries).unwrap()
}

fn properties(cat: &Catalog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let six: Vec<_> = cat.entries().iter().filter(|e| e.dim == 6).collect();
    let mut violations = 0;
    for t in 0..100 {
        let e = six[rng.gen_range(0..six.len())];
        let mut g = e.algebra().clone();
        let i = rng.gen_range(0..5);
        let j = rng.gen_range(i + 1..6);
        let mut v = g.bracket_basis(i, j).clone().into_coords();
        let k = rng.gen_range(0..6);
        v[k] += random_rational(&mut rng);
        g.set_bracket(i, j, Vector::new(v));
        let jacobi = matches!(g.check_jacobi(), JacobiReport::Pass);
        let dd = d2_matrix(&g).mul(&d1_matrix(&g)).unwrap().is_zero();
        if jacobi != dd {
            return Err(format!("perturbation {t} of {}: Jacobi {jacobi}, d^2 = 0 {dd}", e.name));
        }
        violations += usize::from(!jacobi);
    }
    for (name, _, b2) in TABLE2 {
        let g = cat.entry(name).map_err(|e| e.to_string())?.algebra();
        let n = g.dim();
        let basis: Vec<Vector> = (0..n).map(|i| Vector::basis(n, i)).collect();
        let b1 = n - g.bracket_span(&basis, &basis).dim();
        let kernel = d2_matrix(g).nullspace().len();
        if kernel != b2 + (n - b1) {
            return Err(format!("{name}: dim ker d2 = {kernel}, expected {}", b2 + n - b1));
        }
    }
    for _ in 0..50 {
        let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
        let a = random_matrix(&mut rng, r, c);
        let once = a.rref();
        if once.matrix.rref().matrix != once.matrix {
            return Err("rref is not idempotent".into());
        }
        let n = rng.gen_range(1..6);
        let h = random_matrix(&mut rng, n, n);
        let s = h.add(&h.transpose()).unwrap();
        let p = random_matrix(&mut rng, n, n);
        if p.determinant().unwrap().is_zero() {
            continue;
        }
        let congruent = p.transpose().mul(&s).unwrap().mul(&p).unwrap();
        if s.symmetric_signature().unwrap() != congruent.symmetric_signature().unwrap() {
            return Err("signature changed under congruence".into());
        }
    }
    Ok(format!("100 perturbations ({violations} break Jacobi), 26 kernel dimensions, 50 random matrices"))
}

fn main() -> ExitCode {
    let cat = builtin();
    let criteria: [(&str, fn(&Catalog) -> Outcome); 10] = [
        ("witnesses", witnesses),
        ("betti numbers", betti),
        ("connection reference values", golden),
        ("flat and non-flat curvature", flatness),
        ("Ricci-flat", ricci_flat),
        ("connection axioms and signature", axioms),
        ("curvature identities", identities),
        ("lemma identities", lemmas),
        ("witness search", search),
        ("properties", properties),
    ];
    let mut ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run(cat) {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                ok = false;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
