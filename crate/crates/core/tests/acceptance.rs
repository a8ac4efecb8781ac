//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits 0 even when a criterion fails so that the workspace test run stays usable; set
//! `ACCEPTANCE_STRICT=1` to turn any failure into a nonzero exit.

use std::process::Command as Proc;
use std::time::{Duration, Instant};

use tambarize::adjunction::adjunction_suite;
use tambarize::axioms::{check_tambara_axioms, random_effective, random_virtual, TambaraReport};
use tambarize::crossed::cbr_comparison;
use tambarize::diagram::diagram_lemma_suite;
use tambarize::group::Group;
use tambarize::gset::GSet;
use tambarize::mackey::{
    apply_mutation, check_axioms, check_on_gsets, ell_functor, fixed_point_functor, random_mutation, trivial_functor,
    SemiMackey,
};
use tambarize::marks::{marks_of_ring_elt, TableOfMarks};
use tambarize::monoid::{parse_gmonoid, parse_monoid, Monoid};
use tambarize::random::{instance_rng, random_map};
use tambarize::strings::{elliott_iso, monoid_ring};
use tambarize::tambarize::{RingElt, TambaraError, Tambarization};
use tambarize::witt::witt_burnside;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

const SMALL_MONOIDS: [&str; 5] = ["cyclic:2", "cyclic:3", "nil", "bool", "trunc:3"];

fn group(spec: &str) -> Group {
    Group::build(&tambarize::group::GroupSpec::parse(spec).unwrap()).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

/// Coefficients of `x` in the basis whose mark rows are `rows` (lower triangular).
fn solve_marks(rows: &[Vec<i64>], x: &[i64]) -> Option<Vec<i64>> {
    let n = rows.len();
    let mut c = vec![0i64; n];
    for col in (0..n).rev() {
        let rest: i64 = (col + 1..n).map(|k| c[k] * rows[k][col]).sum();
        let num = x[col] - rest;
        if rows[col][col] == 0 || num % rows[col][col] != 0 {
            return None;
        }
        c[col] = num / rows[col][col];
    }
    Some(c)
}

fn c1_burnside_recovery() -> Outcome {
    let start = Instant::now();
    let expected = [("cyclic:2", 2), ("cyclic:3", 2), ("cyclic:4", 3), ("symmetric:3", 4), ("dihedral:4", 8)];
    let mut notes = Vec::new();
    let mut ok = true;
    for (spec, rank) in expected {
        let g = group(spec);
        let whole = g.lattice().whole();
        let t = Tambarization::new(trivial_functor(&g));
        let (classes, p) = t.presentation(whole);
        let base = GSet::coset(&g, whole);
        let tm = TableOfMarks::new(&g, whole);
        if p.rank() != rank || tm.reps.len() != rank {
            ok = false;
            notes.push(format!("{spec}: rank {} (expected {rank})", p.rank()));
            continue;
        }
        // marks of each basis class, from fixed-point counts of its realization
        let elts: Vec<RingElt> = classes.iter().map(|c| RingElt::from_terms(&base, [(*c, 1)])).collect();
        let mk: Vec<Vec<i64>> = elts.iter().map(|e| marks_of_ring_elt(&t, e).unwrap()).collect();
        // basis index i corresponds to marks-table row pos[i]
        let pos: Vec<usize> = classes
            .iter()
            .map(|c| tm.reps.iter().position(|&r| g.lattice().class_of(r) == g.lattice().class_of(c.sub)).unwrap())
            .collect();
        for (i, m) in mk.iter().enumerate() {
            if *m != tm.matrix[pos[i]] {
                ok = false;
                notes.push(format!("{spec}: marks of basis {i} differ from the table"));
            }
        }
        if !tm.is_injective() {
            ok = false;
            notes.push(format!("{spec}: table of marks is singular"));
        }
        for i in 0..rank {
            for j in 0..rank {
                let prod = t.ring_mul(&elts[i], &elts[j]).unwrap();
                let mp = marks_of_ring_elt(&t, &prod).unwrap();
                let pointwise: Vec<i64> = mk[i].iter().zip(&mk[j]).map(|(a, b)| a * b).collect();
                if mp != pointwise {
                    ok = false;
                    notes.push(format!("{spec}: marks not multiplicative at ({i}, {j})"));
                }
                // Burnside table from the marks oracle alone
                let oracle = solve_marks(&tm.matrix, &(0..rank).map(|k| tm.matrix[pos[i]][k] * tm.matrix[pos[j]][k]).collect::<Vec<_>>());
                let ours: Vec<i64> = (0..rank).map(|r| p.mul[i][j][pos.iter().position(|&q| q == r).unwrap()]).collect();
                if oracle.as_deref() != Some(&ours[..]) {
                    ok = false;
                    notes.push(format!("{spec}: structure constants at ({i}, {j}) differ from the marks oracle"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(10) {
        ok = false;
        notes.push(format!("took {}", secs(elapsed)));
    }
    Outcome::new(ok, if notes.is_empty() { format!("ranks 2,2,3,4,8 and exact marks embedding in {}", secs(elapsed)) } else { notes.join("; ") })
}

fn lemma_reports(samples: usize) -> Vec<(String, tambarize::diagram::LemmaReport)> {
    ["cyclic:2", "cyclic:3", "symmetric:3"]
        .into_iter()
        .map(|s| (s.to_string(), diagram_lemma_suite(&group(s), 2024, samples)))
        .collect()
}

fn c2_exponential_adjunction(reports: &[(String, tambarize::diagram::LemmaReport)]) -> Outcome {
    let total: usize = reports.iter().map(|(_, r)| r.adjunction).sum();
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|(g, r)| r.violations.iter().filter(|v| v.lemma.contains("adjunction")).map(move |v| format!("{g}: {v}")))
        .collect();
    let per_group = reports.iter().map(|(g, r)| format!("{g} {}", r.adjunction)).collect::<Vec<_>>().join(", ");
    Outcome::new(bad.is_empty() && total >= 200, format!("{total} instances ({per_group}), {} failures", bad.len()))
}

fn c3_diagram_lemmas(reports: &[(String, tambarize::diagram::LemmaReport)]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, r) in reports {
        let lemma_violations = r.violations.iter().filter(|v| !v.lemma.contains("adjunction")).count();
        ok &= lemma_violations == 0 && r.lemma_a >= 100 && r.lemma_b >= 100 && r.lemma_c >= 100;
        parts.push(format!("{g} A{} B{} C{} ({} violations)", r.lemma_a, r.lemma_b, r.lemma_c, lemma_violations));
    }
    Outcome::new(ok, parts.join(", "))
}

fn c4_tambara_grid() -> Outcome {
    let start = Instant::now();
    let mut cells = 0;
    let mut notes = Vec::new();
    let mut instances = 0;
    let mut checks = 0;
    let mut skipped = 0;
    for gs in ["cyclic:2", "cyclic:3", "cyclic:4", "symmetric:3"] {
        let g = group(gs);
        let mut functors: Vec<SemiMackey> = vec![trivial_functor(&g)];
        for q in SMALL_MONOIDS.iter().chain(["cyclic:3/sign", "cyclic:2/sign"].iter()) {
            let gq = match parse_gmonoid(&g, q) {
                Ok(gq) => gq,
                Err(_) if q.ends_with("/sign") => continue,
                Err(e) => panic!("{q}: {e}"),
            };
            functors.push(fixed_point_functor(&gq));
            if gq.is_trivial_action() {
                functors.push(ell_functor(&g, gq.monoid(), q));
            }
        }
        for m in functors {
            let name = m.name().to_string();
            let r: TambaraReport = check_tambara_axioms(&Tambarization::new(m), 77, 100);
            cells += 1;
            instances += r.instances;
            checks += r.checks;
            skipped += r.skipped;
            if !r.passed() || r.instances < 100 {
                notes.push(format!(
                    "{gs} {name}: {} violations, first {:?}",
                    r.violations.len(),
                    r.violations.first().map(|v| &v.condition)
                ));
            }
        }
    }
    let elapsed = start.elapsed();
    let in_budget = elapsed < Duration::from_secs(300);
    if !in_budget {
        notes.push(format!("grid took {}", secs(elapsed)));
    }
    let summary = format!("{cells} cells, {instances} instances, {checks} checks ({skipped} skipped as too large), {}", secs(elapsed));
    Outcome::new(notes.is_empty(), if notes.is_empty() { summary } else { format!("{summary}; {}", notes.join("; ")) })
}

fn c5_tambarization_adjunction() -> Outcome {
    let mut ok = true;
    let mut enumerated = 0;
    let mut given = 0;
    let mut notes = Vec::new();
    for gs in ["cyclic:2", "cyclic:3", "symmetric:3"] {
        let g = group(gs);
        for q in SMALL_MONOIDS {
            let suite = adjunction_suite(&g, &parse_monoid(q).unwrap(), q, 5, 8);
            for c in &suite.tambara {
                if c.direction.starts_with("Φ∘Ψ") {
                    enumerated += c.morphisms;
                    if c.morphisms == 0 {
                        ok = false;
                        notes.push(format!("{gs} {q}: nothing enumerated for {} -> {}", c.source, c.target));
                    }
                } else {
                    given += c.morphisms;
                }
                if let Some(f) = c.failures.first() {
                    ok = false;
                    notes.push(format!("{gs} {q} {} -> {}: {f}", c.source, c.target));
                }
            }
            for c in &suite.ell {
                if let Some(f) = c.report.failures.first() {
                    ok = false;
                    notes.push(format!("{gs} {q} L -> {}: {f}", c.target));
                }
            }
        }
    }
    let summary = format!("{enumerated} enumerated morphisms into T^mu and {given} given Tambara morphisms round-trip over C2, C3, S3");
    Outcome::new(ok, if notes.is_empty() { summary } else { format!("{summary}; {}", notes.join("; ")) })
}

fn c6_crossed_burnside() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut runs = 0;
    let mut checks = 0;
    for gs in ["cyclic:2", "symmetric:3"] {
        let g = group(gs);
        for q in SMALL_MONOIDS.iter().chain(["cyclic:3/sign", "cyclic:2/sign"].iter()) {
            let gq = match parse_gmonoid(&g, q) {
                Ok(gq) => gq,
                Err(_) if q.ends_with("/sign") => continue,
                Err(e) => panic!("{q}: {e}"),
            };
            let r = cbr_comparison(&gq, 31, 50);
            runs += 1;
            checks += r.checks - r.skipped;
            if !r.passed() || r.sampled_maps < 50 || r.skipped > 0 {
                ok = false;
                notes.push(format!("{gs} {q}: {} failures, {} skipped, first {:?}", r.failures.len(), r.skipped, r.failures.first()));
            }
        }
    }
    let summary = format!("{runs} (G, Q) pairs, 50 sampled maps each, {checks} exact comparisons");
    Outcome::new(ok, if notes.is_empty() { summary } else { format!("{summary}; {}", notes.join("; ")) })
}

fn c7_strings_and_witt() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut comparisons = 0;
    for gs in ["cyclic:2", "cyclic:4", "symmetric:3"] {
        let g = group(gs);
        let lat = g.lattice();
        for q in std::iter::once("trivial").chain(SMALL_MONOIDS) {
            let qm = parse_monoid(q).unwrap();
            let t = Tambarization::new(ell_functor(&g, &qm, q));
            for class in 0..lat.class_count() {
                let h = lat.class_rep(class);
                comparisons += 1;
                if let Err(e) = elliott_iso(&t, &qm, h) {
                    ok = false;
                    notes.push(format!("{gs} {q} H={}: {e}", g.subgroup_name(h)));
                }
            }
            let (classes, p) = t.presentation(lat.trivial());
            let perm: Vec<usize> = classes.iter().map(|c| c.label).collect();
            if let Err(e) = p.check_basis_iso(&monoid_ring(&qm), &perm) {
                ok = false;
                notes.push(format!("{gs} {q} H=e is not Z[Q]: {e}"));
            }
        }
    }
    let c2 = group("cyclic:2");
    match witt_burnside(&c2, &Monoid::trivial(), "trivial", c2.lattice().whole()) {
        Ok(w) => {
            let t_sq_ok = w.presentation.rank() == 2 && {
                let t = w.presentation.basis.iter().position(|b| b.stab == "e").unwrap_or(0);
                let mut two_t = vec![0; 2];
                two_t[t] = 2;
                w.presentation.mul[t][t] == two_t
            };
            if !t_sq_ok || w.ring != "W_C2(Z)" {
                ok = false;
                notes.push(format!("W_C2(Z): rank {}, table {:?}", w.presentation.rank(), w.presentation.mul));
            }
        }
        Err(e) => {
            ok = false;
            notes.push(format!("W_C2(Z): {e}"));
        }
    }
    let summary = format!("{comparisons} exact comparisons T_L(G/H) = B_Q(H); H = e gives Z[Q]; W_C2(Z) has rank 2 with t^2 = 2t");
    Outcome::new(ok, if notes.is_empty() { summary } else { format!("{summary}; {}", notes.join("; ")) })
}

fn c8_signed_norm() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut configs = 0;
    let mut min_pairs = usize::MAX;
    for gs in ["cyclic:2", "cyclic:3", "symmetric:3"] {
        let g = group(gs);
        let functors = vec![
            trivial_functor(&g),
            ell_functor(&g, &Monoid::cyclic(2), "cyclic:2"),
            ell_functor(&g, &Monoid::nil(), "nil"),
            fixed_point_functor(&parse_gmonoid(&g, "cyclic:3").unwrap()),
        ];
        for m in functors {
            let name = m.name().to_string();
            let t = Tambarization::new(m);
            configs += 1;
            let mut pairs = 0;
            let mut effective = 0;
            let mut attempt = 0u64;
            while (pairs < 200 || effective < 200) && attempt < 1000 {
                let mut rng = instance_rng(8080, attempt);
                attempt += 1;
                let f = random_map(&g, 6, 2, &mut rng);
                let x = random_virtual(&t, f.dom(), 2, &mut rng);
                let y = random_virtual(&t, f.dom(), 2, &mut rng);
                let lhs = t.ring_mul(&x, &y).and_then(|xy| t.norm_on_ring(&f, &xy));
                let rhs = t.norm_on_ring(&f, &x).and_then(|nx| t.ring_mul(&nx, &t.norm_on_ring(&f, &y)?));
                match (lhs, rhs) {
                    (Err(TambaraError::TooLarge(_)), _) | (_, Err(TambaraError::TooLarge(_))) => {}
                    (Ok(l), Ok(r)) if l == r => pairs += 1,
                    (l, r) => {
                        ok = false;
                        notes.push(format!("{gs} {name}: not multiplicative on sample {attempt}: {l:?} vs {r:?}"));
                        break;
                    }
                }
                // effective a, written as (a + b) - b without cancelling
                let (a, _) = random_effective(&t, f.dom(), 2, &mut rng).split();
                let (b, _) = random_effective(&t, f.dom(), 2, &mut rng).split();
                let direct = t.norm(&f, &a).map(|n| t.k0(&n));
                let through = a.add(&b).and_then(|ab| t.norm_of_difference(&f, &ab, &b));
                let on_ring = t.norm_on_ring(&f, &t.k0(&a));
                match (direct, through, on_ring) {
                    (Err(TambaraError::TooLarge(_)), _, _)
                    | (_, Err(TambaraError::TooLarge(_)), _)
                    | (_, _, Err(TambaraError::TooLarge(_))) => {}
                    (Ok(d), Ok(v), Ok(w)) if d == v && d == w => effective += 1,
                    (d, v, _) => {
                        ok = false;
                        notes.push(format!("{gs} {name}: effective disagreement on sample {attempt}: {d:?} vs {v:?}"));
                        break;
                    }
                }
            }
            if pairs < 200 || effective < 200 {
                ok = false;
                notes.push(format!("{gs} {name}: only {pairs} pairs / {effective} effective inputs within budget"));
            }
            min_pairs = min_pairs.min(pairs.min(effective));
        }
    }
    let summary = format!("{configs} configurations, at least {min_pairs} pairs and effective inputs each");
    Outcome::new(ok, if notes.is_empty() { summary } else { format!("{summary}; {}", notes.join("; ")) })
}

fn c9_mackey_checker() -> Outcome {
    let mut exhaustive = 0;
    let mut notes = Vec::new();
    let mut functors = Vec::new();
    for gs in ["cyclic:1", "cyclic:2", "cyclic:3", "cyclic:4", "symmetric:3", "dihedral:4"] {
        let g = group(gs);
        for q in SMALL_MONOIDS {
            let qm = parse_monoid(q).unwrap();
            functors.push(ell_functor(&g, &qm, q));
            functors.push(fixed_point_functor(&parse_gmonoid(&g, q).unwrap()));
        }
        if let Ok(gq) = parse_gmonoid(&g, "cyclic:3/sign") {
            functors.push(fixed_point_functor(&gq));
        }
    }
    for m in &functors {
        let r = check_axioms(m);
        exhaustive += 1;
        if !r.passed() {
            notes.push(format!("{} over {}: {} violations", m.name(), m.group().name(), r.violations.len()));
        }
    }
    // mutation fuzz over the functors with a mutable table
    let mut rng = instance_rng(9, 0);
    let targets: Vec<&SemiMackey> = functors.iter().filter(|m| m.group().order() > 1).collect();
    let (mut tried, mut caught) = (0, 0);
    let mut escapes = Vec::new();
    let mut certified = 0;
    while tried < 400 {
        let m = targets[tried % targets.len()];
        let Some(mu) = random_mutation(m, &mut rng) else {
            tried += 1;
            continue;
        };
        tried += 1;
        let mutant = apply_mutation(m, &mu);
        if !check_axioms(&mutant).passed() {
            caught += 1;
        } else {
            if check_on_gsets(&mutant, 40, tried as u64).is_empty() {
                certified += 1;
            }
            escapes.push(format!("{} over {} {:?} {}->{}", m.name(), m.group().name(), mu.table, mu.old, mu.new));
        }
    }
    let pass = notes.is_empty() && escapes.is_empty();
    let mut detail = format!("{exhaustive} functors pass exhaustively; mutations caught {caught}/{tried}");
    if !escapes.is_empty() {
        detail.push_str(&format!(
            "; {} escapes, {certified} of them certified as genuine semi-Mackey functors by the G-set-level checker \
             (a single-entry change that lands on another functor satisfies every axiom), e.g. {}",
            escapes.len(),
            escapes[0]
        ));
    }
    if !notes.is_empty() {
        detail.push_str(&format!("; {}", notes.join("; ")));
    }
    Outcome::new(pass, detail)
}

/// `[C2/e]^2 = 2[C2/e]` in a rank-2 JSON table.
fn t_squared_is_two_t(doc: &serde_json::Value) -> bool {
    let Some(t) = doc["basis"].as_array().and_then(|b| b.iter().position(|x| x == "[C2/e]")) else {
        return false;
    };
    let mut two_t = vec![0, 0];
    two_t[t] = 2;
    doc["mul"][t][t] == serde_json::json!(two_t)
}

fn c10_cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_tambarize");
    let examples: [&[&str]; 3] = [
        &["table", "--group", "cyclic:2", "--functor", "trivial", "--level", "G"],
        &["verify", "--group", "symmetric:3", "--functor", "ell", "--monoid", "cyclic:3", "--samples", "100", "--seed", "7"],
        &["witt", "--group", "cyclic:2", "--monoid", "trivial", "--level", "G"],
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    for (n, args) in examples.iter().enumerate() {
        let runs: Vec<(Option<i32>, Vec<u8>)> = ["1", "4", "4"]
            .iter()
            .map(|threads| {
                let o = Proc::new(exe).args(*args).env("RAYON_NUM_THREADS", threads).output().unwrap();
                (o.status.code(), o.stdout)
            })
            .collect();
        let path = dir.path().join(format!("out{n}.json"));
        let status = Proc::new(exe).args(*args).arg("--out").arg(&path).status().unwrap();
        let file = std::fs::read(&path).unwrap_or_default();
        if runs.iter().any(|r| r != &runs[0]) || file != runs[0].1 || status.code() != runs[0].0 {
            ok = false;
            notes.push(format!("{} output differs between runs", args[0]));
        }
        if runs[0].0 != Some(0) {
            ok = false;
            notes.push(format!("{} exited with {:?}", args[0], runs[0].0));
        }
        let doc: serde_json::Value = serde_json::from_slice(&runs[0].1).unwrap_or_default();
        let content_ok = match n {
            0 => doc["rank"] == 2 && t_squared_is_two_t(&doc),
            1 => doc["violations"] == 0,
            _ => doc["rank"] == 2 && doc["metadata"]["ring"] == "W_C2(Z)" && t_squared_is_two_t(&doc),
        };
        if !content_ok {
            ok = false;
            notes.push(format!("{} output has unexpected content", args[0]));
        }
    }
    Outcome::new(ok, if notes.is_empty() { "3 documented commands, byte-identical across 4 runs each (1 and 4 worker threads, stdout and --out)".into() } else { notes.join("; ") })
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome, Duration)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let d = start.elapsed();
        println!("[{}] {n:>2} {name} ({}): {}", if o.pass { "PASS" } else { "FAIL" }, secs(d), o.detail);
        results.push((n, name, o, d));
    };
    run(1, "burnside recovery", &c1_burnside_recovery);
    let lemmas = lemma_reports(200);
    run(2, "exponential adjunction", &|| c2_exponential_adjunction(&lemmas));
    run(3, "diagram lemmas", &|| c3_diagram_lemmas(&lemmas));
    run(4, "tambara axioms grid", &c4_tambara_grid);
    run(5, "tambarization adjunction", &c5_tambarization_adjunction);
    run(6, "crossed burnside comparison", &c6_crossed_burnside);
    run(7, "strings and witt-burnside", &c7_strings_and_witt);
    run(8, "signed norm", &c8_signed_norm);
    run(9, "mackey axiom checker", &c9_mackey_checker);
    run(10, "cli determinism", &c10_cli_determinism);
    let failed = results.iter().filter(|r| !r.2.pass).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
