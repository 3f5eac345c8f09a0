//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed by
//! `cargo test`; the process exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use pillowcase::arith::{ratio, PiValue};
use pillowcase::covers::{connected_counts, growth_ratios, naive_table, CharacterTable};
use pillowcase::local::{f_closed, f_kontsevich_base, f_recurrence, LayerSignature};
use pillowcase::poly::{Monomial, Polynomial, RationalFunction};
use pillowcase::ribbon::{
    enumerate_graphs, hat_f, leading_part_fit, verify_pole_recurrence, LabelMode,
};
use pillowcase::tree::{contributions, subtotals, volume, zeta_asymptotic_ratio, TreeContribution};
use pillowcase::Result;

type Outcome = Result<std::result::Result<String, String>>;
type Criterion = (&'static str, fn() -> Outcome);

fn pi(num: i64, den: i64, power: u32) -> PiValue {
    PiValue::new(ratio(num, den), power).expect("even power")
}

fn sig(m: u32, n: u32) -> LayerSignature {
    LayerSignature::new(m, n).expect("valid signature")
}

fn check(ok: bool, pass: String, fail: String) -> std::result::Result<String, String> {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn volume_identities() -> Outcome {
    let want = [pi(1, 1, 4), pi(1, 2, 6), pi(1, 4, 8), pi(1, 8, 10)];
    let mut got = Vec::new();
    for k in 1..=4 {
        got.push(volume(k)?);
    }
    let shown: Vec<String> = got.iter().map(|v| v.to_string()).collect();
    Ok(check(
        got == want,
        format!("K=1..4: {}", shown.join(", ")),
        format!("got {}", shown.join(", ")),
    ))
}

fn contribution(contribs: &[TreeContribution], layers: &[(u32, u32)]) -> Option<PiValue> {
    let mut want: Vec<LayerSignature> = layers.iter().map(|&(m, n)| sig(m, n)).collect();
    want.sort();
    contribs
        .iter()
        .find(|c| {
            let mut have = c.layers.clone();
            have.sort();
            have == want
        })
        .map(|c| c.value.clone())
}

fn per_tree_tables() -> Outcome {
    let one = contributions(1)?;
    let two = contributions(2)?;
    let expected_one = [
        (&[(1, 3), (0, 2)][..], pi(4, 9, 4)),
        (&[(0, 2), (1, 1), (0, 2)][..], pi(5, 9, 4)),
    ];
    let expected_two = [
        (&[(2, 4), (0, 2)][..], pi(4, 63, 6)),
        (&[(1, 3), (1, 3)][..], pi(16, 189, 6)),
        (&[(0, 2), (2, 2), (0, 2)][..], pi(2, 15, 6)),
        (&[(1, 3), (1, 1), (0, 2)][..], pi(4, 45, 6)),
        (&[(0, 2), (1, 1), (1, 1), (0, 2)][..], pi(1, 9, 6)),
        (&[(0, 2), (2, 0), (0, 2), (0, 2)][..], pi(1, 54, 6)),
    ];
    let mut bad = Vec::new();
    if one.len() != 2 || two.len() != 6 {
        bad.push(format!("tree counts {} and {}", one.len(), two.len()));
    }
    for (contribs, expected) in [(&one, &expected_one[..]), (&two, &expected_two[..])] {
        for (layers, want) in expected {
            let got = contribution(contribs, layers);
            if got.as_ref() != Some(want) {
                bad.push(format!("{layers:?}: want {want}, got {got:?}"));
            }
        }
    }
    let sub = subtotals(&two)?;
    let want_sub = [(1, pi(4, 27, 6)), (2, pi(2, 9, 6)), (3, pi(7, 54, 6))];
    for (k, want) in want_sub {
        if sub.get(&k) != Some(&want) {
            bad.push(format!(
                "subtotal k={k}: want {want}, got {:?}",
                sub.get(&k)
            ));
        }
    }
    Ok(check(
        bad.is_empty(),
        "K=1: 4/9, 5/9; K=2: six trees, subtotals 4/27, 2/9, 7/54".into(),
        bad.join("; "),
    ))
}

fn local_polynomial_table() -> Outcome {
    let rows: Vec<((u32, u32), Polynomial)> = vec![
        ((0, 2), Polynomial::from_int_terms(1, &[(&[0], 1)])),
        ((1, 3), Polynomial::from_int_terms(1, &[(&[2], 1)])),
        ((2, 4), Polynomial::from_int_terms(1, &[(&[4], 1)])),
        ((3, 5), Polynomial::from_int_terms(1, &[(&[6], 1)])),
        ((1, 1), Polynomial::from_int_terms(2, &[(&[0, 0], 1)])),
        (
            (2, 2),
            Polynomial::from_int_terms(2, &[(&[2, 0], 2), (&[0, 2], 2)]),
        ),
        (
            (3, 3),
            Polynomial::from_int_terms(2, &[(&[4, 0], 3), (&[2, 2], 12), (&[0, 4], 3)]),
        ),
        ((2, 0), Polynomial::from_int_terms(3, &[(&[0, 0, 0], 2)])),
        (
            (3, 1),
            Polynomial::from_int_terms(3, &[(&[2, 0, 0], 6), (&[0, 2, 0], 6), (&[0, 0, 2], 6)]),
        ),
    ];
    let mut bad = Vec::new();
    for ((m, n), want) in &rows {
        let got = f_closed(sig(*m, *n));
        if got != *want {
            bad.push(format!("F({m},{n}): want {want}, got {got}"));
        }
    }
    Ok(check(
        bad.is_empty(),
        format!("{} table entries, valences 1-3", rows.len()),
        bad.join("; "),
    ))
}

fn route_agreement() -> Outcome {
    let mut checked = 0;
    for s in LayerSignature::all_up_to(12) {
        let (closed, rec) = (f_closed(s), f_recurrence(s));
        if closed != rec {
            return Ok(Err(format!("F{s}: closed {closed} != recurrence {rec}")));
        }
        checked += 1;
    }
    for m in (2..=10).step_by(2) {
        let (closed, base) = (f_closed(sig(m, 0)), f_kontsevich_base(m)?);
        if closed != base {
            return Ok(Err(format!(
                "F({m},0): closed {closed} != kontsevich {base}"
            )));
        }
    }
    Ok(Ok(format!(
        "closed = recurrence on {checked} signatures with m+n <= 12; closed = kontsevich for m <= 10"
    )))
}

fn ribbon_pipeline() -> Outcome {
    let graphs = enumerate_graphs(sig(2, 2), LabelMode::FacesOnly).len();
    let numerator = Polynomial::from_int_terms(2, &[(&[2, 0], 4), (&[0, 2], 4)]);
    let denominator = Polynomial::from_terms(2, [(Monomial::new(vec![3, 3]), ratio(1, 1))]);
    let want = RationalFunction::new(numerator, denominator)?;
    let hat = hat_f(sig(2, 2));
    let transform_ok = hat.equals(&want);
    let mut recurrences = Vec::new();
    for (m, n) in [(1, 1), (0, 2), (2, 2)] {
        recurrences.push(verify_pole_recurrence(sig(m, n))?);
    }
    Ok(check(
        graphs == 5 && transform_ok && recurrences.iter().all(|&r| r),
        "5 graphs at (2,2); hat F(2,2) = 4(l1^2+l2^2)/(l1^3 l2^3); pole recurrence at (1,1), (0,2), (2,2)".into(),
        format!("graphs {graphs}, hat F(2,2) = {hat}, recurrences {recurrences:?}"),
    ))
}

fn leading_term_oracle() -> Outcome {
    let mut bad = Vec::new();
    for (m, n) in [(0, 2), (1, 1), (1, 3), (2, 2), (2, 0), (3, 1)] {
        let s = sig(m, n);
        let fit = leading_part_fit(s, 8)?;
        let closed = f_closed(s);
        if fit != closed {
            bad.push(format!("F{s}: fit {fit} != closed {closed}"));
        }
    }
    Ok(check(
        bad.is_empty(),
        "lattice fit = F for (0,2), (1,1), (1,3), (2,2), (2,0), (3,1)".into(),
        bad.join("; "),
    ))
}

fn cover_ground_truth() -> Outcome {
    let table = CharacterTable::in_memory();
    let covers = connected_counts(2, 5, &table)?;
    let mut compared = 0;
    for n in 1..=5 {
        let naive = naive_table(n)?;
        for zeros in 0..=2 {
            for poles in 0..=6 {
                for (f, e) in [
                    (
                        covers.connected_at(n, zeros, poles),
                        naive.connected.get(&(zeros, poles)),
                    ),
                    (
                        covers.all_at(n, zeros, poles),
                        naive.all.get(&(zeros, poles)),
                    ),
                ] {
                    let e = e.cloned().unwrap_or_default();
                    if f != e {
                        return Ok(Err(format!(
                            "N={n} zeros={zeros} poles={poles}: frobenius {f} != naive {e}"
                        )));
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(Ok(format!(
        "{compared} graded counts agree for N <= 5, zeros <= 2, poles <= 6"
    )))
}

fn asymptotic_ratios() -> Outcome {
    let table = CharacterTable::in_memory();
    let rows = growth_ratios(1, &[10, 20, 30], &table)?;
    let r: Vec<f64> = rows.iter().map(|(_, _, r)| *r).collect();
    let dev: Vec<f64> = r.iter().map(|x| (x - 1.0).abs()).collect();
    let ok = r.iter().all(|&x| x > 0.0) && dev.windows(2).all(|w| w[1] <= w[0]) && dev[2] < 0.35;
    let shown = format!("r_10 = {:.6}, r_20 = {:.6}, r_30 = {:.6}", r[0], r[1], r[2]);
    Ok(check(ok, shown.clone(), shown))
}

fn zeta_asymptotics() -> Outcome {
    let r = zeta_asymptotic_ratio(2, 1_000_000)?;
    let shown = format!("sum_(hw <= 10^6) w^3 / asymptotic = {r:.6}");
    Ok(check((r - 1.0).abs() < 0.05, shown.clone(), shown))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("volume identities", volume_identities),
        ("per-tree tables", per_tree_tables),
        ("local polynomial table", local_polynomial_table),
        ("route agreement", route_agreement),
        ("ribbon pipeline", ribbon_pipeline),
        ("leading-term oracle", leading_term_oracle),
        ("cover oracle ground truth", cover_ground_truth),
        ("asymptotic growth ratio", asymptotic_ratios),
        ("zeta asymptotics", zeta_asymptotics),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(Ok(detail)) => ("PASS", detail),
            Ok(Err(detail)) => ("FAIL", detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} {:>2} {name}: {detail} [{elapsed:.1?}]", i + 1);
    }
    println!("{} criteria, {failures} failed", criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
