//! Acceptance grid. Every comparison is exact; each criterion prints one
//! PASS/FAIL line and the process fails if any criterion does.

use std::process::ExitCode;
use std::time::Instant;

use fschar::char_a::{
    char_a, char_ij, verify_bijection, verify_formulas_a, verify_recurrences_a, Edge, RelationForm, Source,
};
use fschar::char_d::{
    char_d4_gamma, char_d4_lambda0, d4_targets, verify_decomposition_d4, verify_dl_remark, verify_formulas_d4,
    verify_recurrences_d4, DForm, DSource,
};
use fschar::colors::realizable;
use fschar::verify::{par_cases, weight_grid, CaseResult, Report};
use fschar::{enumerate_character, AlgebraSpec, Color, EnumRequest, ICVariant, QSeries, Weight};

const QMAX: usize = 25;

type Criterion = (&'static str, fn() -> Report);

fn a_specs(ranks: &[usize]) -> Vec<AlgebraSpec> {
    let mut out = Vec::new();
    for &l in ranks {
        for m in 1..=l {
            out.push(AlgebraSpec::type_a(l, m).unwrap());
        }
    }
    out
}

fn criterion_1() -> Report {
    let parts = a_specs(&[1, 2, 3, 4])
        .iter()
        .map(|s| verify_formulas_a(s, 3, QMAX))
        .collect();
    Report::merge("A formulas", parts)
}

fn criterion_2() -> Report {
    let mut parts = Vec::new();
    for spec in a_specs(&[3, 4]) {
        let grid: Vec<Weight> = weight_grid(spec.rank(), 3)
            .into_iter()
            .filter(|w| realizable(&spec, w))
            .collect();
        let results = par_cases(&grid, |n| {
            let mut res = CaseResult::default();
            for i in 1..=spec.m() {
                for j in spec.m()..=spec.rank() {
                    let got = char_ij(&spec, i, j, n, QMAX).unwrap();
                    let want = enumerate_character(&EnumRequest::new(spec, ICVariant::IJ { i, j }, n.clone(), QMAX));
                    res.compare(n, &format!("{spec} ij:{i},{j}"), &got, &want);
                }
            }
            res
        });
        parts.push(Report::collect("B_ij", results));
    }
    Report::merge("B_ij", parts)
}

fn criterion_3() -> Report {
    let mut parts = Vec::new();
    for spec in a_specs(&[3, 4]) {
        for src in [Source::Oracle, Source::Formula] {
            parts.push(verify_recurrences_a(&spec, 3, QMAX, src, RelationForm::Derived));
        }
    }
    Report::merge("A recurrences", parts)
}

fn criterion_4() -> Report {
    let parts = (1..=3)
        .map(|l| verify_bijection(l, Edge::Last, 3, 8).unwrap())
        .collect();
    Report::merge("bijection", parts)
}

fn criterion_5() -> Report {
    verify_formulas_d4(3, QMAX, DForm::Derived)
}

fn criterion_6() -> Report {
    verify_decomposition_d4(15, DForm::Derived)
}

fn criterion_7() -> Report {
    let parts = [DSource::Oracle, DSource::Formula]
        .into_iter()
        .map(|s| verify_recurrences_d4(3, QMAX, s))
        .collect();
    Report::merge("D4 recurrences", parts)
}

fn criterion_8() -> Report {
    Report::merge(
        "D_l multi-sum",
        vec![
            verify_dl_remark(4, 3, QMAX).unwrap(),
            verify_dl_remark(5, 2, 15).unwrap(),
        ],
    )
}

/// `q^from + q^{from+1} + ...`
fn geometric(from: usize, order: usize) -> QSeries {
    let c: Vec<i64> = (0..=order).map(|d| i64::from(d >= from)).collect();
    QSeries::from_coeffs(order, &c)
}

fn criterion_9() -> Report {
    let mut res = CaseResult::default();
    let q = 12;

    let a1 = AlgebraSpec::type_a(1, 1).unwrap();
    let n = Weight(vec![2]);
    let got = char_a(&a1, &ICVariant::LambdaK(0), &n, 6).unwrap();
    res.compare(&n, "A1 lambda0", &got, &QSeries::from_coeffs(6, &[0, 0, 0, 0, 1, 1, 2]));

    let a3 = AlgebraSpec::type_a(3, 2).unwrap();
    let n = Weight(vec![1, 1, 1]);
    res.compare(
        &n,
        "A3 m=2 lambda0",
        &char_a(&a3, &ICVariant::LambdaK(0), &n, q).unwrap(),
        &geometric(1, q),
    );

    // weight (1,1,1,1) is the single color u3: monomials x_{u3}(-r), with
    // r = 1 allowed exactly when u3 passes the first-color filter
    let n = Weight(vec![1, 1, 1, 1]);
    res.compare(&n, "D4 lambda0", &char_d4_lambda0(&n, q).unwrap(), &geometric(1, q));
    for ic in d4_targets() {
        let from = match ic {
            ICVariant::Gamma(Color::Unbar(2)) | ICVariant::Gamma(Color::Unbar(3)) => 1,
            _ => 2,
        };
        let got = char_d4_gamma(&ic, &n, q, DForm::Derived).unwrap();
        res.compare(&n, &format!("D4 {ic}"), &got, &geometric(from, q));
    }
    Report::collect("goldens", vec![res])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("A formulas vs oracle, l <= 4, entries <= 3", criterion_1),
        ("B_ij vs oracle, l in {3,4}", criterion_2),
        ("A recurrences, oracle and closed form", criterion_3),
        ("partition bijection, omega_l edge, l <= 3", criterion_4),
        ("D4 formulas vs oracle, entries <= 3", criterion_5),
        ("D4 split/merge, degree <= 15", criterion_6),
        ("D4 recurrences", criterion_7),
        ("D_l multi-sum formula, l = 4 and 5", criterion_8),
        ("spot goldens", criterion_9),
    ];
    let mut ok = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let rep = run();
        let status = if rep.ok() { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} {name} ({} checks, {} failures, max discrepancy {}, {:.1}s)",
            i + 1,
            rep.cases,
            rep.failures.len(),
            rep.max_discrepancy,
            start.elapsed().as_secs_f64()
        );
        for f in rep.failures.iter().take(5) {
            println!("    [{}] {}", f.weight, f.detail);
        }
        ok &= rep.ok();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
