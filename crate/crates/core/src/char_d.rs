//! Type D characters for `omega_1`.
//!
//! In `D_4` the colors split as `G' = {b2, b4, u4, u2}` and `G'' = {b3, u3}`.
//! Monomials over `G'` behave like `A_3` with `omega_2` under
//! `b2 = (2,2), b4 = (2,3), u4 = (1,2), u2 = (1,3)`, those over `G''` like
//! `A_2` with `omega_2` under `b3 = (2,2), u3 = (1,2)`. The tilde procedure
//! below glues the two halves back together, adding `n_1' n_1''` to the degree.

use std::collections::HashMap;

use crate::char_a::{char_a, char_edge, char_middle, Edge};
use crate::colors::{
    color_weight, d_block, realizable, weight_to_mcoords, AlgebraSpec, Color, DCoords, Family, Weight,
};
use crate::enumerator::{enumerate_basis, enumerate_character, EnumRequest};
use crate::error::{Error, Result};
use crate::monomial::{gamma_prime, gamma_second, sorted, Factor, ICVariant, Monomial, RestrictedSet};
use crate::qseries::{binomial_bracket, pochhammer_ratio, QSeries};
use crate::verify::{par_cases, weight_grid, CaseResult, Report};

/// Largest rank accepted by [`char_dl_lambda0`] unless the caller opts out.
pub const DL_MAX_RANK: usize = 6;

fn d4() -> AlgebraSpec {
    AlgebraSpec::type_d(4).expect("D4 is valid")
}

fn check_d4(n: &Weight) -> Result<()> {
    if n.len() != 4 {
        return Err(Error::WeightLength {
            expected: 4,
            got: n.len(),
        });
    }
    Ok(())
}

/// `A_3` weight `(n_4, n_1, n_3)` of a `G'` weight, if `n` is one.
fn prime_weight(n: &Weight) -> Option<Weight> {
    (n[1] == n[2] + n[3]).then(|| Weight(vec![n[3], n[0], n[2]]))
}

/// `A_2` weight `(n_4, n_1)` of a `G''` weight, if `n` is one.
fn second_weight(n: &Weight) -> Option<Weight> {
    (n[0] == n[1] && n[2] == n[3]).then(|| Weight(vec![n[3], n[0]]))
}

pub fn char_gamma_prime(n: &Weight, qmax: usize) -> Result<QSeries> {
    check_d4(n)?;
    match prime_weight(n) {
        Some(a) => char_middle(3, 2, 0, &a, qmax),
        None => Ok(QSeries::zero(qmax)),
    }
}

pub fn char_gamma_second(n: &Weight, qmax: usize) -> Result<QSeries> {
    check_d4(n)?;
    match second_weight(n) {
        Some(a) => char_edge(2, Edge::Last, 0, &a, qmax),
        None => Ok(QSeries::zero(qmax)),
    }
}

/// Character of a restricted set, read off from the matching type A initial
/// condition.
pub fn restricted_char(set: RestrictedSet, n: &Weight, qmax: usize) -> Result<QSeries> {
    check_d4(n)?;
    let a3 = AlgebraSpec::type_a(3, 2)?;
    let a2 = AlgebraSpec::type_a(2, 2)?;
    let (spec, w) = if set.is_prime() {
        match prime_weight(n) {
            Some(w) => (a3, w),
            None => return Ok(QSeries::zero(qmax)),
        }
    } else {
        match second_weight(n) {
            Some(w) => (a2, w),
            None => return Ok(QSeries::zero(qmax)),
        }
    };
    let ic = match set {
        RestrictedSet::SecondZero | RestrictedSet::PrimeZero => ICVariant::Zero,
        RestrictedSet::SecondB3 => ICVariant::LambdaK(1),
        RestrictedSet::PrimeB2 => ICVariant::IJ { i: 2, j: 2 },
        RestrictedSet::PrimeU4B2 => ICVariant::IJ { i: 1, j: 2 },
        RestrictedSet::PrimeB4B2 => ICVariant::IJ { i: 2, j: 3 },
        RestrictedSet::PrimeU4B4B2 => {
            let u4 = restricted_char(RestrictedSet::PrimeU4B2, n, qmax)?;
            let b4 = restricted_char(RestrictedSet::PrimeB4B2, n, qmax)?;
            let b2 = restricted_char(RestrictedSet::PrimeB2, n, qmax)?;
            return Ok(&(&u4 + &b4) - &b2);
        }
    };
    char_a(&spec, &ic, &w, qmax)
}

/// Character of one half: `None` is the whole of `G'` (or `G''`).
fn part_char(prime: bool, set: Option<RestrictedSet>, n: &Weight, qmax: usize) -> Result<QSeries> {
    match (prime, set) {
        (_, Some(s)) => restricted_char(s, n, qmax),
        (true, None) => char_gamma_prime(n, qmax),
        (false, None) => char_gamma_second(n, qmax),
    }
}

/// Which decomposition table and `d_gamma` signs to use.
///
/// `Derived` is obtained by composing the two halves. `Corrupted` pairs `B_4`
/// with all of `G''` in the decomposition and puts a minus sign before the
/// rational term of `d_{b3}` and `d_{b2}`. It fails the oracle and serves as a
/// known-bad fixture for the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DForm {
    Derived,
    Corrupted,
}

/// The seven `D_4` initial conditions in their canonical form.
pub fn d4_targets() -> Vec<ICVariant> {
    use Color::*;
    vec![
        ICVariant::Gamma(Unbar(2)),
        ICVariant::Gamma(Unbar(3)),
        ICVariant::Gamma(Unbar(4)),
        ICVariant::Gamma(Bar(4)),
        ICVariant::Gamma(Bar(3)),
        ICVariant::Gamma(Bar(2)),
        ICVariant::Zero,
    ]
}

/// The restricted sets `(x_1, x_2)` land in when `x` satisfies `ic`.
pub fn decomposition_parts(ic: &ICVariant, form: DForm) -> Result<(Option<RestrictedSet>, Option<RestrictedSet>)> {
    use Color::*;
    use RestrictedSet::*;
    let spec = d4();
    ic.check(&spec)?;
    Ok(match ic.canonical(&spec) {
        ICVariant::Gamma(Unbar(2)) => (None, None),
        ICVariant::Gamma(Unbar(3)) => (Some(PrimeU4B4B2), None),
        ICVariant::Gamma(Unbar(4)) => match form {
            DForm::Derived => (Some(PrimeU4B2), Some(SecondB3)),
            DForm::Corrupted => (Some(PrimeU4B2), None),
        },
        ICVariant::Gamma(Bar(4)) => (Some(PrimeB4B2), Some(SecondB3)),
        ICVariant::Gamma(Bar(3)) => (Some(PrimeB2), Some(SecondB3)),
        ICVariant::Gamma(Bar(2)) => (Some(PrimeB2), Some(SecondZero)),
        ICVariant::Zero => (Some(PrimeZero), Some(SecondZero)),
        other => return Err(Error::IncompatibleVariant(format!("{other} for {spec}"))),
    })
}

/// The splitting `alpha = alpha_i' + alpha_i''` for every admissible `i`,
/// together with `n_1'` and `n_1''`.
fn splits(n: &Weight) -> Result<Vec<(i64, Weight, Weight)>> {
    let mc = weight_to_mcoords(n)?;
    let top = mc.m0 - mc.mprime - mc.mdblprime;
    (0..=top)
        .map(|i| {
            let (a1, a2) = crate::colors::alpha_split(n, i)?;
            Ok((i + mc.mprime, a1, a2))
        })
        .collect()
}

/// `sum_i chi_{S'}(alpha_i') chi_{S''}(alpha_i'') q^{n_1' n_1''}` with the
/// halves chosen by [`decomposition_parts`].
pub fn char_d4_compose(ic: &ICVariant, n: &Weight, qmax: usize, form: DForm) -> Result<QSeries> {
    check_d4(n)?;
    let (p1, p2) = decomposition_parts(ic, form)?;
    let mut acc = QSeries::zero(qmax);
    if !realizable(&d4(), n) {
        return Ok(acc);
    }
    for (_, a1, a2) in splits(n)? {
        let cross = (a1[0] * a2[0]) as usize;
        let term = &part_char(true, p1, &a1, qmax)? * &part_char(false, p2, &a2, qmax)?;
        acc = &acc + &term.shift(cross);
    }
    Ok(acc)
}

/// The summand of the `W(Lambda_0)` sum for `s = i + m'`.
fn lambda0_term(n: &Weight, s: i64, qmax: usize) -> Result<QSeries> {
    let (n1, n2, n3, n4) = (n[0], n[1], n[2], n[3]);
    let f = n1 * n1 + n2 * n2 + n3 * n3 + n4 * n4 - n1 * n2 - n2 * n3 - n3 * n4 - s * (n2 - n3 + n4 - s);
    let top = n1 - n2 + n3 - n4 + 2 * s;
    let denom = [n3 - n4 + s, n1 - n2 + s, s, n1 - n2 + n3 - n4 + s, n4 - s, n2 - n3 - s];
    pochhammer_ratio(f, &[top], &denom, qmax)
}

pub fn char_d4_lambda0(n: &Weight, qmax: usize) -> Result<QSeries> {
    check_d4(n)?;
    let mut acc = QSeries::zero(qmax);
    if !realizable(&d4(), n) {
        return Ok(acc);
    }
    for (s, _, _) in splits(n)? {
        acc = &acc + &lambda0_term(n, s, qmax)?;
    }
    Ok(acc)
}

/// The factor `d_gamma` of the `s = i + m'` summand. The rational term is
/// `(1 - q^a)(1 - q^b)/(1 - q^c)` with `a = n_3 - n_4 + s`, `b = s` and
/// `c = n_1 - n_2 + n_3 - n_4 + 2s`, taken as `0` when `c = 0`.
fn d_factor(ic: &ICVariant, n: &Weight, s: i64, qmax: usize, form: DForm) -> Result<QSeries> {
    use Color::*;
    let (n1, n2, n3, n4) = (n[0], n[1], n[2], n[3]);
    let rat = || binomial_bracket(n3 - n4 + s, s, n1 - n2 + n3 - n4 + 2 * s, qmax);
    let qp = |k: i64| QSeries::q_pow(k as usize, qmax);
    let signed = |lead: QSeries, tail: QSeries| match form {
        DForm::Derived => &lead + &tail,
        DForm::Corrupted => &lead - &tail,
    };
    Ok(match ic.canonical(&d4()) {
        ICVariant::Gamma(Unbar(2)) => QSeries::one(qmax),
        ICVariant::Gamma(Unbar(3)) => &QSeries::one(qmax) - &rat()?,
        ICVariant::Gamma(Unbar(4)) => qp(n3),
        ICVariant::Gamma(Bar(4)) => qp(n4),
        ICVariant::Gamma(Bar(3)) => signed(qp(n3 + s), rat()?.shift((n1 - n2 + n3 + s) as usize)),
        ICVariant::Gamma(Bar(2)) => signed(qp(n2), rat()?.shift(n1 as usize)),
        ICVariant::Zero => qp(n1),
        other => return Err(Error::IncompatibleVariant(format!("{other} for D_4"))),
    })
}

/// Character of `B_gamma` (or `B_0`, or a basic module routed through its
/// initial condition) in `D_4`.
pub fn char_d4_gamma(ic: &ICVariant, n: &Weight, qmax: usize, form: DForm) -> Result<QSeries> {
    check_d4(n)?;
    ic.check(&d4())?;
    let mut acc = QSeries::zero(qmax);
    if !realizable(&d4(), n) {
        return Ok(acc);
    }
    for (s, _, _) in splits(n)? {
        let term = &lambda0_term(n, s, qmax)? * &d_factor(ic, n, s, qmax, form)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

/// All compositions of `total` into `parts` nonnegative summands.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `W(Lambda_0)` character of `D_l` as a sum over `i_2 + ... + i_{l-1} =
/// n_l - m`.
pub fn char_dl_lambda0(rank: usize, n: &Weight, qmax: usize) -> Result<QSeries> {
    let spec = AlgebraSpec::type_d(rank)?;
    spec.check_weight(n)?;
    let l = rank;
    let mut acc = QSeries::zero(qmax);
    if !realizable(&spec, n) {
        return Ok(acc);
    }
    let g = |k: usize| n.get1(k);
    let dc = DCoords::from_weight(n);
    // m^{(j)} for j = 2..l-1
    let mut mj = vec![0i64; l];
    mj[2] = dc.deficit(2) + dc.deficit(l);
    for (j, slot) in mj.iter_mut().enumerate().skip(3) {
        *slot = dc.deficit(j);
    }
    let m: i64 = mj.iter().sum();
    let mut base: i64 = (1..=l).map(|k| g(k) * g(k)).sum();
    base -= (1..=l - 3).map(|k| g(k) * g(k + 1)).sum::<i64>();
    base -= g(l - 2) * g(l - 1) + g(l - 2) * g(l);
    for is in compositions(g(l) - m, l - 2) {
        let s = |j: usize| is[j - 2] + mj[j];
        let s2 = s(2);
        let numer = [g(1) - g(2) + g(l - 1) - g(l) + 2 * s2];
        let mut denom = vec![
            g(l - 1) - g(l) + s2,
            g(1) - g(2) + s2,
            s2,
            g(1) - g(2) + g(l - 1) - g(l) + s2,
        ];
        let mut f = base;
        for j in 3..l - 1 {
            let c = g(j - 1) - g(j) + s(j);
            denom.extend([s(j), c]);
            f += s(j) * c;
        }
        let c = g(l - 2) - g(l - 1) - g(l) + s(l - 1);
        denom.extend([s(l - 1), c]);
        f += s(l - 1) * c;
        acc = &acc + &pochhammer_ratio(f, &numer, &denom, qmax)?;
    }
    Ok(acc)
}

fn tilde_of(l: usize, c: Color) -> Color {
    Color::Tilde(if c == Color::Unbar(2) || c == Color::Bar(2) {
        2
    } else {
        l
    })
}

/// Storage-order factors with every `b2(-r) u2(-r)` and `u_l(-r-1) b_l(-r)`
/// replaced by a tilde pair at exponents `r, r+1`.
fn to_tildes(l: usize, fs: &[Factor]) -> Vec<Factor> {
    let mut out = Vec::with_capacity(fs.len());
    let mut t = 0;
    while t < fs.len() {
        if t + 1 < fs.len() {
            let (a, b) = (fs[t], fs[t + 1]);
            let pair2 = a.color == Color::Unbar(2) && b.color == Color::Bar(2) && a.r == b.r;
            let pairl = a.color == Color::Bar(l) && b.color == Color::Unbar(l) && b.r == a.r + 1;
            if pair2 || pairl {
                let c = tilde_of(l, a.color);
                out.push(Factor::new(c, a.r));
                out.push(Factor::new(c, a.r + 1));
                t += 2;
                continue;
            }
        }
        out.push(fs[t]);
        t += 1;
    }
    out
}

/// Inverse of [`to_tildes`]; tilde factors must come in pairs `r, r+1`.
fn from_tildes(l: usize, fs: &[Factor]) -> Result<Vec<Factor>> {
    let mut out = Vec::with_capacity(fs.len());
    let mut t = 0;
    while t < fs.len() {
        let a = fs[t];
        if let Color::Tilde(k) = a.color {
            match fs.get(t + 1) {
                Some(b) if b.color == a.color && b.r == a.r + 1 => {
                    if k == 2 {
                        out.push(Factor::new(Color::Unbar(2), a.r));
                        out.push(Factor::new(Color::Bar(2), a.r));
                    } else {
                        out.push(Factor::new(Color::Bar(l), a.r));
                        out.push(Factor::new(Color::Unbar(l), a.r + 1));
                    }
                    t += 2;
                    continue;
                }
                _ => {
                    let text: Vec<String> = fs.iter().map(Factor::to_string).collect();
                    return Err(Error::TildePairBroken(text.join(" ")));
                }
            }
        }
        out.push(a);
        t += 1;
    }
    Ok(out)
}

/// `+staircase` (`sign = -1`) or `-staircase` (`sign = 1`) on raw factors.
fn stair(fs: &[Factor], sign: i64) -> Vec<Factor> {
    fs.iter()
        .enumerate()
        .map(|(t, f)| Factor::new(f.color, f.r + sign * t as i64))
        .collect()
}

fn only_colors(x: &Monomial, allowed: &[Color]) -> bool {
    x.factors().iter().all(|f| allowed.contains(&f.color))
}

fn require_d4(x: &Monomial) -> Result<()> {
    if *x.spec() != d4() {
        return Err(Error::InvalidAlgebra(format!("expected D_4, got {}", x.spec())));
    }
    Ok(())
}

/// Glues `x1` over `G'` and `x2` over `G''` into one admissible monomial.
pub fn merge_monomials(x1: &Monomial, x2: &Monomial) -> Result<Monomial> {
    require_d4(x1)?;
    require_d4(x2)?;
    if !x1.satisfies_dc() || !only_colors(x1, &gamma_prime()) {
        return Err(Error::NotAdmissible(format!("{x1} is not in B_G'")));
    }
    if !x2.satisfies_dc() || !only_colors(x2, &gamma_second()) {
        return Err(Error::NotAdmissible(format!("{x2} is not in B_G''")));
    }
    let x3 = to_tildes(4, x1.factors());
    let mut y = stair(&x3, -1);
    y.extend(stair(x2.factors(), -1));
    let z = stair(&sorted(y), 1);
    Monomial::new(d4(), from_tildes(4, &z)?)
}

/// Inverse of [`merge_monomials`].
pub fn split_monomial(x: &Monomial) -> Result<(Monomial, Monomial)> {
    require_d4(x)?;
    if !x.satisfies_dc() {
        return Err(Error::NotAdmissible(x.to_string()));
    }
    let y = stair(&to_tildes(4, x.factors()), -1);
    let (second, first): (Vec<Factor>, Vec<Factor>) = y.into_iter().partition(|f| d_block(4, f.color) == 3);
    let x1 = Monomial::new(d4(), from_tildes(4, &stair(&first, 1))?)?;
    let x2 = Monomial::new(d4(), stair(&second, 1))?;
    Ok((x1, x2))
}

/// Membership in `B_G'`/`B_G''` or one of the restricted sets.
pub fn in_part(x: &Monomial, prime: bool, set: Option<RestrictedSet>) -> bool {
    let colors = if prime { gamma_prime() } else { gamma_second() };
    x.satisfies_dc()
        && only_colors(x, &colors)
        && match set {
            None => true,
            Some(s) => s.is_prime() == prime && x.satisfies_ic(&ICVariant::Restricted(s)).unwrap_or(false),
        }
}

/// Both sides of the seven `D_4` relations at `alpha`.
pub fn d4_relations(
    alpha: &Weight,
    qmax: usize,
    chi: &mut dyn FnMut(ICVariant, &Weight) -> QSeries,
) -> Result<Vec<(String, QSeries, QSeries)>> {
    use Color::*;
    let spec = d4();
    let n1 = alpha[0].max(0) as usize;
    let mut x = |ic: ICVariant, w: &Weight| {
        if realizable(&spec, w) {
            chi(ic, w)
        } else {
            QSeries::zero(qmax)
        }
    };
    let minus = |c: Color| -> Result<Weight> { Ok(alpha - &color_weight(&spec, c)?) };
    let g = ICVariant::Gamma;
    let zero = ICVariant::Zero;
    let q = |s: &QSeries, k: usize| s.shift(k);
    let mut out = Vec::new();

    out.push(("chi_0".into(), x(zero, alpha), q(&x(g(Unbar(2)), alpha), n1)));

    let a_u2 = minus(Unbar(2))?;
    let a_0 = &a_u2 - &color_weight(&spec, Bar(2))?;
    let rhs = &(&x(g(Unbar(3)), alpha) + &q(&x(g(Unbar(3)), &a_u2), n1))
        + &q(&x(g(Unbar(2)), &a_0), (2 * n1).saturating_sub(2));
    out.push(("chi_u2".into(), x(g(Unbar(2)), alpha), rhs));

    let a_u3 = minus(Unbar(3))?;
    let mut mix = |w: &Weight| &(&x(g(Unbar(4)), w) + &x(g(Bar(4)), w)) - &x(g(Bar(3)), w);
    let rhs = &mix(alpha) + &q(&mix(&a_u3), n1);
    out.push(("chi_u3".into(), x(g(Unbar(3)), alpha), rhs));

    let rhs = &x(g(Bar(3)), alpha) + &q(&x(g(Bar(4)), &minus(Unbar(4))?), n1);
    out.push(("chi_u4".into(), x(g(Unbar(4)), alpha), rhs));

    let rhs = &x(g(Bar(3)), alpha) + &q(&x(g(Unbar(4)), &minus(Bar(4))?), n1);
    out.push(("chi_b4".into(), x(g(Bar(4)), alpha), rhs));

    let rhs = &x(g(Bar(2)), alpha) + &q(&x(g(Bar(2)), &minus(Bar(3))?), n1);
    out.push(("chi_b3".into(), x(g(Bar(3)), alpha), rhs));

    let rhs = &x(zero, alpha) + &q(&x(zero, &minus(Bar(2))?), n1);
    out.push(("chi_b2".into(), x(g(Bar(2)), alpha), rhs));
    Ok(out)
}

/// Which characters the `D_4` relation check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DSource {
    Oracle,
    Formula,
}

fn d4_grid(bound: i64) -> Vec<Weight> {
    let spec = d4();
    weight_grid(4, bound)
        .into_iter()
        .filter(|w| realizable(&spec, w))
        .collect()
}

pub fn verify_recurrences_d4(bound: i64, qmax: usize, source: DSource) -> Report {
    let grid = d4_grid(bound);
    let results = par_cases(&grid, |alpha| {
        let mut cache: HashMap<(ICVariant, Weight), QSeries> = HashMap::new();
        let mut chi = |ic: ICVariant, w: &Weight| {
            cache
                .entry((ic, w.clone()))
                .or_insert_with(|| match source {
                    DSource::Oracle => enumerate_character(&EnumRequest::new(d4(), ic, w.clone(), qmax)),
                    DSource::Formula => char_d4_gamma(&ic, w, qmax, DForm::Derived).expect("D4 target"),
                })
                .clone()
        };
        let mut res = CaseResult::default();
        match d4_relations(alpha, qmax, &mut chi) {
            Ok(rels) => {
                for (name, lhs, rhs) in rels {
                    res.compare(alpha, &name, &lhs, &rhs);
                }
            }
            Err(e) => res.fail(alpha, e.to_string()),
        }
        res
    });
    let name = match source {
        DSource::Oracle => "d4-recurrence-oracle",
        DSource::Formula => "d4-recurrence-formula",
    };
    Report::collect(name, results)
}

/// Closed forms against the enumerator on the grid `n_i <= bound`: the
/// `W(Lambda_0)` sum, the composed halves and the `d_gamma` formula for all
/// seven targets.
pub fn verify_formulas_d4(bound: i64, qmax: usize, form: DForm) -> Report {
    let grid = d4_grid(bound);
    let results = par_cases(&grid, |n| {
        let mut res = CaseResult::default();
        let oracle = |ic: ICVariant| enumerate_character(&EnumRequest::new(d4(), ic, n.clone(), qmax));
        let base = oracle(ICVariant::LambdaK(0));
        match char_d4_lambda0(n, qmax) {
            Ok(s) => res.compare(n, "lambda0", &s, &base),
            Err(e) => res.fail(n, e.to_string()),
        }
        for ic in d4_targets() {
            let want = if ic == ICVariant::Gamma(Color::Unbar(2)) {
                base.clone()
            } else {
                oracle(ic)
            };
            for (label, got) in [
                ("d_gamma", char_d4_gamma(&ic, n, qmax, form)),
                ("compose", char_d4_compose(&ic, n, qmax, form)),
            ] {
                match got {
                    Ok(s) => res.compare(n, &format!("{label} {ic}"), &s, &want),
                    Err(e) => res.fail(n, e.to_string()),
                }
            }
        }
        res
    });
    Report::collect("d4-formula", results)
}

/// Every `D_4` weight that is a sum of at most `max_factors` colors.
fn small_weights(max_factors: usize) -> Vec<Weight> {
    let spec = d4();
    let cw: Vec<Weight> = spec.colors().iter().map(|&c| color_weight(&spec, c).unwrap()).collect();
    let mut layer = vec![Weight::zero(4)];
    let mut all = layer.clone();
    for _ in 0..max_factors {
        let mut next: Vec<Weight> = layer.iter().flat_map(|w| cw.iter().map(move |c| w + c)).collect();
        next.sort();
        next.dedup();
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.sort();
    all.dedup();
    all
}

/// Checks the tilde split on every admissible monomial of degree `<= dmax`
/// for the seven targets, and the converse on every pair of halves.
pub fn verify_decomposition_d4(dmax: i64, form: DForm) -> Report {
    let spec = d4();
    // n factors need degree at least about n^2 / 2
    let max_factors = (1..).find(|&k: &usize| (k * k / 2) as i64 > dmax).unwrap();
    let weights = small_weights(max_factors);
    let forward = par_cases(&weights, |n| {
        let mut res = CaseResult::default();
        for ic in d4_targets() {
            let (p1, p2) = match decomposition_parts(&ic, form) {
                Ok(p) => p,
                Err(e) => {
                    res.fail(n, e.to_string());
                    continue;
                }
            };
            let req = EnumRequest::new(spec, ic, n.clone(), 0);
            for x in enumerate_basis(&req, dmax) {
                match split_monomial(&x) {
                    Ok((x1, x2)) => {
                        res.check(n, in_part(&x1, true, p1) && in_part(&x2, false, p2), || {
                            format!("{ic}: {x} splits into {x1} | {x2}")
                        });
                        let cross = (x1.len() * x2.len()) as i64;
                        res.check(n, x.degree() == x1.degree() + x2.degree() + cross, || {
                            format!("degree identity fails for {x}")
                        });
                        match merge_monomials(&x1, &x2) {
                            Ok(back) => res.check(n, back == x, || format!("{x} merges back to {back}")),
                            Err(e) => res.fail(n, format!("{x}: {e}")),
                        }
                    }
                    Err(e) => res.fail(n, format!("{x}: {e}")),
                }
            }
        }
        res
    });

    // converse: merge every pair of halves of small degree
    let halves = |colors: Vec<Color>| -> Vec<Monomial> {
        weights
            .iter()
            .flat_map(|n| {
                let req = EnumRequest::new(spec, ICVariant::LambdaK(0), n.clone(), 0).with_colors(colors.clone());
                enumerate_basis(&req, dmax)
            })
            .collect()
    };
    let ones = halves(gamma_prime());
    let twos = halves(gamma_second());
    let targets = d4_targets();
    let backward = par_cases(&ones, |x1| {
        let mut res = CaseResult::default();
        for x2 in &twos {
            let cross = (x1.len() * x2.len()) as i64;
            if x1.degree() + x2.degree() + cross > dmax {
                continue;
            }
            let x = match merge_monomials(x1, x2) {
                Ok(x) => x,
                Err(e) => {
                    res.fail(&x1.weight(), format!("{x1} | {x2}: {e}"));
                    continue;
                }
            };
            let w = x.weight();
            res.check(&w, x.satisfies_dc(), || {
                format!("{x1} | {x2} merges to {x}, which fails DC")
            });
            for ic in &targets {
                let (p1, p2) = decomposition_parts(ic, form).expect("D4 target");
                let want = in_part(x1, true, p1) && in_part(x2, false, p2);
                let got = x.satisfies_ic(ic).unwrap_or(false);
                res.check(&w, want == got, || format!("{ic}: {x1} | {x2} -> {x}, expected {want}"));
            }
        }
        res
    });
    let mut all = forward;
    all.extend(backward);
    Report::collect("d4-split", all)
}

/// The `D_l` multi-sum against the enumerator on `D_rank`, and at rank 4
/// against the `D_4` sum.
pub fn verify_dl_remark(rank: usize, bound: i64, qmax: usize) -> Result<Report> {
    let spec = AlgebraSpec::type_d(rank)?;
    if spec.family() != Family::D {
        return Err(Error::InvalidAlgebra(spec.to_string()));
    }
    let grid: Vec<Weight> = weight_grid(rank, bound)
        .into_iter()
        .filter(|w| realizable(&spec, w))
        .collect();
    let results = par_cases(&grid, |n| {
        let mut res = CaseResult::default();
        match char_dl_lambda0(rank, n, qmax) {
            Ok(got) => {
                let want = enumerate_character(&EnumRequest::new(spec, ICVariant::LambdaK(0), n.clone(), qmax));
                res.compare(n, "oracle", &got, &want);
                if rank == 4 {
                    match char_d4_lambda0(n, qmax) {
                        Ok(d4sum) => res.compare(n, "d4 sum", &got, &d4sum),
                        Err(e) => res.fail(n, e.to_string()),
                    }
                }
            }
            Err(e) => res.fail(n, e.to_string()),
        }
        res
    });
    Ok(Report::collect("dl-remark", results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn geo(order: usize, from: usize) -> QSeries {
        let mut c = vec![0; order + 1];
        c[from..].iter_mut().for_each(|x| *x = 1);
        QSeries::from_coeffs(order, &c)
    }

    fn oracle_on(colors: Vec<Color>, ic: ICVariant, n: &Weight, qmax: usize) -> QSeries {
        enumerate_character(&EnumRequest::new(d4(), ic, n.clone(), qmax).with_colors(colors))
    }

    #[test]
    fn half_examples() {
        assert_eq!(char_gamma_prime(&Weight::zero(4), 6).unwrap(), QSeries::one(6));
        assert_eq!(char_gamma_prime(&w(&[1, 0, 0, 0]), 6).unwrap(), geo(6, 1));
        assert_eq!(char_gamma_second(&w(&[1, 1, 0, 0]), 6).unwrap(), geo(6, 1));
        assert_eq!(char_gamma_second(&w(&[1, 1, 1, 1]), 6).unwrap(), geo(6, 1));
        assert_eq!(
            restricted_char(RestrictedSet::SecondZero, &w(&[1, 1, 0, 0]), 6).unwrap(),
            geo(6, 2)
        );
        for s in RestrictedSet::ALL {
            assert_eq!(restricted_char(s, &Weight::zero(4), 6).unwrap(), QSeries::one(6));
        }
    }

    #[test]
    fn halves_against_oracle() {
        for n in weight_grid(4, 3) {
            let qmax = 14;
            if prime_weight(&n).is_some() {
                let all = oracle_on(gamma_prime(), ICVariant::LambdaK(0), &n, qmax);
                assert_eq!(char_gamma_prime(&n, qmax).unwrap(), all, "{n}");
            }
            if second_weight(&n).is_some() {
                let all = oracle_on(gamma_second(), ICVariant::LambdaK(0), &n, qmax);
                assert_eq!(char_gamma_second(&n, qmax).unwrap(), all, "{n}");
            }
            for s in RestrictedSet::ALL {
                let colors = s.colors();
                let want = oracle_on(colors, ICVariant::Restricted(s), &n, qmax);
                assert_eq!(restricted_char(s, &n, qmax).unwrap(), want, "{n} {s}");
            }
        }
    }

    #[test]
    fn lambda0_examples() {
        assert_eq!(char_d4_lambda0(&Weight::zero(4), 8).unwrap(), QSeries::one(8));
        assert_eq!(char_d4_lambda0(&w(&[1, 0, 0, 0]), 8).unwrap(), geo(8, 1));
        assert_eq!(char_d4_lambda0(&w(&[1, 1, 1, 1]), 8).unwrap(), geo(8, 1));
    }

    #[test]
    fn gamma_examples_at_color_three() {
        let n = w(&[1, 1, 1, 1]);
        let q = |ic| char_d4_gamma(&ic, &n, 8, DForm::Derived).unwrap();
        assert_eq!(q(ICVariant::Gamma(Unbar(4))), geo(8, 2));
        assert_eq!(q(ICVariant::Gamma(Bar(3))), geo(8, 2));
        assert_eq!(q(ICVariant::Gamma(Unbar(3))), geo(8, 1));
        assert_eq!(q(ICVariant::Gamma(Unbar(2))), char_d4_lambda0(&n, 8).unwrap());
    }

    #[test]
    fn zero_target_is_shifted_lambda0() {
        for n in d4_grid(2) {
            let base = char_d4_lambda0(&n, 12).unwrap();
            let z = char_d4_gamma(&ICVariant::Zero, &n, 12, DForm::Derived).unwrap();
            assert_eq!(z, base.shift(n[0] as usize));
        }
    }

    #[test]
    fn formulas_small_grid() {
        let rep = verify_formulas_d4(2, 14, DForm::Derived);
        assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
    }

    #[test]
    fn corrupted_d_table_fails() {
        let rep = verify_formulas_d4(2, 14, DForm::Corrupted);
        let bad = |tag: &str| rep.failures.iter().any(|f| f.detail.starts_with(tag));
        assert!(bad("d_gamma gamma:b3") && bad("d_gamma gamma:b2"));
        assert!(bad("compose gamma:u4"));
        for tag in [
            "d_gamma gamma:u2",
            "d_gamma gamma:u3",
            "d_gamma gamma:u4",
            "d_gamma gamma:b4",
            "d_gamma zero",
        ] {
            assert!(!bad(tag), "{tag}");
        }
    }

    #[test]
    fn merge_examples() {
        let spec = d4();
        let x1 = Monomial::parse(spec, "b2(-1) u2(-1)").unwrap();
        let x2 = Monomial::parse(spec, "u3(-1)").unwrap();
        let x = merge_monomials(&x1, &x2).unwrap();
        assert_eq!(x.degree(), 2 + 1 + 2);
        assert!(x.satisfies_dc());
        assert_eq!(split_monomial(&x).unwrap(), (x1.clone(), x2.clone()));
        let e = Monomial::empty(spec);
        assert_eq!(merge_monomials(&x1, &e).unwrap(), x1);
        assert_eq!(merge_monomials(&e, &x2).unwrap(), x2);
        assert_eq!(split_monomial(&x1).unwrap(), (x1.clone(), e.clone()));
    }

    #[test]
    fn broken_tilde_pair_is_reported() {
        let fs = vec![Factor::new(Tilde(2), 3), Factor::new(Unbar(3), 4)];
        assert!(matches!(from_tildes(4, &fs), Err(Error::TildePairBroken(_))));
    }

    #[test]
    fn decomposition_small() {
        let rep = verify_decomposition_d4(9, DForm::Derived);
        assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
        assert!(!verify_decomposition_d4(9, DForm::Corrupted).ok());
    }

    #[test]
    fn recurrences_small() {
        for src in [DSource::Oracle, DSource::Formula] {
            let rep = verify_recurrences_d4(2, 12, src);
            assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
        }
    }

    #[test]
    fn dl_multisum_formula() {
        let rep = verify_dl_remark(4, 2, 12).unwrap();
        assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
        let rep = verify_dl_remark(5, 1, 10).unwrap();
        assert!(rep.ok(), "{:?}", &rep.failures[..rep.failures.len().min(5)]);
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<i64>::new()]);
    }
}
