//! Type A characters in closed form, the partition bijection for the edge
//! weights, path splitting and the `B_ij` recursion.
//!
//! Weights are `n_1 a_1 + ... + n_l a_l`; a weight is realizable by colors of
//! `omega_m` exactly when `0 <= n_1 <= ... <= n_m >= ... >= n_l >= 0`. Every
//! function here returns the zero series off that chain.

use std::collections::HashMap;

use crate::colors::{realizable, AlgebraSpec, Color, Family, Weight};
use crate::enumerator::{enumerate_basis, enumerate_character, EnumRequest};
use crate::error::{Error, Result};
use crate::monomial::{minimal_monomial, Direction, Factor, ICVariant, Monomial, Partition, Path, StartRule};
use crate::qseries::{binomial_bracket, pochhammer_ratio, QSeries};
use crate::verify::{par_cases, weight_grid, CaseResult, Report};

/// The two edge weights `omega_1` and `omega_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    First,
    Last,
}

impl Edge {
    pub fn spec(&self, rank: usize) -> Result<AlgebraSpec> {
        match self {
            Edge::First => AlgebraSpec::type_a(rank, 1),
            Edge::Last => AlgebraSpec::type_a(rank, rank),
        }
    }

    /// Color of block `s` (1-based): `(s, l)` for `omega_l`, `(1, s)` for
    /// `omega_1`.
    fn block_color(&self, rank: usize, s: usize) -> Color {
        match self {
            Edge::First => Color::A { i: 1, j: s },
            Edge::Last => Color::A { i: s, j: rank },
        }
    }

    fn block_of(&self, c: Color) -> usize {
        match (self, c) {
            (Edge::First, Color::A { j, .. }) => j,
            (Edge::Last, Color::A { i, .. }) => i,
            _ => unreachable!("edge blocks hold type A colors"),
        }
    }

    /// Number of factors of each block color in a monomial of weight `n`.
    fn block_lengths(&self, n: &Weight) -> Vec<i64> {
        let l = n.len();
        (1..=l)
            .map(|s| match self {
                Edge::First => n.get1(s) - n.get1(s + 1),
                Edge::Last => n.get1(s) - n.get1(s - 1),
            })
            .collect()
    }
}

/// `sum n_i^2 - sum n_i n_{i+1}`.
pub fn quadratic_form(n: &Weight) -> i64 {
    let s = n.as_slice();
    let sq: i64 = s.iter().map(|x| x * x).sum();
    let cross: i64 = s.windows(2).map(|w| w[0] * w[1]).sum();
    sq - cross
}

fn chain_denominators(spec: &AlgebraSpec, n: &Weight) -> Vec<i64> {
    let m = spec.m();
    let l = spec.rank();
    let mut d: Vec<i64> = (1..=m).map(|s| n.get1(s) - n.get1(s - 1)).collect();
    d.extend((m..=l).map(|s| n.get1(s) - n.get1(s + 1)));
    d
}

/// `q^{Q(n) + shift} (q)_{n_m} / prod (q)_{consecutive differences}`.
fn chain_product(spec: &AlgebraSpec, n: &Weight, shift: i64, qmax: usize) -> Result<QSeries> {
    let nm = n.get1(spec.m());
    pochhammer_ratio(quadratic_form(n) + shift, &[nm], &chain_denominators(spec, n), qmax)
}

fn checked(spec: &AlgebraSpec, n: &Weight) -> Result<bool> {
    spec.check_weight(n)?;
    Ok(realizable(spec, n))
}

/// Character of `W(Lambda_k)` for `omega_1` or `omega_l`.
pub fn char_edge(rank: usize, edge: Edge, k: usize, n: &Weight, qmax: usize) -> Result<QSeries> {
    let spec = edge.spec(rank)?;
    if k > rank {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            max: rank as i64,
        });
    }
    if !checked(&spec, n)? {
        return Ok(QSeries::zero(qmax));
    }
    let denom = edge.block_lengths(n);
    pochhammer_ratio(quadratic_form(n) + n.get1(k), &[], &denom, qmax)
}

/// Character of `W(Lambda_k)` for `omega_m`. The formula also holds at the
/// edges, where `(q)_{n_m}` cancels against a denominator factor.
pub fn char_middle(rank: usize, m: usize, k: usize, n: &Weight, qmax: usize) -> Result<QSeries> {
    let spec = AlgebraSpec::type_a(rank, m)?;
    if k > rank {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            max: rank as i64,
        });
    }
    if !checked(&spec, n)? {
        return Ok(QSeries::zero(qmax));
    }
    chain_product(&spec, n, n.get1(k), qmax)
}

/// `char_edge` or `char_middle` depending on `m`.
pub fn char_lambda(spec: &AlgebraSpec, k: usize, n: &Weight, qmax: usize) -> Result<QSeries> {
    let (l, m) = (spec.rank(), spec.m());
    if m == l {
        char_edge(l, Edge::Last, k, n, qmax)
    } else if m == 1 {
        char_edge(l, Edge::First, k, n, qmax)
    } else {
        char_middle(l, m, k, n, qmax)
    }
}

/// Character of `B_ij`, with `n_0 = n_{l+1} = 0`.
pub fn char_ij(spec: &AlgebraSpec, i: usize, j: usize, n: &Weight, qmax: usize) -> Result<QSeries> {
    ICVariant::IJ { i, j }.check(spec)?;
    if !checked(spec, n)? {
        return Ok(QSeries::zero(qmax));
    }
    if n.is_zero() {
        return Ok(QSeries::one(qmax));
    }
    let (a, b, nm) = (n.get1(i - 1), n.get1(j + 1), n.get1(spec.m()));
    let mut bracket = QSeries::q_pow((a + b) as usize, qmax);
    bracket = &bracket + &binomial_bracket(a, b, nm, qmax)?.shift(nm as usize);
    Ok(&chain_product(spec, n, 0, qmax)? * &bracket)
}

/// Closed-form character for any type A initial condition.
pub fn char_a(spec: &AlgebraSpec, ic: &ICVariant, n: &Weight, qmax: usize) -> Result<QSeries> {
    if spec.family() != Family::A {
        return Err(Error::IncompatibleVariant(format!("{ic} for {spec}")));
    }
    ic.check(spec)?;
    match *ic {
        ICVariant::LambdaK(k) => char_lambda(spec, k, n, qmax),
        ICVariant::IJ { i, j } => char_ij(spec, i, j, n, qmax),
        ICVariant::Zero => Ok(char_ij(spec, 1, spec.rank(), n, qmax)?.shift(n.get1(spec.m()).max(0) as usize)),
        _ => Err(Error::IncompatibleVariant(format!("{ic} for {spec}"))),
    }
}

/// `r_1 = 1` is forbidden for block color `c` under `LambdaK(k)`.
fn block_offset(spec: &AlgebraSpec, k: usize, c: Color) -> i64 {
    if ICVariant::LambdaK(k).allows_at_one(spec, c) {
        0
    } else {
        1
    }
}

/// Sends a tuple of partitions, one per block (block `s` has color `(s, l)`
/// for `omega_l` and `(1, s)` for `omega_1`), to an admissible monomial of
/// `W(Lambda_k)`. Block `s` starts from exponents `t + offset` and the
/// merged monomial gets the `-staircase`.
pub fn bijection_forward(rank: usize, edge: Edge, k: usize, lambdas: &[Partition]) -> Result<Monomial> {
    let spec = edge.spec(rank)?;
    if lambdas.len() != rank {
        return Err(Error::LengthMismatch {
            expected: rank,
            got: lambdas.len(),
        });
    }
    let mut factors = Vec::new();
    for (s, lambda) in (1..=rank).zip(lambdas) {
        let c = edge.block_color(rank, s);
        let off = block_offset(&spec, k, c);
        for (t, part) in lambda.parts().iter().enumerate() {
            factors.push(Factor::new(c, t as i64 + 1 + off + part));
        }
    }
    Monomial::new(spec, factors)?.staircase(Direction::Minus)
}

/// Inverse of [`bijection_forward`].
pub fn bijection_backward(x: &Monomial, rank: usize, edge: Edge, k: usize) -> Result<Vec<Partition>> {
    let spec = edge.spec(rank)?;
    if *x.spec() != spec {
        return Err(Error::InvalidAlgebra(format!("expected {spec}, got {}", x.spec())));
    }
    if !x.satisfies_dc() || !x.satisfies_ic(&ICVariant::LambdaK(k))? {
        return Err(Error::NotAdmissible(x.to_string()));
    }
    let flat = x.staircase(Direction::Plus)?;
    let mut blocks: Vec<Vec<i64>> = vec![Vec::new(); rank];
    for f in flat.factors() {
        let s = edge.block_of(f.color);
        let t = blocks[s - 1].len() as i64 + 1;
        blocks[s - 1].push(f.r - t - block_offset(&spec, k, f.color));
    }
    blocks.into_iter().map(Partition::new).collect()
}

/// A type A path split into its row and column indices, each a path of a
/// smaller algebra: rows live in `A_m` with `omega_m` (colors `(i, m)`),
/// columns in `A_{l-m+1}` with `omega_1` (colors `(1, j-m+1)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSplit {
    pub rows: Path,
    pub row_spec: AlgebraSpec,
    pub cols: Path,
    pub col_spec: AlgebraSpec,
}

pub fn path_decompose(spec: &AlgebraSpec, p: &Path) -> Result<PathSplit> {
    let (l, m) = (spec.rank(), spec.m());
    let row_spec = AlgebraSpec::type_a(m, m)?;
    let col_spec = AlgebraSpec::type_a(l - m + 1, 1)?;
    let mut rows = Vec::with_capacity(p.len());
    let mut cols = Vec::with_capacity(p.len());
    for &c in &p.colors {
        spec.validate_color(c)?;
        let Color::A { i, j } = c else { unreachable!() };
        rows.push(Color::A { i, j: m });
        cols.push(Color::A { i: 1, j: j - m + 1 });
    }
    Ok(PathSplit {
        rows: Path::new(rows),
        row_spec,
        cols: Path::new(cols),
        col_spec,
    })
}

/// Which initial condition the minimal monomials are built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeStart {
    Lambda(usize),
    IJ(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeIdentity {
    pub dp: i64,
    pub d1: i64,
    pub d2: i64,
    /// `dp - d1 - d2 + n_m^2`; zero when the product formula gives the
    /// right degree, `-n_m` for `B_ij` paths starting outside `(i, j)`.
    pub residual: i64,
}

/// Degrees of the minimal monomials of `p` and of its row and column paths.
pub fn minimal_degree_identity(spec: &AlgebraSpec, p: &Path, start: DegreeStart) -> Result<DegreeIdentity> {
    let m = spec.m();
    let split = path_decompose(spec, p)?;
    let col = |k: usize| k + 1 - m;
    let (full, rows, cols) = match start {
        DegreeStart::Lambda(0) => (StartRule::Unit, StartRule::Unit, StartRule::Unit),
        DegreeStart::Lambda(k) if k <= m => (StartRule::ThetaRow(k), StartRule::ThetaRow(k), StartRule::Unit),
        DegreeStart::Lambda(k) => (StartRule::ThetaCol(k), StartRule::Unit, StartRule::ThetaCol(col(k))),
        DegreeStart::IJ(i, j) => (
            StartRule::MaxIJ(i, j),
            StartRule::ThetaRow(i - 1),
            StartRule::ThetaCol(col(j + 1)),
        ),
    };
    let dp = minimal_monomial(spec, p, full)?.degree();
    let d1 = minimal_monomial(&split.row_spec, &split.rows, rows)?.degree();
    let d2 = minimal_monomial(&split.col_spec, &split.cols, cols)?.degree();
    let nm = p.len() as i64;
    Ok(DegreeIdentity {
        dp,
        d1,
        d2,
        residual: dp - d1 - d2 + nm * nm,
    })
}

/// Which version of the `B_ij` recursion to evaluate.
///
/// `Derived` follows the case analysis on the first two factors. `Corrupted`
/// keeps `- chi_{i+1,l}` in the last row of the general relation and `q` in
/// place of `q^{n_m}` for the `(i,m)` and `(m,j)` relations. It fails the oracle
/// and serves as a known-bad fixture for the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationForm {
    Derived,
    Corrupted,
}

#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub name: String,
    pub lhs: QSeries,
    pub rhs: QSeries,
}

/// Evaluates both sides of every `B_ij` relation at `alpha` using the
/// character source `chi`. Unrealizable weights count as zero.
pub fn a_relations(
    spec: &AlgebraSpec,
    alpha: &Weight,
    qmax: usize,
    form: RelationForm,
    chi: &mut dyn FnMut(ICVariant, &Weight) -> QSeries,
) -> Vec<RelationInstance> {
    let (l, m) = (spec.rank(), spec.m());
    let nm = alpha.get1(m).max(0) as usize;
    let mut x = |ic: ICVariant, w: &Weight| {
        if realizable(spec, w) {
            chi(ic, w)
        } else {
            QSeries::zero(qmax)
        }
    };
    let ij = |i: usize, j: usize| ICVariant::IJ { i, j };
    let sub = |i: usize, j: usize| -> Weight {
        let mut w = alpha.clone();
        for s in i..=j {
            w.0[s - 1] -= 1;
        }
        w
    };
    let q = |s: &QSeries, k: usize| s.shift(k);
    let mut out = Vec::new();
    let mut push = |name: String, lhs: QSeries, rhs: QSeries| out.push(RelationInstance { name, lhs, rhs });

    push("chi_0".into(), x(ICVariant::Zero, alpha), q(&x(ij(1, l), alpha), nm));
    for i in 1..=m {
        for j in m..=l {
            let beta = sub(i, j);
            let lhs = x(ij(i, j), alpha);
            let rhs = if i < m && j > m {
                let first = &(&x(ij(i + 1, j), alpha) + &x(ij(i, j - 1), alpha)) - &x(ij(i + 1, j - 1), alpha);
                let second = &q(&x(ij(i + 1, j - 1), &beta), 1) - &q(&x(ij(1, l), &beta), nm);
                let tail = match form {
                    RelationForm::Derived => &x(ij(1, j - 1), &beta) + &x(ij(i + 1, l), &beta),
                    RelationForm::Corrupted => &x(ij(1, j - 1), &beta) - &x(ij(i + 1, l), &beta),
                };
                let third = &tail - &x(ij(i + 1, j - 1), &beta);
                &(&first + &second) + &q(&third, nm)
            } else if i < m {
                match form {
                    RelationForm::Derived => &x(ij(i + 1, m), alpha) + &q(&x(ij(i + 1, l), &beta), nm),
                    RelationForm::Corrupted => &x(ij(i + 1, m), alpha) + &q(&x(ij(i + 1, m), &beta), 1),
                }
            } else if j > m {
                match form {
                    RelationForm::Derived => &x(ij(m, j - 1), alpha) + &q(&x(ij(1, j - 1), &beta), nm),
                    RelationForm::Corrupted => &x(ij(m, j - 1), alpha) + &q(&x(ij(m, j - 1), &beta), 1),
                }
            } else {
                &x(ICVariant::Zero, alpha) + &q(&x(ICVariant::Zero, &beta), nm)
            };
            push(format!("chi_{i}{j}"), lhs, rhs);
        }
    }
    out
}

/// Where the characters in a relation check come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Oracle,
    Formula,
}

/// Checks the `B_ij` relations at every chain weight with coordinates
/// `<= bound`.
pub fn verify_recurrences_a(spec: &AlgebraSpec, bound: i64, qmax: usize, source: Source, form: RelationForm) -> Report {
    let grid: Vec<Weight> = weight_grid(spec.rank(), bound)
        .into_iter()
        .filter(|w| realizable(spec, w))
        .collect();
    let results = par_cases(&grid, |alpha| {
        let mut cache: HashMap<(ICVariant, Weight), QSeries> = HashMap::new();
        let mut chi = |ic: ICVariant, w: &Weight| {
            cache
                .entry((ic, w.clone()))
                .or_insert_with(|| match source {
                    Source::Oracle => enumerate_character(&EnumRequest::new(*spec, ic, w.clone(), qmax)),
                    Source::Formula => char_a(spec, &ic, w, qmax).expect("valid variant"),
                })
                .clone()
        };
        let mut res = CaseResult::default();
        for rel in a_relations(spec, alpha, qmax, form, &mut chi) {
            res.compare(alpha, &rel.name, &rel.lhs, &rel.rhs);
        }
        res
    });
    let name = match source {
        Source::Oracle => "a-recurrence-oracle",
        Source::Formula => "a-recurrence-formula",
    };
    Report::collect(name, results)
}

/// Closed forms against the enumerator at every chain weight with
/// coordinates `<= bound`: all `LambdaK`, all `IJ` and `Zero`.
pub fn verify_formulas_a(spec: &AlgebraSpec, bound: i64, qmax: usize) -> Report {
    let (l, m) = (spec.rank(), spec.m());
    let mut ics: Vec<ICVariant> = (0..=l).map(ICVariant::LambdaK).collect();
    for i in 1..=m {
        for j in m..=l {
            ics.push(ICVariant::IJ { i, j });
        }
    }
    ics.push(ICVariant::Zero);
    let grid: Vec<Weight> = weight_grid(l, bound)
        .into_iter()
        .filter(|w| realizable(spec, w))
        .collect();
    let results = par_cases(&grid, |n| {
        let mut res = CaseResult::default();
        for ic in &ics {
            let want = enumerate_character(&EnumRequest::new(*spec, *ic, n.clone(), qmax));
            match char_a(spec, ic, n, qmax) {
                Ok(got) => res.compare(n, &ic.to_string(), &got, &want),
                Err(e) => res.fail(n, e.to_string()),
            }
        }
        res
    });
    Report::collect("a-formula", results)
}

fn tuples(lens: &[i64], budget: i64) -> Vec<Vec<Partition>> {
    let Some((&first, rest)) = lens.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for p in Partition::all_bounded(first as usize, budget) {
        for mut tail in tuples(rest, budget - p.weight()) {
            tail.insert(0, p.clone());
            out.push(tail);
        }
    }
    out
}

/// The partition bijection for an edge weight: on every chain weight with
/// coordinates `<= bound`, every `k`, and all partition tuples of total
/// weight `<= max_parts`, checks injectivity, the roundtrip, the degree
/// formula and that the degree histogram matches the closed form.
pub fn verify_bijection(rank: usize, edge: Edge, bound: i64, max_parts: i64) -> Result<Report> {
    let spec = edge.spec(rank)?;
    let grid: Vec<Weight> = weight_grid(rank, bound)
        .into_iter()
        .filter(|w| realizable(&spec, w))
        .collect();
    let results = par_cases(&grid, |n| {
        let mut res = CaseResult::default();
        let lens = edge.block_lengths(n);
        for k in 0..=rank {
            let base = quadratic_form(n) + n.get1(k);
            let top = (base + max_parts) as usize;
            let mut hist = vec![0i64; top + 1];
            let mut seen = std::collections::HashSet::new();
            for lam in tuples(&lens, max_parts) {
                let size: i64 = lam.iter().map(Partition::weight).sum();
                let x = match bijection_forward(rank, edge, k, &lam) {
                    Ok(x) => x,
                    Err(e) => {
                        res.fail(n, format!("k={k} {lam:?}: {e}"));
                        continue;
                    }
                };
                res.check(n, x.degree() == size + base, || format!("k={k}: degree of {x}"));
                res.check(n, seen.insert(x.clone()), || format!("k={k}: {x} hit twice"));
                match bijection_backward(&x, rank, edge, k) {
                    Ok(back) => res.check(n, back == lam, || format!("k={k}: {x} maps back to {back:?}")),
                    Err(e) => res.fail(n, format!("k={k} {x}: {e}")),
                }
                hist[x.degree() as usize] += 1;
            }
            match char_edge(rank, edge, k, n, top) {
                Ok(f) => res.compare(n, &format!("histogram k={k}"), &QSeries::from_coeffs(top, &hist), &f),
                Err(e) => res.fail(n, e.to_string()),
            }
        }
        res
    });
    Ok(Report::collect("a-bijection", results))
}

/// The sets used to repair the product formula for `B_ij`: `C` holds
/// monomials of `B_ij` whose first color has `i_1 < i` and `j_1 > j`, and `D`
/// those of `B_1l` with the same first-color condition and `r_1 = 1`.
/// Returns their characters, computed by enumeration.
pub fn repair_sets(spec: &AlgebraSpec, i: usize, j: usize, n: &Weight, qmax: usize) -> (QSeries, QSeries) {
    let outside = |x: &Monomial| match x.factors().first() {
        Some(Factor {
            color: Color::A { i: i1, j: j1 },
            ..
        }) => *i1 < i && *j1 > j,
        _ => false,
    };
    let count = |ic: ICVariant, keep: &dyn Fn(&Monomial) -> bool| {
        let req = EnumRequest::new(*spec, ic, n.clone(), qmax);
        let mut c = vec![0i64; qmax + 1];
        for x in enumerate_basis(&req, qmax as i64).iter().filter(|x| keep(x)) {
            c[x.degree() as usize] += 1;
        }
        QSeries::from_coeffs(qmax, &c)
    };
    let c_set = count(ICVariant::IJ { i, j }, &|x| outside(x));
    let d_set = count(ICVariant::IJ { i: 1, j: spec.rank() }, &|x| {
        outside(x) && x.factors()[0].r == 1
    });
    (c_set, d_set)
}
