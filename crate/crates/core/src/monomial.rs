//! Monomials `x_{g_n}(-r_n) ... x_{g_1}(-r_1)` in the color variables, with
//! the difference and initial conditions and the exponent transforms.
//!
//! Factors are stored with index `0` holding `x_{g_1}(-r_1)`, the rightmost
//! (largest) variable. A variable `x_g(-r)` is smaller than `x_h(-s)` when
//! `r > s`, or `r = s` and `g < h`; monomials are written with variables in
//! ascending order from left to right, so `r_1 <= r_2 <= ... <= r_n`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colors::{color_weight, energy, theta, AlgebraSpec, Color, Family, Weight};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub color: Color,
    pub r: i64,
}

impl Factor {
    pub fn new(color: Color, r: i64) -> Self {
        Factor { color, r }
    }

    /// Position in the variable order, as a key that sorts factor `1` first.
    fn storage_key(&self) -> (i64, std::cmp::Reverse<Color>) {
        (self.r, std::cmp::Reverse(self.color))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(-{})", self.color, self.r)
    }
}

impl FromStr for Factor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad factor {s:?}"));
        let open = s.rfind("(-").ok_or_else(bad)?;
        let color = s[..open].parse()?;
        let r = s[open + 2..]
            .strip_suffix(')')
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        Ok(Factor { color, r })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    spec: AlgebraSpec,
    factors: Vec<Factor>,
    transient: bool,
}

impl Monomial {
    pub fn empty(spec: AlgebraSpec) -> Self {
        Monomial {
            spec,
            factors: Vec::new(),
            transient: false,
        }
    }

    /// Builds a monomial from factors in any order; they are sorted into the
    /// canonical order. Colors must be valid non-tilde colors and `r >= 1`.
    pub fn new(spec: AlgebraSpec, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            spec.validate_color(f.color)?;
            if f.color.is_tilde() {
                return Err(Error::ColorOutOfRange {
                    color: f.color,
                    algebra: spec.to_string(),
                });
            }
            if f.r < 1 {
                return Err(Error::ExponentUnderflow(f.r));
            }
        }
        Ok(Self::from_sorted_unchecked(spec, sorted(factors), false))
    }

    /// Monomial for intermediate states of the split/merge procedure: tilde
    /// colors and exponents `r >= 0` are allowed.
    pub fn transient(spec: AlgebraSpec, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            spec.validate_color(f.color)?;
            if f.r < 0 {
                return Err(Error::ExponentUnderflow(f.r));
            }
        }
        Ok(Self::from_sorted_unchecked(spec, sorted(factors), true))
    }

    /// Factors given left to right, exactly as written (`g_n` first). No
    /// re-sorting is done.
    pub fn from_written(spec: AlgebraSpec, written: &[Factor]) -> Result<Self> {
        let factors: Vec<Factor> = written.iter().rev().copied().collect();
        let m = Self::new(spec, factors.clone())?;
        if m.factors != factors {
            return Err(Error::Parse("factors are not in ascending variable order".into()));
        }
        Ok(m)
    }

    pub(crate) fn from_sorted_unchecked(spec: AlgebraSpec, factors: Vec<Factor>, transient: bool) -> Self {
        Monomial {
            spec,
            factors,
            transient,
        }
    }

    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    /// Factors with index `t - 1` holding `x_{g_t}(-r_t)`.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_transient(&self) -> bool {
        self.transient
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|f| f.r).sum()
    }

    pub fn weight(&self) -> Weight {
        let mut w = Weight::zero(self.spec.rank());
        for f in &self.factors {
            let cw = color_weight(&self.spec, f.color).expect("non-tilde color");
            w = &w + &cw;
        }
        w
    }

    pub fn is_sorted(&self) -> bool {
        self.factors.windows(2).all(|p| p[0].storage_key() < p[1].storage_key())
    }

    /// Difference conditions: `r_{t+1} - r_t >= E(g_{t+1}, g_t)` for all `t`.
    pub fn satisfies_dc(&self) -> bool {
        self.factors
            .windows(2)
            .all(|p| p[1].r - p[0].r >= energy(&self.spec, p[1].color, p[0].color))
    }

    pub fn satisfies_ic(&self, v: &ICVariant) -> Result<bool> {
        v.check(&self.spec)?;
        Ok(match self.factors.first() {
            None => true,
            Some(f) if f.r >= 2 => true,
            Some(f) => v.allows_at_one(&self.spec, f.color),
        })
    }

    /// `x^{+s}`: every exponent `r_t` becomes `r_t - s` (negative `s` raises
    /// them). Non-transient results must keep `r >= 1`.
    pub fn shift(&self, s: i64) -> Result<Monomial> {
        self.map_exponents(|_, r| r - s)
    }

    /// `x^{+staircase}` subtracts `t - 1` from `r_t`; `x^{-staircase}` adds
    /// it. The factor order is kept as is.
    pub fn staircase(&self, direction: Direction) -> Result<Monomial> {
        let sign = match direction {
            Direction::Plus => -1,
            Direction::Minus => 1,
        };
        self.map_exponents(|t, r| r + sign * t as i64)
    }

    /// Adds `lambda_t` to `r_t`.
    pub fn apply_partition(&self, lambda: &Partition) -> Result<Monomial> {
        if lambda.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: lambda.len(),
            });
        }
        self.map_exponents(|t, r| r + lambda.parts()[t])
    }

    pub fn path(&self) -> Path {
        Path {
            colors: self.factors.iter().map(|f| f.color).collect(),
        }
    }

    /// Same monomial with the transient flag set, so later transforms may
    /// take exponents down to zero.
    pub fn into_transient(mut self) -> Monomial {
        self.transient = true;
        self
    }

    /// Clears the transient flag after checking the monomial is an ordinary
    /// one again.
    pub fn into_regular(self) -> Result<Monomial> {
        Monomial::new(self.spec, self.factors)
    }

    fn map_exponents(&self, f: impl Fn(usize, i64) -> i64) -> Result<Monomial> {
        let floor = if self.transient { 0 } else { 1 };
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(t, x)| {
                let r = f(t, x.r);
                if r < floor {
                    Err(Error::ExponentUnderflow(r))
                } else {
                    Ok(Factor::new(x.color, r))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial {
            spec: self.spec,
            factors,
            transient: self.transient,
        })
    }
}

pub(crate) fn sorted(mut factors: Vec<Factor>) -> Vec<Factor> {
    factors.sort_by_key(Factor::storage_key);
    factors
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.factors.iter().map(|f| (f.r, f.color));
        let b = other.factors.iter().map(|f| (f.r, f.color));
        a.cmp(b)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().rev().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Monomial {
    /// Parses the text form written left to right, e.g. `b2(-3) u4(-1)`;
    /// `1` is the empty monomial.
    pub fn parse(spec: AlgebraSpec, s: &str) -> Result<Monomial> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Monomial::empty(spec));
        }
        let written = s.split_whitespace().map(str::parse).collect::<Result<Vec<Factor>>>()?;
        Monomial::from_written(spec, &written)
    }
}

impl Serialize for Monomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let written: Vec<Factor> = self.factors.iter().rev().copied().collect();
        written.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

/// The seven restricted first-color sets used in the D4 decomposition. The
/// `Second*` sets live over `{b3, u3}`, the `Prime*` sets over
/// `{b2, b4, u4, u2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RestrictedSet {
    SecondZero,
    SecondB3,
    PrimeZero,
    PrimeB2,
    PrimeU4B2,
    PrimeB4B2,
    PrimeU4B4B2,
}

impl RestrictedSet {
    pub const ALL: [RestrictedSet; 7] = [
        RestrictedSet::SecondZero,
        RestrictedSet::SecondB3,
        RestrictedSet::PrimeZero,
        RestrictedSet::PrimeB2,
        RestrictedSet::PrimeU4B2,
        RestrictedSet::PrimeB4B2,
        RestrictedSet::PrimeU4B4B2,
    ];

    pub fn is_prime(&self) -> bool {
        !matches!(self, RestrictedSet::SecondZero | RestrictedSet::SecondB3)
    }

    /// Colors the monomials may use.
    pub fn colors(&self) -> Vec<Color> {
        if self.is_prime() {
            gamma_prime()
        } else {
            gamma_second()
        }
    }

    /// First colors admitted at `r_1 = 1`.
    pub fn first_colors(&self) -> Vec<Color> {
        use Color::*;
        match self {
            RestrictedSet::SecondZero | RestrictedSet::PrimeZero => vec![],
            RestrictedSet::SecondB3 => vec![Bar(3)],
            RestrictedSet::PrimeB2 => vec![Bar(2)],
            RestrictedSet::PrimeU4B2 => vec![Unbar(4), Bar(2)],
            RestrictedSet::PrimeB4B2 => vec![Bar(4), Bar(2)],
            RestrictedSet::PrimeU4B4B2 => vec![Unbar(4), Bar(4), Bar(2)],
        }
    }

    fn name(&self) -> &'static str {
        match self {
            RestrictedSet::SecondZero => "second0",
            RestrictedSet::SecondB3 => "second-b3",
            RestrictedSet::PrimeZero => "prime0",
            RestrictedSet::PrimeB2 => "prime-b2",
            RestrictedSet::PrimeU4B2 => "prime-u4-b2",
            RestrictedSet::PrimeB4B2 => "prime-b4-b2",
            RestrictedSet::PrimeU4B4B2 => "prime-u4-b4-b2",
        }
    }
}

impl fmt::Display for RestrictedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RestrictedSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RestrictedSet::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown restricted set {s:?}")))
    }
}

/// `{b2, b4, u4, u2}` in D4.
pub fn gamma_prime() -> Vec<Color> {
    vec![Color::Bar(2), Color::Bar(4), Color::Unbar(4), Color::Unbar(2)]
}

/// `{b3, u3}` in D4.
pub fn gamma_second() -> Vec<Color> {
    vec![Color::Bar(3), Color::Unbar(3)]
}

/// Which initial condition constrains the first factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ICVariant {
    /// Initial conditions of the basic module `L(Lambda_k)`.
    LambdaK(usize),
    /// Type A: `r_1 >= 2`, or `r_1 = 1` with `i_1 >= i` and `j_1 <= j`.
    IJ {
        i: usize,
        j: usize,
    },
    /// `r_1 >= 2`.
    Zero,
    /// Type D: `r_1 >= 2`, or `r_1 = 1` with `g_1 <= g` (for `g = u_l`:
    /// `g_1` in `{b2, ..., b_{l-1}, u_l}`).
    Gamma(Color),
    Restricted(RestrictedSet),
}

impl ICVariant {
    pub fn check(&self, spec: &AlgebraSpec) -> Result<()> {
        let l = spec.rank();
        let ok = match (spec.family(), *self) {
            (Family::A, ICVariant::LambdaK(k)) => k <= l,
            (Family::D, ICVariant::LambdaK(k)) => k == 0 || k == 1 || k == l - 1 || k == l,
            (Family::A, ICVariant::IJ { i, j }) => 1 <= i && i <= spec.m() && spec.m() <= j && j <= l,
            (_, ICVariant::Zero) => true,
            (Family::D, ICVariant::Gamma(c)) => !c.is_tilde() && spec.validate_color(c).is_ok(),
            (Family::D, ICVariant::Restricted(_)) => l == 4,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatibleVariant(format!("{self} for {spec}")))
        }
    }

    /// Whether a first factor of color `c` may have `r_1 = 1`.
    pub fn allows_at_one(&self, spec: &AlgebraSpec, c: Color) -> bool {
        let l = spec.rank();
        match (*self, c) {
            (ICVariant::Zero, _) => false,
            (ICVariant::LambdaK(0), _) => true,
            (ICVariant::LambdaK(k), Color::A { i, j }) => {
                if k <= spec.m() {
                    i > k
                } else {
                    j < k
                }
            }
            (ICVariant::LambdaK(1), _) => false,
            (ICVariant::LambdaK(k), _) if k == l => matches!(c, Color::Bar(_)),
            (ICVariant::LambdaK(_), _) => ICVariant::Gamma(Color::Unbar(l)).allows_at_one(spec, c),
            (ICVariant::IJ { i, j }, Color::A { i: i1, j: j1 }) => i1 >= i && j1 <= j,
            (ICVariant::Gamma(Color::Unbar(g)), _) if g == l => {
                matches!(c, Color::Bar(b) if b < l) || c == Color::Unbar(l)
            }
            (ICVariant::Gamma(g), _) => c <= g,
            (ICVariant::Restricted(set), _) => set.first_colors().contains(&c),
            _ => false,
        }
    }

    /// The equivalent `IJ`, `Zero` or `Gamma` form of a `LambdaK` variant.
    pub fn canonical(&self, spec: &AlgebraSpec) -> ICVariant {
        let l = spec.rank();
        match (spec.family(), *self) {
            (Family::A, ICVariant::LambdaK(k)) => {
                let m = spec.m();
                if k == 0 {
                    ICVariant::IJ { i: 1, j: l }
                } else if k == m {
                    ICVariant::Zero
                } else if k < m {
                    ICVariant::IJ { i: k + 1, j: l }
                } else {
                    ICVariant::IJ { i: 1, j: k - 1 }
                }
            }
            (Family::D, ICVariant::LambdaK(k)) => {
                if k == 0 {
                    ICVariant::Gamma(Color::Unbar(2))
                } else if k == 1 {
                    ICVariant::Zero
                } else if k == l {
                    ICVariant::Gamma(Color::Bar(l))
                } else {
                    ICVariant::Gamma(Color::Unbar(l))
                }
            }
            _ => *self,
        }
    }
}

impl fmt::Display for ICVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ICVariant::LambdaK(k) => write!(f, "lambda:{k}"),
            ICVariant::IJ { i, j } => write!(f, "ij:{i},{j}"),
            ICVariant::Zero => write!(f, "zero"),
            ICVariant::Gamma(c) => write!(f, "gamma:{c}"),
            ICVariant::Restricted(r) => write!(f, "restricted:{r}"),
        }
    }
}

impl FromStr for ICVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad initial condition {s:?}"));
        let s = s.trim();
        if s == "zero" || s == "0" {
            return Ok(ICVariant::Zero);
        }
        let (tag, arg) = s.split_once(':').ok_or_else(bad)?;
        match tag {
            "lambda" | "k" => Ok(ICVariant::LambdaK(arg.parse().map_err(|_| bad())?)),
            "ij" => {
                let (i, j) = arg.split_once(',').ok_or_else(bad)?;
                Ok(ICVariant::IJ {
                    i: i.trim().parse().map_err(|_| bad())?,
                    j: j.trim().parse().map_err(|_| bad())?,
                })
            }
            "gamma" => {
                if arg == "0" || arg == "zero" {
                    Ok(ICVariant::Zero)
                } else {
                    Ok(ICVariant::Gamma(arg.parse()?))
                }
            }
            "restricted" => Ok(ICVariant::Restricted(arg.parse()?)),
            _ => Err(bad()),
        }
    }
}

/// A partition `lambda_1 <= ... <= lambda_n` with nonnegative parts (zeros
/// allowed, so the length is fixed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<i64>);

impl Partition {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.iter().any(|&p| p < 0) || parts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Parse(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn zeros(n: usize) -> Self {
        Partition(vec![0; n])
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    /// All partitions with exactly `len` (possibly zero) parts and weight
    /// at most `max_weight`, in lexicographic order.
    pub fn all_bounded(len: usize, max_weight: i64) -> Vec<Partition> {
        fn go(len: usize, min: i64, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
            if cur.len() == len {
                out.push(Partition(cur.clone()));
                return;
            }
            let left = (len - cur.len()) as i64;
            let mut p = min;
            while p * left <= budget {
                cur.push(p);
                go(len, p, budget - p, cur, out);
                cur.pop();
                p += 1;
            }
        }
        let mut out = Vec::new();
        go(len, 0, max_weight, &mut Vec::new(), &mut out);
        out
    }
}

/// A color sequence; index `0` holds `g_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub colors: Vec<Color>,
}

impl Path {
    pub fn new(colors: Vec<Color>) -> Self {
        Path { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn weight(&self, spec: &AlgebraSpec) -> Result<Weight> {
        let mut w = Weight::zero(spec.rank());
        for &c in &self.colors {
            w = &w + &color_weight(spec, c)?;
        }
        Ok(w)
    }
}

/// How the first exponent of a minimal monomial is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartRule {
    /// `r_1 = 1`.
    Unit,
    /// `r_1 = 1 + theta(k - i_1)` (type A).
    ThetaRow(usize),
    /// `r_1 = 1 + theta(j_1 - k)` (type A).
    ThetaCol(usize),
    /// `r_1 = 1 + max(theta(i - 1 - i_1), theta(j_1 - j - 1))` (type A).
    MaxIJ(usize, usize),
}

impl StartRule {
    fn first_exponent(&self, first: Color) -> i64 {
        let (i1, j1) = match first {
            Color::A { i, j } => (i as i64, j as i64),
            _ => (0, 0),
        };
        match *self {
            StartRule::Unit => 1,
            StartRule::ThetaRow(k) => 1 + theta(k as i64 - i1),
            StartRule::ThetaCol(k) => 1 + theta(j1 - k as i64),
            StartRule::MaxIJ(i, j) => 1 + theta(i as i64 - 1 - i1).max(theta(j1 - j as i64 - 1)),
        }
    }
}

/// The least DC-admissible monomial with path `p`: `r_1` from the start
/// rule and `r_t = r_{t-1} + E(g_t, g_{t-1})`.
pub fn minimal_monomial(spec: &AlgebraSpec, p: &Path, start: StartRule) -> Result<Monomial> {
    let first = *p.colors.first().ok_or(Error::EmptyPath)?;
    if spec.family() == Family::D && start != StartRule::Unit {
        return Err(Error::IncompatibleVariant(format!("{start:?} for {spec}")));
    }
    for &c in &p.colors {
        spec.validate_color(c)?;
    }
    let mut factors = Vec::with_capacity(p.len());
    let mut r = start.first_exponent(first);
    factors.push(Factor::new(first, r));
    for w in p.colors.windows(2) {
        r += energy(spec, w[1], w[0]);
        factors.push(Factor::new(w[1], r));
    }
    let m = Monomial::from_sorted_unchecked(*spec, factors, false);
    if !m.is_sorted() {
        return Err(Error::NotAdmissible(format!(
            "path {:?} has no admissible monomial",
            p.colors
        )));
    }
    Ok(m)
}
