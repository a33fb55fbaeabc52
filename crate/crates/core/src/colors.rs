//! Colors of the gradation: the roots pairing to 1 against the fixed
//! minuscule weight, their simple-root expansions, the linear order, and the
//! energy function that drives the difference conditions.
//!
//! Type `A_l` uses `omega_m` and colors `(i,j)` with `1 <= i <= m <= j <= l`.
//! Type `D_l` uses `omega_1` and colors `b2..bl` (barred) and `u2..ul`
//! (unbarred). Tilde colors `t2` and `tl` only occur inside the D split/merge
//! procedure.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `theta(n) = 1` for `n >= 0`, else `0`.
pub fn theta(n: i64) -> i64 {
    if n >= 0 {
        1
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    family: Family,
    rank: usize,
    minuscule: usize,
}

impl AlgebraSpec {
    pub fn type_a(rank: usize, m: usize) -> Result<Self> {
        if rank == 0 || m == 0 || m > rank {
            return Err(Error::InvalidAlgebra(format!(
                "A_{rank} with omega_{m} needs 1 <= m <= rank"
            )));
        }
        Ok(AlgebraSpec {
            family: Family::A,
            rank,
            minuscule: m,
        })
    }

    /// Type `D_l`, always with `omega = omega_1`.
    pub fn type_d(rank: usize) -> Result<Self> {
        if rank < 4 {
            return Err(Error::InvalidAlgebra(format!("D_{rank} needs rank >= 4")));
        }
        Ok(AlgebraSpec {
            family: Family::D,
            rank,
            minuscule: 1,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn m(&self) -> usize {
        self.minuscule
    }

    /// Index (0-based) of the weight coordinate that counts factors: every
    /// color has coefficient 1 there.
    pub fn count_coord(&self) -> usize {
        self.minuscule - 1
    }

    /// All (non-tilde) colors in ascending order.
    pub fn colors(&self) -> Vec<Color> {
        let l = self.rank;
        let mut cs = match self.family {
            Family::A => {
                let m = self.minuscule;
                (1..=m)
                    .flat_map(|i| (m..=l).map(move |j| Color::A { i, j }))
                    .collect::<Vec<_>>()
            }
            Family::D => (2..=l).map(Color::Bar).chain((2..=l).map(Color::Unbar)).collect(),
        };
        cs.sort();
        cs
    }

    pub fn validate_color(&self, c: Color) -> Result<()> {
        let l = self.rank;
        let ok = match (self.family, c) {
            (Family::A, Color::A { i, j }) => 1 <= i && i <= self.minuscule && self.minuscule <= j && j <= l,
            (Family::D, Color::Bar(i) | Color::Unbar(i)) => (2..=l).contains(&i),
            (Family::D, Color::Tilde(i)) => i == 2 || i == l,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ColorOutOfRange {
                color: c,
                algebra: self.to_string(),
            })
        }
    }

    pub fn check_weight(&self, n: &Weight) -> Result<()> {
        if n.len() != self.rank {
            return Err(Error::WeightLength {
                expected: self.rank,
                got: n.len(),
            });
        }
        Ok(())
    }

    /// Number of factors of any monomial of weight `n`.
    pub fn factor_count(&self, n: &Weight) -> i64 {
        n[self.count_coord()]
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A_{} (omega_{})", self.rank, self.minuscule),
            Family::D => write!(f, "D_{} (omega_1)", self.rank),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    /// `(ij) = alpha_i + ... + alpha_j` in type A.
    A { i: usize, j: usize },
    /// `alpha_1 + ... + alpha_{i-1}` in type D.
    Bar(usize),
    /// The partner of `Bar(i)` with `Bar(i) + Unbar(i) = 0bar`.
    Unbar(usize),
    /// Split-procedure placeholder.
    Tilde(usize),
}

impl Color {
    pub fn is_tilde(&self) -> bool {
        matches!(self, Color::Tilde(_))
    }

    // Type D order: t2 > u2 > u3 > ... > ul > tl > bl > ... > b2.
    fn key(&self) -> (u8, i64, i64) {
        match *self {
            Color::A { i, j } => (0, -(i as i64), j as i64),
            Color::Bar(i) => (1, 2 * i as i64, 0),
            Color::Tilde(2) => (1, 10_000, 0),
            Color::Tilde(_) => (1, 5_000, 0),
            Color::Unbar(i) => (1, 10_000 - 2 * i as i64, 0),
        }
    }
}

impl Ord for Color {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Color {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::A { i, j } => write!(f, "({i},{j})"),
            Color::Bar(i) => write!(f, "b{i}"),
            Color::Unbar(i) => write!(f, "u{i}"),
            Color::Tilde(i) => write!(f, "t{i}"),
        }
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad color {s:?}"));
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let i = a.trim().parse().map_err(|_| bad())?;
            let j = b.trim().parse().map_err(|_| bad())?;
            return Ok(Color::A { i, j });
        }
        let (tag, rest) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(k, _)| k));
        let idx: usize = rest.parse().map_err(|_| bad())?;
        match tag {
            "b" => Ok(Color::Bar(idx)),
            "u" => Ok(Color::Unbar(idx)),
            "t" => Ok(Color::Tilde(idx)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Color {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Color {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coefficients `(n_1, ..., n_l)` of a weight in the simple-root basis.
/// Entries may be negative for intermediate values such as `alpha - gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// `n_k` with the convention `n_0 = n_{l+1} = 0` (1-based `k`).
    pub fn get1(&self, k: usize) -> i64 {
        if k == 0 || k > self.0.len() {
            0
        } else {
            self.0[k - 1]
        }
    }

    pub fn scaled(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect())
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl From<&[i64]> for Weight {
    fn from(v: &[i64]) -> Self {
        Weight(v.to_vec())
    }
}

impl Index<usize> for Weight {
    type Output = i64;
    fn index(&self, k: usize) -> &i64 {
        &self.0[k]
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.len(), rhs.len(), "weight rank mismatch");
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad weight {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<i64>::deserialize(d).map(Weight)
    }
}

/// Simple-root expansion of a color.
pub fn color_weight(spec: &AlgebraSpec, c: Color) -> Result<Weight> {
    spec.validate_color(c)?;
    let l = spec.rank();
    let mut n = vec![0i64; l];
    match c {
        Color::A { i, j } => n[i - 1..j].iter_mut().for_each(|x| *x = 1),
        Color::Bar(i) => n[..i - 1].iter_mut().for_each(|x| *x = 1),
        Color::Unbar(i) if i == l => {
            n[..l - 2].iter_mut().for_each(|x| *x = 1);
            n[l - 1] = 1;
        }
        Color::Unbar(i) => {
            n.iter_mut().for_each(|x| *x = 1);
            n[i - 1..l - 2].iter_mut().for_each(|x| *x = 2);
        }
        Color::Tilde(_) => {
            return Err(Error::ColorOutOfRange {
                color: c,
                algebra: spec.to_string(),
            })
        }
    }
    Ok(Weight(n))
}

/// The strict linear order on colors (extended to tilde colors in type D).
pub fn color_less(spec: &AlgebraSpec, a: Color, b: Color) -> bool {
    debug_assert!(spec.validate_color(a).is_ok() && spec.validate_color(b).is_ok());
    a < b
}

/// Energy `E(c', c)` of an ordered pair of non-tilde colors; `c'` is the
/// factor with the larger index (further left).
pub fn energy(spec: &AlgebraSpec, cprime: Color, c: Color) -> i64 {
    match (cprime, c) {
        (Color::A { i: ip, j: jp }, Color::A { i, j }) => theta(i as i64 - ip as i64) + theta(jp as i64 - j as i64),
        (Color::Bar(2), Color::Unbar(2)) => 0,
        (Color::Unbar(a), Color::Bar(b)) if a == spec.rank() && b == spec.rank() => 1,
        (a @ (Color::Bar(_) | Color::Unbar(_)), b @ (Color::Bar(_) | Color::Unbar(_))) => {
            if a < b {
                1
            } else {
                2
            }
        }
        _ => panic!("energy undefined for ({cprime}, {c}) in {spec}"),
    }
}

/// Coordinates of a type D weight in the basis `b2, ..., bl, 0bar` where
/// `0bar = u_j + b_j` for every `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DCoords {
    /// `m_{bj}` for `j = 2..=l`, stored at index `j - 2`.
    pub bar: Vec<i64>,
    pub zero: i64,
}

impl DCoords {
    pub fn from_weight(n: &Weight) -> Self {
        let l = n.len();
        let mut bar = vec![0; l - 1];
        for j in 2..=l - 2 {
            bar[j - 2] = n.get1(j - 1) - n.get1(j);
        }
        bar[l - 3] = n.get1(l - 2) - n.get1(l - 1) - n.get1(l);
        bar[l - 2] = n.get1(l - 1) - n.get1(l);
        DCoords { bar, zero: n.get1(l) }
    }

    pub fn m_bar(&self, j: usize) -> i64 {
        self.bar[j - 2]
    }

    /// `-theta(-m) * m`: how many unbarred `u_j` a decomposition needs at least.
    pub fn deficit(&self, j: usize) -> i64 {
        (-self.m_bar(j)).max(0)
    }

    pub fn total_deficit(&self) -> i64 {
        (2..self.bar.len() + 2).map(|j| self.deficit(j)).sum()
    }
}

/// The D4 coordinates `m_{b2}, m_{b3}, m_{b4}, m_{0bar}` together with the
/// minimal unbarred counts `m'` (over `b2, b4`) and `m''` (over `b3`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MCoords {
    pub m2: i64,
    pub m3: i64,
    pub m4: i64,
    pub m0: i64,
    pub mprime: i64,
    pub mdblprime: i64,
}

pub fn weight_to_mcoords(n: &Weight) -> Result<MCoords> {
    if n.len() != 4 {
        return Err(Error::WeightLength {
            expected: 4,
            got: n.len(),
        });
    }
    let d = DCoords::from_weight(n);
    Ok(MCoords {
        m2: d.m_bar(2),
        m3: d.m_bar(3),
        m4: d.m_bar(4),
        m0: d.zero,
        mprime: d.deficit(2) + d.deficit(4),
        mdblprime: d.deficit(3),
    })
}

/// `0bar = 2 alpha_1 + ... + 2 alpha_{l-2} + alpha_{l-1} + alpha_l`.
pub fn d_zero_bar(rank: usize) -> Weight {
    let mut n = vec![2i64; rank];
    n[rank - 2] = 1;
    n[rank - 1] = 1;
    Weight(n)
}

/// The D4 splitting `alpha = alpha_i' + alpha_i''` with
/// `alpha_i' = m_{b2} b2 + m_{b4} b4 + (i + m') 0bar`.
pub fn alpha_split(n: &Weight, i: i64) -> Result<(Weight, Weight)> {
    let mc = weight_to_mcoords(n)?;
    let max = mc.m0 - mc.mprime - mc.mdblprime;
    if i < 0 || i > max {
        return Err(Error::IndexOutOfRange { index: i, max });
    }
    let spec = AlgebraSpec::type_d(4)?;
    let b2 = color_weight(&spec, Color::Bar(2))?;
    let b4 = color_weight(&spec, Color::Bar(4))?;
    let first = &(&b2.scaled(mc.m2) + &b4.scaled(mc.m4)) + &d_zero_bar(4).scaled(i + mc.mprime);
    let second = n - &first;
    Ok((first, second))
}

/// The eight D4 inequalities characterising weights that are nonnegative
/// combinations of colors.
pub fn d4_inequalities(n: &Weight) -> bool {
    let (n1, n2, n3, n4) = (n[0], n[1], n[2], n[3]);
    n1 - n2 + n4 >= 0
        && n1 - n2 + n3 >= 0
        && n2 - n3 >= 0
        && n1 - n3 >= 0
        && n3 >= 0
        && n2 - n4 >= 0
        && n4 >= 0
        && n1 - n4 >= 0
}

/// Whether `n` is a nonnegative integer combination of colors.
pub fn realizable(spec: &AlgebraSpec, n: &Weight) -> bool {
    if n.len() != spec.rank() {
        return false;
    }
    match spec.family() {
        Family::A => {
            let m = spec.m();
            let s = n.as_slice();
            s[0] >= 0
                && s[..m].windows(2).all(|w| w[0] <= w[1])
                && s[m - 1..].windows(2).all(|w| w[0] >= w[1])
                && s[spec.rank() - 1] >= 0
        }
        Family::D => {
            let d = DCoords::from_weight(n);
            d.zero >= d.total_deficit()
        }
    }
}

/// Which block of the D split a color belongs to: `2` for
/// `{b2, bl, ul, u2}` (and the tilde colors), `j` for `{bj, uj}` otherwise.
pub fn d_block(rank: usize, c: Color) -> usize {
    match c {
        Color::Tilde(_) => 2,
        Color::Bar(j) | Color::Unbar(j) if j == 2 || j == rank => 2,
        Color::Bar(j) | Color::Unbar(j) => j,
        Color::A { .. } => panic!("type A color {c} has no D block"),
    }
}
