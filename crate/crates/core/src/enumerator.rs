//! Brute-force enumeration of admissible monomials.
//!
//! This is the reference oracle for every closed formula in the crate, so it
//! uses nothing beyond the definitions: a depth-first search over factor
//! positions `t = 1..n`, picking `(g_t, r_t)` with
//! `r_t >= r_{t-1} + E(g_t, g_{t-1})` and the initial condition on `r_1`.

use num_bigint::BigInt;

use crate::colors::{color_weight, energy, realizable, AlgebraSpec, Color, Weight};
use crate::monomial::{Factor, ICVariant, Monomial};
use crate::qseries::QSeries;

#[derive(Clone, Debug)]
pub struct EnumRequest {
    pub spec: AlgebraSpec,
    pub ic: ICVariant,
    pub weight: Weight,
    pub qmax: usize,
    /// Restrict the colors monomials may use; `None` means all of them.
    pub color_subset: Option<Vec<Color>>,
}

impl EnumRequest {
    pub fn new(spec: AlgebraSpec, ic: ICVariant, weight: Weight, qmax: usize) -> Self {
        EnumRequest {
            spec,
            ic,
            weight,
            qmax,
            color_subset: None,
        }
    }

    pub fn with_colors(mut self, colors: Vec<Color>) -> Self {
        self.color_subset = Some(colors);
        self
    }
}

struct Search<'a> {
    spec: &'a AlgebraSpec,
    ic: ICVariant,
    colors: Vec<(Color, Weight)>,
    n: usize,
    dmax: i64,
}

impl Search<'_> {
    fn run(&self, target: &Weight, visit: &mut dyn FnMut(&[Factor])) {
        let mut stack = Vec::with_capacity(self.n);
        self.step(target, 0, &mut stack, visit);
    }

    fn step(&self, rem: &Weight, deg: i64, stack: &mut Vec<Factor>, visit: &mut dyn FnMut(&[Factor])) {
        let t = stack.len();
        if t == self.n {
            if rem.is_zero() {
                visit(stack);
            }
            return;
        }
        let left = (self.n - t) as i64;
        for (c, cw) in &self.colors {
            let next = rem - cw;
            if next.as_slice().iter().any(|&x| x < 0) || !realizable(self.spec, &next) {
                continue;
            }
            let r_min = match stack.last() {
                None => {
                    if self.ic.allows_at_one(self.spec, *c) {
                        1
                    } else {
                        2
                    }
                }
                Some(prev) => prev.r + energy(self.spec, *c, prev.color),
            };
            // every later factor has exponent >= r
            let mut r = r_min;
            while deg + r * left <= self.dmax {
                stack.push(Factor::new(*c, r));
                self.step(&next, deg + r, stack, visit);
                stack.pop();
                r += 1;
            }
        }
    }
}

fn search<'a>(req: &'a EnumRequest, dmax: i64) -> Option<Search<'a>> {
    let spec = &req.spec;
    if spec.check_weight(&req.weight).is_err() || req.ic.check(spec).is_err() || !realizable(spec, &req.weight) {
        return None;
    }
    let colors = req
        .color_subset
        .clone()
        .unwrap_or_else(|| spec.colors())
        .into_iter()
        .filter_map(|c| color_weight(spec, c).ok().map(|w| (c, w)))
        .collect();
    Some(Search {
        spec,
        ic: req.ic,
        colors,
        n: spec.factor_count(&req.weight) as usize,
        dmax,
    })
}

/// Exact truncated character: the coefficient of `q^d` counts admissible
/// monomials of the requested weight and degree `d`.
pub fn enumerate_character(req: &EnumRequest) -> QSeries {
    let mut counts = vec![0u64; req.qmax + 1];
    if let Some(s) = search(req, req.qmax as i64) {
        s.run(&req.weight, &mut |fs| {
            let d: i64 = fs.iter().map(|f| f.r).sum();
            counts[d as usize] += 1;
        });
    }
    let big: Vec<BigInt> = counts.into_iter().map(BigInt::from).collect();
    QSeries::from_coeffs(req.qmax, &big)
}

/// All admissible monomials of degree at most `dmax`, sorted.
pub fn enumerate_basis(req: &EnumRequest, dmax: i64) -> Vec<Monomial> {
    let mut out = Vec::new();
    if let Some(s) = search(req, dmax) {
        s.run(&req.weight, &mut |fs| {
            out.push(Monomial::new(req.spec, fs.to_vec()).expect("search emits valid factors"));
        });
    }
    out.sort();
    out
}
