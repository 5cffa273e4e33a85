//! Adaptive Gauss-Kronrod quadrature (G7/K15 pair) in one and two dimensions.
//!
//! Infinite ends are compactified with `x = u / (1 - u²)` before the
//! adaptive bisection runs on the finite `u` interval.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
#[allow(unused_imports)]
// float math under no_std; shadowed by inherent methods when std links
use num_traits::Float;

use super::interval::Interval;
use crate::{Error, Result};

// Abscissae of the 15-point Kronrod rule; odd indices are the 7-point Gauss nodes.
// Digits beyond f64 precision are kept as published.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Nodes on [-1, 1] with Kronrod and Gauss weights (Gauss weight 0 for
/// Kronrod-only nodes).
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[j] = (-XGK[j], WGK[j], wg);
        out[14 - j] = (XGK[j], WGK[j], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            converged: true,
            evaluations: 0,
        }
    }
}

/// Adaptive integrator settings.
///
/// A result is accepted once the summed error estimate is at most
/// `max(abs_tol, rel_tol * |value|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    pub initial_segments: usize,
}

pub const DEFAULT_MAX_EVALS: usize = 1_000_000;

impl Quadrature {
    pub fn new(abs_tol: f64) -> Self {
        Quadrature {
            abs_tol,
            rel_tol: 0.0,
            max_evals: DEFAULT_MAX_EVALS,
            initial_segments: 4,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    pub fn with_initial_segments(mut self, n: usize) -> Self {
        self.initial_segments = n.max(1);
        self
    }

    fn check(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 || self.rel_tol > 0.0) || self.abs_tol < 0.0 || self.rel_tol < 0.0 {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: self.abs_tol,
            });
        }
        Ok(())
    }

    fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }

    pub fn integrate<F>(&self, f: F, domain: Interval) -> Result<QuadResult>
    where
        F: Fn(f64) -> Complex64,
    {
        self.check()?;
        if domain.is_empty() || domain.length() == 0.0 {
            return Ok(QuadResult::zero());
        }
        let map = Mapping::for_interval(&domain);
        let (a, b) = map.u_range();
        let g = |u: f64| {
            let (x, jac) = map.apply(u);
            let y = f(x);
            if !(y.re.is_finite() && y.im.is_finite()) {
                return Err(Error::NonFiniteSample { x, y: None });
            }
            // An exact zero must not meet an infinite Jacobian.
            Ok(if y == Complex64::new(0.0, 0.0) {
                y
            } else {
                y * jac
            })
        };
        adaptive_1d(&g, a, b, self)
    }

    /// Adaptive product rule on rectangles.
    pub fn integrate_2d<F>(&self, f: F, dom1: Interval, dom2: Interval) -> Result<QuadResult>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        self.check()?;
        if dom1.is_empty() || dom2.is_empty() || dom1.length() == 0.0 || dom2.length() == 0.0 {
            return Ok(QuadResult::zero());
        }
        let m1 = Mapping::for_interval(&dom1);
        let m2 = Mapping::for_interval(&dom2);
        let g = |u: f64, v: f64| {
            let (x, jx) = m1.apply(u);
            let (y, jy) = m2.apply(v);
            let z = f(x, y);
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFiniteSample { x, y: Some(y) });
            }
            Ok(if z == Complex64::new(0.0, 0.0) {
                z
            } else {
                z * (jx * jy)
            })
        };
        adaptive_2d(&g, m1.u_range(), m2.u_range(), self)
    }

    /// Iterated 1D integration: outer over `dom1`, inner over `dom2`.
    pub fn integrate_nested<F>(&self, f: F, dom1: Interval, dom2: Interval) -> Result<QuadResult>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        self.check()?;
        if dom1.is_empty() || dom2.is_empty() {
            return Ok(QuadResult::zero());
        }
        let scale = if dom1.is_bounded() {
            dom1.length().max(1.0)
        } else {
            1.0
        };
        let inner = Quadrature {
            abs_tol: 0.01 * self.abs_tol / scale,
            rel_tol: 0.01 * self.rel_tol,
            ..*self
        };
        let evals = core::cell::Cell::new(0usize);
        let failure = core::cell::Cell::new(None);
        let outer = self.integrate(
            |x| match inner.integrate(|y| f(x, y), dom2) {
                Ok(r) => {
                    evals.set(evals.get() + r.evaluations);
                    r.value
                }
                Err(e) => {
                    let first = failure.take();
                    failure.set(first.or(Some(e)));
                    Complex64::new(f64::NAN, 0.0)
                }
            },
            dom1,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let mut r = outer?;
        r.evaluations += evals.get();
        Ok(r)
    }
}

/// Integrate `f` over `domain` to absolute tolerance `tol` with the default budget.
pub fn integrate_1d<F>(f: F, domain: Interval, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    Quadrature::new(tol).integrate(f, domain)
}

pub fn integrate_2d<F>(f: F, dom1: Interval, dom2: Interval, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Complex64,
{
    Quadrature::new(tol).integrate_2d(f, dom1, dom2)
}

/// Change of variables from a finite `u` range onto the domain.
#[derive(Clone, Copy, Debug)]
enum Mapping {
    Finite { lo: f64, hi: f64 },
    Full,
    Upper { lo: f64 },
    Lower { hi: f64 },
}

impl Mapping {
    fn for_interval(d: &Interval) -> Self {
        match (d.lo().is_finite(), d.hi().is_finite()) {
            (true, true) => Mapping::Finite {
                lo: d.lo(),
                hi: d.hi(),
            },
            (false, false) => Mapping::Full,
            (true, false) => Mapping::Upper { lo: d.lo() },
            (false, true) => Mapping::Lower { hi: d.hi() },
        }
    }

    fn u_range(&self) -> (f64, f64) {
        match *self {
            Mapping::Finite { lo, hi } => (lo, hi),
            Mapping::Full => (-1.0, 1.0),
            Mapping::Upper { .. } | Mapping::Lower { .. } => (0.0, 1.0),
        }
    }

    #[inline]
    fn apply(&self, u: f64) -> (f64, f64) {
        let stretch = |u: f64| {
            let d = 1.0 - u * u;
            (u / d, (1.0 + u * u) / (d * d))
        };
        match *self {
            Mapping::Finite { .. } => (u, 1.0),
            Mapping::Full => stretch(u),
            Mapping::Upper { lo } => {
                let (s, j) = stretch(u);
                (lo + s, j)
            }
            Mapping::Lower { hi } => {
                let (s, j) = stretch(u);
                (hi - s, j)
            }
        }
    }
}

/// Error estimate from the embedded pair, with the usual scaling that
/// rewards a Kronrod/Gauss difference far below the integrand variation.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

struct Segment {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod_1d<G>(g: &G, lo: f64, hi: f64) -> Result<Segment>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut fv = [Complex64::new(0.0, 0.0); 15];
    let mut k = Complex64::new(0.0, 0.0);
    let mut gsum = Complex64::new(0.0, 0.0);
    let mut res_abs = 0.0;
    for (i, &(x, wk, wg)) in rule().iter().enumerate() {
        let y = g(c + h * x)?;
        fv[i] = y;
        k += y * wk;
        gsum += y * wg;
        res_abs += wk * y.norm();
    }
    let mean = k * 0.5;
    let res_asc: f64 = rule()
        .iter()
        .zip(fv.iter())
        .map(|(&(_, wk, _), y)| wk * (y - mean).norm())
        .sum();
    let ah = h.abs();
    Ok(Segment {
        lo,
        hi,
        value: k * h,
        error: rescale_error((k - gsum).norm() * ah, res_abs * ah, res_asc * ah),
    })
}

/// Pairwise sum in position order so totals do not depend on heap history.
fn ordered_sum(mut parts: Vec<(f64, f64, Complex64, f64)>) -> (Complex64, f64) {
    parts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let values: Vec<Complex64> = parts.iter().map(|p| p.2).collect();
    let errors: Vec<f64> = parts.iter().map(|p| p.3).collect();
    (pairwise(&values), pairwise(&errors))
}

pub(crate) fn pairwise<T>(xs: &[T]) -> T
where
    T: Copy + Default + core::ops::Add<Output = T>,
{
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n if n <= 8 => xs.iter().fold(T::default(), |a, &b| a + b),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise(l) + pairwise(r)
        }
    }
}

fn segment_parts(
    heap: &BinaryHeap<Segment>,
    frozen: &[Segment],
) -> Vec<(f64, f64, Complex64, f64)> {
    heap.iter()
        .chain(frozen)
        .map(|s| (s.lo, s.hi, s.value, s.error))
        .collect()
}

fn adaptive_1d<G>(g: &G, a: f64, b: f64, q: &Quadrature) -> Result<QuadResult>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let n0 = q.initial_segments.max(1);
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut evals = 0usize;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for i in 0..n0 {
        let lo = if i == 0 {
            a
        } else {
            a + (b - a) * i as f64 / n0 as f64
        };
        let hi = if i + 1 == n0 {
            b
        } else {
            a + (b - a) * (i + 1) as f64 / n0 as f64
        };
        let s = kronrod_1d(g, lo, hi)?;
        evals += 15;
        value += s.value;
        error += s.error;
        heap.push(s);
    }

    let converged = loop {
        if error <= q.target(value) {
            // The running sum drifts; confirm with the same summation as the result.
            let (v, e) = ordered_sum(segment_parts(&heap, &frozen));
            if e <= q.target(v) {
                break true;
            }
            error = e;
        }
        if evals + 30 > q.max_evals {
            break false;
        }
        let Some(worst) = heap.pop() else {
            break false;
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi)
            || (worst.hi - worst.lo) <= 1e-15 * worst.lo.abs().max(worst.hi.abs())
        {
            frozen.push(worst);
            continue;
        }
        let left = kronrod_1d(g, worst.lo, mid)?;
        let right = kronrod_1d(g, mid, worst.hi)?;
        evals += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    };

    let (value, abs_error) = ordered_sum(segment_parts(&heap, &frozen));
    let converged = converged && abs_error <= q.target(value);
    let result = QuadResult {
        value,
        abs_error,
        converged,
        evaluations: evals,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NonConvergence(result))
    }
}

struct Rect {
    x: (f64, f64),
    y: (f64, f64),
    value: Complex64,
    error: f64,
    err_x: f64,
    err_y: f64,
}

impl PartialEq for Rect {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Rect {}
impl PartialOrd for Rect {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Rect {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.x.0.total_cmp(&self.x.0))
            .then_with(|| other.y.0.total_cmp(&self.y.0))
    }
}

fn kronrod_2d<G>(g: &G, x: (f64, f64), y: (f64, f64)) -> Result<Rect>
where
    G: Fn(f64, f64) -> Result<Complex64>,
{
    let r = rule();
    let (cx, hx) = (0.5 * (x.0 + x.1), 0.5 * (x.1 - x.0));
    let (cy, hy) = (0.5 * (y.0 + y.1), 0.5 * (y.1 - y.0));
    let zero = Complex64::new(0.0, 0.0);
    let mut fv = [[zero; 15]; 15];
    let (mut kk, mut gk, mut kg) = (zero, zero, zero);
    let mut res_abs = 0.0;
    for (i, &(xi, wki, wgi)) in r.iter().enumerate() {
        let px = cx + hx * xi;
        for (j, &(yj, wkj, wgj)) in r.iter().enumerate() {
            let v = g(px, cy + hy * yj)?;
            fv[i][j] = v;
            kk += v * (wki * wkj);
            gk += v * (wgi * wkj);
            kg += v * (wki * wgj);
            res_abs += wki * wkj * v.norm();
        }
    }
    let mean = kk * 0.25;
    let mut res_asc = 0.0;
    for (i, &(_, wki, _)) in r.iter().enumerate() {
        for (j, &(_, wkj, _)) in r.iter().enumerate() {
            res_asc += wki * wkj * (fv[i][j] - mean).norm();
        }
    }
    let area = (hx * hy).abs();
    let err_x = rescale_error((kk - gk).norm() * area, res_abs * area, res_asc * area);
    let err_y = rescale_error((kk - kg).norm() * area, res_abs * area, res_asc * area);
    Ok(Rect {
        x,
        y,
        value: kk * (hx * hy),
        error: err_x + err_y,
        err_x,
        err_y,
    })
}

fn rect_sum(heap: &BinaryHeap<Rect>, frozen: &[Rect]) -> (Complex64, f64) {
    let mut parts: Vec<&Rect> = heap.iter().chain(frozen).collect();
    parts.sort_by(|a, b| a.x.0.total_cmp(&b.x.0).then(a.y.0.total_cmp(&b.y.0)));
    let values: Vec<Complex64> = parts.iter().map(|r| r.value).collect();
    let errors: Vec<f64> = parts.iter().map(|r| r.error).collect();
    (pairwise(&values), pairwise(&errors))
}

fn adaptive_2d<G>(g: &G, xr: (f64, f64), yr: (f64, f64), q: &Quadrature) -> Result<QuadResult>
where
    G: Fn(f64, f64) -> Result<Complex64>,
{
    const EVALS: usize = 225;
    let n0 = q.initial_segments.max(1);
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Rect> = Vec::new();
    let mut evals = 0usize;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let cut = |r: (f64, f64), i: usize, n: usize| -> (f64, f64) {
        let lo = if i == 0 {
            r.0
        } else {
            r.0 + (r.1 - r.0) * i as f64 / n as f64
        };
        let hi = if i + 1 == n {
            r.1
        } else {
            r.0 + (r.1 - r.0) * (i + 1) as f64 / n as f64
        };
        (lo, hi)
    };
    let n_side = if n0 >= 4 { 2 } else { 1 };
    for i in 0..n_side {
        for j in 0..n_side {
            let rect = kronrod_2d(g, cut(xr, i, n_side), cut(yr, j, n_side))?;
            evals += EVALS;
            value += rect.value;
            error += rect.error;
            heap.push(rect);
        }
    }

    let converged = loop {
        if error <= q.target(value) {
            let (v, e) = rect_sum(&heap, &frozen);
            if e <= q.target(v) {
                break true;
            }
            error = e;
        }
        if evals + 2 * EVALS > q.max_evals {
            break false;
        }
        let Some(worst) = heap.pop() else {
            break false;
        };
        let split_x = worst.err_x >= worst.err_y;
        let (lo, hi) = if split_x { worst.x } else { worst.y };
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) || (hi - lo) <= 1e-15 * lo.abs().max(hi.abs()) {
            frozen.push(worst);
            continue;
        }
        let (a, b) = if split_x {
            (
                kronrod_2d(g, (lo, mid), worst.y)?,
                kronrod_2d(g, (mid, hi), worst.y)?,
            )
        } else {
            (
                kronrod_2d(g, worst.x, (lo, mid))?,
                kronrod_2d(g, worst.x, (mid, hi))?,
            )
        };
        evals += 2 * EVALS;
        value += a.value + b.value - worst.value;
        error += a.error + b.error - worst.error;
        heap.push(a);
        heap.push(b);
    };

    let (value, abs_error) = rect_sum(&heap, &frozen);
    let converged = converged && abs_error <= q.target(value);
    let result = QuadResult {
        value,
        abs_error,
        converged,
        evaluations: evals,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NonConvergence(result))
    }
}
