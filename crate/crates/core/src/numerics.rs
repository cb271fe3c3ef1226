//! Special functions, bracketed root finding and panel quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() <= 1e-14
}

/// Gamma function for real arguments; errors on the poles.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// `1/Γ(x)`, which is entire: zero on the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        0.0
    } else {
        1.0 / statrs::function::gamma::gamma(x)
    }
}

/// Rising factorial `lam (lam+1) ... (lam+n-1)`.
pub fn pochhammer(lam: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (lam + j as f64))
}

/// Physicists' Hermite polynomial by upward recurrence.
pub fn hermite(order: u32, y: f64) -> f64 {
    let mut prev = 1.0;
    if order == 0 {
        return prev;
    }
    let mut cur = 2.0 * y;
    for m in 1..order {
        let next = 2.0 * y * cur - 2.0 * m as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_n^(p)(x)`.
pub fn laguerre(n: u32, p: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + p - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + p - x) * cur - (kf + p) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Kummer's function `M(a, b, x)` by its power series.
fn kummer_m(a: f64, b: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (a + kf) * x / ((b + kf) * (kf + 1.0));
        sum += term;
        if term == 0.0 || (term.abs() <= 1e-17 * sum.abs() && kf > a.abs()) {
            break;
        }
    }
    sum
}

/// Lower bound of the parameter range where [`kummer_u`] is validated.
pub const KUMMER_A_MIN: f64 = -40.0;
/// Upper bound of the parameter range where [`kummer_u`] is validated.
pub const KUMMER_A_MAX: f64 = 20.0;

/// Tricomi's confluent hypergeometric function `U(a, 1/2, x)` for `x > 0`.
///
/// Integer `a <= 0` uses the Laguerre polynomial. Otherwise small `x` goes
/// through the two Kummer `M` series, and `x >= 1` uses the Laplace integral
/// at a shifted parameter in `[1, 2)` followed by downward recurrence in `a`,
/// which is the stable direction for `U`.
pub fn kummer_u(a: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("kummer_u needs x > 0, got {x}")));
    }
    if !(KUMMER_A_MIN..=KUMMER_A_MAX).contains(&a) {
        return Err(Error::Domain(format!("kummer_u parameter a = {a} out of range")));
    }
    if a <= 0.0 && a == a.round() {
        let n = (-a) as u32;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let fact: f64 = (1..=n).map(f64::from).product();
        return Ok(sign * fact * laguerre(n, -0.5, x));
    }
    if x < 1.0 {
        let regular = SQRT_PI * recip_gamma(a + 0.5) * kummer_m(a, 0.5, x);
        let singular = -2.0 * SQRT_PI * recip_gamma(a) * x.sqrt() * kummer_m(a + 0.5, 1.5, x);
        return Ok(regular + singular);
    }
    let shift = if a >= 1.0 { 0 } else { (1.0 - a).ceil() as u32 };
    let top = a + shift as f64;
    let (mut upper, mut cur) = laplace_pair(top, x);
    for j in 0..shift {
        let an = top - j as f64;
        let lower = (2.0 * an - 0.5 + x) * cur - an * (an + 0.5) * upper;
        upper = cur;
        cur = lower;
    }
    Ok(cur)
}

/// `(U(a+1, 1/2, x), U(a, 1/2, x))` for `a >= 1`, `x >= 1` from the Laplace integral.
fn laplace_pair(a: f64, x: f64) -> (f64, f64) {
    // t = w^2 / x maps the integral onto a Gaussian-damped integrand in w.
    let (nodes, weights) = gauss_legendre(16);
    let mut edges: Vec<f64> = vec![0.0, 1e-4];
    while *edges.last().unwrap() < 1.0 {
        let next = (edges.last().unwrap() * 2.0).min(1.0);
        edges.push(next);
    }
    while *edges.last().unwrap() < 7.5 {
        let next = edges.last().unwrap() + 0.5;
        edges.push(next);
    }
    let mut int_a = 0.0;
    let mut int_a1 = 0.0;
    for win in edges.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for (t, wt) in nodes.iter().zip(&weights) {
            let w = mid + half * t;
            let w2 = w * w;
            let damp = 2.0 * w * (-w2).exp();
            let u = w2;
            let base = 1.0 + u / x;
            let common = damp * wt * half;
            int_a += common * u.powf(a - 1.0) * base.powf(-a - 0.5);
            int_a1 += common * u.powf(a) * base.powf(-a - 1.5);
        }
    }
    let ua = int_a * recip_gamma(a) * x.powf(-a);
    let ua1 = int_a1 * recip_gamma(a + 1.0) * x.powf(-a - 1.0);
    (ua1, ua)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn of(v: f64) -> Option<Sign> {
        if v > 0.0 {
            Some(Sign::Positive)
        } else if v < 0.0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo_sign: Sign,
    pub f_hi_sign: Sign,
}

impl RootBracket {
    /// Evaluates `f` at both ends and checks for a sign change.
    pub fn new(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Self> {
        let (flo, fhi) = (f(lo), f(hi));
        match (Sign::of(flo), Sign::of(fhi)) {
            (Some(a), Some(b)) if a != b && lo < hi => Ok(Self {
                lo,
                hi,
                f_lo_sign: a,
                f_hi_sign: b,
            }),
            _ => Err(Error::NoSignChange { lo, hi }),
        }
    }
}

/// Brent's method; every step is guarded so it never does worse than bisection.
///
/// An exact zero at either end of `[lo, hi]` is returned directly.
pub fn find_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || fb.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Solves on a prepared bracket.
pub fn find_root_in(f: impl Fn(f64) -> f64, bracket: RootBracket, tol: f64) -> Result<f64> {
    find_root(f, bracket.lo, bracket.hi, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    GaussLegendre,
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub panels: Vec<(f64, f64)>,
    pub points_per_panel: usize,
    pub scheme: Scheme,
}

impl QuadratureSpec {
    pub fn new(panels: Vec<(f64, f64)>, points_per_panel: usize, scheme: Scheme) -> Result<Self> {
        if points_per_panel < 2 {
            return Err(Error::Domain("points_per_panel must be at least 2".into()));
        }
        for (i, &(lo, hi)) in panels.iter().enumerate() {
            if !(hi > lo) {
                return Err(Error::Domain(format!("degenerate panel [{lo}, {hi}]")));
            }
            if i > 0 && lo < panels[i - 1].1 {
                return Err(Error::Domain("panels overlap or are unordered".into()));
            }
        }
        Ok(Self {
            panels,
            points_per_panel,
            scheme,
        })
    }

    /// `count` equal panels covering `[lo, hi]`.
    pub fn uniform(lo: f64, hi: f64, count: usize, points_per_panel: usize) -> Self {
        let h = (hi - lo) / count as f64;
        let panels = (0..count)
            .map(|i| (lo + i as f64 * h, if i + 1 == count { hi } else { lo + (i + 1) as f64 * h }))
            .collect();
        Self {
            panels,
            points_per_panel,
            scheme: Scheme::GaussLegendre,
        }
    }

    /// Panels on `[lo, hi]` that refine geometrically toward each point in `breaks`.
    pub fn split_at(lo: f64, hi: f64, breaks: &[f64], points_per_panel: usize) -> Self {
        let mut edges = vec![lo, hi];
        for &b in breaks {
            if b > lo && b < hi {
                edges.push(b);
            }
        }
        edges.sort_by(f64::total_cmp);
        let mut panels = Vec::new();
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let a_is_break = breaks.contains(&a);
            let b_is_break = breaks.contains(&b);
            panels.extend(graded_panels(a, b, a_is_break, b_is_break));
        }
        Self {
            panels,
            points_per_panel,
            scheme: Scheme::GaussLegendre,
        }
    }

    /// Same panels with the node count doubled.
    pub fn refined(&self) -> Self {
        Self {
            panels: self.panels.clone(),
            points_per_panel: self.points_per_panel * 2,
            scheme: self.scheme,
        }
    }
}

fn graded_panels(a: f64, b: f64, grade_a: bool, grade_b: bool) -> Vec<(f64, f64)> {
    let len = b - a;
    let mut cuts = vec![0.0, 1.0];
    let levels = 12;
    if grade_a {
        let mut s = 0.25;
        for _ in 0..levels {
            cuts.push(s);
            s *= 0.25;
        }
    }
    if grade_b {
        let mut s = 0.25;
        for _ in 0..levels {
            cuts.push(1.0 - s);
            s *= 0.25;
        }
    }
    let interior = 8;
    for i in 1..interior {
        cuts.push(i as f64 / interior as f64);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    cuts.windows(2)
        .map(|w| (a + w[0] * len, a + w[1] * len))
        .collect()
}

/// Composite quadrature of a complex integrand over the panels of `spec`.
pub fn integrate(f: impl Fn(f64) -> Complex64, spec: &QuadratureSpec) -> Complex64 {
    let n = spec.points_per_panel;
    match spec.scheme {
        Scheme::GaussLegendre => {
            let (nodes, weights) = gauss_legendre(n);
            let mut total = Complex64::new(0.0, 0.0);
            for &(lo, hi) in &spec.panels {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                let mut panel = Complex64::new(0.0, 0.0);
                for (t, w) in nodes.iter().zip(&weights) {
                    panel += f(mid + half * t) * *w;
                }
                total += panel * half;
            }
            total
        }
        Scheme::Trapezoid => {
            let mut total = Complex64::new(0.0, 0.0);
            for &(lo, hi) in &spec.panels {
                let h = (hi - lo) / (n - 1) as f64;
                let mut panel = (f(lo) + f(hi)) * 0.5;
                for i in 1..n - 1 {
                    panel += f(lo + i as f64 * h);
                }
                total += panel * h;
            }
            total
        }
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real(f: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> f64 {
    integrate(|x| Complex64::new(f(x), 0.0), spec).re
}
