//! Adaptive Gauss–Kronrod quadrature over real intervals, for real- and
//! complex-valued integrands.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae on [0, 1] side of the symmetric rule.
pub(crate) const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];

pub(crate) const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// 7-point Gauss weights, matching every other Kronrod node.
pub(crate) const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

/// One G7/K15 application on [a, b]: returns (K15 value, |K15 − G7|).
pub fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = T::zero();
    let mut g = T::zero();
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (lo, hi) = (f(c - h * x), f(c + h * x));
        let pair = if x == 0.0 { lo } else { lo.add(hi) };
        k = k.add(pair.scale(wk));
        if i % 2 == 1 {
            g = g.add(pair.scale(WG[i / 2]));
        }
    }
    let k = k.scale(h);
    let g = g.scale(h);
    (k, k.add(g.scale(-1.0)).norm())
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

/// Adaptive quadrature of `f` over [a, b]: bisect the worst panel until the
/// summed error estimate drops below `abs_tol + rel_tol·|I|` or the panel
/// budget runs out.
pub fn adaptive<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
    context: &'static str,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut panels = vec![Panel { a, b, value: v, err: e }];
    loop {
        let total: T = panels.iter().fold(T::zero(), |acc, p| acc.add(p.value));
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= abs_tol + rel_tol * total.norm() {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(Error::QuadratureFailure { context, estimate: total.norm(), error: err });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, mid);
        let (v2, e2) = gk15(&mut f, mid, b);
        panels.push(Panel { a, b: mid, value: v1, err: e1 });
        panels.push(Panel { a: mid, b, value: v2, err: e2 });
    }
}
