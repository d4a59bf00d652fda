//! Real trigonometric polynomials on the circle and the exact integral of
//! their absolute value.

use std::f64::consts::TAU;

#[derive(Clone, Copy)]
struct Cell {
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    ga: f64,
    gb: f64,
}

/// `f(phi) = a_0 + sum_{q>=1} (a_q cos(q phi) + b_q sin(q phi))`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPoly {
    /// `a[q]` and `b[q]` for `q = 0..=n`; `b[0]` is ignored.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len());
        assert!(!a.is_empty());
        TrigPoly { a, b }
    }

    pub fn constant(&self) -> f64 {
        self.a[0]
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Largest `|f - a_0|` can possibly be.
    pub fn oscillation_bound(&self) -> f64 {
        (1..self.a.len()).map(|q| self.a[q].hypot(self.b[q])).sum()
    }

    #[inline]
    pub fn eval(&self, phi: f64) -> f64 {
        let (s1, c1) = phi.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let mut acc = self.a[0];
        for q in 1..self.a.len() {
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
            acc += self.a[q] * c + self.b[q] * s;
        }
        acc
    }

    #[inline]
    fn eval_with_derivative(&self, phi: f64) -> (f64, f64) {
        let (s1, c1) = phi.sin_cos();
        let (mut c, mut s) = (1.0, 0.0);
        let (mut f, mut d) = (self.a[0], 0.0);
        for q in 1..self.a.len() {
            (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
            let qf = q as f64;
            f += self.a[q] * c + self.b[q] * s;
            d += qf * (self.b[q] * c - self.a[q] * s);
        }
        (f, d)
    }

    /// Antiderivative `a_0 phi + sum (a_q sin(q phi) - b_q cos(q phi)) / q`.
    fn antiderivative(&self, phi: f64) -> f64 {
        let mut acc = self.a[0] * phi;
        for q in 1..self.a.len() {
            let (s, c) = (q as f64 * phi).sin_cos();
            acc += (self.a[q] * s - self.b[q] * c) / q as f64;
        }
        acc
    }

    /// Sign changes of `f` on `[0, 2 pi)`, ascending.
    ///
    /// Uniform samples are refined by bisection until each cell is either
    /// certified free of sign changes by a second-derivative bound or holds
    /// one monotone crossing, which is then solved by safeguarded Newton.
    /// Subdivision stops at `2 pi / (4n 2^MAX_DEPTH)`; a pair of crossings
    /// closer than that encloses an area of order `width^3` and is ignored.
    pub fn sign_changes(&self) -> Vec<f64> {
        let n = self.degree();
        let d2: f64 = (1..=n)
            .map(|q| (q * q) as f64 * self.a[q].hypot(self.b[q]))
            .sum();
        let mut roots = Vec::new();
        if d2 == 0.0 {
            return roots;
        }
        let m = (4 * n).max(8);
        let h = TAU / m as f64;
        let (f0, g0) = self.eval_with_derivative(0.0);
        let (mut fa, mut ga) = (f0, g0);
        for i in 0..m {
            let a = i as f64 * h;
            let (b, (fb, gb)) = if i + 1 == m {
                (TAU, (f0, g0))
            } else {
                (
                    (i + 1) as f64 * h,
                    self.eval_with_derivative((i + 1) as f64 * h),
                )
            };
            self.isolate(
                Cell {
                    a,
                    b,
                    fa,
                    fb,
                    ga,
                    gb,
                },
                d2,
                0,
                &mut roots,
            );
            (fa, ga) = (fb, gb);
        }
        roots
    }

    fn isolate(&self, c: Cell, d2: f64, depth: u32, out: &mut Vec<f64>) {
        const MAX_DEPTH: u32 = 12;
        let w = c.b - c.a;
        let change = (c.fa >= 0.0) != (c.fb >= 0.0);
        if !change {
            // f stays positive (after flipping) while the Taylor lower bounds
            // from either end are positive and those ranges overlap
            let s = if c.fa >= 0.0 { 1.0 } else { -1.0 };
            let (fa, fb, ga, gb) = (s * c.fa, s * c.fb, s * c.ga, s * c.gb);
            let reach_a = (ga + (ga * ga + 2.0 * d2 * fa).sqrt()) / d2;
            let reach_b = (-gb + (gb * gb + 2.0 * d2 * fb).sqrt()) / d2;
            if reach_a + reach_b > w || depth >= MAX_DEPTH {
                return;
            }
        } else {
            let monotone = c.ga * c.gb > 0.0 && c.ga.abs().min(c.gb.abs()) > 0.5 * d2 * w;
            if monotone || depth >= MAX_DEPTH {
                out.push(self.solve(c.a, c.b, c.fa));
                return;
            }
        }
        let mid = 0.5 * (c.a + c.b);
        let (fm, gm) = self.eval_with_derivative(mid);
        self.isolate(
            Cell {
                b: mid,
                fb: fm,
                gb: gm,
                ..c
            },
            d2,
            depth + 1,
            out,
        );
        self.isolate(
            Cell {
                a: mid,
                fa: fm,
                ga: gm,
                ..c
            },
            d2,
            depth + 1,
            out,
        );
    }

    /// Root of a monotone bracketed crossing.
    fn solve(&self, mut a: f64, mut b: f64, fa: f64) -> f64 {
        let up = fa < 0.0;
        let mut x = 0.5 * (a + b);
        for _ in 0..100 {
            let (f, d) = self.eval_with_derivative(x);
            if f == 0.0 {
                return x;
            }
            if (f < 0.0) == up {
                a = x;
            } else {
                b = x;
            }
            let newton = x - f / d;
            if d != 0.0 && (newton - x).abs() < 1e-15 * (1.0 + x.abs()) {
                return newton.clamp(a, b);
            }
            let next = if d != 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if b - a < 1e-15 {
                return next;
            }
            x = next;
        }
        x
    }

    /// `int_0^{2 pi} |f(phi)| d phi`, exact up to root accuracy.
    pub fn abs_integral(&self) -> f64 {
        let a0 = self.a[0];
        if self.degree() == 0 || a0.abs() > self.oscillation_bound() {
            return TAU * a0.abs();
        }
        let roots = self.sign_changes();
        if roots.is_empty() {
            return TAU * a0.abs();
        }
        let f: Vec<f64> = roots.iter().map(|&r| self.antiderivative(r)).collect();
        let mut total = 0.0;
        for i in 0..roots.len() - 1 {
            total += (f[i + 1] - f[i]).abs();
        }
        total += (f[0] + TAU * a0 - f[roots.len() - 1]).abs();
        total
    }

    /// `int_0^{2 pi} f(phi) d phi`.
    pub fn integral(&self) -> f64 {
        TAU * self.a[0]
    }
}
