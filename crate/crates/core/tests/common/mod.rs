//! Test-only reference computations, written without the library's jet
//! algebra so that they can cross-check it.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use jetclass::jet::PolyVF;
use jetclass::{Field, Rational};

pub type Series = BTreeMap<(u32, u32), Rational>;

pub fn q(p: i64, d: i64) -> Rational {
    jetclass::scalar::rational(p, d)
}

fn to_series(p: &jetclass::jet::Poly<Rational>) -> Series {
    p.terms().map(|(i, j, c)| ((i, j), c.clone())).collect()
}

fn add_into(acc: &mut Series, k: (u32, u32), c: Rational) {
    let e = acc.entry(k).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&k);
    }
}

fn mul(a: &Series, b: &Series, max_deg: u32) -> Series {
    let mut out = Series::new();
    for (&(i, j), c) in a {
        for (&(k, l), d) in b {
            if i + j + k + l <= max_deg {
                add_into(&mut out, (i + k, j + l), c * d);
            }
        }
    }
    out
}

fn dx(a: &Series) -> Series {
    a.iter()
        .filter(|((i, _), _)| *i > 0)
        .map(|(&(i, j), c)| ((i - 1, j), c * Rational::from_integer(i.into())))
        .collect()
}

fn dy(a: &Series) -> Series {
    a.iter()
        .filter(|((_, j), _)| *j > 0)
        .map(|(&(i, j), c)| ((i, j - 1), c * Rational::from_integer(j.into())))
        .collect()
}

fn sub(a: &Series, b: &Series) -> Series {
    let mut out = a.clone();
    for (&k, c) in b {
        add_into(&mut out, k, -c.clone());
    }
    out
}

fn sum(a: &Series, b: &Series) -> Series {
    let mut out = a.clone();
    for (&k, c) in b {
        add_into(&mut out, k, c.clone());
    }
    out
}

/// `[v, w] = Dw·v − Dv·w` by dense monomial products, truncated at `m`.
pub fn dense_bracket(v: &PolyVF<Rational>, w: &PolyVF<Rational>, m: u32) -> PolyVF<Rational> {
    let (v1, v2) = (to_series(v.dx()), to_series(v.dy()));
    let (w1, w2) = (to_series(w.dx()), to_series(w.dy()));
    let comp = |w_: &Series, v_: &Series| {
        let a = sum(&mul(&dx(w_), &v1, m), &mul(&dy(w_), &v2, m));
        let b = sum(&mul(&dx(v_), &w1, m), &mul(&dy(v_), &w2, m));
        sub(&a, &b)
    };
    let (c1, c2) = (comp(&w1, &v1), comp(&w2, &v2));
    let poly = |s: Series| jetclass::jet::Poly::from_terms(s.into_iter().map(|((i, j), c)| (i, j, c)));
    PolyVF::new(m, poly(c1), poly(c2)).unwrap()
}

/// Colength of a monomial ideal given by its generators `x^a y^b`.
pub fn staircase(gens: &[(u32, u32)]) -> usize {
    let bound = gens.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0) * 4 + 4;
    let mut n = 0;
    for i in 0..bound {
        for j in 0..bound {
            if !gens.iter().any(|&(a, b)| i >= a && j >= b) {
                n += 1;
            }
        }
    }
    n
}

/// Multiplicity at 0 of `{F = 0, y = p(x)}`: the order of vanishing of
/// `F(x, p(x))`, with `p` given by its coefficients `p_1, p_2, ..`.
pub fn graph_multiplicity(f: &Series, p: &[Rational], max_deg: u32) -> Option<u32> {
    // Univariate power series in x as a coefficient vector.
    let n = max_deg as usize + 1;
    let mut py = vec![Rational::zero(); n];
    for (k, c) in p.iter().enumerate() {
        if k + 1 < n {
            py[k + 1] = c.clone();
        }
    }
    let mulu = |a: &[Rational], b: &[Rational]| {
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < n {
                    out[i + j] += x * y;
                }
            }
        }
        out
    };
    let mut total = vec![Rational::zero(); n];
    for (&(i, j), c) in f {
        let mut t = vec![Rational::zero(); n];
        if (i as usize) < n {
            t[i as usize] = c.clone();
        }
        for _ in 0..j {
            t = mulu(&t, &py);
        }
        for (k, x) in t.into_iter().enumerate() {
            total[k] += x;
        }
    }
    total.iter().position(|c| !c.is_zero()).map(|k| k as u32)
}

pub fn series(terms: &[(u32, u32, i64)]) -> Series {
    terms
        .iter()
        .map(|&(i, j, c)| ((i, j), Rational::from_integer(c.into())))
        .collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut acc = Rational::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// Sylvester matrix of `f, g` given by coefficients, highest degree first.
pub fn sylvester(f: &[Rational], g: &[Rational]) -> Vec<Vec<Rational>> {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let n = df + dg;
    let mut rows = vec![];
    for s in 0..dg {
        let mut r = vec![Rational::zero(); n];
        r[s..s + f.len()].clone_from_slice(f);
        rows.push(r);
    }
    for s in 0..df {
        let mut r = vec![Rational::zero(); n];
        r[s..s + g.len()].clone_from_slice(g);
        rows.push(r);
    }
    rows
}

/// `|Res(P1, P2)|` for a 3×3 matrix with `c2 = −tr A ≠ 0`, where
/// `det(λ − A) = λ³ + c2 λ² + c1 λ + c0` and `P(iμ) = P1(μ) + i P2(μ)`.
pub fn resultant_3x3_abs(a: &[Vec<Rational>]) -> Option<Rational> {
    let tr = &a[0][0] + &a[1][1] + &a[2][2];
    let minors = (0..3)
        .map(|k| {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            &a[i][i] * &a[j][j] - &a[i][j] * &a[j][i]
        })
        .fold(Rational::zero(), |s, x| s + x);
    let det = cofactor_det(a);
    let (c2, c1, c0) = (-tr, minors, -det);
    if c2.is_zero() {
        return None;
    }
    // P1 = c0 − c2 μ², P2 = c1 μ − μ³.
    let p1 = [-c2, Rational::zero(), c0];
    let p2 = [-Rational::one(), Rational::zero(), c1, Rational::zero()];
    Some(cofactor_det(&sylvester(&p1, &p2)).abs())
}

/// Sign of `r(θ = 2π) − r0` for the orbit of `v` starting at `(r0, 0)`,
/// by RK4. `v` must rotate counterclockwise around the origin.
pub fn return_map_drift(v: &PolyVF<f64>, r0: f64, dt: f64) -> f64 {
    let f = |p: [f64; 2]| {
        let [a, b] = v.eval(&p[0], &p[1]);
        [a, b]
    };
    let mut p = [r0, 0.0];
    let mut t = 0.0;
    loop {
        let k1 = f(p);
        let k2 = f([p[0] + dt / 2.0 * k1[0], p[1] + dt / 2.0 * k1[1]]);
        let k3 = f([p[0] + dt / 2.0 * k2[0], p[1] + dt / 2.0 * k2[1]]);
        let k4 = f([p[0] + dt * k3[0], p[1] + dt * k3[1]]);
        let next = [
            p[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            p[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        t += dt;
        if t > 1.0 && p[1] < 0.0 && next[1] >= 0.0 && next[0] > 0.0 {
            let s = -p[1] / (next[1] - p[1]);
            return p[0] + s * (next[0] - p[0]) - r0;
        }
        assert!(t < 1e3, "orbit did not return");
        p = next;
    }
}

/// Center-manifold reduction of `ẋ = f, ẏ = λy + g` (`f, g` without linear
/// terms) by undetermined coefficients: returns `a_1 .. a_m` of the reduced
/// equation `ẋ = f(x, h(x))`.
pub fn sn_series(f: &Series, g: &Series, lambda: &Rational, m: u32) -> Vec<Rational> {
    let n = m as usize + 1;
    let eval = |s: &Series, h: &[Rational]| {
        let mut out = vec![Rational::zero(); n];
        for (&(i, j), c) in s {
            let mut t = vec![Rational::zero(); n];
            if (i as usize) < n {
                t[i as usize] = c.clone();
            }
            for _ in 0..j {
                let mut u = vec![Rational::zero(); n];
                for (a, x) in t.iter().enumerate() {
                    for (b, y) in h.iter().enumerate() {
                        if a + b < n {
                            u[a + b] += x * y;
                        }
                    }
                }
                t = u;
            }
            for (k, x) in t.into_iter().enumerate() {
                out[k] += x;
            }
        }
        out
    };
    let mut h = vec![Rational::zero(); n];
    for k in 2..n {
        let fx = eval(f, &h);
        let gx = eval(g, &h);
        // h'(x)·f(x, h(x)) − g(x, h(x)) at order k determines h_k.
        let mut lhs = Rational::zero();
        for a in 1..k {
            let da = &h[a] * Rational::from_integer((a as i64).into());
            lhs += da * &fx[k - a + 1];
        }
        h[k] = (lhs - &gx[k]) / lambda;
    }
    eval(f, &h)[1..].to_vec()
}

/// `(b11, b12, b22)` of `ẋ = y + P, ẏ = Q` with quadratic `P, Q`, from the
/// substitution `Y = ẋ`.
pub fn bt_oracle(p: &Series, qq: &Series) -> [Rational; 3] {
    let c = |s: &Series, i, j| s.get(&(i, j)).cloned().unwrap_or_else(Rational::zero);
    [
        c(qq, 2, 0),
        c(qq, 1, 1) + Rational::from_integer(2.into()) * c(p, 2, 0),
        c(qq, 0, 2) + c(p, 1, 1),
    ]
}

pub fn f64_of(r: &Rational) -> f64 {
    Field::to_f64(r)
}
