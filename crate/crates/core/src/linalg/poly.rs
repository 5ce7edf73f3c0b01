//! Univariate polynomials over Q and exact rational root finding.

use super::{Matrix, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    /// x − a
    pub fn linear(a: &Rational) -> Self {
        Poly(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(Vec::new()), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        let inv = d.lead().unwrap().recip();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Evaluates at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(n, c));
        }
        acc
    }
}

/// Characteristic polynomial det(xI − A) via Hessenberg reduction.
pub fn charpoly(a: &Matrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.clone();
    for m in 1..n.saturating_sub(1) {
        let Some(p) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
            continue;
        };
        if p != m {
            for c in 0..n {
                let (x, y) = (h.get(p, c).clone(), h.get(m, c).clone());
                h.set(p, c, y);
                h.set(m, c, x);
            }
            for r in 0..n {
                let (x, y) = (h.get(r, p).clone(), h.get(r, m).clone());
                h.set(r, p, y);
                h.set(r, m, x);
            }
        }
        let piv = h.get(m, m - 1).clone();
        for i in m + 1..n {
            if h.get(i, m - 1).is_zero() {
                continue;
            }
            let u = h.get(i, m - 1) / &piv;
            for c in 0..n {
                let v = h.get(i, c) - &u * h.get(m, c);
                h.set(i, c, v);
            }
            for r in 0..n {
                let v = h.get(r, m) + &u * h.get(r, i);
                h.set(r, m, v);
            }
        }
    }
    let mut p: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        let mut pk = Poly::linear(h.get(k, k)).mul(&p[k]);
        let mut prod = Rational::one();
        for i in (0..k).rev() {
            prod *= h.get(i + 1, i);
            if prod.is_zero() {
                break;
            }
            let c = &prod * h.get(i, k);
            pk = pk.sub(&p[i].scale(&c));
        }
        p.push(pk);
    }
    p.pop().unwrap()
}

/// Distinct rational roots of `p`, sorted ascending.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let mut s = p.squarefree_part();
    let mut roots = Vec::new();
    // strip zero roots
    if s.coeffs()[0].is_zero() {
        roots.push(Rational::zero());
        s = s.div_rem(&Poly::linear(&Rational::zero())).0;
    }
    for approx in approximate_roots(&s) {
        if let Some(q) = rationalize(approx) {
            if !roots.contains(&q) && s.eval(&q).is_zero() {
                roots.push(q);
            }
        }
    }
    let found = roots.len() - usize::from(roots.first().is_some_and(Zero::is_zero));
    if found < s.degree().unwrap_or(0) {
        for q in rational_root_candidates(&s) {
            if !roots.contains(&q) && s.eval(&q).is_zero() {
                roots.push(q);
            }
        }
    }
    // a linear cofactor gives its root exactly, whatever the size of its denominator
    let mut rest = s;
    for r in &roots {
        if !r.is_zero() {
            rest = rest.div_rem(&Poly::linear(r)).0;
        }
    }
    if rest.degree() == Some(1) {
        let c = rest.coeffs();
        roots.push(-&c[0] / &c[1]);
    }
    roots.sort();
    roots
}

fn approximate_roots(p: &Poly) -> Vec<(f64, f64)> {
    let d = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return Vec::new(),
    };
    let m = p.monic();
    let c: Vec<f64> = m.coeffs().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return Vec::new();
    }
    let bound = 1.0 + c[..d].iter().fold(0.0f64, |a, x| a.max(x.abs()));
    type C = (f64, f64);
    let mul = |a: C, b: C| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let sub = |a: C, b: C| (a.0 - b.0, a.1 - b.1);
    let div = |a: C, b: C| {
        let n = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / n, (a.1 * b.0 - a.0 * b.1) / n)
    };
    let eval = |z: C| c.iter().rev().fold((0.0, 0.0), |acc, &k| {
        let t = mul(acc, z);
        (t.0 + k, t.1)
    });
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            (0.5 * bound * a.cos(), 0.5 * bound * a.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = (1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den = mul(den, sub(z[i], z[j]));
                }
            }
            if den.0 == 0.0 && den.1 == 0.0 {
                den = (1e-12, 0.0);
            }
            let step = div(eval(z[i]), den);
            z[i] = sub(z[i], step);
            delta = delta.max(step.0.abs() + step.1.abs());
        }
        if delta < 1e-14 * bound {
            break;
        }
    }
    z
}

fn rationalize((re, im): (f64, f64)) -> Option<Rational> {
    if !re.is_finite() || im.abs() > 1e-6 * (1.0 + re.abs()) {
        return None;
    }
    // continued fraction convergents
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut x = re;
    for _ in 0..40 {
        let a = x.floor();
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = h1.to_f64()? / k1.to_f64()?;
        if (approx - re).abs() <= 1e-9 * (1.0 + re.abs()) {
            return Some(Rational::new(h1, k1));
        }
        let frac = x - a;
        if frac.abs() < 1e-15 {
            return Some(Rational::new(h1, k1));
        }
        x = 1.0 / frac;
    }
    None
}

/// Candidates ±p/q with p | a_0 and q | a_d, when the integer coefficients are small.
fn rational_root_candidates(p: &Poly) -> Vec<Rational> {
    let l = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let (a0, ad) = (ints[0].abs(), ints.last().unwrap().abs());
    let (Some(a0), Some(ad)) = (a0.to_u64(), ad.to_u64()) else {
        return Vec::new();
    };
    if a0 == 0 || a0 > 1 << 40 || ad > 1 << 40 {
        return Vec::new();
    }
    let divisors = |n: u64| -> Vec<u64> {
        let mut v = Vec::new();
        let mut i = 1;
        while i * i <= n {
            if n.is_multiple_of(i) {
                v.push(i);
                if i * i != n {
                    v.push(n / i);
                }
            }
            i += 1;
        }
        v
    };
    let mut out = Vec::new();
    for pn in divisors(a0) {
        for qd in divisors(ad) {
            for s in [1i64, -1] {
                out.push(Rational::new(BigInt::from(pn) * s, BigInt::from(qd)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frac, int};

    #[test]
    fn charpoly_of_companion() {
        // (x-1)(x-2)(x+3/2)
        let p = Poly::linear(&int(1)).mul(&Poly::linear(&int(2))).mul(&Poly::linear(&frac(-3, 2)));
        let c = p.coeffs();
        let mut m = Matrix::zeros(3, 3);
        m.set(1, 0, int(1));
        m.set(2, 1, int(1));
        for i in 0..3 {
            m.set(i, 2, -c[i].clone());
        }
        assert_eq!(charpoly(&m), p);
        assert_eq!(rational_roots(&p), vec![frac(-3, 2), int(1), int(2)]);
    }

    #[test]
    fn charpoly_cayley_hamilton() {
        let m = Matrix::from_rows(vec![
            vec![int(2), frac(1, 3), int(0), int(4)],
            vec![int(0), int(1), int(5), int(0)],
            vec![int(7), int(0), int(-1), frac(2, 5)],
            vec![int(1), int(1), int(1), int(1)],
        ]);
        assert!(charpoly(&m).eval_matrix(&m).is_zero());
    }

    #[test]
    fn repeated_and_irrational_roots() {
        let p = Poly::linear(&int(3)).mul(&Poly::linear(&int(3))).mul(&Poly::new(vec![int(-2), int(0), int(1)]));
        assert_eq!(rational_roots(&p), vec![int(3)]);
    }

    #[test]
    fn roots_with_huge_denominators() {
        let r = Rational::new(BigInt::from(-7_153_373_258_081_043i64), BigInt::from(16_118_723_478_671i64));
        let p = Poly::linear(&r).mul(&Poly::linear(&r)).mul(&Poly::linear(&frac(1, 3)));
        assert_eq!(rational_roots(&p), vec![r.clone(), frac(1, 3)]);
        let q = Poly::linear(&r).mul(&Poly::linear(&int(0)));
        assert_eq!(rational_roots(&q), vec![r, int(0)]);
    }
}
