//! Graded pieces of B = path algebra of Q_n modulo xy = yx = 0, and the
//! Hilbert-series identity P(B, t) P^t(B^!, −t) = 1.

use super::{p1, p2};

/// A path read right to left as an operator word: `letters[0]` acts first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathWord {
    /// 1-based start vertex.
    pub start: usize,
    pub letters: Vec<char>,
}

impl PathWord {
    pub fn end(&self, n: usize) -> usize {
        self.letters
            .iter()
            .fold(self.start - 1, |v, l| if *l == 'x' { p1(n, v) } else { p2(n, v) })
            + 1
    }

    fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone)]
pub struct PathAlgebraLayer {
    pub n: usize,
    pub degree: usize,
    pub words: Vec<PathWord>,
}

impl PathAlgebraLayer {
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Number of paths from vertex j to vertex i (1-based).
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.words.iter().filter(|w| w.start == j && w.end(self.n) == i).count()
    }
}

/// Words of length m with the zero-relation words xy, yx removed.
pub fn path_algebra_layer(n: usize, m: usize) -> PathAlgebraLayer {
    let mut words = Vec::new();
    for start in 1..=n {
        for mask in 0..(1u64 << m) {
            let letters: Vec<char> = (0..m).map(|b| if mask >> b & 1 == 1 { 'y' } else { 'x' }).collect();
            let w = PathWord { start, letters };
            if w.is_reduced() {
                words.push(w);
            }
        }
    }
    words.sort();
    PathAlgebraLayer { n, degree: m, words }
}

/// Truncated integer power series, coefficient of t^k at index k.
pub type Series = Vec<i64>;

/// b_ij(t) from path counts through degree `cutoff`; indices 0-based.
pub fn hilbert_series(n: usize, cutoff: usize) -> Vec<Vec<Series>> {
    let mut b = vec![vec![vec![0i64; cutoff + 1]; n]; n];
    for m in 0..=cutoff {
        let layer = path_algebra_layer(n, m);
        for w in &layer.words {
            b[w.end(n) - 1][w.start - 1][m] += 1;
        }
    }
    b
}

/// Expansion of numerator / (1 − t^period).
fn geometric(numerator: &[(usize, i64)], period: usize, cutoff: usize) -> Series {
    let mut s = vec![0i64; cutoff + 1];
    for &(e, c) in numerator {
        let mut k = e;
        while k <= cutoff {
            s[k] += c;
            k += period;
        }
    }
    s
}

fn poly_mul(a: &[(usize, i64)], b: &[(usize, i64)]) -> Vec<(usize, i64)> {
    a.iter().flat_map(|&(ea, ca)| b.iter().map(move |&(eb, cb)| (ea + eb, ca * cb))).collect()
}

/// The closed-form entries of B(t) = P(B, t); indices 1-based in the formulas.
pub fn hilbert_formula(n: usize, cutoff: usize) -> Vec<Vec<Series>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let num: Vec<(usize, i64)> = if i.abs_diff(j) > 1 {
                        vec![]
                    } else if i != j {
                        vec![(1, 1)]
                    } else if i == 1 || i == n {
                        // a single vertex with n = 1 carries both loops
                        if n == 1 { vec![(0, 1), (1, 2), (2, 1)] } else { vec![(0, 1), (1, 1), (2, 1)] }
                    } else {
                        vec![(0, 1), (2, 1)]
                    };
                    geometric(&num, 2, cutoff)
                })
                .collect()
        })
        .collect()
}

/// C(t) = P(B^!, t): symmetric, given for i ≤ j by
/// t^{j−i}(1 + t^{2i−1})(1 + t^{2(n−j)+1}) / (1 − t^{2n}).
pub fn hilbert_dual_series(n: usize, cutoff: usize) -> Vec<Vec<Series>> {
    let entry = |i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        let num = poly_mul(
            &poly_mul(&[(j - i, 1)], &[(0, 1), (2 * i - 1, 1)]),
            &[(0, 1), (2 * (n - j) + 1, 1)],
        );
        geometric(&num, 2 * n, cutoff)
    };
    (1..=n).map(|i| (1..=n).map(|j| entry(i, j)).collect()).collect()
}

/// True iff B(t)·C(−t)^T equals the identity through degree `cutoff`.
pub fn koszul_product_is_identity(b: &[Vec<Series>], c: &[Vec<Series>], cutoff: usize) -> bool {
    let n = b.len();
    for i in 0..n {
        for j in 0..n {
            for d in 0..=cutoff {
                let mut s = 0i64;
                for k in 0..n {
                    // C^T(−t)_{kj} = C_{jk}(−t)
                    for e in 0..=d {
                        let sign = if (d - e) % 2 == 0 { 1 } else { -1 };
                        s += b[i][k][e] * c[j][k][d - e] * sign;
                    }
                }
                let expected = i64::from(i == j && d == 0);
                if s != expected {
                    return false;
                }
            }
        }
    }
    true
}

/// B(t) from path counts, C(t) from the closed formula, product checked.
pub fn koszul_numerical_check(n: usize, cutoff: usize) -> bool {
    koszul_product_is_identity(&hilbert_series(n, cutoff), &hilbert_dual_series(n, cutoff), cutoff)
}
