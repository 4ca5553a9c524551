//! Exact Gaussian elimination over `Rational64`.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

/// Row-reduces `m` in place and returns the pivot columns.
fn reduce(m: &mut [Vec<Rational64>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][c].recip();
        for v in m[row].iter_mut() {
            *v *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][c].is_zero() {
                let f = m[r][c];
                let pivot_row = m[row].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    reduce(&mut rows.to_vec(), cols).len()
}

/// The unique solution of the square system `a·x = b`, if `a` is invertible.
pub fn solve(a: &[Vec<Rational64>], b: &[Rational64]) -> Option<Vec<Rational64>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .zip(b)
        .map(|(row, &v)| row.iter().copied().chain(std::iter::once(v)).collect())
        .collect();
    let pivots = reduce(&mut m, n);
    (pivots.len() == n).then(|| m.iter().map(|row| row[n]).collect())
}

pub fn dot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether the points are affinely independent.
pub fn affinely_independent(points: &[Vec<Rational64>]) -> bool {
    let Some((first, rest)) = points.split_first() else {
        return true;
    };
    let diffs: Vec<Vec<Rational64>> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    diffs.is_empty() || rank(&diffs) == diffs.len()
}

/// The primitive direction of a nonzero vector: scaled so that its entries
/// are coprime integers with the same signs.
pub fn primitive(v: &[Rational64]) -> Vec<Rational64> {
    use num_integer::Integer;
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * l).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(&x.abs()));
    if g == 0 {
        return v.to_vec();
    }
    ints.iter().map(|x| Rational64::from_integer(x / g)).collect()
}

pub fn is_nonnegative(v: &[Rational64]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
