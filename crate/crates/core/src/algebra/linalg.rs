//! Dense exact linear algebra over ℚ(i).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;

pub type Matrix = Vec<Vec<GaussianRational>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let sub = &factor * &m[r][j];
                    m[i][j] -= &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by fraction-free elimination over ℤ[i], falling back to [`rref`]
/// should a Bareiss division ever be inexact.
pub fn rank(m: &Matrix) -> usize {
    match bareiss_rank(m) {
        Some(r) => r,
        None => {
            let mut a = m.clone();
            rref(&mut a).len()
        }
    }
}

/// A Gaussian integer `(re, im)`.
type GaussInt = (BigInt, BigInt);

fn gi_mul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gi_sub(a: GaussInt, b: &GaussInt) -> GaussInt {
    (a.0 - &b.0, a.1 - &b.1)
}

fn gi_is_zero(a: &GaussInt) -> bool {
    a.0.is_zero() && a.1.is_zero()
}

/// `a / b` when it is a Gaussian integer.
fn gi_div_exact(a: &GaussInt, b: &GaussInt) -> Option<GaussInt> {
    let n = &b.0 * &b.0 + &b.1 * &b.1;
    let re = &a.0 * &b.0 + &a.1 * &b.1;
    let im = &a.1 * &b.0 - &a.0 * &b.1;
    let (qr, rr) = re.div_rem(&n);
    let (qi, ri) = im.div_rem(&n);
    (rr.is_zero() && ri.is_zero()).then_some((qr, qi))
}

/// Rows scaled by the lcm of their denominators.
fn integer_rows(m: &Matrix) -> Vec<Vec<GaussInt>> {
    m.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.re().denom()).lcm(c.im().denom()));
            row.iter().map(|c| ((c.re() * &l).to_integer(), (c.im() * &l).to_integer())).collect()
        })
        .collect()
}

fn bareiss_rank(m: &Matrix) -> Option<usize> {
    let mut a = integer_rows(m);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: GaussInt = (BigInt::one(), BigInt::zero());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !gi_is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::replace(&mut row[c], (BigInt::zero(), BigInt::zero()));
            for j in c + 1..cols {
                let x = gi_sub(gi_mul(&pivot_row[c], &row[j]), &gi_mul(&lead, &pivot_row[j]));
                row[j] = gi_div_exact(&x, &prev)?;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Some(r)
}

/// A basis of the right kernel `{x : m x = 0}`.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vec<GaussianRational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussianRational::zero(); cols];
            v[f] = GaussianRational::from_int(1);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&a[r][f];
            }
            v
        })
        .collect()
}
