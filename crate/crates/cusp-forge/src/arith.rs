//! Integer linear algebra over `BigInt`: echelon (Hermite) forms with
//! transforms, Smith normal form, and small number-theoretic helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn bi(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_sub_mul(m: &mut Mat, target: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (t, v) in m[target].iter_mut().zip(s.iter()) {
        *t -= q * v;
    }
}

/// Row-style Hermite normal form of the row lattice of `rows`.
///
/// Returns `(h, u)` with `u * rows = h`, `u` unimodular. The nonzero rows of
/// `h` come first, are in echelon form with positive pivots, and entries
/// above each pivot are reduced into `[0, pivot)`.
pub fn hnf_with_transform(rows: &Mat, ncols: usize) -> (Mat, Mat) {
    let m = rows.len();
    let mut h = rows.clone();
    let mut u = identity(m);
    let mut r = 0usize;
    for col in 0..ncols {
        if r >= m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h[i][col].is_zero() {
                    match best {
                        None => best = Some(i),
                        Some(b) if h[i][col].abs() < h[b][col].abs() => best = Some(i),
                        _ => {}
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap(r, b);
            u.swap(r, b);
            let mut done = true;
            for i in (r + 1)..m {
                if !h[i][col].is_zero() {
                    let q = h[i][col].div_floor(&h[r][col]);
                    row_sub_mul(&mut h, i, r, &q);
                    row_sub_mul(&mut u, i, r, &q);
                    if !h[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[r][col].is_zero() {
            if h[r][col].is_negative() {
                for v in h[r].iter_mut() {
                    *v = -v.clone();
                }
                for v in u[r].iter_mut() {
                    *v = -v.clone();
                }
            }
            for i in 0..r {
                let q = h[i][col].div_floor(&h[r][col]);
                row_sub_mul(&mut h, i, r, &q);
                row_sub_mul(&mut u, i, r, &q);
            }
            r += 1;
        }
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form.
pub fn hnf(rows: &Mat, ncols: usize) -> Mat {
    let (h, _) = hnf_with_transform(rows, ncols);
    h.into_iter().filter(|r| r.iter().any(|v| !v.is_zero())).collect()
}

/// A basis of the left kernel `{x in Z^m : x * rows = 0}`.
pub fn left_kernel(rows: &Mat, ncols: usize) -> Mat {
    let (h, u) = hnf_with_transform(rows, ncols);
    h.iter()
        .zip(u)
        .filter(|(r, _)| r.iter().all(|v| v.is_zero()))
        .map(|(_, t)| t)
        .collect()
}

/// Smith normal form `s = u * a * v`; returns `(diagonal, v, v_inverse)`.
///
/// The diagonal has length `min(rows, cols)` padded by zeros up to `cols`,
/// each entry dividing the next among the nonzero ones.
pub fn smith(a: &Mat, ncols: usize) -> (Vec<BigInt>, Mat, Mat) {
    let nrows = a.len();
    let mut s = a.clone();
    let mut v = identity(ncols);
    let mut vinv = identity(ncols);
    let n = nrows.min(ncols);
    let mut t = 0usize;
    while t < n {
        // pick the smallest nonzero entry in the remaining block
        let mut piv: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !s[i][j].is_zero() {
                    match piv {
                        None => piv = Some((i, j)),
                        Some((pi, pj)) if s[i][j].abs() < s[pi][pj].abs() => piv = Some((i, j)),
                        _ => {}
                    }
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        s.swap(t, pi);
        swap_cols(&mut s, t, pj);
        swap_cols(&mut v, t, pj);
        vinv.swap(t, pj);
        let mut clean = true;
        for i in (t + 1)..nrows {
            if !s[i][t].is_zero() {
                let q = s[i][t].div_floor(&s[t][t]);
                row_sub_mul(&mut s, i, t, &q);
                if !s[i][t].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (t + 1)..ncols {
            if !s[t][j].is_zero() {
                let q = s[t][j].div_floor(&s[t][t]);
                col_sub_mul(&mut s, j, t, &q);
                col_sub_mul(&mut v, j, t, &q);
                // inverse transform: row t += q * row j
                let rj = vinv[j].clone();
                for (x, y) in vinv[t].iter_mut().zip(rj.iter()) {
                    *x += &q * y;
                }
                if !s[t][j].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold any non-multiple into row t
        let mut fixed = true;
        'outer: for i in (t + 1)..nrows {
            for j in (t + 1)..ncols {
                if !(&s[i][j] % &s[t][t]).is_zero() {
                    let ri = s[i].clone();
                    for (x, y) in s[t].iter_mut().zip(ri.iter()) {
                        *x += y;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        if s[t][t].is_negative() {
            for x in s[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let mut diag: Vec<BigInt> = (0..ncols)
        .map(|i| if i < nrows { s[i][i].clone() } else { BigInt::zero() })
        .collect();
    for d in diag.iter_mut() {
        *d = d.abs();
    }
    (diag, v, vinv)
}

fn swap_cols(m: &mut Mat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_sub_mul(m: &mut Mat, target: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[target] -= q * s;
    }
}

pub fn mat_vec_row(x: &[BigInt], m: &Mat) -> Vec<BigInt> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut out = vec![BigInt::zero(); ncols];
    for (xi, row) in x.iter().zip(m.iter()) {
        if xi.is_zero() {
            continue;
        }
        for (o, v) in out.iter_mut().zip(row.iter()) {
            *o += xi * v;
        }
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

pub fn to_u64(v: &BigInt) -> u64 {
    v.to_u64().expect("value does not fit in u64")
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(v: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut v = v.abs();
    let mut e = 0;
    while !v.is_zero() && (&v % &p).is_zero() {
        v /= &p;
        e += 1;
    }
    e
}
