//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own algorithms for the quantity being checked.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion. Only for tiny matrices.
pub fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Nonzero invariant factors from determinantal divisors: `d_k` is the gcd
/// of all `k x k` minors and the factors are `d_k / d_{k-1}`.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut out = Vec::new();
    let mut previous = 1i128;
    for k in 1..=rows.len().min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows.len(), k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / previous);
        previous = g;
    }
    out
}

pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> (Vec<Vec<i64>>, usize) {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let m = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    (m, cols)
}

/// Random nonsingular integer basis (columns) with entries in `[-bound, bound]`.
pub fn random_basis(rng: &mut ChaCha8Rng, rank: usize, bound: i64) -> Vec<Vec<i64>> {
    loop {
        let cols: Vec<Vec<i64>> = (0..rank).map(|_| (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let m: Vec<Vec<i128>> = cols.iter().map(|c| c.iter().map(|&x| x as i128).collect()).collect();
        if det(&m) != 0 {
            return cols;
        }
    }
}

/// Squared length of a shortest nonzero vector of the rank-2 lattice spanned
/// by the columns `u`, `v`, found by scanning every integer point of a box
/// and testing membership with Cramer's rule.
pub fn shortest_squared_rank2(u: [i64; 2], v: [i64; 2], radius_squared: i64) -> i64 {
    let d = u[0] as i128 * v[1] as i128 - u[1] as i128 * v[0] as i128;
    assert!(d != 0);
    let r = (radius_squared as f64).sqrt().ceil() as i64 + 1;
    let mut best = i64::MAX;
    for x in -r..=r {
        for y in -r..=r {
            let n2 = x * x + y * y;
            if n2 == 0 || n2 > radius_squared || n2 >= best {
                continue;
            }
            let a = x as i128 * v[1] as i128 - y as i128 * v[0] as i128;
            let b = u[0] as i128 * y as i128 - u[1] as i128 * x as i128;
            if a % d == 0 && b % d == 0 {
                best = n2;
            }
        }
    }
    best
}

/// Counts translates of the cell triangles lying strictly inside the open
/// parallelogram spanned by `u`, `v`, by direct scan of lattice translates
/// with integer orientation tests.
pub fn interior_triangles(cell: &[[(i64, i64); 3]], u: (i64, i64), v: (i64, i64)) -> u64 {
    let cross = |a: (i64, i64), b: (i64, i64)| a.0 * b.1 - a.1 * b.0;
    let d = cross(u, v);
    let (u, v, d) = if d < 0 { (v, u, -d) } else { (u, v, d) };
    // p is inside the open parallelogram iff 0 < cross(p, v) < d and
    // 0 < cross(u, p) < d.
    let inside = |p: (i64, i64)| {
        let s = cross(p, v);
        let t = cross(u, p);
        0 < s && s < d && 0 < t && t < d
    };
    let xs = [0, u.0, v.0, u.0 + v.0];
    let ys = [0, u.1, v.1, u.1 + v.1];
    let (x0, x1) = (*xs.iter().min().unwrap() - 3, *xs.iter().max().unwrap() + 3);
    let (y0, y1) = (*ys.iter().min().unwrap() - 3, *ys.iter().max().unwrap() + 3);
    let mut count = 0;
    for a in x0..=x1 {
        for b in y0..=y1 {
            for tri in cell {
                if tri.iter().all(|&(x, y)| inside((x + a, y + b))) {
                    count += 1;
                }
            }
        }
    }
    count
}
