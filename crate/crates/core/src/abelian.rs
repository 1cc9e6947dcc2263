//! Abelianization by Smith normal form over arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::presentation::Presentation;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m.entries[i * cols + j] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = q * self.get(src, j);
            *self.at(dst, j) -= v;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = q * self.get(i, src);
            *self.at(i, dst) -= v;
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Relation matrix of the abelianization: entry `(i, j)` is the exponent sum
/// of generator `j` in relator `i`.
pub fn abelianize(p: &Presentation) -> IntegerMatrix {
    let n = p.generator_count();
    let rows: Vec<Vec<i64>> = p.relators().iter().map(|r| r.exponent_sums(n)).collect();
    IntegerMatrix::from_rows(&rows, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Nonzero invariant factors `d1 | d2 | ...`, all positive.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    /// Free rank of the cokernel: columns minus rank.
    pub betti: usize,
    pub torsion_order: BigInt,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

impl fmt::Display for SmithForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.betti > 0 {
            parts.push(if self.betti == 1 { "Z".into() } else { format!("Z^{}", self.betti) });
        }
        parts.extend(self.torsion_factors().iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Smith normal form by unimodular row and column operations, pivoting on
/// the entry of least absolute value.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = a.get(i, j);
                    if !v.is_zero() && pivot.is_none_or(|(pi, pj)| v.abs() < a.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(diagonal, cols);
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let p = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = a.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    a.row_sub(i, t, &q);
                }
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = a.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    a.col_sub(j, t, &q);
                }
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold a non-multiple into the pivot row and retry.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => a.row_sub(t, i, &BigInt::from(-1)),
                None => {
                    diagonal.push(p.abs());
                    break;
                }
            }
        }
    }
    finish(diagonal, cols)
}

fn finish(diagonal: Vec<BigInt>, cols: usize) -> SmithForm {
    let rank = diagonal.len();
    let torsion_order = diagonal.iter().fold(BigInt::one(), |acc, d| acc * d);
    SmithForm {
        diagonal,
        rank,
        betti: cols - rank,
        torsion_order,
    }
}

/// The torsion floor `T(G) >= log_3 |Tor(G^ab)|`, kept in integer form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionBound {
    pub torsion_order: BigInt,
    /// Least `k` with `3^k >= torsion_order`; the integer floor on cost.
    pub ceil_log3: u32,
    /// The floor is only a theorem for groups without 2-torsion. Set unless
    /// the caller vouched for that, and always when the torsion is even.
    pub caveat: bool,
}

impl TorsionBound {
    pub fn holds_for(&self, cost: u64) -> bool {
        cost >= self.ceil_log3 as u64
    }
}

pub fn torsion_lower_bound(p: &Presentation, no_two_torsion: bool) -> TorsionBound {
    let snf = smith_normal_form(&abelianize(p));
    let torsion_order = snf.torsion_order;
    let three = BigInt::from(3);
    let mut k = 0u32;
    let mut power = BigInt::one();
    while power < torsion_order {
        power *= &three;
        k += 1;
    }
    TorsionBound {
        caveat: !no_two_torsion || torsion_order.is_even(),
        torsion_order,
        ceil_log3: k,
    }
}

/// `3^cost >= torsion order` of the presentation's own abelianization.
pub fn torsion_floor_holds(p: &Presentation) -> bool {
    torsion_lower_bound(p, true).holds_for(p.tcost().value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
        smith_normal_form(&IntegerMatrix::from_rows(rows, cols))
            .diagonal
            .iter()
            .map(|d| d.try_into().unwrap())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(snf(&[vec![9]], 1), vec![9]);
        assert_eq!(snf(&[vec![4, 6], vec![2, 4]], 2), vec![2, 2]);
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(snf(&[vec![0, 0, 0]], 3), Vec::<i64>::new());
    }

    #[test]
    fn cyclic_nine() {
        let p = Presentation::parse("< x | x^9 >").unwrap();
        let b = torsion_lower_bound(&p, true);
        assert_eq!(b.torsion_order, BigInt::from(9));
        assert_eq!(b.ceil_log3, 2);
        assert!(!b.caveat);
        assert!(torsion_floor_holds(&p));
    }

    #[test]
    fn display() {
        let p = Presentation::parse("< a, b, c | a^4, b^6, a^2 b^3 >").unwrap();
        assert_eq!(smith_normal_form(&abelianize(&p)).to_string(), "Z + Z/12");
    }
}
