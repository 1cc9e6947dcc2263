//! Exact lattice arithmetic: LLL reduction, covolume, reduced-basis
//! certificates and the rank-2 fundamental-domain triangle count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("basis must be square and nonempty, got {rank} vectors of dimension {dimension}")]
    Shape { rank: usize, dimension: usize },
    #[error("basis vectors are linearly dependent")]
    Degenerate,
    #[error("delta must lie strictly between 1/4 and 1")]
    BadDelta,
    #[error("weights must be positive and match the rank")]
    BadWeights,
    #[error("certificate failed: witness {witness} is below epsilon {epsilon}")]
    CertificateFailure { witness: Box<BigRational>, epsilon: Box<BigRational> },
    #[error("at least two norms are required, got {0}")]
    TooFewNorms(usize),
    #[error("norms and epsilon must be positive")]
    NonPositive,
    #[error("this operation needs rank 2")]
    NotRankTwo,
    #[error("sublattice basis must have integer entries")]
    NotIntegral,
    #[error("layout triangle {0} is degenerate")]
    DegenerateTriangle(usize),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Column basis of a full-rank lattice in `Q^r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    columns: Vec<Vec<BigRational>>,
}

impl LatticeBasis {
    pub fn new(columns: Vec<Vec<BigRational>>) -> Result<Self, LatticeError> {
        let rank = columns.len();
        if rank == 0 || columns.iter().any(|c| c.len() != rank) {
            return Err(LatticeError::Shape {
                rank,
                dimension: columns.first().map_or(0, |c| c.len()),
            });
        }
        let b = LatticeBasis { columns };
        if b.determinant().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(b)
    }

    pub fn from_integer_columns(columns: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(columns.iter().map(|c| c.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn identity(rank: usize) -> Self {
        let columns = (0..rank)
            .map(|j| (0..rank).map(|i| if i == j { rat(1) } else { rat(0) }).collect())
            .collect();
        LatticeBasis { columns }
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<BigRational>] {
        &self.columns
    }

    /// Integer entries, if every entry is an integer.
    pub fn integer_columns(&self) -> Option<Vec<Vec<BigInt>>> {
        self.columns
            .iter()
            .map(|c| c.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
            .collect()
    }

    /// Determinant of the column matrix by exact Gaussian elimination.
    pub fn determinant(&self) -> BigRational {
        determinant(&self.columns)
    }

    /// `|det|`, the covolume of the lattice.
    pub fn covolume(&self) -> BigRational {
        self.determinant().abs()
    }
}

fn determinant(columns: &[Vec<BigRational>]) -> BigRational {
    let n = columns.len();
    // Rows of the transpose have the same determinant.
    let mut m: Vec<Vec<BigRational>> = columns.to_vec();
    let mut det = rat(1);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return rat(0);
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] -= v;
            }
        }
    }
    det
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(rat(0), |acc, (x, y)| acc + x * y)
}

/// Gram–Schmidt data: squared norms `B_i` and coefficients `mu[i][j]`.
fn gram_schmidt(b: &[Vec<BigRational>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![rat(0); n]; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &star[j]) / &norms[j];
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= &mu[i][j] * s;
            }
        }
        norms.push(dot(&v, &v));
        star.push(v);
    }
    (norms, mu)
}

fn round(x: &BigRational) -> BigInt {
    (x + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LllReduction {
    pub basis: LatticeBasis,
    /// Integer change of basis: reduced column `j` is
    /// `sum_i transform[i][j] * original column i`. Determinant is `±1`.
    pub transform: Vec<Vec<BigInt>>,
}

pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

/// LLL reduction with parameter `delta` in `(1/4, 1)`, in exact rational
/// arithmetic with the Euclidean inner product.
pub fn lll_reduce(b: &LatticeBasis, delta: &BigRational) -> Result<LllReduction, LatticeError> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta >= rat(1) {
        return Err(LatticeError::BadDelta);
    }
    let n = b.rank();
    let mut basis = b.columns.clone();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let (mut norms, mut mu) = gram_schmidt(&basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let q = round(&mu[k][j]);
            if q.is_zero() {
                continue;
            }
            let qr = BigRational::from_integer(q.clone());
            for i in 0..n {
                let v = &qr * &basis[j][i];
                basis[k][i] -= v;
                let w = &q * &u[i][j];
                u[i][k] -= w;
            }
            (norms, mu) = gram_schmidt(&basis);
        }
        let lhs = norms[k].clone();
        let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            (norms, mu) = gram_schmidt(&basis);
            k = (k - 1).max(1);
        }
    }
    Ok(LllReduction {
        basis: LatticeBasis { columns: basis },
        transform: u,
    })
}

/// Checks the size-reduction and Lovász conditions.
pub fn is_lll_reduced(b: &LatticeBasis, delta: &BigRational) -> bool {
    let (norms, mu) = gram_schmidt(&b.columns);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..b.rank() {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 && norms[i] < (delta - &mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1] {
            return false;
        }
    }
    true
}

/// `||v|| = sum a_i |v_i|`, the 1-norm in the basis `(e_1/a_1, ..., e_r/a_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedOneNorm {
    pub weights: Vec<BigRational>,
}

impl WeightedOneNorm {
    pub fn new(weights: Vec<BigRational>) -> Result<Self, LatticeError> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_positive()) {
            return Err(LatticeError::BadWeights);
        }
        Ok(WeightedOneNorm { weights })
    }

    pub fn unit(rank: usize) -> Self {
        WeightedOneNorm {
            weights: vec![rat(1); rank],
        }
    }

    pub fn norm(&self, v: &[BigRational]) -> BigRational {
        v.iter().zip(&self.weights).fold(rat(0), |acc, (x, a)| acc + x.abs() * a)
    }
}

/// Default constant for the reduced-basis inequality
/// `covolume >= eps_r * prod ||b_i||` on LLL-reduced bases:
///
/// `eps_r = 1 / (amax^r * r^ceil(r/2) * alpha^ceil(r(r-1)/4))`,
/// `alpha = 1 / (delta - 1/4)`.
///
/// It combines the LLL bound `prod |b_i|_2 <= alpha^(r(r-1)/4) covolume`
/// with `||v|| <= amax * sqrt(r) * |v|_2`; exponents are rounded up so the
/// constant stays rational and only gets smaller.
pub fn default_epsilon(norm: &WeightedOneNorm, delta: &BigRational) -> BigRational {
    let r = norm.weights.len() as u64;
    let amax = norm.weights.iter().max().cloned().unwrap_or_else(|| rat(1));
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let alpha = rat(1) / (delta - quarter);
    let pow = |base: &BigRational, e: u64| (0..e).fold(rat(1), |acc, _| acc * base);
    let denom = pow(&amax, r) * pow(&rat(r as i64), r.div_ceil(2)) * pow(&alpha, (r * (r - 1)).div_ceil(4));
    rat(1) / denom
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub product_of_norms: BigRational,
    pub covolume: BigRational,
    /// `covolume / product_of_norms`.
    pub epsilon_witness: BigRational,
    pub epsilon: BigRational,
}

/// Verifies `covolume >= epsilon * prod ||b_i||` for an already reduced
/// basis.
pub fn reduced_basis_certificate(
    b: &LatticeBasis,
    norm: &WeightedOneNorm,
    epsilon: &BigRational,
) -> Result<Certificate, LatticeError> {
    if norm.weights.len() != b.rank() {
        return Err(LatticeError::BadWeights);
    }
    let product_of_norms = b.columns.iter().fold(rat(1), |acc, c| acc * norm.norm(c));
    let covolume = b.covolume();
    let epsilon_witness = &covolume / &product_of_norms;
    if epsilon_witness < *epsilon {
        return Err(LatticeError::CertificateFailure {
            witness: Box::new(epsilon_witness),
            epsilon: Box::new(epsilon.clone()),
        });
    }
    Ok(Certificate {
        product_of_norms,
        covolume,
        epsilon_witness,
        epsilon: epsilon.clone(),
    })
}

/// `t_g + (sum norms) / (epsilon * prod norms)`: the absolute cost bound
/// obtained by coning off a reduced basis of the peripheral lattice.
pub fn relative_to_absolute_bound(t_g: u64, norms: &[BigRational], epsilon: &BigRational) -> Result<BigRational, LatticeError> {
    if norms.len() < 2 {
        return Err(LatticeError::TooFewNorms(norms.len()));
    }
    if !epsilon.is_positive() || norms.iter().any(|x| !x.is_positive()) {
        return Err(LatticeError::NonPositive);
    }
    let sum = norms.iter().fold(rat(0), |acc, x| acc + x);
    let prod = norms.iter().fold(rat(1), |acc, x| acc * x);
    Ok(rat(t_g as i64) + sum / (epsilon * prod))
}

/// Triangles of one unit cell of `Z^2`, translated by every lattice vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellLayout {
    pub triangles: Vec<[(BigRational, BigRational); 3]>,
}

impl CellLayout {
    pub fn new(triangles: Vec<[(BigRational, BigRational); 3]>) -> Result<Self, LatticeError> {
        for (i, t) in triangles.iter().enumerate() {
            let area2 = (&t[1].0 - &t[0].0) * (&t[2].1 - &t[0].1) - (&t[2].0 - &t[0].0) * (&t[1].1 - &t[0].1);
            if area2.is_zero() {
                return Err(LatticeError::DegenerateTriangle(i));
            }
        }
        Ok(CellLayout { triangles })
    }

    pub fn from_integer_triangles(triangles: &[[(i64, i64); 3]]) -> Result<Self, LatticeError> {
        Self::new(
            triangles
                .iter()
                .map(|t| t.map(|(x, y)| (rat(x), rat(y))))
                .collect(),
        )
    }

    /// Peripheral torus with generators `z1 = (1,0)`, `z2 = (0,1)` and the
    /// extra element `z1' = z1^2 z2 = (2,1)`: the commutator square split
    /// into two triangles plus the triangle `z1, z1 z2, z1'`.
    pub fn fig8proof() -> Self {
        Self::from_integer_triangles(&[[(0, 0), (1, 0), (1, 1)], [(0, 0), (1, 1), (0, 1)], [(0, 0), (1, 0), (2, 1)]])
            .expect("fixed layout is non-degenerate")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "fig8proof" => Some(Self::fig8proof()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionCounts {
    pub total_triangles: u64,
    /// Triangles of the quotient torus whose closure lifts into the open
    /// fundamental parallelogram.
    pub interior_contracted: u64,
    pub boundary_remaining: u64,
}

/// Coordinates of `p` in the basis `(u, v)`.
fn sub_coords(u: &(BigRational, BigRational), v: &(BigRational, BigRational), det: &BigRational, p: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let s = (&p.0 * &v.1 - &p.1 * &v.0) / det;
    let t = (&u.0 * &p.1 - &u.1 * &p.0) / det;
    (s, t)
}

/// Counts, for the torus `R^2 / sub` tiled by the layout, how many
/// triangles lie in the open parallelogram spanned by the basis of `sub`.
pub fn fundamental_domain_contraction(layout: &CellLayout, sub: &LatticeBasis) -> Result<ContractionCounts, LatticeError> {
    if sub.rank() != 2 {
        return Err(LatticeError::NotRankTwo);
    }
    let cols = sub.integer_columns().ok_or(LatticeError::NotIntegral)?;
    let det = sub.determinant();
    let index = det.abs().to_integer().to_u64().expect("index fits in u64");
    let u = (sub.columns[0][0].clone(), sub.columns[0][1].clone());
    let v = (sub.columns[1][0].clone(), sub.columns[1][1].clone());

    // Coset representatives of Z^2 / sub: integer points of the half-open
    // parallelogram.
    let xs = [BigInt::zero(), cols[0][0].clone(), cols[1][0].clone(), &cols[0][0] + &cols[1][0]];
    let ys = [BigInt::zero(), cols[0][1].clone(), cols[1][1].clone(), &cols[0][1] + &cols[1][1]];
    let (x0, x1) = (xs.iter().min().unwrap().clone(), xs.iter().max().unwrap().clone());
    let (y0, y1) = (ys.iter().min().unwrap().clone(), ys.iter().max().unwrap().clone());
    let zero = rat(0);
    let one = rat(1);
    let mut reps = Vec::new();
    let mut x = x0.clone();
    while x <= x1 {
        let mut y = y0.clone();
        while y <= y1 {
            let p = (BigRational::from_integer(x.clone()), BigRational::from_integer(y.clone()));
            let (s, t) = sub_coords(&u, &v, &det, &p);
            if s >= zero && s < one && t >= zero && t < one {
                reps.push(p);
            }
            y += 1;
        }
        x += 1;
    }
    debug_assert_eq!(reps.len() as u64, index);

    let mut interior = 0u64;
    for rep in &reps {
        for tri in &layout.triangles {
            let moved: Vec<(BigRational, BigRational)> = tri.iter().map(|(a, b)| (a + &rep.0, b + &rep.1)).collect();
            // Shift by a sublattice vector so the first vertex lands in the
            // half-open parallelogram; only that translate can be inside.
            let (s, t) = sub_coords(&u, &v, &det, &moved[0]);
            let (fs, ft) = (s.floor(), t.floor());
            let inside = moved.iter().all(|p| {
                let (s, t) = sub_coords(&u, &v, &det, p);
                let (s, t) = (s - &fs, t - &ft);
                s > zero && s < one && t > zero && t < one
            });
            interior += inside as u64;
        }
    }
    let total = index * layout.triangles.len() as u64;
    Ok(ContractionCounts {
        total_triangles: total,
        interior_contracted: interior,
        boundary_remaining: total - interior,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u64,
    pub counts: ContractionCounts,
    /// `boundary / total`.
    pub boundary_ratio: BigRational,
}

/// Counts on the dilations `k * sub` for `k = 1..=kmax`.
pub fn contraction_sweep(layout: &CellLayout, sub: &LatticeBasis, kmax: u64) -> Result<Vec<SweepRow>, LatticeError> {
    (1..=kmax)
        .map(|k| {
            let kr = rat(k as i64);
            let scaled = LatticeBasis::new(sub.columns.iter().map(|c| c.iter().map(|x| x * &kr).collect()).collect())?;
            let counts = fundamental_domain_contraction(layout, &scaled)?;
            let boundary_ratio = BigRational::new(counts.boundary_remaining.into(), counts.total_triangles.into());
            Ok(SweepRow { k, counts, boundary_ratio })
        })
        .collect()
}

/// Parses `"3,-1;1,4"` into columns `(3,-1)` and `(1,4)`. Entries may be
/// integers or fractions `p/q`.
pub fn parse_columns(text: &str) -> Option<Vec<Vec<BigRational>>> {
    text.split(';')
        .map(|col| col.split(',').map(|x| parse_rational(x.trim())).collect::<Option<Vec<_>>>())
        .collect()
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    match text.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

/// Determinant of a square integer matrix, e.g. an LLL transform.
pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let cols: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let d = determinant(&cols);
    debug_assert!(d.is_integer());
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(cols: &[Vec<i64>]) -> LatticeBasis {
        LatticeBasis::from_integer_columns(cols).unwrap()
    }

    #[test]
    fn covolume_example() {
        assert_eq!(basis(&[vec![3, -1], vec![1, 4]]).covolume(), rat(13));
        assert_eq!(LatticeBasis::identity(3).covolume(), rat(1));
    }

    #[test]
    fn lll_examples() {
        let d = default_delta();
        let r = lll_reduce(&LatticeBasis::identity(2), &d).unwrap();
        assert_eq!(r.basis, LatticeBasis::identity(2));
        let r = lll_reduce(&basis(&[vec![1, 0], vec![100, 1]]), &d).unwrap();
        assert_eq!(r.basis, LatticeBasis::identity(2));
        let b = basis(&[vec![3, -1], vec![1, 4]]);
        let r = lll_reduce(&b, &d).unwrap();
        assert_eq!(r.basis.covolume(), rat(13));
        assert!(is_lll_reduced(&r.basis, &d));
        assert_eq!(integer_determinant(&r.transform).abs(), BigInt::one());
    }

    #[test]
    fn epsilon_for_unit_weights() {
        let d = default_delta();
        assert_eq!(default_epsilon(&WeightedOneNorm::unit(2), &d), BigRational::new(1.into(), 4.into()));
        assert_eq!(default_epsilon(&WeightedOneNorm::unit(1), &d), rat(1));
    }

    #[test]
    fn absolute_bound() {
        let quarter = BigRational::new(1.into(), 4.into());
        let b = relative_to_absolute_bound(6, &[rat(10), rat(10)], &quarter).unwrap();
        assert_eq!(b, BigRational::new(34.into(), 5.into()));
        assert_eq!(relative_to_absolute_bound(6, &[rat(10)], &quarter), Err(LatticeError::TooFewNorms(1)));
    }

    #[test]
    fn contraction_example() {
        let c = fundamental_domain_contraction(&CellLayout::fig8proof(), &basis(&[vec![3, -1], vec![1, 4]])).unwrap();
        assert_eq!(c.total_triangles, 39);
        assert_eq!(c.interior_contracted, 15);
        assert_eq!(c.boundary_remaining, 24);
        let c = fundamental_domain_contraction(&CellLayout::fig8proof(), &LatticeBasis::identity(2)).unwrap();
        assert_eq!((c.total_triangles, c.interior_contracted), (3, 0));
    }

    #[test]
    fn parse_basis_text() {
        let cols = parse_columns("3,-1;1,4").unwrap();
        assert_eq!(LatticeBasis::new(cols).unwrap(), basis(&[vec![3, -1], vec![1, 4]]));
        assert!(parse_columns("1,x").is_none());
        assert_eq!(parse_rational("3/6"), Some(BigRational::new(1.into(), 2.into())));
    }
}
