//! Translation between typed groups and lattice simplices, with exact
//! integer linear algebra throughout.
//!
//! A group `G` of width `N` determines a rational lattice `L` generated by
//! `Z^N` and the elements of `G`; the corresponding simplex has one vertex
//! per coordinate, chosen so that the fractional-weight group of the
//! vertex matrix is exactly `G` again.  The reverse direction enumerates
//! the fractional weight vectors of an arbitrary lattice simplex.  Both
//! directions use Hermite normal forms and a diagonalization over the
//! integers; no floating point is involved anywhere.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group_core::{HeightedGroup, DEFAULT_CLOSURE_CAP};
use crate::qz_arith::{fract, ModOneVector, Rational};

/// Default ceiling on the simplex dimension accepted by the Ehrhart
/// counter; the work grows like `m^d` with the dimension.
pub const DEFAULT_EHRHART_DIM_CAP: usize = 7;

/// Hard ceiling on the number of weight classes one Ehrhart count may
/// enumerate; the class count is `m^d` times the normalized volume.
const EHRHART_ENUM_CAP: u128 = 50_000_000;

/// A lattice simplex, stored as its `d + 1` vertices in `Z^d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplexModel {
    vertices: Vec<Vec<BigInt>>,
}

impl SimplexModel {
    /// Builds a simplex from its vertices; all vertices must live in the
    /// same `Z^d` and there must be exactly `d + 1` of them.  Affine
    /// degeneracy is detected later, by the operations that require full
    /// dimension.
    pub fn new(vertices: Vec<Vec<BigInt>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::BadParameter(
                "a simplex needs at least one vertex".to_string(),
            ));
        }
        let d = vertices.len() - 1;
        for v in &vertices {
            if v.len() != d {
                return Err(Error::LengthMismatch {
                    left: v.len(),
                    right: d,
                });
            }
        }
        Ok(SimplexModel { vertices })
    }

    /// Convenience constructor from machine-integer rows.
    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Rows `v_i - v_0` for `i >= 1`: a `d x d` integer matrix.
    pub fn edge_matrix(&self) -> Vec<Vec<BigInt>> {
        let base = &self.vertices[0];
        self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Normalized volume: the absolute determinant of the edge matrix.
    pub fn normalized_volume(&self) -> Result<BigInt> {
        let h = row_hnf(self.edge_matrix());
        if h.len() != self.dimension() {
            return Err(Error::DegenerateSimplex);
        }
        let mut det = BigInt::one();
        for (i, row) in h.iter().enumerate() {
            det *= &row[i];
        }
        Ok(det)
    }
}

/// The coefficient vector of a simplex: entry `j` counts the fractional
/// weight vectors of height `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HStarVector(Vec<u64>);

impl HStarVector {
    pub fn new(coefficients: Vec<u64>) -> Self {
        HStarVector(coefficients)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.0
    }

    /// Sum of the coefficients: the normalized volume.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

fn abs(x: &BigInt) -> BigInt {
    Signed::abs(x)
}

fn transpose(mat: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    (0..cols)
        .map(|j| mat.iter().map(|row| row[j].clone()).collect())
        .collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .map(|(x, brow)| x * &brow[j])
                        .sum::<BigInt>()
                })
                .collect()
        })
        .collect()
}

/// Row Hermite normal form: row echelon over the integers with positive
/// pivots and the entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped, so the result has one row per pivot.
fn row_hnf(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let (mut h, _, pivots) = hnf_engine(rows, false);
    h.truncate(pivots.len());
    h
}

/// Echelon rows, the row transform that produced them, and the pivot
/// positions `(row, column)`.
type Echelon = (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<(usize, usize)>);

/// Row HNF together with the unimodular row transform `U` (so `U * input`
/// equals the full echelon result, zero rows included) and the pivot
/// positions `(row, column)`.
fn row_hnf_with_transform(rows: Vec<Vec<BigInt>>) -> Echelon {
    hnf_engine(rows, true)
}

// Index loops update two rows of the same matrix in lockstep, which
// iterators cannot borrow simultaneously.
#[allow(clippy::needless_range_loop)]
fn hnf_engine(mut rows: Vec<Vec<BigInt>>, track: bool) -> Echelon {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut u: Vec<Vec<BigInt>> = if track {
        (0..nrows)
            .map(|i| {
                (0..nrows)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut pivots = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        if pivot_row == nrows {
            break;
        }
        // Euclidean elimination below the working row until one nonzero
        // entry remains in this column.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..nrows {
                if !rows[i][col].is_zero()
                    && best.is_none_or(|b| abs(&rows[i][col]) < abs(&rows[b][col]))
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            if track {
                u.swap(pivot_row, b);
            }
            let mut reduced_any = false;
            for i in pivot_row + 1..nrows {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[pivot_row][col];
                if !q.is_zero() {
                    for j in 0..ncols {
                        let delta = &q * &rows[pivot_row][j];
                        rows[i][j] -= delta;
                    }
                    if track {
                        for j in 0..nrows {
                            let delta = &q * &u[pivot_row][j];
                            u[i][j] -= delta;
                        }
                    }
                }
                if !rows[i][col].is_zero() {
                    reduced_any = true;
                }
            }
            if !reduced_any {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for j in 0..ncols {
                let neg = -rows[pivot_row][j].clone();
                rows[pivot_row][j] = neg;
            }
            if track {
                for j in 0..nrows {
                    let neg = -u[pivot_row][j].clone();
                    u[pivot_row][j] = neg;
                }
            }
        }
        for i in 0..pivot_row {
            let q = rows[i][col].div_floor(&rows[pivot_row][col]);
            if !q.is_zero() {
                for j in 0..ncols {
                    let delta = &q * &rows[pivot_row][j];
                    rows[i][j] -= delta;
                }
                if track {
                    for j in 0..nrows {
                        let delta = &q * &u[pivot_row][j];
                        u[i][j] -= delta;
                    }
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
    }
    (rows, u, pivots)
}

/// Solves `x * basis = target` over the integers, if a solution exists.
/// `basis` rows need not be in echelon form.
fn solve_left(basis: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    let (h, u, pivots) = row_hnf_with_transform(basis.to_vec());
    let mut y = vec![BigInt::zero(); basis.len()];
    let mut residual: Vec<BigInt> = target.to_vec();
    for &(row, col) in &pivots {
        let (q, r) = residual[col].div_rem(&h[row][col]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for j in 0..residual.len() {
                let delta = &q * &h[row][j];
                residual[j] -= delta;
            }
        }
        y[row] = q;
    }
    if residual.iter().any(|r| !r.is_zero()) {
        return None;
    }
    // x = y * U.
    let cols = basis.len();
    let x: Vec<BigInt> = (0..cols)
        .map(|j| y.iter().zip(&u).map(|(yi, urow)| yi * &urow[j]).sum())
        .collect();
    Some(x)
}

/// Diagonalizes a square integer matrix by unimodular row and column
/// operations, tracking only the row transform: returns `(diag, U)` with
/// `U * A * V` diagonal for some untracked unimodular `V`.
// Index loops update two rows of the same matrix in lockstep, which
// iterators cannot borrow simultaneously.
#[allow(clippy::needless_range_loop)]
fn diagonalize(mut a: Vec<Vec<BigInt>>) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let n = a.len();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    for t in 0..n {
        loop {
            // Pick the nonzero entry of smallest magnitude in the trailing
            // block as the working pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| abs(&a[i][j]) < abs(&a[bi][bj]))
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let mut dirty = false;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in 0..n {
                        let delta = &q * &a[t][j];
                        a[i][j] -= delta;
                    }
                    for j in 0..n {
                        let delta = &q * &u[t][j];
                        u[i][j] -= delta;
                    }
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in 0..n {
                        let delta = &q * &a[i][t];
                        a[i][j] -= delta;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty
                && a[t + 1..].iter().all(|row| row[t].is_zero())
                && a[t][t + 1..].iter().all(|x| x.is_zero())
            {
                break;
            }
        }
        if a[t][t].is_negative() {
            for j in 0..n {
                let neg = -a[t][j].clone();
                a[t][j] = neg;
            }
            for j in 0..n {
                let neg = -u[t][j].clone();
                u[t][j] = neg;
            }
        }
    }
    let diag = (0..n).map(|i| a[i][i].clone()).collect();
    (diag, u)
}

/// Builds the canonical simplex of a group: one vertex per coordinate,
/// the first at the origin, the rest read off from a Hermite basis of the
/// height-zero sublattice of the group's lattice.  The edge matrix is
/// normalized by unimodular column operations, which change coordinates
/// of the ambient lattice but not the simplex's weight group.
pub fn group_to_simplex(g: &HeightedGroup) -> Result<SimplexModel> {
    let n = g.width();
    let mut scale = 1u64;
    for &o in g.coord_orders() {
        scale = scale.lcm(&o);
    }
    let d_big = BigInt::from(scale);

    // Basis of scale * L, where L is generated by Z^N and the elements.
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        d_big.clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    for x in g.elements() {
        rows.push(
            x.entries()
                .iter()
                .map(|e| {
                    let scaled = e * &Rational::from_integer(d_big.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect(),
        );
    }
    let b = row_hnf(rows);
    if b.len() != n {
        return Err(Error::Inconsistent(
            "lattice basis is not full rank".to_string(),
        ));
    }

    // Heights of the basis rows; the height-zero sublattice is their kernel.
    let heights: Vec<Vec<BigInt>> = b.iter().map(|row| vec![row.iter().sum()]).collect();
    let (ht_h, ht_u, ht_pivots) = row_hnf_with_transform(heights);
    if ht_pivots.len() != 1 || ht_h[0][0] != d_big {
        return Err(Error::Inconsistent(format!(
            "height gcd over the scaled lattice should be {scale}"
        )));
    }
    let kernel: Vec<Vec<BigInt>> = ht_u[1..].to_vec();
    let b0 = row_hnf(mat_mul(&kernel, &b));
    if b0.len() != n - 1 {
        return Err(Error::Inconsistent(
            "height-zero sublattice is not of corank one".to_string(),
        ));
    }

    // Vertex i solves x * B0 = scale * (e_i - e_0).
    let mut edge_rows: Vec<Vec<BigInt>> = Vec::with_capacity(n - 1);
    for i in 1..n {
        let mut target = vec![BigInt::zero(); n];
        target[i] = d_big.clone();
        target[0] = -d_big.clone();
        let x = solve_left(&b0, &target).ok_or_else(|| {
            Error::Inconsistent("construction point escaped the lattice".to_string())
        })?;
        edge_rows.push(x);
    }

    // Normalize by column operations: transpose, row-reduce, transpose.
    let h = row_hnf(transpose(&edge_rows));
    if h.len() != n - 1 {
        return Err(Error::Inconsistent("edge matrix is singular".to_string()));
    }
    let normalized = transpose(&h);
    let mut vertices = Vec::with_capacity(n);
    vertices.push(vec![BigInt::zero(); n - 1]);
    vertices.extend(normalized);
    SimplexModel::new(vertices)
}

/// Recovers the weight group of a simplex: all vectors in `[0,1)^{d+1}`
/// whose weighted vertex sum and total weight are integral.  The group
/// order equals the normalized volume; enumeration is refused above the
/// closure cap.
pub fn simplex_to_group(s: &SimplexModel) -> Result<HeightedGroup> {
    let n = s.vertices().len();
    let a: Vec<Vec<BigInt>> = s
        .vertices()
        .iter()
        .map(|v| {
            let mut row = v.clone();
            row.push(BigInt::one());
            row
        })
        .collect();
    let (diag, u) = diagonalize(a);
    if diag.iter().any(|d| d.is_zero()) {
        return Err(Error::DegenerateSimplex);
    }
    let mut order = BigInt::one();
    for d in &diag {
        order *= abs(d);
    }
    if order > BigInt::from(DEFAULT_CLOSURE_CAP) {
        return Err(Error::ClosureCapExceeded {
            cap: DEFAULT_CLOSURE_CAP,
        });
    }
    let moduli: Vec<u64> = diag
        .iter()
        .map(|d| abs(d).to_u64().expect("bounded by the closure cap"))
        .collect();

    // Scale row j of U by 1/moduli_j once; group elements are the integer
    // combinations of these rows, taken mod 1.
    let scaled_rows: Vec<Vec<Rational>> = u
        .iter()
        .zip(&moduli)
        .map(|(row, &m)| {
            row.iter()
                .map(|x| Rational::new(x.clone(), BigInt::from(m)))
                .collect()
        })
        .collect();
    let mut elements = Vec::new();
    let mut counter = vec![0u64; n];
    loop {
        let mut entries = vec![Rational::zero(); n];
        for (j, &t) in counter.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let t_big = Rational::from_integer(BigInt::from(t));
            for (c, entry) in entries.iter_mut().enumerate() {
                *entry += &scaled_rows[j][c] * &t_big;
            }
        }
        let reduced: Vec<Rational> = entries.iter().map(fract).collect();
        elements.push(ModOneVector::new(reduced)?);

        let mut j = 0;
        loop {
            if j == n {
                return HeightedGroup::from_closed(elements);
            }
            counter[j] += 1;
            if counter[j] < moduli[j] {
                break;
            }
            counter[j] = 0;
            j += 1;
        }
    }
}

/// The coefficient vector of a simplex, computed from its weight group.
pub fn hstar_of_simplex(s: &SimplexModel) -> Result<HStarVector> {
    let g = simplex_to_group(s)?;
    Ok(HStarVector::new(g.hstar_vector(s.dimension())))
}

/// A simplex is a lattice pyramid exactly when some coordinate of its
/// weight group is identically zero.
pub fn is_lattice_pyramid(s: &SimplexModel) -> Result<bool> {
    let g = simplex_to_group(s)?;
    Ok(!g.zero_coordinates().is_empty())
}

/// Counts lattice points of the `m`-th dilate by direct enumeration, with
/// the default dimension cap.
pub fn ehrhart_count(s: &SimplexModel, m: u64) -> Result<BigInt> {
    ehrhart_count_capped(s, m, DEFAULT_EHRHART_DIM_CAP)
}

/// Counts lattice points of the `m`-th dilate exactly, in barycentric
/// coordinates.  A point `x` of the dilate is `x = mu * (m * E)` with
/// `mu >= 0` and `sum(mu) <= 1`; it is integral exactly when `mu` lies in
/// the superlattice `{mu : mu * mE is integral}` of `Z^d`, whose classes
/// mod `Z^d` are read off a diagonalization of `mE`.  Each class has one
/// representative in `[0,1)^d`, and the only admissible weights on the
/// boundary slice `mu_i = 1` are the `d` unit vectors, so the count is
/// `#{representatives with sum <= 1} + d`.  The work is `m^d` times the
/// normalized volume, independent of the simplex shape.
pub fn ehrhart_count_capped(s: &SimplexModel, m: u64, dim_cap: usize) -> Result<BigInt> {
    let d = s.dimension();
    if d > dim_cap {
        return Err(Error::DimensionCapExceeded {
            dim: d,
            cap: dim_cap,
        });
    }
    if m == 0 {
        return Err(Error::BadParameter(
            "dilation factor must be positive".to_string(),
        ));
    }
    if d == 0 {
        return Ok(BigInt::one());
    }
    let m_big = BigInt::from(m);
    let dilated: Vec<Vec<BigInt>> = s
        .edge_matrix()
        .iter()
        .map(|row| row.iter().map(|x| x * &m_big).collect())
        .collect();
    let (diag, u) = diagonalize(dilated);
    if diag.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateSimplex);
    }
    let mut classes = BigInt::one();
    for x in &diag {
        classes *= abs(x);
    }
    if classes > BigInt::from(EHRHART_ENUM_CAP) {
        return Err(Error::BadParameter("enumeration is too large".to_string()));
    }
    let moduli: Vec<u64> = diag
        .iter()
        .map(|x| abs(x).to_u64().expect("bounded by the enumeration cap"))
        .collect();

    // Class representatives are the fractional parts of the integer
    // combinations of the rows of U scaled by 1/moduli_j.
    let scaled_rows: Vec<Vec<Rational>> = u
        .iter()
        .zip(&moduli)
        .map(|(row, &md)| {
            row.iter()
                .map(|x| Rational::new(x.clone(), BigInt::from(md)))
                .collect()
        })
        .collect();
    let one = Rational::from_integer(BigInt::one());
    let mut count = BigInt::from(d);
    let mut counter = vec![0u64; d];
    loop {
        let mut entries = vec![Rational::zero(); d];
        for (j, &t) in counter.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let t_big = Rational::from_integer(BigInt::from(t));
            for (c, entry) in entries.iter_mut().enumerate() {
                *entry += &scaled_rows[j][c] * &t_big;
            }
        }
        let mut total = Rational::zero();
        for entry in &entries {
            total += fract(entry);
        }
        if total <= one {
            count += 1;
        }

        let mut j = 0;
        loop {
            if j == d {
                return Ok(count);
            }
            counter[j] += 1;
            if counter[j] < moduli[j] {
                break;
            }
            counter[j] = 0;
            j += 1;
        }
    }
}

/// Evaluates the lattice point count of the `m`-th dilate from the
/// coefficient vector alone: the sum of `h_i * C(m + d - i, d)`.
pub fn ehrhart_from_hstar(h: &HStarVector, m: u64) -> Result<BigInt> {
    let coeffs = h.coefficients();
    if coeffs.is_empty() {
        return Err(Error::BadParameter("empty coefficient vector".to_string()));
    }
    let d = (coeffs.len() - 1) as u64;
    let mut total = BigInt::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        let i = i as u64;
        if c == 0 || m + d < i {
            continue;
        }
        total += BigInt::from(c) * binomial_big(m + d - i, d);
    }
    Ok(total)
}

/// Exact binomial coefficient `C(a, b)` over big integers.
fn binomial_big(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut result = BigInt::one();
    for j in 1..=b {
        result = result * BigInt::from(a - b + j) / BigInt::from(j);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vector(blocks: &[(i64, i64, usize)]) -> ModOneVector {
        ModOneVector::from_blocks(blocks).unwrap()
    }

    fn group(gens: &[ModOneVector], width: usize) -> HeightedGroup {
        HeightedGroup::close_generators(gens, width).unwrap()
    }

    #[test]
    fn segment_of_length_two_round_trips_exactly() {
        let g = group(&[vector(&[(1, 2, 2)])], 2);
        let s = group_to_simplex(&g).unwrap();
        assert_eq!(s, SimplexModel::from_rows(&[&[0], &[2]]).unwrap());
        assert_eq!(s.normalized_volume().unwrap(), BigInt::from(2));
        let back = simplex_to_group(&s).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn order_four_sample_round_trips_up_to_equivalence() {
        let g = group(&[vector(&[(1, 4, 2), (1, 2, 3)])], 5);
        let s = group_to_simplex(&g).unwrap();
        assert_eq!(s.dimension(), 4);
        assert_eq!(s.normalized_volume().unwrap(), BigInt::from(4));
        let back = simplex_to_group(&s).unwrap();
        assert!(back.equivalent(&g).unwrap());
    }

    #[test]
    fn pyramid_detection_and_coefficients() {
        // conv((0,0), (2,0), (0,1)): weight group {0, (1/2,1/2,0)}.
        let s = SimplexModel::from_rows(&[&[0, 0], &[2, 0], &[0, 1]]).unwrap();
        let g = simplex_to_group(&s).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.contains(&vector(&[(1, 2, 2), (0, 1, 1)])));
        assert!(is_lattice_pyramid(&s).unwrap());
        assert_eq!(
            hstar_of_simplex(&s).unwrap(),
            HStarVector::new(vec![1, 1, 0])
        );

        // The segment is not a pyramid.
        let seg = SimplexModel::from_rows(&[&[0], &[2]]).unwrap();
        assert!(!is_lattice_pyramid(&seg).unwrap());
    }

    #[test]
    fn degenerate_simplices_are_rejected() {
        let s = SimplexModel::from_rows(&[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert!(matches!(
            simplex_to_group(&s),
            Err(Error::DegenerateSimplex)
        ));
        assert!(matches!(
            s.normalized_volume(),
            Err(Error::DegenerateSimplex)
        ));
        assert!(matches!(
            ehrhart_count(&s, 1),
            Err(Error::DegenerateSimplex)
        ));
    }

    #[test]
    fn ehrhart_counts_match_known_values() {
        let seg = SimplexModel::from_rows(&[&[0], &[2]]).unwrap();
        assert_eq!(ehrhart_count(&seg, 3).unwrap(), BigInt::from(7));
        assert_eq!(
            ehrhart_from_hstar(&HStarVector::new(vec![1, 1]), 3).unwrap(),
            BigInt::from(7)
        );

        let unit = SimplexModel::from_rows(&[&[0], &[1]]).unwrap();
        assert_eq!(ehrhart_count(&unit, 5).unwrap(), BigInt::from(6));

        let triangle = SimplexModel::from_rows(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(ehrhart_count(&triangle, 2).unwrap(), BigInt::from(6));
        assert_eq!(
            ehrhart_from_hstar(&HStarVector::new(vec![1, 0, 0]), 2).unwrap(),
            BigInt::from(6)
        );
    }

    #[test]
    fn ehrhart_agrees_with_coefficient_prediction() {
        let g = group(&[vector(&[(1, 4, 2), (1, 2, 3)])], 5);
        let s = group_to_simplex(&g).unwrap();
        let h = hstar_of_simplex(&s).unwrap();
        assert_eq!(h, HStarVector::new(vec![1, 1, 1, 1, 0]));
        for m in 1..=3 {
            assert_eq!(
                ehrhart_count(&s, m).unwrap(),
                ehrhart_from_hstar(&h, m).unwrap(),
                "dilation {m}"
            );
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); 8]];
        for i in 0..8 {
            let mut r = vec![BigInt::zero(); 8];
            r[i] = BigInt::one();
            rows.push(r);
        }
        let s = SimplexModel::new(rows).unwrap();
        assert!(matches!(
            ehrhart_count(&s, 1),
            Err(Error::DimensionCapExceeded { dim: 8, cap: 7 })
        ));
        assert_eq!(ehrhart_count_capped(&s, 1, 8).unwrap(), BigInt::from(9));
    }

    #[test]
    fn volume_equals_group_order_for_built_simplices() {
        for (gens, width, order) in [
            (vec![vector(&[(1, 3, 3)])], 3usize, 3u64),
            (
                vec![
                    vector(&[(1, 2, 2), (0, 1, 4)]),
                    vector(&[(0, 1, 2), (1, 2, 4)]),
                ],
                6,
                4,
            ),
        ] {
            let g = group(&gens, width);
            assert_eq!(g.order(), order);
            let s = group_to_simplex(&g).unwrap();
            assert_eq!(s.normalized_volume().unwrap(), BigInt::from(order));
            assert!(simplex_to_group(&s).unwrap().equivalent(&g).unwrap());
        }
    }

    #[test]
    fn point_simplex_has_trivial_group() {
        let s = SimplexModel::new(vec![Vec::new()]).unwrap();
        assert_eq!(s.dimension(), 0);
        let g = simplex_to_group(&s).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(ehrhart_count(&s, 9).unwrap(), BigInt::one());
    }
}
