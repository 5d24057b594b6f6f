use std::fmt;

use super::scalar::Scalar;
use super::sqrt_ext::SqrtExt;
use crate::error::{Error, Result};

/// Dense square or rectangular matrix over a scalar ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> fmt::Debug for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<C: Scalar> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<C: Scalar> Matrix<C> {
    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged or empty rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity_like(n: usize, template: &C) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { template.one_like() } else { template.zero_like() })
    }

    pub fn diagonal(entries: &[C]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { entries[0].zero_like() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<C> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn map<D: Scalar, F: FnMut(&C) -> D>(&self, f: F) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<D: Scalar, F: FnMut(&C) -> Result<D>>(&self, f: F) -> Result<Matrix<D>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix<C>) -> Result<Matrix<C>> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = self.get(i, 0).zero_like();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.vanishes() && !b.vanishes() {
                    acc = acc.add_ref(&a.mul_ref(b));
                }
            }
            acc
        }))
    }

    pub fn add(&self, other: &Matrix<C>) -> Result<Matrix<C>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add_ref(other.get(i, j))))
    }

    pub fn sub(&self, other: &Matrix<C>) -> Result<Matrix<C>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix difference".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub_ref(other.get(i, j))))
    }

    pub fn scale(&self, c: &C) -> Matrix<C> {
        self.map(|x| x.mul_ref(c))
    }

    pub fn apply(&self, v: &[C]) -> Result<Vec<C>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector product".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.vanishes() && !x.vanishes() {
                        acc = acc.add_ref(&a.mul_ref(x));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn trace(&self) -> C {
        let mut acc = self.get(0, 0).zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add_ref(self.get(i, i));
        }
        acc
    }

    pub fn vanishes(&self) -> bool {
        self.data.iter().all(|c| c.vanishes())
    }

    fn minor(&self, row: usize, col: usize) -> Matrix<C> {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            for j in 0..self.cols {
                if j != col {
                    data.push(self.get(i, j).clone());
                }
            }
        }
        Matrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }

    /// Determinant by cofactor expansion (division free).
    pub fn det(&self) -> Result<C> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of non-square matrix".into()));
        }
        Ok(self.det_inner())
    }

    fn det_inner(&self) -> C {
        let n = self.rows;
        match n {
            1 => self.get(0, 0).clone(),
            2 => self.get(0, 0).mul_ref(self.get(1, 1)).sub_ref(&self.get(0, 1).mul_ref(self.get(1, 0))),
            _ => {
                let mut acc = self.get(0, 0).zero_like();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.vanishes() {
                        continue;
                    }
                    let term = a.mul_ref(&self.minor(0, j).det_inner());
                    acc = if j % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) };
                }
                acc
            }
        }
    }

    pub fn adjugate(&self) -> Result<Matrix<C>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("adjugate of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity_like(1, self.get(0, 0)));
        }
        Ok(Self::from_fn(n, n, |i, j| {
            let m = self.minor(j, i).det_inner();
            if (i + j) % 2 == 0 {
                m
            } else {
                m.neg_ref()
            }
        }))
    }

    pub fn inverse(&self) -> Result<Matrix<C>> {
        let d = self.det()?;
        if d.vanishes() {
            return Err(Error::SingularMatrix);
        }
        let inv = d.try_inv().ok_or(Error::ZeroDivisor)?;
        Ok(self.adjugate()?.scale(&inv))
    }

    /// `Some(c)` when the matrix is `c * I`.
    pub fn scalar_value(&self) -> Option<C> {
        if self.rows != self.cols {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { *e == c } else { e.vanishes() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Proportionality test by cross-multiplication against a pivot entry.
    pub fn projectively_equal(&self, other: &Matrix<C>) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let pivot = match (0..self.data.len()).find(|&k| !self.data[k].vanishes()) {
            None => return other.vanishes(),
            Some(k) => k,
        };
        if other.data[pivot].vanishes() {
            return false;
        }
        let (a, b) = (&self.data[pivot], &other.data[pivot]);
        self.data.iter().zip(other.data.iter()).all(|(x, y)| x.mul_ref(b) == y.mul_ref(a))
    }

    /// `lambda` with `self = lambda * other`, using the inverse of a pivot entry.
    pub fn ratio_to(&self, other: &Matrix<C>) -> Option<C> {
        let pivot = (0..other.data.len()).find(|&k| !other.data[k].vanishes())?;
        let lambda = self.data[pivot].try_div(&other.data[pivot])?;
        if other.scale(&lambda) == *self {
            Some(lambda)
        } else {
            None
        }
    }
}

impl<C: Scalar> Matrix<SqrtExt<C>> {
    /// Find `lambda = q * g^S` (a single extension monomial) with `self = lambda * other`.
    /// Avoids general inversion in the extension ring.
    pub fn monomial_ratio_to(&self, other: &Matrix<SqrtExt<C>>) -> Option<SqrtExt<C>> {
        let pivot = (0..other.data.len()).find(|&k| !other.data[k].vanishes())?;
        let a = &self.data[pivot];
        let b = &other.data[pivot];
        if a.vanishes() {
            return if self.vanishes() { Some(a.clone()) } else { None };
        }
        let ctx = b.context().clone();
        let dim = b.coeffs().len();
        // with lambda = q * g^S: a_m = q * rel(m & S) * b_{m ^ S}
        let ma = a.support()[0];
        for s in 0..dim {
            let bm = ma ^ s;
            let bc = b.coeff(bm);
            if bc.vanishes() {
                continue;
            }
            let denom = bc.mul_ref(ctx.relation(bm & s));
            let q = match a.coeff(ma).try_div(&denom) {
                Some(q) => q,
                None => continue,
            };
            let lambda = SqrtExt::monomial(&ctx, q, s);
            if other.scale(&lambda) == *self {
                return Some(lambda);
            }
        }
        None
    }
}

/// Point of P^3 with homogeneous coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPoint4<C> {
    pub coords: [C; 4],
}

impl<C: Scalar> ProjPoint4<C> {
    pub fn new(coords: [C; 4]) -> Result<Self> {
        if coords.iter().all(|c| c.vanishes()) {
            return Err(Error::OutsideChart("all homogeneous coordinates vanish".into()));
        }
        Ok(ProjPoint4 { coords })
    }

    pub fn as_slice(&self) -> &[C] {
        &self.coords
    }

    /// Scale so the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Result<Self> {
        let k = self.coords.iter().position(|c| !c.vanishes()).ok_or(Error::DivisionByZero)?;
        let inv = self.coords[k].try_inv().ok_or(Error::ZeroDivisor)?;
        Ok(ProjPoint4 { coords: self.coords.clone().map(|c| c.mul_ref(&inv)) })
    }

    /// Affine coordinates with the last coordinate set to 1.
    pub fn affine(&self) -> Result<[C; 3]> {
        let inv = self.coords[3]
            .try_inv()
            .ok_or_else(|| Error::OutsideChart("last homogeneous coordinate vanishes".into()))?;
        Ok([self.coords[0].mul_ref(&inv), self.coords[1].mul_ref(&inv), self.coords[2].mul_ref(&inv)])
    }

    pub fn projectively_equal(&self, other: &Self) -> bool {
        for i in 0..4 {
            for j in (i + 1)..4 {
                if self.coords[i].mul_ref(&other.coords[j]) != self.coords[j].mul_ref(&other.coords[i]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn transform(&self, m: &Matrix<C>) -> Result<Self> {
        let v = m.apply(&self.coords)?;
        Ok(ProjPoint4 { coords: [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()] })
    }
}

impl<C: Scalar> fmt::Display for ProjPoint4<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {} : {})", self.coords[0], self.coords[1], self.coords[2], self.coords[3])
    }
}
