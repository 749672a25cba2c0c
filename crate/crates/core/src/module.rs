//! Graded free modules, homogeneous matrices and module presentations.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{Degree, Ring};

/// `⊕ R(−d_i)`, recorded by the degrees `d_i` of the basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    pub ring: Ring,
    pub shifts: Vec<Degree>,
}

impl FreeModule {
    pub fn new(ring: &Ring, shifts: Vec<Degree>) -> FreeModule {
        FreeModule { ring: ring.clone(), shifts }
    }

    pub fn zero(ring: &Ring) -> FreeModule {
        FreeModule::new(ring, vec![])
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.shifts.is_empty()
    }

    /// `Hom(F, R(t))`: basis degrees `−d_i − t`.
    pub fn dual(&self, twist: Degree) -> FreeModule {
        FreeModule::new(&self.ring, self.shifts.iter().map(|&d| -d - twist).collect())
    }

    pub fn direct_sum(&self, o: &FreeModule) -> FreeModule {
        let mut s = self.shifts.clone();
        s.extend_from_slice(&o.shifts);
        FreeModule::new(&self.ring, s)
    }

    pub fn psi_shifts(&self) -> Vec<i64> {
        self.shifts.iter().map(|&d| self.ring.psi_of(d)).collect()
    }
}

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub ring: Ring,
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<Poly>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.nrows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.ncols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(ring: &Ring, nrows: usize, ncols: usize) -> Matrix {
        Matrix { ring: ring.clone(), nrows, ncols, entries: vec![Poly::zero(ring); nrows * ncols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(ring));
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>) -> Matrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { ring: ring.clone(), nrows, ncols, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(ring: &Ring, nrows: usize, cols: &[Vec<Poly>]) -> Matrix {
        let mut m = Matrix::zero(ring, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (i, p) in c.iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    /// Parse rows of polynomial strings.
    pub fn parse(ring: &Ring, rows: &[&[&str]]) -> Result<Matrix> {
        let mut out = Vec::new();
        for r in rows {
            let mut row = Vec::new();
            for s in r.iter() {
                row.push(ring.parse_poly(s)?);
            }
            out.push(row);
        }
        if out.iter().any(|r| r.len() != out[0].len()) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix::from_rows(ring, out))
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.ncols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.nrows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Poly> {
        (0..self.ncols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(&self.ring, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        if self.ncols != o.nrows {
            return Err(Error::ShapeMismatch(format!("{}x{} * {}x{}", self.nrows, self.ncols, o.nrows, o.ncols)));
        }
        self.ring.check_same(&o.ring)?;
        let mut m = Matrix::zero(&self.ring, self.nrows, o.ncols);
        for i in 0..self.nrows {
            for j in 0..o.ncols {
                let mut acc = Poly::zero(&self.ring);
                for k in 0..self.ncols {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul_raw(b));
                    }
                }
                m.set(i, j, acc.reduce_base());
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn hcat(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.nrows, o.nrows);
        let mut cols = self.columns();
        cols.extend(o.columns());
        Matrix::from_columns(&self.ring, self.nrows, &cols)
    }

    pub fn map_entries(&self, target: &Ring, f: impl Fn(&Poly) -> Poly) -> Matrix {
        Matrix { ring: target.clone(), nrows: self.nrows, ncols: self.ncols, entries: self.entries.iter().map(f).collect() }
    }

    /// Column degrees implied by target shifts; `None` for zero columns.
    pub fn column_degrees(&self, target: &FreeModule) -> Result<Vec<Option<Degree>>> {
        let mut out = Vec::with_capacity(self.ncols);
        for j in 0..self.ncols {
            let mut d = None;
            for i in 0..self.nrows {
                let p = self.get(i, j);
                if let Some(e) = p.degree().map_err(|_| Error::InhomogeneousInput)? {
                    let c = e + target.shifts[i];
                    match d {
                        None => d = Some(c),
                        Some(x) if x != c => return Err(Error::InhomogeneousInput),
                        _ => {}
                    }
                }
            }
            out.push(d);
        }
        Ok(out)
    }

    /// Check that the matrix is a degree-0 map `source → target`.
    pub fn check_homogeneous(&self, source: &FreeModule, target: &FreeModule) -> Result<()> {
        if self.nrows != target.rank() || self.ncols != source.rank() {
            return Err(Error::ShapeMismatch(format!(
                "matrix {}x{} vs modules {} <- {}",
                self.nrows,
                self.ncols,
                target.rank(),
                source.rank()
            )));
        }
        for (j, d) in self.column_degrees(target)?.into_iter().enumerate() {
            if let Some(d) = d {
                if d != source.shifts[j] {
                    return Err(Error::InhomogeneousInput);
                }
            }
        }
        Ok(())
    }
}

/// `M = coker(φ: F₁ → F₀)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    pub target: FreeModule,
    pub source: FreeModule,
    pub matrix: Matrix,
}

impl ModulePresentation {
    pub fn new(target: FreeModule, source: FreeModule, matrix: Matrix) -> Result<ModulePresentation> {
        matrix.check_homogeneous(&source, &target)?;
        Ok(ModulePresentation { target, source, matrix })
    }

    /// Infer source shifts from the columns; zero columns are dropped.
    pub fn from_matrix(target: FreeModule, matrix: Matrix) -> Result<ModulePresentation> {
        if matrix.nrows != target.rank() {
            return Err(Error::ShapeMismatch("rows vs target rank".into()));
        }
        let degs = matrix.column_degrees(&target)?;
        let keep: Vec<usize> = (0..matrix.ncols).filter(|&j| degs[j].is_some()).collect();
        let shifts = keep.iter().map(|&j| degs[j].unwrap()).collect();
        let rows: Vec<usize> = (0..matrix.nrows).collect();
        let m = matrix.submatrix(&rows, &keep);
        Ok(ModulePresentation { source: FreeModule::new(&target.ring, shifts), target, matrix: m })
    }

    pub fn free(target: FreeModule) -> ModulePresentation {
        let ring = target.ring.clone();
        let n = target.rank();
        ModulePresentation { target, source: FreeModule::zero(&ring), matrix: Matrix::zero(&ring, n, 0) }
    }

    /// `R/I`.
    pub fn quotient(ring: &Ring, gens: &[Poly]) -> Result<ModulePresentation> {
        let m = Matrix::from_rows(ring, vec![gens.to_vec()]);
        ModulePresentation::from_matrix(FreeModule::new(ring, vec![Degree::ZERO]), m)
    }

    /// The ideal `I = (g_1..g_s)` as a module: `coker(syz) ` on generators of degrees `deg g_i`.
    pub fn ideal(ring: &Ring, gens: &[Poly]) -> Result<ModulePresentation> {
        let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let mut shifts = Vec::new();
        for g in &gens {
            shifts.push(g.degree().map_err(|_| Error::InhomogeneousInput)?.unwrap());
        }
        let target = FreeModule::new(ring, shifts);
        let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
        let syz = crate::groebner::syzygies(&cols, &FreeModule::new(ring, vec![Degree::ZERO]))?;
        Ok(ModulePresentation { target, source: syz.source, matrix: syz.matrix })
    }

    pub fn ring(&self) -> &Ring {
        &self.target.ring
    }

    /// Shift the grading: `M(a)`, i.e. every basis degree decreases by `a`.
    pub fn twist(&self, a: Degree) -> ModulePresentation {
        let sh = |f: &FreeModule| FreeModule::new(&f.ring, f.shifts.iter().map(|&d| d - a).collect());
        ModulePresentation { target: sh(&self.target), source: sh(&self.source), matrix: self.matrix.clone() }
    }

    /// Direct sum of presentations.
    pub fn direct_sum(&self, o: &ModulePresentation) -> ModulePresentation {
        let ring = self.ring().clone();
        let (r1, c1, r2, c2) = (self.matrix.nrows, self.matrix.ncols, o.matrix.nrows, o.matrix.ncols);
        let mut m = Matrix::zero(&ring, r1 + r2, c1 + c2);
        for i in 0..r1 {
            for j in 0..c1 {
                m.set(i, j, self.matrix.get(i, j).clone());
            }
        }
        for i in 0..r2 {
            for j in 0..c2 {
                m.set(r1 + i, c1 + j, o.matrix.get(i, j).clone());
            }
        }
        ModulePresentation {
            target: self.target.direct_sum(&o.target),
            source: self.source.direct_sum(&o.source),
            matrix: m,
        }
    }
}
