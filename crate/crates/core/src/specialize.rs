//! Symmetric and Rees powers of a graded module, their specializations
//! `S_𝔫(M^k)` at fibers, and the shift bookkeeping `β(M)`.
//!
//! `M^k` is the image of `Sym^k(M)` in `Sym^k(F)` under an embedding
//! `M/τ(M) ↪ F` with `rank F = rank M`; for an ideal `I = (g)` this is `I^k`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fiber::{Fiber, FiberPoint};
use crate::groebner::torsion_submodule;
use crate::linalg::{base_rank, DMat};
use crate::loci::squarefree_part;
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::poly::Poly;
use crate::resolution::minimal_presentation;
use crate::ring::{Degree, Ring, RingDescriptor};
use crate::strands::{presentation_strand_dim, rank_over_residue_field, strand};

/// `β(M)`: the largest degree of a minimal generator.
pub fn beta(m: &ModulePresentation) -> Result<i64> {
    let ring = m.ring();
    if ring.grading_rank != 1 {
        return Err(Error::Unsupported("beta needs a ZZ-graded ring".into()));
    }
    let min = minimal_presentation(m)?;
    min.target.shifts.iter().map(|d| d.0).max().ok_or(Error::ZeroModule)
}

/// Multisets of size `k` from `0..n`, as nondecreasing index vectors.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Presentation of `Sym^k(M)` built directly from `φ`: generators are the
/// degree-`k` monomials in the generators of `M`, relations are
/// `(φ e_c)·e^m` for `|m| = k − 1`.
pub fn sym_power_presentation(m: &ModulePresentation, k: usize) -> Result<ModulePresentation> {
    let ring = m.ring();
    let n = m.target.rank();
    let basis = multisets(n, k);
    let index: BTreeMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
    let shifts: Vec<Degree> = basis.iter().map(|b| b.iter().fold(Degree::ZERO, |a, &i| a + m.target.shifts[i])).collect();
    let target = FreeModule::new(ring, shifts);
    let mut cols = Vec::new();
    if k > 0 {
        for c in 0..m.source.rank() {
            for rest in multisets(n, k - 1) {
                let mut col = vec![Poly::zero(ring); basis.len()];
                for j in 0..n {
                    let e = m.matrix.get(j, c);
                    if e.is_zero() {
                        continue;
                    }
                    let mut key = rest.clone();
                    key.push(j);
                    key.sort();
                    let r = index[&key];
                    col[r] = col[r].add(e);
                }
                if col.iter().any(|p| !p.is_zero()) {
                    cols.push(col);
                }
            }
        }
    }
    let mat = Matrix::from_columns(ring, basis.len(), &cols);
    ModulePresentation::from_matrix(target, mat)
}

/// `Sym_R(M(b)) = 𝔅/ℒ` over `𝔅 = R[Y_1..Y_s]` with `bideg Y_j = (μ_j − b, 1)`.
#[derive(Clone, Debug)]
pub struct SymAlgebra {
    pub ring: Ring,
    pub b: i64,
    pub generator_degrees: Vec<i64>,
    pub relations: Vec<Poly>,
}

impl SymAlgebra {
    pub fn presentation(&self) -> Result<ModulePresentation> {
        ModulePresentation::quotient(&self.ring, &self.relations)
    }

    /// `dim [Sym_R(M(b))]_{(j,k)}` over the base field.
    pub fn strand_dim(&self, j: i64, k: i64) -> Result<usize> {
        Ok(presentation_strand_dim(&self.presentation()?, Degree(j, k)))
    }
}

pub fn sym_algebra(m: &ModulePresentation, b: i64) -> Result<SymAlgebra> {
    let ring = m.ring();
    if ring.is_bigraded() || ring.grading_rank != 1 {
        return Err(Error::Unsupported("symmetric algebras need a ZZ-graded ring without y-variables".into()));
    }
    let be = beta(m)?;
    if b < be {
        return Err(Error::ShiftTooSmall { b, beta: be });
    }
    let names: Vec<String> = (1..=m.target.rank()).map(|j| format!("Y{j}")).collect();
    if names.iter().any(|n| ring.var_index(n).is_some()) {
        return Err(Error::Invalid("variable names Y1.. are reserved for symmetric algebras".into()));
    }
    let graded = ring.graded_indices();
    let desc = RingDescriptor {
        base: ring.base_kind.clone(),
        xvars: graded.iter().map(|&i| (ring.vars[i].name.clone(), ring.vars[i].deg)).collect(),
        yvars: names.iter().zip(&m.target.shifts).map(|(n, d)| (n.clone(), Degree(d.0 - b, 1))).collect(),
        grading_rank: 2,
        psi: None,
        order: ring.order_kind,
    };
    let big = Ring::new(&desc)?;
    let pos: Vec<usize> = ring.vars.iter().map(|v| big.var_index(&v.name).unwrap()).collect();
    let lift = |p: &Poly| {
        p.map_monos(&big, |e| {
            let mut out = vec![0u16; big.nvars()];
            for (i, &x) in e.iter().enumerate() {
                out[pos[i]] = x;
            }
            out
        })
    };
    let ys: Vec<Poly> = names.iter().map(|n| big.var(n)).collect();
    let mut relations = Vec::new();
    for c in 0..m.source.rank() {
        let mut acc = Poly::zero(&big);
        for (j, y) in ys.iter().enumerate() {
            let e = m.matrix.get(j, c);
            if !e.is_zero() {
                acc = acc.add(&y.mul(&lift(e)));
            }
        }
        if !acc.is_zero() {
            relations.push(acc);
        }
    }
    Ok(SymAlgebra { ring: big, b, generator_degrees: m.target.shifts.iter().map(|d| d.0).collect(), relations })
}

/// `M^k` for all `k` through an embedding `E: F₀ → R^ρ` of `M/τ(M)`.
#[derive(Clone, Debug)]
pub struct PowersBundle {
    pub ring: Ring,
    /// columns are the images of the generators of `M`
    pub embedding: Matrix,
    /// shifts of `F₀`
    pub generator_shifts: Vec<Degree>,
    /// shifts of the free target `R^ρ`
    pub target_shifts: Vec<Degree>,
}

impl PowersBundle {
    /// Ideal `I = (g)`: the embedding is `I ⊂ R`.
    pub fn for_ideal(ring: &Ring, gens: &[Poly]) -> Result<PowersBundle> {
        let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let shifts = gens.iter().map(|g| g.degree().map_err(|_| Error::InhomogeneousInput).map(|d| d.unwrap())).collect::<Result<Vec<_>>>()?;
        Ok(PowersBundle {
            ring: ring.clone(),
            embedding: Matrix::from_rows(ring, vec![gens]),
            generator_shifts: shifts,
            target_shifts: vec![Degree::ZERO],
        })
    }

    /// General module over a domain base: `M → M**` followed by a projection onto
    /// `rank M` coordinates that stays injective on `M/τ(M)`.
    pub fn new(m: &ModulePresentation, seed: u64) -> Result<PowersBundle> {
        let ring = m.ring();
        if !ring.base_is_domain() {
            return Err(Error::BaseNotDomain);
        }
        let t = torsion_submodule(m)?;
        let kt = &t.to_double_dual;
        let rows = choose_independent_rows(ring, kt, seed);
        let emb = kt.submatrix(&rows, &(0..kt.ncols).collect::<Vec<_>>());
        Ok(PowersBundle {
            ring: ring.clone(),
            embedding: emb,
            generator_shifts: m.target.shifts.clone(),
            target_shifts: rows.iter().map(|&r| t.dd_target.shifts[r]).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.target_shifts.len()
    }

    /// `Sym^k(F₀) → Sym^k(R^ρ)`: source, target and matrix, one column per
    /// degree-`k` monomial in the generators of `M`. The image is `M^k`.
    pub fn power(&self, k: usize) -> (FreeModule, FreeModule, Matrix) {
        let ring = &self.ring;
        let rho = self.rank();
        let tbasis = multisets(rho, k);
        let tindex: BTreeMap<Vec<usize>, usize> = tbasis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let tshifts = tbasis.iter().map(|b| b.iter().fold(Degree::ZERO, |a, &i| a + self.target_shifts[i])).collect();
        let sbasis = multisets(self.generator_shifts.len(), k);
        let sshifts = sbasis.iter().map(|b| b.iter().fold(Degree::ZERO, |a, &i| a + self.generator_shifts[i])).collect();
        let mut cols = Vec::with_capacity(sbasis.len());
        for gens in &sbasis {
            // product of the linear forms Σ_a E_{a,g} T_a
            let mut acc: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
            acc.insert(vec![], Poly::one(ring));
            for &g in gens {
                let mut next: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (key, p) in &acc {
                    for a in 0..rho {
                        let e = self.embedding.get(a, g);
                        if e.is_zero() {
                            continue;
                        }
                        let mut nk = key.clone();
                        nk.push(a);
                        nk.sort();
                        let slot = next.entry(nk).or_insert_with(|| Poly::zero(ring));
                        *slot = slot.add(&p.mul(e));
                    }
                }
                acc = next;
            }
            let mut col = vec![Poly::zero(ring); tbasis.len()];
            for (key, p) in acc {
                col[tindex[&key]] = p;
            }
            cols.push(col);
        }
        let target = FreeModule::new(ring, tshifts);
        let mat = Matrix::from_columns(ring, target.rank(), &cols);
        (FreeModule::new(ring, sshifts), target, mat)
    }

    /// `dim [M^k]_d` over `Frac(A)`.
    pub fn strand_dim(&self, k: usize, d: Degree) -> usize {
        let (src, tgt, mat) = self.power(k);
        strand(&mat, &src, &tgt, d).rank(&self.ring)
    }
}

/// Rows of `K^T` forming a maximal independent set over `Frac(R)`, found by
/// evaluating at a seeded random point of all variables.
fn choose_independent_rows(ring: &Ring, kt: &Matrix, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pt: Vec<Coeff> = (0..ring.nvars()).map(|_| Coeff::from_int(rng.gen_range(-97..=97)).in_char(ring.char_p)).collect();
    let rows: Vec<Vec<Coeff>> = (0..kt.nrows).map(|i| (0..kt.ncols).map(|j| eval_all(kt.get(i, j), &pt)).collect()).collect();
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: Vec<Vec<Coeff>> = chosen.iter().map(|&c| rows[c].clone()).collect();
        trial.push(rows[i].clone());
        if DMat::from_rows(trial).rank() == chosen.len() + 1 {
            chosen.push(i);
        }
    }
    chosen
}

fn eval_all(p: &Poly, pt: &[Coeff]) -> Coeff {
    let mut acc = Coeff::zero();
    for (m, c) in &p.terms {
        let mut t = c.clone();
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                t = t.mul_ref(&pt[i].pow(e as u32));
            }
        }
        acc = acc.add_ref(&t);
    }
    acc
}

/// `S_𝔫(M^k) = Im(Sym^k(E) ⊗ k(𝔫))` inside `Sym^k(R^ρ) ⊗ k(𝔫)`.
#[derive(Clone, Debug)]
pub struct SpecializedPower {
    pub fiber: Fiber,
    pub k: usize,
    pub source: FreeModule,
    pub ambient: FreeModule,
    pub matrix: Matrix,
}

impl SpecializedPower {
    /// `dim [S_𝔫(M^k)]_d`
    pub fn strand_dim(&self, d: Degree) -> usize {
        strand(&self.matrix, &self.source, &self.ambient, d).rank(&self.fiber.ring)
    }

    /// `dim [Sym^k(R^ρ) ⊗ k(𝔫) / S_𝔫(M^k)]_d`
    pub fn quotient_strand_dim(&self, d: Degree) -> usize {
        let s = strand(&self.matrix, &self.source, &self.ambient, d);
        s.nrows() - s.rank(&self.fiber.ring)
    }

    /// Nonzero generators as ambient columns.
    pub fn generators(&self) -> Vec<Vec<Poly>> {
        self.matrix.columns().into_iter().filter(|c| c.iter().any(|p| !p.is_zero())).collect()
    }

    /// For ideals: the generators as polynomials.
    pub fn ideal_generators(&self) -> Vec<Poly> {
        self.generators().into_iter().map(|c| c[0].clone()).collect()
    }

    /// The quotient `Sym^k(R^ρ) ⊗ k(𝔫) / S_𝔫(M^k)`.
    pub fn quotient(&self) -> Result<ModulePresentation> {
        let cols = self.generators();
        ModulePresentation::from_matrix(self.ambient.clone(), Matrix::from_columns(&self.fiber.ring, self.ambient.rank(), &cols))
    }
}

pub fn specialize_power(bundle: &PowersBundle, k: usize, fiber: &Fiber) -> SpecializedPower {
    let (src, tgt, mat) = bundle.power(k);
    SpecializedPower { fiber: fiber.clone(), k, source: fiber.free(&src), ambient: fiber.free(&tgt), matrix: fiber.matrix(&mat) }
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementRow {
    pub k: usize,
    pub degree: i64,
    pub generic: usize,
    pub fiber: String,
    pub value: usize,
    pub in_open: bool,
}

/// Element `a` such that strands of `S_𝔫(M^k)` have the generic dimension on
/// `D(a)` for the tested `k` and degrees, plus sampled evidence.
#[derive(Clone, Debug)]
pub struct AgreementCertificate {
    pub a: Poly,
    pub rows: Vec<AgreementRow>,
    /// fibers in `D(a)` that disagree; nonempty means the window must grow
    pub counterexamples: Vec<String>,
}

impl AgreementCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": self.a.to_string(),
            "rows": self.rows,
            "counterexamples": self.counterexamples,
        })
    }
}

/// `a` is the squarefree product of the maximal nonvanishing minors found by
/// fraction-free elimination of each strand over `A`.
pub fn generic_agreement_certificate(
    bundle: &PowersBundle,
    ks: &[usize],
    degrees: &[i64],
    points: &[FiberPoint],
) -> Result<AgreementCertificate> {
    let ring = &bundle.ring;
    if !ring.base_is_domain() {
        return Err(Error::BaseNotDomain);
    }
    let mut a = Poly::one(ring);
    let mut generic: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    for &k in ks {
        let (src, tgt, mat) = bundle.power(k);
        for &d in degrees {
            let s = strand(&mat, &src, &tgt, Degree(d, 0));
            let br = base_rank(ring, &s.entries);
            generic.insert((k, d), br.rank);
            a = a.mul(&br.top_minor(ring));
        }
    }
    if !ring.has_quotient_base() && ring.nparams() > 0 && !a.is_constant() {
        a = squarefree_part(ring, &a);
    } else if a.is_constant() {
        a = Poly::one(ring);
    }
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    for p in points {
        let fiber = Fiber::new(ring, p.clone())?;
        let in_open = !p.lies_in(ring, std::slice::from_ref(&a));
        for &k in ks {
            let sp = specialize_power(bundle, k, &fiber);
            for &d in degrees {
                let s = strand(&sp.matrix, &sp.source, &sp.ambient, Degree(d, 0));
                let value = rank_over_residue_field(&fiber.ring, &s.entries);
                let g = generic[&(k, d)];
                if in_open && value != g {
                    counterexamples.push(format!("{} k={k} d={d}", fiber));
                }
                rows.push(AgreementRow { k, degree: d, generic: g, fiber: fiber.to_string(), value, in_open });
            }
        }
    }
    Ok(AgreementCertificate { a, rows, counterexamples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Ring {
        let v: Vec<(&str, i64)> = vars.iter().map(|&n| (n, 1)).collect();
        Ring::new(&RingDescriptor::standard(&v)).unwrap()
    }

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| r.parse_poly(x).unwrap()).collect()
    }

    #[test]
    fn beta_examples() {
        let r = ring(&["x", "y"]);
        let i = ModulePresentation::ideal(&r, &polys(&r, &["x^2", "x*y", "y^3"])).unwrap();
        assert_eq!(beta(&i).unwrap(), 3);
        let f = ModulePresentation::free(FreeModule::new(&r, vec![Degree(2, 0)]));
        assert_eq!(beta(&f).unwrap(), 2);
        let k = ModulePresentation::quotient(&r, &polys(&r, &["x", "y"])).unwrap();
        assert_eq!(beta(&k).unwrap(), 0);
        let zero = ModulePresentation::quotient(&r, &[Poly::one(&r)]).unwrap();
        assert_eq!(beta(&zero), Err(Error::ZeroModule));
    }

    #[test]
    fn sym_of_maximal_ideal() {
        let r = ring(&["x", "y"]);
        let m = ModulePresentation::ideal(&r, &polys(&r, &["x", "y"])).unwrap();
        let s = sym_algebra(&m, 1).unwrap();
        assert_eq!(s.relations.len(), 1);
        assert_eq!(s.relations[0].nterms(), 2);
        assert_eq!(s.strand_dim(0, 2).unwrap(), 3);
        assert_eq!(presentation_strand_dim(&sym_power_presentation(&m, 2).unwrap(), Degree(2, 0)), 3);
        assert!(matches!(sym_algebra(&m, 0), Err(Error::ShiftTooSmall { b: 0, beta: 1 })));
    }

    #[test]
    fn powers_of_the_square_of_the_maximal_ideal() {
        let r = ring(&["x", "y"]);
        let b = PowersBundle::for_ideal(&r, &polys(&r, &["x^2", "x*y", "y^2"])).unwrap();
        for k in 1..4 {
            assert_eq!(b.strand_dim(k, Degree(2 * k as i64, 0)), 2 * k + 1);
        }
        let m = ModulePresentation::ideal(&r, &polys(&r, &["x^2", "x*y", "y^2"])).unwrap();
        let viamodule = PowersBundle::new(&m, 1).unwrap();
        assert_eq!(viamodule.rank(), 1);
        for k in 1..4 {
            assert_eq!(viamodule.strand_dim(k, Degree(2 * k as i64 + 1, 0)), 2 * k + 2);
        }
    }

    #[test]
    fn tx_y_certificate() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)]).over_params(&["t"])).unwrap();
        let b = PowersBundle::for_ideal(&r, &polys(&r, &["t*x", "y"])).unwrap();
        let generic = Fiber::generic(&r).unwrap();
        assert_eq!(specialize_power(&b, 1, &generic).quotient_strand_dim(Degree(1, 0)), 0);
        let at0 = Fiber::new(&r, FiberPoint::at_ints(&r, &[0])).unwrap();
        let s = specialize_power(&b, 1, &at0);
        assert_eq!(s.quotient_strand_dim(Degree(1, 0)), 1);
        assert_eq!(s.ideal_generators(), vec![at0.ring.var("y")]);
        let pts: Vec<FiberPoint> = [0, 1, 2].iter().map(|&v| FiberPoint::at_ints(&r, &[v])).collect();
        let c = generic_agreement_certificate(&b, &[1, 2], &[1, 2, 3], &pts).unwrap();
        assert_eq!(c.a, r.parse_poly("t").unwrap());
        assert!(c.counterexamples.is_empty());
        assert!(c.rows.iter().any(|row| !row.in_open && row.value != row.generic));
    }
}
