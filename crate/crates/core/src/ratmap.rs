//! Invariants of a rational map `P^r ⇢ P^s` given by forms of one degree over
//! a parameter ring, evaluated fiber by fiber: image ideal, special fiber ring,
//! map degree, saturated special fiber multiplicity and j-multiplicity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::fiber::{Fiber, FiberPoint};
use crate::groebner::{eliminate, ideal_gb, ideal_power_gens, intersect, saturate, saturate_irrelevant};
use crate::hilbert::HilbertSeries;
use crate::poly::Poly;
use crate::ring::{BaseKind, Degree, OrderKind, Ring, RingDescriptor, VarKind};

#[derive(Clone, Debug)]
pub struct RationalMapData {
    pub ring: Ring,
    pub forms: Vec<Poly>,
    pub d: i64,
}

impl RationalMapData {
    pub fn new(ring: &Ring, forms: Vec<Poly>) -> Result<RationalMapData> {
        if !ring.is_standard_graded() {
            return Err(Error::NotStandardGraded);
        }
        if forms.is_empty() {
            return Err(Error::Invalid("a rational map needs at least one form".into()));
        }
        let mut d = None;
        for g in &forms {
            if g.ring != *ring {
                return Err(Error::RingMismatch);
            }
            let dg = match g.degree() {
                Ok(Some(dg)) => dg.0,
                Ok(None) => return Err(Error::Invalid("forms must be nonzero".into())),
                Err(_) => return Err(Error::Inhomogeneous),
            };
            if d.is_some_and(|d0| d0 != dg) {
                return Err(Error::Invalid("forms must share one degree".into()));
            }
            d = Some(dg);
        }
        let d = d.unwrap();
        if d <= 0 {
            return Err(Error::Invalid("forms must have positive degree".into()));
        }
        Ok(RationalMapData { ring: ring.clone(), forms, d })
    }

    /// Dimension `r` of the source `P^r`.
    pub fn r(&self) -> usize {
        self.ring.r() - 1
    }

    /// Default power cutoff: 6 for curves, 4 otherwise.
    pub fn default_cutoff(&self) -> usize {
        if self.r() <= 1 {
            6
        } else {
            4
        }
    }
}

/// The map evaluated at a fiber, with its target ring `k(𝔫)[y₀..y_s]`.
#[derive(Clone, Debug)]
pub struct FiberMap {
    pub fiber: Fiber,
    pub forms: Vec<Poly>,
    pub target: Ring,
    pub d: i64,
}

fn target_ring(fr: &Ring, n: usize, deg: i64) -> Result<Ring> {
    let params: Vec<String> = fr.z_indices().iter().map(|&i| fr.vars[i].name.clone()).collect();
    let taken = |s: &str| params.iter().any(|p| p == s);
    let stem = if (0..n).any(|i| taken(&format!("y{i}"))) { "Y" } else { "y" };
    let base = if params.is_empty() {
        BaseKind::Field { p: fr.char_p }
    } else {
        BaseKind::Poly { p: fr.char_p, params }
    };
    Ring::new(&RingDescriptor {
        base,
        xvars: (0..n).map(|i| (format!("{stem}{i}"), Degree(deg, 0))).collect(),
        yvars: vec![],
        grading_rank: 1,
        psi: None,
        order: OrderKind::Grevlex,
    })
}

impl FiberMap {
    pub fn new(map: &RationalMapData, point: FiberPoint) -> Result<FiberMap> {
        let fiber = Fiber::new(&map.ring, point)?;
        if fiber.ring.has_quotient_base() {
            return Err(Error::Unsupported(
                "rational-map invariants need a closed point or the generic point of a polynomial base".into(),
            ));
        }
        let forms: Vec<Poly> = map.forms.iter().map(|g| fiber.poly(g)).collect();
        let target = target_ring(&fiber.ring, forms.len(), 1)?;
        Ok(FiberMap { fiber, forms, target, d: map.d })
    }

    pub fn ring(&self) -> &Ring {
        &self.fiber.ring
    }

    fn nx(&self) -> usize {
        self.ring().base_start
    }

    fn r(&self) -> usize {
        self.nx() - 1
    }

    /// Kernel of `y_i ↦ g_i` as a reduced GB in the target ring.
    pub fn image_ideal(&self) -> Result<Vec<Poly>> {
        let fr = self.ring();
        let nx = self.nx();
        let ny = self.forms.len();
        let yd = target_ring(fr, ny, self.d)?;
        let xnames: Vec<String> = (0..nx).map(|i| fr.vars[i].name.clone()).collect();
        let e = yd.with_leading_block(&xnames, &vec![Degree(1, 0); nx], &vec![VarKind::X; nx], false);
        let gens: Vec<Poly> = self
            .forms
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let lifted = g.map_monos(&e, |ex| {
                    let mut v = ex[..nx].to_vec();
                    v.extend(std::iter::repeat_n(0, ny));
                    v.extend_from_slice(&ex[nx..]);
                    v
                });
                Poly::var(&e, nx + i).sub(&lifted)
            })
            .collect();
        let elim = eliminate(&e, &gens, &(0..nx).collect::<Vec<_>>())?;
        let out: Vec<Poly> = elim.iter().map(|p| p.strip_leading(&yd, nx).transfer(&self.target)).collect();
        Ok(ideal_gb(&self.target, &out))
    }

    /// Hilbert series of the special fiber ring `k(𝔫)[g]`.
    pub fn special_fiber(&self) -> Result<HilbertSeries> {
        HilbertSeries::of_ideal(&self.target, &self.image_ideal()?)
    }

    pub fn generically_finite(&self) -> Result<bool> {
        Ok(self.special_fiber()?.dim() == Some(self.nx()))
    }

    pub fn image_degree(&self) -> Result<i64> {
        let hs = self.special_fiber()?;
        if hs.dim() != Some(self.nx()) {
            return Err(Error::NotGenericallyFinite);
        }
        hs.degree().ok_or(Error::NotGenericallyFinite)
    }

    /// `dim[I^k]_{kd}` and `dim[(I^k)^sat]_{kd}` for `k = 1..=cutoff`.
    pub fn power_table(&self, cutoff: usize) -> Result<Vec<PowerRow>> {
        let fr = self.ring();
        let nx = self.nx() as i64;
        let mut rows = Vec::with_capacity(cutoff);
        for k in 1..=cutoff {
            let ik = ideal_gb(fr, &ideal_power_gens(fr, &self.forms, k as u32));
            let sat = saturate_irrelevant(fr, &ik);
            let deg = k as i64 * self.d;
            let total = binom(deg + nx - 1, nx - 1);
            let power_dim = total - HilbertSeries::of_ideal(fr, &ik)?.value(deg);
            let saturated_dim = total - HilbertSeries::of_ideal(fr, &sat)?.value(deg);
            rows.push(PowerRow { k, power_dim, saturated_dim, h1: saturated_dim - power_dim });
        }
        Ok(rows)
    }

    /// Map degree from the growth of `dim[H¹_𝔪(I^k)]_{kd}`.
    pub fn map_degree(&self, cutoff: usize) -> Result<MapDegree> {
        let deg_y = self.image_degree()?;
        let rows = self.power_table(cutoff)?;
        self.map_degree_from(deg_y, &rows)
    }

    fn map_degree_from(&self, deg_y: i64, rows: &[PowerRow]) -> Result<MapDegree> {
        let seq: Vec<i128> = rows.iter().map(|r| r.h1).collect();
        let diffs = differences(&seq, self.r());
        let lim = stable_limit(&diffs).ok_or_else(|| Error::Unstable(format!("H1 strand sequence {seq:?}")))?;
        if lim % deg_y as i128 != 0 {
            return Err(Error::Unstable(format!("limit {lim} not divisible by deg Y = {deg_y}")));
        }
        Ok(MapDegree { deg_g: 1 + (lim / deg_y as i128) as i64, deg_y, sequence: seq, differences: diffs })
    }

    /// `e(F̃)` from `dim[(I^n)^sat]_{nd}`, checked against `deg Y · deg G`.
    pub fn saturated_fiber_multiplicity(&self, cutoff: usize) -> Result<i64> {
        let deg_y = self.image_degree()?;
        let rows = self.power_table(cutoff)?;
        let md = self.map_degree_from(deg_y, &rows)?;
        let e = self.sat_multiplicity_from(&rows)?;
        if e != md.deg_y * md.deg_g {
            return Err(Error::CrossCheck(format!("e = {e} but deg Y · deg G = {}", md.deg_y * md.deg_g)));
        }
        Ok(e)
    }

    fn sat_multiplicity_from(&self, rows: &[PowerRow]) -> Result<i64> {
        let seq: Vec<i128> = rows.iter().map(|r| r.saturated_dim).collect();
        let diffs = differences(&seq, self.r());
        stable_limit(&diffs)
            .map(|e| e as i64)
            .ok_or_else(|| Error::Unstable(format!("saturated fiber Hilbert values {seq:?}")))
    }

    /// Map degree by counting the fiber over `G(p)` for a seeded random `p`:
    /// the degree of `(g_i(x) g_j(p) − g_j(x) g_i(p)) : (g)^∞ : 𝔪^∞`.
    pub fn preimage_degree(&self, seed: u64) -> Result<i64> {
        let fr = self.ring();
        let nx = self.nx();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let p: Vec<i64> = (0..nx).map(|_| rng.gen_range(-20..=20)).collect();
            let vals: Vec<Poly> = self.forms.iter().map(|g| eval_x(g, fr, &p)).collect();
            if vals.iter().all(|v| v.is_zero()) {
                continue;
            }
            let mut eqs = Vec::new();
            for i in 0..vals.len() {
                for j in i + 1..vals.len() {
                    let e = self.forms[i].mul(&vals[j]).sub(&self.forms[j].mul(&vals[i]));
                    if !e.is_zero() {
                        eqs.push(e);
                    }
                }
            }
            let off_base = saturate(fr, &eqs, &self.forms)?;
            let sat = saturate_irrelevant(fr, &off_base);
            let hs = HilbertSeries::of_ideal(fr, &sat)?;
            if hs.dim() == Some(1) {
                return Ok(hs.degree().unwrap());
            }
        }
        Err(Error::Unstable("no random target point gave a finite fiber".into()))
    }

    /// All fiber invariants, with the limit and oracle map degrees side by side.
    pub fn invariants(&self, cutoff: usize, seed: u64) -> Result<MapInvariants> {
        let deg_y = self.image_degree()?;
        let rows = self.power_table(cutoff)?;
        let md = self.map_degree_from(deg_y, &rows)?;
        let e_sat = self.sat_multiplicity_from(&rows)?;
        let j = j_multiplicity(self.ring(), &self.forms, cutoff)?;
        let oracle = self.preimage_degree(seed)?;
        Ok(MapInvariants {
            fiber: self.fiber.to_string(),
            deg_y,
            deg_g: md.deg_g,
            oracle_deg_g: oracle,
            e_sat,
            j: j.j,
            identity_holds: e_sat == deg_y * md.deg_g,
            h1_sequence: md.sequence,
        })
    }
}

fn eval_x(g: &Poly, ring: &Ring, p: &[i64]) -> Poly {
    let mut vals: Vec<Option<Coeff>> = vec![None; ring.nvars()];
    for (i, &v) in p.iter().enumerate() {
        vals[i] = Some(Coeff::from_int(v).in_char(ring.char_p));
    }
    let bs = ring.base_start;
    g.substitute(ring, &vals, |e| {
        let mut v = vec![0u16; e.len()];
        v[bs..].copy_from_slice(&e[bs..]);
        v
    })
}

fn binom(n: i64, k: i64) -> i128 {
    if k < 0 || n < k {
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// `order`-th forward differences.
pub fn differences(seq: &[i128], order: usize) -> Vec<i128> {
    let mut cur = seq.to_vec();
    for _ in 0..order {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    cur
}

/// Last value when the final two agree.
pub fn stable_limit(diffs: &[i128]) -> Option<i128> {
    match diffs {
        [.., a, b] if a == b => Some(*b),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerRow {
    pub k: usize,
    pub power_dim: i128,
    pub saturated_dim: i128,
    /// `dim[H¹_𝔪(I^k)]_{kd} = dim[(I^k)^sat / I^k]_{kd}`
    pub h1: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapDegree {
    pub deg_g: i64,
    pub deg_y: i64,
    pub sequence: Vec<i128>,
    pub differences: Vec<i128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapInvariants {
    pub fiber: String,
    pub deg_y: i64,
    pub deg_g: i64,
    pub oracle_deg_g: i64,
    pub e_sat: i64,
    pub j: i64,
    pub identity_holds: bool,
    pub h1_sequence: Vec<i128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JMultiplicity {
    pub j: i64,
    /// `length H⁰_𝔪(J^n/J^{n+1})` for `n = 1..=cutoff`
    pub lengths: Vec<i128>,
    /// Hilbert–Samuel multiplicity when `J` is `𝔪`-primary
    pub hilbert_samuel: Option<i64>,
}

/// `j(J)` over a standard graded ring, from `length((J^{n+1} : 𝔪^∞ ∩ J^n) / J^{n+1})`.
pub fn j_multiplicity(ring: &Ring, gens: &[Poly], cutoff: usize) -> Result<JMultiplicity> {
    if !ring.is_standard_graded() {
        return Err(Error::NotStandardGraded);
    }
    if gens.iter().any(|g| !g.is_homogeneous()) {
        return Err(Error::InhomogeneousInput);
    }
    let r = ring.r() - 1;
    let powers: Vec<Vec<Poly>> =
        (1..=cutoff + 1).map(|n| ideal_gb(ring, &ideal_power_gens(ring, gens, n as u32))).collect();
    let mut lengths = Vec::with_capacity(cutoff);
    for n in 1..=cutoff {
        let jn = &powers[n - 1];
        let jn1 = &powers[n];
        let torsion = intersect(ring, &saturate_irrelevant(ring, jn1), jn);
        let a = HilbertSeries::of_ideal(ring, jn1)?;
        let b = HilbertSeries::of_ideal(ring, &torsion)?;
        lengths.push(a.length_difference(&b));
    }
    let diffs = differences(&lengths, r);
    let j = stable_limit(&diffs).ok_or_else(|| Error::Unstable(format!("H0 lengths {lengths:?}")))? as i64;
    let primary = HilbertSeries::of_ideal(ring, gens)?.dim() == Some(0);
    let hilbert_samuel = if primary {
        let zero = HilbertSeries { numerator: vec![], nvars: ring.r() };
        let colengths: Vec<i128> = std::iter::once(Ok(0))
            .chain(powers.iter().map(|p| HilbertSeries::of_ideal(ring, p).map(|h| h.length_difference(&zero))))
            .collect::<Result<_>>()?;
        let d = differences(&colengths, r + 1);
        Some(stable_limit(&d).ok_or_else(|| Error::Unstable(format!("colengths {colengths:?}")))? as i64)
    } else {
        None
    };
    Ok(JMultiplicity { j, lengths, hilbert_samuel })
}

/// Invariants at one sampled fiber; `None` fields where the fiber map is not finite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstancyRow {
    pub fiber: String,
    pub finite: bool,
    pub deg_y: Option<i64>,
    pub deg_g: Option<i64>,
    pub e_sat: Option<i64>,
    pub j: Option<i64>,
    pub jumps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstancyReport {
    pub generic: MapInvariants,
    pub rows: Vec<ConstancyRow>,
    /// labels of fibers agreeing with the generic values
    pub constant_on: Vec<String>,
    pub jump_fibers: Vec<String>,
}

impl ConstancyReport {
    pub fn is_constant(&self) -> bool {
        self.jump_fibers.is_empty()
    }
}

/// Compare the invariants at sampled fibers with those at the generic point.
pub fn constancy_report(map: &RationalMapData, points: &[FiberPoint], cutoff: usize, seed: u64) -> Result<ConstancyReport> {
    let gen = FiberMap::new(map, FiberPoint::Generic)?;
    if !gen.generically_finite()? {
        return Err(Error::GenericNotFinite);
    }
    let generic = gen.invariants(cutoff, seed)?;
    let mut rows = Vec::new();
    let (mut constant_on, mut jump_fibers) = (Vec::new(), Vec::new());
    for p in points {
        let fm = FiberMap::new(map, p.clone())?;
        let label = fm.fiber.to_string();
        let row = if fm.generically_finite()? {
            let deg_y = fm.image_degree()?;
            let table = fm.power_table(cutoff)?;
            let deg_g = fm.map_degree_from(deg_y, &table).ok().map(|m| m.deg_g);
            let e_sat = fm.sat_multiplicity_from(&table).ok();
            let j = j_multiplicity(fm.ring(), &fm.forms, cutoff).ok().map(|j| j.j);
            let mut jumps = Vec::new();
            let mut cmp = |name: &str, v: Option<i64>, g: i64| {
                if v != Some(g) {
                    jumps.push(name.to_string());
                }
            };
            cmp("deg_y", Some(deg_y), generic.deg_y);
            cmp("deg_g", deg_g, generic.deg_g);
            cmp("e_sat", e_sat, generic.e_sat);
            cmp("j", j, generic.j);
            ConstancyRow { fiber: label.clone(), finite: true, deg_y: Some(deg_y), deg_g, e_sat, j, jumps }
        } else {
            ConstancyRow {
                fiber: label.clone(),
                finite: false,
                deg_y: None,
                deg_g: None,
                e_sat: None,
                j: None,
                jumps: vec!["finite".into()],
            }
        };
        if row.jumps.is_empty() {
            constant_on.push(label);
        } else {
            jump_fibers.push(label);
        }
        rows.push(row);
    }
    Ok(ConstancyReport { generic, rows, constant_on, jump_fibers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::ideals_equal;

    fn p1() -> Ring {
        Ring::new(&RingDescriptor::standard(&[("x0", 1), ("x1", 1)])).unwrap()
    }

    fn map(ring: &Ring, forms: &[&str]) -> FiberMap {
        let f = forms.iter().map(|s| ring.parse_poly(s).unwrap()).collect();
        let m = RationalMapData::new(ring, f).unwrap();
        FiberMap::new(&m, FiberPoint::Closed(vec![])).unwrap()
    }

    #[test]
    fn image_ideals() {
        let r = p1();
        let conic = map(&r, &["x0^2", "x0*x1", "x1^2"]);
        let img = conic.image_ideal().unwrap();
        let t = &conic.target;
        assert!(ideals_equal(t, &img, &[t.parse_poly("y0*y2 - y1^2").unwrap()]));
        assert!(map(&r, &["x0", "x1"]).image_ideal().unwrap().is_empty());
        let cubic = map(&r, &["x0^3", "x0^2*x1", "x0*x1^2", "x1^3"]);
        let t = &cubic.target;
        let minors: Vec<Poly> =
            ["y0*y2 - y1^2", "y0*y3 - y1*y2", "y1*y3 - y2^2"].iter().map(|s| t.parse_poly(s).unwrap()).collect();
        assert!(ideals_equal(t, &cubic.image_ideal().unwrap(), &minors));
    }

    #[test]
    fn finiteness_and_degrees() {
        let r = p1();
        assert!(map(&r, &["x0^2", "x0*x1"]).generically_finite().unwrap());
        assert!(!map(&r, &["x0^2", "x0^2"]).generically_finite().unwrap());
        assert_eq!(map(&r, &["x0^2", "x0^2"]).image_degree(), Err(Error::NotGenericallyFinite));
        assert_eq!(map(&r, &["x0", "x1"]).image_degree().unwrap(), 1);
    }

    #[test]
    fn desk_invariants() {
        let r = p1();
        for (forms, expect) in [
            (&["x0^2", "x0*x1", "x1^2"][..], (2, 1, 2)),
            (&["x0^2", "x1^2"][..], (1, 2, 2)),
            (&["x0^3", "x0^2*x1", "x0*x1^2", "x1^3"][..], (3, 1, 3)),
            (&["x0", "x1"][..], (1, 1, 1)),
        ] {
            let inv = map(&r, forms).invariants(6, 7).unwrap();
            assert_eq!((inv.deg_y, inv.deg_g, inv.e_sat), expect, "{forms:?}");
            assert_eq!(inv.oracle_deg_g, inv.deg_g);
            assert!(inv.identity_holds);
        }
        let md = map(&r, &["x0^2", "x1^2"]).map_degree(6).unwrap();
        assert_eq!(md.sequence, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn j_multiplicities() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)])).unwrap();
        let g = |ss: &[&str]| ss.iter().map(|s| r.parse_poly(s).unwrap()).collect::<Vec<_>>();
        let sq = j_multiplicity(&r, &g(&["x^2", "x*y", "y^2"]), 5).unwrap();
        assert_eq!((sq.j, sq.hilbert_samuel), (4, Some(4)));
        assert_eq!(j_multiplicity(&r, &g(&["x", "y"]), 5).unwrap().j, 1);
        let line = j_multiplicity(&r, &g(&["x"]), 5).unwrap();
        assert_eq!((line.j, line.hilbert_samuel), (0, None));
    }

    #[test]
    fn plane_two_uple() {
        let r = Ring::new(&RingDescriptor::standard(&[("x0", 1), ("x1", 1), ("x2", 1)])).unwrap();
        let fm = map(&r, &["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"]);
        let inv = fm.invariants(4, 3).unwrap();
        assert_eq!((inv.deg_y, inv.deg_g, inv.e_sat, inv.oracle_deg_g), (4, 1, 4, 1));
    }

    #[test]
    fn conic_degenerates_at_zero() {
        let r = Ring::new(&RingDescriptor::standard(&[("x0", 1), ("x1", 1)]).over_params(&["t"])).unwrap();
        let forms = ["x0^2", "x0*x1", "t*x1^2"].iter().map(|s| r.parse_poly(s).unwrap()).collect();
        let m = RationalMapData::new(&r, forms).unwrap();
        let pts = vec![FiberPoint::at_ints(&r, &[0]), FiberPoint::at_ints(&r, &[3])];
        let rep = constancy_report(&m, &pts, 6, 1).unwrap();
        assert_eq!((rep.generic.deg_y, rep.generic.deg_g), (2, 1));
        assert_eq!(rep.jump_fibers, vec!["t=0".to_string()]);
        assert_eq!(rep.rows[0].deg_y, Some(1));
        assert_eq!(rep.constant_on, vec!["t=3".to_string()]);
    }
}
