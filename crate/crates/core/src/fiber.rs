//! Points of `Spec(A)` and evaluation of polynomials, matrices and
//! complexes at them.
//!
//! A closed point substitutes values for the base variables and lands in a
//! ring over `k`. The generic point keeps the base variables: computations
//! over `k[x, z]` with the base block last are computations over `k(z)[x]`.
//! A non-closed point `𝔭` is realised as the ring over the domain `k[z]/𝔭`.

use std::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::groebner::ideal_gb;
use crate::module::{FreeModule, Matrix, ModulePresentation};
use crate::poly::Poly;
use crate::ring::Ring;

/// A point of `Spec(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberPoint {
    /// closed point: one value per base variable
    Closed(Vec<Coeff>),
    /// generic point of a domain base
    Generic,
    /// the prime generated by these base elements
    Prime(Vec<Poly>),
}

impl FiberPoint {
    /// Closed point from `name = value` pairs; every base variable must be given.
    pub fn closed(ring: &Ring, values: &[(&str, Coeff)]) -> Result<FiberPoint> {
        let mut out = Vec::new();
        for &i in &ring.z_indices() {
            let name = &ring.vars[i].name;
            let v = values
                .iter()
                .find(|(n, _)| n == name)
                .ok_or_else(|| Error::Invalid(format!("no value for base variable {name}")))?;
            out.push(v.1.clone().in_char(ring.char_p));
        }
        if values.len() != out.len() {
            return Err(Error::Invalid("value given for an unknown base variable".into()));
        }
        Ok(FiberPoint::Closed(out))
    }

    /// Closed point from integer values in base-variable order.
    pub fn at_ints(ring: &Ring, vals: &[i64]) -> FiberPoint {
        FiberPoint::Closed(vals.iter().map(|&v| Coeff::from_int(v).in_char(ring.char_p)).collect())
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, FiberPoint::Closed(_))
    }

    /// Human-readable label, e.g. `s=1,t=-1`, `generic`, `prime(s^2+s*t+t^2)`.
    pub fn label(&self, ring: &Ring) -> String {
        match self {
            FiberPoint::Closed(v) => {
                let z = ring.z_indices();
                if z.is_empty() {
                    return "point".into();
                }
                z.iter().zip(v).map(|(&i, c)| format!("{}={}", ring.vars[i].name, c)).collect::<Vec<_>>().join(",")
            }
            FiberPoint::Generic => "generic".into(),
            FiberPoint::Prime(g) => {
                format!("prime({})", g.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "))
            }
        }
    }

    /// Whether the point lies in `V(gens)` for base elements `gens`.
    pub fn lies_in(&self, ring: &Ring, gens: &[Poly]) -> bool {
        match self {
            FiberPoint::Closed(v) => gens.iter().all(|g| g.eval_base(v).is_zero()),
            FiberPoint::Generic => gens.iter().all(|g| g.clone().reduce_base().is_zero()),
            FiberPoint::Prime(p) => {
                let mut all = p.clone();
                all.extend(ring.base().j_gb.iter().cloned());
                let gb = ideal_gb(ring, &all);
                gens.iter().all(|g| g.nf_by(&gb).is_zero())
            }
        }
    }
}

/// Evaluation context: source ring, point, and the ring over the residue field.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub point: FiberPoint,
    pub source: Ring,
    pub ring: Ring,
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.point.label(&self.source))
    }
}

impl Fiber {
    pub fn new(ring: &Ring, point: FiberPoint) -> Result<Fiber> {
        let fr = match &point {
            FiberPoint::Closed(vals) => {
                if vals.len() != ring.nparams() {
                    return Err(Error::Invalid(format!(
                        "point has {} coordinates, base has {} variables",
                        vals.len(),
                        ring.nparams()
                    )));
                }
                for g in ring.base().j_gb.iter() {
                    if !g.eval_base(vals).is_zero() {
                        return Err(Error::NotOnVariety(format!("{g} does not vanish at {}", point.label(ring))));
                    }
                }
                if ring.nparams() == 0 {
                    ring.clone()
                } else {
                    ring.fiber_ring()
                }
            }
            FiberPoint::Generic => {
                if !ring.base_is_domain() {
                    return Err(Error::BaseNotDomain);
                }
                ring.clone()
            }
            FiberPoint::Prime(gens) => {
                if gens.iter().any(|g| !g.is_base_element()) {
                    return Err(Error::Invalid("prime generators must be base elements".into()));
                }
                let mut all = gens.clone();
                all.extend(ring.base().j_gb.iter().cloned());
                let gb = ideal_gb(ring, &all);
                if gb.iter().any(|g| g.is_unit_constant()) {
                    return Err(Error::NotOnVariety("prime is the unit ideal".into()));
                }
                if gb.is_empty() {
                    ring.clone()
                } else {
                    ring.with_prime_base(gb)
                }
            }
        };
        Ok(Fiber { point, source: ring.clone(), ring: fr })
    }

    pub fn generic(ring: &Ring) -> Result<Fiber> {
        Fiber::new(ring, FiberPoint::Generic)
    }

    /// True when the residue field is `k` itself (no base variables survive).
    pub fn is_rational(&self) -> bool {
        self.ring.nparams() == 0
    }

    pub fn poly(&self, p: &Poly) -> Poly {
        if self.ring == self.source {
            return p.clone();
        }
        match &self.point {
            FiberPoint::Closed(vals) => {
                let bs = self.source.base_start;
                let mut v: Vec<Option<Coeff>> = vec![None; self.source.nvars()];
                for (k, c) in vals.iter().enumerate() {
                    v[bs + k] = Some(c.clone());
                }
                p.substitute(&self.ring, &v, |e| e[..bs].to_vec())
            }
            FiberPoint::Generic => p.clone(),
            FiberPoint::Prime(_) => p.transfer(&self.ring).reduce_base(),
        }
    }

    pub fn free(&self, f: &FreeModule) -> FreeModule {
        FreeModule::new(&self.ring, f.shifts.clone())
    }

    pub fn matrix(&self, m: &Matrix) -> Matrix {
        m.map_entries(&self.ring, |p| self.poly(p))
    }

    /// Evaluate a presentation; columns that vanish keep their source degree.
    pub fn presentation(&self, m: &ModulePresentation) -> ModulePresentation {
        ModulePresentation {
            target: self.free(&m.target),
            source: self.free(&m.source),
            matrix: self.matrix(&m.matrix),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDescriptor;

    #[test]
    fn closed_point_substitution() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1), ("y", 1)]).over_params(&["t"])).unwrap();
        let f = Fiber::new(&r, FiberPoint::at_ints(&r, &[3])).unwrap();
        let p = f.poly(&r.parse_poly("t*x + y").unwrap());
        assert_eq!(p, f.ring.parse_poly("3*x + y").unwrap());
    }

    #[test]
    fn katzman_form_at_one_one_is_a_square() {
        let mut d = RingDescriptor::standard(&[("u", 1), ("v", 1)]).over_params(&["s", "t"]);
        d.grading_rank = 2;
        d.xvars = vec![("u".into(), crate::ring::Degree(1, 0)), ("v".into(), crate::ring::Degree(1, 0))];
        d.yvars = vec![("x".into(), crate::ring::Degree(0, 1)), ("y".into(), crate::ring::Degree(0, 1))];
        let r = Ring::new(&d).unwrap();
        let f = Fiber::new(&r, FiberPoint::at_ints(&r, &[1, 1])).unwrap();
        let g = f.poly(&r.parse_poly("s*x^2*v^2 - (t+s)*x*y*u*v + t*y^2*u^2").unwrap());
        let sq = f.ring.parse_poly("x*v - y*u").unwrap();
        assert_eq!(g, sq.mul(&sq));
    }

    #[test]
    fn off_variety_point_rejected() {
        let r = Ring::new(&RingDescriptor::standard(&[("x", 1)]).over_quotient(&["t"], &["t*(t-1)"])).unwrap();
        assert!(matches!(Fiber::new(&r, FiberPoint::at_ints(&r, &[2])), Err(Error::NotOnVariety(_))));
        assert!(Fiber::new(&r, FiberPoint::at_ints(&r, &[1])).is_ok());
    }
}
