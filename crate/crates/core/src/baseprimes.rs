//! Minimal primes of a base ideal `J ⊂ k[z]` at desk scale.
//!
//! Principal univariate `J` is split over its rational roots; a leftover
//! factor of degree at most 3 is irreducible. Anything else is taken to be
//! prime and flagged as uncertified.

use crate::poly::Poly;
use crate::ring::Ring;
use crate::unipoly::UniPoly;

pub(crate) fn minimal_primes(ring: &Ring, j_gb: &[Poly]) -> (Vec<Vec<Poly>>, bool) {
    if j_gb.len() == 1 && ring.char_p == 0 {
        let g = &j_gb[0];
        let used: Vec<usize> = ring.z_indices().into_iter().filter(|&v| g.involves_var(v)).collect();
        if used.len() == 1 {
            let v = used[0];
            if let Some(u) = UniPoly::from_poly(g, v) {
                let sf = u.squarefree();
                let roots = sf.rational_roots();
                let mut comps = Vec::new();
                let mut rest = sf.clone();
                for r in &roots {
                    let lin = UniPoly(vec![r.neg_ref(), crate::coeff::Rat::one()]);
                    rest = rest.divrem(&lin).0;
                    comps.push(vec![lin.to_poly(ring, v)]);
                }
                let rd = rest.degree().unwrap_or(0);
                let certified = rd <= 3;
                if rd > 0 {
                    comps.push(vec![rest.monic().to_poly(ring, v)]);
                }
                return (comps, certified);
            }
        }
    }
    (vec![j_gb.to_vec()], false)
}
