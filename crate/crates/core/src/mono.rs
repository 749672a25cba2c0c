//! Exponent vectors.

use smallvec::SmallVec;

/// A monomial as a fixed-width exponent vector (one slot per ring variable).
///
/// Multiplication overflow is a hard error.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(SmallVec<[u16; 8]>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(SmallVec::from_elem(0, n))
    }

    pub fn from_exps(e: &[u16]) -> Mono {
        Mono(SmallVec::from_slice(e))
    }

    pub fn var(n: usize, i: usize, e: u16) -> Mono {
        let mut m = Mono::one(n);
        m.0[i] = e;
        m
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn exps_mut(&mut self) -> &mut [u16] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        debug_assert_eq!(self.len(), o.len());
        Mono(
            self.0
                .iter()
                .zip(o.0.iter())
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn is_coprime(&self, o: &Mono) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit mask of the variables occurring, for quick divisibility rejection.
    pub fn support_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                m |= 1 << (i & 63);
            }
        }
        m
    }

    pub fn pow(&self, k: u32) -> Mono {
        Mono(
            self.0
                .iter()
                .map(|&e| {
                    let v = e as u32 * k;
                    u16::try_from(v).expect("exponent overflow")
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_and_division() {
        let a = Mono::from_exps(&[2, 0, 1]);
        let b = Mono::from_exps(&[1, 3, 0]);
        let l = a.lcm(&b);
        assert_eq!(l.exps(), &[2, 3, 1]);
        assert!(a.divides(&l) && b.divides(&l));
        assert_eq!(a.quotient_of(&l).exps(), &[0, 3, 0]);
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn overflow_is_fatal() {
        let a = Mono::from_exps(&[u16::MAX]);
        let _ = a.mul(&a);
    }
}
