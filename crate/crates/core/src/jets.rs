//! Arithmetic of the algebra with basis {1, ρ, ..., ρ^{n-1}} and ρ^n = 0,
//! realized as truncated complex power series.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complex scalar used throughout.
pub type Cx = Complex64;

pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

fn check_finite(c: &Cx) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Element of the truncated-series algebra: `coeffs[r]` is the
/// coefficient of ρ^r. Immutable; every operation returns a fresh value.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<Cx>,
}

impl Jet {
    pub fn new(coeffs: Vec<Cx>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        for c in &coeffs {
            check_finite(c)?;
        }
        Ok(Jet { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        assert!(order >= 1);
        Jet {
            coeffs: vec![Cx::ZERO; order],
        }
    }

    /// The multiplicative unit (1, 0, ..., 0).
    pub fn one(order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.coeffs[0] = Cx::ONE;
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn coeff(&self, r: usize) -> Cx {
        self.coeffs[r]
    }

    fn check_order(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_order(other)?;
        Ok(Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_order(other)?;
        Ok(Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Truncated Cauchy product: result_r = Σ_{i+j=r} a_i b_j, terms with
    /// i + j ≥ n discarded.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![Cx::ZERO; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Jet { coeffs: out })
    }

    pub fn scale(&self, s: Cx) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|a| s * a).collect(),
        }
    }

    pub fn pow(&self, p: u32) -> Jet {
        let mut acc = Jet::one(self.order());
        for _ in 0..p {
            acc = acc.mul(self).expect("orders match");
        }
        acc
    }
}

/// Evaluates F on a jet through its Taylor data at the ρ⁰ part.
///
/// With η = `zeta` minus its ρ⁰ term (nilpotent), returns
/// Σ_{j<n} derivs[j]/j! · η^j. The ρ^k coefficient of the result is the
/// residue pairing of F with the k-th resolvent coefficient, so this is
/// the jet-arithmetic route to the whole solution family at once.
pub fn compose_taylor(derivs: &[Cx], zeta: &Jet) -> Result<Jet> {
    let n = zeta.order();
    if derivs.len() < n {
        return Err(Error::InsufficientDerivatives {
            needed: n,
            got: derivs.len(),
        });
    }
    let mut eta = zeta.clone();
    eta.coeffs[0] = Cx::ZERO;
    let mut acc = Jet::zero(n);
    let mut eta_pow = Jet::one(n);
    let mut factorial = 1.0f64;
    for (j, d) in derivs.iter().take(n).enumerate() {
        if j > 0 {
            factorial *= j as f64;
            eta_pow = eta_pow.mul(&eta)?;
        }
        acc = acc.add(&eta_pow.scale(d / factorial))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn jet(vals: &[(f64, f64)]) -> Jet {
        Jet::new(vals.iter().map(|&(re, im)| cx(re, im)).collect()).unwrap()
    }

    fn approx_eq(a: &Jet, b: &Jet, tol: f64) -> bool {
        let scale = a
            .coeffs()
            .iter()
            .chain(b.coeffs())
            .map(|c| c.norm())
            .fold(1.0f64, f64::max);
        a.coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| (x - y).norm() <= tol * scale)
    }

    #[test]
    fn add_componentwise() {
        let a = jet(&[(1.0, 0.0), (0.0, 2.0)]);
        let b = jet(&[(3.0, 0.0), (0.0, 0.0)]);
        assert_eq!(a.add(&b).unwrap(), jet(&[(4.0, 0.0), (0.0, 2.0)]));
        assert_eq!(a.add(&Jet::zero(2)).unwrap(), a);
    }

    #[test]
    fn add_order_mismatch() {
        let a = jet(&[(1.0, 0.0)]);
        let b = Jet::zero(2);
        assert!(matches!(a.add(&b), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Jet::new(vec![cx(f64::NAN, 0.0)]).is_err());
        assert!(Jet::new(vec![cx(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn mul_truncates() {
        // n=2: (1+ρ)(1-ρ) = 1, ρ² truncated
        let a = jet(&[(1.0, 0.0), (1.0, 0.0)]);
        let b = jet(&[(1.0, 0.0), (-1.0, 0.0)]);
        assert_eq!(a.mul(&b).unwrap(), jet(&[(1.0, 0.0), (0.0, 0.0)]));
        // n=3: (1+ρ)(1-ρ) = 1 - ρ²
        let a = jet(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        let b = jet(&[(1.0, 0.0), (-1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(
            a.mul(&b).unwrap(),
            jet(&[(1.0, 0.0), (0.0, 0.0), (-1.0, 0.0)])
        );
        // ρ·ρ = ρ², ρ³ = 0
        let rho = jet(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(rho.pow(2), jet(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]));
        assert_eq!(rho.pow(3), Jet::zero(3));
    }

    #[test]
    fn scale_examples() {
        let a = jet(&[(1.0, 0.0), (0.0, 1.0)]);
        assert_eq!(a.scale(cx(2.0, 0.0)), jet(&[(2.0, 0.0), (0.0, 2.0)]));
        assert_eq!(a.scale(Cx::ZERO), Jet::zero(2));
        let b = jet(&[(0.0, 1.0), (0.0, 0.0)]);
        assert_eq!(b.scale(cx(0.0, 1.0)), jet(&[(-1.0, 0.0), (0.0, 0.0)]));
    }

    #[test]
    fn pow_examples() {
        let a = jet(&[(2.0, 1.0), (3.0, 0.0)]);
        assert_eq!(a.pow(0), Jet::one(2));
        let rho = Jet::new(
            (0..5)
                .map(|r| if r == 1 { Cx::ONE } else { Cx::ZERO })
                .collect(),
        )
        .unwrap();
        let mut expect = Jet::zero(5);
        expect.coeffs[4] = Cx::ONE;
        assert_eq!(rho.pow(4), expect);
    }

    /// Even/odd Cauchy-square split: B_r = k_{r/2}² + 2Σ_{i<r/2} k_i k_{r-i}
    /// for even r, 2Σ_{i≤(r-1)/2} k_i k_{r-i} for odd r.
    fn square_split(k: &[Cx], r: usize) -> Cx {
        if r % 2 == 0 {
            let mut s = k[r / 2] * k[r / 2];
            for i in 0..r / 2 {
                s += 2.0 * k[i] * k[r - i];
            }
            s
        } else {
            let mut s = Cx::ZERO;
            for i in 0..=(r - 1) / 2 {
                s += 2.0 * k[i] * k[r - i];
            }
            s
        }
    }

    #[test]
    fn square_matches_split_formula() {
        let k = jet(&[
            (1.0, 0.0),
            (2.0, -1.0),
            (0.5, 0.5),
            (-1.0, 3.0),
            (0.0, 1.0),
            (2.0, 2.0),
            (-0.5, 0.0),
            (1.5, -2.5),
            (0.25, 1.0),
        ]);
        let sq = k.pow(2);
        for r in 0..=8 {
            let expect = square_split(k.coeffs(), r);
            assert!((sq.coeff(r) - expect).norm() <= 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn compose_identity_and_square() {
        let zeta = jet(&[(1.0, 0.5), (2.0, 0.0), (3.0, -1.0)]);
        // F = t: derivs [ξ0, 1, 0]
        let id = compose_taylor(&[zeta.coeff(0), Cx::ONE, Cx::ZERO], &zeta).unwrap();
        assert_eq!(id, zeta);
        // F = t²: (ξ0², 2ξ0ξ1, 2ξ0ξ2 + ξ1²)
        let z0 = zeta.coeff(0);
        let sq = compose_taylor(&[z0 * z0, 2.0 * z0, cx(2.0, 0.0)], &zeta).unwrap();
        assert!(approx_eq(&sq, &zeta.pow(2), 1e-14));
    }

    #[test]
    fn compose_insufficient_derivs() {
        let zeta = jet(&[(1.0, 0.0), (2.0, 0.0)]);
        assert!(matches!(
            compose_taylor(&[Cx::ONE], &zeta),
            Err(Error::InsufficientDerivatives { .. })
        ));
    }

    /// Horner evaluation of a polynomial on a jet; independent oracle for
    /// compose_taylor.
    fn horner(poly: &[Cx], zeta: &Jet) -> Jet {
        let n = zeta.order();
        let mut acc = Jet::zero(n);
        for c in poly.iter().rev() {
            acc = acc.mul(zeta).unwrap();
            acc.coeffs[0] += c;
        }
        acc
    }

    fn poly_derivs(poly: &[Cx], z0: Cx, count: usize) -> Vec<Cx> {
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let mut s = Cx::ZERO;
            for (d, c) in poly.iter().enumerate().skip(j) {
                let mut fall = 1.0;
                for t in 0..j {
                    fall *= (d - t) as f64;
                }
                s += c * fall * z0.powu((d - j) as u32);
            }
            out.push(s);
        }
        out
    }

    fn arb_cx() -> impl Strategy<Value = Cx> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| cx(re, im))
    }

    fn arb_jet(n: usize) -> impl Strategy<Value = Jet> {
        proptest::collection::vec(arb_cx(), n).prop_map(|v| Jet::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn mul_commutes_and_associates(
            (a, b, c) in (1usize..7).prop_flat_map(|n| (arb_jet(n), arb_jet(n), arb_jet(n)))
        ) {
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            prop_assert!(approx_eq(&ab, &ba, 1e-12));
            let abc1 = ab.mul(&c).unwrap();
            let abc2 = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert!(approx_eq(&abc1, &abc2, 1e-12));
        }

        #[test]
        fn mul_distributes(
            (a, b, c) in (1usize..7).prop_flat_map(|n| (arb_jet(n), arb_jet(n), arb_jet(n)))
        ) {
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert!(approx_eq(&lhs, &rhs, 1e-12));
        }

        #[test]
        fn add_associates(
            (a, b, c) in (1usize..7).prop_flat_map(|n| (arb_jet(n), arb_jet(n), arb_jet(n)))
        ) {
            let lhs = a.add(&b).unwrap().add(&c).unwrap();
            let rhs = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert!(approx_eq(&lhs, &rhs, 1e-15));
        }

        #[test]
        fn nilpotent_to_the_order(mut a in (2usize..7).prop_flat_map(arb_jet)) {
            a.coeffs[0] = Cx::ZERO;
            let n = a.order();
            prop_assert_eq!(a.pow(n as u32), Jet::zero(n));
        }

        #[test]
        fn compose_matches_horner(
            (zeta, poly) in (2usize..7).prop_flat_map(|n| {
                (arb_jet(n), proptest::collection::vec(arb_cx(), 1..8))
            })
        ) {
            let n = zeta.order();
            let derivs = poly_derivs(&poly, zeta.coeff(0), n);
            let via_taylor = compose_taylor(&derivs, &zeta).unwrap();
            let via_horner = horner(&poly, &zeta);
            prop_assert!(approx_eq(&via_taylor, &via_horner, 1e-11));
        }
    }
}
