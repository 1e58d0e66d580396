//! Evaluable solution fields: a basis triple, a holomorphic F and an
//! index k give U_k(x, y, z); superpositions and grid sweeps on top.

use serde::{Deserialize, Serialize};

use crate::characteristic::BasisTriple;
use crate::error::{Error, Result};
use crate::holo::HolomorphicFn;
use crate::jets::{compose_taylor, Cx, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Point3 { x, y, z })
        } else {
            Err(Error::NonFinite)
        }
    }
}

/// One member of the family: U_k built from `basis` and `f`.
///
/// `new` additionally demands that the basis constrains at least
/// ⌈(k+1)/2⌉ equations, the count needed for U_k to be biharmonic;
/// `new_unchecked` skips the guard for exploration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSpec {
    basis: BasisTriple,
    f: HolomorphicFn,
    k: usize,
}

impl SolutionSpec {
    pub fn new(basis: BasisTriple, f: HolomorphicFn, k: usize) -> Result<Self> {
        let n = basis.n();
        if k >= n {
            return Err(Error::InvalidSpec(format!(
                "index k = {k} needs algebra dimension n >= {}, got {n}",
                k + 1
            )));
        }
        let needed = (k + 1).div_ceil(2);
        if basis.constrained_count() < needed {
            return Err(Error::InvalidSpec(format!(
                "basis constrains {} equations but U_{k} needs {needed} for biharmonicity",
                basis.constrained_count()
            )));
        }
        Ok(SolutionSpec { basis, f, k })
    }

    pub fn new_unchecked(basis: BasisTriple, f: HolomorphicFn, k: usize) -> Result<Self> {
        if k >= basis.n() {
            return Err(Error::InvalidSpec(format!(
                "index k = {k} out of range for n = {}",
                basis.n()
            )));
        }
        Ok(SolutionSpec { basis, f, k })
    }

    pub fn basis(&self) -> &BasisTriple {
        &self.basis
    }

    pub fn f(&self) -> &HolomorphicFn {
        &self.f
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// ξ_r = k_r·x + m_r·y + g_r·z for r = 0..n-1.
pub fn xi_values(basis: &BasisTriple, p: Point3) -> Vec<Cx> {
    basis
        .k()
        .iter()
        .zip(basis.m())
        .zip(basis.g())
        .map(|((k, m), g)| k * p.x + m * p.y + g * p.z)
        .collect()
}

/// U_k at a point: build the jet ζ = Σ ξ_r ρ^r, push F through it by its
/// Taylor data at ξ_0, read the ρ^k coefficient.
pub fn evaluate_u(spec: &SolutionSpec, p: Point3) -> Result<Cx> {
    let xi = xi_values(spec.basis(), p);
    if !spec.f().in_domain(xi[0]) {
        return Err(Error::point_out_of_domain(p));
    }
    let zeta = Jet::new(xi)?;
    let derivs = spec.f().derivatives(zeta.coeff(0), zeta.order())?;
    Ok(compose_taylor(&derivs, &zeta)?.coeff(spec.k()))
}

/// Weighted sum of family members; Δ² is linear so any superposition is
/// again a solution.
#[derive(Debug, Clone)]
pub struct Superposition {
    members: Vec<(Cx, SolutionSpec)>,
}

impl Superposition {
    pub fn new(members: Vec<(Cx, SolutionSpec)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidSpec("superposition needs at least one member".into()));
        }
        Ok(Superposition { members })
    }

    pub fn members(&self) -> &[(Cx, SolutionSpec)] {
        &self.members
    }
}

pub fn evaluate_superposition(s: &Superposition, p: Point3) -> Result<Cx> {
    let mut sum = Cx::ZERO;
    for (w, spec) in s.members() {
        sum += w * evaluate_u(spec, p)?;
    }
    Ok(sum)
}

/// Axis-aligned lattice; `steps` counts points per axis (≥ 1). A single
/// step collapses the axis to its `min` coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: [f64; 3],
    pub max: [f64; 3],
    pub steps: [usize; 3],
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for axis in 0..3 {
            if self.steps[axis] < 1 {
                return Err(Error::InvalidGrid(format!(
                    "steps must be >= 1 on every axis, got {} on axis {axis}",
                    self.steps[axis]
                )));
            }
            if !self.min[axis].is_finite() || !self.max[axis].is_finite() {
                return Err(Error::InvalidGrid("non-finite grid bounds".into()));
            }
            if self.max[axis] < self.min[axis] {
                return Err(Error::InvalidGrid(format!(
                    "max < min on axis {axis}"
                )));
            }
        }
        Ok(())
    }

    fn coord(&self, axis: usize, idx: usize) -> f64 {
        if self.steps[axis] == 1 {
            self.min[axis]
        } else {
            let t = idx as f64 / (self.steps[axis] - 1) as f64;
            self.min[axis] + t * (self.max[axis] - self.min[axis])
        }
    }

    pub fn len(&self) -> usize {
        self.steps[0] * self.steps[1] * self.steps[2]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row-major, z-fastest point order.
    pub fn points(&self) -> impl Iterator<Item = Point3> + '_ {
        (0..self.steps[0]).flat_map(move |ix| {
            (0..self.steps[1]).flat_map(move |iy| {
                (0..self.steps[2]).map(move |iz| Point3 {
                    x: self.coord(0, ix),
                    y: self.coord(1, iy),
                    z: self.coord(2, iz),
                })
            })
        })
    }
}

/// Evaluated lattice, values in the grid's point order.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Vec<Cx>,
}

pub fn grid_eval(spec: &SolutionSpec, grid: &GridSpec) -> Result<Field> {
    grid.validate()?;
    let mut values = Vec::with_capacity(grid.len());
    for p in grid.points() {
        values.push(evaluate_u(spec, p)?);
    }
    Ok(Field { grid: *grid, values })
}

pub fn grid_eval_superposition(s: &Superposition, grid: &GridSpec) -> Result<Field> {
    grid.validate()?;
    let mut values = Vec::with_capacity(grid.len());
    for p in grid.points() {
        values.push(evaluate_superposition(s, p)?);
    }
    Ok(Field { grid: *grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::{solve_g, Branch, Mode, SpectralParams};
    use crate::jets::cx;
    use crate::resolvent::{residue_eval, resolvent_coeffs};

    fn basis_n1() -> BasisTriple {
        solve_g(&SpectralParams {
            n: 1,
            k: vec![Cx::ONE],
            m: vec![Cx::ZERO],
            branch: Branch::Plus,
            mode: Mode::Harmonic,
            free_g: None,
        })
        .unwrap()
    }

    fn basis_n2_free_g1() -> BasisTriple {
        solve_g(&SpectralParams {
            n: 2,
            k: vec![Cx::ONE, Cx::ZERO],
            m: vec![Cx::ZERO, Cx::ZERO],
            branch: Branch::Plus,
            mode: Mode::Biharmonic,
            free_g: Some(vec![Cx::ZERO, Cx::ONE]),
        })
        .unwrap()
    }

    fn identity_fn() -> HolomorphicFn {
        HolomorphicFn::polynomial(vec![Cx::ZERO, Cx::ONE]).unwrap()
    }

    #[test]
    fn xi_values_examples() {
        let b = basis_n1();
        let xi = xi_values(&b, Point3 { x: 1.0, y: 2.0, z: 3.0 });
        assert_eq!(xi, vec![cx(1.0, 3.0)]);
        let xi0 = xi_values(&b, Point3 { x: 0.0, y: 0.0, z: 0.0 });
        assert_eq!(xi0, vec![Cx::ZERO]);
    }

    #[test]
    fn xi_matches_jet_combination() {
        let b = basis_n2_free_g1();
        let p = Point3 { x: 0.7, y: -1.2, z: 2.1 };
        let xi = xi_values(&b, p);
        let jet = b
            .e1()
            .scale(cx(p.x, 0.0))
            .add(&b.e2().scale(cx(p.y, 0.0)))
            .unwrap()
            .add(&b.e3().scale(cx(p.z, 0.0)))
            .unwrap();
        for (a, c) in xi.iter().zip(jet.coeffs()) {
            assert!((a - c).norm() < 1e-15);
        }
    }

    #[test]
    fn u0_is_f_of_xi0() {
        let spec = SolutionSpec::new(basis_n1(), identity_fn(), 0).unwrap();
        let v = evaluate_u(&spec, Point3 { x: 1.0, y: 2.0, z: 3.0 }).unwrap();
        assert_eq!(v, cx(1.0, 3.0));
    }

    #[test]
    fn u1_cubic_example() {
        // basis (k, m, g) = ((1,0), (0,0), (i,1)), F = t³:
        // U_1 = ξ_1·3ξ_0² = 3z(x+iz)²; at (1,0,1) this is 6i
        let f = HolomorphicFn::polynomial(vec![Cx::ZERO, Cx::ZERO, Cx::ZERO, Cx::ONE]).unwrap();
        let spec = SolutionSpec::new(basis_n2_free_g1(), f, 1).unwrap();
        let v = evaluate_u(&spec, Point3 { x: 1.0, y: 0.0, z: 1.0 }).unwrap();
        assert!((v - cx(0.0, 6.0)).norm() < 1e-13);
    }

    #[test]
    fn index_bound_and_guard() {
        let b = basis_n1();
        assert!(SolutionSpec::new(b.clone(), identity_fn(), 1).is_err());
        // a basis with no constrained equations fails the guard for k=1
        let raw = BasisTriple::from_parts(
            vec![Cx::ONE, Cx::ZERO],
            vec![Cx::ZERO, Cx::ZERO],
            vec![Cx::ZERO, Cx::ZERO],
            0,
        )
        .unwrap();
        assert!(SolutionSpec::new(raw.clone(), identity_fn(), 1).is_err());
        assert!(SolutionSpec::new_unchecked(raw, identity_fn(), 1).is_ok());
    }

    #[test]
    fn domain_error_propagates() {
        let f = HolomorphicFn::power_series(Cx::ZERO, vec![Cx::ONE; 16], 1.0).unwrap();
        let spec = SolutionSpec::new(basis_n1(), f, 0).unwrap();
        assert!(matches!(
            evaluate_u(&spec, Point3 { x: 5.0, y: 0.0, z: 0.0 }),
            Err(Error::PointOutOfDomain { .. })
        ));
    }

    #[test]
    fn superposition_linearity() {
        let spec = SolutionSpec::new(basis_n2_free_g1(), identity_fn(), 1).unwrap();
        let p = Point3 { x: 0.3, y: 1.1, z: -0.6 };
        let single = Superposition::new(vec![(Cx::ONE, spec.clone())]).unwrap();
        assert_eq!(
            evaluate_superposition(&single, p).unwrap(),
            evaluate_u(&spec, p).unwrap()
        );
        let cancel = Superposition::new(vec![
            (Cx::ONE, spec.clone()),
            (-Cx::ONE, spec.clone()),
        ])
        .unwrap();
        assert_eq!(evaluate_superposition(&cancel, p).unwrap(), Cx::ZERO);
        let f2 = HolomorphicFn::polynomial(vec![Cx::ZERO, Cx::ZERO, Cx::ONE]).unwrap();
        let spec2 = SolutionSpec::new(basis_n2_free_g1(), f2, 1).unwrap();
        let two = Superposition::new(vec![(cx(2.0, 1.0), spec.clone()), (cx(0.0, -3.0), spec2.clone())])
            .unwrap();
        let hand = cx(2.0, 1.0) * evaluate_u(&spec, p).unwrap()
            + cx(0.0, -3.0) * evaluate_u(&spec2, p).unwrap();
        assert!((evaluate_superposition(&two, p).unwrap() - hand).norm() <= 1e-14 * hand.norm().max(1.0));
    }

    #[test]
    fn linearity_in_f() {
        let f1 = HolomorphicFn::polynomial(vec![cx(1.0, 0.0), cx(0.0, 2.0), cx(-1.0, 0.5)]).unwrap();
        let f2 = HolomorphicFn::polynomial(vec![cx(0.0, 1.0), cx(3.0, 0.0)]).unwrap();
        let (a, b) = (cx(2.0, -1.0), cx(0.5, 0.5));
        // a·f1 + b·f2 as a polynomial
        let mut sum = vec![Cx::ZERO; 3];
        for (i, c) in [cx(1.0, 0.0), cx(0.0, 2.0), cx(-1.0, 0.5)].iter().enumerate() {
            sum[i] += a * c;
        }
        for (i, c) in [cx(0.0, 1.0), cx(3.0, 0.0)].iter().enumerate() {
            sum[i] += b * c;
        }
        let basis = basis_n2_free_g1();
        let p = Point3 { x: 1.2, y: -0.4, z: 0.9 };
        let u_sum = evaluate_u(
            &SolutionSpec::new(basis.clone(), HolomorphicFn::polynomial(sum).unwrap(), 1).unwrap(),
            p,
        )
        .unwrap();
        let u1 = evaluate_u(&SolutionSpec::new(basis.clone(), f1, 1).unwrap(), p).unwrap();
        let u2 = evaluate_u(&SolutionSpec::new(basis, f2, 1).unwrap(), p).unwrap();
        let hand = a * u1 + b * u2;
        assert!((u_sum - hand).norm() <= 1e-13 * hand.norm().max(1.0));
    }

    #[test]
    fn real_axis_reduction() {
        // m ≡ 0, z = 0: U_k depends on x alone through ξ_r = k_r x
        let b = basis_n2_free_g1();
        let f = HolomorphicFn::polynomial(vec![Cx::ZERO, Cx::ZERO, Cx::ONE]).unwrap();
        let spec = SolutionSpec::new(b, f, 1).unwrap();
        for y in [-2.0, 0.0, 3.5] {
            let v = evaluate_u(&spec, Point3 { x: 1.3, y, z: 0.0 }).unwrap();
            let v0 = evaluate_u(&spec, Point3 { x: 1.3, y: 0.0, z: 0.0 }).unwrap();
            assert_eq!(v, v0);
        }
    }

    #[test]
    fn evaluate_matches_residue_route() {
        let b = basis_n2_free_g1();
        let f = HolomorphicFn::Exp { scale: cx(0.8, 0.3) };
        for k in 0..2usize {
            let spec = SolutionSpec::new(b.clone(), f.clone(), k).unwrap();
            let p = Point3 { x: 0.4, y: 0.9, z: -1.1 };
            let via_jet = evaluate_u(&spec, p).unwrap();
            let xi = xi_values(&b, p);
            let via_residue =
                residue_eval(&resolvent_coeffs(k).unwrap(), &f, &xi).unwrap();
            assert!((via_jet - via_residue).norm() <= 1e-13 * via_jet.norm().max(1.0));
        }
    }

    #[test]
    fn grid_basics() {
        let spec = SolutionSpec::new(basis_n1(), identity_fn(), 0).unwrap();
        let one = GridSpec { min: [1.0, 2.0, 3.0], max: [1.0, 2.0, 3.0], steps: [1, 1, 1] };
        let f = grid_eval(&spec, &one).unwrap();
        assert_eq!(f.values, vec![cx(1.0, 3.0)]);

        let two = GridSpec { min: [0.0, 0.0, 0.0], max: [1.0, 0.0, 0.0], steps: [2, 1, 1] };
        let f = grid_eval(&spec, &two).unwrap();
        assert_eq!(f.values, vec![Cx::ZERO, cx(1.0, 0.0)]);

        let bad = GridSpec { min: [0.0; 3], max: [1.0; 3], steps: [0, 1, 1] };
        assert!(grid_eval(&spec, &bad).is_err());

        let cube = GridSpec { min: [-1.0; 3], max: [1.0; 3], steps: [5, 5, 5] };
        let f1 = grid_eval(&spec, &cube).unwrap();
        let f2 = grid_eval(&spec, &cube).unwrap();
        assert_eq!(f1.values.len(), 125);
        assert_eq!(f1, f2);
    }

    #[test]
    fn grid_order_is_z_fastest() {
        let g = GridSpec { min: [0.0; 3], max: [1.0; 3], steps: [2, 1, 2] };
        let pts: Vec<Point3> = g.points().collect();
        assert_eq!(pts[0], Point3 { x: 0.0, y: 0.0, z: 0.0 });
        assert_eq!(pts[1], Point3 { x: 0.0, y: 0.0, z: 1.0 });
        assert_eq!(pts[2], Point3 { x: 1.0, y: 0.0, z: 0.0 });
    }
}
