//! Closed-form resolvent coefficients A_k as pole expansions, their
//! residue pairing with F, and the symbolic formula printer for the
//! solution family.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::holo::HolomorphicFn;
use crate::jets::Cx;

/// Hard cap on the expansion index: integer coefficients grow
/// combinatorially and the factorials in the formula printer must stay
/// exact in i128.
pub const INDEX_CAP: usize = 24;

pub type Rational = Ratio<i128>;

/// A monomial ξ_1^{a_1} ξ_2^{a_2} ..., stored sparsely by index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct XiMonomial(BTreeMap<usize, u32>);

impl XiMonomial {
    pub fn one() -> Self {
        XiMonomial::default()
    }

    pub fn from_pairs(pairs: &[(usize, u32)]) -> Self {
        let mut m = BTreeMap::new();
        for &(idx, pow) in pairs {
            assert!(idx >= 1 && pow >= 1);
            *m.entry(idx).or_insert(0) += pow;
        }
        XiMonomial(m)
    }

    pub fn times_symbol(&self, idx: usize) -> Self {
        let mut m = self.0.clone();
        *m.entry(idx).or_insert(0) += 1;
        XiMonomial(m)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    /// Σ r·a_r, the ρ-grading of the monomial.
    pub fn weight(&self) -> usize {
        self.0.iter().map(|(r, a)| r * *a as usize).sum()
    }

    /// Evaluates at concrete values; `xi` is the full vector ξ_0..ξ_k.
    pub fn eval(&self, xi: &[Cx]) -> Cx {
        self.0
            .iter()
            .map(|(r, a)| xi[*r].powu(*a))
            .product()
    }

    pub fn exponents(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(r, a)| (*r, *a))
    }

    fn render(&self, latex: bool) -> String {
        let mut s = String::new();
        for (r, a) in &self.0 {
            if latex {
                if *a == 1 {
                    let _ = write!(s, "\\xi_{r}");
                } else {
                    let _ = write!(s, "\\xi_{r}^{a}");
                }
            } else if *a == 1 {
                let _ = write!(s, "ξ{r}");
            } else {
                let _ = write!(s, "ξ{r}^{a}");
            }
        }
        s
    }
}

pub type IntPoly = BTreeMap<XiMonomial, i128>;

/// A_k written over powers of (t - ξ_0):
/// A_k = Σ_j poly_j(ξ_1..ξ_k) · (t - ξ_0)^{-j}, 1 ≤ j ≤ k+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleExpansion {
    k: usize,
    terms: BTreeMap<usize, IntPoly>,
}

impl PoleExpansion {
    pub fn index(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<usize, IntPoly> {
        &self.terms
    }

    /// Builds an expansion from literal (pole order, coefficient,
    /// monomial) terms; used by the embedded golden tables.
    pub fn from_terms(k: usize, entries: &[(usize, i128, XiMonomial)]) -> Self {
        let mut terms: BTreeMap<usize, IntPoly> = BTreeMap::new();
        for (j, c, m) in entries {
            *terms.entry(*j).or_default().entry(m.clone()).or_insert(0) += c;
        }
        PoleExpansion { k, terms }
    }
}

/// A_k via the recurrence A_0 = (t-ξ_0)^{-1},
/// A_s = (t-ξ_0)^{-1}(ξ_s A_0 + ξ_{s-1} A_1 + ... + ξ_1 A_{s-1}).
pub fn resolvent_coeffs(k: usize) -> Result<PoleExpansion> {
    Ok(resolvent_prefix(k)?.pop().expect("k+1 entries"))
}

/// All of A_0..A_k in one pass.
pub fn resolvent_prefix(k: usize) -> Result<Vec<PoleExpansion>> {
    if k > INDEX_CAP {
        return Err(Error::IndexOverCap(k, INDEX_CAP));
    }
    let mut all: Vec<PoleExpansion> = Vec::with_capacity(k + 1);
    let mut a0 = BTreeMap::new();
    a0.insert(1, IntPoly::from([(XiMonomial::one(), 1)]));
    all.push(PoleExpansion { k: 0, terms: a0 });
    for s in 1..=k {
        let mut terms: BTreeMap<usize, IntPoly> = BTreeMap::new();
        for i in 1..=s {
            for (j, poly) in &all[s - i].terms {
                let slot = terms.entry(j + 1).or_default();
                for (mono, c) in poly {
                    let entry = slot.entry(mono.times_symbol(i)).or_insert(0);
                    *entry = entry.checked_add(*c).ok_or(Error::CoefficientOverflow)?;
                }
            }
        }
        all.push(PoleExpansion { k: s, terms });
    }
    Ok(all)
}

/// Residue of F(t)·A_k at t = ξ_0:
/// Σ_j poly_j(ξ_1..ξ_k) · F^{(j-1)}(ξ_0) / (j-1)!.
pub fn residue_eval(pe: &PoleExpansion, f: &HolomorphicFn, xi: &[Cx]) -> Result<Cx> {
    if xi.len() < pe.k + 1 {
        return Err(Error::LengthMismatch {
            expected: pe.k + 1,
            got: xi.len(),
        });
    }
    let max_pole = pe.terms.keys().max().copied().unwrap_or(1);
    let derivs = f.derivatives(xi[0], max_pole)?;
    let mut sum = Cx::ZERO;
    let mut factorial = 1.0f64;
    let mut fact_at = 0usize;
    for (j, poly) in &pe.terms {
        while fact_at < j - 1 {
            fact_at += 1;
            factorial *= fact_at as f64;
        }
        let poly_val: Cx = poly.iter().map(|(m, c)| m.eval(xi) * (*c as f64)).sum();
        sum += poly_val * derivs[j - 1] / factorial;
    }
    Ok(sum)
}

pub type RatPoly = BTreeMap<XiMonomial, Rational>;

/// U_k = Σ_d poly_d(ξ)·F^{(d)}(ξ_0) with exact rational coefficients,
/// poly_d being the pole-order d+1 polynomial of A_k divided by d!.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UFormula {
    k: usize,
    terms: BTreeMap<usize, RatPoly>,
}

fn factorial_i128(d: usize) -> i128 {
    (1..=d as i128).product::<i128>().max(1)
}

pub fn u_formula(k: usize) -> Result<UFormula> {
    let pe = resolvent_coeffs(k)?;
    let mut terms: BTreeMap<usize, RatPoly> = BTreeMap::new();
    for (j, poly) in pe.terms() {
        let d = j - 1;
        let fact = factorial_i128(d);
        let slot: RatPoly = poly
            .iter()
            .map(|(m, c)| (m.clone(), Rational::new(*c, fact)))
            .collect();
        terms.insert(d, slot);
    }
    Ok(UFormula { k, terms })
}

impl UFormula {
    pub fn index(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &BTreeMap<usize, RatPoly> {
        &self.terms
    }

    pub fn to_text(&self) -> String {
        self.render(false)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    /// Deterministic rendering: ascending derivative order, monomials in
    /// their canonical order, common denominator factored out per term.
    fn render(&self, latex: bool) -> String {
        let head = if latex {
            format!("U_{{{}}} = ", self.k)
        } else {
            format!("U_{} = ", self.k)
        };
        let mut parts = Vec::new();
        for (d, poly) in &self.terms {
            parts.push(render_term(*d, poly, latex));
        }
        head + &parts.join(" + ")
    }
}

fn lcm_i128(a: i128, b: i128) -> i128 {
    a / gcd_i128(a, b) * b
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

fn derivative_mark(d: usize, latex: bool) -> String {
    if latex {
        match d {
            0 => "F(\\xi_0)".into(),
            1 => "F'(\\xi_0)".into(),
            2 => "F''(\\xi_0)".into(),
            3 => "F'''(\\xi_0)".into(),
            _ => format!("F^{{({d})}}(\\xi_0)"),
        }
    } else {
        match d {
            0 => "F(ξ0)".into(),
            1 => "F′(ξ0)".into(),
            2 => "F″(ξ0)".into(),
            3 => "F‴(ξ0)".into(),
            _ => format!("F^({d})(ξ0)"),
        }
    }
}

fn render_term(d: usize, poly: &RatPoly, latex: bool) -> String {
    let f = derivative_mark(d, latex);
    if poly.len() == 1 {
        let (mono, c) = poly.iter().next().unwrap();
        return render_single(mono, *c, &f, latex);
    }
    let denom = poly.values().fold(1i128, |acc, c| lcm_i128(acc, *c.denom()));
    let body = poly
        .iter()
        .map(|(mono, c)| {
            let scaled = (c * Rational::from_integer(denom)).to_integer();
            let ms = mono.render(latex);
            if scaled == 1 {
                ms
            } else if latex {
                format!("{scaled}{ms}")
            } else {
                format!("{scaled}·{ms}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ");
    if denom == 1 {
        if latex {
            format!("({body}){f}")
        } else {
            format!("({body})·{f}")
        }
    } else if latex {
        format!("\\frac{{1}}{{{denom}}}({body}){f}")
    } else {
        format!("(1/{denom})({body})·{f}")
    }
}

fn render_single(mono: &XiMonomial, c: Rational, f: &str, latex: bool) -> String {
    let ms = mono.render(latex);
    if ms.is_empty() {
        // constant polynomial; only U_0 hits this
        return if c == Rational::from_integer(1) {
            f.to_string()
        } else if latex {
            format!("\\frac{{{}}}{{{}}}{f}", c.numer(), c.denom())
        } else {
            format!("({}/{})·{f}", c.numer(), c.denom())
        };
    }
    if c == Rational::from_integer(1) {
        if latex {
            format!("{ms}{f}")
        } else {
            format!("{ms}·{f}")
        }
    } else if *c.denom() == 1 {
        if latex {
            format!("{}{ms}{f}", c.numer())
        } else {
            format!("{}·{ms}·{f}", c.numer())
        }
    } else if latex {
        format!("\\frac{{{}}}{{{}}}{ms}{f}", c.numer(), c.denom())
    } else if *c.numer() == 1 {
        format!("(1/{})·{ms}·{f}", c.denom())
    } else {
        format!("({}/{})·{ms}·{f}", c.numer(), c.denom())
    }
}
