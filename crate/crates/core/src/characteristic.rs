//! Solving the characteristic equation (e1² + e2² + e3²)² = 0 in the
//! truncated-series algebra: free data (k_r, m_r) in, basis triples out.

use crate::error::{Error, Result};
use crate::jets::{Cx, Jet};
use serde::{Deserialize, Serialize};

/// Sign choice in g_0 = ±i√(k_0² + m_0²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

impl TryFrom<i8> for Branch {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Branch::Plus),
            -1 => Ok(Branch::Minus),
            other => Err(format!("branch must be 1 or -1, got {other}")),
        }
    }
}

impl From<Branch> for i8 {
    fn from(b: Branch) -> i8 {
        match b {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }
}

/// Which constraint set the solver enforces.
///
/// `Harmonic` kills every W_r, so e1² + e2² + e3² itself vanishes.
/// `Biharmonic` kills only W_0..W_{⌈n/2⌉-1}, the minimal set that makes
/// the square of W vanish up to ρ^{n-1}; the remaining g_r are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Harmonic,
    Biharmonic,
}

/// Free data of a basis triple: the coefficients of e1 and e2, the sign
/// branch, the constraint mode, and optional values for unconstrained g_r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralParams {
    pub n: usize,
    pub k: Vec<Cx>,
    pub m: Vec<Cx>,
    pub branch: Branch,
    pub mode: Mode,
    pub free_g: Option<Vec<Cx>>,
}

const PIVOT_REL_EPS: f64 = 1e-12;

impl SpectralParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("algebra dimension n must be >= 1".into()));
        }
        for (name, v) in [("k", &self.k), ("m", &self.m)] {
            if v.len() != self.n {
                return Err(Error::InvalidConfig(format!(
                    "{name} has {} entries, expected n = {}",
                    v.len(),
                    self.n
                )));
            }
        }
        if let Some(fg) = &self.free_g {
            if fg.len() != self.n {
                return Err(Error::InvalidConfig(format!(
                    "free_g has {} entries, expected n = {}",
                    fg.len(),
                    self.n
                )));
            }
        }
        self.pivot()?;
        Ok(())
    }

    /// k_0² + m_0², rejected when it vanishes relative to the input scale.
    pub fn pivot(&self) -> Result<Cx> {
        let p = self.k[0] * self.k[0] + self.m[0] * self.m[0];
        let scale = self.k[0].norm_sqr().max(self.m[0].norm_sqr()).max(1.0);
        if p.norm() <= PIVOT_REL_EPS * scale {
            return Err(Error::IsotropicBaseDirection);
        }
        Ok(p)
    }
}

/// A solved basis: e1, e2, e3 in the order-n algebra with the first
/// `constrained_count` equations of the characteristic system enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisTriple {
    e1: Jet,
    e2: Jet,
    e3: Jet,
    constrained_count: usize,
}

impl BasisTriple {
    /// Assembles a triple from raw coefficient vectors without enforcing
    /// the characteristic equation; callers own the residual check.
    pub fn from_parts(k: Vec<Cx>, m: Vec<Cx>, g: Vec<Cx>, constrained_count: usize) -> Result<Self> {
        let n = k.len();
        if m.len() != n || g.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: m.len().min(g.len()),
            });
        }
        Ok(BasisTriple {
            e1: Jet::new(k)?,
            e2: Jet::new(m)?,
            e3: Jet::new(g)?,
            constrained_count,
        })
    }

    pub fn n(&self) -> usize {
        self.e1.order()
    }

    pub fn e1(&self) -> &Jet {
        &self.e1
    }

    pub fn e2(&self) -> &Jet {
        &self.e2
    }

    pub fn e3(&self) -> &Jet {
        &self.e3
    }

    pub fn k(&self) -> &[Cx] {
        self.e1.coeffs()
    }

    pub fn m(&self) -> &[Cx] {
        self.e2.coeffs()
    }

    pub fn g(&self) -> &[Cx] {
        self.e3.coeffs()
    }

    pub fn constrained_count(&self) -> usize {
        self.constrained_count
    }

    /// Returns a copy with g_idx shifted by delta; constraint metadata is
    /// kept so tests can probe how the residual reacts.
    pub fn perturb_g(&self, idx: usize, delta: Cx) -> BasisTriple {
        let mut g = self.g().to_vec();
        g[idx] += delta;
        BasisTriple::from_parts(self.k().to_vec(), self.m().to_vec(), g, self.constrained_count)
            .expect("lengths unchanged")
    }

    /// Largest input magnitude; residual tolerances scale with its 4th power.
    pub fn input_scale(&self) -> f64 {
        self.k()
            .iter()
            .chain(self.m())
            .chain(self.g())
            .map(|c| c.norm())
            .fold(1.0f64, f64::max)
    }
}

/// ρ-coefficients of e1² + e2² + e3².
#[derive(Debug, Clone, PartialEq)]
pub struct WSequence(pub Vec<Cx>);

fn conv_at(a: &[Cx], b: &[Cx], s: usize) -> Cx {
    (0..=s).map(|i| a[i] * b[s - i]).sum()
}

fn convolution(a: &[Cx], b: &[Cx], n: usize) -> Vec<Cx> {
    (0..n).map(|s| conv_at(a, b, s)).collect()
}

/// Cauchy square by the even/odd split:
/// even r: a_{r/2}² + 2(a_0 a_r + ... + a_{r/2-1} a_{r/2+1}),
/// odd r:  2(a_0 a_r + ... + a_{(r-1)/2} a_{(r+1)/2}).
pub fn square_split(a: &[Cx]) -> Vec<Cx> {
    (0..a.len())
        .map(|r| {
            if r % 2 == 0 {
                let mut s = a[r / 2] * a[r / 2];
                for i in 0..r / 2 {
                    s += 2.0 * a[i] * a[r - i];
                }
                s
            } else {
                let mut s = Cx::ZERO;
                for i in 0..=(r - 1) / 2 {
                    s += 2.0 * a[i] * a[r - i];
                }
                s
            }
        })
        .collect()
}

/// W_r = Σ_{i+j=r} (k_i k_j + m_i m_j + g_i g_j).
pub fn w_coefficients(k: &[Cx], m: &[Cx], g: &[Cx]) -> Result<WSequence> {
    let n = k.len();
    if m.len() != n || g.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: m.len().min(g.len()),
        });
    }
    let (b, c, d) = (square_split(k), square_split(m), square_split(g));
    Ok(WSequence(
        (0..n).map(|r| b[r] + c[r] + d[r]).collect(),
    ))
}

/// ρ-coefficients of (e1² + e2² + e3²)², as the Cauchy square of W.
pub fn char_residual(t: &BasisTriple) -> Vec<Cx> {
    let w = w_coefficients(t.k(), t.m(), t.g()).expect("triple lengths agree");
    convolution(&w.0, &w.0, t.n())
}

/// Same residual through the expanded bookkeeping
/// G_r + H_r + M_r + 2P_r + 2R_r + 2S_r, where G is the split-square of
/// the split-square of k, P the convolution of the k- and m-squares, etc.
pub fn char_residual_expanded(t: &BasisTriple) -> Vec<Cx> {
    let n = t.n();
    let b = square_split(t.k());
    let c = square_split(t.m());
    let d = square_split(t.g());
    let g4 = square_split(&b);
    let h4 = square_split(&c);
    let m4 = square_split(&d);
    let p = convolution(&b, &c, n);
    let r = convolution(&b, &d, n);
    let s = convolution(&c, &d, n);
    (0..n)
        .map(|i| g4[i] + h4[i] + m4[i] + 2.0 * (p[i] + r[i] + s[i]))
        .collect()
}

/// Number of constrained equations: all n in Harmonic mode, ⌈n/2⌉ in
/// Biharmonic mode (W_0 = 0 pushes the square of W past ρ^{n-1}).
pub fn constrained_count(n: usize, mode: Mode) -> usize {
    match mode {
        Mode::Harmonic => n,
        Mode::Biharmonic => n.div_ceil(2),
    }
}

/// Solves for g: g_0 from the branch of ±i√(k_0² + m_0²), then each
/// constrained g_s from the linear equation W_s = 0 with pivot 2g_0.
pub fn solve_g(p: &SpectralParams) -> Result<BasisTriple> {
    p.validate()?;
    let n = p.n;
    let pivot = p.pivot()?;
    let g0 = p.branch.sign() * Cx::i() * pivot.sqrt();
    let constrained = constrained_count(n, p.mode);
    let mut g = vec![Cx::ZERO; n];
    g[0] = g0;
    for s in 1..n {
        if s < constrained {
            let ks = conv_at(&p.k, &p.k, s);
            let ms = conv_at(&p.m, &p.m, s);
            let mut gg = Cx::ZERO;
            for i in 1..s {
                gg += g[i] * g[s - i];
            }
            g[s] = -(ks + ms + gg) / (2.0 * g0);
        } else if let Some(fg) = &p.free_g {
            g[s] = fg[s];
        }
    }
    let triple = BasisTriple::from_parts(p.k.clone(), p.m.clone(), g, constrained)?;
    debug_assert!({
        let res = char_residual(&triple);
        let tol = 1e-10 * triple.input_scale().powi(4);
        res.iter().all(|c| c.norm() <= tol)
    });
    Ok(triple)
}

/// Diagnostic comparison of the printed closed forms for g_1, g_2 against
/// the first-principles solve. Never used as ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub paper_g1: Cx,
    pub paper_g2: Cx,
    pub solved_g1: Cx,
    pub solved_g2: Cx,
    pub g1_agrees: bool,
    pub g2_agrees: bool,
    pub paper_w1_is_zero: bool,
    pub paper_residual: Vec<Cx>,
    pub solved_residual: Vec<Cx>,
    #[serde(skip)]
    pub paper_triple: BasisTriple,
    #[serde(skip)]
    pub solved_triple: BasisTriple,
}

/// Builds a triple from the printed closed forms (g_0), (g_1), (g_2) and
/// reports its residual next to the solve_g output on the same params.
pub fn paper_closed_forms(p: &SpectralParams) -> Result<ClosedFormReport> {
    if p.n < 3 {
        return Err(Error::InvalidConfig(
            "closed-form comparison needs n >= 3".into(),
        ));
    }
    p.validate()?;
    let pivot = p.pivot()?;
    let root = pivot.sqrt();
    let g0 = p.branch.sign() * Cx::i() * root;
    let (k0, k1, k2) = (p.k[0], p.k[1], p.k[2]);
    let (m0, m1, m2) = (p.m[0], p.m[1], p.m[2]);

    // printed form: g_1 = ±i (k_0³k_1 + m_0³m_1) / (2 (√(k_0²+m_0²))³)
    let g1 = p.branch.sign()
        * Cx::i()
        * (k0.powu(3) * k1 + m0.powu(3) * m1)
        / (2.0 * root.powu(3));

    // printed form: g_2 = 1/(4(g_0³ - g_0⁴)) · (the 21 listed terms)
    let sum = 4.0 * k0.powu(6) * k1 * k1
        + 4.0 * k0.powu(4) * k2
        + 2.0 * k0 * k0 * k1 * k1
        + 4.0 * m0.powu(6) * m1 * m1
        + 4.0 * m0.powu(4) * m2
        + 2.0 * m0 * m0 * m1 * m1
        + 4.0 * g0.powu(6) * g1 * g1
        + 2.0 * g0 * g0 * g1 * g1
        + 2.0 * k0 * k0 * m1 * m1
        + 4.0 * k0 * k0 * m0 * m2
        + 8.0 * k0 * k1 * m0 * m1
        + 2.0 * m0 * m0 * k1 * k1
        + 4.0 * m0 * m0 * k0 * k2
        + 2.0 * k0 * k0 * g1 * g1
        + 8.0 * k0 * k1 * g0 * g1
        + 2.0 * k1 * k1 * g0 * g0
        + 4.0 * k0 * k2 * g0 * g0
        + 2.0 * m0 * m0 * g1 * g1
        + 8.0 * m0 * m1 * g0 * g1
        + 2.0 * m1 * m1 * g0 * g0
        + 4.0 * m0 * m2 * g0 * g0;
    let g2 = sum / (4.0 * (g0.powu(3) - g0.powu(4)));

    let mut paper_g = vec![Cx::ZERO; p.n];
    paper_g[0] = g0;
    paper_g[1] = g1;
    paper_g[2] = g2;
    let paper_triple = BasisTriple::from_parts(p.k.clone(), p.m.clone(), paper_g, 0)?;
    let solved_triple = solve_g(p)?;

    let scale = paper_triple.input_scale().max(solved_triple.input_scale());
    let close = |a: Cx, b: Cx| (a - b).norm() <= 1e-9 * scale.max(1.0);
    let w = w_coefficients(paper_triple.k(), paper_triple.m(), paper_triple.g())?;

    Ok(ClosedFormReport {
        paper_g1: g1,
        paper_g2: g2,
        solved_g1: solved_triple.g()[1],
        solved_g2: solved_triple.g()[2],
        g1_agrees: close(g1, solved_triple.g()[1]),
        g2_agrees: close(g2, solved_triple.g()[2]),
        paper_w1_is_zero: w.0[1].norm() <= 1e-9 * scale,
        paper_residual: char_residual(&paper_triple),
        solved_residual: char_residual(&solved_triple),
        paper_triple,
        solved_triple,
    })
}
