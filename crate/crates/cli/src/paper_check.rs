//! Cross-check of the printed reference tables: regenerates A_1..A_6
//! against embedded golden expansions and compares the printed closed
//! forms for g_1, g_2 with the first-principles solve, judged by the
//! symbolic Δ² oracle.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use biharm_core::characteristic::{paper_closed_forms, Branch, Mode, SpectralParams};
use biharm_core::error::Error;
use biharm_core::holo::HolomorphicFn;
use biharm_core::resolvent::{resolvent_coeffs, PoleExpansion, XiMonomial};
use biharm_core::solutions::SolutionSpec;
use biharm_core::verify::biharmonic_residual_scaled;
use biharm_core::Cx;

fn mono(pairs: &[(usize, u32)]) -> XiMonomial {
    XiMonomial::from_pairs(pairs)
}

/// The printed expansions A_1..A_6, entered term by term. The "(t-ξ)⁵"
/// in the fourth table is read as (t-ξ_0)⁵.
pub fn golden_tables() -> Vec<PoleExpansion> {
    vec![
        PoleExpansion::from_terms(1, &[(2, 1, mono(&[(1, 1)]))]),
        PoleExpansion::from_terms(2, &[(2, 1, mono(&[(2, 1)])), (3, 1, mono(&[(1, 2)]))]),
        PoleExpansion::from_terms(
            3,
            &[
                (2, 1, mono(&[(3, 1)])),
                (3, 2, mono(&[(1, 1), (2, 1)])),
                (4, 1, mono(&[(1, 3)])),
            ],
        ),
        PoleExpansion::from_terms(
            4,
            &[
                (2, 1, mono(&[(4, 1)])),
                (3, 2, mono(&[(1, 1), (3, 1)])),
                (3, 1, mono(&[(2, 2)])),
                (4, 3, mono(&[(1, 2), (2, 1)])),
                (5, 1, mono(&[(1, 4)])),
            ],
        ),
        PoleExpansion::from_terms(
            5,
            &[
                (2, 1, mono(&[(5, 1)])),
                (3, 2, mono(&[(1, 1), (4, 1)])),
                (3, 2, mono(&[(2, 1), (3, 1)])),
                (4, 3, mono(&[(1, 2), (3, 1)])),
                (4, 3, mono(&[(1, 1), (2, 2)])),
                (5, 4, mono(&[(1, 3), (2, 1)])),
                (6, 1, mono(&[(1, 5)])),
            ],
        ),
        PoleExpansion::from_terms(
            6,
            &[
                (2, 1, mono(&[(6, 1)])),
                (3, 1, mono(&[(3, 2)])),
                (3, 2, mono(&[(1, 1), (5, 1)])),
                (3, 2, mono(&[(2, 1), (4, 1)])),
                (4, 1, mono(&[(2, 3)])),
                (4, 6, mono(&[(1, 1), (2, 1), (3, 1)])),
                (4, 3, mono(&[(1, 2), (4, 1)])),
                (5, 4, mono(&[(1, 3), (3, 1)])),
                (5, 6, mono(&[(1, 2), (2, 2)])),
                (6, 5, mono(&[(1, 4), (2, 1)])),
                (7, 1, mono(&[(1, 6)])),
            ],
        ),
    ]
}

fn sixth_power() -> HolomorphicFn {
    let mut c = vec![Cx::ZERO; 7];
    c[6] = Cx::ONE;
    HolomorphicFn::polynomial(c).unwrap()
}

fn closed_form_section(out: &mut String, label: &str, params: &SpectralParams) -> Result<(), Error> {
    let rep = paper_closed_forms(params)?;
    let _ = writeln!(out, "closed forms, {label}:");
    let _ = writeln!(
        out,
        "  g_1: printed = {:.6} {:+.6}i, first-principles = {:.6} {:+.6}i -> {}",
        rep.paper_g1.re,
        rep.paper_g1.im,
        rep.solved_g1.re,
        rep.solved_g1.im,
        if rep.g1_agrees { "agree" } else { "disagree" }
    );
    let _ = writeln!(
        out,
        "  g_2: printed = {:.6} {:+.6}i, first-principles = {:.6} {:+.6}i -> {}",
        rep.paper_g2.re,
        rep.paper_g2.im,
        rep.solved_g2.re,
        rep.solved_g2.im,
        if rep.g2_agrees { "agree" } else { "disagree" }
    );
    let _ = writeln!(out, "  W_1 of printed triple vanishes: {}", rep.paper_w1_is_zero);
    let max = |v: &[Cx]| v.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let _ = writeln!(
        out,
        "  characteristic residual: printed {:.3e}, first-principles {:.3e}",
        max(&rep.paper_residual),
        max(&rep.solved_residual)
    );
    // Δ² oracle verdict on both candidate triples, F = t⁶ at k = 2
    for (name, triple) in [("printed", &rep.paper_triple), ("first-principles", &rep.solved_triple)] {
        let spec = SolutionSpec::new_unchecked(triple.clone(), sixth_power(), 2)?;
        let (bih, scale) = biharmonic_residual_scaled(&spec)?;
        let zero = bih.is_zero_within(1e-9 * scale);
        let _ = writeln!(
            out,
            "  Δ² oracle on {name} triple (F=t^6, k=2): max coeff {:.3e} -> {}",
            bih.max_coeff(),
            if zero { "biharmonic" } else { "NOT biharmonic" }
        );
    }
    Ok(())
}

pub fn run(output: Option<PathBuf>) -> Result<(), Error> {
    let mut out = String::new();
    let mut mismatches = 0usize;
    for (idx, golden) in golden_tables().iter().enumerate() {
        let k = idx + 1;
        let regenerated = resolvent_coeffs(k)?;
        if &regenerated == golden {
            let _ = writeln!(out, "A_{k}: matches the printed table");
        } else {
            mismatches += 1;
            let _ = writeln!(out, "A_{k}: MISMATCH");
            let _ = writeln!(out, "  regenerated: {regenerated:?}");
            let _ = writeln!(out, "  printed:     {golden:?}");
        }
    }

    let disagree_case = SpectralParams {
        n: 3,
        k: vec![Cx::ONE, Cx::ONE, Cx::ZERO],
        m: vec![Cx::ZERO; 3],
        branch: Branch::Plus,
        mode: Mode::Harmonic,
        free_g: None,
    };
    closed_form_section(&mut out, "k=(1,1,0), m=(0,0,0)", &disagree_case)?;

    let agree_case = SpectralParams {
        n: 3,
        k: vec![Cx::ONE, Cx::ZERO, Cx::ZERO],
        m: vec![Cx::ZERO; 3],
        branch: Branch::Plus,
        mode: Mode::Harmonic,
        free_g: None,
    };
    closed_form_section(&mut out, "k=(1,0,0), m=(0,0,0)", &agree_case)?;

    print!("{out}");
    if let Some(path) = output {
        fs::write(&path, &out)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    }
    // closed-form disagreements are informational; table mismatches are not
    if mismatches == 0 {
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!(
            "{mismatches} resolvent tables disagree with the printed reference"
        )))
    }
}
