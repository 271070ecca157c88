use serde::{Deserialize, Serialize};

use super::relax::{BPseudo, BSource, Gtilde, Relaxation};
use super::{build_b, SigmaVerdict, StrictifyError};
use crate::laws::{Budget, Report};
use crate::pseudo::{check_coherence, Bounded, PseudoFunctor};
use crate::trackcat::{dk_compare_complexes, Comp, DkVerdict, HomComplexes};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Longest word in the bounded maps used for law checks.
    pub bound: usize,
    /// Coefficients of the bounded maps; all residues (or `-2..=2`) if unset.
    pub coeffs: Option<Vec<i64>>,
    /// Longest generating word used as a letter of the relaxation.
    pub letter_bound: usize,
    /// Longest word of letters kept in the relaxation.
    pub word_bound: usize,
    pub budget: Budget,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            bound: 2,
            coeffs: None,
            letter_bound: 1,
            word_bound: 2,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagVerdicts {
    /// `σQ̃: S̃ -> T`.
    pub sigma_q: DkVerdict,
    /// `Q̃: S̃ -> 𝔹`, from `σQ̃` and `σ` by two-out-of-three.
    pub q_equivalence: bool,
    /// `G̃: S̃ -> T`.
    pub g: DkVerdict,
    /// Whether `G̃` and `σQ̃` agree as maps of hom complexes.
    pub g_is_sigma_q: bool,
    /// `G̃P̃ = s` on bounded maps.
    pub gp_cells: GpCheck,
    /// `G̃(P̃y·P̃x − P̃(yx)) = Γ(y, x)` on bounded pairs whose composite is
    /// spanned by letters. Not part of `passed`: `G̃` only sees `Γ` on
    /// letters, which vanishes on words.
    pub gp_gamma: GpCheck,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpCheck {
    pub checked: u64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dossier {
    pub options: PipelineOptions,
    pub coherence: Report,
    pub b_laws: Report,
    pub sigma: SigmaVerdict,
    pub zigzag: Option<ZigzagVerdicts>,
    /// Why the zigzag was skipped, if it was.
    pub zigzag_skipped: Option<String>,
}

impl Dossier {
    pub fn passed(&self) -> bool {
        self.coherence.passed()
            && self.b_laws.passed()
            && self.sigma.h1_iso
            && self.sigma.h0_iso
            && self
                .zigzag
                .as_ref()
                .is_some_and(|z| z.q_equivalence && z.g.equivalence && z.gp_cells.failure.is_none())
    }
}

/// From a pseudo-functor to `𝔹`, `σ`, and the zigzag through the relaxation.
pub fn strictify_pipeline(p: &dyn PseudoFunctor, options: &PipelineOptions) -> Result<Dossier, StrictifyError> {
    let lin = p.source();
    let bounded = match &options.coeffs {
        Some(c) => Bounded::new(lin, options.bound, c.clone()),
        None => Bounded::default_for(lin, options.bound),
    };
    let coherence = check_coherence(p, &bounded, &options.budget);
    let built = build_b(p, &bounded, &options.budget)?;
    let src = BSource {
        p,
        letter_bound: options.letter_bound,
    };
    let (zigzag, zigzag_skipped) = match Relaxation::new(&src, options.word_bound) {
        Ok(rel) => {
            let q = rel.q_maps();
            let g = rel.g_tilde(&BPseudo { p });
            let sigma_q = dk_compare_complexes(&q, &rel, p.target())
                .map_err(|e| StrictifyError::Assumption {
                    assumption: "σQ̃ is a functor".into(),
                    detail: e.to_string(),
                })?;
            let gv = dk_compare_complexes(&g.maps, &rel, p.target()).map_err(|e| StrictifyError::Assumption {
                assumption: "G̃ is a functor".into(),
                detail: e.to_string(),
            })?;
            let g_is_sigma_q = q.maps == g.maps.maps;
            let (gp_cells, gp_gamma) = gp_checks(p, &rel, &g, &bounded);
            let q_equivalence = sigma_q.equivalence && built.sigma.h1_iso && built.sigma.h0_iso;
            (
                Some(ZigzagVerdicts {
                    sigma_q,
                    q_equivalence,
                    g: gv,
                    g_is_sigma_q,
                    gp_cells,
                    gp_gamma,
                }),
                None,
            )
        }
        Err(e @ super::RelaxError::TooLarge(..)) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    Ok(Dossier {
        options: options.clone(),
        coherence,
        b_laws: built.report,
        sigma: built.sigma,
        zigzag,
        zigzag_skipped,
    })
}

fn gp_checks(p: &dyn PseudoFunctor, rel: &Relaxation<'_, BSource<'_>>, g: &Gtilde, bounded: &Bounded) -> (GpCheck, GpCheck) {
    let n = p.source().graph.vertices();
    let t = p.target();
    let mut cells = GpCheck::default();
    let mut gamma = GpCheck::default();
    for a in 0..n {
        for b in 0..n {
            for x in bounded.hom(a, b) {
                let Some(px) = rel.p0(a, b, x) else { continue };
                cells.checked += 1;
                if cells.failure.is_none() && g.maps.maps[a][b].0.apply(&px) != p.s(x) {
                    cells.failure = Some(format!("x = {x:?}"));
                }
            }
        }
    }
    for o in crate::laws::object_tuples(n, 3) {
        let c = Comp::new(o[0], o[1], o[2]);
        let zero = t.hom(c.a, c.c).c1().zero();
        for y in bounded.hom(c.b, c.c) {
            let Some(py) = rel.p0(c.b, c.c, y) else { continue };
            for x in bounded.hom(c.a, c.b) {
                let Some(px) = rel.p0(c.a, c.b, x) else { continue };
                let Some(pyx) = rel.p0(c.a, c.c, &y.after(x).expect("composable")) else { continue };
                let c0 = rel.hom(c.a, c.c).c0();
                let u = c0.sub(&rel.compose0(c, &py, &px), &pyx);
                let Some(v) = rel.join1(c.a, c.c, &zero, &u) else { continue };
                gamma.checked += 1;
                let got = g.maps.maps[c.a][c.c].1.apply(&v);
                let want = p.gamma(y, x);
                if gamma.failure.is_none() && got != want {
                    gamma.failure = Some(format!("y = {y:?}, x = {x:?}: {got:?} != {want:?}"));
                }
            }
        }
    }
    (cells, gamma)
}
