//! Builders for the edge algebras (Kronecker, loop, reflection equation,
//! quantum torus), their braided tensor products, R-matrices, Frobenius
//! centers and quantum moment maps.

mod braided;
mod free;
mod kronecker;
mod loops;
mod moment;
mod quiver;
mod rmatrix;

use std::sync::Arc;

use serde::Serialize;

pub use braided::{braided_tensor, TensorFactor};
pub use free::{rules_from_relations, FreeMat, FreePoly};
pub use kronecker::{build_kronecker, kronecker_generators, kronecker_matrix_relations, kronecker_rules_from_matrix_relations};
pub use loops::{build_loop, build_rea, loop_localization_certificate, quantum_det, quantum_torus, LocalizationCertificate};
pub use moment::{fused_moment, moment_map, verify_moment_algebra_map, MomentCheck, MomentMatrix, NCMat, Side};
pub use quiver::{build_quiver, Quiver, QuiverMode, QuiverAlgebra, QuiverEdge};
pub use rmatrix::{flip, r_std, standard_r, verify_r_degeneration, RDegenerationReport, RMatrix};

use crate::error::{Error, Result};
use crate::ncalg::{AlgebraSpec, GenKind, NCElement};
use crate::scalars::Coeff;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EdgeKind {
    Kronecker { n: usize, m: usize },
    Loop { n: usize },
    Rea { n: usize },
    Torus { skew: Vec<Vec<i64>> },
    Tensor { factors: Vec<EdgeKind> },
}

/// A built algebra together with what it was built from.
#[derive(Clone, Debug)]
pub struct EdgeAlgebra<S: Coeff> {
    pub spec: Arc<AlgebraSpec<S>>,
    pub kind: EdgeKind,
}

impl<S: Coeff> EdgeAlgebra<S> {
    /// Desk-scale tier: Kronecker (N, M) ≤ (2, 2), loops and REA up to 2,
    /// at most two tensor factors.
    pub fn experimental(&self) -> bool {
        fn exp(k: &EdgeKind) -> bool {
            match k {
                EdgeKind::Kronecker { n, m } => *n > 2 || *m > 2,
                EdgeKind::Loop { n } | EdgeKind::Rea { n } => *n > 2,
                EdgeKind::Torus { .. } => false,
                EdgeKind::Tensor { factors } => factors.len() > 2 || factors.iter().any(exp),
            }
        }
        exp(&self.kind)
    }

    fn find(&self, kind: GenKind, upper: u32, lower: u32, site: u32) -> Result<NCElement<S>> {
        self.spec
            .gens()
            .iter()
            .position(|g| g.kind == kind && g.upper == upper && g.lower == lower && g.site == site)
            .map(|i| self.spec.gen(i))
            .ok_or_else(|| Error::UnknownGenerator(format!("{kind:?}{upper}_{lower}@{site}")))
    }

    pub fn x(&self, i: u32, j: u32) -> Result<NCElement<S>> {
        self.find(GenKind::X, i, j, 0)
    }

    pub fn del(&self, k: u32, l: u32) -> Result<NCElement<S>> {
        self.find(GenKind::Del, k, l, 0)
    }

    /// Indices of the generators whose ℓ-th powers generate the Frobenius center.
    pub fn frobenius_generators(&self) -> Vec<usize> {
        self.spec
            .gens()
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g.kind, GenKind::X | GenKind::Del | GenKind::Torus | GenKind::A | GenKind::D))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Centrality record for one candidate element.
#[derive(Clone, Debug, Serialize)]
pub struct CenterEntry {
    pub generator: String,
    pub element: String,
    pub central: bool,
}

/// The ℓ-th powers of the generators, each checked for centrality.
///
/// For Kronecker edges and quantum tori every power must be central and a
/// failure is an error; for loop and REA factors the entries are reported as
/// computed, since the central subalgebra is not claimed to be generated by
/// them.
pub fn frobenius_center<S: Coeff>(alg: &EdgeAlgebra<S>, ell: u32) -> Result<(Vec<NCElement<S>>, Vec<CenterEntry>)> {
    let spec = &alg.spec;
    let strict = matches!(alg.kind, EdgeKind::Kronecker { .. } | EdgeKind::Torus { .. })
        || matches!(&alg.kind, EdgeKind::Tensor { factors } if factors.iter().all(|f| matches!(f, EdgeKind::Kronecker { .. } | EdgeKind::Torus { .. })));
    let gens = alg.frobenius_generators();
    let results: Vec<Result<(NCElement<S>, CenterEntry)>> = {
        use rayon::prelude::*;
        gens.par_iter()
            .map(|&g| {
                let z = spec.normal_form(&[(g, ell as i64)])?;
                let central = spec.is_central(&z)?;
                Ok((
                    z.clone(),
                    CenterEntry { generator: spec.gens()[g].label(), element: spec.element_text(&z), central },
                ))
            })
            .collect()
    };
    let mut elems = Vec::new();
    let mut entries = Vec::new();
    for r in results {
        let (z, e) = r?;
        if strict && !e.central {
            return Err(Error::Verification(format!("{}^{ell} is not central", e.generator)));
        }
        elems.push(z);
        entries.push(e);
    }
    Ok((elems, entries))
}
