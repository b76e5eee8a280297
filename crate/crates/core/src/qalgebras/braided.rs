use std::sync::Arc;

use super::{EdgeAlgebra, EdgeKind};
use crate::error::{Error, Result};
use crate::ncalg::{AlgebraSpec, Generator, Letter};
use crate::scalars::Coeff;

/// One factor of a braided tensor product: the algebra and, for each
/// coordinate of its generator weights, the gauge vertex it belongs to.
#[derive(Clone, Debug)]
pub struct TensorFactor<'a, S: Coeff> {
    pub algebra: &'a EdgeAlgebra<S>,
    pub vertices: Vec<usize>,
}

impl<'a, S: Coeff> TensorFactor<'a, S> {
    pub fn new(algebra: &'a EdgeAlgebra<S>, vertices: Vec<usize>) -> Self {
        TensorFactor { algebra, vertices }
    }
}

fn flatten(kind: &EdgeKind, out: &mut Vec<EdgeKind>) {
    match kind {
        EdgeKind::Tensor { factors } => factors.iter().for_each(|k| flatten(k, out)),
        k => out.push(k.clone()),
    }
}

/// Braided tensor product over the gauge torus of a rank-one dimension vector.
///
/// Generators of later factors come after those of earlier ones, with weights
/// pushed to the global vertex set. For g in a later factor and h in an earlier
/// one the cross rule is g^a·h^b = q^{−ab(wt g, wt h)}·h^b·g^a, the rank-one
/// braiding by R = (q). Factors without generators are dropped; factor sites
/// are renumbered consecutively.
pub fn braided_tensor<S: Coeff>(factors: &[TensorFactor<'_, S>], d: &[usize]) -> Result<EdgeAlgebra<S>> {
    if let Some(v) = d.iter().position(|&k| k != 1) {
        return Err(Error::Unsupported(format!(
            "braided tensor products need a rank-one gauge group; vertex {v} has dimension {}",
            d[v]
        )));
    }
    let live: Vec<&TensorFactor<S>> = factors.iter().filter(|f| f.algebra.spec.ngens() > 0).collect();
    let q = match live.first().copied().or(factors.first()) {
        Some(f) => f.algebra.spec.q().clone(),
        None => return Err(Error::Domain("braided tensor of no factors".into())),
    };
    if live.len() == 1 && live[0].vertices.iter().copied().eq(0..d.len()) {
        return Ok(live[0].algebra.clone());
    }

    let mut gens: Vec<Generator> = Vec::new();
    let mut offsets = Vec::new();
    let mut kinds = Vec::new();
    let mut site_base = 0u32;
    for f in &live {
        let spec = &f.algebra.spec;
        if spec.q() != &q {
            return Err(Error::SpecMismatch("factors use different deformation parameters".into()));
        }
        offsets.push(gens.len());
        flatten(&f.algebra.kind, &mut kinds);
        let mut max_site = 0;
        for g in spec.gens() {
            if g.weight.len() != f.vertices.len() && !g.weight.iter().all(|&w| w == 0) {
                return Err(Error::Unsupported(format!(
                    "weight of {} has {} coordinates but {} vertices were given",
                    g.label(),
                    g.weight.len(),
                    f.vertices.len()
                )));
            }
            let mut w = vec![0i64; d.len()];
            for (c, &x) in g.weight.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let v = f.vertices[c];
                if v >= d.len() {
                    return Err(Error::Domain(format!("vertex {v} outside the dimension vector")));
                }
                w[v] += x;
            }
            let mut ng = g.clone();
            ng.site = g.site + site_base;
            ng.weight = w;
            max_site = max_site.max(g.site);
            gens.push(ng);
        }
        site_base += max_site + 1;
    }
    let name = live.iter().map(|f| f.algebra.spec.name()).collect::<Vec<_>>().join(" ⊗ ");
    let mut spec = AlgebraSpec::new(name, gens.clone(), q.clone());

    for (f, &off) in live.iter().zip(&offsets) {
        let shift = |l: Letter| Letter { gen: l.gen + off, exp: l.exp };
        for ((a, b), rhs) in f.algebra.spec.rules() {
            let rhs = rhs.iter().map(|(w, c)| (w.iter().copied().map(shift).collect(), c.clone())).collect();
            spec.add_rule(shift(*a), shift(*b), rhs)?;
        }
    }
    let factor_of = |g: usize| offsets.iter().rposition(|&o| o <= g).unwrap();
    for g in 0..gens.len() {
        for h in 0..g {
            if factor_of(g) == factor_of(h) {
                continue;
            }
            let pairing: i64 = gens[g].weight.iter().zip(&gens[h].weight).map(|(a, b)| a * b).sum();
            for sg in [1i8, -1] {
                for sh in [1i8, -1] {
                    if (sg < 0 && !gens[g].invertible) || (sh < 0 && !gens[h].invertible) {
                        continue;
                    }
                    let c = q
                        .pow_i(-pairing * sg as i64 * sh as i64)
                        .ok_or_else(|| Error::Domain("q must be invertible".into()))?;
                    let (lg, lh) = (Letter { gen: g, exp: sg }, Letter { gen: h, exp: sh });
                    spec.add_rule(lg, lh, vec![(vec![lh, lg], c)])?;
                }
            }
        }
    }
    Ok(EdgeAlgebra { spec: Arc::new(spec), kind: EdgeKind::Tensor { factors: kinds } })
}
