use serde::{Deserialize, Serialize};

use super::{braided_tensor, build_kronecker, build_loop, moment_map, quantum_torus, EdgeAlgebra, TensorFactor};
use crate::error::{Error, Result};
use crate::ncalg::{GenKind, NCElement};
use crate::scalars::Coeff;

/// Whether a quiver is to be quantized at generic q or at a root of unity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuiverMode {
    Generic,
    #[default]
    Root,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverEdge {
    pub source: usize,
    pub target: usize,
    #[serde(default, rename = "loop")]
    pub is_loop: bool,
}

/// A quiver with dimension vector, as read from a TOML description:
///
/// ```toml
/// name = "kronecker_2x1"
/// dims = [2, 1]
/// ell = 3
/// mode = "root"
///
/// [[edges]]
/// source = 0
/// target = 1
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    #[serde(default)]
    pub name: String,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<QuiverEdge>,
    pub ell: u32,
    #[serde(default)]
    pub mode: QuiverMode,
}

impl Quiver {
    pub fn from_toml(text: &str) -> Result<Self> {
        let q: Quiver = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        q.validate()?;
        Ok(q)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("quiver serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell < 2 {
            return Err(Error::Domain(format!("ell = {} is not a valid order", self.ell)));
        }
        if let Some(v) = self.dims.iter().position(|&d| d == 0) {
            return Err(Error::Domain(format!("vertex {v} has dimension 0")));
        }
        for (k, e) in self.edges.iter().enumerate() {
            if e.source >= self.dims.len() || e.target >= self.dims.len() {
                return Err(Error::Domain(format!("edge {k} leaves the vertex set")));
            }
            if e.is_loop != (e.source == e.target) {
                return Err(Error::Domain(format!("edge {k}: loop flag disagrees with its endpoints")));
            }
        }
        Ok(())
    }

    pub fn rank_one(&self) -> bool {
        self.dims.iter().all(|&d| d == 1)
    }

    /// The quivers shipped in the repository's quivers/ directory, by name.
    pub fn builtin(name: &str) -> Option<Self> {
        let text = BUILTIN.iter().find(|(n, _)| *n == name)?.1;
        Some(Self::from_toml(text).expect("bundled quiver parses"))
    }

    pub fn builtin_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }
}

const BUILTIN: &[(&str, &str)] = &[
    ("kronecker_1x1", include_str!("../../../../quivers/kronecker_1x1.toml")),
    ("kronecker_1x2", include_str!("../../../../quivers/kronecker_1x2.toml")),
    ("kronecker_2x1", include_str!("../../../../quivers/kronecker_2x1.toml")),
    ("kronecker_2x2", include_str!("../../../../quivers/kronecker_2x2.toml")),
    ("loop_1", include_str!("../../../../quivers/loop_1.toml")),
    ("path_3", include_str!("../../../../quivers/path_3.toml")),
];

/// The quantized algebra of a quiver: one factor per edge, edge k at site k.
#[derive(Clone, Debug)]
pub struct QuiverAlgebra<S: Coeff> {
    pub quiver: Quiver,
    pub alg: EdgeAlgebra<S>,
}

/// Builds D_q(Mat(Q, d)). A single edge may have any ranks; several edges are
/// combined by the braided tensor product, which needs all ranks equal to 1.
pub fn build_quiver<S: Coeff>(quiver: &Quiver, q: &S) -> Result<QuiverAlgebra<S>> {
    quiver.validate()?;
    let d = &quiver.dims;
    let edge_alg = |e: &QuiverEdge| {
        if e.is_loop {
            build_loop(d[e.source], q)
        } else {
            build_kronecker(d[e.source], d[e.target], q)
        }
    };
    let alg = match quiver.edges.as_slice() {
        [] => quantum_torus(&[], q)?,
        [e] => edge_alg(e)?,
        edges => {
            let algs = edges.iter().map(edge_alg).collect::<Result<Vec<_>>>()?;
            let factors: Vec<_> = algs
                .iter()
                .zip(edges)
                .map(|(a, e)| {
                    let vs = if e.is_loop { vec![e.source] } else { vec![e.source, e.target] };
                    TensorFactor::new(a, vs)
                })
                .collect();
            braided_tensor(&factors, d)?
        }
    };
    Ok(QuiverAlgebra { quiver: quiver.clone(), alg })
}

impl<S: Coeff> QuiverAlgebra<S> {
    fn loop_gen(&self, kind: GenKind, site: u32) -> Result<NCElement<S>> {
        self.alg
            .spec
            .gens()
            .iter()
            .position(|g| g.kind == kind && g.site == site)
            .map(|i| self.alg.spec.gen(i))
            .ok_or_else(|| Error::UnknownGenerator(format!("{kind:?}@{site}")))
    }

    /// The rank-one moment map at vertex v as a pair (num, den) with
    /// μ_v = num·den^{-1}: an edge s → t contributes g^β to num at t and g^α
    /// to den at s; a loop at v contributes a·d to num and d·a to den.
    pub fn rank_one_moment(&self, v: usize) -> Result<(NCElement<S>, NCElement<S>)> {
        if !self.quiver.rank_one() {
            return Err(Error::Unsupported("moment elements are only formed for rank-one dimension vectors".into()));
        }
        let spec = &*self.alg.spec;
        let (mut num, mut den) = (spec.one(), spec.one());
        for (k, e) in self.quiver.edges.iter().enumerate() {
            let site = k as u32;
            if e.is_loop {
                if e.source == v {
                    let (a, d) = (self.loop_gen(GenKind::A, site)?, self.loop_gen(GenKind::D, site)?);
                    num = spec.multiply_all(&[&num, &a, &d])?;
                    den = spec.multiply_all(&[&den, &d, &a])?;
                }
                continue;
            }
            if e.source != v && e.target != v {
                continue;
            }
            let mm = moment_map(&self.alg, site)?;
            if e.target == v {
                num = spec.multiply(&num, mm.beta.get(0, 0))?;
            }
            if e.source == v {
                den = spec.multiply(&den, mm.alpha.get(0, 0))?;
            }
        }
        Ok((num, den))
    }
}
