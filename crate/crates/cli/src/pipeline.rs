//! Configuration to design: group, representation, subspace, design.

use finite_sampling::group::{find_complement, Transversal};
use finite_sampling::{
    CVector, CanonicalOrdering, CyclicSubspace, FiniteGroup, SamplingDesign, UnitaryRep,
};

use crate::config::{haar_unitary, matrix_from_pairs, resolve_all, DesignConfig, RepKind, RepSpec};
use crate::error::{CliError, Stage};

pub struct Pipeline {
    pub group: FiniteGroup,
    pub rep: UnitaryRep,
    pub transversal: Transversal,
    pub ordering: CanonicalOrdering,
    pub subspace: CyclicSubspace,
    pub systems: Vec<CVector>,
    /// `None` when the configuration lists no systems.
    pub design: Option<SamplingDesign>,
}

pub fn build_rep(spec: &RepSpec, g: &FiniteGroup) -> Result<UnitaryRep, CliError> {
    let stage = Stage::Representation;
    let rep = match &spec.kind {
        RepKind::Regular => UnitaryRep::regular(g),
        RepKind::CyclicShift => {
            let rep = UnitaryRep::cyclic_shift(g.order()).map_err(|e| CliError::config(stage, e))?;
            if rep.group() != g {
                return Err(CliError::config(stage, "cyclic_shift needs a cyclic group"));
            }
            rep
        }
        RepKind::Explicit { matrices } => {
            let ms = matrices
                .iter()
                .map(|m| matrix_from_pairs(m, stage))
                .collect::<Result<Vec<_>, _>>()?;
            UnitaryRep::from_matrices(g, ms).map_err(|e| CliError::config(stage, e))?
        }
    };
    match spec.conjugate_seed {
        Some(seed) => rep.conjugate(&haar_unitary(rep.dim(), seed)).map_err(|e| CliError::config(stage, e)),
        None => Ok(rep),
    }
}

pub fn build_transversal(cfg: &DesignConfig, g: &FiniteGroup) -> Result<Transversal, CliError> {
    let stage = Stage::Group;
    let k = g
        .generate(&resolve_all(&cfg.k_generators, g)?)
        .map_err(|e| CliError::config(stage, e))?;
    let h = match &cfg.h_generators {
        Some(refs) => g.generate(&resolve_all(refs, g)?).map_err(|e| CliError::config(stage, e))?,
        None => find_complement(g, &k)
            .map_err(|e| CliError::config(stage, e))?
            .ok_or_else(|| CliError::config(stage, format!("K = {:?} has no complement", k.elements())))?,
    };
    Transversal::new(g, &k, &h).map_err(|e| CliError::config(stage, e))
}

impl Pipeline {
    pub fn build(cfg: &DesignConfig) -> Result<Self, CliError> {
        let group = cfg.group.build()?;
        let rep = build_rep(&cfg.representation, &group)?;
        let transversal = build_transversal(cfg, &group)?;
        let ordering = CanonicalOrdering::new(&group, &transversal);
        let a = cfg.generator.build(&group, rep.dim(), Stage::Subspace)?;
        let subspace = CyclicSubspace::new(&rep, &a, &ordering).map_err(|e| CliError::config(Stage::Subspace, e))?;
        if !subspace.is_independent() {
            return Err(CliError::config(
                Stage::Subspace,
                format!("generator orbit has rank {} < |G| = {}", subspace.orbit_rank(), group.order()),
            ));
        }
        let systems = cfg
            .systems
            .iter()
            .map(|b| b.build(&group, rep.dim(), Stage::Design))
            .collect::<Result<Vec<_>, _>>()?;
        let design = if systems.is_empty() {
            None
        } else {
            Some(SamplingDesign::new(&subspace, &systems, &transversal).map_err(|e| CliError::config(Stage::Design, e))?)
        };
        Ok(Self { group, rep, transversal, ordering, subspace, systems, design })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }
}
