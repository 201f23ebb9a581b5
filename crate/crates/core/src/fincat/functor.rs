use std::sync::Arc;

use super::FinCat;
use crate::error::{Error, Result};

/// A functor between finite categories, validated on construction.
#[derive(Clone, Debug)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<u32>,
    mor_map: Vec<u32>,
}

impl FinFunctor {
    /// Checks endpoints, identities and composition exhaustively.
    pub fn new(source: Arc<FinCat>, target: Arc<FinCat>, obj_map: Vec<u32>, mor_map: Vec<u32>) -> Result<Self> {
        let f = FinFunctor::new_trusted(source, target, obj_map, mor_map)?;
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_trusted(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<u32>,
        mor_map: Vec<u32>,
    ) -> Result<Self> {
        if obj_map.len() != source.num_objects() || mor_map.len() != source.num_morphisms() {
            return Err(Error::InvalidInput("functor maps have the wrong length".into()));
        }
        if obj_map.iter().any(|&y| y as usize >= target.num_objects())
            || mor_map.iter().any(|&m| m as usize >= target.num_morphisms())
        {
            return Err(Error::InvalidInput("functor maps into ids outside the target".into()));
        }
        Ok(FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let (c, d) = (&*self.source, &*self.target);
        for m in c.morphisms() {
            let fm = self.mor_map[m as usize];
            if d.src(fm) != self.obj(c.src(m)) || d.tgt(fm) != self.obj(c.tgt(m)) {
                return Err(Error::Axiom(format!("functor breaks endpoints of {}", c.mor_label(m))));
            }
        }
        for x in c.objects() {
            if self.mor(c.identity(x)) != d.identity(self.obj(x)) {
                return Err(Error::Axiom(format!("functor does not preserve the identity of {}", c.obj_label(x))));
            }
        }
        for g in c.morphisms() {
            for &f in c.out(c.tgt(g)) {
                if self.mor(c.compose(f, g)) != d.compose(self.mor(f), self.mor(g)) {
                    return Err(Error::Axiom(format!(
                        "functor does not preserve {} ∘ {}",
                        c.mor_label(f),
                        c.mor_label(g)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    #[inline]
    pub fn obj(&self, x: u32) -> u32 {
        self.obj_map[x as usize]
    }

    #[inline]
    pub fn mor(&self, m: u32) -> u32 {
        self.mor_map[m as usize]
    }

    pub fn obj_map(&self) -> &[u32] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[u32] {
        &self.mor_map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if !Arc::ptr_eq(&self.target, &other.source) && self.target.to_raw() != other.source.to_raw() {
            return Err(Error::InvalidInput("functors are not composable".into()));
        }
        FinFunctor::new_trusted(
            self.source.clone(),
            other.target.clone(),
            self.obj_map.iter().map(|&x| other.obj(x)).collect(),
            self.mor_map.iter().map(|&m| other.mor(m)).collect(),
        )
    }

    pub fn identity(c: Arc<FinCat>) -> FinFunctor {
        let obj_map = c.objects().collect();
        let mor_map = c.morphisms().collect();
        FinFunctor {
            source: c.clone(),
            target: c,
            obj_map,
            mor_map,
        }
    }

    pub fn is_surjective_on_morphisms(&self) -> bool {
        let mut hit = vec![false; self.target.num_morphisms()];
        for &m in &self.mor_map {
            hit[m as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }
}
