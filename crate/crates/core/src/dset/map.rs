use std::sync::Arc;

use super::{is_permutation, DeltaSet};
use crate::error::{Result, TopoError};

/// A simplicial map: dimension-preserving and commuting with every face map.
#[derive(Clone, Debug)]
pub struct DeltaMap {
    source: Arc<DeltaSet>,
    target: Arc<DeltaSet>,
    comp: Vec<Vec<usize>>,
}

impl DeltaMap {
    pub fn new(source: Arc<DeltaSet>, target: Arc<DeltaSet>, comp: Vec<Vec<usize>>) -> Result<Self> {
        if comp.len() != source.num_dims() {
            return Err(TopoError::InvalidMap(format!(
                "{} component tables for a source of {} dimensions",
                comp.len(),
                source.num_dims()
            )));
        }
        for (k, c) in comp.iter().enumerate() {
            if c.len() != source.count(k) {
                return Err(TopoError::InvalidMap(format!("component {k} has the wrong length")));
            }
            if let Some(&bad) = c.iter().find(|&&t| t >= target.count(k)) {
                return Err(TopoError::InvalidMap(format!("dimension {k}: image {bad} out of range")));
            }
        }
        for k in 1..comp.len() {
            for s in 0..source.count(k) {
                for i in 0..=k {
                    if comp[k - 1][source.face(k, i, s)] != target.face(k, i, comp[k][s]) {
                        return Err(TopoError::InvalidMap(format!(
                            "does not commute with d_{i} on the {k}-simplex {s}"
                        )));
                    }
                }
            }
        }
        Ok(DeltaMap { source, target, comp })
    }

    pub(crate) fn new_unchecked(source: Arc<DeltaSet>, target: Arc<DeltaSet>, comp: Vec<Vec<usize>>) -> Self {
        if cfg!(debug_assertions) {
            DeltaMap::new(source, target, comp).expect("constructor produced an invalid map")
        } else {
            DeltaMap { source, target, comp }
        }
    }

    pub fn identity(space: Arc<DeltaSet>) -> Self {
        let comp = space.counts().iter().map(|&c| (0..c).collect()).collect();
        DeltaMap { source: space.clone(), target: space, comp }
    }

    pub fn source(&self) -> &Arc<DeltaSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DeltaSet> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, k: usize, s: usize) -> usize {
        self.comp[k][s]
    }

    pub fn component(&self, k: usize) -> &[usize] {
        &self.comp[k]
    }

    pub fn is_surjective(&self) -> bool {
        (0..self.target.num_dims()).all(|k| {
            let mut hit = vec![false; self.target.count(k)];
            if let Some(c) = self.comp.get(k) {
                c.iter().for_each(|&t| hit[t] = true);
            }
            hit.into_iter().all(|h| h)
        })
    }

    /// Bijective in every dimension with equal source and target.
    pub fn is_automorphism(&self) -> bool {
        *self.source == *self.target
            && self.comp.iter().enumerate().all(|(k, c)| is_permutation(c, self.source.count(k)))
    }

    /// Number of preimages of every target simplex, per dimension.
    pub fn fiber_sizes(&self) -> Vec<Vec<usize>> {
        (0..self.target.num_dims())
            .map(|k| {
                let mut sizes = vec![0; self.target.count(k)];
                if let Some(c) = self.comp.get(k) {
                    c.iter().for_each(|&t| sizes[t] += 1);
                }
                sizes
            })
            .collect()
    }
}
