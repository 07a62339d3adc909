//! Simplicial group actions, freeness and quotients.

use std::sync::Arc;

use rayon::prelude::*;

use crate::dset::{DeltaMap, DeltaSet, JoinCell, JoinLayout};
use crate::error::{Result, TopoError};
use crate::group::FiniteGroup;

/// A left action of a finite group on a Δ-set by simplicial automorphisms.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    space: Arc<DeltaSet>,
    /// `act[g][k][s]` is the image of the `k`-simplex `s` under `g`.
    act: Vec<Vec<Vec<usize>>>,
}

impl GroupAction {
    /// Builds an action after checking that every element acts by a
    /// face-compatible permutation, the identity acts trivially and
    /// `act(gh) = act(g) ∘ act(h)`.
    pub fn new(group: FiniteGroup, space: Arc<DeltaSet>, act: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let a = GroupAction { group, space, act };
        a.check()?;
        Ok(a)
    }

    fn new_unchecked(group: FiniteGroup, space: Arc<DeltaSet>, act: Vec<Vec<Vec<usize>>>) -> Self {
        let a = GroupAction { group, space, act };
        debug_assert!(a.check().is_ok(), "{:?}", a.check());
        a
    }

    fn check(&self) -> Result<()> {
        let n = self.group.order();
        let space = &self.space;
        if self.act.len() != n {
            return Err(TopoError::InvalidAction("one permutation table per element required".into()));
        }
        for (g, tables) in self.act.iter().enumerate() {
            if tables.len() != space.num_dims()
                || tables.iter().enumerate().any(|(k, p)| !crate::dset::is_permutation(p, space.count(k)))
            {
                return Err(TopoError::InvalidAction(format!("element {g} is not a permutation in each dimension")));
            }
        }
        for k in 0..space.num_dims() {
            if self.act[0][k].iter().enumerate().any(|(s, &t)| s != t) {
                return Err(TopoError::InvalidAction("identity acts non-trivially".into()));
            }
        }
        for g in 0..n {
            for k in 1..space.num_dims() {
                for s in 0..space.count(k) {
                    let gs = self.act[g][k][s];
                    for i in 0..=k {
                        if self.act[g][k - 1][space.face(k, i, s)] != space.face(k, i, gs) {
                            return Err(TopoError::InvalidAction(format!(
                                "element {g} does not commute with d_{i}"
                            )));
                        }
                    }
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for k in 0..space.num_dims() {
                    if (0..space.count(k)).any(|s| self.act[gh][k][s] != self.act[g][k][self.act[h][k][s]]) {
                        return Err(TopoError::InvalidAction(format!("act({gh}) != act({g}) ∘ act({h})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &Arc<DeltaSet> {
        &self.space
    }

    #[inline]
    pub fn apply(&self, g: usize, k: usize, s: usize) -> usize {
        self.act[g][k][s]
    }

    /// First `(element, dim, simplex)` with a non-identity element fixing a
    /// simplex, scanning elements in increasing order.
    pub fn fixed_point_witness(&self) -> Option<(usize, usize, usize)> {
        (1..self.group.order())
            .into_par_iter()
            .filter_map(|g| {
                self.act[g].iter().enumerate().find_map(|(k, perm)| {
                    perm.iter().enumerate().find(|&(s, &t)| s == t).map(|(s, _)| (g, k, s))
                })
            })
            .min()
    }

    /// No non-identity element fixes any simplex, in any dimension.
    pub fn is_free(&self) -> bool {
        self.fixed_point_witness().is_none()
    }
}

pub fn is_free(action: &GroupAction) -> bool {
    action.is_free()
}

/// `Z/m` acting on the `m`-gon, the generator rotating by `l` steps.
pub fn rotation_action(m: usize, l: i64) -> Result<GroupAction> {
    let group = FiniteGroup::cyclic(m)?;
    let space = Arc::new(DeltaSet::polygon_circle(m)?);
    let step = l.rem_euclid(m as i64) as usize;
    let act = (0..m)
        .map(|g| {
            let perm: Vec<usize> = (0..m).map(|j| (j + g * step) % m).collect();
            vec![perm.clone(), perm]
        })
        .collect();
    Ok(GroupAction::new_unchecked(group, space, act))
}

/// `G` acting on its own underlying set by left multiplication.
pub fn translation_action(group: &FiniteGroup) -> GroupAction {
    let n = group.order();
    let space = Arc::new(DeltaSet::discrete(n).expect("groups are non-empty"));
    let act = (0..n).map(|g| vec![(0..n).map(|x| group.mul(g, x)).collect()]).collect();
    GroupAction::new_unchecked(group.clone(), space, act)
}

/// The diagonal action on `A ⋈ B`: `g(σ, τ) = (gσ, gτ)`.
pub fn join_actions(a: &GroupAction, b: &GroupAction) -> Result<GroupAction> {
    if a.group != b.group {
        return Err(TopoError::GroupMismatch);
    }
    let layout = JoinLayout::new(&a.space, &b.space);
    let space = Arc::new(crate::dset::join(&a.space, &b.space));
    let act = (0..a.group.order())
        .map(|g| {
            layout
                .counts()
                .iter()
                .enumerate()
                .map(|(n, &c)| {
                    (0..c)
                        .map(|idx| {
                            let image = match layout.decode(n, idx) {
                                JoinCell::Left(s) => JoinCell::Left(a.apply(g, n, s)),
                                JoinCell::Right(t) => JoinCell::Right(b.apply(g, n, t)),
                                JoinCell::Mixed { p, left, right } => JoinCell::Mixed {
                                    p,
                                    left: a.apply(g, p, left),
                                    right: b.apply(g, n - 1 - p, right),
                                },
                            };
                            layout.encode(n, image)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(GroupAction::new_unchecked(a.group.clone(), space, act))
}

/// The orbit Δ-set and the covering projection onto it.
///
/// Orbits are represented by their smallest simplex and ordered by that
/// representative, so the output is deterministic.
pub fn quotient(action: &GroupAction) -> Result<(DeltaSet, DeltaMap)> {
    if let Some((element, dim, simplex)) = action.fixed_point_witness() {
        return Err(TopoError::NotFree { element, dim, simplex });
    }
    let space = action.space();
    let n = action.group.order();
    let mut orbit_of: Vec<Vec<usize>> = Vec::with_capacity(space.num_dims());
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(space.num_dims());
    for k in 0..space.num_dims() {
        let mut orbit = vec![usize::MAX; space.count(k)];
        let mut r = Vec::with_capacity(space.count(k) / n);
        for s in 0..space.count(k) {
            if orbit[s] == usize::MAX {
                let id = r.len();
                r.push(s);
                for g in 0..n {
                    orbit[action.apply(g, k, s)] = id;
                }
            }
        }
        orbit_of.push(orbit);
        reps.push(r);
    }
    let counts: Vec<usize> = reps.iter().map(Vec::len).collect();
    let faces = (1..space.num_dims())
        .map(|k| {
            (0..=k)
                .map(|i| reps[k].iter().map(|&s| orbit_of[k - 1][space.face(k, i, s)]).collect())
                .collect()
        })
        .collect();
    let base = Arc::new(DeltaSet::from_parts_unchecked(counts, faces));
    let projection = DeltaMap::new_unchecked(space.clone(), base.clone(), orbit_of);
    Ok(((*base).clone(), projection))
}
