//! Two-level decompositions: node cuts of a one-level decomposition, the
//! split bijections onto attached pairs, and the rotation and reflection
//! actions whose orbits drive the cancellation identities.
//!
//! Two coordinate conventions occur. In the `plus` variant the underlying
//! moduli space carries one extra output point, node positions range over
//! `1..=k+2`, the attached pair sits at position `k1`, and the inner parts
//! are the constraints of marked points `k1+1..k2-1` shifted down by one.
//! In the `star` variant there is no extra point, node positions satisfy
//! `k2 ≤ k+1` (with `k1 = 0` admitted when there are no boundary points at
//! all, or for the interior-output variant), the attachment sits at
//! `k1 + 1`, and inner parts are taken unshifted.

use crate::constraint::{ConstraintClass, Setting, StrataError};
use crate::decomp::{drop_part, rotate, Decomposition};
use crate::monoid::Degree;
use crate::parity::Parity;
use std::collections::BTreeSet;

/// A node cut `ϑ = (β², k1, k2, L²)` of some decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cut {
    pub beta2: Degree,
    pub k1: usize,
    pub k2: usize,
    pub l2: BTreeSet<crate::constraint::InteriorConstraint>,
}

/// An element `(η; ϑ)` of a two-level decomposition set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoLevel {
    pub eta: Decomposition,
    pub cut: Cut,
}

/// An element `(η; i, η')` pairing a decomposition with a decomposition of
/// its `i`-th part (1-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attach {
    pub eta: Decomposition,
    pub pos: usize,
    pub inner: Decomposition,
}

impl Attach {
    /// The constraint class the inner decomposition decomposes; must equal
    /// the part of `eta` at `pos`.
    pub fn attached_class(&self) -> &ConstraintClass {
        &self.eta.parts[self.pos - 1]
    }
}

/// `ε(η, i) = C(k_•(η)+1, 2) + i`.
pub fn epsilon(k_bullet: usize, i: usize) -> Parity {
    Parity::choose2(k_bullet as i64 + 1) + Parity::of(i as i64)
}

fn number_of_inner(cut: &Cut) -> usize {
    cut.k2 - 1 - cut.k1
}

fn aggregate(setting: &Setting, eta: &Decomposition, cut: &Cut, shift: usize) -> ConstraintClass {
    // Inner parts are parts[k1 - shift .. k2 - 1 - shift] in 0-based indices,
    // with shift = 1 for the plus variant and 0 for the star variant.
    let lo = cut.k1 - shift;
    let hi = cut.k2 - 1 - shift;
    let mut agg = setting.class_unchecked(cut.beta2.clone(), BTreeSet::new(), cut.l2.clone());
    for p in &eta.parts[lo..hi] {
        agg = agg.merge(p);
    }
    agg
}

fn split_with(setting: &Setting, tl: &TwoLevel, shift: usize) -> Attach {
    let eta = &tl.eta;
    let cut = &tl.cut;
    let lo = cut.k1 - shift;
    let hi = cut.k2 - 1 - shift;
    let agg = aggregate(setting, eta, cut, shift);
    let inner = Decomposition {
        beta_bullet: cut.beta2.clone(),
        l_bullet: cut.l2.clone(),
        parts: eta.parts[lo..hi].to_vec(),
    };
    let mut outer_parts = Vec::with_capacity(eta.k_bullet() - inner.k_bullet() + 1);
    outer_parts.extend_from_slice(&eta.parts[..lo]);
    outer_parts.push(agg);
    outer_parts.extend_from_slice(&eta.parts[hi..]);
    let outer = Decomposition {
        beta_bullet: eta.beta_bullet.checked_sub(&cut.beta2).expect("effective cut"),
        l_bullet: eta.l_bullet.difference(&cut.l2).cloned().collect(),
        parts: outer_parts,
    };
    Attach {
        eta: outer,
        pos: lo + 1,
        inner,
    }
}

fn unsplit_with(attach: &Attach, shift: usize) -> TwoLevel {
    let pos0 = attach.pos - 1;
    let mut parts = Vec::new();
    parts.extend_from_slice(&attach.eta.parts[..pos0]);
    parts.extend_from_slice(&attach.inner.parts);
    parts.extend_from_slice(&attach.eta.parts[pos0 + 1..]);
    let eta = Decomposition {
        beta_bullet: attach.eta.beta_bullet.add(&attach.inner.beta_bullet),
        l_bullet: attach
            .eta
            .l_bullet
            .union(&attach.inner.l_bullet)
            .cloned()
            .collect(),
        parts,
    };
    let k1 = pos0 + shift;
    let k2 = k1 + attach.inner.k_bullet() + 1;
    TwoLevel {
        eta,
        cut: Cut {
            beta2: attach.inner.beta_bullet.clone(),
            k1,
            k2,
            l2: attach.inner.l_bullet.clone(),
        },
    }
}

/// All cuts of `η` in the output-point domain: `1 ≤ k1 < k2 ≤ k+2` with the
/// unstable and total cuts excluded.
pub fn enumerate_cuts_plus(setting: &Setting, eta: &Decomposition) -> Vec<TwoLevel> {
    let k = eta.k_bullet();
    let mut out = Vec::new();
    for beta2 in setting.monoid.degrees_below(&eta.beta_bullet) {
        for l_mask in 0..(1u32 << eta.l_bullet.len()) {
            let l2: BTreeSet<_> = eta
                .l_bullet
                .iter()
                .enumerate()
                .filter(|(i, _)| l_mask >> i & 1 == 1)
                .map(|(_, c)| c.clone())
                .collect();
            for k1 in 1..=k + 1 {
                for k2 in k1 + 1..=k + 2 {
                    let inner_count = k2 - 1 - k1;
                    let trivial = beta2.is_zero() && l2.is_empty();
                    if trivial && inner_count <= 1 {
                        continue;
                    }
                    if beta2 == eta.beta_bullet && inner_count == k && l2 == eta.l_bullet {
                        continue;
                    }
                    out.push(TwoLevel {
                        eta: eta.clone(),
                        cut: Cut {
                            beta2: beta2.clone(),
                            k1,
                            k2,
                            l2: l2.clone(),
                        },
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// Split bijection for the output-point domain: the attached pair sits at
/// position `k1` and inner constraints are shifted down by one.
pub fn split_plus(setting: &Setting, tl: &TwoLevel) -> Attach {
    split_with(setting, tl, 1)
}

pub fn unsplit_plus(attach: &Attach) -> TwoLevel {
    unsplit_with(attach, 1)
}

/// All cuts of `η` in the no-output domain used by the cobordism identity:
/// `1 ≤ k1 < k2 ≤ k+1` plus the swap-ambiguous `(β², 0, 1, L²)` cuts when
/// `k = 0`.
pub fn enumerate_cuts_star(setting: &Setting, eta: &Decomposition) -> Vec<TwoLevel> {
    let k = eta.k_bullet();
    let mut out = Vec::new();
    for beta2 in setting.monoid.degrees_below(&eta.beta_bullet) {
        for l_mask in 0..(1u32 << eta.l_bullet.len()) {
            let l2: BTreeSet<_> = eta
                .l_bullet
                .iter()
                .enumerate()
                .filter(|(i, _)| l_mask >> i & 1 == 1)
                .map(|(_, c)| c.clone())
                .collect();
            if k == 0 {
                // Both members of the swap pair are enumerated; they describe
                // the same stratum.
                let inner_trivial = beta2.is_zero() && l2.is_empty();
                let outer_trivial = beta2 == eta.beta_bullet && l2 == eta.l_bullet;
                if inner_trivial || outer_trivial {
                    continue;
                }
                out.push(TwoLevel {
                    eta: eta.clone(),
                    cut: Cut {
                        beta2: beta2.clone(),
                        k1: 0,
                        k2: 1,
                        l2: l2.clone(),
                    },
                });
                continue;
            }
            for k1 in 1..=k {
                for k2 in k1 + 1..=k + 1 {
                    let inner_count = k2 - 1 - k1;
                    let trivial = beta2.is_zero() && l2.is_empty();
                    if trivial && inner_count <= 1 {
                        continue;
                    }
                    // Everything-on-the-second-disk is excluded.
                    if beta2 == eta.beta_bullet && k2 - k1 == k && l2 == eta.l_bullet {
                        continue;
                    }
                    out.push(TwoLevel {
                        eta: eta.clone(),
                        cut: Cut {
                            beta2: beta2.clone(),
                            k1,
                            k2,
                            l2: l2.clone(),
                        },
                    });
                }
            }
        }
    }
    out.sort();
    out
}

/// Split for the no-output domain: the attached pair sits at `k1 + 1` and
/// inner constraints are unshifted.
pub fn split_star(setting: &Setting, tl: &TwoLevel) -> Attach {
    split_with(setting, tl, 0)
}

pub fn unsplit_star(attach: &Attach) -> TwoLevel {
    unsplit_with(attach, 0)
}

/// Whether an attached pair lies in the image of the no-output split:
/// `pos > 1`, or the degenerate single-part case.
pub fn in_star_image(attach: &Attach) -> bool {
    attach.pos > 1 || attach.eta.k_bullet() + attach.inner.k_bullet() == 1
}

/// Rotation on attached pairs.
pub fn rotate_attach(attach: &Attach) -> Attach {
    let k = attach.eta.k_bullet();
    let rotated = rotate(&attach.eta);
    let pos = if attach.pos > 1 { attach.pos - 1 } else { k };
    Attach {
        eta: rotated,
        pos,
        inner: attach.inner.clone(),
    }
}

/// Rotation on no-output cuts.
pub fn rotate_cut_star(tl: &TwoLevel) -> TwoLevel {
    let k = tl.eta.k_bullet();
    let rotated = rotate(&tl.eta);
    let cut = &tl.cut;
    let new_cut = if cut.k1 > 1 {
        Cut {
            beta2: cut.beta2.clone(),
            k1: cut.k1 - 1,
            k2: cut.k2 - 1,
            l2: cut.l2.clone(),
        }
    } else if cut.k1 == 1 && cut.k2 == 2 {
        Cut {
            beta2: cut.beta2.clone(),
            k1: k,
            k2: k + 1,
            l2: cut.l2.clone(),
        }
    } else if cut.k1 == 1 {
        Cut {
            beta2: tl.eta.beta_bullet.checked_sub(&cut.beta2).unwrap(),
            k1: cut.k2 - 2,
            k2: k + 1,
            l2: tl.eta.l_bullet.difference(&cut.l2).cloned().collect(),
        }
    } else {
        // k1 = 0: the swap member.
        Cut {
            beta2: tl.eta.beta_bullet.checked_sub(&cut.beta2).unwrap(),
            k1: 0,
            k2: 1,
            l2: tl.eta.l_bullet.difference(&cut.l2).cloned().collect(),
        }
    };
    TwoLevel {
        eta: rotated,
        cut: new_cut,
    }
}

/// The reflection `R (η; i, η') = (η̂; 1, η\i)` interchanging the two disk
/// components. Defined away from the two-point trivial top level.
pub fn reflect(setting: &Setting, attach: &Attach) -> Result<Attach, StrataError> {
    if attach.eta.is_two_point_trivial() {
        return Err(StrataError::OutsideDomain(
            "reflection is undefined on the (0, 2, {}) top level".into(),
        ));
    }
    let total = unsplit_with(attach, 0).eta.target();
    let complement = total
        .checked_sub(attach.attached_class())
        .expect("attached class is a subclass of the total");
    let mut parts = Vec::with_capacity(attach.inner.k_bullet() + 1);
    parts.push(complement);
    parts.extend_from_slice(&attach.inner.parts);
    let hat = Decomposition {
        beta_bullet: attach.inner.beta_bullet.clone(),
        l_bullet: attach.inner.l_bullet.clone(),
        parts,
    };
    let dropped = drop_part(&attach.eta, attach.pos)?;
    Ok(Attach {
        eta: hat,
        pos: 1,
        inner: dropped,
    })
}
