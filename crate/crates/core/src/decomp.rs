//! One-level boundary decompositions of a constraint class, their
//! enumeration, the rotation and drop operations, and the weight functions.

use crate::constraint::{ConstraintClass, InteriorConstraint, Setting, StrataError};
use crate::monoid::Degree;
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use std::collections::BTreeSet;

/// A decomposition `η = (β_•, k_•, L_•, (α_i))`. `k_•` is the number of
/// parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    pub beta_bullet: Degree,
    pub l_bullet: BTreeSet<InteriorConstraint>,
    pub parts: Vec<ConstraintClass>,
}

impl Decomposition {
    pub fn k_bullet(&self) -> usize {
        self.parts.len()
    }

    /// The constraint class this decomposition decomposes.
    pub fn target(&self) -> ConstraintClass {
        let mut beta = self.beta_bullet.clone();
        let mut points = BTreeSet::new();
        let mut interior = self.l_bullet.clone();
        for p in &self.parts {
            beta = beta.add(&p.beta);
            points.extend(p.points.iter().cloned());
            interior.extend(p.interior.iter().cloned());
        }
        ConstraintClass {
            beta,
            points,
            interior,
        }
    }

    /// Is the top-level data `(β_•, k_•, L_•)` equal to `(0, 2, ∅)`?
    pub fn is_two_point_trivial(&self) -> bool {
        self.beta_bullet.is_zero() && self.parts.len() == 2 && self.l_bullet.is_empty()
    }
}

/// Cyclic rotation `ρ`: `(α_1, …, α_k) → (α_2, …, α_k, α_1)`.
pub fn rotate(eta: &Decomposition) -> Decomposition {
    let mut parts = eta.parts.clone();
    if parts.len() > 1 {
        parts.rotate_left(1);
    }
    Decomposition {
        beta_bullet: eta.beta_bullet.clone(),
        l_bullet: eta.l_bullet.clone(),
        parts,
    }
}

pub fn rotate_inv(eta: &Decomposition) -> Decomposition {
    let mut parts = eta.parts.clone();
    if parts.len() > 1 {
        parts.rotate_right(1);
    }
    Decomposition {
        beta_bullet: eta.beta_bullet.clone(),
        l_bullet: eta.l_bullet.clone(),
        parts,
    }
}

/// Drop the `i`-th part (1-based) and reorder the rest starting from its
/// cyclic successor.
pub fn drop_part(eta: &Decomposition, i: usize) -> Result<Decomposition, StrataError> {
    let k = eta.k_bullet();
    if i == 0 || i > k {
        return Err(StrataError::IndexRange(i, k));
    }
    let mut parts = Vec::with_capacity(k - 1);
    for j in 0..k - 1 {
        parts.push(eta.parts[(i + j) % k].clone());
    }
    Ok(Decomposition {
        beta_bullet: eta.beta_bullet.clone(),
        l_bullet: eta.l_bullet.clone(),
        parts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `1/k - 1/2`, or `1` when `k = 0`.
    Star,
    /// `1/k`, or `1` when `k = 0`.
    Circ,
    /// `Star` for `k > 0`, half of it for `k = 0`.
    Prime,
}

/// Weight mutations for the sensitivity harness; `None` is the shipped
/// convention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightMutation {
    #[default]
    None,
    /// `1/k + 1/2` instead of `1/k - 1/2`.
    StarPlusHalf,
    /// Use the star weight where the circ weight is called for.
    CircAsStar,
    /// Drop the halving in the `k = 0` case of the prime weight.
    PrimeNoHalving,
}

pub fn weight(k_bullet: usize, kind: WeightKind) -> BigRational {
    weight_mutated(k_bullet, kind, WeightMutation::None)
}

pub fn weight_mutated(k_bullet: usize, kind: WeightKind, m: WeightMutation) -> BigRational {
    let one = BigRational::one();
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let inv_k = |k: usize| BigRational::new(BigInt::from(1), BigInt::from(k as i64));
    match kind {
        WeightKind::Star => {
            if k_bullet == 0 {
                one
            } else if m == WeightMutation::StarPlusHalf {
                inv_k(k_bullet) + half
            } else {
                inv_k(k_bullet) - half
            }
        }
        WeightKind::Circ => {
            if m == WeightMutation::CircAsStar {
                return weight(k_bullet, WeightKind::Star);
            }
            if k_bullet == 0 {
                one
            } else {
                inv_k(k_bullet)
            }
        }
        WeightKind::Prime => {
            let star = weight_mutated(k_bullet, WeightKind::Star, m);
            if k_bullet == 0 && m != WeightMutation::PrimeNoHalving {
                star * half
            } else {
                star
            }
        }
    }
}

impl Setting {
    /// The complete list of decompositions of `α`, in a canonical
    /// deterministic order.
    pub fn decompositions(&self, alpha: &ConstraintClass) -> Vec<Decomposition> {
        self.decompositions_bounded(alpha, usize::MAX)
    }

    /// Decompositions with at most `max_parts` components; used by the
    /// exhaustive suites to keep large label sets tractable.
    pub fn decompositions_bounded(
        &self,
        alpha: &ConstraintClass,
        max_parts: usize,
    ) -> Vec<Decomposition> {
        let mut out = Vec::new();
        let points: Vec<&String> = alpha.points.iter().collect();
        let interior: Vec<&InteriorConstraint> = alpha.interior.iter().collect();
        for beta_bullet in self.monoid.degrees_below(&alpha.beta) {
            let rest_beta = alpha.beta.checked_sub(&beta_bullet).unwrap();
            for l_mask in 0..(1u32 << interior.len()) {
                let l_bullet: BTreeSet<InteriorConstraint> = interior
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| l_mask >> i & 1 == 1)
                    .map(|(_, c)| (*c).clone())
                    .collect();
                let rest_interior: Vec<&InteriorConstraint> = interior
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| l_mask >> i & 1 == 0)
                    .map(|(_, c)| *c)
                    .collect();
                let mut parts = Vec::new();
                distribute(
                    self,
                    &rest_beta,
                    &points,
                    &rest_interior,
                    max_parts,
                    &mut parts,
                    &mut |parts| {
                        // Excluded degenerate top-level datum (0, 1, ∅).
                        if beta_bullet.is_zero() && parts.len() == 1 && l_bullet.is_empty() {
                            return;
                        }
                        out.push(Decomposition {
                            beta_bullet: beta_bullet.clone(),
                            l_bullet: l_bullet.clone(),
                            parts: parts.to_vec(),
                        });
                    },
                );
            }
        }
        out.sort();
        out
    }
}

/// Enumerate ordered tuples of nonempty constraint classes exhausting the
/// remaining degree and labels, calling `emit` once per complete tuple.
fn distribute(
    setting: &Setting,
    beta: &Degree,
    points: &[&String],
    interior: &[&InteriorConstraint],
    max_parts: usize,
    acc: &mut Vec<ConstraintClass>,
    emit: &mut dyn FnMut(&[ConstraintClass]),
) {
    if beta.is_zero() && points.is_empty() && interior.is_empty() {
        emit(acc);
        return;
    }
    if acc.len() >= max_parts {
        return;
    }
    for beta1 in setting.monoid.degrees_below(beta) {
        let beta_rest = beta.checked_sub(&beta1).unwrap();
        for p_mask in 0..(1u32 << points.len()) {
            for l_mask in 0..(1u32 << interior.len()) {
                if beta1.is_zero() && p_mask == 0 && l_mask == 0 {
                    continue; // parts are nonempty classes
                }
                let part = ConstraintClass {
                    beta: beta1.clone(),
                    points: points
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| p_mask >> i & 1 == 1)
                        .map(|(_, p)| (*p).clone())
                        .collect(),
                    interior: interior
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| l_mask >> i & 1 == 1)
                        .map(|(_, c)| (*c).clone())
                        .collect(),
                };
                let points_rest: Vec<&String> = points
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| p_mask >> i & 1 == 0)
                    .map(|(_, p)| *p)
                    .collect();
                let interior_rest: Vec<&InteriorConstraint> = interior
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| l_mask >> i & 1 == 0)
                    .map(|(_, c)| *c)
                    .collect();
                acc.push(part);
                distribute(
                    setting,
                    &beta_rest,
                    &points_rest,
                    &interior_rest,
                    max_parts,
                    acc,
                    emit,
                );
                acc.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{DegreeMonoid, Generator};
    use num::FromPrimitive;

    fn setting1() -> Setting {
        let m = DegreeMonoid::new(vec![Generator {
            name: "b".into(),
            energy: BigRational::from_i64(1).unwrap(),
            maslov: 2,
            in_sphere_image: false,
        }])
        .unwrap();
        Setting::new(m, 3).unwrap()
    }

    fn pts(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn minimal_point_class_has_no_decompositions() {
        let s = setting1();
        let a = s
            .class(Degree::zero(1), pts(&["pt"]), BTreeSet::new())
            .unwrap();
        assert!(s.decompositions(&a).is_empty());
    }

    #[test]
    fn single_interior_class_has_exactly_one() {
        let s = setting1();
        let a = s
            .class(
                Degree::zero(1),
                BTreeSet::new(),
                [InteriorConstraint::new("G", 2)].into(),
            )
            .unwrap();
        let d = s.decompositions(&a);
        assert_eq!(d.len(), 1);
        assert!(d[0].beta_bullet.is_zero());
        assert_eq!(d[0].k_bullet(), 0);
        assert_eq!(d[0].l_bullet.len(), 1);
    }

    /// Independent brute-force generation of all raw splittings, then
    /// filtering; must agree with the structured enumeration.
    #[test]
    fn enumeration_matches_brute_force() {
        let s = setting1();
        let alpha = s
            .class(
                Degree(vec![2]),
                pts(&["p1"]),
                [InteriorConstraint::new("G", 2)].into(),
            )
            .unwrap();
        let fast: BTreeSet<Decomposition> = s.decompositions(&alpha).into_iter().collect();
        let slow = brute_force(&s, &alpha);
        assert_eq!(fast, slow);

        let alpha2 = s
            .class(Degree(vec![2]), BTreeSet::new(), BTreeSet::new())
            .unwrap();
        let fast2: BTreeSet<Decomposition> = s.decompositions(&alpha2).into_iter().collect();
        assert_eq!(fast2, brute_force(&s, &alpha2));
        // beta = 2b splits: (2,0,()), (1,1,(b)), (0,2,(b),(b)),
        // (0,0 is excluded), (1b with one part...), enumerate by hand:
        // β_•=2,k=0; β_•=1,k=1,(α=(b)); β_•=0,k=2,((b),(b));
        // β_•=0,k=1,((2b)) is excluded by (0,1,∅).
        assert_eq!(fast2.len(), 3);
    }

    fn brute_force(s: &Setting, alpha: &ConstraintClass) -> BTreeSet<Decomposition> {
        let mut out = BTreeSet::new();
        let points: Vec<String> = alpha.points.iter().cloned().collect();
        let interior: Vec<InteriorConstraint> = alpha.interior.iter().cloned().collect();
        let max_k = alpha.beta.coord_sum() as usize + points.len() + interior.len();
        for k in 0..=max_k {
            // Assignments of labels: points to slots 1..=k, interior to 0..=k
            // (0 = bullet), plus a composition of beta into k+1 ordered parts.
            let p_assign = multi_assign(points.len(), k, false);
            let l_assign = multi_assign(interior.len(), k, true);
            let compositions = degree_compositions(&alpha.beta, k + 1);
            for pa in &p_assign {
                for la in &l_assign {
                    'comp: for comp in &compositions {
                        let beta_bullet = comp[0].clone();
                        let l_bullet: BTreeSet<InteriorConstraint> = interior
                            .iter()
                            .zip(la)
                            .filter(|(_, &slot)| slot == 0)
                            .map(|(c, _)| c.clone())
                            .collect();
                        let mut parts = Vec::new();
                        for slot in 1..=k {
                            let part = ConstraintClass {
                                beta: comp[slot].clone(),
                                points: points
                                    .iter()
                                    .zip(pa)
                                    .filter(|(_, &x)| x == slot)
                                    .map(|(p, _)| p.clone())
                                    .collect(),
                                interior: interior
                                    .iter()
                                    .zip(la)
                                    .filter(|(_, &x)| x == slot)
                                    .map(|(c, _)| c.clone())
                                    .collect(),
                            };
                            if part.is_empty_content() {
                                continue 'comp;
                            }
                            parts.push(part);
                        }
                        if beta_bullet.is_zero() && k == 1 && l_bullet.is_empty() {
                            continue;
                        }
                        out.insert(Decomposition {
                            beta_bullet,
                            l_bullet,
                            parts,
                        });
                    }
                }
            }
        }
        out
    }

    /// All functions from `count` items to slots `1..=k` (or `0..=k` when
    /// `allow_zero`).
    fn multi_assign(count: usize, k: usize, allow_zero: bool) -> Vec<Vec<usize>> {
        let lo = if allow_zero { 0 } else { 1 };
        if count == 0 {
            return vec![vec![]];
        }
        if k == 0 && !allow_zero {
            return vec![];
        }
        let mut out = vec![vec![]];
        for _ in 0..count {
            let mut next = Vec::new();
            for v in &out {
                for slot in lo..=k {
                    let mut w = v.clone();
                    w.push(slot);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    fn degree_compositions(beta: &Degree, slots: usize) -> Vec<Vec<Degree>> {
        if slots == 0 {
            return if beta.is_zero() { vec![vec![]] } else { vec![] };
        }
        let rank = beta.0.len();
        let mut out = Vec::new();
        // Enumerate the first slot, recurse.
        fn below(beta: &Degree) -> Vec<Degree> {
            let mut out = vec![Degree::zero(beta.0.len())];
            for (idx, &cmax) in beta.0.iter().enumerate() {
                let mut next = Vec::new();
                for b in &out {
                    for c in 0..=cmax {
                        let mut v = b.clone();
                        v.0[idx] = c;
                        next.push(v);
                    }
                }
                out = next;
            }
            out
        }
        let _ = rank;
        for first in below(beta) {
            let rest = beta.checked_sub(&first).unwrap();
            for mut tail in degree_compositions(&rest, slots - 1) {
                let mut v = vec![first.clone()];
                v.append(&mut tail);
                out.push(v);
            }
        }
        out
    }

    #[test]
    fn rotation_orbits_divide_k() {
        let s = setting1();
        let alpha = s
            .class(Degree(vec![3]), pts(&["p1", "p2"]), BTreeSet::new())
            .unwrap();
        for eta in s.decompositions(&alpha) {
            let k = eta.k_bullet().max(1);
            let mut cur = eta.clone();
            let mut order = 0;
            for step in 1..=k {
                cur = rotate(&cur);
                if cur == eta {
                    order = step;
                    break;
                }
            }
            assert!(order > 0, "rotation orbit did not close");
            assert_eq!(k % order, 0, "orbit size must divide k");
            assert_eq!(rotate_inv(&rotate(&eta)), eta);
        }
    }

    #[test]
    fn drop_reorders_cyclically() {
        let s = setting1();
        let mk = |label: &str| ConstraintClass {
            beta: Degree::zero(1),
            points: pts(&[label]),
            interior: BTreeSet::new(),
        };
        let eta = Decomposition {
            beta_bullet: Degree(vec![1]),
            l_bullet: BTreeSet::new(),
            parts: vec![mk("a"), mk("b"), mk("c")],
        };
        // Dropping the middle part starts from its successor: (α_3, α_1).
        let d = drop_part(&eta, 2).unwrap();
        assert_eq!(d.parts, vec![mk("c"), mk("a")]);
        // k = 1 drop gives the empty tuple.
        let single = Decomposition {
            beta_bullet: Degree(vec![1]),
            l_bullet: BTreeSet::new(),
            parts: vec![mk("a")],
        };
        assert!(drop_part(&single, 1).unwrap().parts.is_empty());
        assert!(drop_part(&eta, 4).is_err());
        // Drop commutes with rotation up to the index shift.
        for i in 2..=3 {
            assert_eq!(
                drop_part(&rotate(&eta), i - 1).unwrap(),
                drop_part(&eta, i).unwrap()
            );
        }
        let _ = s;
    }

    #[test]
    fn weight_values() {
        assert_eq!(weight(0, WeightKind::Star), BigRational::one());
        assert_eq!(weight(2, WeightKind::Star), BigRational::zero());
        assert_eq!(
            weight(4, WeightKind::Circ),
            BigRational::new(BigInt::from(1), BigInt::from(4))
        );
        assert_eq!(
            weight(0, WeightKind::Prime),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(weight(3, WeightKind::Prime), weight(3, WeightKind::Star));
    }
}
