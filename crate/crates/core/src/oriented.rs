//! Oriented linear models and the determinant-sign oracle for fiber-product
//! orientations.
//!
//! A model is a collection of named oriented vector spaces and integer
//! matrices between them. The oracle computes the orientation of the fiber
//! product of two maps with common target directly from the convention that
//! the sequence `0 → T(M ×_X Γ) → TM ⊕ TΓ → TX → 0` sending `(u, v)` to
//! `g(v) − f(u)` is orientation-compatible, by completing a kernel basis and
//! taking a determinant sign.

use crate::exact::IMat;
use thiserror::Error;

/// A named oriented vector space. `orientation` is `±1` relative to the
/// standard ordered basis of `R^dim`.
#[derive(Clone, Debug)]
pub struct SpaceSpec {
    pub name: String,
    pub dim: usize,
    pub orientation: i32,
}

/// A named linear map; `matrix` has shape `target.dim × source.dim`.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub matrix: IMat,
}

#[derive(Clone, Debug, Default)]
pub struct OrientedLinearModel {
    pub spaces: Vec<SpaceSpec>,
    pub maps: Vec<MapSpec>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("maps `{0}` and `{1}` do not share a target")]
    MismatchedTarget(String, String),
    #[error("map `{name}` has shape {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    BadShape {
        name: String,
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("orientation marker must be +1 or -1")]
    BadOrientation,
    #[error("difference map is not surjective: the fiber product is not transverse")]
    NotTransverse,
}

/// An oriented subspace of `R^ambient`: a column basis plus a `±1` marker
/// stating whether that basis is positively oriented.
#[derive(Clone, Debug)]
pub struct OrientedSubspace {
    pub ambient: usize,
    pub basis: IMat,
    pub orientation: i32,
}

impl OrientedSubspace {
    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    /// Full standard space with the given marker.
    pub fn full(dim: usize, orientation: i32) -> OrientedSubspace {
        OrientedSubspace {
            ambient: dim,
            basis: IMat::identity(dim),
            orientation,
        }
    }

    /// Push a subspace expressed in this subspace's basis coordinates out to
    /// ambient coordinates. The orientation marker multiplies.
    pub fn embed(&self, inner: &OrientedSubspace) -> OrientedSubspace {
        assert_eq!(inner.ambient, self.dim());
        OrientedSubspace {
            ambient: self.ambient,
            basis: self.basis.mul(&inner.basis),
            orientation: self.orientation * inner.orientation,
        }
    }
}

impl OrientedLinearModel {
    pub fn space(&self, name: &str) -> Result<&SpaceSpec, OracleError> {
        self.spaces
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| OracleError::UnknownSpace(name.to_string()))
    }

    pub fn map(&self, name: &str) -> Result<&MapSpec, OracleError> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| OracleError::UnknownMap(name.to_string()))
    }

    /// Shape and orientation-marker validation.
    pub fn validate(&self) -> Result<(), OracleError> {
        for s in &self.spaces {
            if s.orientation != 1 && s.orientation != -1 {
                return Err(OracleError::BadOrientation);
            }
        }
        for m in &self.maps {
            let src = self.space(&m.source)?;
            let tgt = self.space(&m.target)?;
            if m.matrix.rows != tgt.dim || m.matrix.cols != src.dim {
                return Err(OracleError::BadShape {
                    name: m.name.clone(),
                    got_rows: m.matrix.rows,
                    got_cols: m.matrix.cols,
                    want_rows: tgt.dim,
                    want_cols: src.dim,
                });
            }
        }
        Ok(())
    }
}

/// Oriented kernel of `mat : V → T` with the convention that
/// `0 → ker → V → T → 0` is orientation-compatible.
///
/// Returns the kernel as an oriented subspace of `V`; fails if `mat` is not
/// surjective. The completion of the kernel basis uses the transpose columns,
/// which represent the Moore-Penrose splitting up to a positive-determinant
/// factor, so the resulting sign is splitting-independent.
pub fn oriented_kernel_of(
    dim_src: usize,
    o_src: i32,
    o_tgt: i32,
    mat: &IMat,
) -> Result<OrientedSubspace, OracleError> {
    assert_eq!(mat.cols, dim_src);
    let t = mat.rows;
    if mat.rank() < t {
        return Err(OracleError::NotTransverse);
    }
    let kernel = mat.kernel_basis();
    let completed = kernel.hcat(&mat.transpose());
    let s = completed.det_sign();
    debug_assert_ne!(s, 0);
    Ok(OrientedSubspace {
        ambient: dim_src,
        basis: kernel,
        orientation: s * o_src * o_tgt,
    })
}

/// Oriented fiber product of `f : M → X` and `g : Γ → X` as a subspace of
/// `M ⊕ Γ` (coordinates: `M` block first).
pub fn fiber_orientation(
    dim_m: usize,
    dim_g: usize,
    o_m: i32,
    o_g: i32,
    o_x: i32,
    f: &IMat,
    g: &IMat,
) -> Result<OrientedSubspace, OracleError> {
    assert_eq!(f.cols, dim_m);
    assert_eq!(g.cols, dim_g);
    assert_eq!(f.rows, g.rows);
    let x = f.rows;
    // Difference map (u, v) -> g(v) - f(u).
    let mut d = IMat::zeros(x, dim_m + dim_g);
    for i in 0..x {
        for j in 0..dim_m {
            d[(i, j)] = -f[(i, j)];
        }
        for j in 0..dim_g {
            d[(i, dim_m + j)] = g[(i, j)];
        }
    }
    oriented_kernel_of(dim_m + dim_g, o_m * o_g, o_x, &d)
}

/// The fiber product of two named maps of a model, with the orientation
/// determined by the orientation-compatible sequence convention.
pub fn fiber_product_orientation_oracle(
    model: &OrientedLinearModel,
    f_name: &str,
    g_name: &str,
) -> Result<OrientedSubspace, OracleError> {
    model.validate()?;
    let f = model.map(f_name)?;
    let g = model.map(g_name)?;
    if f.target != g.target {
        return Err(OracleError::MismatchedTarget(
            f_name.to_string(),
            g_name.to_string(),
        ));
    }
    let m = model.space(&f.source)?;
    let gam = model.space(&g.source)?;
    let x = model.space(&f.target)?;
    fiber_orientation(
        m.dim,
        gam.dim,
        m.orientation,
        gam.orientation,
        x.orientation,
        &f.matrix,
        &g.matrix,
    )
}

/// Boundary-orientation marker of a codimension-one face inside an oriented
/// subspace.
///
/// `face` must be a subspace of `parent` of one less dimension, and
/// `outward_coord` an ambient coordinate that is zero on the face and
/// positive on the outward side. Orients the face so that (face basis,
/// outward vector) is positively oriented in `parent`; returns `None` when
/// `parent` itself lies in the wall (non-transverse face).
pub fn boundary_marker(
    parent: &OrientedSubspace,
    face: &OrientedSubspace,
    outward_coord: usize,
) -> Option<i32> {
    assert_eq!(parent.ambient, face.ambient);
    assert_eq!(face.dim() + 1, parent.dim());
    // An outward vector: any parent-basis combination with positive
    // `outward_coord` component. A single basis column suffices.
    let mut w: Option<Vec<i128>> = None;
    for j in 0..parent.basis.cols {
        let col = parent.basis.column(j);
        if col[outward_coord] != 0 {
            let mut v = col;
            if v[outward_coord] < 0 {
                for e in v.iter_mut() {
                    *e = -*e;
                }
            }
            w = Some(v);
            break;
        }
    }
    let w = w?;
    let mut completed = IMat::zeros(parent.ambient, face.dim() + 1);
    for j in 0..face.dim() {
        for i in 0..parent.ambient {
            completed[(i, j)] = face.basis[(i, j)];
        }
    }
    for i in 0..parent.ambient {
        completed[(i, face.dim())] = w[i];
    }
    let s = parent.basis.transpose().mul(&completed).det_sign();
    if s == 0 {
        return None;
    }
    Some(s * parent.orientation)
}

/// Sign of a linear isomorphism between oriented subspaces, given the images
/// of the domain basis columns in ambient coordinates of the target.
pub fn iso_sign(domain: &OrientedSubspace, images: &IMat, target: &OrientedSubspace) -> i32 {
    assert_eq!(images.cols, domain.dim());
    assert_eq!(images.rows, target.ambient);
    assert_eq!(domain.dim(), target.dim());
    let s = target.basis.transpose().mul(images).det_sign();
    s * domain.orientation * target.orientation
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(name: &str, dim: usize, orientation: i32) -> SpaceSpec {
        SpaceSpec {
            name: name.to_string(),
            dim,
            orientation,
        }
    }

    fn map(name: &str, source: &str, target: &str, rows: &[Vec<i128>]) -> MapSpec {
        MapSpec {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            matrix: IMat::from_rows(rows),
        }
    }

    /// Point against the identity: the fiber product is a positive point.
    #[test]
    fn point_against_identity_is_positive_point() {
        let model = OrientedLinearModel {
            spaces: vec![space("M", 0, 1), space("X", 2, 1), space("G", 2, 1)],
            maps: vec![
                map("f", "M", "X", &[vec![], vec![]]),
                map("g", "G", "X", &[vec![1, 0], vec![0, 1]]),
            ],
        };
        let fp = fiber_product_orientation_oracle(&model, "f", "g").unwrap();
        assert_eq!(fp.dim(), 0);
        assert_eq!(fp.orientation, 1);
    }

    /// `M = X` via the identity, Γ a point at a generic x: the sign is
    /// `(-1)^{dim X}` (open-embedding projection with dim Γ = 0).
    #[test]
    fn identity_against_point_gives_dimension_sign() {
        for dim_x in 0..4usize {
            let f = IMat::identity(dim_x);
            let g = IMat::zeros(dim_x, 0);
            let fp = fiber_orientation(dim_x, 0, 1, 1, 1, &f, &g).unwrap();
            assert_eq!(fp.dim(), 0);
            // A zero-dimensional oriented space is just its marker.
            let expect = if dim_x % 2 == 0 { 1 } else { -1 };
            assert_eq!(fp.orientation, expect, "dim X = {dim_x}");
        }
    }

    #[test]
    fn non_transverse_input_is_rejected() {
        // f and g both land in the x-axis of a 2-dim target.
        let f = IMat::from_rows(&[vec![1], vec![0]]);
        let g = IMat::from_rows(&[vec![1], vec![0]]);
        let err = fiber_orientation(1, 1, 1, 1, 1, &f, &g).unwrap_err();
        assert_eq!(err, OracleError::NotTransverse);
    }

    /// The completion sign does not depend on the splitting: adding kernel
    /// columns to the transpose completion leaves the determinant unchanged.
    #[test]
    fn splitting_independence() {
        let f = IMat::from_rows(&[vec![1, 2], vec![0, 1]]);
        let g = IMat::from_rows(&[vec![1, 0, 1], vec![1, 1, 0]]);
        let fp = fiber_orientation(2, 3, 1, 1, 1, &f, &g).unwrap();
        // Rebuild the difference map.
        let mut d = IMat::zeros(2, 5);
        for i in 0..2 {
            for j in 0..2 {
                d[(i, j)] = -f[(i, j)];
            }
            for j in 0..3 {
                d[(i, 2 + j)] = g[(i, j)];
            }
        }
        let k = d.kernel_basis();
        let base = k.hcat(&d.transpose()).det_sign();
        // Perturb the splitting columns by kernel vectors.
        for kcol in 0..k.cols {
            let mut j = d.transpose();
            for i in 0..5 {
                j[(i, 0)] += 3 * k[(i, kcol)];
                j[(i, 1)] -= 2 * k[(i, kcol)];
            }
            assert_eq!(k.hcat(&j).det_sign(), base);
        }
        assert_eq!(fp.dim(), 3);
    }

    #[test]
    fn model_validation_catches_shape_errors() {
        let model = OrientedLinearModel {
            spaces: vec![space("A", 1, 1), space("B", 2, 1)],
            maps: vec![map("f", "A", "B", &[vec![1]])],
        };
        assert!(matches!(
            model.validate(),
            Err(OracleError::BadShape { .. })
        ));
    }
}
