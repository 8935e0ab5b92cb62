//! Randomized oracle-equivalence suites for the fiber-product sign formulas.
//!
//! Each driver draws a small oriented linear model from a seeded generator,
//! evaluates one sign formula from [`crate::signs`], and independently
//! computes the same orientation comparison with the determinant oracle of
//! [`crate::oriented`]. Non-transverse draws are rejected and redrawn.

use crate::exact::{relative_orientation, IMat};
use crate::oriented::{
    boundary_marker, fiber_orientation, iso_sign, oriented_kernel_of, OrientedSubspace,
};
use crate::parity::Parity;
use crate::signs::{self, BoundaryBranch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Formula-side sign injections for the mutation-sensitivity mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FormulaMutation {
    #[default]
    None,
    /// Flip the open-embedding projection sign.
    OpenEmbedding,
    /// Flip the boundary-face sign.
    BoundaryFactor,
    /// Flip the composite re-association sign.
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma {
    OpenEmbedding,
    BoundaryFactors,
    Flip,
    Reassociation,
    DoubleSplit,
    Composite,
    BaseDrop,
}

pub const ALL_LEMMAS: [Lemma; 7] = [
    Lemma::OpenEmbedding,
    Lemma::BoundaryFactors,
    Lemma::Flip,
    Lemma::Reassociation,
    Lemma::DoubleSplit,
    Lemma::Composite,
    Lemma::BaseDrop,
];

impl Lemma {
    pub fn name(&self) -> &'static str {
        match self {
            Lemma::OpenEmbedding => "open-embedding",
            Lemma::BoundaryFactors => "boundary-factors",
            Lemma::Flip => "flip",
            Lemma::Reassociation => "reassociation",
            Lemma::DoubleSplit => "double-split",
            Lemma::Composite => "composite",
            Lemma::BaseDrop => "base-drop",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub samples: usize,
    pub mismatches: usize,
    pub first_counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignSuiteReport {
    pub seed: u64,
    pub requested_samples: usize,
    pub lemmas: Vec<LemmaReport>,
    pub vacuous: bool,
}

impl SignSuiteReport {
    pub fn passed(&self) -> bool {
        self.lemmas.iter().all(|l| l.mismatches == 0)
    }
}

struct Sample {
    formula: i32,
    oracle: i32,
    desc: String,
}

fn rand_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IMat {
    let mut m = IMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = rng.gen_range(-2..=2);
        }
    }
    m
}

fn rand_orient(rng: &mut ChaCha8Rng) -> i32 {
    if rng.gen::<bool>() {
        1
    } else {
        -1
    }
}

fn mat_json(m: &IMat) -> serde_json::Value {
    let rows: Vec<Vec<i64>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)] as i64).collect())
        .collect();
    serde_json::json!(rows)
}

fn insert_zero_row(m: &IMat, at: usize) -> IMat {
    let mut out = IMat::zeros(m.rows + 1, m.cols);
    for i in 0..m.rows {
        let ti = if i < at { i } else { i + 1 };
        for j in 0..m.cols {
            out[(ti, j)] = m[(i, j)];
        }
    }
    out
}

fn drop_column(m: &IMat, at: usize) -> IMat {
    let idx: Vec<usize> = (0..m.cols).filter(|&j| j != at).collect();
    m.select_columns(&idx)
}

fn block_diag(a: &IMat, b: &IMat) -> IMat {
    let mut out = IMat::zeros(a.rows + b.rows, a.cols + b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out[(i, j)] = a[(i, j)];
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            out[(a.rows + i, a.cols + j)] = b[(i, j)];
        }
    }
    out
}

/// Relative orientation of two oriented bases of the same subspace:
/// `+1` when they induce the same orientation.
fn compare(a: &OrientedSubspace, b: &OrientedSubspace) -> i32 {
    relative_orientation(&a.basis, &b.basis) * a.orientation * b.orientation
}

fn sample_open_embedding(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let dx = rng.gen_range(0..=3usize);
    let dg = rng.gen_range(0..=3usize);
    let f = rand_mat(rng, dx, dx);
    if dx > 0 && f.det_sign() == 0 {
        return None;
    }
    let g = rand_mat(rng, dx, dg);
    // An open embedding carries the restricted orientation of its image.
    let (og, ox) = (rand_orient(rng), rand_orient(rng));
    let om = ox * f.det_sign();
    let k = fiber_orientation(dx, dg, om, og, ox, &f, &g).ok()?;
    let images = k.basis.select_rows(&(dx..dx + dg).collect::<Vec<_>>());
    let oracle = iso_sign(&k, &images, &OrientedSubspace::full(dg, og));
    let formula = Parity::of_product(dx as i64, dg as i64 + 1).sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "open-embedding",
            "dims": {"M": dx, "Gamma": dg, "X": dx},
            "orient": [om, og, ox],
            "f": mat_json(&f),
            "g": mat_json(&g),
        })
        .to_string(),
    })
}

fn sample_boundary_factors(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let m_factors = rng.gen_range(1..=2usize);
    let dm = rng.gen_range(0..=2usize);
    let dgs: Vec<usize> = (0..m_factors).map(|_| rng.gen_range(0..=2)).collect();
    let dg_total: usize = dgs.iter().sum();
    let dx = rng.gen_range(0..=2usize);
    if dm + dg_total < dx + 1 {
        return None;
    }
    // Pick the face: the parent or one of the factors, whichever has
    // positive dimension.
    let parent_branch = rng.gen::<bool>();
    let branch = if parent_branch {
        if dm == 0 {
            return None;
        }
        BoundaryBranch::Parent
    } else {
        let i = rng.gen_range(0..m_factors);
        if dgs[i] == 0 {
            return None;
        }
        BoundaryBranch::Factor(i + 1)
    };
    let f = rand_mat(rng, dx, dm);
    let g = rand_mat(rng, dx, dg_total);
    let om = rand_orient(rng);
    let ogs: Vec<i32> = (0..m_factors).map(|_| rand_orient(rng)).collect();
    let og: i32 = ogs.iter().product();
    let ox = rand_orient(rng);
    let parent = fiber_orientation(dm, dg_total, om, og, ox, &f, &g).ok()?;
    let (face, outward) = match branch {
        BoundaryBranch::Parent => {
            let fp = drop_column(&f, dm - 1);
            let sub = fiber_orientation(dm - 1, dg_total, om, og, ox, &fp, &g).ok()?;
            let embedded = OrientedSubspace {
                ambient: dm + dg_total,
                basis: insert_zero_row(&sub.basis, dm - 1),
                orientation: sub.orientation,
            };
            (embedded, dm - 1)
        }
        BoundaryBranch::Factor(i) => {
            let offset: usize = dgs[..i - 1].iter().sum();
            let coord = dm + offset + dgs[i - 1] - 1;
            let gp = drop_column(&g, coord - dm);
            let sub = fiber_orientation(dm, dg_total - 1, om, og, ox, &f, &gp).ok()?;
            let embedded = OrientedSubspace {
                ambient: dm + dg_total,
                basis: insert_zero_row(&sub.basis, coord),
                orientation: sub.orientation,
            };
            (embedded, coord)
        }
    };
    let bdry = boundary_marker(&parent, &face, outward)?;
    let oracle = bdry * face.orientation;
    let dgs_i64: Vec<i64> = dgs.iter().map(|&d| d as i64).collect();
    let formula = signs::boundary_fiber_sign(dx as i64, &dgs_i64, branch).sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "boundary-factors",
            "dims": {"M": dm, "Gamma": dgs, "X": dx},
            "branch": format!("{branch:?}"),
            "orient": [om, ogs, ox],
            "f": mat_json(&f),
            "g": mat_json(&g),
        })
        .to_string(),
    })
}

fn sample_flip(rng: &mut ChaCha8Rng) -> Option<Sample> {
    // Color every coordinate; maps only connect same-colored coordinates, so
    // the diagonal color involutions intertwine with f and g.
    let dm = rng.gen_range(1..=3usize);
    let dg = rng.gen_range(1..=3usize);
    let dx = rng.gen_range(1..=2usize);
    let colors_m: Vec<i32> = (0..dm).map(|_| rand_orient(rng)).collect();
    let colors_g: Vec<i32> = (0..dg).map(|_| rand_orient(rng)).collect();
    let colors_x: Vec<i32> = (0..dx).map(|_| rand_orient(rng)).collect();
    let mut f = IMat::zeros(dx, dm);
    for i in 0..dx {
        for j in 0..dm {
            if colors_x[i] == colors_m[j] {
                f[(i, j)] = rng.gen_range(-2..=2);
            }
        }
    }
    let mut g = IMat::zeros(dx, dg);
    for i in 0..dx {
        for j in 0..dg {
            if colors_x[i] == colors_g[j] {
                g[(i, j)] = rng.gen_range(-2..=2);
            }
        }
    }
    let (om, og, ox) = (rand_orient(rng), rand_orient(rng), rand_orient(rng));
    let k = fiber_orientation(dm, dg, om, og, ox, &f, &g).ok()?;
    // The flip acts coordinatewise by the colors.
    let mut phi = IMat::zeros(dm + dg, dm + dg);
    for j in 0..dm {
        phi[(j, j)] = colors_m[j] as i128;
    }
    for j in 0..dg {
        phi[(dm + j, dm + j)] = colors_g[j] as i128;
    }
    let images = phi.mul(&k.basis);
    let oracle = iso_sign(&k, &images, &k);
    let sgn = |colors: &[i32]| Parity::of(colors.iter().filter(|&&c| c < 0).count() as i64);
    let formula = signs::flip_sign(sgn(&colors_m), sgn(&colors_g), sgn(&colors_x)).sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "flip",
            "dims": {"M": dm, "Gamma": dg, "X": dx},
            "colors": {"M": colors_m, "Gamma": colors_g, "X": colors_x},
            "orient": [om, og, ox],
            "f": mat_json(&f),
            "g": mat_json(&g),
        })
        .to_string(),
    })
}

fn sample_reassociation(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let dm = rng.gen_range(0..=2usize);
    let dg = rng.gen_range(0..=2usize);
    let dx = rng.gen_range(0..=2usize);
    let dc = rng.gen_range(0..=2usize);
    let dy = rng.gen_range(0..=2usize);
    let f = rand_mat(rng, dx, dm);
    let g = rand_mat(rng, dx, dg);
    let e = rand_mat(rng, dy, dm);
    let h = rand_mat(rng, dy, dc);
    let (om, og, ox, oc, oy) = (
        rand_orient(rng),
        rand_orient(rng),
        rand_orient(rng),
        rand_orient(rng),
        rand_orient(rng),
    );
    // Left route: (M x_X Gamma) x_Y C.
    let k1 = fiber_orientation(dm, dg, om, og, ox, &f, &g).ok()?;
    let e_on_k1 = e.mul(&k1.basis.select_rows(&(0..dm).collect::<Vec<_>>()));
    let inner = fiber_orientation(k1.dim(), dc, k1.orientation, oc, oy, &e_on_k1, &h).ok()?;
    let top = k1
        .basis
        .mul(&inner.basis.select_rows(&(0..k1.dim()).collect::<Vec<_>>()));
    let bottom = inner
        .basis
        .select_rows(&(k1.dim()..k1.dim() + dc).collect::<Vec<_>>());
    let left = OrientedSubspace {
        ambient: dm + dg + dc,
        basis: top.vcat(&bottom),
        orientation: inner.orientation,
    };
    // Right route: M x_{X x Y} (Gamma x C).
    let ft = f.vcat(&e);
    let gt = block_diag(&g, &h);
    let right = fiber_orientation(dm, dg + dc, om, og * oc, ox * oy, &ft, &gt).ok()?;
    let oracle = compare(&left, &right);
    let formula = signs::assoc_sign(dx as i64, dy as i64 - dc as i64).sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "reassociation",
            "dims": {"M": dm, "Gamma": dg, "X": dx, "C": dc, "Y": dy},
            "orient": [om, og, ox, oc, oy],
            "f": mat_json(&f), "g": mat_json(&g), "e": mat_json(&e), "h": mat_json(&h),
        })
        .to_string(),
    })
}

struct DoubleSetup {
    dims: [usize; 7], // m1, m2, g1, g2, x1, x2, y
    f1: IMat,
    g1: IMat,
    e1: IMat,
    orients: [i32; 7],
    left: OrientedSubspace,
    k2: OrientedSubspace,
    e2_on_k2: IMat,
}

/// Shared construction for the two-factor split drivers: the fiber product of
/// `M = M1 x_Y M2` against `Gamma1 x Gamma2` over `X1 x X2`, embedded in
/// ambient coordinates `(M1, M2, Gamma1, Gamma2)`.
fn double_setup(rng: &mut ChaCha8Rng) -> Option<DoubleSetup> {
    let dm1 = rng.gen_range(0..=2usize);
    let dm2 = rng.gen_range(0..=2usize);
    let dg1 = rng.gen_range(0..=2usize);
    let dg2 = rng.gen_range(0..=2usize);
    let dx1 = rng.gen_range(0..=1usize);
    let dx2 = rng.gen_range(0..=1usize);
    let dy = rng.gen_range(0..=1usize);
    let f1 = rand_mat(rng, dx1, dm1);
    let f2 = rand_mat(rng, dx2, dm2);
    let g1 = rand_mat(rng, dx1, dg1);
    let g2 = rand_mat(rng, dx2, dg2);
    let e1 = rand_mat(rng, dy, dm1);
    let e2 = rand_mat(rng, dy, dm2);
    let orients: [i32; 7] = std::array::from_fn(|_| rand_orient(rng));
    let [om1, om2, og1, og2, ox1, ox2, oy] = orients;
    // M = M1 x_Y M2, oriented by the oracle.
    let km = fiber_orientation(dm1, dm2, om1, om2, oy, &e1, &e2).ok()?;
    // f = (f1 x f2)|_M into X1 x X2.
    let f_amb = block_diag(&f1, &f2);
    let f_on_m = f_amb.mul(&km.basis);
    let g = block_diag(&g1, &g2);
    let lhs =
        fiber_orientation(km.dim(), dg1 + dg2, km.orientation, og1 * og2, ox1 * ox2, &f_on_m, &g)
            .ok()?;
    let top = km
        .basis
        .mul(&lhs.basis.select_rows(&(0..km.dim()).collect::<Vec<_>>()));
    let bottom = lhs
        .basis
        .select_rows(&(km.dim()..km.dim() + dg1 + dg2).collect::<Vec<_>>());
    let left = OrientedSubspace {
        ambient: dm1 + dm2 + dg1 + dg2,
        basis: top.vcat(&bottom),
        orientation: lhs.orientation,
    };
    let k2 = fiber_orientation(dm2, dg2, om2, og2, ox2, &f2, &g2).ok()?;
    let e2_on_k2 = e2.mul(&k2.basis.select_rows(&(0..dm2).collect::<Vec<_>>()));
    Some(DoubleSetup {
        dims: [dm1, dm2, dg1, dg2, dx1, dx2, dy],
        f1,
        g1,
        e1,
        orients,
        left,
        k2,
        e2_on_k2,
    })
}

/// Reorder a basis from ambient order `(M1, Gamma1, M2, Gamma2)` to
/// `(M1, M2, Gamma1, Gamma2)`.
fn reorder_m1g1m2g2(basis: &IMat, dm1: usize, dg1: usize, dm2: usize, dg2: usize) -> IMat {
    let mut order = Vec::with_capacity(dm1 + dm2 + dg1 + dg2);
    order.extend(0..dm1);
    order.extend(dm1 + dg1..dm1 + dg1 + dm2);
    order.extend(dm1..dm1 + dg1);
    order.extend(dm1 + dg1 + dm2..dm1 + dg1 + dm2 + dg2);
    basis.select_rows(&order)
}

fn sample_double_split(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let s = double_setup(rng)?;
    let [dm1, dm2, dg1, dg2, dx1, dx2, dy] = s.dims;
    let [om1, _om2, og1, _og2, ox1, _ox2, oy] = s.orients;
    // Right route: (M1 x_{X1} Gamma1) x_Y (M2 x_{X2} Gamma2).
    let k1 = fiber_orientation(dm1, dg1, om1, og1, ox1, &s.f1, &s.g1).ok()?;
    let e1_on_k1 = s.e1.mul(&k1.basis.select_rows(&(0..dm1).collect::<Vec<_>>()));
    let outer = fiber_orientation(
        k1.dim(),
        s.k2.dim(),
        k1.orientation,
        s.k2.orientation,
        oy,
        &e1_on_k1,
        &s.e2_on_k2,
    )
    .ok()?;
    let top = k1
        .basis
        .mul(&outer.basis.select_rows(&(0..k1.dim()).collect::<Vec<_>>()));
    let bottom = s.k2.basis.mul(
        &outer
            .basis
            .select_rows(&(k1.dim()..k1.dim() + s.k2.dim()).collect::<Vec<_>>()),
    );
    let right = OrientedSubspace {
        ambient: dm1 + dm2 + dg1 + dg2,
        basis: reorder_m1g1m2g2(&top.vcat(&bottom), dm1, dg1, dm2, dg2),
        orientation: outer.orientation,
    };
    let oracle = compare(&s.left, &right);
    let formula = signs::double_fiber_sign(
        dm2 as i64,
        dx1 as i64 - dg1 as i64,
        dx1 as i64,
        dx2 as i64 - dg2 as i64,
        dy as i64,
        (dx1 + dx2) as i64 - (dg1 + dg2) as i64,
    )
    .sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "double-split",
            "dims": s.dims,
            "orient": s.orients,
        })
        .to_string(),
    })
}

fn sample_composite(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let s = double_setup(rng)?;
    let [dm1, dm2, dg1, dg2, dx1, dx2, dy] = s.dims;
    let [om1, _om2, og1, _og2, ox1, _ox2, oy] = s.orients;
    // Right route: M1 x_{X1 x Y} (Gamma1 x (M2 x_{X2} Gamma2)).
    let ft = s.f1.vcat(&s.e1);
    let gt = block_diag(&s.g1, &s.e2_on_k2);
    let outer = fiber_orientation(
        dm1,
        dg1 + s.k2.dim(),
        om1,
        og1 * s.k2.orientation,
        ox1 * oy,
        &ft,
        &gt,
    )
    .ok()?;
    let top = outer
        .basis
        .select_rows(&(0..dm1 + dg1).collect::<Vec<_>>());
    let bottom = s.k2.basis.mul(
        &outer
            .basis
            .select_rows(&(dm1 + dg1..dm1 + dg1 + s.k2.dim()).collect::<Vec<_>>()),
    );
    let right = OrientedSubspace {
        ambient: dm1 + dm2 + dg1 + dg2,
        basis: reorder_m1g1m2g2(&top.vcat(&bottom), dm1, dg1, dm2, dg2),
        orientation: outer.orientation,
    };
    let oracle = compare(&s.left, &right);
    let formula = signs::compose_fiber_sign(
        dm2 as i64,
        dx1 as i64 - dg1 as i64,
        dx1 as i64,
        dy as i64 - dm2 as i64,
        dy as i64,
        (dx1 + dx2) as i64 - (dg1 + dg2) as i64,
    )
    .sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "composite",
            "dims": s.dims,
            "orient": s.orients,
        })
        .to_string(),
    })
}

fn sample_base_drop(rng: &mut ChaCha8Rng) -> Option<Sample> {
    let db = rng.gen_range(0..=1usize);
    let m_factors = rng.gen_range(1..=2usize);
    let dm = rng.gen_range(db..=3usize);
    let dgs: Vec<usize> = (0..m_factors).map(|_| rng.gen_range(db..=2)).collect();
    let dxs: Vec<usize> = (0..m_factors).map(|_| rng.gen_range(0..=1)).collect();
    let e = rand_mat(rng, db, dm);
    let es: Vec<IMat> = dgs.iter().map(|&d| rand_mat(rng, db, d)).collect();
    let fs: Vec<IMat> = dxs.iter().map(|&d| rand_mat(rng, d, dm)).collect();
    let gs: Vec<IMat> = dxs
        .iter()
        .zip(&dgs)
        .map(|(&dx, &dg)| rand_mat(rng, dx, dg))
        .collect();
    let om = rand_orient(rng);
    let ob = rand_orient(rng);
    let ogs: Vec<i32> = (0..m_factors).map(|_| rand_orient(rng)).collect();
    let oxs: Vec<i32> = (0..m_factors).map(|_| rand_orient(rng)).collect();
    let dg_total: usize = dgs.iter().sum();
    // Big target: (B x X_1) x ... x (B x X_m).
    let mut ft = IMat::zeros(0, dm);
    let mut gt = IMat::zeros(0, dg_total);
    for i in 0..m_factors {
        ft = ft.vcat(&e).vcat(&fs[i]);
        let offset: usize = dgs[..i].iter().sum();
        let mut block = IMat::zeros(db + dxs[i], dg_total);
        for r in 0..db {
            for c in 0..dgs[i] {
                block[(r, offset + c)] = es[i][(r, c)];
            }
        }
        for r in 0..dxs[i] {
            for c in 0..dgs[i] {
                block[(db + r, offset + c)] = gs[i][(r, c)];
            }
        }
        gt = gt.vcat(&block);
    }
    let o_target: i32 =
        (0..m_factors).map(|i| ob * oxs[i]).product();
    let og_total: i32 = ogs.iter().product();
    let big = fiber_orientation(dm, dg_total, om, og_total, o_target, &ft, &gt).ok()?;
    // Left route: {b} x_{e'} (big fiber product).
    let e_on_big = e.mul(&big.basis.select_rows(&(0..dm).collect::<Vec<_>>()));
    let fiber = fiber_orientation(0, big.dim(), 1, big.orientation, ob, &IMat::zeros(db, 0), &e_on_big)
        .ok()?;
    let left = OrientedSubspace {
        ambient: dm + dg_total,
        basis: big.basis.mul(&fiber.basis),
        orientation: fiber.orientation,
    };
    // Right route: fibers of e and e_i, with the prescribed twists.
    let mb = oriented_kernel_of(dm, om, ob, &e).ok()?;
    let mb_twist = Parity::of_product(mb.dim() as i64, db as i64).sign();
    let mb = OrientedSubspace {
        orientation: mb.orientation * mb_twist,
        ..mb
    };
    let mut gb: Vec<OrientedSubspace> = Vec::new();
    for i in 0..m_factors {
        let ker = oriented_kernel_of(dgs[i], ogs[i], ob, &es[i]).ok()?;
        let twist = Parity::of_product(ker.dim() as i64, db as i64).sign();
        gb.push(OrientedSubspace {
            orientation: ker.orientation * twist,
            ..ker
        });
    }
    let mut fb = IMat::zeros(0, mb.dim());
    for f in &fs {
        fb = fb.vcat(&f.mul(&mb.basis));
    }
    let gb_dims: Vec<usize> = gb.iter().map(|g| g.dim()).collect();
    let gb_total: usize = gb_dims.iter().sum();
    let mut gbm = IMat::zeros(0, gb_total);
    for i in 0..m_factors {
        let offset: usize = gb_dims[..i].iter().sum();
        let inner = gs[i].mul(&gb[i].basis);
        let mut block = IMat::zeros(dxs[i], gb_total);
        for r in 0..dxs[i] {
            for c in 0..gb_dims[i] {
                block[(r, offset + c)] = inner[(r, c)];
            }
        }
        gbm = gbm.vcat(&block);
    }
    let og_b: i32 = gb.iter().map(|g| g.orientation).product();
    let ox_total: i32 = oxs.iter().product();
    let small = fiber_orientation(mb.dim(), gb_total, mb.orientation, og_b, ox_total, &fb, &gbm)
        .ok()?;
    // Embed: M_b coordinates back into M, each Gamma_b into its block.
    let top = mb
        .basis
        .mul(&small.basis.select_rows(&(0..mb.dim()).collect::<Vec<_>>()));
    let mut bottom = IMat::zeros(0, small.dim());
    for i in 0..m_factors {
        let offset: usize = gb_dims[..i].iter().sum();
        let rows = small
            .basis
            .select_rows(&(mb.dim() + offset..mb.dim() + offset + gb_dims[i]).collect::<Vec<_>>());
        bottom = bottom.vcat(&gb[i].basis.mul(&rows));
    }
    let right = OrientedSubspace {
        ambient: dm + dg_total,
        basis: top.vcat(&bottom),
        orientation: small.orientation,
    };
    if left.dim() != right.dim() {
        return None;
    }
    let oracle = compare(&left, &right);
    if oracle == 0 {
        return None;
    }
    let codims: Vec<i64> = (0..m_factors)
        .map(|i| dxs[i] as i64 - gb_dims[i] as i64)
        .collect();
    let formula = signs::base_drop_sign(db as i64, mb.dim() as i64, &codims).sign();
    Some(Sample {
        formula,
        oracle,
        desc: serde_json::json!({
            "lemma": "base-drop",
            "dims": {"B": db, "M": dm, "Gamma": dgs, "X": dxs},
        })
        .to_string(),
    })
}

fn run_lemma(
    lemma: Lemma,
    samples: usize,
    rng: &mut ChaCha8Rng,
    mutation: FormulaMutation,
) -> LemmaReport {
    let mut done = 0usize;
    let mut mismatches = 0usize;
    let mut first = None;
    let mut attempts = 0usize;
    let cap = samples.saturating_mul(60) + 1000;
    while done < samples && attempts < cap {
        attempts += 1;
        let sample = match lemma {
            Lemma::OpenEmbedding => sample_open_embedding(rng),
            Lemma::BoundaryFactors => sample_boundary_factors(rng),
            Lemma::Flip => sample_flip(rng),
            Lemma::Reassociation => sample_reassociation(rng),
            Lemma::DoubleSplit => sample_double_split(rng),
            Lemma::Composite => sample_composite(rng),
            Lemma::BaseDrop => sample_base_drop(rng),
        };
        let Some(s) = sample else { continue };
        done += 1;
        let mutated = match (mutation, lemma) {
            (FormulaMutation::OpenEmbedding, Lemma::OpenEmbedding)
            | (FormulaMutation::BoundaryFactor, Lemma::BoundaryFactors)
            | (FormulaMutation::Composite, Lemma::Composite) => -s.formula,
            _ => s.formula,
        };
        if mutated != s.oracle {
            mismatches += 1;
            if first.is_none() {
                first = Some(s.desc);
            }
        }
    }
    LemmaReport {
        lemma,
        samples: done,
        mismatches,
        first_counterexample: first,
    }
}

/// Runs the oracle-equivalence suite for every fiber-product sign lemma.
pub fn run_sign_suite(samples: usize, seed: u64, mutation: FormulaMutation) -> SignSuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lemmas = ALL_LEMMAS
        .iter()
        .map(|&l| run_lemma(l, samples, &mut rng, mutation))
        .collect();
    SignSuiteReport {
        seed,
        requested_samples: samples,
        lemmas,
        vacuous: samples == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_sample_counts() {
        let report = run_sign_suite(300, 7, FormulaMutation::None);
        for l in &report.lemmas {
            assert_eq!(
                l.mismatches, 0,
                "{}: {:?}",
                l.lemma.name(),
                l.first_counterexample
            );
            assert_eq!(l.samples, 300, "{} under-sampled", l.lemma.name());
        }
        assert!(report.passed());
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_sign_suite(50, 11, FormulaMutation::None);
        let b = run_sign_suite(50, 11, FormulaMutation::None);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn injected_mutation_fails_with_counterexample() {
        let report = run_sign_suite(100, 13, FormulaMutation::OpenEmbedding);
        assert!(!report.passed());
        let bad = report
            .lemmas
            .iter()
            .find(|l| l.lemma == Lemma::OpenEmbedding)
            .unwrap();
        assert!(bad.mismatches > 0);
        assert!(bad.first_counterexample.is_some());
    }

    #[test]
    fn zero_samples_is_vacuous() {
        let report = run_sign_suite(0, 1, FormulaMutation::None);
        assert!(report.vacuous);
        assert!(report.passed());
    }
}
