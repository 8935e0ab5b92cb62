// Criterion-3-style measurement: exhaustive bijection/reflection checks.
use ogw_core::constraint::{InteriorConstraint, Setting};
use ogw_core::monoid::{DegreeMonoid, Generator};
use ogw_core::twolevel::{
    enumerate_cuts_plus, reflect, rotate_attach, split_plus, unsplit_plus,
};
use ogw_core::decomp::rotate;
use num::rational::BigRational;
use num::FromPrimitive;
use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

fn main() {
    let gens = vec![
        Generator { name: "a".into(), energy: BigRational::from_i64(2).unwrap(), maslov: 2, in_sphere_image: true },
        Generator { name: "b".into(), energy: BigRational::from_i64(2).unwrap(), maslov: 2, in_sphere_image: false },
        Generator { name: "c".into(), energy: BigRational::from_i64(3).unwrap(), maslov: 2, in_sphere_image: false },
    ];
    let setting = Setting::new(DegreeMonoid::new(gens).unwrap(), 3).unwrap();
    let degrees = setting.monoid.degrees_up_to_energy(&BigRational::from_i64(4).unwrap());
    let codims = [2i64, 4, 2];
    let budget = 4usize;
    let t0 = Instant::now();
    let mut total_cuts = 0usize;
    let mut dec_cache: HashMap<(ogw_core::constraint::ConstraintClass, usize), usize> = HashMap::new();
    for beta in &degrees {
        for npts in 0..=4usize {
            for nint in 0..=3usize {
                let points: BTreeSet<String> = (0..npts).map(|i| format!("p{i}")).collect();
                let interior: BTreeSet<InteriorConstraint> =
                    (0..nint).map(|i| InteriorConstraint::new(format!("G{i}"), codims[i])).collect();
                let Ok(alpha) = setting.class(beta.clone(), points, interior) else { continue };
                let decs = setting.decompositions_bounded(&alpha, budget);
                let mut consumed_inwindow = 0usize;
                for eta in &decs {
                    // rotation orbit divides k
                    let k = eta.k_bullet().max(1);
                    let mut cur = eta.clone();
                    let mut order = 0;
                    for stepp in 1..=k {
                        cur = rotate(&cur);
                        if cur == *eta { order = stepp; break; }
                    }
                    assert!(order > 0 && k % order == 0);
                    for tl in enumerate_cuts_plus(&setting, eta) {
                        total_cuts += 1;
                        let attach = split_plus(&setting, &tl);
                        assert_eq!(unsplit_plus(&attach), tl, "round trip");
                        consumed_inwindow += 1;
                        // Reflection checks on the star-style attach data.
                        if !attach.eta.is_two_point_trivial() {
                            let r1 = reflect(&setting, &attach).unwrap();
                            if !r1.eta.is_two_point_trivial() {
                                let r2 = reflect(&setting, &r1).unwrap();
                                let r3 = reflect(&setting, &r2).unwrap();
                                assert_eq!(r3, r1, "R^3 = R");
                                if attach.eta.k_bullet() > 1 {
                                    assert_eq!(reflect(&setting, &rotate_attach(&attach)).unwrap(), r1);
                                }
                                let total = unsplit_plus(&attach).eta.target();
                                let di = setting.dim_of(attach.attached_class());
                                let dhat = setting.dim_of(&r1.eta.parts[0]);
                                assert_eq!(di + dhat, setting.dim_of(&total) + setting.n - 3);
                            }
                        }
                    }
                }
                // Surjectivity by counting: every (eta1, i, eta2) with
                // k1 + k2 - 1 <= budget arises exactly once.
                let big = setting.decompositions_bounded(&alpha, budget + 1);
                let mut expected = 0usize;
                for eta1 in &big {
                    let k1 = eta1.k_bullet();
                    for pos in 1..=k1 {
                        let part = &eta1.parts[pos - 1];
                        let cap = budget + 1 - k1;
                        let inner_count = *dec_cache
                            .entry((part.clone(), cap))
                            .or_insert_with(|| {
                                setting.decompositions_bounded(part, cap).len()
                            });
                        expected += inner_count;
                    }
                }
                assert_eq!(consumed_inwindow, expected, "bijection count on {alpha}");
            }
        }
    }
    println!("cuts: {total_cuts}, elapsed: {:?}", t0.elapsed());
}
