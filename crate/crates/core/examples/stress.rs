// Quick stress: acceptance-style 3-generator monoid, all dim-0 classes.
use ogw_core::cancel::{verify_cancellation, Conventions, Identity};
use ogw_core::constraint::{InteriorConstraint, Setting};
use ogw_core::monoid::{Degree, DegreeMonoid, Generator};
use num::rational::BigRational;
use num::FromPrimitive;
use std::collections::BTreeSet;
use std::time::Instant;

fn main() {
    let gens = vec![
        Generator { name: "a".into(), energy: BigRational::from_i64(2).unwrap(), maslov: 2, in_sphere_image: true },
        Generator { name: "b".into(), energy: BigRational::from_i64(2).unwrap(), maslov: 2, in_sphere_image: false },
        Generator { name: "c".into(), energy: BigRational::from_i64(3).unwrap(), maslov: 2, in_sphere_image: false },
    ];
    let setting = Setting::new(DegreeMonoid::new(gens).unwrap(), 3).unwrap();
    let degrees = setting.monoid.degrees_up_to_energy(&BigRational::from_i64(4).unwrap());
    println!("degrees: {}", degrees.len());
    let codims = [2i64, 4, 2];
    let t0 = Instant::now();
    let mut dim0 = 0usize;
    let mut groups = [0usize; 4];
    for beta in &degrees {
        for npts in 0..=4usize {
            for nint in 0..=3usize {
                let points: BTreeSet<String> = (0..npts).map(|i| format!("p{i}")).collect();
                let interior: BTreeSet<InteriorConstraint> =
                    (0..nint).map(|i| InteriorConstraint::new(format!("G{i}"), codims[i])).collect();
                let Ok(alpha) = setting.class(beta.clone(), points, interior) else { continue };
                let d = setting.dim_of(&alpha);
                if d == 0 {
                    dim0 += 1;
                    let ta = Instant::now();
                    let nd = setting.decompositions(&alpha).len();
                    eprintln!("alpha {:?} |K|={} |L|={} decs={} enum={:?}", alpha.beta.0, alpha.points.len(), alpha.interior.len(), nd, ta.elapsed());
                    for (j, id) in [Identity::Bdrybb, Identity::Wtcancel, Identity::Cob].into_iter().enumerate() {
                        let r = verify_cancellation(&setting, &alpha, id, &Conventions::default());
                        assert!(r.pass, "{} on {}: {:?}", r.identity, r.class_label, r.first_failure);
                        groups[j] += r.group_count;
                    }
                    let r = verify_cancellation(&setting, &alpha, Identity::Bdry, &Conventions::default());
                    assert!(r.pass, "bdry(dim0) on {}: {:?}", r.class_label, r.first_failure);
                    groups[3] += r.group_count;
                }
                if d == setting.n - 1 {
                    let r = verify_cancellation(&setting, &alpha, Identity::Bdry, &Conventions::default());
                    assert!(r.pass, "bdry on {}: {:?}", r.class_label, r.first_failure);
                    groups[3] += r.group_count;
                }
            }
        }
    }
    println!("dim0 classes: {dim0}, groups: {groups:?}, elapsed: {:?}", t0.elapsed());
}
