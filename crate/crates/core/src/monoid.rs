//! Finitely generated effective degree monoids.
//!
//! Degrees are nonnegative integer vectors over a fixed generator list; each
//! generator carries a positive energy, an even Maslov index, and a flag
//! marking whether it lies in the sphere-class image.

use num::rational::BigRational;
use num::{BigInt, Zero};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("generator `{0}` has non-positive energy")]
    NonPositiveEnergy(String),
    #[error("generator `{0}` has odd Maslov index {1}")]
    OddMaslov(String, i64),
    #[error("duplicate generator name `{0}`")]
    DuplicateName(String),
    #[error("degree has {got} coordinates, monoid has {want} generators")]
    RankMismatch { got: usize, want: usize },
    #[error("zero energy denominator for generator `{0}`")]
    ZeroDenominator(String),
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub energy: BigRational,
    pub maslov: i64,
    pub in_sphere_image: bool,
}

/// A degree: exponents over the monoid generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(pub Vec<u32>);

impl Degree {
    pub fn zero(rank: usize) -> Degree {
        Degree(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Coordinatewise difference; `None` when not effective.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Degree)
    }

    pub fn coord_sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct DegreeMonoid {
    gens: Vec<Generator>,
}

impl DegreeMonoid {
    pub fn new(gens: Vec<Generator>) -> Result<DegreeMonoid, MonoidError> {
        for (i, g) in gens.iter().enumerate() {
            if g.energy <= BigRational::zero() {
                return Err(MonoidError::NonPositiveEnergy(g.name.clone()));
            }
            if g.maslov.rem_euclid(2) != 0 {
                return Err(MonoidError::OddMaslov(g.name.clone(), g.maslov));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(MonoidError::DuplicateName(g.name.clone()));
            }
        }
        Ok(DegreeMonoid { gens })
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_degree(&self, idx: usize) -> Degree {
        let mut d = Degree::zero(self.rank());
        d.0[idx] = 1;
        d
    }

    pub fn energy(&self, d: &Degree) -> BigRational {
        d.0.iter()
            .zip(&self.gens)
            .map(|(&c, g)| &g.energy * BigRational::from(BigInt::from(c)))
            .sum()
    }

    pub fn maslov(&self, d: &Degree) -> i64 {
        d.0.iter()
            .zip(&self.gens)
            .map(|(&c, g)| c as i64 * g.maslov)
            .sum()
    }

    /// Whether the degree lies in the submonoid generated by the
    /// sphere-image generators.
    pub fn in_sphere_image(&self, d: &Degree) -> bool {
        d.0.iter()
            .zip(&self.gens)
            .all(|(&c, g)| c == 0 || g.in_sphere_image)
    }

    /// Effective partial order: `a ⪯ b` iff `b - a` is effective.
    pub fn le(&self, a: &Degree, b: &Degree) -> bool {
        b.checked_sub(a).is_some()
    }

    /// All degrees `d' ⪯ d`, lexicographically ordered.
    pub fn degrees_below(&self, d: &Degree) -> Vec<Degree> {
        let mut out = vec![Degree::zero(self.rank())];
        for (idx, &cmax) in d.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (cmax as usize + 1));
            for base in &out {
                for c in 0..=cmax {
                    let mut v = base.clone();
                    v.0[idx] = c;
                    next.push(v);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// All degrees of energy at most `bound`, lexicographically ordered.
    pub fn degrees_up_to_energy(&self, bound: &BigRational) -> Vec<Degree> {
        let mut caps = Vec::with_capacity(self.rank());
        for g in &self.gens {
            // Largest c with c * energy <= bound.
            let mut c = 0u32;
            while BigRational::from(BigInt::from(c + 1)) * &g.energy <= *bound {
                c += 1;
            }
            caps.push(c);
        }
        let mut out = Vec::new();
        let cap_degree = Degree(caps);
        for d in self.degrees_below(&cap_degree) {
            if self.energy(&d) <= *bound {
                out.push(d);
            }
        }
        out
    }
}

/// On-disk description of a degree monoid.
#[derive(Debug, Deserialize)]
pub struct MonoidDoc {
    pub n: i64,
    #[serde(rename = "generator")]
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Debug, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    /// Energy as `[numerator, denominator]`.
    pub energy: [i64; 2],
    pub maslov: i64,
    #[serde(default)]
    pub sphere: bool,
}

impl MonoidDoc {
    pub fn parse(text: &str) -> Result<MonoidDoc, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn build(&self) -> Result<DegreeMonoid, MonoidError> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                if g.energy[1] == 0 {
                    return Err(MonoidError::ZeroDenominator(g.name.clone()));
                }
                Ok(Generator {
                    name: g.name.clone(),
                    energy: BigRational::new(BigInt::from(g.energy[0]), BigInt::from(g.energy[1])),
                    maslov: g.maslov,
                    in_sphere_image: g.sphere,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        DegreeMonoid::new(gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn monoid2() -> DegreeMonoid {
        DegreeMonoid::new(vec![
            Generator {
                name: "a".into(),
                energy: BigRational::from_i64(1).unwrap(),
                maslov: 2,
                in_sphere_image: false,
            },
            Generator {
                name: "b".into(),
                energy: BigRational::from_i64(2).unwrap(),
                maslov: 4,
                in_sphere_image: true,
            },
        ])
        .unwrap()
    }

    #[test]
    fn linear_extensions() {
        let m = monoid2();
        let d = Degree(vec![3, 1]);
        assert_eq!(m.energy(&d), BigRational::from_i64(5).unwrap());
        assert_eq!(m.maslov(&d), 10);
        assert!(!m.in_sphere_image(&d));
        assert!(m.in_sphere_image(&Degree(vec![0, 2])));
        assert!(m.in_sphere_image(&Degree::zero(2)));
    }

    #[test]
    fn degrees_below_and_energy_cut() {
        let m = monoid2();
        assert_eq!(m.degrees_below(&Degree(vec![2, 1])).len(), 6);
        let up = m.degrees_up_to_energy(&BigRational::from_i64(2).unwrap());
        // (0,0), (1,0), (2,0), (0,1)
        assert_eq!(up.len(), 4);
    }

    #[test]
    fn validation_rejects_odd_maslov() {
        let res = DegreeMonoid::new(vec![Generator {
            name: "x".into(),
            energy: BigRational::from_i64(1).unwrap(),
            maslov: 3,
            in_sphere_image: false,
        }]);
        assert!(matches!(res, Err(MonoidError::OddMaslov(_, 3))));
    }

    #[test]
    fn doc_roundtrip() {
        let text = r#"
n = 3
[[generator]]
name = "a"
energy = [1, 1]
maslov = 2

[[generator]]
name = "b"
energy = [3, 2]
maslov = 4
sphere = true
"#;
        let doc = MonoidDoc::parse(text).unwrap();
        let m = doc.build().unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(
            m.energy(&Degree(vec![0, 2])),
            BigRational::from_i64(3).unwrap()
        );
    }
}
