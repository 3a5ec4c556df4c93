#![allow(dead_code)]

use catpursuit::domain::{Disk, DomainKind};
use catpursuit::pursuit::{EvaderPolicy, Heading, Pursuit, PursuitTrace};
use catpursuit::{DomainSpec, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn two_disks() -> DomainSpec {
    DomainSpec::plane_minus_disks(vec![Disk::new([0.0, 0.0], 1.0), Disk::new([4.0, 1.0], 1.5)]).unwrap()
}

pub fn tree20() -> DomainSpec {
    DomainSpec::random_tree(20, &mut rng(1))
}

/// Every domain kind the library ships, with a sampling extent for the
/// unbounded ones.
pub fn shipped_domains() -> Vec<(&'static str, DomainSpec, f64)> {
    vec![
        ("euclidean2", DomainSpec::euclidean(2), 3.0),
        ("euclidean3", DomainSpec::euclidean(3), 3.0),
        ("unit_disk", DomainSpec::unit_disk(), 1.0),
        (
            "polygon",
            DomainSpec::convex_polygon(vec![[0.0, 0.0], [3.0, 0.0], [4.0, 2.0], [1.0, 3.0]]).unwrap(),
            1.0,
        ),
        ("sphere", DomainSpec::sphere(1.5).unwrap(), 1.0),
        ("two_disks", two_disks(), 2.0),
        ("tree", tree20(), 1.0),
    ]
}

/// A short pursuit from random positions with a random step size; `None`
/// when the start violates a run precondition.
pub fn random_scenario(d: &DomainSpec, ext: f64, seed: u64) -> Option<PursuitTrace> {
    let mut r = rng(seed);
    let start = d.sample_point(&mut r, ext);
    let step = r.gen_range(0.02..0.2);
    let policy = if matches!(d.kind(), DomainKind::Euclidean { .. }) && r.gen_bool(0.5) {
        let dim = d.ambient_dim().unwrap();
        EvaderPolicy::GeodesicRunner {
            start: d.sample_point(&mut r, ext),
            heading: Heading::Direction((0..dim).map(|_| r.gen_range(-1.0..1.0)).collect()),
        }
    } else {
        EvaderPolicy::RandomWalk {
            seed,
            start: d.sample_point(&mut r, ext),
            extent: ext,
        }
    };
    match Pursuit::new(d, start, policy, step).max_steps(300).run() {
        Ok(t) => Some(t),
        // Start already within capture range or beyond pi/sqrt(K).
        Err(Error::Precondition(_)) => None,
        Err(e) => panic!("seed {seed}: {e}"),
    }
}
