//! Shared fixtures for the criterion benches.

use harp_core::critical_regions::{
    estimate_criticality, extract_regions, generate_corpus, CriticalRegion, ExtractParams, FieldBins,
};
use harp_core::envs::{EnvKind, EnvSpec};
use harp_core::ll_planner::{BiRrt, Budget};
use harp_core::seeding::rng_for;
use harp_core::{CSpace, Query, RobotModel};

/// Single-wall doorway room with a rectangular robot.
pub fn doorway() -> CSpace {
    let ws = EnvSpec {
        kind: EnvKind::Doorway {
            walls: 1,
            door_width: 0.4,
            wall_thickness: 0.1,
        },
        size: 3.0,
        resolution: 0.05,
        seed: 2,
    }
    .build()
    .expect("doorway env");
    CSpace::new(ws, RobotModel::rect(0.15, 0.05).expect("robot"))
}

/// Regions estimated from a small BiRRT corpus.
pub fn regions(space: &CSpace) -> Vec<CriticalRegion> {
    let mut rng = rng_for(3, &[]);
    let corpus =
        generate_corpus(space, "doorway", 20, 2, &BiRrt::default(), Budget::samples(20_000), &mut rng).expect("corpus");
    let field = estimate_criticality(&corpus, space, &FieldBins::with_factor(space, 4), space.default_step())
        .expect("field");
    extract_regions(&field, space, &ExtractParams::default(), &mut rng).expect("regions")
}

/// A query crossing the wall.
pub fn crossing(space: &CSpace) -> Query {
    let mut rng = rng_for(9, &[]);
    loop {
        let a = space.sample_free(&mut rng, 1000).expect("start");
        let b = space.sample_free(&mut rng, 1000).expect("goal");
        if (a.0[1] - 1.5) * (b.0[1] - 1.5) < -0.5 {
            return Query::new(a, b);
        }
    }
}
