//! Node kinematics: random initialization inside the region and per-slot
//! stepping with specular reflection at the region boundaries.

use rand::Rng;

use crate::config::SimConfig;
use crate::geometry::{RegionBox, Vec3};

/// Position and velocity of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeKinematics {
    pub position: Vec3,
    pub velocity: Vec3,
}

impl NodeKinematics {
    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }
}

/// Draw initial node states: positions uniform over the region, headings
/// uniform over [0, 2π), speeds uniform over [0, v_max], planar motion.
///
/// Draw order per node is x, y, z, heading, speed, with nodes in ascending
/// index order; this ordering is part of the reproducibility contract.
pub fn init_nodes<R: Rng>(rng: &mut R, cfg: &SimConfig) -> Vec<NodeKinematics> {
    let region = cfg.region;
    (0..cfg.num_nodes)
        .map(|_| {
            let x = rng.gen_range(region.min.x..=region.max.x);
            let y = rng.gen_range(region.min.y..=region.max.y);
            let z = rng.gen_range(region.min.z..=region.max.z);
            let heading = rng.gen_range(0.0..std::f64::consts::TAU);
            let speed = rng.gen_range(0.0..=cfg.v_max_mps);
            NodeKinematics {
                position: Vec3::new(x, y, z),
                velocity: Vec3::new(speed * heading.cos(), speed * heading.sin(), 0.0),
            }
        })
        .collect()
}

/// Advance one node by `dt`, mirroring across any violated bound and
/// negating the corresponding velocity component. The mirroring repeats
/// until the coordinate is inside, which handles corner double-reflections
/// and steps longer than the box extent.
pub fn step_kinematics(node: NodeKinematics, dt: f64, bounds: &RegionBox) -> NodeKinematics {
    let mut p = node.position + node.velocity * dt;
    let mut v = node.velocity;
    for axis in 0..3 {
        let (lo, hi) = match axis {
            0 => (bounds.min.x, bounds.max.x),
            1 => (bounds.min.y, bounds.max.y),
            _ => (bounds.min.z, bounds.max.z),
        };
        let (c, vc) = match axis {
            0 => (&mut p.x, &mut v.x),
            1 => (&mut p.y, &mut v.y),
            _ => (&mut p.z, &mut v.z),
        };
        if hi == lo {
            // Degenerate axis: pin the coordinate, nothing to reflect.
            *c = lo;
            continue;
        }
        loop {
            if *c < lo {
                *c = 2.0 * lo - *c;
                *vc = -*vc;
            } else if *c > hi {
                *c = 2.0 * hi - *c;
                *vc = -*vc;
            } else {
                break;
            }
        }
    }
    NodeKinematics { position: p, velocity: v }
}
