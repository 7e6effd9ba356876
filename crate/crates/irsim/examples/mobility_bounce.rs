//! Kinematics with specular boundary reflection: march one fast node
//! across the region and watch it bounce, speed preserved throughout.
//!
//!     cargo run --example mobility_bounce

use irsim::geometry::{RegionBox, Vec3};
use irsim::mobility::{step_kinematics, NodeKinematics};

fn main() {
    let bounds = RegionBox::new(Vec3::new(-10.0, -10.0, 0.0), Vec3::new(10.0, 10.0, 3.0));
    let mut node = NodeKinematics {
        position: Vec3::new(8.0, -3.0, 1.0),
        velocity: Vec3::new(6.0, 2.5, 0.0),
    };
    let dt = 0.5;
    println!("{:>5} {:>18} {:>18} {:>8}", "step", "position (x, y)", "velocity (x, y)", "speed");
    for step in 0..=20 {
        println!(
            "{step:>5} ({:>7.3}, {:>7.3}) ({:>7.3}, {:>7.3}) {:>8.4}",
            node.position.x, node.position.y, node.velocity.x, node.velocity.y, node.speed()
        );
        node = step_kinematics(node, dt, &bounds);
        assert!(bounds.contains(node.position));
    }
}
