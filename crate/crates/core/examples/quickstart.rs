//! Libration points and a short propagation at one mass ratio.

use hill4bp::equilibria::equilibrium_points;
use hill4bp::integrate::{propagate, HillDynamics};
use hill4bp::{MassRatio, Settings, SpatialState};

fn main() -> Result<(), hill4bp::Error> {
    let mu = MassRatio::new(0.25)?;

    let points = equilibrium_points(mu)?;
    println!("L1 at ({:.6}, {:.6})", points.l1.x, points.l1.y);

    let dynamics = HillDynamics::new(mu);
    let start = SpatialState::new(0.3, 0.0, 0.0, 0.0, 1.5278, 0.0);
    let orbit = propagate(&dynamics, [0.0, 10.0], start, &Settings::default())?;
    println!(
        "{} states, Jacobi drift {:.3e}",
        orbit.states.len(),
        orbit.jacobi_drift()?
    );
    Ok(())
}
