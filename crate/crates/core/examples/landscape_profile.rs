//! Wells, depths and the depth profile of a small path landscape.

use restart_rate::rate::xi_crit;
use restart_rate::{AlgorithmConfig, DiscreteLandscape, RestartSet};

fn main() -> restart_rate::Result<()> {
    // 0 - 1 - 2 - 3 with energies 0, 2, 1, 3
    let l = DiscreteLandscape::path(&[0.0, 2.0, 1.0, 3.0])?;
    for &id in l.ids() {
        println!(
            "node {id}: f = {}, D(x) = {}, local min = {}",
            l.energy(id)?,
            l.descend(id)?,
            l.is_local_min(id)?
        );
    }

    let d = l.decompose(0.0, &RestartSet::G1)?;
    println!("well = {:?}, outside = {:?}", d.well, d.outside_well);
    println!("x1 = {:?}, x2 = {:?}, x3 = {:?}", d.x1, d.x2, d.x3);

    for set in [RestartSet::G1, RestartSet::A2] {
        let profile = l.extract_profile(0.0, &set)?;
        println!("{set:?}: {}", profile.to_json()?);
    }
    let g1 = l.extract_profile(0.0, &RestartSet::G1)?;
    println!("G1 xi_crit = {:.10}", xi_crit(&AlgorithmConfig::g1(), &g1)?.xi_crit);

    let cd = l.critical_depth()?;
    println!("D_f = {:?}", cd.d_f);
    for m in cd.minima {
        println!("  minimum {} at f = {}: H = {}", m.id, m.energy, m.barrier);
    }
    Ok(())
}
