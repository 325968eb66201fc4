use kinklab::bvp::*;
use kinklab::potential::*;

fn main() {
    let pots = vec![
        ("quartic", quartic()),
        ("ratchet-cm", build_ratchet_cm(&RatchetCmParams { omega0: 1.0, b1: 1.0, b2: 5.0, u0: 0.5 }).unwrap()),
        ("rocked", build_rocked_ratchet(&RockedRatchetParams { a_period: 1.0 }).unwrap()),
    ];
    for (name, pot) in &pots {
        for k in [0.5, 0.25, 0.1] {
            let grid = FdGrid::new(4095, 1.0).unwrap();
            let init = tanh_guess(&grid, pot.min_a(), pot.min_b(), k);
            match solve_one_field(pot, k, &grid, &init) {
                Ok((_, rep)) => println!("{name} k={k}: ok it={} rn={:e} damped={}", rep.iterations, rep.final_residual_norm, rep.damping_used),
                Err(e) => println!("{name} k={k}: ERR {e}"),
            }
        }
    }
}
