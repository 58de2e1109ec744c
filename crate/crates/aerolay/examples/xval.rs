use aerolay::analytical::Engine;
use aerolay::config::ScenarioConfig;
use aerolay::curve::LinkClass;
use aerolay::montecarlo;
use std::time::Instant;

fn main() {
    let drops: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let mut cfg = ScenarioConfig::default();
    cfg.eta_u = 1.0; // fig2 protocol
    let sc = cfg.derive().unwrap();
    let eng = Engine::new(&sc).unwrap();
    println!("mean UAV power: {:.4} mW ({:.2} dBm)", eng.mean_uav_tx_power_mw().unwrap(),
             10.0*eng.mean_uav_tx_power_mw().unwrap().log10());
    for link in [LinkClass::U2u, LinkClass::GueUl] {
        let t0 = Instant::now();
        let samples = montecarlo::sinr_samples(&sc, link, drops, 2024).unwrap();
        let t_mc = t0.elapsed();
        println!("{}: {} drops in {:?} ({:.1} us/drop)", link.name(), drops, t_mc, t_mc.as_micros() as f64 / drops as f64);
        for t_db in [-10.0, -5.0, 0.0, 5.0, 10.0, 20.0, 30.0] {
            let t0 = Instant::now();
            let ana = eng.coverage(link, t_db).unwrap();
            let dt = t0.elapsed();
            let mc = montecarlo::estimate::coverage_from_samples(&samples, aerolay::channel::db_to_lin(t_db));
            let ci = 1.96 * (mc * (1.0 - mc) / drops as f64).sqrt();
            println!("  T={t_db:>5} dB  ana={ana:.4}  mc={mc:.4} (±{ci:.4})  gap={:+.4}  [{dt:?}]", ana - mc);
        }
    }
}
