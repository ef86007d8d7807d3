//! Shared inputs for the benchmarks under `benches/`.

use presstype_core::{generate_session, EngineConfig, MotorModelParams, PressureSample, Symbol};

/// A simulated typing session cycling through every symbol of the default
/// layout, `rounds` times.
pub fn typing_session(rounds: usize) -> (EngineConfig, Vec<PressureSample>) {
    let cfg = EngineConfig::default();
    let mut samples: Vec<PressureSample> = Vec::new();
    for round in 0..rounds {
        for (i, &target) in cfg.layout.symbols().iter().enumerate() {
            let params = MotorModelParams {
                target,
                seed: (round * 1000 + i) as u64,
                ..Default::default()
            };
            let offset = samples.last().map_or(0, |s| s.t.as_micros() + 13_889);
            let trace = generate_session(&params, &cfg.layout, &cfg.remap, 1).expect("valid params");
            samples.extend(trace.into_iter().map(|mut s| {
                s.t = s.t.saturating_add_micros(offset);
                s
            }));
        }
    }
    (cfg, samples)
}

pub fn default_target() -> Symbol {
    Symbol::Char('M')
}

#[cfg(test)]
mod tests {
    #[test]
    fn session_is_ordered() {
        let (_, samples) = super::typing_session(2);
        assert!(samples.windows(2).all(|w| w[0].t < w[1].t));
    }
}
