//! Synthetic data through the full analysis, as the command-line tool runs it.

use physarum_bounds::pipeline::{cmd_analyze, cmd_synth, RunConfig, SyntheticSpec};

fn main() -> physarum_bounds::Result<()> {
    let root = std::env::temp_dir().join(format!("physarum-bounds-example-{}", std::process::id()));
    let csv = cmd_synth(&SyntheticSpec::default(), 24.0, &root.join("data"))?;
    let cfg = RunConfig {
        input: Some(csv),
        output_dir: root.join("out"),
        ..RunConfig::default()
    };
    let out = cmd_analyze(&cfg)?;
    for g in &out.groups {
        println!("group {} ({} samples), area steady state at {:?} h", g.group, g.samples.len(), g.t_ness_area);
        for b in &g.bounds {
            if let Some(Some(v)) = b.geo_mean.last() {
                println!("  {:>6}: geometric mean {v:.3e} ops at 24 h", b.kind);
            }
        }
    }
    for a in &out.allometry {
        println!("allometric slope {:.3} (R² {:.3})", a.slope, a.r_squared);
    }
    println!("reports written to {}", cfg.output_dir.display());
    Ok(())
}
