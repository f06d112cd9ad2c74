//! Session timing: first breakpoint statistics, the elapsed time power law
//! and a control versus experiment comparison.

use swarm_debugging::metrics::*;
use swarm_debugging::{fixtures, QueryFilter};

fn main() -> swarm_debugging::Result<()> {
    let store = fixtures::study1().load()?;
    let snap = store.snapshot();
    let metrics = all_session_metrics(&snap, &QueryFilter::all());
    let m = &metrics[0];
    println!("session {}: et {} ms, first breakpoint after {:?} ms, mfb {:?}", m.session_id, m.et, m.ef, m.mfb.map(|f| f.value()));

    let stats = first_breakpoint_stats(&metrics)?;
    println!("mean mfb {:.2} (sd {:.2}) over {} sessions", stats.mean_mfb, stats.sd_mfb, stats.n);
    elapsed_by_task_csv(&stats, std::io::stdout())?;

    let fit = fit_power_law(&fit_points(&metrics))?;
    println!("y = {:.1} / x^{:.2}, rho {:.2}", fit.alpha, fit.beta, fit.rho);

    let eval = fixtures::table10().load()?;
    let compared = compare_groups_by_task(&eval.snapshot(), &QueryFilter::all(), "control", "experiment")?;
    comparison_csv(&compared, std::io::stdout())?;
    Ok(())
}
