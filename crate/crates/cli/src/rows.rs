//! Bound-verdict rows attached to protocol runs.

use gkp_core::bounds::{
    comb_error_bound, effective_squeezing_bounds, gauss_bounds, gkp_bounds, lower_bounds,
    BoundReport,
};
use gkp_core::protocols::{GkpOutput, ProtocolReport};

/// Operation-count envelope `C1 log(1/kappa) + C2 log(1/delta)` recorded for
/// this construction. The slope in `log(1/kappa)` is dominated by the five
/// gates per doubling round times `n <= (4/3) log2(1/kappa)`, plus the
/// envelope squeezer chain and the correction budget; the constants below
/// cover the whole admissible desk range `kappa <= 0.21`, `delta < 1/4`.
pub const OP_COUNT_C1: f64 = 23.0;
pub const OP_COUNT_C2: f64 = 4.0;

pub fn comb_rows(r: &ProtocolReport) -> Vec<BoundReport> {
    let delta = r.delta;
    let params = format!("delta={delta} n={}", r.rounds.unwrap_or(0));
    let floor = 1.0 - comb_error_bound(delta) / 2.0;
    vec![BoundReport::lower(
        "comb.fidelity_floor",
        params,
        r.fidelity_to_target,
        floor,
        0.0,
        true,
    )]
}

/// Rows for a Gaussification run with input inaccuracy `xi` (0 for the exact
/// truncated comb) and measured conditional overlap, when available.
pub fn gaussify_rows(
    kappa: f64,
    delta: f64,
    l: u32,
    xi: f64,
    p_acc: f64,
    fidelity: f64,
    conditional_overlap: Option<f64>,
) -> Vec<BoundReport> {
    let params = format!("kappa={kappa} delta={delta} L={l} xi={xi:.6}");
    let g = gauss_bounds(kappa, delta, l, xi);
    let mut rows = vec![
        BoundReport::lower("gaussify.p_acc_floor", params.clone(), p_acc, g.p_lb, 0.0, true),
        BoundReport::lower(
            "gaussify.fidelity_floor[statement-constants]",
            params.clone(),
            fidelity,
            1.0 - g.err_ub_statement / 2.0,
            0.0,
            true,
        ),
        BoundReport::lower(
            "gaussify.fidelity_floor[proof-constants]",
            params.clone(),
            fidelity,
            1.0 - g.err_ub_proof / 2.0,
            0.0,
            true,
        ),
    ];
    if let Some(c) = conditional_overlap {
        let k2l = kappa * kappa * l as f64;
        let rhs = 1.0 - 1.5 * k2l - 4.0 * (-k2l * l as f64 / 32.0).exp();
        rows.push(BoundReport::lower(
            "gaussify.conditional_overlap_floor",
            params,
            c,
            rhs,
            0.0,
            true,
        ));
    }
    rows
}

pub fn gkp_rows(out: &GkpOutput) -> Vec<BoundReport> {
    let r = &out.report;
    let kappa = r.kappa.unwrap();
    let delta = r.delta;
    let l = r.peaks.unwrap();
    let params = format!("kappa={kappa} delta={delta} L={l}");
    let p_acc = r.p_acc.unwrap_or(0.0);
    let g = gkp_bounds(kappa, delta);

    let mut rows = vec![
        BoundReport::lower(
            "gkp.p_acc_floor",
            params.clone(),
            p_acc,
            g.p_lb,
            0.0,
            g.preconditions_met,
        ),
        BoundReport::lower(
            "gkp.fidelity_floor",
            params.clone(),
            r.fidelity_to_target,
            1.0 - g.err_ub / 2.0,
            0.0,
            true,
        ),
    ];
    rows.extend(gaussify_rows(
        kappa,
        delta,
        l,
        out.xi,
        p_acc,
        r.fidelity_to_target,
        None,
    ));

    let (dp_bound, dq_bound) = effective_squeezing_bounds(kappa, delta);
    rows.push(BoundReport::upper(
        "gkp.delta_p_ceiling",
        params.clone(),
        r.delta_p.unwrap_or(f64::INFINITY),
        dp_bound,
        f64::INFINITY,
        true,
    ));
    rows.push(BoundReport::upper(
        "gkp.delta_q_ceiling",
        params.clone(),
        r.delta_q.unwrap_or(f64::INFINITY),
        dq_bound,
        f64::INFINITY,
        true,
    ));

    // Converse: the measured count must clear the heralded floor whenever the
    // floor's preconditions hold (they do not at desk scale; log it anyway).
    let eps = 2.0 * (1.0 - r.fidelity_to_target).max(0.0).sqrt();
    if let Ok(lb) = lower_bounds(kappa, delta, p_acc, eps) {
        rows.push(BoundReport::lower(
            "gkp.count_above_heralded_floor",
            params.clone(),
            r.op_count.total as f64,
            lb.heralded_lb,
            0.0,
            lb.heralded_precondition_met,
        ));
    }

    // Upper envelope with the repository's recorded constants.
    let envelope = OP_COUNT_C1 * (1.0 / kappa).ln() + OP_COUNT_C2 * (1.0 / delta).ln();
    rows.push(BoundReport::upper(
        "gkp.count_envelope",
        params,
        r.op_count.total as f64,
        envelope,
        f64::INFINITY,
        true,
    ));
    rows
}
