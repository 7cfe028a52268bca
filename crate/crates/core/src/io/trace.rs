//! CSV form of an approximation trace.

use std::fmt::Write;

use crate::universal::ApproxTrace;

pub const TRACE_COLUMNS: &str = "q,n_q,err_mu,bound_mu,err_rect_max,err_sph_max,bound_ps,status";

const TRACE_LEGEND: &str = "# q: step; n_q: selected block; err_mu: weighted L1 error of the subseries after step q; \
bound_mu = 2*4^-q; err_rect_max / err_sph_max: largest weighted error over rectangular / spherical partial sums \
inside block n_q; bound_ps = 21*4^-q; status: verified when every error is below its bound";

pub fn trace_csv(trace: &ApproxTrace) -> String {
    let mut out = String::new();
    writeln!(out, "{TRACE_LEGEND}").unwrap();
    writeln!(out, "{TRACE_COLUMNS}").unwrap();
    for r in &trace.rows {
        writeln!(
            out,
            "{},{},{:e},{:e},{:e},{:e},{:e},{}",
            r.q, r.n_q, r.err_mu, r.bound_mu, r.err_rect_max, r.err_sph_max, r.bound_ps, r.status
        )
        .unwrap();
    }
    if let Some(u) = &trace.unreached {
        writeln!(
            out,
            "# stopped at step {}: best residual {:e} not below {:e}",
            u.step, u.best_residual, u.bound
        )
        .unwrap();
    }
    out
}
