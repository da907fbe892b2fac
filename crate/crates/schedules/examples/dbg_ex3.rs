use schedules::example3::*;
use xlog::{Round, XReal};
fn xr(v: f64) -> XReal { XReal::from_f64(v, 53).unwrap() }
fn main() {
    let s = generate_example3(&xr(49.0), 60, &xr(2.0), &xr(0.55), &xr(0.95), 4, SCHEDULE_BUDGET_BITS, 53).unwrap();
    for n in [3u32, 4] {
        let r = s.row(n);
        let f = |iv: &xlog::XInterval| -> String {
            match (iv.lo_real(), iv.hi_real()) {
                (Some(l), Some(h)) => format!("[2^{}..2^{}]",
                    l.exponent().to_string().chars().take(12).collect::<String>(),
                    h.exponent().to_string().chars().take(12).collect::<String>()),
                (Some(l), None) => format!("[2^{}.., +inf)", l.exponent().to_string().chars().take(12).collect::<String>()),
                _ => "?".into(),
            }
        };
        println!("n={} sat={} logS={} m={} logR={} beta={} logr={}",
            n, r.m_saturated, f(&r.log_s), f(&r.m), f(&r.log_r_outer),
            xlog::convert::to_decimal(&r.beta.midpoint().unwrap(), 8), f(&r.log_r_inner));
    }
}
