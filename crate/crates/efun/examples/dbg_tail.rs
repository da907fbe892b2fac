use xlog::kernels::log1p_exp;
use xlog::{Round, XReal};
fn xr(v: f64) -> XReal { XReal::from_f64(v, 53).unwrap() }
fn main() {
    let log_r = xr(2f64.powi(6) * 10f64.ln() - 16f64.ln() - 0.1);
    for k in 0..=10 {
        let a = xr(2f64.powi(k) * 10f64.ln());
        let l = log_r.sub_rm(&a, 53, Round::Floor);
        let lo = log1p_exp(&l, 53, Round::Floor);
        let hi = log1p_exp(&l, 53, Round::Ceil);
        println!("k={k} L={:.4} softplus=[{:.6e}, {:.6e}]", l.to_f64(), lo.to_f64(), hi.to_f64());
    }
}
