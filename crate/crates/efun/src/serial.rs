//! Structured text serialization of function specs.
//!
//! Line-oriented key/value format with nested blocks; values that must
//! round-trip identically use the bit-exact hexadecimal form. The schema:
//!
//! ```text
//! funspec v1
//! product
//!   power <u32>
//!   zero <hex log-modulus> <multiplicity>
//!   tail <hex first-dropped> <hex cutoff> <branches>   # optional
//! end
//! ```
//!
//! `mixed` blocks contain `term <amp-lo> <amp-hi> <scale-lo> <scale-hi>
//! <m-lo> <m-hi> <sqrt-lo> <sqrt-hi>`, a nested `product … end` for the
//! product part, and `tail-dominated <bool>`. `exp` is a bare block.
//! `perturbed` holds `coeff <hex>` lines and a nested spec.

use crate::spec::{FunctionSpec, MixedSumSpec, MixedTerm, ProductSpec, TailInfo, ZeroTerm};
use crate::EfunError;
use xlog::convert::{parse_hex_exact, to_hex_exact};
use xlog::{XBound, XInterval};

fn iv_to_str(iv: &XInterval) -> String {
    let b = |x: &XBound| match x {
        XBound::NegInf => "-inf".to_string(),
        XBound::PosInf => "+inf".to_string(),
        XBound::Finite(v) => to_hex_exact(v),
    };
    format!("{} {}", b(iv.lo()), b(iv.hi()))
}

fn iv_from_strs(lo: &str, hi: &str, prec: u32) -> Result<XInterval, EfunError> {
    let p = |s: &str| -> Result<XBound, EfunError> {
        Ok(match s {
            "-inf" => XBound::NegInf,
            "+inf" => XBound::PosInf,
            _ => XBound::Finite(parse_hex_exact(s, prec)?),
        })
    };
    Ok(XInterval::new(p(lo)?, p(hi)?))
}

pub fn to_text(spec: &FunctionSpec) -> String {
    let mut out = String::from("funspec v1\n");
    emit(spec, &mut out);
    out
}

fn emit(spec: &FunctionSpec, out: &mut String) {
    match spec {
        FunctionSpec::Product(p) => emit_product(p, out),
        FunctionSpec::Exp => out.push_str("exp\nend\n"),
        FunctionSpec::Mixed(m) => {
            out.push_str("mixed\n");
            for t in &m.terms {
                out.push_str(&format!(
                    "  term {} {} {} {}\n",
                    iv_to_str(&t.log_amplitude),
                    iv_to_str(&t.log_scale),
                    iv_to_str(&t.m),
                    iv_to_str(&t.sqrt_log_scale),
                ));
            }
            out.push_str(&format!("  tail-dominated {}\n", m.tail_dominated_by_last));
            emit_product(&m.product_part, out);
            out.push_str("end\n");
        }
        FunctionSpec::Perturbed { base, poly } => {
            out.push_str("perturbed\n");
            for c in poly {
                out.push_str(&format!("  coeff {}\n", to_hex_exact(c)));
            }
            emit(base, out);
            out.push_str("end\n");
        }
    }
}

fn emit_product(p: &ProductSpec, out: &mut String) {
    out.push_str("product\n");
    out.push_str(&format!("  power {}\n", p.power_at_zero));
    for z in &p.zeros {
        out.push_str(&format!(
            "  zero {} {}\n",
            to_hex_exact(&z.log_modulus),
            z.multiplicity
        ));
    }
    if let Some(t) = &p.tail {
        out.push_str(&format!(
            "  tail {} {} {}\n",
            to_hex_exact(&t.first_dropped_log),
            to_hex_exact(&t.log_cutoff),
            t.branches
        ));
    }
    out.push_str("end\n");
}

pub fn from_text(text: &str, prec: u32) -> Result<FunctionSpec, EfunError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| bad("empty document"))?;
    if header != "funspec v1" {
        return Err(bad(&format!("unknown header {header:?}")));
    }
    let all: Vec<&str> = lines.collect();
    let (spec, used) = parse_block(&all, prec)?;
    if used != all.len() {
        return Err(bad("trailing content after spec"));
    }
    Ok(spec)
}

fn bad(msg: &str) -> EfunError {
    EfunError::Domain(format!("funspec parse: {msg}"))
}

fn parse_block(lines: &[&str], prec: u32) -> Result<(FunctionSpec, usize), EfunError> {
    let head = *lines.first().ok_or_else(|| bad("missing block"))?;
    match head {
        "exp" => {
            if lines.get(1) != Some(&"end") {
                return Err(bad("exp block must be empty"));
            }
            Ok((FunctionSpec::Exp, 2))
        }
        "product" => {
            let (p, used) = parse_product(lines, prec)?;
            Ok((FunctionSpec::Product(p), used))
        }
        "mixed" => {
            let mut i = 1;
            let mut terms = Vec::new();
            let mut tail_dominated = false;
            loop {
                let l = *lines.get(i).ok_or_else(|| bad("unterminated mixed block"))?;
                if let Some(rest) = l.strip_prefix("term ") {
                    let f: Vec<&str> = rest.split_whitespace().collect();
                    if f.len() != 8 {
                        return Err(bad("term needs 8 fields"));
                    }
                    terms.push(MixedTerm {
                        log_amplitude: iv_from_strs(f[0], f[1], prec)?,
                        log_scale: iv_from_strs(f[2], f[3], prec)?,
                        m: iv_from_strs(f[4], f[5], prec)?,
                        sqrt_log_scale: iv_from_strs(f[6], f[7], prec)?,
                    });
                    i += 1;
                } else if let Some(rest) = l.strip_prefix("tail-dominated ") {
                    tail_dominated = rest
                        .parse()
                        .map_err(|_| bad("tail-dominated expects a bool"))?;
                    i += 1;
                } else if l == "product" {
                    let (p, used) = parse_product(&lines[i..], prec)?;
                    i += used;
                    if lines.get(i) != Some(&"end") {
                        return Err(bad("mixed block not closed"));
                    }
                    return Ok((
                        FunctionSpec::Mixed(MixedSumSpec {
                            terms,
                            product_part: p,
                            tail_dominated_by_last: tail_dominated,
                        }),
                        i + 1,
                    ));
                } else {
                    return Err(bad(&format!("unexpected line in mixed block: {l:?}")));
                }
            }
        }
        "perturbed" => {
            let mut i = 1;
            let mut poly = Vec::new();
            while let Some(rest) = lines.get(i).and_then(|l| l.strip_prefix("coeff ")) {
                poly.push(parse_hex_exact(rest.trim(), prec)?);
                i += 1;
            }
            let (base, used) = parse_block(&lines[i..], prec)?;
            i += used;
            if lines.get(i) != Some(&"end") {
                return Err(bad("perturbed block not closed"));
            }
            Ok((FunctionSpec::Perturbed { base: Box::new(base), poly }, i + 1))
        }
        _ => Err(bad(&format!("unknown block {head:?}"))),
    }
}

fn parse_product(lines: &[&str], prec: u32) -> Result<(ProductSpec, usize), EfunError> {
    debug_assert_eq!(lines[0], "product");
    let mut i = 1;
    let mut power = 0u32;
    let mut zeros = Vec::new();
    let mut tail = None;
    loop {
        let l = *lines.get(i).ok_or_else(|| bad("unterminated product block"))?;
        if l == "end" {
            return Ok((ProductSpec { power_at_zero: power, zeros, tail }, i + 1));
        } else if let Some(rest) = l.strip_prefix("power ") {
            power = rest.parse().map_err(|_| bad("bad power"))?;
        } else if let Some(rest) = l.strip_prefix("zero ") {
            let f: Vec<&str> = rest.split_whitespace().collect();
            if f.len() != 2 {
                return Err(bad("zero needs 2 fields"));
            }
            zeros.push(ZeroTerm {
                log_modulus: parse_hex_exact(f[0], prec)?,
                multiplicity: f[1].parse().map_err(|_| bad("bad multiplicity"))?,
            });
        } else if let Some(rest) = l.strip_prefix("tail ") {
            let f: Vec<&str> = rest.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad("tail needs 3 fields"));
            }
            tail = Some(TailInfo {
                first_dropped_log: parse_hex_exact(f[0], prec)?,
                log_cutoff: parse_hex_exact(f[1], prec)?,
                branches: f[2].parse().map_err(|_| bad("bad branches"))?,
            });
        } else {
            return Err(bad(&format!("unexpected line in product block: {l:?}")));
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use xlog::Round;

    fn ln_x(v: f64) -> XReal {
        XReal::from_f64(v, 53).unwrap().ln_rm(53, Round::Nearest).unwrap()
    }

    #[test]
    fn product_roundtrip_identical() {
        let spec = FunctionSpec::Product(ProductSpec::truncated(
            2,
            vec![
                ZeroTerm { log_modulus: ln_x(10.0), multiplicity: 1 },
                ZeroTerm { log_modulus: ln_x(1e4), multiplicity: 3 },
            ],
            TailInfo { first_dropped_log: ln_x(1e9), log_cutoff: ln_x(1e9 / 16.0), branches: 1 },
        ));
        let text = to_text(&spec);
        let back = from_text(&text, 53).unwrap();
        assert_eq!(back, spec);
        assert_eq!(to_text(&back), text, "serialization must be canonical");
    }

    #[test]
    fn perturbed_and_exp_roundtrip() {
        let spec = FunctionSpec::Perturbed {
            base: Box::new(FunctionSpec::Exp),
            poly: vec![XReal::from_f64(5.0, 53).unwrap(), XReal::zero(), XReal::zero(), XReal::one(53)],
        };
        let text = to_text(&spec);
        assert_eq!(from_text(&text, 53).unwrap(), spec);
    }

    #[test]
    fn mixed_roundtrip() {
        let term = MixedTerm {
            log_amplitude: XInterval::point(ln_x(100.0)),
            log_scale: XInterval::finite(ln_x(50.0), ln_x(51.0)),
            m: XInterval::point(XReal::from_f64(16.0, 53).unwrap()),
            sqrt_log_scale: XInterval::point(XReal::from_f64(2.0, 53).unwrap()),
        };
        let spec = FunctionSpec::Mixed(MixedSumSpec {
            terms: vec![term],
            product_part: ProductSpec::polynomial(0, vec![]),
            tail_dominated_by_last: true,
        });
        let text = to_text(&spec);
        assert_eq!(from_text(&text, 53).unwrap(), spec);
    }

    #[test]
    fn rejects_garbage() {
        assert!(from_text("nonsense", 53).is_err());
        assert!(from_text("funspec v1\nproduct\n  power x\nend\n", 53).is_err());
        assert!(from_text("funspec v1\nproduct\n  power 1\nend\nextra\n", 53).is_err());
    }
}
