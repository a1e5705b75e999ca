//! The builtin `g` grammar: `exp`, `abs`, `poly:c0,c1,...`, `gegenbauer:k`,
//! `runge:a`.

use dunkl_core::field::{parse_rational, Field, Rational};
use dunkl_core::gegenbauer::UnivariateFn;

use crate::error::{CliError, CliResult};
use crate::system::parse_rational_list;

/// Parses a `g` specification. `gegenbauer:k` is built for `lambda`, which
/// must then be known.
pub fn parse_g(spec: &str, lambda: Option<&Rational>) -> CliResult<UnivariateFn> {
    let spec = spec.trim();
    let (head, arg) = match spec.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (spec, None),
    };
    let need = |what: &str| arg.ok_or_else(|| CliError::Config(format!("g = {head} needs an argument ({head}:{what})")));
    match head {
        "exp" | "abs" if arg.is_some() => Err(CliError::Config(format!("g = {head} takes no argument"))),
        "exp" => Ok(UnivariateFn::exp()),
        "abs" => Ok(UnivariateFn::abs()),
        "poly" => {
            let c = parse_rational_list(need("c0,c1,...")?)?;
            if c.is_empty() {
                return Err(CliError::Config("poly: needs at least one coefficient".into()));
            }
            Ok(UnivariateFn::polynomial(c).labelled(spec))
        }
        "gegenbauer" => {
            let k: usize = need("k")?.parse().map_err(|_| CliError::Config(format!("bad degree in {spec:?}")))?;
            let lambda = lambda.ok_or_else(|| CliError::Config("gegenbauer:k needs lambda".into()))?;
            Ok(UnivariateFn::gegenbauer(k, lambda).labelled(spec))
        }
        "runge" => {
            let a = parse_rational(need("a")?).ok_or_else(|| CliError::Config(format!("bad parameter in {spec:?}")))?;
            Ok(UnivariateFn::runge(Field::to_f64(&a)).labelled(spec))
        }
        _ => Err(CliError::Config(format!("unknown g {spec:?} (expected exp, abs, poly:..., gegenbauer:k or runge:a)"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dunkl_core::field::rational;

    #[test]
    fn builtins_evaluate() {
        assert!((parse_g("exp", None).unwrap().eval(1.0) - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(parse_g("abs", None).unwrap().kinks(), &[0.0]);
        let p = parse_g("poly:0,0,0,1", None).unwrap();
        assert_eq!(p.exact_degree(), Some(3));
        assert_eq!(p.eval(0.5), 0.125);
        assert_eq!(parse_g("runge:5", None).unwrap().eval(0.2), 0.5);
    }

    #[test]
    fn gegenbauer_needs_lambda() {
        assert!(parse_g("gegenbauer:3", None).is_err());
        let c = parse_g("gegenbauer:2", Some(&rational(1, 1))).unwrap();
        // C_2^1(t) = 4t^2 - 1
        assert_eq!(c.eval(0.5), 0.0);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "sin", "poly:", "poly:1,a", "gegenbauer:x", "exp:2", "runge"] {
            assert!(parse_g(s, Some(&rational(1, 1))).is_err(), "{s}");
        }
    }
}
