//! Root systems chosen from configuration, each built over the coefficient
//! field in which it is exact.

use dunkl_core::field::{parse_rational, Field, QSqrt3, Rational};
use dunkl_core::roots::RootSystem;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Z2 { d: usize },
    Dihedral { m: usize },
    Custom { dim: usize, roots: Vec<Vec<Rational>> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub family: FamilySpec,
    pub kappa: Vec<Rational>,
}

/// A root system in whichever field represents it exactly (`f64` for
/// dihedral groups with irrational roots other than `m = 3, 6`).
#[derive(Clone, Debug)]
pub enum AnySystem {
    Rational(RootSystem<Rational>),
    Sqrt3(RootSystem<QSqrt3>),
    Float(RootSystem<f64>),
}

/// Runs `$body` with `$s` bound to the concrete `RootSystem<F>`.
#[macro_export]
macro_rules! with_system {
    ($sys:expr, $s:ident => $body:expr) => {
        match $sys {
            $crate::system::AnySystem::Rational($s) => $body,
            $crate::system::AnySystem::Sqrt3($s) => $body,
            $crate::system::AnySystem::Float($s) => $body,
        }
    };
}

pub fn parse_rational_list(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_rational(t).ok_or_else(|| CliError::Config(format!("not a rational number: {t:?}"))))
        .collect()
}

/// `"1,0;-1,0;0,1;0,-1"` into root vectors.
pub fn parse_roots(s: &str) -> CliResult<Vec<Vec<Rational>>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_rational_list).collect()
}

impl SystemSpec {
    pub fn new(family: &str, d: Option<usize>, m: Option<usize>, kappa: Vec<Rational>, roots: Option<Vec<Vec<Rational>>>) -> CliResult<Self> {
        let family = match family.to_ascii_lowercase().as_str() {
            "z2" => FamilySpec::Z2 { d: d.ok_or_else(|| CliError::Config("family z2 needs --d".into()))? },
            "dihedral" | "i2" => FamilySpec::Dihedral { m: m.ok_or_else(|| CliError::Config("family dihedral needs --m".into()))? },
            "custom" => {
                let roots = roots.ok_or_else(|| CliError::Config("family custom needs --roots".into()))?;
                let dim = d.or_else(|| roots.first().map(Vec::len)).unwrap_or(0);
                FamilySpec::Custom { dim, roots }
            }
            other => return Err(CliError::Config(format!("unknown family {other:?} (expected z2, dihedral or custom)"))),
        };
        Ok(Self { family, kappa })
    }

    pub fn dim(&self) -> usize {
        match &self.family {
            FamilySpec::Z2 { d } => *d,
            FamilySpec::Dihedral { .. } => 2,
            FamilySpec::Custom { dim, .. } => *dim,
        }
    }

    pub fn name(&self) -> String {
        match &self.family {
            FamilySpec::Z2 { d } => format!("Z2^{d}"),
            FamilySpec::Dihedral { m } => format!("I2({m})"),
            FamilySpec::Custom { roots, .. } => format!("custom({} roots)", roots.len()),
        }
    }

    fn kappas_for_dihedral(&self, m: usize) -> Vec<Rational> {
        // one value for an even m means both classes share it
        if m.is_multiple_of(2) && self.kappa.len() == 1 {
            vec![self.kappa[0].clone(), self.kappa[0].clone()]
        } else {
            self.kappa.clone()
        }
    }

    pub fn build(&self) -> CliResult<AnySystem> {
        Ok(match &self.family {
            FamilySpec::Z2 { d } => {
                if self.kappa.len() != *d {
                    return Err(CliError::Config(format!("Z2^{d} needs {d} multiplicities, got {}", self.kappa.len())));
                }
                AnySystem::Rational(RootSystem::z2(&self.kappa)?)
            }
            FamilySpec::Dihedral { m } => {
                let k = self.kappas_for_dihedral(*m);
                match m {
                    2 | 4 => AnySystem::Rational(RootSystem::dihedral(*m, &k)?),
                    3 | 6 => AnySystem::Sqrt3(RootSystem::dihedral(*m, &k)?),
                    _ => AnySystem::Float(RootSystem::dihedral(*m, &k)?),
                }
            }
            FamilySpec::Custom { dim, roots } => AnySystem::Rational(RootSystem::custom(*dim, roots.clone(), self.kappa.clone())?),
        })
    }
}

impl AnySystem {
    pub fn dim(&self) -> usize {
        with_system!(self, s => s.dim())
    }

    /// Whether polynomial algebra over this system is exact.
    pub fn is_exact(&self) -> bool {
        !matches!(self, AnySystem::Float(_))
    }
}

/// Root vector as strings in its own field.
pub fn vector_strings<F: Field>(v: &[F]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dunkl_core::field::rational;

    #[test]
    fn families_pick_their_field() {
        let k = vec![rational(1, 2)];
        let s = SystemSpec::new("dihedral", None, Some(3), k.clone(), None).unwrap();
        assert!(matches!(s.build().unwrap(), AnySystem::Sqrt3(_)));
        let s = SystemSpec::new("dihedral", None, Some(4), k.clone(), None).unwrap();
        assert!(matches!(s.build().unwrap(), AnySystem::Rational(_)));
        let s = SystemSpec::new("dihedral", None, Some(5), k, None).unwrap();
        let sys = s.build().unwrap();
        assert!(!sys.is_exact());
    }

    #[test]
    fn z2_needs_matching_kappa_count() {
        let s = SystemSpec::new("z2", Some(3), None, vec![rational(1, 2)], None).unwrap();
        assert!(s.build().is_err());
        assert!(SystemSpec::new("z2", None, None, vec![], None).is_err());
        assert!(SystemSpec::new("b3", Some(3), None, vec![], None).is_err());
    }

    #[test]
    fn parses_root_lists() {
        let r = parse_roots("1,0; -1,0;0,1/2").unwrap();
        assert_eq!(r[2], vec![rational(0, 1), rational(1, 2)]);
        assert!(parse_rational_list("1/2,x").is_err());
    }
}
