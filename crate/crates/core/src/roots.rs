//! Root systems, multiplicity functions and finite reflection groups.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{rational, Field, Rational};
use crate::linalg::Matrix;

/// Default cap on the enumerated group order.
pub const DEFAULT_GROUP_CAP: usize = 1024;

/// Which standard construction produced a root system. Quadrature is only
/// available for the named families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `{±e_i}` in `R^d`.
    Z2 { d: usize },
    /// Dihedral `I2(m)`: roots at angles `j*pi/m`.
    Dihedral { m: usize },
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem<F> {
    dim: usize,
    roots: Vec<Vec<F>>,
    positive: Vec<usize>,
    kappa: Vec<Rational>,
    family: Family,
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + &(x.clone() * y))
}

fn vec_eq<F: Field>(a: &[F], b: &[F]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.clone() - y).is_negligible())
}

fn neg_vec<F: Field>(a: &[F]) -> Vec<F> {
    a.iter().map(|x| -x.clone()).collect()
}

fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(Field::is_negligible)
}

fn proportional<F: Field>(a: &[F], b: &[F]) -> bool {
    (0..a.len()).all(|i| {
        (i + 1..a.len()).all(|j| (a[i].clone() * &b[j] - &(a[j].clone() * &b[i])).is_negligible())
    })
}

/// The reflection `x - 2 <x,v>/<v,v> v`.
pub fn reflect<F: Field>(v: &[F], x: &[F]) -> Result<Vec<F>> {
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: v.len(), found: x.len() });
    }
    if is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    let factor = F::from_int(2) * &dot(x, v) / &dot(v, v);
    Ok(x.iter().zip(v).map(|(xi, vi)| xi.clone() - &(factor.clone() * vi)).collect())
}

/// Matrix of the reflection along `v`; row `k` gives `(sigma_v x)_k`.
pub fn reflection_matrix<F: Field>(v: &[F]) -> Result<Vec<Vec<F>>> {
    let d = v.len();
    (0..d)
        .map(|j| {
            let mut e = vec![F::zero(); d];
            e[j] = F::one();
            reflect(v, &e)
        })
        .collect::<Result<Vec<_>>>()
        .map(|cols| (0..d).map(|k| (0..d).map(|j| cols[j][k].clone()).collect()).collect())
}

/// Weights of the functional that picks the positive subsystem:
/// `phi(v) = sum_i v_i / 1009^i`.
fn positivity_functional<F: Field>(dim: usize) -> Vec<F> {
    let mut w = Vec::with_capacity(dim);
    let mut cur = Rational::one();
    for _ in 0..dim {
        w.push(F::from_rational(&cur));
        cur /= rational(1009, 1);
    }
    w
}

impl<F: Field> RootSystem<F> {
    /// Root system from an explicit list. Nothing is validated here; see
    /// [`RootSystem::validate`]. Roots on which the positivity functional
    /// vanishes are kept out of `R_+` and reported by validation.
    pub fn custom(dim: usize, roots: Vec<Vec<F>>, kappa: Vec<Rational>) -> Result<Self> {
        if roots.len() != kappa.len() {
            return Err(Error::InvalidParameters(format!(
                "{} roots but {} multiplicities",
                roots.len(),
                kappa.len()
            )));
        }
        Ok(Self::assemble(dim, roots, kappa, Family::Custom))
    }

    fn assemble(dim: usize, roots: Vec<Vec<F>>, kappa: Vec<Rational>, family: Family) -> Self {
        let phi = positivity_functional::<F>(dim);
        let positive = roots
            .iter()
            .enumerate()
            .filter(|(_, v)| v.len() == dim && dot(v, &phi).sign() > 0)
            .map(|(i, _)| i)
            .collect();
        Self { dim, roots, positive, kappa, family }
    }

    /// `Z2^d` with roots `±e_i` and multiplicity `kappas[i]` on `±e_i`.
    pub fn z2(kappas: &[Rational]) -> Result<Self> {
        let d = kappas.len();
        if d < 2 {
            return Err(Error::InvalidParameters(format!("Z2^d needs d >= 2, got {d}")));
        }
        check_nonnegative(kappas)?;
        let mut roots = Vec::new();
        let mut kappa = Vec::new();
        for (i, k) in kappas.iter().enumerate() {
            let mut e = vec![F::zero(); d];
            e[i] = F::one();
            roots.push(e.clone());
            roots.push(neg_vec(&e));
            kappa.push(k.clone());
            kappa.push(k.clone());
        }
        Ok(Self::assemble(d, roots, kappa, Family::Z2 { d }))
    }

    /// Dihedral `I2(m)`. `kappas` has one value for odd `m`; for even `m`
    /// the first value belongs to the class of `e1` (even `j`) and the
    /// second to the other class.
    pub fn dihedral(m: usize, kappas: &[Rational]) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameters(format!("I2(m) needs m >= 2, got {m}")));
        }
        let expected = if m.is_multiple_of(2) { 2 } else { 1 };
        if kappas.len() != expected {
            return Err(Error::InvalidParameters(format!(
                "I2({m}) takes {expected} multiplicity value(s), got {}",
                kappas.len()
            )));
        }
        check_nonnegative(kappas)?;
        let mut roots = Vec::new();
        let mut kappa = Vec::new();
        for j in 0..m {
            let dir = F::dihedral_direction(m, j).ok_or_else(|| {
                Error::Unsupported(format!("I2({m}) roots are not representable in this field"))
            })?;
            let v: Vec<F> = dir.to_vec();
            let k = kappas[if m.is_multiple_of(2) { j % 2 } else { 0 }].clone();
            roots.push(neg_vec(&v));
            roots.push(v);
            kappa.push(k.clone());
            kappa.push(k);
        }
        Ok(Self::assemble(2, roots, kappa, Family::Dihedral { m }))
    }

    /// Same roots and multiplicities with `R_+` replaced by `-R_+`.
    pub fn with_negated_positive(&self) -> Self {
        let positive = self
            .positive
            .iter()
            .filter_map(|&i| self.index_of(&neg_vec(&self.roots[i])))
            .collect();
        Self { positive, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn roots(&self) -> &[Vec<F>] {
        &self.roots
    }

    pub fn kappas(&self) -> &[Rational] {
        &self.kappa
    }

    /// `(root, kappa)` for every root in `R_+`.
    pub fn positive_roots(&self) -> impl Iterator<Item = (&[F], &Rational)> {
        self.positive.iter().map(move |&i| (self.roots[i].as_slice(), &self.kappa[i]))
    }

    pub fn positive_count(&self) -> usize {
        self.positive.len()
    }

    pub fn index_of(&self, v: &[F]) -> Option<usize> {
        self.roots.iter().position(|r| vec_eq(r, v))
    }

    pub fn kappa_is_zero(&self) -> bool {
        self.kappa.iter().all(Zero::is_zero)
    }

    /// `sum_{v in R_+} kappa(v)`.
    pub fn kappa_sum(&self) -> Rational {
        self.positive_roots().fold(Rational::zero(), |acc, (_, k)| acc + k)
    }

    /// Every violated axiom, with witnesses. Empty iff the system is valid.
    pub fn validate(&self) -> Vec<Violation<F>> {
        let mut out = Vec::new();
        if self.dim == 0 {
            out.push(Violation::EmptyDimension);
            return out;
        }
        for (i, v) in self.roots.iter().enumerate() {
            if v.len() != self.dim {
                out.push(Violation::WrongLength { root: v.clone() });
            } else if is_zero_vec(v) {
                out.push(Violation::ZeroRoot { index: i });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (i, k) in self.kappa.iter().enumerate() {
            if k.is_negative() {
                out.push(Violation::NegativeKappa { root: self.roots[i].clone() });
            }
        }
        for (i, v) in self.roots.iter().enumerate() {
            let minus = neg_vec(v);
            if self.index_of(&minus).is_none() {
                out.push(Violation::MissingNegative { root: v.clone() });
            }
            for (j, w) in self.roots.iter().enumerate() {
                if j <= i || !proportional(v, w) {
                    continue;
                }
                if vec_eq(v, w) {
                    out.push(Violation::Duplicate { root: v.clone() });
                } else if !vec_eq(&minus, w) {
                    out.push(Violation::ExtraMultiple { root: v.clone(), other: w.clone() });
                }
            }
        }
        for (u_idx, u) in self.roots.iter().enumerate() {
            for (v_idx, v) in self.roots.iter().enumerate() {
                let image = match reflect(u, v) {
                    Ok(x) => x,
                    Err(_) => continue,
                };
                match self.index_of(&image) {
                    None => out.push(Violation::NotClosed {
                        reflector: u.clone(),
                        root: v.clone(),
                        image,
                    }),
                    Some(k) if self.kappa[k] != self.kappa[v_idx] => {
                        out.push(Violation::KappaNotInvariant {
                            reflector: self.roots[u_idx].clone(),
                            root: v.clone(),
                            image,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        let phi = positivity_functional::<F>(self.dim);
        for v in &self.roots {
            if dot(v, &phi).sign() == 0 {
                out.push(Violation::NotSeparated { root: v.clone() });
            }
        }
        out
    }

    /// Closure of the reflections `sigma_v`, `v in R_+`, under composition.
    pub fn generate_group(&self, cap: usize) -> Result<ReflectionGroup<F>> {
        let gens: Vec<Matrix<F>> = self
            .positive
            .iter()
            .map(|&i| reflection_matrix(&self.roots[i]).map(Matrix::from_rows))
            .collect::<Result<_>>()?;
        let mut elements = vec![Matrix::identity(self.dim)];
        let mut frontier = 0;
        while frontier < elements.len() {
            let g = elements[frontier].clone();
            frontier += 1;
            for s in &gens {
                let h = s.mul(&g)?;
                if !elements.iter().any(|e| mat_eq(e, &h)) {
                    if elements.len() == cap {
                        return Err(Error::GroupCapExceeded(cap));
                    }
                    elements.push(h);
                }
            }
        }
        Ok(ReflectionGroup { dim: self.dim, elements })
    }
}

fn check_nonnegative(kappas: &[Rational]) -> Result<()> {
    if let Some(k) = kappas.iter().find(|k| k.is_negative()) {
        return Err(Error::InvalidParameters(format!("multiplicity {k} is negative")));
    }
    Ok(())
}

fn mat_eq<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    (0..a.rows()).all(|i| vec_eq(a.row(i), b.row(i)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation<F> {
    EmptyDimension,
    WrongLength { root: Vec<F> },
    ZeroRoot { index: usize },
    /// `-v` is missing from `R`.
    MissingNegative { root: Vec<F> },
    Duplicate { root: Vec<F> },
    /// `R ∩ Rv` contains something other than `±v`.
    ExtraMultiple { root: Vec<F>, other: Vec<F> },
    /// `sigma_reflector(root) = image` is not a root.
    NotClosed { reflector: Vec<F>, root: Vec<F>, image: Vec<F> },
    NegativeKappa { root: Vec<F> },
    KappaNotInvariant { reflector: Vec<F>, root: Vec<F>, image: Vec<F> },
    /// The positivity functional vanishes on this root.
    NotSeparated { root: Vec<F> },
}

impl<F> Violation<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::EmptyDimension => "empty-dimension",
            Violation::WrongLength { .. } => "wrong-length",
            Violation::ZeroRoot { .. } => "zero-root",
            Violation::MissingNegative { .. } => "axiom1-missing-negative",
            Violation::Duplicate { .. } => "duplicate-root",
            Violation::ExtraMultiple { .. } => "axiom1-extra-multiple",
            Violation::NotClosed { .. } => "axiom2-not-closed",
            Violation::NegativeKappa { .. } => "negative-kappa",
            Violation::KappaNotInvariant { .. } => "kappa-not-invariant",
            Violation::NotSeparated { .. } => "positive-subsystem-not-separated",
        }
    }

    /// Witness vectors in the order they appear in the variant.
    pub fn witnesses(&self) -> Vec<&[F]> {
        match self {
            Violation::EmptyDimension | Violation::ZeroRoot { .. } => Vec::new(),
            Violation::WrongLength { root }
            | Violation::MissingNegative { root }
            | Violation::Duplicate { root }
            | Violation::NegativeKappa { root }
            | Violation::NotSeparated { root } => vec![root.as_slice()],
            Violation::ExtraMultiple { root, other } => vec![root.as_slice(), other.as_slice()],
            Violation::NotClosed { reflector, root, image }
            | Violation::KappaNotInvariant { reflector, root, image } => {
                vec![reflector.as_slice(), root.as_slice(), image.as_slice()]
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReflectionGroup<F> {
    dim: usize,
    elements: Vec<Matrix<F>>,
}

impl<F: Field> ReflectionGroup<F> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Matrix<F>] {
        &self.elements
    }

    /// Apply element `g` to `x`.
    pub fn act(g: &Matrix<F>, x: &[F]) -> Vec<F> {
        (0..g.rows()).map(|i| dot(g.row(i), x)).collect()
    }

    /// Elements that are reflections: involutions with trace `d - 2`.
    pub fn reflection_count(&self) -> usize {
        let id = Matrix::identity(self.dim);
        let target = F::from_int(self.dim as i64 - 2);
        self.elements
            .iter()
            .filter(|g| {
                let sq = g.mul(g).expect("square matrices");
                let trace = (0..self.dim).fold(F::zero(), |acc, i| acc + g.get(i, i));
                mat_eq(&sq, &id) && (trace - &target).is_negligible()
            })
            .count()
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements.iter().all(|b| {
                let ab = a.mul(b).expect("square matrices");
                self.elements.iter().any(|e| mat_eq(e, &ab))
            })
        })
    }

    /// Every element is invertible within the set (orthogonal: `g^T g = I`).
    pub fn has_inverses(&self) -> bool {
        let id = Matrix::identity(self.dim);
        self.elements.iter().all(|g| self.elements.iter().any(|h| mat_eq(&g.mul(h).expect("square"), &id)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QSqrt3;

    fn q(a: i64, b: i64) -> Rational {
        rational(a, b)
    }

    #[test]
    fn reflect_examples() {
        let e1 = [q(1, 1), q(0, 1)];
        assert_eq!(reflect(&e1, &[q(3, 1), q(5, 1)]).unwrap(), vec![q(-3, 1), q(5, 1)]);
        let v = [q(1, 1), q(1, 1)];
        let on_plane = [q(2, 1), q(-2, 1)];
        assert_eq!(reflect(&v, &on_plane).unwrap(), on_plane.to_vec());
        let swap = [q(1, 1), q(-1, 1)];
        assert_eq!(reflect(&swap, &[q(2, 7), q(-5, 3)]).unwrap(), vec![q(-5, 3), q(2, 7)]);
        assert_eq!(reflect(&[q(0, 1), q(0, 1)], &e1), Err(Error::ZeroVector));
    }

    #[test]
    fn z2_has_axis_roots() {
        let r = RootSystem::<Rational>::z2(&[q(1, 2), q(1, 2)]).unwrap();
        assert!(r.validate().is_empty());
        let pos: Vec<Vec<Rational>> = r.positive_roots().map(|(v, _)| v.to_vec()).collect();
        assert_eq!(pos, vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]);
        assert_eq!(r.roots().len(), 4);
    }

    #[test]
    fn i2_2_matches_z2_roots() {
        let a = RootSystem::<Rational>::z2(&[q(1, 2), q(1, 3)]).unwrap();
        let b = RootSystem::<Rational>::dihedral(2, &[q(1, 2), q(1, 3)]).unwrap();
        for v in a.roots() {
            let i = b.index_of(v).expect("root present");
            assert_eq!(b.kappas()[i], a.kappas()[a.index_of(v).unwrap()]);
        }
        assert_eq!(a.roots().len(), b.roots().len());
    }

    #[test]
    fn group_orders_by_closure() {
        let z = RootSystem::<Rational>::z2(&[q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(z.generate_group(DEFAULT_GROUP_CAP).unwrap().order(), 4);
        let i3 = RootSystem::<QSqrt3>::dihedral(3, &[q(1, 1)]).unwrap();
        assert!(i3.validate().is_empty());
        assert_eq!(i3.generate_group(DEFAULT_GROUP_CAP).unwrap().order(), 6);
        let i4 = RootSystem::<Rational>::dihedral(4, &[q(1, 2), q(1, 3)]).unwrap();
        assert!(i4.validate().is_empty());
        assert_eq!(i4.roots().len(), 8);
        assert_eq!(i4.generate_group(DEFAULT_GROUP_CAP).unwrap().order(), 8);
        let i6 = RootSystem::<QSqrt3>::dihedral(6, &[q(1, 1), q(2, 1)]).unwrap();
        assert_eq!(i6.generate_group(DEFAULT_GROUP_CAP).unwrap().order(), 12);
    }

    #[test]
    fn cap_exceeded_is_an_error() {
        let z3 = RootSystem::<Rational>::z2(&vec![q(1, 1); 3]).unwrap();
        assert!(matches!(z3.generate_group(4), Err(Error::GroupCapExceeded(4))));
        assert_eq!(z3.generate_group(8).unwrap().order(), 8);
    }

    #[test]
    fn missing_negative_is_reported() {
        let r = RootSystem::custom(2, vec![vec![q(1, 1), q(0, 1)]], vec![q(1, 1)]).unwrap();
        let v = r.validate();
        assert!(v.iter().any(|x| matches!(x, Violation::MissingNegative { root } if root == &vec![q(1, 1), q(0, 1)])));
    }

    #[test]
    fn unequal_kappa_on_z2_is_valid() {
        let r = RootSystem::<Rational>::z2(&[q(1, 3), q(2, 1)]).unwrap();
        assert!(r.validate().is_empty());
    }

    #[test]
    fn non_closed_set_is_reported() {
        let e1 = vec![q(1, 1), q(0, 1)];
        let d = vec![q(1, 1), q(1, 1)];
        let roots = vec![e1.clone(), neg_vec(&e1), d.clone(), neg_vec(&d)];
        let r = RootSystem::custom(2, roots, vec![q(1, 1); 4]).unwrap();
        let v = r.validate();
        assert!(v.iter().any(|x| matches!(x,
            Violation::NotClosed { reflector, root, image }
                if reflector == &d && root == &e1 && image == &vec![q(0, 1), q(-1, 1)])));
    }

    #[test]
    fn non_invariant_kappa_is_reported() {
        // I2(3): all roots conjugate, so distinct values must be flagged
        let mut r = RootSystem::<QSqrt3>::dihedral(3, &[q(1, 1)]).unwrap();
        r.kappa[0] = q(2, 1);
        assert!(r.validate().iter().any(|x| matches!(x, Violation::KappaNotInvariant { .. })));
    }

    #[test]
    fn reflections_in_group_match_positive_roots() {
        let cases: Vec<RootSystem<QSqrt3>> = vec![
            RootSystem::z2(&[q(1, 2), q(1, 2)]).unwrap(),
            RootSystem::z2(&vec![q(1, 2); 3]).unwrap(),
            RootSystem::dihedral(3, &[q(1, 2)]).unwrap(),
            RootSystem::dihedral(4, &[q(1, 2), q(1, 1)]).unwrap(),
            RootSystem::dihedral(6, &[q(1, 2), q(1, 1)]).unwrap(),
        ];
        for r in cases {
            let g = r.generate_group(DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(g.reflection_count(), r.positive_count());
            assert!(g.is_closed());
            assert!(g.has_inverses());
            for e in g.elements() {
                for v in r.roots() {
                    assert!(r.index_of(&ReflectionGroup::act(e, v)).is_some());
                }
            }
        }
    }

    #[test]
    fn float_dihedral_validates_with_tolerance() {
        let r = RootSystem::<f64>::dihedral(5, &[q(1, 2)]).unwrap();
        assert!(r.validate().is_empty());
        let g = r.generate_group(DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 10);
        assert_eq!(g.reflection_count(), 5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RootSystem::<Rational>::z2(&[q(1, 1)]).is_err());
        assert!(RootSystem::<Rational>::z2(&[q(-1, 1), q(1, 1)]).is_err());
        assert!(RootSystem::<Rational>::dihedral(4, &[q(1, 1)]).is_err());
        assert!(matches!(RootSystem::<Rational>::dihedral(3, &[q(1, 1)]), Err(Error::Unsupported(_))));
    }
}
