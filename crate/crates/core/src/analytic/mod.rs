//! Analytic functions on the unit disc as expression trees over a catalog of
//! closed-form symbols.

mod catalog;
mod diff;

pub use catalog::CatalogSymbol;
pub use diff::{numeric_deriv_check, richardson_derivative};

use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sampling;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Panel count for primitives along straight segments (4 Gauss nodes each).
pub const PATH_PANELS: usize = 16;

/// A point map that is not expressible through the catalog, e.g. a semigroup
/// flow solved numerically.
pub trait PointMap: Send + Sync {
    fn value(&self, z: Complex64) -> Complex64;
    fn deriv(&self, z: Complex64) -> Complex64;
    fn label(&self) -> String;
    /// Preimage of a boundary concentration point, when known.
    fn preimage(&self, _w: Complex64) -> Option<Complex64> {
        None
    }
}

/// Removable singularity of a quotient: inside `radius` of `point` the
/// quotient is replaced by `limit`.
#[derive(Debug, Clone, Copy)]
pub struct Removable {
    pub point: Complex64,
    pub limit: Complex64,
    pub radius: f64,
}

enum Node {
    Leaf(CatalogSymbol),
    Add(AnalyticFn, AnalyticFn),
    Sub(AnalyticFn, AnalyticFn),
    Scale(Complex64, AnalyticFn),
    Mul(AnalyticFn, AnalyticFn),
    Compose { outer: AnalyticFn, inner: AnalyticFn },
    Primitive { integrand: AnalyticFn, base: Complex64 },
    Derivative(AnalyticFn),
    Quotient { num: AnalyticFn, den: AnalyticFn, removable: Option<Removable> },
    Map(Arc<dyn PointMap>),
}

/// Immutable, cheaply clonable analytic function on the disc.
#[derive(Clone)]
pub struct AnalyticFn(Arc<Node>);

impl fmt::Debug for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl From<CatalogSymbol> for AnalyticFn {
    fn from(s: CatalogSymbol) -> Self {
        AnalyticFn(Arc::new(Node::Leaf(s)))
    }
}

impl AnalyticFn {
    fn node(n: Node) -> Self {
        AnalyticFn(Arc::new(n))
    }

    /// Validated catalog leaf.
    pub fn symbol(s: CatalogSymbol) -> Result<Self> {
        s.validate()?;
        Ok(s.into())
    }

    pub fn constant(c: Complex64) -> Self {
        CatalogSymbol::Const { c }.into()
    }

    pub fn real_constant(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    pub fn identity() -> Self {
        CatalogSymbol::Identity.into()
    }

    pub fn monomial(n: u32) -> Self {
        CatalogSymbol::Monomial { n }.into()
    }

    pub fn mobius(a: Complex64) -> Result<Self> {
        Self::symbol(CatalogSymbol::Mobius { a })
    }

    pub fn log_recip_one_minus(a: Complex64) -> Result<Self> {
        Self::symbol(CatalogSymbol::LogRecipOneMinus { a })
    }

    pub fn inner_singular(gamma: f64, w: Complex64) -> Result<Self> {
        Self::symbol(CatalogSymbol::InnerSingular { gamma, w })
    }

    pub fn power_one_minus(alpha: f64) -> Result<Self> {
        Self::symbol(CatalogSymbol::PowerOneMinus { alpha })
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::symbol(CatalogSymbol::Polynomial { coeffs })
    }

    pub fn add(&self, other: &AnalyticFn) -> Self {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Self::constant(a + b),
            _ => Self::node(Node::Add(self.clone(), other.clone())),
        }
    }

    pub fn sub(&self, other: &AnalyticFn) -> Self {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Self::constant(a - b),
            _ => Self::node(Node::Sub(self.clone(), other.clone())),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match self.as_const() {
            Some(a) => Self::constant(a * c),
            None => Self::node(Node::Scale(c, self.clone())),
        }
    }

    pub fn mul(&self, other: &AnalyticFn) -> Self {
        match (self.as_const(), other.as_const()) {
            (Some(a), Some(b)) => Self::constant(a * b),
            (Some(a), None) => other.scale(a),
            (None, Some(b)) => self.scale(b),
            _ => Self::node(Node::Mul(self.clone(), other.clone())),
        }
    }

    /// `f o g`, after checking on a 1000-point low-discrepancy sample (plus
    /// boundary rays) that `g` maps the disc into itself.
    pub fn compose(&self, inner: &AnalyticFn) -> Result<Self> {
        let report = inner.self_map_margin(0);
        if !(report.0 < 1.0) {
            return Err(Error::NotSelfMap { max_modulus: report.0, at: report.1 });
        }
        Ok(self.compose_unchecked(inner))
    }

    /// Composition without the self-map check; callers guarantee it.
    pub fn compose_unchecked(&self, inner: &AnalyticFn) -> Self {
        Self::node(Node::Compose { outer: self.clone(), inner: inner.clone() })
    }

    /// `z -> integral from base to z of f`, along the straight segment.
    pub fn primitive(&self, base: Complex64) -> Self {
        Self::node(Node::Primitive { integrand: self.clone(), base })
    }

    /// The derivative as a function in its own right; its own derivative is
    /// obtained by Richardson differences.
    pub fn derivative(&self) -> Self {
        match self.as_const() {
            Some(_) => Self::constant(ZERO),
            None => Self::node(Node::Derivative(self.clone())),
        }
    }

    pub fn quotient(&self, den: &AnalyticFn, removable: Option<Removable>) -> Self {
        Self::node(Node::Quotient { num: self.clone(), den: den.clone(), removable })
    }

    pub fn from_map(map: Arc<dyn PointMap>) -> Self {
        Self::node(Node::Map(map))
    }

    /// Constant value when the function is a constant leaf.
    pub fn as_const(&self) -> Option<Complex64> {
        match &*self.0 {
            Node::Leaf(CatalogSymbol::Const { c }) => Some(*c),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&CatalogSymbol> {
        match &*self.0 {
            Node::Leaf(s) => Some(s),
            _ => None,
        }
    }

    /// Checked evaluation.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_domain(z)?;
        let v = self.value(z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Integrand { at: z })
        }
    }

    /// Checked derivative.
    pub fn deriv(&self, z: Complex64) -> Result<Complex64> {
        check_domain(z)?;
        let v = self.deriv_at(z);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Integrand { at: z })
        }
    }

    /// Unchecked value; may be non-finite outside the disc.
    pub fn value(&self, z: Complex64) -> Complex64 {
        match &*self.0 {
            Node::Leaf(s) => s.value(z),
            Node::Add(f, g) => f.value(z) + g.value(z),
            Node::Sub(f, g) => f.value(z) - g.value(z),
            Node::Scale(c, f) => c * f.value(z),
            Node::Mul(f, g) => f.value(z) * g.value(z),
            Node::Compose { outer, inner } => outer.value(inner.value(z)),
            Node::Primitive { integrand, base } => {
                segment_integral(|w| integrand.value(w), *base, z, PATH_PANELS)
            }
            Node::Derivative(f) => f.deriv_at(z),
            Node::Quotient { num, den, removable } => match removable {
                Some(r) if (z - r.point).norm() < r.radius => r.limit,
                _ => num.value(z) / den.value(z),
            },
            Node::Map(m) => m.value(z),
        }
    }

    /// Unchecked derivative.
    pub fn deriv_at(&self, z: Complex64) -> Complex64 {
        match &*self.0 {
            Node::Leaf(s) => s.deriv(z),
            Node::Add(f, g) => f.deriv_at(z) + g.deriv_at(z),
            Node::Sub(f, g) => f.deriv_at(z) - g.deriv_at(z),
            Node::Scale(c, f) => c * f.deriv_at(z),
            Node::Mul(f, g) => f.deriv_at(z) * g.value(z) + f.value(z) * g.deriv_at(z),
            Node::Compose { outer, inner } => {
                let (w, dw) = (inner.value(z), inner.deriv_at(z));
                outer.deriv_at(w) * dw
            }
            Node::Primitive { integrand, .. } => integrand.value(z),
            Node::Derivative(f) => richardson_derivative(|w| f.deriv_at(w), z),
            Node::Quotient { num, den, removable } => match removable {
                Some(r) if (z - r.point).norm() < 1e3 * r.radius => {
                    richardson_derivative(|w| self.value(w), z)
                }
                _ => {
                    let (n, d) = (num.value(z), den.value(z));
                    (num.deriv_at(z) * d - n * den.deriv_at(z)) / (d * d)
                }
            },
            Node::Map(m) => m.deriv(z),
        }
    }

    /// Primitive value with the error estimate from doubling the panel count.
    pub fn primitive_with_error(integrand: &AnalyticFn, base: Complex64, z: Complex64) -> (Complex64, f64) {
        let coarse = segment_integral(|w| integrand.value(w), base, z, PATH_PANELS);
        let fine = segment_integral(|w| integrand.value(w), base, z, 2 * PATH_PANELS);
        (coarse, (coarse - fine).norm())
    }

    /// Largest sampled modulus and where it occurs.
    pub fn self_map_margin(&self, seed: u64) -> (f64, Complex64) {
        let mut worst = (0.0f64, ZERO);
        for z in sampling::boundary_stress_set(seed) {
            let m = self.value(z).norm();
            if !(m <= worst.0) {
                worst = (if m.is_nan() { f64::INFINITY } else { m }, z);
            }
        }
        worst
    }

    /// Concentration points used to cluster quadrature nodes.
    pub fn cluster_points(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_clusters(&mut out);
        dedup_points(out)
    }

    fn collect_clusters(&self, out: &mut Vec<Complex64>) {
        match &*self.0 {
            Node::Leaf(s) => out.extend(s.cluster_points()),
            Node::Add(f, g) | Node::Sub(f, g) | Node::Mul(f, g) => {
                f.collect_clusters(out);
                g.collect_clusters(out);
            }
            Node::Scale(_, f) | Node::Primitive { integrand: f, .. } | Node::Derivative(f) => {
                f.collect_clusters(out)
            }
            Node::Quotient { num, den, removable } => {
                num.collect_clusters(out);
                den.collect_clusters(out);
                if let Some(r) = removable {
                    if r.point.norm() > 0.999 {
                        out.push(r.point);
                    }
                }
            }
            Node::Compose { outer, inner } => {
                for w in outer.cluster_points() {
                    if let Some(p) = inner.preimage(w) {
                        out.push(p);
                    } else {
                        out.push(w);
                    }
                }
                inner.collect_clusters(out);
            }
            Node::Map(_) => {}
        }
    }

    /// Preimage of a concentration point under this map, when the map is a
    /// Mobius automorphism, an affine map or a custom map that knows it.
    fn preimage(&self, w: Complex64) -> Option<Complex64> {
        match &*self.0 {
            Node::Leaf(CatalogSymbol::Identity) => Some(w),
            // involution
            Node::Leaf(CatalogSymbol::Mobius { a }) => {
                let a = *a;
                Some(reflect_into_disc((a - w) / (Complex64::new(1.0, 0.0) - a.conj() * w)))
            }
            Node::Map(m) => m.preimage(w).map(reflect_into_disc),
            _ => {
                let (slope, offset) = self.as_affine()?;
                if slope.norm() == 0.0 {
                    return None;
                }
                Some(reflect_into_disc((w - offset) / slope))
            }
        }
    }

    /// `(slope, offset)` when the function is `slope * z + offset`.
    pub fn as_affine(&self) -> Option<(Complex64, Complex64)> {
        match &*self.0 {
            Node::Leaf(CatalogSymbol::Identity) => Some((Complex64::new(1.0, 0.0), ZERO)),
            Node::Leaf(CatalogSymbol::Const { c }) => Some((ZERO, *c)),
            Node::Leaf(CatalogSymbol::Monomial { n: 1 }) => Some((Complex64::new(1.0, 0.0), ZERO)),
            Node::Leaf(CatalogSymbol::Polynomial { coeffs }) if coeffs.len() <= 2 => {
                Some((coeffs.get(1).copied().unwrap_or(ZERO), coeffs[0]))
            }
            Node::Scale(c, f) => f.as_affine().map(|(s, o)| (c * s, c * o)),
            Node::Add(f, g) => {
                let (a, b) = (f.as_affine()?, g.as_affine()?);
                Some((a.0 + b.0, a.1 + b.1))
            }
            Node::Sub(f, g) => {
                let (a, b) = (f.as_affine()?, g.as_affine()?);
                Some((a.0 - b.0, a.1 - b.1))
            }
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match &*self.0 {
            Node::Leaf(s) => match s {
                CatalogSymbol::Const { c } => format!("{c}"),
                CatalogSymbol::Identity => "z".into(),
                CatalogSymbol::Monomial { n } => format!("z^{n}"),
                CatalogSymbol::Mobius { a } => format!("mobius({a})"),
                CatalogSymbol::LogRecipOneMinus { a } => format!("log1m({a})"),
                CatalogSymbol::InnerSingular { gamma, w } => format!("inner({gamma}, {w})"),
                CatalogSymbol::PowerOneMinus { alpha } => format!("pow1m({alpha})"),
                CatalogSymbol::Polynomial { coeffs } => {
                    let cs: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                    format!("poly({})", cs.join(", "))
                }
            },
            Node::Add(f, g) => format!("({} + {})", f.describe(), g.describe()),
            Node::Sub(f, g) => format!("({} - {})", f.describe(), g.describe()),
            Node::Scale(c, f) => format!("({c} * {})", f.describe()),
            Node::Mul(f, g) => format!("({} * {})", f.describe(), g.describe()),
            Node::Compose { outer, inner } => format!("({} ∘ {})", outer.describe(), inner.describe()),
            Node::Primitive { integrand, base } => format!("prim({}, {base})", integrand.describe()),
            Node::Derivative(f) => format!("deriv({})", f.describe()),
            Node::Quotient { num, den, .. } => format!("({} / {})", num.describe(), den.describe()),
            Node::Map(m) => m.label(),
        }
    }
}

fn check_domain(z: Complex64) -> Result<()> {
    let m = z.norm();
    if m < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { modulus: m })
    }
}

/// Points outside the closed disc are represented by their reflection.
fn reflect_into_disc(p: Complex64) -> Complex64 {
    let m = p.norm();
    if m > 1.0 {
        1.0 / p.conj()
    } else {
        p
    }
}

pub(crate) fn dedup_points(points: Vec<Complex64>) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for p in points {
        if p.is_finite() && !out.iter().any(|q| (q - p).norm() < 1e-12) {
            out.push(p);
        }
    }
    out
}

const GAUSS4_X: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GAUSS4_W: [f64; 4] = [
    0.347_854_845_137_453_9,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_9,
];

/// Composite 4-point Gauss-Legendre integral of `f` along `[a, b]`.
pub fn segment_integral<F: Fn(Complex64) -> Complex64>(f: F, a: Complex64, b: Complex64, panels: usize) -> Complex64 {
    let d = b - a;
    if d.norm() == 0.0 {
        return ZERO;
    }
    let h = 1.0 / panels as f64;
    let mut acc = ZERO;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for (x, w) in GAUSS4_X.iter().zip(GAUSS4_W.iter()) {
            let s = mid + 0.5 * h * x;
            acc += f(a + d * s) * (0.5 * h * w);
        }
    }
    acc * d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_symbol_examples() {
        assert_eq!(AnalyticFn::identity().eval(c(0.3, 0.0)).unwrap(), c(0.3, 0.0));
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        assert_eq!(log.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let m = AnalyticFn::mobius(c(0.5, 0.0)).unwrap();
        assert!(m.eval(c(0.5, 0.0)).unwrap().norm() < 1e-16);
        assert!(AnalyticFn::mobius(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn eval_examples() {
        let m = AnalyticFn::mobius(c(0.5, 0.0)).unwrap();
        assert!((m.eval(c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        assert!((log.eval(c(0.5, 0.0)).unwrap().re - std::f64::consts::LN_2).abs() < 1e-15);
        let inner = AnalyticFn::inner_singular(1.0, c(1.0, 0.0)).unwrap();
        assert!((inner.eval(c(0.0, 0.0)).unwrap().re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(matches!(log.eval(c(1.0, 0.0)), Err(Error::Domain { .. })));
        assert!(log.eval(c(0.6, 0.8)).is_err());
    }

    #[test]
    fn deriv_examples() {
        assert_eq!(AnalyticFn::identity().deriv(c(0.7, -0.1)).unwrap(), c(1.0, 0.0));
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        assert!((log.deriv(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let m = AnalyticFn::mobius(c(0.5, 0.0)).unwrap();
        assert!((m.deriv(c(0.0, 0.0)).unwrap() - c(-0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn compose_examples() {
        let f = AnalyticFn::log_recip_one_minus(c(0.3, 0.4)).unwrap();
        let fi = f.compose(&AnalyticFn::identity()).unwrap();
        for z in sampling::halton_disc(10, 0.9, 1) {
            assert!((fi.value(z) - f.value(z)).norm() < 1e-15);
        }

        let sq = AnalyticFn::monomial(2).compose(&AnalyticFn::mobius(c(0.5, 0.0)).unwrap()).unwrap();
        assert!(sq.eval(c(0.5, 0.0)).unwrap().norm() < 1e-15);

        let t: f64 = 0.25;
        let flow = AnalyticFn::identity()
            .scale(c((-t).exp(), 0.0))
            .add(&AnalyticFn::real_constant(-(-t).exp_m1()));
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        let shifted = log.compose(&flow).unwrap();
        let z = c(0.3, 0.0);
        assert!((shifted.eval(z).unwrap() - log.eval(z).unwrap() - c(t, 0.0)).norm() < 1e-14);
        // derivative of the composition is (f' o g) g'
        assert!((shifted.deriv(z).unwrap() - log.deriv(z).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn compose_rejects_non_self_maps() {
        let g = AnalyticFn::identity().scale(c(1.5, 0.0));
        let err = AnalyticFn::identity().compose(&g).unwrap_err();
        assert!(matches!(err, Error::NotSelfMap { .. }));
    }

    #[test]
    fn primitive_of_identity() {
        let p = AnalyticFn::identity().primitive(c(0.0, 0.0));
        let z = c(0.5, 0.2);
        assert!((p.value(z) - z * z / 2.0).norm() < 1e-15);
        assert_eq!(p.deriv_at(z), z);
    }

    #[test]
    fn cluster_points_follow_mobius_composition() {
        let log = AnalyticFn::log_recip_one_minus(c(1.0, 0.0)).unwrap();
        let a = c(0.4, 0.3);
        let g = log.compose(&AnalyticFn::mobius(a).unwrap()).unwrap();
        let pts = g.cluster_points();
        // singular point moves to phi_a(1) (plus the Mobius pole reflection a)
        let phi1 = (a - 1.0) / (1.0 - a.conj());
        assert!(pts.iter().any(|p| (p - phi1).norm() < 1e-12));
    }

    #[test]
    fn quotient_removable_point() {
        // z / (-z) with the limit -1 at the origin
        let q = AnalyticFn::identity().quotient(
            &AnalyticFn::identity().scale(c(-1.0, 0.0)),
            Some(Removable { point: c(0.0, 0.0), limit: c(-1.0, 0.0), radius: 1e-6 }),
        );
        assert_eq!(q.value(c(0.0, 0.0)), c(-1.0, 0.0));
        assert!((q.value(c(0.3, 0.1)) + 1.0).norm() < 1e-15);
        assert!(q.deriv_at(c(1e-7, 0.0)).norm() < 1e-8);
    }
}
