//! Lines on the quadric `Q = {z0² + z1² + z2² − z3² = 0}` ⊂ ℙ³, their real
//! points, and the boundary-cover check on the exceptional divisor of the
//! last point blow-up of the tower.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::linalg::{kernel, rank, Matrix};
use crate::algebra::{var_names, GaussianRational, MultiPoly};
use crate::birational::Tower;
use crate::certificate::{Certificate, Status};
use crate::error::{Error, Result};

type GR = GaussianRational;
pub type LinearForm = [GR; 4];

/// Homogeneous coordinate names of ℙ³.
pub fn proj_vars() -> Vec<String> {
    var_names(&["z0", "z1", "z2", "z3"])
}

fn form(coeffs: [(i64, i64); 4]) -> LinearForm {
    coeffs.map(|(re, im)| GR::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into())))
}

fn form_poly(f: &LinearForm) -> MultiPoly {
    let vars = proj_vars();
    MultiPoly::from_terms(&vars, f.iter().enumerate().map(|(i, c)| {
        let mut e = vec![0; 4];
        e[i] = 1;
        (e, c.clone())
    }))
}

fn combine(x: &GR, f: &LinearForm, y: &GR, g: &LinearForm) -> LinearForm {
    std::array::from_fn(|i| &(x * &f[i]) + &(y * &g[i]))
}

/// Scales so the first nonzero entry is 1; `None` for the zero vector.
fn normalize(v: &[GR; 4]) -> Option<[GR; 4]> {
    let lead = v.iter().find(|c| !c.is_zero())?.inv()?;
    Some(v.clone().map(|c| &c * &lead))
}

/// A quadric `a·b − c·d = 0` given by four linear forms; its rulings are
/// the lines `{t a − s c, s b − t d}` (family A) and `{t a − s d, s b − t c}`
/// (family B).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricModel {
    pub label: String,
    pub a: LinearForm,
    pub b: LinearForm,
    pub c: LinearForm,
    pub d: LinearForm,
}

impl QuadricModel {
    /// `Q`: `a = z0 + i z1`, `b = z0 − i z1`, `c = z3 + z2`, `d = z3 − z2`.
    pub fn standard() -> Self {
        QuadricModel {
            label: "z0^2 + z1^2 + z2^2 - z3^2".into(),
            a: form([(1, 0), (0, 1), (0, 0), (0, 0)]),
            b: form([(1, 0), (0, -1), (0, 0), (0, 0)]),
            c: form([(0, 0), (0, 0), (1, 0), (1, 0)]),
            d: form([(0, 0), (0, 0), (-1, 0), (1, 0)]),
        }
    }

    /// `z0² + z1² + z2² + z3²`, with empty real locus: `c = z2 + i z3`,
    /// `d = −z2 + i z3`.
    pub fn control() -> Self {
        QuadricModel {
            label: "z0^2 + z1^2 + z2^2 + z3^2".into(),
            c: form([(0, 0), (0, 0), (1, 0), (0, 1)]),
            d: form([(0, 0), (0, 0), (-1, 0), (0, 1)]),
            ..Self::standard()
        }
    }

    pub fn equation(&self) -> MultiPoly {
        let [a, b, c, d] = [&self.a, &self.b, &self.c, &self.d].map(form_poly);
        &(&a * &b) - &(&c * &d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
        })
    }
}

/// A ruling line's projective parameter `(s : t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulingParam {
    pub family: Family,
    pub s: GR,
    pub t: GR,
}

impl RulingParam {
    pub fn new(family: Family, s: GR, t: GR) -> Result<Self> {
        if s.is_zero() && t.is_zero() {
            return Err(Error::Validation("ruling parameter (0 : 0) is not a point of P^1".into()));
        }
        Ok(RulingParam { family, s, t })
    }
}

impl fmt::Display for RulingParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} : {})", self.family, self.s, self.t)
    }
}

/// A line of ℙ³ cut out by two linear forms (coefficient vectors over
/// `z0..z3`), each normalized to leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjLine {
    pub forms: [LinearForm; 2],
}

impl ProjLine {
    pub fn new(f: LinearForm, g: LinearForm) -> Result<Self> {
        let m: Matrix = vec![f.to_vec(), g.to_vec()];
        if rank(&m) != 2 {
            return Err(Error::Validation("line forms are linearly dependent".into()));
        }
        Ok(ProjLine { forms: [normalize(&f).expect("nonzero"), normalize(&g).expect("nonzero")] })
    }

    pub fn polys(&self) -> [MultiPoly; 2] {
        [form_poly(&self.forms[0]), form_poly(&self.forms[1])]
    }

    /// Whether `q` vanishes identically on the line: solve the forms for two
    /// pivot coordinates and substitute.
    pub fn lies_on(&self, q: &MultiPoly) -> Result<bool> {
        let vars = proj_vars();
        let mut m: Matrix = vec![self.forms[0].to_vec(), self.forms[1].to_vec()];
        let pivots = crate::algebra::linalg::rref(&mut m);
        let mut images: Vec<MultiPoly> = (0..4).map(|i| MultiPoly::var(&vars, &vars[i]).expect("own variable")).collect();
        for (r, &p) in pivots.iter().enumerate() {
            let terms = (0..4).filter(|c| !pivots.contains(c)).map(|c| {
                let mut e = vec![0; 4];
                e[c] = 1;
                (e, -&m[r][c])
            });
            images[p] = MultiPoly::from_terms(&vars, terms);
        }
        Ok(q.embed(&vars)?.substitute(&vars, &images)?.is_zero())
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.forms.iter().all(|f| f.iter().zip(&p.coords).map(|(a, x)| a * x).sum::<GR>().is_zero())
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.polys();
        write!(f, "{{{a}, {b}}}")
    }
}

/// A point of ℙ³, first nonzero coordinate scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    pub coords: [GR; 4],
}

impl ProjPoint {
    pub fn new(coords: [GR; 4]) -> Result<Self> {
        normalize(&coords).map(|coords| ProjPoint { coords }).ok_or_else(|| Error::Validation("all homogeneous coordinates are zero".into()))
    }

    pub fn is_real(&self) -> bool {
        self.coords.iter().all(GR::is_real)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", c.join(" : "))
    }
}

/// The line of `model` with parameter `p`.
pub fn ruling_line_on(model: &QuadricModel, p: &RulingParam) -> Result<ProjLine> {
    let p = RulingParam::new(p.family, p.s.clone(), p.t.clone())?;
    let (x, y) = match p.family {
        Family::A => (&model.c, &model.d),
        Family::B => (&model.d, &model.c),
    };
    let line = ProjLine::new(combine(&p.t, &model.a, &-&p.s, x), combine(&p.s, &model.b, &-&p.t, y))?;
    if !line.lies_on(&model.equation())? {
        return Err(Error::InternalInconsistent(format!("ruling line {line} is not on {}", model.label)));
    }
    Ok(line)
}

/// The line of `Q` with parameter `p`.
pub fn ruling_line(p: &RulingParam) -> Result<ProjLine> {
    ruling_line_on(&QuadricModel::standard(), p)
}

/// Kernel of the 4×4 real system equivalent to the two complex forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPoint {
    pub nullity: usize,
    pub point: Option<ProjPoint>,
}

/// Real points of `line`, which must lie on the quadric `q`.
pub fn real_point_on(line: &ProjLine, q: &MultiPoly) -> Result<RealPoint> {
    if !line.lies_on(q)? {
        return Err(Error::LineNotOnQuadric);
    }
    let mut rows: Matrix = Vec::with_capacity(4);
    for f in &line.forms {
        rows.push(f.iter().map(|c| GR::from_real(c.re().clone())).collect());
        rows.push(f.iter().map(|c| GR::from_real(c.im().clone())).collect());
    }
    let basis = kernel(&rows, 4);
    let point = match basis.first() {
        Some(v) => {
            let p = ProjPoint::new(std::array::from_fn(|i| v[i].clone()))?;
            if !p.is_real() || !line.contains(&p) || !q.embed(&proj_vars())?.evaluate(&p.coords).is_zero() {
                return Err(Error::InternalInconsistent(format!("kernel vector {p} is not a real point of {line}")));
            }
            Some(p)
        }
        None => None,
    };
    Ok(RealPoint { nullity: basis.len(), point })
}

/// Real points of a line on `Q`.
pub fn real_point(line: &ProjLine) -> Result<RealPoint> {
    real_point_on(line, &QuadricModel::standard().equation())
}

/// Whether two lines are disjoint (the four forms have rank 4).
pub fn lines_disjoint(l1: &ProjLine, l2: &ProjLine) -> bool {
    let m: Matrix = l1.forms.iter().chain(&l2.forms).map(|f| f.to_vec()).collect();
    rank(&m) == 4
}

fn sample_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.random_range(-20i64..=20).into(), rng.random_range(1i64..=20).into())
}

fn sample_gaussian(rng: &mut ChaCha8Rng) -> GR {
    GR::new(sample_rational(rng), sample_rational(rng))
}

/// `trials` pseudo-random Gaussian-rational parameters of `family`.
pub fn sample_params(family: Family, trials: usize, seed: u64) -> Vec<RulingParam> {
    let offset = match family {
        Family::A => 0,
        Family::B => 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(2).wrapping_add(offset));
    let mut out = Vec::with_capacity(trials);
    while out.len() < trials {
        let (s, t) = (sample_gaussian(&mut rng), sample_gaussian(&mut rng));
        if let Ok(p) = RulingParam::new(family, s, t) {
            out.push(p);
        }
    }
    out
}

/// Affine representative `(z0, z1, z2)/z3` of a point of `Q`, on the unit sphere.
fn on_unit_sphere(p: &ProjPoint) -> bool {
    let w = &p.coords[3];
    if w.is_zero() {
        return false;
    }
    let inv = w.inv().expect("nonzero");
    let sum: GR = p.coords[..3].iter().map(|x| (x * &inv).pow(2)).sum();
    sum.is_one()
}

/// Samples `trials` lines per family on `model`; each must have a real
/// point (nullity exactly 1) whose affine representative lies on the unit
/// sphere. Stops at the first failure.
pub fn verify_ruling_cover(model: &QuadricModel, trials: usize, seed: u64) -> Result<Certificate> {
    let mut cert = Certificate::new("quadric", Status::Pass).param("quadric", &model.label).param("trials", trials);
    cert.seed = Some(seed);
    cert.justify("real points: the two complex forms become a 4x4 rational system in (Re, Im) parts; nullity is its exact kernel dimension");
    let q = model.equation();
    for family in [Family::A, Family::B] {
        let mut first = None;
        for (n, p) in sample_params(family, trials, seed).iter().enumerate() {
            let line = ruling_line_on(model, p)?;
            if n == 0 {
                first = Some(line.clone());
            } else if n == 1 && !lines_disjoint(first.as_ref().expect("set at n = 0"), &line) {
                cert.status = Status::Fail;
                cert.value("first_failure", format!("{family}[1]: meets {family}[0]"));
                return Ok(cert);
            }
            let rp = real_point_on(&line, &q)?;
            let key = format!("{family}[{n:03}]");
            let ok = rp.nullity == 1 && rp.point.as_ref().is_some_and(on_unit_sphere);
            let witness = match &rp.point {
                Some(pt) => format!("({} : {}) line {line} nullity {} point {pt}", p.s, p.t, rp.nullity),
                None => format!("({} : {}) line {line} nullity {}", p.s, p.t, rp.nullity),
            };
            cert.value(key.clone(), &witness);
            if !ok {
                cert.status = Status::Fail;
                cert.value("first_failure", format!("{key}: {witness}"));
                return Ok(cert);
            }
        }
        cert.value(format!("{family}.lines"), trials);
    }
    Ok(cert)
}

/// Checks that the exceptional-divisor slice of `Y_0` is
/// `{z1² + z2² + z3² − 1 = z4 = 0}`, that homogenizing it with `z0` gives
/// `Q` under `(x1, x2, x3, z0) ↦ (z0, z1, z2, z3)`, and runs
/// [`verify_ruling_cover`] on `Q`.
pub fn verify_boundary_cover(tower: &Tower, trials: usize, seed: u64) -> Result<Certificate> {
    let level1 = tower.level(1);
    let g = level1.g_step.as_ref().ok_or_else(|| Error::InternalInconsistent("tower level 1 has no point blow-up".into()))?;
    let y0 = tower.y0();
    let exc = &g.charts[3].exceptional;
    let vars = &y0.chart.variables;
    let on_divisor = y0.equation.specialize(y0.chart.index_of(exc)?, &GR::zero());
    let model_vars = var_names(&["z1", "z2", "z3", "z4"]);
    let slice = on_divisor.rename(&model_vars)?;
    let expected = MultiPoly::parse("z1^2 + z2^2 + z3^2 - 1", &model_vars)?;
    let slice_ok = exc == &vars[3] && slice == expected;

    let affine = MultiPoly::parse("x1^2 + x2^2 + x3^2 - 1", &var_names(&["x1", "x2", "x3"]))?;
    let homogeneous = affine.homogenize("z0").rename(&proj_vars())?;
    let q = QuadricModel::standard();
    let hom_ok = homogeneous == q.equation();

    let mut cert = verify_ruling_cover(&q, trials, seed)?;
    cert.params.insert("k".into(), tower.k.to_string());
    cert.value("slice", format!("{{{slice} = 0, {exc} = 0}}"));
    cert.value("homogenized", format!("{homogeneous}"));
    cert.justify("E_0 slice of Y_0 in chart U0 is renamed to z1..z4; homogenizing x1^2 + x2^2 + x3^2 - 1 with z0 and renaming (x1, x2, x3, z0) -> (z0, z1, z2, z3) gives Q");
    cert.justify("a real point (z0 : z1 : z2 : z3) of Q has z3 != 0, and (z0, z1, z2)/z3 is its point on the unit sphere with x4 = 0");
    if !slice_ok || !hom_ok {
        cert.status = Status::Fail;
        cert.value("first_failure", format!("slice {slice} (expected {expected}), homogenized {homogeneous}"));
    }
    Ok(cert)
}
