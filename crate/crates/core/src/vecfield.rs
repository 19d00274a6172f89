//! Vector fields with coordinate-function coefficients, Lie brackets, the CR
//! generator of a model and the frame built from iterated brackets.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::algebra::var::{self, Z, Z_BAR};
use crate::algebra::{RatFn, Scalar, Var};
use crate::coordring::{CoordRat, CoordSpace};
use crate::linalg::{self, Matrix};
use crate::model::{validate_model, CRModel, ModelDiagnostics};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VecFieldError {
    #[error("degenerate model: {0}")]
    DegenerateModel(String),
    #[error("vector field is not in the span of the frame")]
    NotInSpan,
    #[error("unsupported model type ({0},{1}); frames are built for type (1,4)")]
    Unsupported(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VectorField {
    coeffs: BTreeMap<Var, CoordRat>,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    /// The coordinate field `d/dv`.
    pub fn partial(v: Var) -> Self {
        VectorField::from_pairs([(v, RatFn::one())])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, CoordRat)>) -> Self {
        let mut vf = VectorField::zero();
        for (v, c) in pairs {
            vf.add_component(v, &c);
        }
        vf
    }

    fn add_component(&mut self, v: Var, c: &CoordRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v).or_insert_with(RatFn::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coeff(&self, v: Var) -> CoordRat {
        self.coeffs.get(&v).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Var, &CoordRat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `X(f)`.
    pub fn apply(&self, f: &CoordRat) -> CoordRat {
        let mut acc = RatFn::zero();
        for (v, c) in &self.coeffs {
            if f.contains_var(*v) {
                acc = &acc + &(c * &f.derivative(*v));
            }
        }
        acc
    }

    pub fn bracket(&self, o: &VectorField) -> VectorField {
        let mut out = VectorField::zero();
        let keys: Vec<Var> = self.coeffs.keys().chain(o.coeffs.keys()).copied().collect();
        for v in keys {
            if out.coeffs.contains_key(&v) {
                continue;
            }
            let c = &self.apply(&o.coeff(v)) - &o.apply(&self.coeff(v));
            out.add_component(v, &c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> VectorField {
        VectorField::from_pairs(self.coeffs.iter().map(|(v, c)| (*v, c * s)))
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, c) in &o.coeffs {
            out.add_component(*v, c);
        }
        out
    }

    /// Complex conjugate: conjugates coefficients and maps `d/dv` to
    /// `d/dconj(v)`.
    pub fn conj(&self) -> VectorField {
        VectorField::from_pairs(self.coeffs.iter().map(|(v, c)| (v.conj(), c.conj())))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> =
            self.coeffs.iter().map(|(v, c)| (v.name(), json!(c.to_string()))).collect();
        serde_json::Value::Object(m)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                let d = format!("d/d{}", v.name());
                if c.is_one() {
                    d
                } else if c.num().len() == 1 && c.is_polynomial() {
                    format!("{c}*{d}")
                } else {
                    format!("({c})*{d}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `d/dz + sum_k dP_k/dz d/dw_k` on the ambient space `(z, zbar, w, wbar)`.
pub fn extrinsic_generator(m: &CRModel) -> VectorField {
    let mut pairs = vec![(Z, RatFn::one())];
    for e in &m.xi {
        pairs.push((var::w_var(e.j), RatFn::from_poly(e.rhs.derivative(Z))));
    }
    VectorField::from_pairs(pairs)
}

/// Intrinsic generator in the coordinates `(z, zbar, u_1.. u_k)`: each
/// `d/dw_k` restricts to `(1/2) d/du_k`.
pub fn cr_generator(m: &CRModel) -> VectorField {
    let ext = extrinsic_generator(m);
    let half = RatFn::ratio(1, 2);
    VectorField::from_pairs(ext.coeffs.iter().map(|(v, c)| match m.xi.iter().find(|e| var::w_var(e.j) == *v) {
        Some(e) => (var::u_var(e.j), c * &half),
        None => (*v, c.clone()),
    }))
}

/// Intrinsic coordinates `(z, zbar, u_1, .., u_k)` of a model.
pub fn model_space(m: &CRModel) -> CoordSpace {
    let mut coords = vec![Z, Z_BAR];
    coords.extend((1..=m.codimension).map(var::u_var));
    CoordSpace::new(coords)
}

pub const FRAME_ROLES: [&str; 6] = ["L", "Lbar", "T", "S", "Sbar", "U"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub space: CoordSpace,
    pub fields: Vec<VectorField>,
    pub roles: Vec<String>,
    /// Determinant of the coefficient matrix (nonzero).
    pub determinant: CoordRat,
    /// Which bracket produced `U` (`[L,S]`, `[L,Sbar]`, ...).
    pub u_source: String,
}

impl Frame {
    pub fn field(&self, role: &str) -> Option<&VectorField> {
        self.roles.iter().position(|r| r == role).map(|k| &self.fields[k])
    }

    /// Coefficient matrix: row per coordinate, column per frame field.
    pub fn matrix(&self) -> Matrix {
        self.space.coords().iter().map(|&c| self.fields.iter().map(|f| f.coeff(c)).collect()).collect()
    }

    pub fn inverse_matrix(&self) -> Matrix {
        linalg::inverse(&self.matrix()).expect("frame certified independent")
    }
}

/// Builds `(L, Lbar, T, S, Sbar, U)` for a type (1,4) model.
pub fn build_frame(m: &CRModel) -> Result<Frame, VecFieldError> {
    if (m.cr_dimension, m.codimension) != (1, 4) {
        return Err(VecFieldError::Unsupported(m.cr_dimension, m.codimension));
    }
    if validate_model(m) == ModelDiagnostics::NotTotallyNondegenerate {
        return Err(VecFieldError::DegenerateModel("M(0,0) is not totally nondegenerate".into()));
    }
    let space = model_space(m);
    let l = cr_generator(m);
    let lb = l.conj();
    let t = l.bracket(&lb).scale(&RatFn::i());
    let s = l.bracket(&t);
    let sb = lb.bracket(&t);
    let candidates = [("[L,S]", l.bracket(&s)), ("[L,Sbar]", l.bracket(&sb)), ("[Lbar,S]", lb.bracket(&s)), ("[Lbar,Sbar]", lb.bracket(&sb))];
    let (u_source, top) = candidates
        .into_iter()
        .find(|(_, b)| !b.is_zero())
        .ok_or_else(|| VecFieldError::DegenerateModel("every length-4 bracket vanishes".into()))?;
    let u = normalize_top(&top, &space);
    let fields = vec![l, lb, t, s, sb, u];
    let mat: Matrix = space.coords().iter().map(|&c| fields.iter().map(|f| f.coeff(c)).collect()).collect();
    let determinant = linalg::determinant(&mat);
    if determinant.is_zero() {
        return Err(VecFieldError::DegenerateModel("frame fields are dependent".into()));
    }
    Ok(Frame { space, fields, roles: FRAME_ROLES.iter().map(|s| s.to_string()).collect(), determinant, u_source: u_source.into() })
}

/// Real rescaling of a length-4 bracket. A coordinate-free multiple of a
/// single `d/du` is scaled to `12 d/du`, the normalisation that the generic
/// choice `(1/a)[L,S]` produces; anything else is divided by its leading
/// coordinate-free coefficient when there is one.
fn normalize_top(b: &VectorField, space: &CoordSpace) -> VectorField {
    let comps: Vec<(&Var, &CoordRat)> = b.components().collect();
    if comps.len() == 1 && space.is_coordinate_free(comps[0].1) {
        return VectorField::from_pairs([(*comps[0].0, RatFn::int(12))]);
    }
    match comps.iter().rev().find(|(_, c)| space.is_coordinate_free(c)) {
        Some((_, c)) => b.scale(&c.inv().expect("nonzero")),
        None => b.clone(),
    }
}

/// Coefficients of `x` in the frame.
pub fn decompose(x: &VectorField, f: &Frame) -> Result<Vec<CoordRat>, VecFieldError> {
    decompose_with(x, f, &f.inverse_matrix())
}

fn decompose_with(x: &VectorField, f: &Frame, inv: &Matrix) -> Result<Vec<CoordRat>, VecFieldError> {
    if x.components().any(|(v, _)| !f.space.contains(*v)) {
        return Err(VecFieldError::NotInSpan);
    }
    let rhs: Vec<CoordRat> = f.space.coords().iter().map(|&c| x.coeff(c)).collect();
    let coeffs: Vec<CoordRat> = inv
        .iter()
        .map(|row| {
            let mut acc = RatFn::zero();
            for (a, b) in row.iter().zip(&rhs) {
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
        .collect();
    // Residual check.
    let mut back = VectorField::zero();
    for (c, field) in coeffs.iter().zip(&f.fields) {
        back = back.add(&field.scale(c));
    }
    if &back != x {
        return Err(VecFieldError::NotInSpan);
    }
    Ok(coeffs)
}

/// Structure functions of a frame: `[E_i, E_j] = sum_k c^k_ij E_k` for `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFunctions {
    pub roles: Vec<String>,
    pub table: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl StructureFunctions {
    pub fn dim(&self) -> usize {
        self.roles.len()
    }

    /// `c^k_ij` with antisymmetric completion.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        if i == j {
            return RatFn::zero();
        }
        if i < j {
            self.table.get(&(i, j)).map(|v| v[k].clone()).unwrap_or_else(RatFn::zero)
        } else {
            -self.coeff(j, i, k)
        }
    }

    pub fn bracket_vector(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| self.coeff(i, j, k)).collect()
    }

    pub fn render_entry(&self, i: usize, j: usize) -> String {
        let parts: Vec<String> = (0..self.dim())
            .filter_map(|k| {
                let c = self.coeff(i, j, k);
                if c.is_zero() {
                    None
                } else if c.is_one() {
                    Some(self.roles[k].clone())
                } else if c.num().len() == 1 {
                    Some(format!("{}*{}", c, self.roles[k]))
                } else {
                    Some(format!("({})*{}", c, self.roles[k]))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .table
            .iter()
            .map(|((i, j), v)| {
                let coeffs: serde_json::Map<String, serde_json::Value> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (self.roles[k].clone(), json!(c.to_string())))
                    .collect();
                json!({"i": self.roles[*i], "j": self.roles[*j], "coeffs": coeffs})
            })
            .collect();
        json!({"basis": self.roles, "brackets": entries})
    }
}

impl fmt::Display for StructureFunctions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                writeln!(f, "[{}, {}] = {}", self.roles[i], self.roles[j], self.render_entry(i, j))?;
            }
        }
        Ok(())
    }
}

pub fn commutator_table(f: &Frame) -> Result<StructureFunctions, VecFieldError> {
    let inv = f.inverse_matrix();
    let mut table = BTreeMap::new();
    let n = f.fields.len();
    for i in 0..n {
        for j in i + 1..n {
            let b = f.fields[i].bracket(&f.fields[j]);
            let c = decompose_with(&b, f, &inv)?;
            if c.iter().any(|x| !x.is_zero()) {
                table.insert((i, j), c);
            }
        }
    }
    Ok(StructureFunctions { roles: f.roles.clone(), table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_scalar;
    use crate::model::{builtin_m14, builtin_m14_symbolic, parse_model};

    fn s(x: &str) -> RatFn {
        parse_scalar(x).unwrap()
    }

    #[test]
    fn generator_of_family() {
        let l = cr_generator(&builtin_m14_symbolic());
        assert_eq!(l.coeff(Z), RatFn::one());
        assert_eq!(l.coeff(var::U1), s("i*conj(z)"));
        assert_eq!(l.coeff(var::U2), s("2*i*z*conj(z) + i*conj(z)^2"));
        assert_eq!(l.coeff(var::U3), s("2*z*conj(z) - conj(z)^2"));
        assert_eq!(l.coeff(var::U4), s("3*i*a*z^2*conj(z) + i*conj(a)*conj(z)^3 + 2*i*b*z*conj(z)^2"));
        assert_eq!(l.conj().coeff(var::U1), s("-i*z"));
    }

    #[test]
    fn heisenberg_generator() {
        let m = parse_model("model H type (1,1)\nXi1: w1 - conj(w1) = 2i*z*conj(z)\n").unwrap();
        assert_eq!(cr_generator(&m).to_string(), "d/dz + i*conj(z)*d/du1");
    }

    #[test]
    fn frame_and_table() {
        let f = build_frame(&builtin_m14_symbolic()).unwrap();
        let t = f.field("T").unwrap();
        assert_eq!(t.coeff(var::U1), RatFn::int(2));
        assert_eq!(t.coeff(var::U2), s("4*z + 4*conj(z)"));
        assert_eq!(t.coeff(var::U3), s("-4*i*z + 4*i*conj(z)"));
        assert_eq!(t.coeff(var::U4), s("6*a*z^2 + 6*conj(a)*conj(z)^2 + 8*b*z*conj(z)"));
        assert_eq!(f.field("U").unwrap(), &VectorField::from_pairs([(var::U4, RatFn::int(12))]));
        let tab = commutator_table(&f).unwrap();
        assert_eq!(tab.render_entry(0, 1), "-i*T");
        assert_eq!(tab.render_entry(0, 3), "a*U");
        assert_eq!(tab.render_entry(0, 4), "2/3*b*U");
        assert_eq!(tab.render_entry(1, 3), "2/3*b*U");
        assert_eq!(tab.render_entry(1, 4), "conj(a)*U");
        assert_eq!(decompose(t, &f).unwrap(), vec![RatFn::zero(), RatFn::zero(), RatFn::one(), RatFn::zero(), RatFn::zero(), RatFn::zero()]);
        assert_eq!(decompose(&VectorField::partial(var::W1), &f), Err(VecFieldError::NotInSpan));
    }

    #[test]
    fn fallback_u_for_m01() {
        let m = builtin_m14(&RatFn::zero(), &RatFn::one());
        let f = build_frame(&m).unwrap();
        assert_eq!(f.u_source, "[L,Sbar]");
        let tab = commutator_table(&f).unwrap();
        assert_eq!(tab.render_entry(0, 4), "2/3*U");
        assert!(tab.coeff(0, 3, 5).is_zero());
        let degenerate = build_frame(&builtin_m14(&RatFn::zero(), &RatFn::zero()));
        assert!(matches!(degenerate, Err(VecFieldError::DegenerateModel(_))));
    }
}
