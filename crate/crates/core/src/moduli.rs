//! Invariant extraction, equivalence decisions and a transformation-based
//! invariance oracle for the family `M(a,b)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::var::{self, Z, Z_BAR};
use crate::algebra::{parse_scalar, AlgebraError, Gaussian, Poly, RatFn, Scalar};
use crate::cartan::{run_cartan, Branch, CartanError, ModelClass};
use crate::liealg::{lie_pipeline, LieError};
use crate::linalg;
use crate::model::{builtin_m14, validate_model, CRModel, DefiningEquation, ModelDiagnostics};

/// Environment variable overriding the oracle seed.
pub const SEED_ENV: &str = "CR_MODULI_SEED";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuliError {
    #[error("degenerate model: {0}")]
    DegenerateModel(String),
    #[error("model is not of the form M(a,b)")]
    NotInFamily,
    #[error("transformation is not admissible: {0}")]
    NotAdmissible(String),
    #[error("pipelines disagree: {0}")]
    PipelineMismatch(String),
    #[error("oracle violation: {0}")]
    OracleViolation(String),
    #[error("malformed report: {0}")]
    Malformed(String),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pipeline {
    Cartan,
    Lie,
}

impl Pipeline {
    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Cartan => "cartan",
            Pipeline::Lie => "lie",
        }
    }

    pub fn from_name(s: &str) -> Option<Pipeline> {
        match s {
            "cartan" => Some(Pipeline::Cartan),
            "lie" => Some(Pipeline::Lie),
            _ => None,
        }
    }
}

/// Which group branches the Cartan pipeline runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchChoice {
    One(Branch),
    Both,
}

impl BranchChoice {
    fn branches(self) -> Vec<Branch> {
        match self {
            BranchChoice::One(b) => vec![b],
            BranchChoice::Both => Branch::BOTH.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub class: ModelClass,
    /// `a conj(a) / b^2`, present for the generic class only.
    pub invariant: Option<Scalar>,
    pub pipeline: Pipeline,
    /// How the report was obtained.
    pub trail: Vec<String>,
}

impl InvariantReport {
    pub fn to_json(&self) -> Value {
        json!({
            "class": self.class.tag(),
            "invariant": self.invariant.as_ref().map(|r| r.to_string()),
            "pipeline": self.pipeline.name(),
            "trail": self.trail,
        })
    }

    pub fn from_json(v: &Value) -> Result<InvariantReport, ModuliError> {
        let bad = |m: &str| ModuliError::Malformed(m.to_string());
        let class = match v["class"].as_str().ok_or_else(|| bad("class"))? {
            "generic" => ModelClass::Generic,
            "B0" => ModelClass::B0,
            "M01" => ModelClass::M01,
            other => return Err(bad(&format!("class {other}"))),
        };
        let invariant = match &v["invariant"] {
            Value::Null => None,
            Value::String(s) => Some(parse_scalar(s)?),
            _ => return Err(bad("invariant")),
        };
        let pipeline = v["pipeline"].as_str().and_then(Pipeline::from_name).ok_or_else(|| bad("pipeline"))?;
        let trail = v["trail"]
            .as_array()
            .ok_or_else(|| bad("trail"))?
            .iter()
            .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("trail entry")))
            .collect::<Result<_, _>>()?;
        Ok(InvariantReport { class, invariant, pipeline, trail })
    }

    /// Class tag and invariant, the data equivalence is decided on.
    pub fn key(&self) -> (ModelClass, Option<Scalar>) {
        (self.class, self.invariant.clone())
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.invariant {
            Some(r) => write!(f, "class {}, R = {}", self.class.tag(), r),
            None => write!(f, "class {}", self.class.tag()),
        }
    }
}

fn label(m: &CRModel) -> String {
    match m.m14_parameters() {
        Some((a, b)) => format!("M({a}, {b})"),
        None => m.name.clone(),
    }
}

fn check_model(m: &CRModel) -> Result<(), ModuliError> {
    if validate_model(m) == ModelDiagnostics::NotTotallyNondegenerate {
        return Err(ModuliError::DegenerateModel(format!("{} is not totally nondegenerate (a = b = 0)", label(m))));
    }
    Ok(())
}

/// Runs one pipeline on `m` and reads the invariant off its canonical
/// structure equations.
pub fn invariant(m: &CRModel, pipeline: Pipeline) -> Result<InvariantReport, ModuliError> {
    match pipeline {
        Pipeline::Cartan => cartan_invariant(m, BranchChoice::One(Branch::Plus)),
        Pipeline::Lie => lie_invariant(m),
    }
}

/// Cartan pipeline on the chosen branches; all branches must agree.
pub fn cartan_invariant(m: &CRModel, branches: BranchChoice) -> Result<InvariantReport, ModuliError> {
    check_model(m)?;
    let mut out: Option<InvariantReport> = None;
    for br in branches.branches() {
        let run = run_cartan(m, br).map_err(|e| match e {
            CartanError::DegenerateModel(v) => ModuliError::DegenerateModel(v.to_string()),
            e => e.into(),
        })?;
        let r = &run.reformed;
        let invariant = r.invariants.iter().find(|(k, _)| k == "R").map(|(_, v)| v.clone());
        let mut trail = vec![format!("{}: cartan, branch {}", label(m), br.eps())];
        trail.extend(r.canonical().notes.iter().cloned());
        if r.class == ModelClass::M01 {
            trail.push("canonical representative M(0, 1) via w4 -> b w4".into());
        }
        let rep = InvariantReport { class: r.class, invariant, pipeline: Pipeline::Cartan, trail };
        match &mut out {
            None => out = Some(rep),
            Some(prev) => {
                if prev.key() != rep.key() {
                    return Err(ModuliError::PipelineMismatch(format!("branch +1 gives {prev}, branch -1 gives {rep}")));
                }
                prev.trail.extend(rep.trail);
            }
        }
    }
    Ok(out.expect("at least one branch"))
}

/// Lie pipeline: `g(r,b)` with `r` kept symbolic, the normalized
/// coefficient divided by its value at `r = b = 1`, then `r^2 = a conj(a)`.
pub fn lie_invariant(m: &CRModel) -> Result<InvariantReport, ModuliError> {
    check_model(m)?;
    let (a, b) = m.m14_parameters().ok_or(ModuliError::NotInFamily)?;
    let mut trail = vec![format!("{}: lie, r^2 = a conj(a)", label(m))];
    if a.is_zero() {
        trail.push("a = 0: canonical representative M(0, 1) via w4 -> b w4".into());
        return Ok(InvariantReport { class: ModelClass::M01, invariant: None, pipeline: Pipeline::Lie, trail });
    }
    let r = RatFn::var(var::R);
    let run = lie_pipeline(&r, &b)?;
    let Some(coefficient) = run.coefficient else {
        trail.push("b = 0: no invariant after the real splitting".into());
        return Ok(InvariantReport { class: ModelClass::B0, invariant: None, pipeline: Pipeline::Lie, trail });
    };
    let unit = lie_pipeline(&RatFn::one(), &RatFn::one())?.coefficient.expect("b = 1");
    let i_rb = coefficient.checked_div(&unit)?;
    trail.push(format!("coefficient {coefficient}, normalized {i_rb}"));
    let aa = &a * &a.conj();
    let value = i_rb.reduce_square(var::R, &aa);
    if value.contains_var(var::R) {
        return Err(ModuliError::PipelineMismatch(format!("odd power of r left in {value}")));
    }
    Ok(InvariantReport { class: ModelClass::Generic, invariant: Some(value), pipeline: Pipeline::Lie, trail })
}

/// Runs both pipelines and requires agreement.
pub fn invariant_checked(m: &CRModel, branches: BranchChoice) -> Result<InvariantReport, ModuliError> {
    let c = cartan_invariant(m, branches)?;
    if m.m14_parameters().is_none() {
        return Ok(c);
    }
    let l = lie_invariant(m)?;
    if c.key() != l.key() {
        return Err(ModuliError::PipelineMismatch(format!("cartan: {c}; lie: {l}")));
    }
    let mut out = c;
    out.trail.extend(l.trail);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Equivalent => "Equivalent",
            Verdict::NotEquivalent => "NotEquivalent",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub first: InvariantReport,
    pub second: InvariantReport,
    pub witness_chain: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let inv = |r: &InvariantReport| r.invariant.as_ref().map(|x| x.to_string());
        json!({
            "verdict": self.verdict.name(),
            "class1": self.first.class.tag(),
            "class2": self.second.class.tag(),
            "invariant1": inv(&self.first),
            "invariant2": inv(&self.second),
            "witness_chain": self.witness_chain,
        })
    }
}

/// Equivalent iff same class and, for the generic class, equal invariants.
pub fn decide_from_reports(first: InvariantReport, second: InvariantReport) -> Certificate {
    let same = first.key() == second.key();
    let mut chain = vec![format!("first: {first}"), format!("second: {second}")];
    chain.push(match (first.class == second.class, first.class) {
        (false, _) => "classes differ".to_string(),
        (true, ModelClass::Generic) if same => "same class, equal R".to_string(),
        (true, ModelClass::Generic) => "same class, different R".to_string(),
        (true, c) => format!("both in class {}, which has a single equivalence class", c.tag()),
    });
    let verdict = if same { Verdict::Equivalent } else { Verdict::NotEquivalent };
    Certificate { verdict, first, second, witness_chain: chain }
}

pub fn decide_equivalence(m1: &CRModel, m2: &CRModel) -> Result<Certificate, ModuliError> {
    let r1 = cartan_invariant(m1, BranchChoice::One(Branch::Plus))?;
    let r2 = cartan_invariant(m2, BranchChoice::One(Branch::Plus))?;
    Ok(decide_from_reports(r1, r2))
}

/// Elementary holomorphic changes of coordinates preserving the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Transformation {
    /// `z -> rho z` with `|rho| = 1`, followed by the induced real rotation
    /// of `(w2, w3)`.
    Rotation(Gaussian),
    /// `z -> lambda z` with weighted `w_j -> lambda^(j+1) w_j`.
    Scaling(BigRational),
    /// `w4 -> w4 / t`.
    W4Rescale(BigRational),
    Compose(Vec<Transformation>),
}

impl Transformation {
    /// Rotation by the rational point `((m^2-n^2) + 2mn i) / (m^2+n^2)`.
    pub fn pythagorean(m: i64, n: i64) -> Transformation {
        let d = m * m + n * n;
        let re = BigRational::new(BigInt::from(m * m - n * n), BigInt::from(d));
        let im = BigRational::new(BigInt::from(2 * m * n), BigInt::from(d));
        Transformation::Rotation(Gaussian::new(re, im))
    }

    pub fn describe(&self) -> String {
        match self {
            Transformation::Rotation(r) => format!("z -> ({r}) z"),
            Transformation::Scaling(l) => format!("z -> ({l}) z"),
            Transformation::W4Rescale(t) => format!("w4 -> w4/({t})"),
            Transformation::Compose(ts) => ts.iter().map(|t| t.describe()).collect::<Vec<_>>().join("; "),
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Applies `t` and brings the defining equations back to normal form by a
/// real linear change of the `w`'s. Fails when that is impossible.
pub fn transform_model(m: &CRModel, t: &Transformation) -> Result<CRModel, ModuliError> {
    if m.m14_parameters().is_none() {
        return Err(ModuliError::NotInFamily);
    }
    match t {
        Transformation::Compose(ts) => {
            let mut cur = m.clone();
            for s in ts {
                cur = transform_model(&cur, s)?;
            }
            Ok(cur)
        }
        Transformation::W4Rescale(s) => {
            if s.is_zero() {
                return Err(ModuliError::NotAdmissible("w4 rescale by zero".into()));
            }
            let mut polys: Vec<Poly> = m.xi.iter().map(|e| e.rhs.clone()).collect();
            polys[3] = polys[3].scale(&Gaussian::real(s.clone()));
            renormalize(m, polys)
        }
        Transformation::Scaling(l) => {
            if l.is_zero() {
                return Err(ModuliError::NotAdmissible("scaling by zero".into()));
            }
            let c = Gaussian::real(l.clone());
            let mut polys = substitute_z(m, &c);
            let w4 = Gaussian::real(l.pow(4)).inv().expect("nonzero");
            polys[3] = polys[3].scale(&w4);
            renormalize(m, polys)
        }
        Transformation::Rotation(r) => {
            if !r.norm_sqr().is_one() {
                return Err(ModuliError::NotAdmissible(format!("|{r}| != 1")));
            }
            renormalize(m, substitute_z(m, r))
        }
    }
}

fn substitute_z(m: &CRModel, c: &Gaussian) -> Vec<Poly> {
    let cz = Poly::var(Z).scale(c);
    let czb = Poly::var(Z_BAR).scale(&c.conj());
    m.xi.iter()
        .map(|e| e.rhs.substitute(&|v| if v == Z { Some(cz.clone()) } else if v == Z_BAR { Some(czb.clone()) } else { None }))
        .collect()
}

/// Finds a real block-diagonal (by weight) matrix `A` with
/// `A * polys = normal lower polynomials`, keeps the top polynomial as given
/// and reads off `(a', b')`.
fn renormalize(m: &CRModel, polys: Vec<Poly>) -> Result<CRModel, ModuliError> {
    let target = builtin_m14(&Scalar::zero(), &Scalar::zero());
    let mut xi = Vec::new();
    // Weight blocks: w1 alone, (w2, w3) together.
    for block in [vec![0usize], vec![1, 2]] {
        for &j in &block {
            let want = target.rhs(j + 1).expect("lower polynomial");
            let comb = real_combination(&block.iter().map(|&k| polys[k].clone()).collect::<Vec<_>>(), want)
                .ok_or_else(|| ModuliError::NotAdmissible(format!("Xi{} leaves the normal form", j + 1)))?;
            let mut p = Poly::zero();
            for (c, &k) in comb.iter().zip(&block) {
                p = &p + &polys[k].scale(c);
            }
            xi.push(DefiningEquation { j: j + 1, rhs: p });
        }
    }
    xi.push(DefiningEquation { j: 4, rhs: polys[3].clone() });
    let out = CRModel { xi, ..m.clone() };
    let (a, b) = out.m14_parameters().ok_or_else(|| ModuliError::NotAdmissible("Xi4 leaves the family".into()))?;
    Ok(builtin_m14(&a, &b))
}

/// Real coefficients `c` with `sum c_k polys_k = want`, if they exist.
fn real_combination(polys: &[Poly], want: &Poly) -> Option<Vec<Gaussian>> {
    let mut monos: Vec<_> = polys.iter().flat_map(|p| p.terms().iter().map(|(m, _)| m.clone())).collect();
    monos.extend(want.terms().iter().map(|(m, _)| m.clone()));
    monos.sort();
    monos.dedup();
    let n = polys.len();
    let a: linalg::Matrix = monos.iter().map(|m| polys.iter().map(|p| RatFn::constant(p.coeff(m))).collect()).collect();
    let rhs: Vec<RatFn> = monos.iter().map(|m| RatFn::constant(want.coeff(m))).collect();
    // Solve on independent rows, then verify the rest.
    let mut reducer = linalg::RowReducer::new(n);
    let mut picked = Vec::new();
    for (i, row) in a.iter().enumerate() {
        if let linalg::RowStatus::Pivot(_) = reducer.push(row) {
            picked.push(i);
        }
    }
    if reducer.rank() < n {
        return None;
    }
    let x = reducer.particular_solution(&picked.iter().map(|&i| rhs[i].clone()).collect::<Vec<_>>());
    for (row, r) in a.iter().zip(&rhs) {
        let mut acc = RatFn::zero();
        for (c, xi) in row.iter().zip(&x) {
            acc = &acc + &(c * xi);
        }
        if &acc != r {
            return None;
        }
    }
    let out: Vec<Gaussian> = x.iter().map(|v| v.as_constant()).collect::<Option<_>>()?;
    out.iter().all(Gaussian::is_real).then_some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSample {
    pub transformation: Transformation,
    pub a: Scalar,
    pub b: Scalar,
    pub report: InvariantReport,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub seed: u64,
    pub base: InvariantReport,
    pub samples: Vec<OracleSample>,
    pub violations: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "base": self.base.to_json(),
            "samples": self.samples.iter().map(|s| json!({
                "transformation": s.transformation.describe(),
                "a": s.a.to_string(),
                "b": s.b.to_string(),
                "class": s.report.class.tag(),
                "invariant": s.report.invariant.as_ref().map(|r| r.to_string()),
                "verdict": s.verdict.name(),
            })).collect::<Vec<_>>(),
            "violations": self.violations,
            "passed": self.passed(),
        })
    }
}

/// The seed from `CR_MODULI_SEED` if set and valid, else `default`.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(default)
}

fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.gen_range(1..=7);
    let q: i64 = rng.gen_range(1..=5);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A random composition of one to three elementary transformations. Real
/// factors are positive, so the sign of `b` never flips.
pub fn random_transformation(rng: &mut ChaCha8Rng) -> Transformation {
    let k = rng.gen_range(1..=3);
    let steps = (0..k)
        .map(|_| match rng.gen_range(0..3) {
            0 => {
                let m = rng.gen_range(1..=6);
                let n = rng.gen_range(-6..=6);
                Transformation::pythagorean(m, n)
            }
            1 => Transformation::Scaling(small_rational(rng)),
            _ => Transformation::W4Rescale(small_rational(rng)),
        })
        .collect();
    Transformation::Compose(steps)
}

/// Applies `samples` random admissible transformations and checks that the
/// report is unchanged and that each image is declared equivalent.
pub fn invariance_oracle(m: &CRModel, samples: usize, seed: u64) -> Result<OracleReport, ModuliError> {
    let base = cartan_invariant(m, BranchChoice::One(Branch::Plus))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = OracleReport { seed, base: base.clone(), samples: Vec::new(), violations: Vec::new() };
    for n in 0..samples {
        let t = random_transformation(&mut rng);
        let m2 = transform_model(m, &t)?;
        let (a, b) = m2.m14_parameters().ok_or(ModuliError::NotInFamily)?;
        let rep = cartan_invariant(&m2, BranchChoice::One(Branch::Plus))?;
        let cert = decide_from_reports(base.clone(), rep.clone());
        if rep.key() != base.key() {
            out.violations.push(format!("sample {n} ({t}): {rep} differs from {base}"));
        }
        if cert.verdict != Verdict::Equivalent {
            out.violations.push(format!("sample {n} ({t}): not declared equivalent"));
        }
        if let Some(r) = &rep.invariant {
            if !positive_real(r) {
                out.violations.push(format!("sample {n}: R = {r} is not a positive real"));
            }
        }
        out.samples.push(OracleSample { transformation: t, a, b, report: rep, verdict: cert.verdict });
    }
    Ok(out)
}

/// Whether a numeric scalar is a positive real number. Symbolic values pass
/// when real.
pub fn positive_real(r: &Scalar) -> bool {
    match r.as_constant() {
        Some(c) => c.is_real() && c.re.is_positive(),
        None => r.conj() == *r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Scalar {
        parse_scalar(s).unwrap()
    }

    fn m(a: &str, b: &str) -> CRModel {
        builtin_m14(&p(a), &p(b))
    }

    #[test]
    fn invariant_examples() {
        let r = invariant_checked(&m("1+i", "2"), BranchChoice::Both).unwrap();
        assert_eq!(r.class, ModelClass::Generic);
        assert_eq!(r.invariant, Some(RatFn::ratio(1, 2)));
        assert_eq!(invariant_checked(&m("3", "0"), BranchChoice::Both).unwrap().class, ModelClass::B0);
        assert_eq!(invariant_checked(&m("0", "7"), BranchChoice::Both).unwrap().class, ModelClass::M01);
        assert!(matches!(invariant(&m("0", "0"), Pipeline::Cartan), Err(ModuliError::DegenerateModel(_))));
        assert!(matches!(invariant(&m("0", "0"), Pipeline::Lie), Err(ModuliError::DegenerateModel(_))));
    }

    #[test]
    fn symbolic_pipelines_agree() {
        let sym = crate::model::builtin_m14_symbolic();
        let c = invariant(&sym, Pipeline::Cartan).unwrap();
        let l = invariant(&sym, Pipeline::Lie).unwrap();
        assert_eq!(c.invariant, Some(p("a*conj(a)/b^2")));
        assert_eq!(c.key(), l.key());
    }

    #[test]
    fn decisions() {
        let d = |a: (&str, &str), b: (&str, &str)| decide_equivalence(&m(a.0, a.1), &m(b.0, b.1)).unwrap().verdict;
        assert_eq!(d(("1", "2"), ("2", "4")), Verdict::Equivalent);
        assert_eq!(d(("1", "1"), ("1", "2")), Verdict::NotEquivalent);
        assert_eq!(d(("3", "0"), ("5*i", "0")), Verdict::Equivalent);
        assert_eq!(d(("0", "7"), ("0", "1")), Verdict::Equivalent);
        assert_eq!(d(("0", "7"), ("3", "0")), Verdict::NotEquivalent);
        let c = decide_equivalence(&m("1", "2"), &m("2", "4")).unwrap().to_json();
        for k in ["verdict", "class1", "class2", "invariant1", "invariant2", "witness_chain"] {
            assert!(c.get(k).is_some(), "{k}");
        }
        assert_eq!(c["invariant1"], "1/4");
    }

    #[test]
    fn transformation_examples() {
        let base = m("2+i", "3");
        let rot = Transformation::Rotation(Gaussian::new(BigRational::new(3.into(), 5.into()), BigRational::new(4.into(), 5.into())));
        let out = transform_model(&base, &rot).unwrap();
        let rho = p("3/5+4/5*i");
        assert_eq!(out.m14_parameters().unwrap(), (&(&rho * &rho) * &p("2+i"), p("3")));
        let out = transform_model(&base, &Transformation::W4Rescale(BigRational::new(5.into(), 2.into()))).unwrap();
        assert_eq!(out.m14_parameters().unwrap(), (p("5/2*(2+i)"), p("15/2")));
        let out = transform_model(&base, &Transformation::Scaling(BigRational::new(3.into(), 2.into()))).unwrap();
        assert_eq!(out.m14_parameters().unwrap(), (p("2+i"), p("3")));
        assert_eq!(transform_model(&base, &Transformation::Compose(vec![])).unwrap(), base);
        let bad = Transformation::Rotation(Gaussian::complex(1, 1));
        assert!(matches!(transform_model(&base, &bad), Err(ModuliError::NotAdmissible(_))));
    }

    #[test]
    fn rotations_move_arg_a_but_not_r() {
        let mut cur = m("2", "3");
        let mut args = std::collections::BTreeSet::new();
        for k in 1..=10 {
            cur = transform_model(&cur, &Transformation::pythagorean(k, 1)).unwrap();
            let (a, _) = cur.m14_parameters().unwrap();
            args.insert(a.to_string());
            assert_eq!(invariant(&cur, Pipeline::Cartan).unwrap().invariant, Some(RatFn::ratio(4, 9)));
        }
        assert_eq!(args.len(), 10);
    }

    #[test]
    fn oracle_small_run() {
        let rep = invariance_oracle(&m("1+i", "2"), 5, 7).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(rep.samples.iter().all(|s| s.report.invariant == Some(RatFn::ratio(1, 2))));
        let b0 = invariance_oracle(&m("1", "0"), 3, 1).unwrap();
        assert!(b0.passed());
        assert!(b0.samples.iter().all(|s| s.report.class == ModelClass::B0));
    }

    #[test]
    fn report_json_round_trip() {
        for (a, b) in [("1+i", "2"), ("3", "0"), ("0", "5")] {
            let r = invariant_checked(&m(a, b), BranchChoice::One(Branch::Minus)).unwrap();
            assert_eq!(InvariantReport::from_json(&r.to_json()).unwrap(), r);
        }
    }
}
