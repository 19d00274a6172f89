//! Graded Lie algebras given by structure constants, their Maurer–Cartan
//! equations, and the rescaling chain that exposes the invariant.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{parse_scalar, var, AlgebraError, RatFn, Scalar};
use crate::exterior::{dual_structure_with, Basis, ExteriorError, StructureEquationSet};
use crate::vecfield::StructureFunctions;

pub use crate::exterior::BasisChange;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("Jacobi identity fails for ({0}, {1}, {2})")]
    JacobiViolation(String, String, String),
    #[error("bracket [{0}, {1}] has a {2} component outside the expected degree")]
    GradingViolation(String, String, String),
    #[error("unknown basis symbol {0}")]
    UnknownSymbol(String),
    #[error("bracket [{0}, {1}] is given inconsistently")]
    Inconsistent(String, String),
    #[error("basis change is not invertible")]
    BasisNotInvertible,
    #[error("malformed table: {0}")]
    Table(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    symbols: Vec<String>,
    weights: Vec<i32>,
    /// `[E_i, E_j] = sum_k table[(i,j)][k] E_k` for `i < j`.
    table: BTreeMap<(usize, usize), Vec<Scalar>>,
}

/// Outcome of the degree check: brackets with a component in the wrong degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradingReport {
    pub violations: Vec<(String, String, String)>,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GradedLieAlgebra {
    /// Builds and validates an algebra from bracket entries
    /// `(X, Y, [(Z, c), ...])` meaning `[X, Y] = sum c Z`. Unlisted brackets
    /// vanish.
    pub fn from_table(symbols: &[&str], weights: &[i32], entries: &[(&str, &str, Vec<(&str, Scalar)>)]) -> Result<Self, LieError> {
        let alg = GradedLieAlgebra::unchecked(symbols, weights, entries)?;
        if let Some((i, j, k)) = alg.jacobi_violations().first() {
            return Err(LieError::JacobiViolation(alg.symbols[*i].clone(), alg.symbols[*j].clone(), alg.symbols[*k].clone()));
        }
        if let Some((x, y, z)) = alg.grading_check().violations.first() {
            return Err(LieError::GradingViolation(x.clone(), y.clone(), z.clone()));
        }
        Ok(alg)
    }

    /// Builds the tensor without validation.
    pub fn unchecked(symbols: &[&str], weights: &[i32], entries: &[(&str, &str, Vec<(&str, Scalar)>)]) -> Result<Self, LieError> {
        if symbols.len() != weights.len() {
            return Err(LieError::Table("one weight per basis symbol".into()));
        }
        let n = symbols.len();
        let idx = |s: &str| symbols.iter().position(|x| *x == s).ok_or_else(|| LieError::UnknownSymbol(s.into()));
        let mut table: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (x, y, combo) in entries {
            let (i, j) = (idx(x)?, idx(y)?);
            let mut v = vec![RatFn::zero(); n];
            for (z, c) in combo {
                let k = idx(z)?;
                v[k] = &v[k] + c;
            }
            if i == j {
                if v.iter().any(|c| !c.is_zero()) {
                    return Err(LieError::Inconsistent(x.to_string(), y.to_string()));
                }
                continue;
            }
            let (key, v) = if i < j { ((i, j), v) } else { ((j, i), v.into_iter().map(|c| -c).collect()) };
            if let Some(old) = table.get(&key) {
                if *old != v {
                    return Err(LieError::Inconsistent(x.to_string(), y.to_string()));
                }
            }
            if v.iter().any(|c| !c.is_zero()) {
                table.insert(key, v);
            }
        }
        Ok(GradedLieAlgebra { symbols: symbols.iter().map(|s| s.to_string()).collect(), weights: weights.to_vec(), table })
    }

    pub fn dim(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    pub fn index(&self, s: &str) -> Option<usize> {
        self.symbols.iter().position(|x| x == s)
    }

    /// `c^k_ij` with antisymmetric completion.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => RatFn::zero(),
            std::cmp::Ordering::Less => self.table.get(&(i, j)).map(|v| v[k].clone()).unwrap_or_else(RatFn::zero),
            std::cmp::Ordering::Greater => -self.coeff(j, i, k),
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| self.coeff(i, j, k)).collect()
    }

    /// Triples `i < j < k` on which the cyclic Jacobi sum is nonzero.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.jacobi_sum(i, j, k).iter().all(|c| c.is_zero()) {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    /// `[[Ei,Ej],Ek] + [[Ej,Ek],Ei] + [[Ek,Ei],Ej]` in components.
    pub fn jacobi_sum(&self, i: usize, j: usize, k: usize) -> Vec<Scalar> {
        let n = self.dim();
        let mut acc = vec![RatFn::zero(); n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for l in 0..n {
                let x = self.coeff(a, b, l);
                if x.is_zero() {
                    continue;
                }
                for (m, slot) in acc.iter_mut().enumerate() {
                    let y = self.coeff(l, c, m);
                    if !y.is_zero() {
                        *slot = &*slot + &(&x * &y);
                    }
                }
            }
        }
        acc
    }

    /// Checks `[g_p, g_q]` lies in `g_{p+q}` entry by entry.
    pub fn grading_check(&self) -> GradingReport {
        let mut report = GradingReport::default();
        for (&(i, j), v) in &self.table {
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() && self.weights[k] != self.weights[i] + self.weights[j] {
                    report.violations.push((self.symbols[i].clone(), self.symbols[j].clone(), self.symbols[k].clone()));
                }
            }
        }
        report
    }

    pub fn with_weights(&self, weights: &[i32]) -> GradedLieAlgebra {
        GradedLieAlgebra { weights: weights.to_vec(), ..self.clone() }
    }

    pub fn structure_functions(&self) -> StructureFunctions {
        StructureFunctions { roles: self.symbols.clone(), table: self.table.clone() }
    }

    /// Parses `{basis:[{sym, weight}], brackets:[{i, j, coeffs:{sym: scalar}}]}`;
    /// `i` and `j` are symbols or indices.
    pub fn from_json(v: &Value) -> Result<Self, LieError> {
        let bad = |m: &str| LieError::Table(m.to_string());
        let basis = v.get("basis").and_then(|b| b.as_array()).ok_or_else(|| bad("missing basis"))?;
        let mut symbols = Vec::new();
        let mut weights = Vec::new();
        for e in basis {
            symbols.push(e.get("sym").and_then(|s| s.as_str()).ok_or_else(|| bad("basis entry without sym"))?.to_string());
            weights.push(e.get("weight").and_then(|w| w.as_i64()).ok_or_else(|| bad("basis entry without integer weight"))? as i32);
        }
        let pick = |x: Option<&Value>| -> Result<String, LieError> {
            match x {
                Some(Value::String(s)) => Ok(s.clone()),
                Some(Value::Number(n)) => {
                    let k = n.as_u64().ok_or_else(|| bad("bad index"))? as usize;
                    symbols.get(k).cloned().ok_or_else(|| bad("index out of range"))
                }
                _ => Err(bad("bracket entry needs i and j")),
            }
        };
        let mut entries: Vec<(String, String, Vec<(String, Scalar)>)> = Vec::new();
        for e in v.get("brackets").and_then(|b| b.as_array()).map(|a| a.as_slice()).unwrap_or(&[]) {
            let i = pick(e.get("i"))?;
            let j = pick(e.get("j"))?;
            let mut combo = Vec::new();
            if let Some(obj) = e.get("coeffs").and_then(|c| c.as_object()) {
                for (s, c) in obj {
                    let text = c.as_str().map(|s| s.to_string()).unwrap_or_else(|| c.to_string());
                    combo.push((s.clone(), parse_scalar(&text)?));
                }
            }
            entries.push((i, j, combo));
        }
        let syms: Vec<&str> = symbols.iter().map(|s| s.as_str()).collect();
        let ents: Vec<(&str, &str, Vec<(&str, Scalar)>)> =
            entries.iter().map(|(i, j, c)| (i.as_str(), j.as_str(), c.iter().map(|(s, x)| (s.as_str(), x.clone())).collect())).collect();
        GradedLieAlgebra::from_table(&syms, &weights, &ents)
    }

    pub fn to_json(&self) -> Value {
        let basis: Vec<Value> = self.symbols.iter().zip(&self.weights).map(|(s, w)| json!({"sym": s, "weight": w})).collect();
        let brackets: Vec<Value> = self
            .table
            .iter()
            .map(|(&(i, j), v)| {
                let coeffs: serde_json::Map<String, Value> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (self.symbols[k].clone(), Value::String(c.to_string())))
                    .collect();
                json!({"i": self.symbols[i], "j": self.symbols[j], "coeffs": coeffs})
            })
            .collect();
        json!({"basis": basis, "brackets": brackets})
    }
}

impl fmt::Display for GradedLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(i, j), v) in &self.table {
            let parts: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| if c.is_one() { self.symbols[k].clone() } else { format!("({c})*{}", self.symbols[k]) })
                .collect();
            writeln!(f, "[{}, {}] = {}", self.symbols[i], self.symbols[j], parts.join(" + "))?;
        }
        Ok(())
    }
}

/// Basis of the real algebra `g(r, b)`.
pub const G_RB_SYMBOLS: [&str; 6] = ["L", "Ltilde", "T", "S", "Stilde", "U"];
pub const G_RB_WEIGHTS: [i32; 6] = [-1, -1, -2, -3, -3, -4];

/// The real bracket table of `g(r, b)`.
pub fn g_rb(r: &Scalar, b: &Scalar) -> Result<GradedLieAlgebra, LieError> {
    let r2 = r * r;
    let rb = r * b;
    let three_halves_r2 = &RatFn::ratio(3, 2) * &r2;
    GradedLieAlgebra::from_table(
        &G_RB_SYMBOLS,
        &G_RB_WEIGHTS,
        &[
            ("L", "Ltilde", vec![("T", -&r2)]),
            ("L", "T", vec![("Stilde", &RatFn::int(-2) * r)]),
            ("L", "Stilde", vec![("U", &three_halves_r2 - &rb)]),
            ("Ltilde", "T", vec![("S", &RatFn::int(-2) * r)]),
            ("Ltilde", "S", vec![("U", -(&three_halves_r2 + &rb))]),
        ],
    )
}

/// `g(r, b)` with symbolic `r` and `b`.
pub fn g_rb_symbolic() -> GradedLieAlgebra {
    g_rb(&RatFn::var(var::R), &RatFn::var(var::B)).expect("fixture is valid")
}

/// Dual symbols of `(U, S, Stilde, T, L, Ltilde)`.
pub const G_RB_DUAL: [&str; 6] = ["mu''", "sigma''", "sigmatilde''", "rho''", "zeta''", "zetatilde''"];
const G_RB_DUAL_ROLES: [&str; 6] = ["U", "S", "Stilde", "T", "L", "Ltilde"];

/// Maurer–Cartan equations `d a^k = -sum_{i<j} c^k_ij a^i /\ a^j`. The
/// algebra `g(r, b)` uses the dual ordering of `(U, S, Stilde, T, L, Ltilde)`;
/// any other algebra gets symbols `omega_<X>` in its own order.
pub fn maurer_cartan(l: &GradedLieAlgebra) -> StructureEquationSet {
    let t = l.structure_functions();
    let is_grb = l.symbols.len() == 6 && G_RB_SYMBOLS.iter().all(|s| l.index(s).is_some());
    if is_grb {
        let basis = Basis::new(&G_RB_DUAL, &G_RB_DUAL, &[], &[]);
        return dual_structure_with(&t, &basis, &G_RB_DUAL_ROLES, "maurer-cartan").expect("shapes agree");
    }
    let names: Vec<String> = l.symbols.iter().map(|s| format!("omega_{s}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let basis = Basis::new(&refs, &refs, &[], &[]);
    let roles: Vec<&str> = l.symbols.iter().map(|s| s.as_str()).collect();
    dual_structure_with(&t, &basis, &roles, "maurer-cartan").expect("shapes agree")
}

/// Applies the changes in order.
pub fn rescale_chain(s: &StructureEquationSet, chain: &[BasisChange]) -> Result<StructureEquationSet, LieError> {
    let mut cur = s.clone();
    for ch in chain {
        cur = cur.apply_change(ch).map_err(|e| match e {
            ExteriorError::Dependent => LieError::BasisNotInvertible,
            other => LieError::Exterior(other),
        })?;
    }
    Ok(cur)
}

fn change(
    s: &StructureEquationSet,
    renames: &[(&str, &str)],
    relations: &[(&str, Vec<(&str, Scalar)>)],
) -> Result<BasisChange, LieError> {
    let new_names: Vec<String> = s
        .basis
        .symbols()
        .iter()
        .map(|x| renames.iter().find(|(o, _)| o == x).map(|(_, n)| n.to_string()).unwrap_or_else(|| x.clone()))
        .collect();
    let real: Vec<&str> = new_names.iter().map(|x| x.as_str()).collect();
    BasisChange::new(&s.basis, renames, relations, &[], &real).map_err(|e| match e {
        ExteriorError::Dependent => LieError::BasisNotInvertible,
        other => LieError::Exterior(other),
    })
}

/// Stages of the rescaling of the Maurer–Cartan equations of `g(r, b)`.
#[derive(Clone, Debug)]
pub struct LiePipeline {
    pub maurer_cartan: StructureEquationSet,
    /// After `zeta'' = zeta'/r` and the real splitting of the `zeta`, `sigma` pairs.
    pub split: StructureEquationSet,
    /// After the scalings that normalise all but one coefficient (`b != 0`).
    pub normalized: Option<StructureEquationSet>,
    /// Coefficient of `zeta_new /\ sigma` in `d mu_new`.
    pub coefficient: Option<Scalar>,
}

/// `zeta'' = zeta'/r`, `zetatilde'' = zetatilde'/r`.
pub fn inverse_r_scaling(s: &StructureEquationSet, r: &Scalar) -> Result<BasisChange, LieError> {
    let inv_r = r.inv()?;
    change(
        s,
        &[("zeta''", "zeta'"), ("zetatilde''", "zetatilde'")],
        &[("zeta''", vec![("zeta'", inv_r.clone())]), ("zetatilde''", vec![("zetatilde'", inv_r)])],
    )
}

/// `zeta' = zeta + zetatilde`, `zetatilde' = zeta - zetatilde`,
/// `sigma'' = sigma + sigmatilde`, `sigmatilde'' = -sigma + sigmatilde`;
/// remaining primes are dropped.
pub fn real_split(s: &StructureEquationSet) -> Result<BasisChange, LieError> {
    let one = RatFn::one;
    change(
        s,
        &[
            ("mu''", "mu"),
            ("sigma''", "sigma"),
            ("sigmatilde''", "sigmatilde"),
            ("rho''", "rho"),
            ("zeta'", "zeta"),
            ("zetatilde'", "zetatilde"),
        ],
        &[
            ("zeta'", vec![("zeta", one()), ("zetatilde", one())]),
            ("zetatilde'", vec![("zeta", one()), ("zetatilde", -one())]),
            ("sigma''", vec![("sigma", one()), ("sigmatilde", one())]),
            ("sigmatilde''", vec![("sigma", -one()), ("sigmatilde", one())]),
        ],
    )
}

/// `mu = 2b mu_new`, `sigmatilde = 2b/(3r) sigmatilde_new`,
/// `zeta = 3r/(2b) zeta_new`.
pub fn b_scaling(s: &StructureEquationSet, r: &Scalar, b: &Scalar) -> Result<BasisChange, LieError> {
    let two_b = &RatFn::int(2) * b;
    let three_r = &RatFn::int(3) * r;
    let k = two_b.checked_div(&three_r)?;
    change(
        s,
        &[("mu", "mu_new"), ("sigmatilde", "sigmatilde_new"), ("zeta", "zeta_new")],
        &[
            ("mu", vec![("mu_new", two_b.clone())]),
            ("sigmatilde", vec![("sigmatilde_new", k.clone())]),
            ("zeta", vec![("zeta_new", k.inv()?)]),
        ],
    )
}

/// Runs the full chain. The `b != 0` stages are skipped when `b` is zero.
pub fn lie_pipeline(r: &Scalar, b: &Scalar) -> Result<LiePipeline, LieError> {
    let alg = g_rb(r, b)?;
    let mc = maurer_cartan(&alg);
    let c1 = inverse_r_scaling(&mc, r)?;
    let s1 = rescale_chain(&mc, std::slice::from_ref(&c1))?;
    let c2 = real_split(&s1)?;
    let mut split = rescale_chain(&s1, std::slice::from_ref(&c2))?.with_stage("real-split");
    split.note("zeta'' = zeta'/r; zeta' = zeta + zetatilde, sigma'' = sigma + sigmatilde");
    if b.is_zero() {
        return Ok(LiePipeline { maurer_cartan: mc, split, normalized: None, coefficient: None });
    }
    let c3 = b_scaling(&split, r, b)?;
    let scaled = rescale_chain(&split, std::slice::from_ref(&c3))?;
    // rho_new = 2b/(3r) rho takes the place of d rho.
    let mut normalized = scaled.extend_basis(&["rho_new"], &["rho_new"], &[]).with_stage("normalized");
    let factor = (&RatFn::int(2) * b).checked_div(&(&RatFn::int(3) * r))?;
    normalized.derive_equation("rho", "rho_new", &factor, &[])?;
    normalized.remove("rho");
    normalized.note("mu = 2b mu_new, sigmatilde = 2b/(3r) sigmatilde_new, zeta = 3r/(2b) zeta_new, rho_new = 2b/(3r) rho");
    let coefficient = normalized.coeff("mu_new", "zeta_new", "sigma");
    Ok(LiePipeline { maurer_cartan: mc, split, normalized: Some(normalized), coefficient: Some(coefficient) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Scalar {
        parse_scalar(s).unwrap()
    }

    /// Independent Jacobi evaluation through explicit matrices of `ad`.
    fn brute_force_jacobi_ok(l: &GradedLieAlgebra) -> bool {
        let n = l.dim();
        let ad = |i: usize| -> Vec<Vec<Scalar>> { (0..n).map(|k| (0..n).map(|j| l.coeff(i, j, k)).collect()).collect() };
        let mul = |a: &Vec<Vec<Scalar>>, b: &Vec<Vec<Scalar>>| crate::linalg::mat_mul(a, b);
        // ad is a homomorphism: [ad_i, ad_j] = ad_[i,j]
        for i in 0..n {
            for j in 0..n {
                let (ai, aj) = (ad(i), ad(j));
                let lhs = mul(&ai, &aj);
                let rhs = mul(&aj, &ai);
                for r in 0..n {
                    for c in 0..n {
                        let comm = &lhs[r][c] - &rhs[r][c];
                        let mut target = RatFn::zero();
                        for k in 0..n {
                            let x = l.coeff(i, j, k);
                            if !x.is_zero() {
                                target = &target + &(&x * &l.coeff(k, c, r));
                            }
                        }
                        if comm != target {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn fixture_is_valid_and_graded() {
        let g = g_rb_symbolic();
        assert!(g.jacobi_violations().is_empty());
        assert!(brute_force_jacobi_ok(&g));
        // Weights in the order (L, Ltilde, S, Stilde, T, U).
        let w = [-1, -1, -3, -3, -2, -4];
        let order = ["L", "Ltilde", "S", "Stilde", "T", "U"];
        let mut weights = vec![0; 6];
        for (s, x) in order.iter().zip(w) {
            weights[g.index(s).unwrap()] = x;
        }
        assert!(g.with_weights(&weights).grading_check().passed());
        weights[g.index("U").unwrap()] = -3;
        let rep = g.with_weights(&weights).grading_check();
        assert_eq!(rep.violations[0], ("L".into(), "Stilde".into(), "U".into()));
    }

    #[test]
    fn negated_entry_agrees_with_brute_force() {
        let (r, b) = (RatFn::var(var::R), RatFn::var(var::B));
        let r2 = &r * &r;
        let e = -(&(&RatFn::ratio(3, 2) * &r2) - &(&r * &b));
        let entries = vec![
            ("L", "Ltilde", vec![("T", -&r2)]),
            ("L", "T", vec![("Stilde", &RatFn::int(-2) * &r)]),
            ("L", "Stilde", vec![("U", e)]),
            ("Ltilde", "T", vec![("S", &RatFn::int(-2) * &r)]),
            ("Ltilde", "S", vec![("U", -(&(&RatFn::ratio(3, 2) * &r2) + &(&r * &b)))]),
        ];
        let raw = GradedLieAlgebra::unchecked(&G_RB_SYMBOLS, &G_RB_WEIGHTS, &entries).unwrap();
        let checked = GradedLieAlgebra::from_table(&G_RB_SYMBOLS, &G_RB_WEIGHTS, &entries);
        assert_eq!(checked.is_ok(), brute_force_jacobi_ok(&raw));
    }

    #[test]
    fn heisenberg_and_abelian() {
        let h = GradedLieAlgebra::from_table(&["X", "Y", "Z"], &[-1, -1, -2], &[("X", "Y", vec![("Z", RatFn::one())])]).unwrap();
        let mc = maurer_cartan(&h);
        assert_eq!(mc.coeff("omega_Z", "omega_X", "omega_Y"), RatFn::int(-1));
        assert!(mc.closure_defect("omega_Z").unwrap().is_zero());
        let a = GradedLieAlgebra::from_table(&["X", "Y"], &[5, -7], &[]).unwrap();
        assert!(a.grading_check().passed());
        assert!(maurer_cartan(&a).equations.iter().all(|e| e.rhs.is_zero()));
    }

    #[test]
    fn maurer_cartan_of_fixture() {
        let mc = maurer_cartan(&g_rb_symbolic());
        assert_eq!(mc.coeff("mu''", "zeta''", "sigmatilde''"), p("r*b - 3/2*r^2"));
        assert_eq!(mc.coeff("mu''", "zetatilde''", "sigma''"), p("r*b + 3/2*r^2"));
        assert_eq!(mc.equation("mu''").unwrap().len(), 2);
        assert_eq!(mc.coeff("sigma''", "zetatilde''", "rho''"), p("2*r"));
        assert_eq!(mc.coeff("sigmatilde''", "zeta''", "rho''"), p("2*r"));
        assert_eq!(mc.coeff("rho''", "zeta''", "zetatilde''"), p("r^2"));
        for s in G_RB_DUAL {
            assert!(mc.closure_defect(s).unwrap().is_zero(), "{s}");
        }
    }

    #[test]
    fn pipeline_on_fixture() {
        let (r, b) = (RatFn::var(var::R), RatFn::var(var::B));
        let out = lie_pipeline(&r, &b).unwrap();
        let s = &out.split;
        assert_eq!(s.coeff("mu", "zeta", "sigma"), p("3*r"));
        assert_eq!(s.coeff("mu", "zeta", "sigmatilde"), p("2*b"));
        assert_eq!(s.coeff("mu", "zetatilde", "sigma"), p("-2*b"));
        assert_eq!(s.coeff("mu", "zetatilde", "sigmatilde"), p("-3*r"));
        assert_eq!(s.coeff("sigma", "zetatilde", "rho"), p("-2"));
        assert_eq!(s.coeff("sigmatilde", "zeta", "rho"), p("2"));
        assert_eq!(s.coeff("rho", "zeta", "zetatilde"), p("-2"));
        let n = out.normalized.unwrap();
        assert_eq!(out.coefficient.unwrap(), p("9/4*r^2/b^2"));
        assert_eq!(n.coeff("mu_new", "zeta_new", "sigmatilde_new"), p("1"));
        assert_eq!(n.coeff("mu_new", "zetatilde", "sigma"), p("-1"));
        assert_eq!(n.coeff("mu_new", "zetatilde", "sigmatilde_new"), p("-1"));
        assert_eq!(n.coeff("sigmatilde_new", "zeta_new", "rho"), p("9/2*r^2/b^2"));
        assert_eq!(n.coeff("rho_new", "zeta_new", "zetatilde"), p("-2"));
    }

    #[test]
    fn chain_composition() {
        let (r, b) = (RatFn::var(var::R), RatFn::var(var::B));
        let mc = maurer_cartan(&g_rb(&r, &b).unwrap());
        let c1 = inverse_r_scaling(&mc, &r).unwrap();
        let s1 = rescale_chain(&mc, std::slice::from_ref(&c1)).unwrap();
        let c2 = real_split(&s1).unwrap();
        let two = rescale_chain(&mc, &[c1.clone(), c2.clone()]).unwrap();
        let one = rescale_chain(&mc, &[c1.then(&c2).unwrap()]).unwrap();
        assert_eq!(two, one);
        assert_eq!(rescale_chain(&mc, &[]).unwrap(), mc);
    }

    #[test]
    fn json_roundtrip() {
        let g = g_rb_symbolic();
        let back = GradedLieAlgebra::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let v = serde_json::json!({
            "basis": [{"sym": "X", "weight": -1}, {"sym": "Y", "weight": -1}, {"sym": "Z", "weight": -2}],
            "brackets": [{"i": 0, "j": "Y", "coeffs": {"Z": "2"}}]
        });
        let h = GradedLieAlgebra::from_json(&v).unwrap();
        assert_eq!(h.coeff(1, 0, 2), RatFn::int(-2));
    }
}
