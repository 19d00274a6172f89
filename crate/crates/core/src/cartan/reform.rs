//! Reduction to the normalized group, prolongation and reformation of the
//! coframe into a form whose coefficients are the invariants.

use super::absorb::Assignment;
use super::group::{GROUP_PARAMS, LIFTED, MC_SYMBOLS};
use super::CartanError;
use crate::algebra::{RatFn, Scalar};
use crate::exterior::{Basis, BasisChange, BasisRef, DiffForm, StructureEquationSet};

/// Coframe after reduction: the six lifted forms and the remaining
/// Maurer–Cartan form `alpha = da1/a1`.
pub const REDUCED: [&str; 7] = ["mu", "sigma", "sigmabar", "rho", "zeta", "zetabar", "alpha"];

pub fn reduced_basis() -> BasisRef {
    Basis::new(&REDUCED, &["mu", "rho", "alpha"], &[("sigma", "sigmabar"), ("zeta", "zetabar")], &["alpha"])
}

fn substitute(x: &Scalar, a: &Assignment) -> Result<Scalar, CartanError> {
    Ok(x.substitute(&|v| a.get(&v).cloned())?)
}

/// Restricts the lifted structure equations to the normalized group:
/// substitutes the assignment, drops the Maurer–Cartan forms other than
/// `alpha1` (they vanish where the normalized parameters are constant) and
/// renames `alpha1` to `alpha`. Fails if a group parameter survives.
pub fn reduce(lifted: &StructureEquationSet, assignment: &Assignment) -> Result<StructureEquationSet, CartanError> {
    let nb = reduced_basis();
    let old = &lifted.basis;
    let images: Vec<DiffForm> = (0..old.len())
        .map(|i| match old.symbol(i) {
            "alpha1" => DiffForm::symbol(&nb, "alpha"),
            s if LIFTED.contains(&s) => DiffForm::symbol(&nb, s),
            _ => DiffForm::zero(&nb, 1),
        })
        .collect();
    let mut out = StructureEquationSet::new("reduced", &nb);
    for sym in LIFTED {
        let rhs = lifted.equation(sym).ok_or_else(|| CartanError::UnexpectedShape(format!("no equation for {sym}")))?;
        let mut terms = Vec::new();
        for (idx, c) in rhs.terms() {
            let v = substitute(c, assignment)?;
            if v.vars().iter().any(|x| GROUP_PARAMS.contains(x)) {
                return Err(CartanError::NormalizationFailed(format!("coefficient {v} of d{sym} still depends on the group")));
            }
            terms.push((idx.iter().map(|&i| i as usize).collect::<Vec<_>>(), v));
        }
        let sub = DiffForm::from_terms(old, 2, terms);
        out.set(sym, sub.change_basis(&nb, &images));
    }
    out.note(format!("normalized: {}", assignment_text(assignment)));
    Ok(out)
}

/// Checks that the Maurer–Cartan forms other than `alpha1` have no `da1`
/// component once the assignment is substituted, so that they vanish on the
/// reduced group.
pub fn check_reduction(mc_coefficients: &[Vec<Scalar>], assignment: &Assignment) -> Result<(), CartanError> {
    for (s, row) in mc_coefficients.iter().enumerate().skip(1) {
        let v = substitute(&row[0], assignment)?;
        if !v.is_zero() {
            return Err(CartanError::UnexpectedShape(format!("{} keeps a da1 component {v}", MC_SYMBOLS[s])));
        }
    }
    Ok(())
}

pub fn assignment_text(a: &Assignment) -> String {
    let parts: Vec<String> = a.iter().map(|(v, x)| format!("{} = {}", v.name(), x)).collect();
    parts.join(", ")
}

/// Appends `d alpha = 0`. Idempotent.
pub fn prolong(s: &StructureEquationSet) -> StructureEquationSet {
    let mut out = s.clone().with_stage("prolonged");
    if out.equation("alpha").is_none() {
        out.set("alpha", DiffForm::zero(&out.basis, 2));
        out.note("prolonged: d(alpha) = 0");
    }
    out
}

/// Model class read from the prolonged equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelClass {
    /// `a != 0`, `b != 0`.
    Generic,
    /// `b = 0`, `a != 0`.
    B0,
    /// `a = 0`, `b != 0`.
    M01,
}

impl ModelClass {
    pub fn tag(self) -> &'static str {
        match self {
            ModelClass::Generic => "generic",
            ModelClass::B0 => "B0",
            ModelClass::M01 => "M01",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reformed {
    pub class: ModelClass,
    /// Every set produced along the way, the canonical one last.
    pub stages: Vec<StructureEquationSet>,
    pub invariants: Vec<(String, Scalar)>,
}

impl Reformed {
    pub fn canonical(&self) -> &StructureEquationSet {
        self.stages.last().expect("at least one stage")
    }

    pub fn stage(&self, name: &str) -> Option<&StructureEquationSet> {
        self.stages.iter().find(|s| s.stage == name)
    }
}

/// Coefficients `(a, c, conj(a))` of `d mu` on `sigma/\zeta`,
/// `sigma/\zetabar` and `sigmabar/\zetabar`.
pub fn model_coefficients(p: &StructureEquationSet) -> (Scalar, Scalar, Scalar) {
    (p.coeff("mu", "sigma", "zeta"), p.coeff("mu", "sigma", "zetabar"), p.coeff("mu", "sigmabar", "zetabar"))
}

/// Rescales the prolonged coframe so that all coefficients but the
/// invariants become absolute constants.
pub fn reform(p: &StructureEquationSet) -> Result<Reformed, CartanError> {
    let (a, c, abar) = model_coefficients(p);
    if a.is_zero() && c.is_zero() {
        return Err(CartanError::UnexpectedShape("d(mu) has no sigma/zeta terms".into()));
    }
    if c.is_zero() {
        return reform_b0(p, &a, &abar);
    }
    let cp = &RatFn::ratio(3, 2) * &c;
    let ch1 = BasisChange::new(&p.basis, &[("mu", "mu_new")], &[("mu", vec![("mu_new", cp.clone())])], &[], &["mu_new"])?;
    let mut s1 = p.apply_change(&ch1)?.with_stage("reform-1");
    s1.note("mu = c' mu_new, c' = 3c/2");
    if a.is_zero() {
        return Ok(Reformed { class: ModelClass::M01, stages: vec![s1], invariants: Vec::new() });
    }
    let k = cp.checked_div(&a)?;
    let kinv = a.checked_div(&cp)?;
    let ch2 = BasisChange::new(
        &s1.basis,
        &[("sigma", "sigma_new"), ("rho", "rho_new"), ("zetabar", "zetabar_new")],
        &[
            ("sigma", vec![("sigma_new", k.clone())]),
            ("rho", vec![("rho_new", k.clone())]),
            ("zetabar", vec![("zetabar_new", kinv)]),
        ],
        &[],
        &[],
    )?;
    let mut s2 = s1.apply_change(&ch2)?.with_stage("reform-2");
    s2.note("sigma = (c'/a) sigma_new, rho = (c'/a) rho_new, zetabar = (a/c') zetabar_new");

    // conj(rho_new) = (conj(a)/a) rho_new, so d(rho_new) may be traded for
    // d(rhobar_new) written over the coframe with rho_new replaced.
    let mut s3 = s2.extend_basis(&["rhobar_new"], &[], &[("rho_new", "rhobar_new")]).with_stage("reform-3");
    let ratio = abar.checked_div(&a)?;
    let back = s3.form("rhobar_new").scale(&a.checked_div(&abar)?);
    s3.derive_equation("rho_new", "rhobar_new", &ratio, &[("rho_new", back)])?;
    move_into_place(&mut s3, "rho_new", "rhobar_new");
    s3.note("swap: d(rho_new) replaced by d(rhobar_new), rhobar_new = (conj(a)/a) rho_new");

    let r = s3.coeff("mu_new", "sigmabar", "zetabar_new");
    let r2 = s3.coeff("rhobar_new", "zeta", "zetabar_new").checked_div(&RatFn::i())?;
    if r != r2 {
        return Err(CartanError::UnexpectedShape(format!("invariant read as {r} and {r2}")));
    }
    Ok(Reformed { class: ModelClass::Generic, stages: vec![s1, s2, s3], invariants: vec![("R".into(), r)] })
}

/// Replaces the equation of `old` by that of `new`, keeping its position.
fn move_into_place(s: &mut StructureEquationSet, old: &str, new: &str) {
    let (Some(o), Some(n)) = (s.basis.index(old), s.basis.index(new)) else { return };
    let Some(pos) = s.equations.iter().position(|e| e.lhs == o) else { return };
    if let Some(k) = s.equations.iter().position(|e| e.lhs == n) {
        let e = s.equations.remove(k);
        s.equations[pos] = e;
    }
}

fn reform_b0(p: &StructureEquationSet, a: &Scalar, abar: &Scalar) -> Result<Reformed, CartanError> {
    let ch = BasisChange::new(
        &p.basis,
        &[("sigma", "sigma_new"), ("sigmabar", "sigmabar_new"), ("rho", "rho_new")],
        &[
            ("sigma", vec![("sigma_new", a.inv()?)]),
            ("sigmabar", vec![("sigmabar_new", abar.inv()?)]),
            ("rho", vec![("rho_new", a.inv()?)]),
        ],
        &[("sigma_new", "sigmabar_new")],
        &[],
    )?;
    let s1 = p.apply_change(&ch)?;
    let mut s = s1.extend_basis(&["rho", "rhobar_new"], &["rho"], &[("rho_new", "rhobar_new")]).with_stage("reform-b0");
    s.note("sigma = sigma_new/a, sigmabar = sigmabar_new/conj(a), rho = rho_new/a");
    // rhobar_new = conj(a) rho = (conj(a)/a) rho_new
    let back = s.form("rhobar_new").scale(&a.checked_div(abar)?);
    let rhs = s.equation("sigmabar_new").ok_or_else(|| CartanError::UnexpectedShape("no d(sigmabar_new)".into()))?.clone();
    let rhs = s.substitute_form(&rhs, "rho_new", &back)?;
    s.set("sigmabar_new", rhs);
    let back = s.form("rho").scale(a);
    s.derive_equation("rho_new", "rho", &a.inv()?, &[("rho_new", back)])?;
    move_into_place(&mut s, "rho_new", "rho");
    s.note("d(rho) restored over rho = rho_new/a; d(sigmabar_new) over rhobar_new");
    for e in &s.equations {
        if let Some((_, c)) = e.rhs.terms().find(|(_, c)| !c.is_constant()) {
            return Err(CartanError::UnexpectedShape(format!("non-constant coefficient {c} in d({})", s.basis.symbol(e.lhs))));
        }
    }
    Ok(Reformed { class: ModelClass::B0, stages: vec![s], invariants: Vec::new() })
}
