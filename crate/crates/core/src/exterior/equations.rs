//! Structure equations `d theta = ...` with basis changes and emitters.

use std::fmt;

use serde_json::{json, Value};

use super::form::{Basis, BasisRef, DiffForm};
use super::{symbol_latex, ExteriorError};
use crate::algebra::{latex::ratfn_latex, RatFn, Scalar};
use crate::linalg::{self, Matrix};
use crate::vecfield::{Frame, StructureFunctions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: usize,
    pub rhs: DiffForm,
}

/// A system `d theta_k = rhs_k` over a basis. Not every basis symbol needs
/// an equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEquationSet {
    pub stage: String,
    pub basis: BasisRef,
    pub equations: Vec<Equation>,
    /// Justifications of the steps that produced this set.
    pub notes: Vec<String>,
}

/// Invertible change of 1-form basis: `old_i = sum_j relation[i][j] new_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    pub old: BasisRef,
    pub new: BasisRef,
    pub relation: Matrix,
}

impl BasisChange {
    /// New symbols are the old ones with `renames` applied. An old symbol
    /// listed in `relations` becomes the given combination of new symbols;
    /// any other old symbol equals its renamed self. Conjugation data is kept
    /// only for symbols left untouched, plus the pairs given in `conj_pairs`.
    pub fn new(
        old: &BasisRef,
        renames: &[(&str, &str)],
        relations: &[(&str, Vec<(&str, Scalar)>)],
        conj_pairs: &[(&str, &str)],
        real: &[&str],
    ) -> Result<BasisChange, ExteriorError> {
        for o in renames.iter().map(|(o, _)| *o).chain(relations.iter().map(|(o, _)| *o)) {
            if old.index(o).is_none() {
                return Err(ExteriorError::UnknownSymbol(o.to_string()));
            }
        }
        let new_names: Vec<String> = old
            .symbols()
            .iter()
            .map(|s| renames.iter().find(|(o, _)| o == s).map(|(_, n)| n.to_string()).unwrap_or_else(|| s.clone()))
            .collect();
        let n = old.len();
        let changed: Vec<bool> = (0..n)
            .map(|i| renames.iter().any(|(o, _)| *o == old.symbol(i)) || relations.iter().any(|(o, _)| *o == old.symbol(i)))
            .collect();
        let mut keep_real = Vec::new();
        let mut keep_pairs = Vec::new();
        for i in 0..n {
            if let Some(j) = old.conj_index(i) {
                if changed[i] || changed[j] {
                    continue;
                }
                if i == j {
                    keep_real.push(new_names[i].clone());
                } else if i < j {
                    keep_pairs.push((new_names[i].clone(), new_names[j].clone()));
                }
            }
        }
        let mc: Vec<&str> = (0..n).filter(|&i| old.is_mc(i)).map(|i| new_names[i].as_str()).collect();
        let mut real_all: Vec<&str> = keep_real.iter().map(|s| s.as_str()).collect();
        real_all.extend_from_slice(real);
        let mut pairs_all: Vec<(&str, &str)> = keep_pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        pairs_all.extend_from_slice(conj_pairs);
        let new = Basis::from_owned(new_names.clone(), &real_all, &pairs_all, &mc);
        let mut relation = linalg::identity(n);
        for (o, combo) in relations {
            let i = old.index(o).expect("checked");
            let mut row = vec![RatFn::zero(); n];
            for (s, c) in combo {
                let j = new.index(s).ok_or_else(|| ExteriorError::UnknownSymbol(s.to_string()))?;
                row[j] = &row[j] + c;
            }
            relation[i] = row;
        }
        if linalg::determinant(&relation).is_zero() {
            return Err(ExteriorError::Dependent);
        }
        Ok(BasisChange { old: old.clone(), new, relation })
    }

    /// The single change equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &BasisChange) -> Result<BasisChange, ExteriorError> {
        if *next.old != *self.new {
            return Err(ExteriorError::Dimension);
        }
        Ok(BasisChange { old: self.old.clone(), new: next.new.clone(), relation: linalg::mat_mul(&self.relation, &next.relation) })
    }

    /// Old basis forms as 1-forms over the new basis.
    pub fn images(&self) -> Vec<DiffForm> {
        self.relation.iter().map(|row| DiffForm::one_form(&self.new, row)).collect()
    }

    pub fn inverse_relation(&self) -> Matrix {
        linalg::inverse(&self.relation).expect("checked invertible")
    }
}

impl StructureEquationSet {
    pub fn new(stage: &str, basis: &BasisRef) -> Self {
        StructureEquationSet { stage: stage.into(), basis: basis.clone(), equations: Vec::new(), notes: Vec::new() }
    }

    /// Adds or replaces the equation for `lhs`.
    pub fn set(&mut self, lhs: &str, rhs: DiffForm) {
        let i = self.basis.index(lhs).unwrap_or_else(|| panic!("unknown symbol {lhs}"));
        match self.equations.iter_mut().find(|e| e.lhs == i) {
            Some(e) => e.rhs = rhs,
            None => self.equations.push(Equation { lhs: i, rhs }),
        }
    }

    pub fn remove(&mut self, lhs: &str) {
        if let Some(i) = self.basis.index(lhs) {
            self.equations.retain(|e| e.lhs != i);
        }
    }

    pub fn with_stage(mut self, stage: &str) -> Self {
        self.stage = stage.into();
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn equation(&self, lhs: &str) -> Option<&DiffForm> {
        let i = self.basis.index(lhs)?;
        self.equations.iter().find(|e| e.lhs == i).map(|e| &e.rhs)
    }

    pub fn lhs_symbols(&self) -> Vec<&str> {
        self.equations.iter().map(|e| self.basis.symbol(e.lhs)).collect()
    }

    /// Coefficient of `s1 /\ s2` in `d lhs`.
    pub fn coeff(&self, lhs: &str, s1: &str, s2: &str) -> RatFn {
        self.equation(lhs).map(|f| f.coeff_of(&[s1, s2])).unwrap_or_else(RatFn::zero)
    }

    pub fn form(&self, s: &str) -> DiffForm {
        DiffForm::symbol(&self.basis, s)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: &dyn Fn(&RatFn) -> RatFn) -> Self {
        let mut out = self.clone();
        for e in &mut out.equations {
            e.rhs = e.rhs.map_coeffs(f);
        }
        out
    }

    /// Rewrites the set in a new basis related by constant coefficients.
    /// An equation for a new symbol is produced whenever every old symbol it
    /// depends on has one.
    pub fn apply_change(&self, ch: &BasisChange) -> Result<Self, ExteriorError> {
        if *ch.old != *self.basis {
            return Err(ExteriorError::Dimension);
        }
        let images = ch.images();
        let inv = ch.inverse_relation();
        let mut out = StructureEquationSet::new(&self.stage, &ch.new);
        out.notes = self.notes.clone();
        for (j, row) in inv.iter().enumerate() {
            let mut acc = DiffForm::zero(&ch.new, 2);
            let mut complete = true;
            for (i, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match self.equations.iter().find(|e| e.lhs == i) {
                    Some(e) => acc = acc.add(&e.rhs.change_basis(&ch.new, &images).scale(c)),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if complete {
                out.equations.push(Equation { lhs: j, rhs: acc });
            }
        }
        // Keep the original equation order where possible.
        let order: Vec<usize> = self.equations.iter().map(|e| e.lhs).collect();
        out.equations.sort_by_key(|e| order.iter().position(|&l| l == e.lhs).unwrap_or(usize::MAX));
        Ok(out)
    }

    /// Adds symbols to the basis; existing equations are unchanged.
    pub fn extend_basis(&self, extra: &[&str], real: &[&str], conj_pairs: &[(&str, &str)]) -> Self {
        let nb = self.basis.extended(extra, real, conj_pairs);
        let mut out = StructureEquationSet::new(&self.stage, &nb);
        out.notes = self.notes.clone();
        for e in &self.equations {
            out.equations.push(Equation { lhs: e.lhs, rhs: e.rhs.reindex(&nb) });
        }
        out
    }

    /// Replaces the symbol `sym` by the 1-form `by` inside one form.
    pub fn substitute_form(&self, f: &DiffForm, sym: &str, by: &DiffForm) -> Result<DiffForm, ExteriorError> {
        let k = self.basis.index(sym).ok_or_else(|| ExteriorError::UnknownSymbol(sym.into()))?;
        let images: Vec<DiffForm> =
            (0..self.basis.len()).map(|i| if i == k { by.clone() } else { DiffForm::basic(&self.basis, i) }).collect();
        Ok(f.change_basis(&self.basis, &images))
    }

    /// Derives the equation for `new_lhs` by scaling `d from` by `factor`, then
    /// substituting `sym -> by` in the right-hand side. The caller supplies
    /// `factor` so that `new_lhs = factor * from` with constant `factor`.
    pub fn derive_equation(
        &mut self,
        from: &str,
        new_lhs: &str,
        factor: &RatFn,
        subs: &[(&str, DiffForm)],
    ) -> Result<(), ExteriorError> {
        let mut rhs = self.equation(from).ok_or_else(|| ExteriorError::MissingEquation(from.into()))?.scale(factor);
        for (sym, by) in subs {
            rhs = self.substitute_form(&rhs, sym, by)?;
        }
        self.set(new_lhs, rhs);
        Ok(())
    }

    /// `d(rhs)` computed with the set's own equations; zero for a closed
    /// system. `None` when some symbol lacks an equation. Coefficients must
    /// be constants.
    pub fn closure_defect(&self, lhs: &str) -> Option<DiffForm> {
        let rhs = self.equation(lhs)?;
        let mut out = DiffForm::zero(&self.basis, 3);
        for (idx, c) in rhs.terms() {
            let a = idx[0] as usize;
            let b = idx[1] as usize;
            let da = self.equations.iter().find(|e| e.lhs == a)?;
            let db = self.equations.iter().find(|e| e.lhs == b)?;
            let fa = DiffForm::basic(&self.basis, a);
            let fb = DiffForm::basic(&self.basis, b);
            let t = da.rhs.wedge(&fb).sub(&fa.wedge(&db.rhs));
            out = out.add(&t.scale(c));
        }
        Some(out)
    }

    pub fn render_text(&self) -> String {
        self.to_string()
    }

    pub fn render_latex(&self) -> String {
        let mut lines = Vec::new();
        for e in &self.equations {
            let mut s = format!("d{} &= ", symbol_latex(self.basis.symbol(e.lhs)));
            let terms = e.rhs.display_terms();
            if terms.is_empty() {
                s.push('0');
            }
            for (n, (c, idx)) in terms.iter().enumerate() {
                let wedge: Vec<String> = idx.iter().map(|&i| symbol_latex(self.basis.symbol(i))).collect();
                let wedge = wedge.join(" \\wedge ");
                let (neg, body) = latex_term(c, &wedge);
                match (n == 0, neg) {
                    (true, false) => s.push_str(&body),
                    (true, true) => s.push_str(&format!("-{body}")),
                    (false, false) => s.push_str(&format!(" + {body}")),
                    (false, true) => s.push_str(&format!(" - {body}")),
                }
            }
            lines.push(s);
        }
        format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join(" \\\\\n"))
    }

    pub fn equations_json(&self) -> Value {
        let eqs: Vec<Value> = self
            .equations
            .iter()
            .map(|e| {
                let terms: Vec<Value> = e
                    .rhs
                    .display_terms()
                    .into_iter()
                    .map(|(c, idx)| {
                        json!({
                            "coeff": c.to_string(),
                            "wedge": idx.iter().map(|&i| self.basis.symbol(i)).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({"lhs": self.basis.symbol(e.lhs), "terms": terms})
            })
            .collect();
        Value::Array(eqs)
    }

    /// Stage dump with empty torsion and assignment maps.
    pub fn to_json(&self) -> Value {
        json!({
            "stage": self.stage,
            "equations": self.equations_json(),
            "torsions": {},
            "assignments": {},
        })
    }
}

fn latex_term(c: &RatFn, wedge: &str) -> (bool, String) {
    let (neg, c) = if c.num().len() == 1 && c.num().leading_coeff().is_positive_like() {
        (false, c.clone())
    } else if c.num().len() == 1 {
        (true, -c)
    } else {
        (false, c.clone())
    };
    if c.is_one() {
        return (neg, wedge.to_string());
    }
    let body = ratfn_latex(&c);
    if c.num().len() > 1 && c.den().is_one() {
        (neg, format!("\\left({body}\\right) {wedge}"))
    } else {
        (neg, format!("{body}\\, {wedge}"))
    }
}

impl fmt::Display for StructureEquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            writeln!(f, "d({}) = {}", self.basis.symbol(e.lhs), e.rhs)?;
        }
        Ok(())
    }
}

/// Symbols of the coframe dual to `(U, S, Sbar, T, L, Lbar)`.
pub const BASE_COFRAME: [&str; 6] = ["mu0", "sigma0", "sigmabar0", "rho0", "zeta0", "zetabar0"];

/// Frame role dual to each entry of [`BASE_COFRAME`].
pub const BASE_DUAL_ROLES: [&str; 6] = ["U", "S", "Sbar", "T", "L", "Lbar"];

pub fn base_basis() -> BasisRef {
    Basis::new(&BASE_COFRAME, &["mu0", "rho0"], &[("sigma0", "sigmabar0"), ("zeta0", "zetabar0")], &[])
}

/// Structure equations of the coframe dual to a frame with constant
/// structure functions: `d w^k = -sum_{i<j} c^k_ij w^i /\ w^j`.
/// `dual_roles[p]` names the frame role dual to basis position `p`.
pub fn dual_structure_with(t: &StructureFunctions, basis: &BasisRef, dual_roles: &[&str], stage: &str) -> Result<StructureEquationSet, ExteriorError> {
    let n = t.dim();
    if basis.len() < n || dual_roles.len() != n {
        return Err(ExteriorError::Dimension);
    }
    let pos: Vec<usize> = (0..n)
        .map(|r| dual_roles.iter().position(|x| *x == t.roles[r]).ok_or_else(|| ExteriorError::UnknownSymbol(t.roles[r].clone())))
        .collect::<Result<_, _>>()?;
    let mut set = StructureEquationSet::new(stage, basis);
    for (p, role) in dual_roles.iter().enumerate() {
        let k = t.roles.iter().position(|r| r == role).ok_or_else(|| ExteriorError::UnknownSymbol(role.to_string()))?;
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = t.coeff(i, j, k);
                if !c.is_zero() {
                    terms.push((vec![pos[i], pos[j]], -c));
                }
            }
        }
        set.equations.push(Equation { lhs: p, rhs: DiffForm::from_terms(basis, 2, terms) });
    }
    Ok(set)
}

/// Structure equations of the coframe dual to a model's frame.
pub fn dual_structure(_frame: &Frame, t: &StructureFunctions) -> Result<StructureEquationSet, ExteriorError> {
    dual_structure_with(t, &base_basis(), &BASE_DUAL_ROLES, "base-coframe")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn change_and_compose() {
        let b = Basis::new(&["x", "y"], &["x", "y"], &[], &[]);
        let mut set = StructureEquationSet::new("t", &b);
        set.set("x", DiffForm::zero(&b, 2));
        set.set("y", DiffForm::symbol(&b, "x").wedge(&DiffForm::symbol(&b, "y")));
        let c1 = BasisChange::new(&b, &[("x", "x1")], &[("x", vec![("x1", RatFn::int(2))])], &[], &[]).unwrap();
        let s1 = set.apply_change(&c1).unwrap();
        assert_eq!(s1.coeff("y", "x1", "y"), RatFn::int(2));
        let c2 = BasisChange::new(&c1.new, &[("y", "y1")], &[("y", vec![("y1", RatFn::int(3)), ("x1", RatFn::one())])], &[], &[]).unwrap();
        let two_step = s1.apply_change(&c2).unwrap();
        let one_step = set.apply_change(&c1.then(&c2).unwrap()).unwrap();
        assert_eq!(two_step, one_step);
        assert!(one_step.closure_defect("y1").unwrap().is_zero());
    }
}
