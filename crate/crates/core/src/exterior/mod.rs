//! Exterior algebra over symbolic coframes: wedge products, exterior
//! derivatives, basis changes and structure-equation sets.

pub mod coframe;
pub mod equations;
pub mod form;

use thiserror::Error;

pub use coframe::{differential_symbol, Coframe};
pub use equations::{base_basis, dual_structure, dual_structure_with, BasisChange, Equation, StructureEquationSet, BASE_COFRAME, BASE_DUAL_ROLES};
pub use form::{Basis, BasisRef, DiffForm};

use crate::algebra::AlgebraError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("1-forms are linearly dependent")]
    Dependent,
    #[error("dimension mismatch")]
    Dimension,
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("no structure equation for {0}")]
    MissingEquation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

const GREEK: [&str; 5] = ["alpha", "sigma", "zeta", "rho", "mu"];

/// LaTeX for a form symbol such as `sigmabar0`, `zetabar_new`,
/// `sigmatilde''` or `dconj(a2)`.
pub fn symbol_latex(s: &str) -> String {
    if let Some(rest) = s.strip_prefix('d') {
        if !GREEK.iter().any(|g| s.starts_with(g)) {
            let inner = match rest.strip_prefix("conj(").and_then(|r| r.strip_suffix(')')) {
                Some(v) => format!("\\bar{{{}}}", plain_latex(v)),
                None => plain_latex(rest),
            };
            return format!("d{inner}");
        }
    }
    let mut rest = s;
    let mut primes = String::new();
    while let Some(r) = rest.strip_suffix('\'') {
        primes.push('\'');
        rest = r;
    }
    let mut sup = "";
    if let Some(r) = rest.strip_suffix("_new") {
        sup = "^{\\mathrm{new}}";
        rest = r;
    }
    let digits: String = rest.chars().rev().take_while(|c| c.is_ascii_digit()).collect::<Vec<_>>().into_iter().rev().collect();
    rest = &rest[..rest.len() - digits.len()];
    let (base, accent) = if let Some(b) = rest.strip_suffix("bar") {
        (b, Some("\\overline"))
    } else if let Some(b) = rest.strip_suffix("tilde") {
        (b, Some("\\widetilde"))
    } else {
        (rest, None)
    };
    let core = if GREEK.contains(&base) { format!("\\{base}") } else { base.to_string() };
    let mut out = match accent {
        Some(a) => format!("{a}{{{core}}}"),
        None => core,
    };
    if !digits.is_empty() {
        out.push_str(&format!("_{{{digits}}}"));
    }
    out.push_str(sup);
    out.push_str(&primes);
    out
}

fn plain_latex(v: &str) -> String {
    let digits: String = v.chars().rev().take_while(|c| c.is_ascii_digit()).collect::<Vec<_>>().into_iter().rev().collect();
    if digits.is_empty() || digits.len() == v.len() {
        v.to_string()
    } else {
        format!("{}_{{{}}}", &v[..v.len() - digits.len()], digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_scalar, RatFn};
    use crate::model::builtin_m14_symbolic;
    use crate::vecfield::{build_frame, commutator_table};

    fn p(s: &str) -> RatFn {
        parse_scalar(s).unwrap()
    }

    /// The dual of the frame computed two ways: from the commutator table and
    /// by differentiating the inverted coordinate coframe.
    #[test]
    fn base_coframe_both_routes() {
        let m = builtin_m14_symbolic();
        let frame = build_frame(&m).unwrap();
        let table = commutator_table(&frame).unwrap();
        let dual = dual_structure(&frame, &table).unwrap();
        assert_eq!(dual.coeff("mu0", "sigma0", "zeta0"), p("a"));
        assert_eq!(dual.coeff("mu0", "sigmabar0", "zeta0"), p("2/3*b"));
        assert_eq!(dual.coeff("mu0", "sigma0", "zetabar0"), p("2/3*b"));
        assert_eq!(dual.coeff("mu0", "sigmabar0", "zetabar0"), p("conj(a)"));
        assert_eq!(dual.equation("mu0").unwrap().len(), 4);
        assert_eq!(dual.equation("sigma0").unwrap().to_string(), "rho0/\\zeta0");
        assert_eq!(dual.equation("rho0").unwrap().to_string(), "i*zeta0/\\zetabar0");
        assert!(dual.equation("zeta0").unwrap().is_zero());

        let coords = Coframe::coordinate(&frame.space);
        let inv = frame.inverse_matrix();
        let basis = base_basis();
        // Dual position p pairs with role BASE_DUAL_ROLES[p].
        let rows: Vec<DiffForm> = BASE_DUAL_ROLES
            .iter()
            .map(|r| {
                let k = frame.roles.iter().position(|x| x == r).unwrap();
                DiffForm::one_form(coords.basis(), &inv[k])
            })
            .collect();
        let cf = Coframe::expanded(&coords, basis, rows).unwrap();
        for (e, sym) in BASE_COFRAME.iter().enumerate() {
            assert_eq!(&cf.structure()[e], dual.equation(sym).unwrap(), "d {sym}");
            assert!(dual.closure_defect(sym).unwrap().is_zero());
        }
    }

    #[test]
    fn latex_symbols() {
        assert_eq!(symbol_latex("sigmabar0"), "\\overline{\\sigma}_{0}");
        assert_eq!(symbol_latex("zetabar_new"), "\\overline{\\zeta}^{\\mathrm{new}}");
        assert_eq!(symbol_latex("sigmatilde''"), "\\widetilde{\\sigma}''");
        assert_eq!(symbol_latex("alpha"), "\\alpha");
        assert_eq!(symbol_latex("dconj(a2)"), "d\\bar{a_{2}}");
        assert_eq!(symbol_latex("du1"), "du_{1}");
    }
}
