//! Cartan equivalence: lift the base coframe by the structure group, absorb
//! torsion, normalize the group and read off the invariants.

mod absorb;
mod group;
mod lift;
mod pipeline;
mod reform;

pub use absorb::{absorb, absorbed_torsion, normalize_parameters, AbsorptionSolution, Assignment, Essential};
pub use group::{
    conj_group_form, lifted_basis, maurer_cartan_forms, partner_symbol, reduce_branch, Branch, MaurerCartanForms, StructureGroup,
    GROUP_PARAMS, LIFTED, MC_POSITIONS, MC_SYMBOLS,
};
pub use lift::{lift, structure_equations, torsion_label, Lifted, McCoefficients, TorsionTable};
pub use pipeline::{run_cartan, CartanRun};
pub use reform::{assignment_text, check_reduction, model_coefficients, prolong, reduce, reduced_basis, reform, ModelClass, Reformed, REDUCED};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::exterior::ExteriorError;
use crate::vecfield::VecFieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error(transparent)]
    DegenerateModel(#[from] VecFieldError),
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
    #[error("unexpected structure: {0}")]
    UnexpectedShape(String),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_scalar, RatFn, Scalar};
    use crate::exterior::{BasisRef, DiffForm};
    use crate::model::{builtin_m14, builtin_m14_symbolic};

    fn p(s: &str) -> Scalar {
        parse_scalar(s).unwrap()
    }

    fn two_form(b: &BasisRef, terms: &[(&str, &str, &str)]) -> DiffForm {
        let mut f = DiffForm::zero(b, 2);
        for (c, s1, s2) in terms {
            f = f.add(&DiffForm::symbol(b, s1).wedge(&DiffForm::symbol(b, s2)).scale(&p(c)));
        }
        f
    }

    fn runs() -> Vec<CartanRun> {
        Branch::BOTH.iter().map(|&br| run_cartan(&builtin_m14_symbolic(), br).unwrap()).collect()
    }

    #[test]
    fn printed_essential_torsions() {
        let printed = [
            ("T2", "-(-3*conj(a)*a1^2*conj(a1)*conj(a5) + 3*conj(a)*a1*a3*conj(a2) + 2*b*a1^2*conj(a1)*conj(a4) - 2*b*a1*conj(a2)*conj(a3) - 2*b*a1*a4*conj(a1)^2 + 2*b*a2*a3*conj(a1) + 3*a*a1*a5*conj(a1)^2 - 3*a*a2*conj(a1)*conj(a3))/(3*a1^2*conj(a1)^4)"),
            ("T3", "-(2*b*a1*conj(a2) + 3*a*a2*conj(a1))/(3*a1*conj(a1)^2)"),
            ("U2", "(a5*a6 - a7*conj(a3))/(a1^4*conj(a1)^3)"),
            ("U3", "a7/(a1^3*conj(a1))"),
            ("U4", "-a6/(a1^3*conj(a1))"),
            ("U6", "a4/(a1^2*conj(a1))"),
            ("U7", "-a3/(a1^2*conj(a1))"),
            ("U8", "a5/(a1*conj(a1)^2)"),
            ("U5", "-(4*a4*conj(a1)^3*conj(a3) - 4*a3*a5*conj(a1)^3 + 3*conj(a)*a1^4*conj(a1)*conj(a7) - 3*conj(a)*a1^3*a6*conj(a2) + 2*b*a1*a7*conj(a1)^4 - 2*b*a2*a6*conj(a1)^3)/(4*a1^3*conj(a1)^6)"),
            ("V8", "(i*a1*conj(a2) + a3)/(a1^2*conj(a1))"),
            ("W15", "i*a2/(a1*conj(a1))"),
        ];
        for run in runs() {
            let br = run.branch;
            let ess = &run.essential.table;
            for (label, text) in printed {
                let want = reduce_branch(&p(text), br);
                let key = ess.entries.keys().find(|k| torsion_label(k.0, k.1, k.2) == label).unwrap_or_else(|| panic!("{label} not essential"));
                assert_eq!(ess.entries[key], want, "{label} on {br:?}");
            }
            // The plain torsions agree too where no combination is involved.
            assert_eq!(run.torsion.get_named("zeta", "zeta", "zetabar"), reduce_branch(&p("i*a2/(a1*conj(a1))"), br));
            assert_eq!(run.torsion.get_named("mu", "sigma", "zeta"), p("a"));
            assert_eq!(run.torsion.get_named("rho", "zeta", "zetabar"), p("i"));
        }
    }

    #[test]
    fn absorption_kills_the_mu_row_as_printed() {
        for run in runs() {
            let z = &run.absorption;
            let t1 = run.torsion.get_named("mu", "mu", "sigma");
            let t1bar = run.torsion.get_named("mu", "mu", "sigmabar");
            assert_eq!(z.get(0, 1), &t1 * &RatFn::ratio(1, 4));
            assert_eq!(z.get(0, 2), &t1bar * &RatFn::ratio(1, 4));
            for j in [3, 4, 5] {
                assert!(z.get(0, j).is_zero());
            }
            // After absorption each torsion is either zero or its essential
            // residue.
            let after = absorbed_torsion(&run.torsion, &run.mc_coefficients, z);
            assert_eq!(after, run.essential.table);
        }
    }

    #[test]
    fn empty_torsion_gives_empty_absorption() {
        let run = &runs()[0];
        let (sol, ess) = absorb(&TorsionTable::default(), &run.mc_coefficients);
        assert!(sol.z.is_empty());
        assert!(ess.table.is_empty());
    }

    #[test]
    fn normalization_and_reduced_equations() {
        for run in runs() {
            let zero: Vec<_> = GROUP_PARAMS[1..].to_vec();
            assert_eq!(run.assignment.keys().copied().collect::<Vec<_>>(), zero);
            assert!(run.assignment.values().all(|v| v.is_zero()));
            let e = run.branch.eps();
            let c = format!("{}*2/3*b", e);
            let b = &run.reduced.basis;
            let want = [
                ("mu", two_form(b, &[("4", "alpha", "mu"), ("a", "sigma", "zeta"), (&c, "sigma", "zetabar"), (&c, "sigmabar", "zeta"), ("conj(a)", "sigmabar", "zetabar")])),
                ("sigma", two_form(b, &[("3", "alpha", "sigma"), ("1", "rho", "zeta")])),
                ("sigmabar", two_form(b, &[("3", "alpha", "sigmabar"), ("1", "rho", "zetabar")])),
                ("rho", two_form(b, &[("2", "alpha", "rho"), ("i", "zeta", "zetabar")])),
                ("zeta", two_form(b, &[("1", "alpha", "zeta")])),
                ("zetabar", two_form(b, &[("1", "alpha", "zetabar")])),
            ];
            assert_eq!(run.reduced.equations.len(), want.len());
            for (lhs, f) in &want {
                assert_eq!(run.reduced.equation(lhs).unwrap(), f, "d{lhs}");
            }
            assert_eq!(model_coefficients(&run.reduced).1, p(&c));
            let pr = &run.prolonged;
            assert!(pr.equation("alpha").unwrap().is_zero());
            assert_eq!(prolong(pr), *pr);
            for (lhs, f) in &want {
                assert_eq!(pr.equation(lhs).unwrap(), f);
                assert!(pr.closure_defect(lhs).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn lifted_coframe_satisfies_d_squared() {
        for run in runs() {
            let cf = &run.lifted.coframe;
            for (k, d) in cf.structure().iter().enumerate() {
                assert!(cf.d(d).is_zero(), "d d {}", cf.basis().symbol(k));
            }
        }
    }

    #[test]
    fn generic_reformation_and_branch_independence() {
        let mut invs = Vec::new();
        for run in runs() {
            let r = &run.reformed;
            assert_eq!(r.class, ModelClass::Generic);
            let two = r.stage("reform-2").unwrap();
            assert_eq!(two.coeff("mu_new", "sigmabar", "zetabar_new"), p("a*conj(a)/b^2"));
            assert_eq!(two.coeff("rho_new", "zeta", "zetabar_new"), p("i*a^2/b^2"));
            let s = r.canonical();
            let b = &s.basis;
            let big_r = "a*conj(a)/b^2";
            let ir = format!("i*{big_r}");
            let want = [
                ("mu_new", two_form(b, &[("4", "alpha", "mu_new"), ("1", "sigma_new", "zeta"), ("2/3", "sigma_new", "zetabar_new"), ("2/3", "sigmabar", "zeta"), (big_r, "sigmabar", "zetabar_new")])),
                ("sigma_new", two_form(b, &[("3", "alpha", "sigma_new"), ("1", "rho_new", "zeta")])),
                ("sigmabar", two_form(b, &[("3", "alpha", "sigmabar"), ("1", "rho_new", "zetabar_new")])),
                ("rhobar_new", two_form(b, &[("2", "alpha", "rhobar_new"), (&ir, "zeta", "zetabar_new")])),
                ("zeta", two_form(b, &[("1", "alpha", "zeta")])),
                ("zetabar_new", two_form(b, &[("1", "alpha", "zetabar_new")])),
                ("alpha", DiffForm::zero(b, 2)),
            ];
            assert_eq!(s.lhs_symbols(), want.iter().map(|(l, _)| *l).collect::<Vec<_>>());
            for (lhs, f) in &want {
                assert_eq!(s.equation(lhs).unwrap(), f, "d{lhs}");
            }
            // The invariant appears in exactly two coefficients.
            let hits: usize = s.equations.iter().flat_map(|e| e.rhs.terms()).filter(|(_, c)| !c.is_constant()).count();
            assert_eq!(hits, 2);
            assert!(s.notes.iter().any(|n| n.starts_with("swap:")));
            invs.push(r.invariants.clone());
        }
        assert_eq!(invs[0], invs[1]);
        assert_eq!(invs[0], vec![("R".to_string(), p("a*conj(a)/b^2"))]);
    }

    #[test]
    fn b_zero_reformation_is_constant() {
        for a in ["3", "5*i", "1+2*i"] {
            for br in Branch::BOTH {
                let run = run_cartan(&builtin_m14(&p(a), &Scalar::zero()), br).unwrap();
                let r = &run.reformed;
                assert_eq!(r.class, ModelClass::B0);
                assert!(r.invariants.is_empty());
                let s = r.canonical();
                let b = &s.basis;
                assert_eq!(s.equation("mu").unwrap(), &two_form(b, &[("4", "alpha", "mu"), ("1", "sigma_new", "zeta"), ("1", "sigmabar_new", "zetabar")]));
                assert_eq!(s.equation("sigma_new").unwrap(), &two_form(b, &[("3", "alpha", "sigma_new"), ("1", "rho_new", "zeta")]));
                assert_eq!(s.equation("sigmabar_new").unwrap(), &two_form(b, &[("3", "alpha", "sigmabar_new"), ("1", "rhobar_new", "zetabar")]));
                assert_eq!(s.equation("rho").unwrap(), &two_form(b, &[("2", "alpha", "rho"), ("i", "zeta", "zetabar")]));
                assert!(s.equations.iter().all(|e| e.rhs.terms().all(|(_, c)| c.is_constant())));
            }
        }
    }

    #[test]
    fn a_zero_is_its_own_class() {
        let run = run_cartan(&builtin_m14(&Scalar::zero(), &p("7")), Branch::Plus).unwrap();
        assert_eq!(run.reformed.class, ModelClass::M01);
        assert!(run.reformed.invariants.is_empty());
        let s = run.reformed.canonical();
        assert_eq!(s.coeff("mu_new", "sigma", "zetabar"), p("2/3"));
    }

    #[test]
    fn stage_dumps_have_the_documented_keys() {
        let run = run_cartan(&builtin_m14(&p("1+i"), &p("2")), Branch::Minus).unwrap();
        let j = run.to_json();
        assert_eq!(j["invariants"]["R"], "1/2");
        for st in j["stages"].as_array().unwrap() {
            for k in ["stage", "equations", "torsions", "assignments"] {
                assert!(st.get(k).is_some(), "{k} missing in {}", st["stage"]);
            }
        }
    }
}
