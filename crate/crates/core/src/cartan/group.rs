//! The structure group of lifted coframes and its Maurer–Cartan forms.

use crate::algebra::var::{A1, A1_BAR, A2, A2_BAR, A3, A3_BAR, A4, A4_BAR, A5, A5_BAR, A6, A7, A7_BAR};
use crate::algebra::{RatFn, Scalar, Var};
use crate::coordring::CoordSpace;
use crate::exterior::{Basis, BasisRef, Coframe, DiffForm};
use crate::linalg::{self, Matrix};

use super::CartanError;

/// Sign relating `conj(a1)` to `a1`: the group forces `a1^2 = conj(a1)^2`, so
/// `a1` is real (`Plus`) or imaginary (`Minus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn eps(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

/// Group parameters used as coordinates, in order.
pub const GROUP_PARAMS: [Var; 12] = [A1, A2, A2_BAR, A3, A3_BAR, A4, A4_BAR, A5, A5_BAR, A6, A7, A7_BAR];

/// Maurer–Cartan symbols, in basis order.
pub const MC_SYMBOLS: [&str; 12] =
    ["alpha1", "alpha2", "alpha3", "alphabar3", "alpha4", "alphabar4", "alpha5", "alphabar5", "alpha6", "alphabar6", "alpha7", "alphabar7"];

/// Entry of `dg g^-1` that defines each Maurer–Cartan form.
pub const MC_POSITIONS: [(usize, usize); 12] = [(4, 4), (3, 0), (3, 1), (3, 2), (4, 0), (5, 0), (4, 1), (5, 2), (4, 2), (5, 1), (4, 3), (5, 3)];

/// Lifted coframe symbols.
pub const LIFTED: [&str; 6] = ["mu", "sigma", "sigmabar", "rho", "zeta", "zetabar"];

/// The lower-triangular group acting on the base coframe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureGroup {
    pub branch: Branch,
    /// 6x6 matrix with `conj(a1)` already replaced by `eps*a1`.
    pub matrix: Matrix,
}

impl StructureGroup {
    pub fn new(branch: Branch) -> StructureGroup {
        let v = |x: Var| RatFn::var(x);
        let a1 = v(A1);
        let a1b = &RatFn::int(branch.eps()) * &a1;
        let z = RatFn::zero;
        let m = vec![
            vec![&(&a1 * &a1) * &(&a1 * &a1b), z(), z(), z(), z(), z()],
            vec![z(), &(&a1 * &a1) * &a1b, z(), z(), z(), z()],
            vec![z(), z(), &(&a1 * &a1b) * &a1b, z(), z(), z()],
            vec![v(A6), v(A3), v(A3_BAR), &a1 * &a1b, z(), z()],
            vec![v(A7), v(A4), v(A5), v(A2), a1.clone(), z()],
            vec![v(A7_BAR), v(A5_BAR), v(A4_BAR), v(A2_BAR), z(), a1b],
        ];
        StructureGroup { branch, matrix: m }
    }

    /// Conjugation on scalars, followed by `conj(a1) -> eps*a1`.
    pub fn conj_scalar(&self, x: &Scalar) -> Scalar {
        reduce_branch(&x.conj(), self.branch)
    }

    pub fn inverse(&self) -> Matrix {
        linalg::inverse(&self.matrix).expect("a1 != 0")
    }

    pub fn space() -> CoordSpace {
        CoordSpace::new(GROUP_PARAMS.to_vec())
    }
}

/// Replaces `conj(a1)` by `eps*a1`.
pub fn reduce_branch(x: &Scalar, branch: Branch) -> Scalar {
    let eps_a1 = &RatFn::int(branch.eps()) * &RatFn::var(A1);
    x.substitute_var(A1_BAR, &eps_a1).expect("a1 nonzero")
}

/// The Maurer–Cartan forms over the group differentials.
#[derive(Clone, Debug)]
pub struct MaurerCartanForms {
    pub coframe: Coframe,
    /// `alpha_s` over the coordinate coframe of the group.
    pub forms: Vec<DiffForm>,
    /// Full `dg g^-1`.
    pub matrix: Vec<Vec<DiffForm>>,
}

impl MaurerCartanForms {
    pub fn basis(&self) -> &BasisRef {
        self.coframe.basis()
    }

    pub fn form(&self, s: &str) -> Option<&DiffForm> {
        MC_SYMBOLS.iter().position(|x| *x == s).map(|i| &self.forms[i])
    }

    /// `alpha_s` as coefficients over the group parameter differentials.
    pub fn coefficients(&self) -> Matrix {
        self.forms.iter().map(|f| f.as_vector()).collect()
    }
}

/// `dg g^-1` and its independent entries `alpha1..alpha7` with conjugates.
/// Checks the matrix has the expected pattern: diagonal multiples
/// `(4, 3, 3, 2, 1, 1)` of `alpha1` and zeros above the diagonal and in the
/// leading block.
pub fn maurer_cartan_forms(g: &StructureGroup) -> Result<MaurerCartanForms, CartanError> {
    let coframe = Coframe::coordinate(&StructureGroup::space());
    let ginv = g.inverse();
    let n = 6;
    let dg: Vec<Vec<DiffForm>> = g.matrix.iter().map(|row| row.iter().map(|x| coframe.d_function(x)).collect()).collect();
    let mut omega = vec![vec![DiffForm::zero(coframe.basis(), 1); n]; n];
    for i in 0..n {
        for k in 0..n {
            let mut acc = DiffForm::zero(coframe.basis(), 1);
            for j in 0..n {
                if !ginv[j][k].is_zero() && !dg[i][j].is_zero() {
                    acc = acc.add(&dg[i][j].scale(&ginv[j][k]));
                }
            }
            omega[i][k] = acc;
        }
    }
    let forms: Vec<DiffForm> = MC_POSITIONS.iter().map(|&(i, k)| omega[i][k].clone()).collect();
    let alpha1 = &forms[0];
    let diag = [4, 3, 3, 2, 1, 1];
    for i in 0..n {
        for k in 0..n {
            let expected = if i == k {
                Some(alpha1.scale(&RatFn::int(diag[i])))
            } else if k > i || (i < 3 && k < 3) || (i == 5 && k == 4) {
                Some(DiffForm::zero(coframe.basis(), 1))
            } else {
                None
            };
            if let Some(e) = expected {
                if omega[i][k] != e {
                    return Err(CartanError::UnexpectedShape(format!("Maurer-Cartan entry ({i},{k}) is {}", omega[i][k])));
                }
            }
        }
    }
    // Conjugate pairs must be conjugate forms.
    for (s, sym) in MC_SYMBOLS.iter().enumerate() {
        let partner = partner_symbol(sym);
        let t = MC_SYMBOLS.iter().position(|x| *x == partner).expect("partner exists");
        if conj_group_form(&forms[s], g) != forms[t] {
            return Err(CartanError::UnexpectedShape(format!("{sym} and {partner} are not conjugate")));
        }
    }
    Ok(MaurerCartanForms { coframe, forms, matrix: omega })
}

/// Conjugate symbol name (`alpha3 <-> alphabar3`, `alpha1`, `alpha2` real).
pub fn partner_symbol(s: &str) -> String {
    if s == "alpha1" || s == "alpha2" {
        return s.to_string();
    }
    match s.strip_prefix("alphabar") {
        Some(k) => format!("alpha{k}"),
        None => s.replacen("alpha", "alphabar", 1),
    }
}

/// Conjugate of a 1-form over the group differentials, using
/// `d conj(a1) = eps da1`.
pub fn conj_group_form(f: &DiffForm, g: &StructureGroup) -> DiffForm {
    let e = RatFn::int(g.branch.eps());
    let terms = f.terms().map(|(k, c)| {
        let v = GROUP_PARAMS[k[0] as usize];
        let cc = g.conj_scalar(c);
        match GROUP_PARAMS.iter().position(|&w| w == v.conj()) {
            Some(j) => (vec![j], cc),
            None => (vec![0], &cc * &e),
        }
    });
    DiffForm::from_terms(f.basis(), 1, terms.collect::<Vec<_>>())
}

/// Basis for the lifted coframe followed by the Maurer–Cartan forms.
pub fn lifted_basis() -> BasisRef {
    let mut syms: Vec<&str> = LIFTED.to_vec();
    syms.extend(MC_SYMBOLS);
    let pairs: Vec<(&str, &str)> = vec![
        ("sigma", "sigmabar"),
        ("zeta", "zetabar"),
        ("alpha3", "alphabar3"),
        ("alpha4", "alphabar4"),
        ("alpha5", "alphabar5"),
        ("alpha6", "alphabar6"),
        ("alpha7", "alphabar7"),
    ];
    Basis::new(&syms, &["mu", "rho", "alpha1", "alpha2"], &pairs, &MC_SYMBOLS)
}
