//! Coframes on a coordinate space and the exterior derivative.

use std::sync::Arc;

use super::form::{Basis, BasisRef, DiffForm};
use super::ExteriorError;
use crate::algebra::RatFn;
use crate::coordring::CoordSpace;
use crate::linalg::{self, Matrix};

/// A basis of 1-forms on a coordinate space, with the coordinate
/// differentials and the exterior derivatives of the basis forms expressed
/// over it.
#[derive(Clone, Debug)]
pub struct Coframe {
    space: CoordSpace,
    basis: BasisRef,
    /// `theta_i = sum_c expansion[i][c] dx_c`.
    expansion: Matrix,
    dx: Vec<DiffForm>,
    structure: Vec<DiffForm>,
}

/// Symbol used for the differential of a coordinate.
pub fn differential_symbol(name: &str) -> String {
    format!("d{name}")
}

impl Coframe {
    /// The coordinate coframe `(dx_1, ..., dx_n)`.
    pub fn coordinate(space: &CoordSpace) -> Coframe {
        let names: Vec<String> = space.coords().iter().map(|c| differential_symbol(&c.name())).collect();
        let real: Vec<&str> = Vec::new();
        let mut pairs = Vec::new();
        for (i, c) in space.coords().iter().enumerate() {
            if let Some(j) = space.index_of(c.conj()) {
                if i < j {
                    pairs.push((i, j));
                }
            }
        }
        let pair_names: Vec<(&str, &str)> = pairs.iter().map(|&(i, j)| (names[i].as_str(), names[j].as_str())).collect();
        let real_names: Vec<&str> = space
            .coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.conj() == **c)
            .map(|(i, _)| names[i].as_str())
            .chain(real)
            .collect();
        let basis = Basis::from_owned(names.clone(), &real_names, &pair_names, &[]);
        let n = space.dim();
        Coframe {
            space: space.clone(),
            dx: (0..n).map(|i| DiffForm::basic(&basis, i)).collect(),
            structure: (0..n).map(|_| DiffForm::zero(&basis, 2)).collect(),
            expansion: linalg::identity(n),
            basis,
        }
    }

    /// A new coframe whose forms are the given 1-forms over `parent`.
    pub fn expanded(parent: &Coframe, basis: BasisRef, rows: Vec<DiffForm>) -> Result<Coframe, ExteriorError> {
        let n = parent.basis.len();
        if rows.len() != n || basis.len() != n {
            return Err(ExteriorError::Dimension);
        }
        let r: Matrix = rows.iter().map(|f| f.as_vector()).collect();
        let rinv = linalg::inverse(&r).map_err(|_| ExteriorError::Dependent)?;
        let images: Vec<DiffForm> = rinv.iter().map(|row| DiffForm::one_form(&basis, row)).collect();
        let dx = parent.dx.iter().map(|f| f.change_basis(&basis, &images)).collect();
        let structure = rows.iter().map(|f| parent.d(f).change_basis(&basis, &images)).collect();
        let expansion = linalg::mat_mul(&r, &parent.expansion);
        Ok(Coframe { space: parent.space.clone(), basis, expansion, dx, structure })
    }

    pub fn space(&self) -> &CoordSpace {
        &self.space
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn expansion(&self) -> &Matrix {
        &self.expansion
    }

    /// Coordinate differentials over this coframe.
    pub fn dx(&self) -> &[DiffForm] {
        &self.dx
    }

    /// `d theta_i` over this coframe.
    pub fn structure(&self) -> &[DiffForm] {
        &self.structure
    }

    pub fn form(&self, s: &str) -> DiffForm {
        DiffForm::symbol(&self.basis, s)
    }

    /// Differential of a function.
    pub fn d_function(&self, f: &RatFn) -> DiffForm {
        let mut out = DiffForm::zero(&self.basis, 1);
        for v in f.vars() {
            if let Some(c) = self.space.index_of(v) {
                out = out.add(&self.dx[c].scale(&f.derivative(v)));
            }
        }
        out
    }

    /// Exterior derivative of a form over this coframe.
    pub fn d(&self, w: &DiffForm) -> DiffForm {
        assert!(Arc::ptr_eq(w.basis(), &self.basis) || **w.basis() == *self.basis, "form lives on another basis");
        let mut out = DiffForm::zero(&self.basis, w.degree() + 1);
        for (idx, f) in w.terms() {
            let factors: Vec<DiffForm> = idx.iter().map(|&i| DiffForm::basic(&self.basis, i as usize)).collect();
            let wedge_all = |fs: &[DiffForm]| fs.iter().fold(DiffForm::function(&self.basis, RatFn::one()), |acc, x| acc.wedge(x));
            let df = self.d_function(f);
            if !df.is_zero() {
                out = out.add(&df.wedge(&wedge_all(&factors)));
            }
            for k in 0..factors.len() {
                let ds = &self.structure[idx[k] as usize];
                if ds.is_zero() {
                    continue;
                }
                let term = wedge_all(&factors[..k]).wedge(ds).wedge(&wedge_all(&factors[k + 1..]));
                let sign = if k % 2 == 0 { f.clone() } else { -f };
                out = out.add(&term.scale(&sign));
            }
        }
        out
    }

    /// The form `sum_c coeffs[c] dx_c` over this coframe.
    pub fn from_coordinates(&self, coeffs: &[RatFn]) -> DiffForm {
        let mut out = DiffForm::zero(&self.basis, 1);
        for (c, x) in coeffs.iter().enumerate() {
            if !x.is_zero() {
                out = out.add(&self.dx[c].scale(x));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::var::{U1, Z, Z_BAR};

    #[test]
    fn d_of_function_and_d_squared() {
        let space = CoordSpace::new(vec![Z, Z_BAR, U1]);
        let c = Coframe::coordinate(&space);
        let b = c.basis().clone();
        assert_eq!(b.symbols(), &["dz", "dconj(z)", "du1"]);
        let f = &(&RatFn::var(Z) * &RatFn::var(Z_BAR)) * &RatFn::var(U1);
        let df = c.d_function(&f);
        assert!(c.d(&df).is_zero());
        // A non-holonomic coframe: theta = du1 - i*conj(z) dz.
        let rows = vec![
            DiffForm::basic(&b, 0),
            DiffForm::basic(&b, 1),
            DiffForm::from_terms(&b, 1, [(vec![2], RatFn::one()), (vec![0], -(&RatFn::i() * &RatFn::var(Z_BAR)))]),
        ];
        let nb = Basis::new(&["zeta", "zetabar", "theta"], &["theta"], &[("zeta", "zetabar")], &[]);
        let k = Coframe::expanded(&c, nb, rows).unwrap();
        let dtheta = &k.structure()[2];
        assert_eq!(dtheta.coeff_of(&["zeta", "zetabar"]), RatFn::i());
        let w = k.form("theta").wedge(&k.form("zeta")).scale(&RatFn::var(Z));
        assert!(k.d(&k.d(&w)).is_zero());
    }
}
