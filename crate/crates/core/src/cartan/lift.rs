//! Lifted coframe on the product of the model with the structure group, and
//! its structure equations with torsion.

use std::collections::BTreeMap;

use serde_json::Value;

use super::group::{lifted_basis, maurer_cartan_forms, MaurerCartanForms, StructureGroup, LIFTED, MC_SYMBOLS};
use super::CartanError;
use crate::algebra::Scalar;
use crate::exterior::{base_basis, dual_structure, Basis, BasisRef, Coframe, DiffForm, StructureEquationSet, BASE_COFRAME, BASE_DUAL_ROLES};
use crate::model::CRModel;
use crate::vecfield::{build_frame, commutator_table, Frame, StructureFunctions};

/// Everything produced by lifting a model's base coframe.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub group: StructureGroup,
    pub frame: Frame,
    pub table: StructureFunctions,
    /// Structure equations of the base coframe from the commutator table.
    pub base: StructureEquationSet,
    pub mc: MaurerCartanForms,
    /// Base coframe and group differentials on the product space.
    pub product: Coframe,
    /// Lifted coframe followed by the Maurer–Cartan forms.
    pub coframe: Coframe,
}

impl Lifted {
    pub fn basis(&self) -> &BasisRef {
        self.coframe.basis()
    }

    /// A lifted form expanded over the coordinate differentials.
    pub fn expansion(&self, sym: &str) -> Option<&Vec<Scalar>> {
        self.basis().index(sym).map(|i| &self.coframe.expansion()[i])
    }
}

/// `Theta = g Theta0` on the product of the model with the group.
pub fn lift(m: &CRModel, g: &StructureGroup) -> Result<Lifted, CartanError> {
    let frame = build_frame(m)?;
    let table = commutator_table(&frame)?;
    let base = dual_structure(&frame, &table)?;
    let mc = maurer_cartan_forms(g)?;

    let space = frame.space.product(&StructureGroup::space());
    let coords = Coframe::coordinate(&space);
    let nm = frame.space.dim();
    let n = space.dim();
    let inv = frame.inverse_matrix();

    // Product basis: base coframe, then the group differentials.
    let group_syms: Vec<String> = coords.basis().symbols()[nm..].to_vec();
    let mut syms: Vec<String> = BASE_COFRAME.iter().map(|s| s.to_string()).collect();
    syms.extend(group_syms.iter().cloned());
    let pb = base_basis();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut real: Vec<String> = vec!["mu0".into(), "rho0".into()];
    for i in 0..6 {
        if let Some(j) = pb.conj_index(i) {
            if i < j {
                pairs.push((pb.symbol(i).into(), pb.symbol(j).into()));
            }
        }
    }
    for (i, s) in group_syms.iter().enumerate() {
        match coords.basis().conj_index(nm + i) {
            Some(j) if j == nm + i => real.push(s.clone()),
            Some(j) if j > nm + i => pairs.push((s.clone(), coords.basis().symbol(j).into())),
            _ => {}
        }
    }
    let real_ref: Vec<&str> = real.iter().map(|s| s.as_str()).collect();
    let pairs_ref: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let product_basis = Basis::from_owned(syms, &real_ref, &pairs_ref, &[]);
    let mut rows = Vec::with_capacity(n);
    for role in BASE_DUAL_ROLES {
        let k = frame.roles.iter().position(|r| r == role).expect("frame role");
        let mut v = inv[k].clone();
        v.resize(n, Scalar::zero());
        rows.push(DiffForm::one_form(coords.basis(), &v));
    }
    for i in nm..n {
        rows.push(DiffForm::basic(coords.basis(), i));
    }
    let product = Coframe::expanded(&coords, product_basis.clone(), rows)?;

    // Lifted rows over the product basis.
    let lb = lifted_basis();
    let mut rows = Vec::with_capacity(n);
    for grow in &g.matrix {
        let mut v = grow.clone();
        v.resize(n, Scalar::zero());
        rows.push(DiffForm::one_form(&product_basis, &v));
    }
    for f in &mc.forms {
        let mut v = vec![Scalar::zero(); 6];
        v.extend(f.as_vector());
        rows.push(DiffForm::one_form(&product_basis, &v));
    }
    let coframe = Coframe::expanded(&product, lb, rows)?;
    Ok(Lifted { group: g.clone(), frame, table, base, mc, product, coframe })
}

/// Torsion coefficients `T^k_ij` of `d theta_k` on `theta_i /\ theta_j`,
/// keyed by (equation, i, j) with `i < j` indices into the lifted coframe.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TorsionTable {
    pub entries: BTreeMap<(usize, usize, usize), Scalar>,
}

impl TorsionTable {
    pub fn get(&self, k: usize, i: usize, j: usize) -> Scalar {
        if i == j {
            return Scalar::zero();
        }
        let (a, b, s) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let v = self.entries.get(&(k, a, b)).cloned().unwrap_or_else(Scalar::zero);
        if s < 0 {
            -v
        } else {
            v
        }
    }

    pub fn get_named(&self, eq: &str, s1: &str, s2: &str) -> Scalar {
        let ix = |s: &str| LIFTED.iter().position(|x| *x == s).unwrap_or_else(|| panic!("unknown lifted symbol {s}"));
        self.get(ix(eq), ix(s1), ix(s2))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Scalar)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> =
            self.nonzero().map(|(&(k, i, j), v)| (torsion_label(k, i, j), Value::String(v.to_string()))).collect();
        Value::Object(map)
    }
}

/// Conventional names of torsion coefficients by position.
pub fn torsion_label(k: usize, i: usize, j: usize) -> String {
    const MU: [(usize, usize, &str); 9] = [
        (0, 1, "T1"),
        (0, 2, "T1bar"),
        (1, 2, "T2"),
        (1, 3, "T3"),
        (1, 4, "a"),
        (1, 5, "c"),
        (2, 3, "T3bar"),
        (2, 4, "cbar"),
        (2, 5, "abar"),
    ];
    const SIGMA: [(usize, usize, &str); 10] = [
        (0, 1, "U1"),
        (0, 2, "U2"),
        (0, 3, "U3"),
        (0, 4, "U4"),
        (1, 2, "U5"),
        (1, 3, "U6"),
        (1, 4, "U7"),
        (2, 3, "U8"),
        (2, 4, "U7bar"),
        (3, 4, "one"),
    ];
    const RHO: [(usize, usize, &str); 15] = [
        (0, 1, "V1"),
        (0, 2, "V1bar"),
        (0, 3, "V2"),
        (0, 4, "V3"),
        (0, 5, "V3bar"),
        (1, 2, "V4"),
        (1, 3, "V5"),
        (1, 4, "V6"),
        (1, 5, "V7"),
        (2, 3, "V5bar"),
        (2, 4, "V7bar"),
        (2, 5, "V6bar"),
        (3, 4, "V8"),
        (3, 5, "V8bar"),
        (4, 5, "i"),
    ];
    let find = |t: &[(usize, usize, &str)]| t.iter().find(|(a, b, _)| (*a, *b) == (i, j)).map(|(_, _, s)| s.to_string());
    let named = match k {
        0 => find(&MU),
        1 => find(&SIGMA),
        3 => find(&RHO),
        4 => {
            let pairs: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
            pairs.iter().position(|&p| p == (i, j)).map(|n| format!("W{}", n + 1))
        }
        _ => None,
    };
    named.unwrap_or_else(|| format!("d{}[{},{}]", LIFTED[k], LIFTED[i], LIFTED[j]))
}

/// Coefficients of the Maurer–Cartan part: `d theta_k` contains
/// `mc[(k, s, l)] alpha_s /\ theta_l`.
pub type McCoefficients = BTreeMap<(usize, usize, usize), Scalar>;

/// Structure equations of the lifted coframe, split into the
/// Maurer–Cartan part and torsion. Fails if a `dtheta` has an
/// `alpha /\ alpha` term or if a Maurer–Cartan coefficient is not constant.
pub fn structure_equations(l: &Lifted) -> Result<(StructureEquationSet, TorsionTable, McCoefficients), CartanError> {
    let basis = l.basis().clone();
    let mut set = StructureEquationSet::new("structure", &basis);
    let mut torsion = TorsionTable::default();
    let mut mcc = McCoefficients::new();
    for (k, sym) in LIFTED.iter().enumerate() {
        let d = &l.coframe.structure()[k];
        for (idx, c) in d.terms() {
            let (a, b) = (idx[0] as usize, idx[1] as usize);
            match (a >= 6, b >= 6) {
                (false, false) => {
                    torsion.entries.insert((k, a, b), c.clone());
                }
                (false, true) => {
                    // theta_a /\ alpha_b = -alpha_b /\ theta_a
                    if !c.is_constant() {
                        return Err(CartanError::UnexpectedShape(format!("non-constant coefficient {c} of {}/\\{} in d{sym}", LIFTED[a], MC_SYMBOLS[b - 6])));
                    }
                    mcc.insert((k, b - 6, a), -c);
                }
                _ => return Err(CartanError::UnexpectedShape(format!("Maurer-Cartan wedge in d{sym}"))),
            }
        }
        set.set(sym, d.clone());
    }
    Ok((set, torsion, mcc))
}
