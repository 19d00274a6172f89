//! Differential forms over a declared basis of 1-forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::algebra::RatFn;

/// Ordered 1-form symbols with conjugation pairing and Maurer–Cartan flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    symbols: Vec<String>,
    conj: Vec<Option<usize>>,
    mc: Vec<bool>,
}

pub type BasisRef = Arc<Basis>;

impl Basis {
    /// `conj_pairs` lists mutually conjugate symbols; `real` lists
    /// self-conjugate ones. Symbols in neither have no known conjugate.
    pub fn new(symbols: &[&str], real: &[&str], conj_pairs: &[(&str, &str)], mc: &[&str]) -> BasisRef {
        let symbols: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        Basis::from_owned(symbols, real, conj_pairs, mc)
    }

    pub fn from_owned(symbols: Vec<String>, real: &[&str], conj_pairs: &[(&str, &str)], mc: &[&str]) -> BasisRef {
        let idx = |s: &str| symbols.iter().position(|x| x == s);
        let mut conj = vec![None; symbols.len()];
        for r in real {
            if let Some(i) = idx(r) {
                conj[i] = Some(i);
            }
        }
        for (a, b) in conj_pairs {
            if let (Some(i), Some(j)) = (idx(a), idx(b)) {
                conj[i] = Some(j);
                conj[j] = Some(i);
            }
        }
        let mc = symbols.iter().map(|s| mc.contains(&s.as_str())).collect();
        assert!(
            (0..symbols.len()).all(|i| !symbols[i + 1..].contains(&symbols[i])),
            "basis symbols must be unique"
        );
        Arc::new(Basis { symbols, conj, mc })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index(&self, s: &str) -> Option<usize> {
        self.symbols.iter().position(|x| x == s)
    }

    pub fn conj_index(&self, i: usize) -> Option<usize> {
        self.conj[i]
    }

    pub fn is_mc(&self, i: usize) -> bool {
        self.mc[i]
    }

    pub fn mc_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.mc[i]).collect()
    }

    /// Same conjugation data and MC flags with extra symbols appended.
    pub fn extended(&self, extra: &[&str], real: &[&str], conj_pairs: &[(&str, &str)]) -> BasisRef {
        let mut b = self.clone();
        for s in extra {
            b.symbols.push(s.to_string());
            b.conj.push(None);
            b.mc.push(false);
        }
        for r in real {
            if let Some(i) = b.index(r) {
                b.conj[i] = Some(i);
            }
        }
        for (x, y) in conj_pairs {
            if let (Some(i), Some(j)) = (b.index(x), b.index(y)) {
                b.conj[i] = Some(j);
                b.conj[j] = Some(i);
            }
        }
        Arc::new(b)
    }
}

pub type Index = SmallVec<[u16; 4]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    basis: BasisRef,
    degree: usize,
    terms: BTreeMap<Index, RatFn>,
}

/// Sorts an index list, returning the permutation sign, or `None` when an
/// index repeats.
fn sort_sign(idx: &mut [u16]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl DiffForm {
    pub fn zero(basis: &BasisRef, degree: usize) -> Self {
        DiffForm { basis: basis.clone(), degree, terms: BTreeMap::new() }
    }

    /// The function `f` as a 0-form.
    pub fn function(basis: &BasisRef, f: RatFn) -> Self {
        DiffForm::from_terms(basis, 0, [(vec![], f)])
    }

    /// The basis 1-form with index `i`.
    pub fn basic(basis: &BasisRef, i: usize) -> Self {
        DiffForm::from_terms(basis, 1, [(vec![i], RatFn::one())])
    }

    pub fn symbol(basis: &BasisRef, s: &str) -> Self {
        DiffForm::basic(basis, basis.index(s).unwrap_or_else(|| panic!("unknown symbol {s}")))
    }

    /// Builds a form from (index list, coefficient) pairs in any order.
    pub fn from_terms(basis: &BasisRef, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, RatFn)>) -> Self {
        let mut out = DiffForm::zero(basis, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "index length must equal degree");
            let mut k: Index = idx.iter().map(|&i| i as u16).collect();
            if let Some(sign) = sort_sign(&mut k) {
                let c = if sign < 0 { -c } else { c };
                out.add_term(k, &c);
            }
        }
        out
    }

    /// One-form `sum c_i theta_i` from a coefficient vector.
    pub fn one_form(basis: &BasisRef, coeffs: &[RatFn]) -> Self {
        DiffForm::from_terms(basis, 1, coeffs.iter().enumerate().map(|(i, c)| (vec![i], c.clone())))
    }

    fn add_term(&mut self, k: Index, c: &RatFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(acc) => {
                *acc = &*acc + c;
                if acc.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Index, &RatFn)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the wedge of the given indices (any order, sign applied).
    pub fn coeff(&self, idx: &[usize]) -> RatFn {
        let mut k: Index = idx.iter().map(|&i| i as u16).collect();
        match sort_sign(&mut k) {
            None => RatFn::zero(),
            Some(s) => {
                let c = self.terms.get(&k).cloned().unwrap_or_else(RatFn::zero);
                if s < 0 {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Coefficient by symbol names.
    pub fn coeff_of(&self, syms: &[&str]) -> RatFn {
        let idx: Vec<usize> = syms.iter().map(|s| self.basis.index(s).unwrap_or_else(|| panic!("unknown symbol {s}"))).collect();
        self.coeff(&idx)
    }

    fn check(&self, o: &DiffForm) {
        assert!(Arc::ptr_eq(&self.basis, &o.basis) || self.basis == o.basis, "forms over different bases");
    }

    pub fn add(&self, o: &DiffForm) -> DiffForm {
        self.check(o);
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        assert_eq!(self.degree, o.degree, "degree mismatch");
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> DiffForm {
        self.scale(&RatFn::int(-1))
    }

    pub fn sub(&self, o: &DiffForm) -> DiffForm {
        self.add(&o.neg())
    }

    pub fn scale(&self, f: &RatFn) -> DiffForm {
        if f.is_zero() {
            return DiffForm::zero(&self.basis, self.degree);
        }
        DiffForm {
            basis: self.basis.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * f)).collect(),
        }
    }

    pub fn wedge(&self, o: &DiffForm) -> DiffForm {
        self.check(o);
        let mut out = DiffForm::zero(&self.basis, self.degree + o.degree);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let mut k: Index = k1.iter().chain(k2.iter()).copied().collect();
                if let Some(s) = sort_sign(&mut k) {
                    let c = c1 * c2;
                    out.add_term(k, &if s < 0 { -c } else { c });
                }
            }
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: &dyn Fn(&RatFn) -> RatFn) -> DiffForm {
        let mut out = DiffForm::zero(&self.basis, self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    /// Rewrites in another basis, given each old basis 1-form as a
    /// 1-form over the new basis.
    pub fn change_basis(&self, new: &BasisRef, images: &[DiffForm]) -> DiffForm {
        assert_eq!(images.len(), self.basis.len(), "one image per old symbol");
        let mut out = DiffForm::zero(new, self.degree);
        for (k, c) in &self.terms {
            let mut acc = DiffForm::function(new, c.clone());
            for &i in k.iter() {
                acc = acc.wedge(&images[i as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Moves to a basis containing every symbol used here, by name.
    pub fn reindex(&self, new: &BasisRef) -> DiffForm {
        let map: Vec<usize> =
            self.basis.symbols().iter().map(|s| new.index(s).unwrap_or_else(|| panic!("symbol {s} missing from target basis"))).collect();
        DiffForm::from_terms(new, self.degree, self.terms.iter().map(|(k, c)| (k.iter().map(|&i| map[i as usize]).collect(), c.clone())))
    }

    /// Complex conjugate, with `conj_scalar` acting on coefficients. Returns
    /// `None` when a symbol without a known conjugate occurs.
    pub fn conj(&self, conj_scalar: &dyn Fn(&RatFn) -> RatFn) -> Option<DiffForm> {
        let mut terms = Vec::new();
        for (k, c) in &self.terms {
            let idx: Option<Vec<usize>> = k.iter().map(|&i| self.basis.conj_index(i as usize)).collect();
            terms.push((idx?, conj_scalar(c)));
        }
        Some(DiffForm::from_terms(&self.basis, self.degree, terms))
    }

    /// Coefficient vector of a 1-form.
    pub fn as_vector(&self) -> Vec<RatFn> {
        assert_eq!(self.degree, 1);
        (0..self.basis.len()).map(|i| self.coeff(&[i])).collect()
    }

    /// Terms in display order: wedges involving a Maurer–Cartan symbol come
    /// first and are written with that symbol in front.
    pub fn display_terms(&self) -> Vec<(RatFn, Vec<usize>)> {
        let mut mc_terms = Vec::new();
        let mut rest = Vec::new();
        for (k, c) in &self.terms {
            let idx: Vec<usize> = k.iter().map(|&i| i as usize).collect();
            if let Some(pos) = idx.iter().position(|&i| self.basis.is_mc(i)) {
                if pos > 0 && idx.len() == 2 {
                    mc_terms.push((-c, vec![idx[1], idx[0]]));
                } else {
                    mc_terms.push((c.clone(), idx));
                }
            } else {
                rest.push((c.clone(), idx));
            }
        }
        mc_terms.sort_by_key(|(_, idx)| idx.clone());
        mc_terms.extend(rest);
        mc_terms
    }
}

/// Renders a coefficient and wedge as one signed term.
pub(crate) fn render_term(c: &RatFn, wedge: &str) -> (bool, String) {
    let s = c.to_string();
    let (neg, body) = if c.is_polynomial() && c.num().len() == 1 {
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    } else if c.num().len() == 1 && s.starts_with('-') {
        (true, s[1..].to_string())
    } else {
        (false, s)
    };
    let single = c.num().len() == 1;
    let coeff = if body == "1" {
        String::new()
    } else if single {
        format!("{body}*")
    } else {
        format!("({body})*")
    };
    if wedge.is_empty() {
        let b = if body == "1" { "1".to_string() } else { body };
        return (neg, b);
    }
    (neg, format!("{coeff}{wedge}"))
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (c, idx)) in self.display_terms().into_iter().enumerate() {
            let wedge: Vec<&str> = idx.iter().map(|&i| self.basis.symbol(i)).collect();
            let (neg, body) = render_term(&c, &wedge.join("/\\"));
            match (n == 0, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> BasisRef {
        Basis::new(&["sigma", "sigmabar", "zeta"], &["zeta"], &[("sigma", "sigmabar")], &[])
    }

    #[test]
    fn wedge_rules() {
        let b = basis();
        let s = DiffForm::symbol(&b, "sigma");
        let sb = DiffForm::symbol(&b, "sigmabar");
        let z = DiffForm::symbol(&b, "zeta");
        assert!(z.wedge(&z).is_zero());
        assert_eq!(s.wedge(&z), z.wedge(&s).neg());
        assert_eq!(s.add(&sb).wedge(&z), s.wedge(&z).add(&sb.wedge(&z)));
        assert_eq!(z.wedge(&s).coeff_of(&["sigma", "zeta"]), RatFn::int(-1));
        assert_eq!(s.wedge(&z).to_string(), "sigma/\\zeta");
    }

    #[test]
    fn change_basis_roundtrip() {
        let b = basis();
        let f = DiffForm::symbol(&b, "sigma").wedge(&DiffForm::symbol(&b, "zeta")).scale(&RatFn::int(3));
        let two = RatFn::int(2);
        let half = RatFn::ratio(1, 2);
        let one = RatFn::one();
        let fwd: Vec<DiffForm> = (0..3).map(|i| DiffForm::basic(&b, i).scale(if i == 0 { &two } else { &one })).collect();
        let back: Vec<DiffForm> = (0..3).map(|i| DiffForm::basic(&b, i).scale(if i == 0 { &half } else { &one })).collect();
        assert_eq!(f.change_basis(&b, &fwd).change_basis(&b, &back), f);
        let conj = f.conj(&|c| c.conj()).unwrap();
        assert_eq!(conj.coeff_of(&["sigmabar", "zeta"]), RatFn::int(3));
    }
}
