//! The flux operator of the original Levin-Wen construction, valid only for
//! tetrahedrally symmetric categories.

use num_complex::Complex64;

use crate::category::symbols::LwTable;
use crate::category::{Category, Label};

/// `<g'h'i'j'k'l'| B_p^s |ghijkl>` as a product of six Levin-Wen symbols
///
/// ```text
/// 𝓕^{a l* g}_{s* g' l'*} 𝓕^{b g* h}_{s* h' g'*} 𝓕^{c h* i}_{s* i' h'*}
/// 𝓕^{d i* j}_{s* j' i'*} 𝓕^{e j* k}_{s* k' j'*} 𝓕^{f k* l}_{s* l' k'*}
/// ```
///
/// The table comes from [`crate::category::symbols::to_lw_fsymbols`], which
/// refuses categories without tetrahedral symmetry.
pub fn lw_bp_s_element(
    cat: &Category,
    lw: &LwTable,
    s: Label,
    ext: &[Label; 6],
    old: &[Label; 6],
    new: &[Label; 6],
) -> Complex64 {
    let du = |x| cat.dual(x);
    let ss = du(s);
    let [a, b, c, d, e, f] = *ext;
    let [g, h, i, j, k, l] = *old;
    let [g2, h2, i2, j2, k2, l2] = *new;
    lw.get(a, du(l), g, ss, g2, du(l2))
        * lw.get(b, du(g), h, ss, h2, du(g2))
        * lw.get(c, du(h), i, ss, i2, du(h2))
        * lw.get(d, du(i), j, ss, j2, du(i2))
        * lw.get(e, du(j), k, ss, k2, du(j2))
        * lw.get(f, du(k), l, ss, l2, du(k2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtins;
    use crate::category::symbols::to_lw_fsymbols;
    use crate::hamiltonian::plaquette::bp_s_element;

    #[test]
    fn toric_code_matches_generalized_element() {
        let tc = builtins::toric_code();
        let lw = to_lw_fsymbols(&tc, 1e-9).unwrap();
        let n = 2usize;
        for code in 0..n.pow(18) {
            if code % 97 != 0 {
                continue;
            }
            let x: Vec<Label> = (0..18).map(|p| Label(((code >> p) & 1) as u8)).collect();
            let ext: [Label; 6] = x[0..6].try_into().unwrap();
            let old: [Label; 6] = x[6..12].try_into().unwrap();
            let new: [Label; 6] = x[12..18].try_into().unwrap();
            for s in tc.labels() {
                let a = bp_s_element(&tc, s, &ext, &old, &new);
                let b = lw_bp_s_element(&tc, &lw, s, &ext, &old, &new);
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
