//! The Siegel case: `G = GSp_2g`, `μ = (1^(g), 0^(g))`.
//!
//! Ambient coordinates are `Z^{2g}`; the cocharacter lattice is
//! `X = {x : x_1 + x_{2g} = x_2 + x_{2g−1} = ⋯ = x_g + x_{g+1}}` with basis
//! `e_i − e_{2g+1−i}` (`i ≤ g`) and `(0^(g), 1^(g))`. Nodes of `S̃` are
//! numbered `s_0, …, s_g`, with `s_g = (g, g+1)` and
//! `s_i = (i, i+1)(2g−i, 2g+1−i)` acting on coordinates.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::admissible::{admissible_set, is_left_minimal, kw_elements, AdmissibleSet, ParahoricLabel};
use crate::affine::{AffineWeylGroup, ExtAffineElement, OmegaElement, WeylElement};
use crate::coxeter::{CoxeterMatrix, DiagramMap, FiniteTypeLabel, NodeSubset};
use crate::ekor::{dl_datum, is_basic_stratum, supp_sigma, DLDatum};
use crate::error::{AtlasError, Result};
use crate::root_datum::RootDatum;

/// One-line form (1-based) of a product of disjoint transpositions on `n` letters.
pub fn transpositions(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for &(a, b) in pairs {
        perm.swap(a - 1, b - 1);
    }
    perm
}

/// Coordinate permutation of the finite simple reflection `s_i`, `1 ≤ i ≤ g`.
pub fn simple_permutation(g: usize, i: usize) -> Vec<usize> {
    if i == g {
        transpositions(2 * g, &[(g, g + 1)])
    } else {
        transpositions(2 * g, &[(i, i + 1), (2 * g - i, 2 * g + 1 - i)])
    }
}

fn permute(perm: &[usize], v: &[i64]) -> Vec<i64> {
    let mut out = vec![0; v.len()];
    for (i, &x) in v.iter().enumerate() {
        out[perm[i] - 1] = x;
    }
    out
}

/// The `GSp_2g` root datum, with coroots derived from the coordinate
/// permutations through `x − s_i(x) = ⟨x, α_i⟩ α_i^∨`.
pub fn siegel_datum(g: usize) -> Result<RootDatum> {
    if g == 0 {
        return Err(AtlasError::InvalidGenus(g));
    }
    let d = 2 * g;
    let unit = |i: usize| -> Vec<i64> { (1..=d).map(|k| i64::from(k == i)).collect() };
    let mut basis: Vec<Vec<i64>> = (1..=g)
        .map(|i| unit(i).iter().zip(unit(d + 1 - i)).map(|(a, b)| a - b).collect())
        .collect();
    basis.push((1..=d).map(|k| i64::from(k > g)).collect());
    let roots: Vec<Vec<i64>> =
        (1..=g).map(|i| unit(i).iter().zip(unit(i + 1)).map(|(a, b)| a - b).collect()).collect();

    let mut coroots = Vec::with_capacity(g);
    for (i, alpha) in (1..=g).zip(&roots) {
        let perm = simple_permutation(g, i);
        let diffs: Vec<(i64, Vec<i64>)> = basis
            .iter()
            .map(|b| {
                let pb = permute(&perm, b);
                let pairing: i64 = alpha.iter().zip(b).map(|(a, x)| a * x).sum();
                (pairing, b.iter().zip(&pb).map(|(x, y)| x - y).collect())
            })
            .collect();
        let (p, diff) = diffs
            .iter()
            .find(|(p, _)| *p != 0)
            .ok_or_else(|| AtlasError::InvalidRootDatum(format!("α_{i} vanishes on X")))?;
        if diff.iter().any(|x| x % p != 0) {
            return Err(AtlasError::InvalidRootDatum(format!("α_{i}^∨ is not integral")));
        }
        let coroot: Vec<i64> = diff.iter().map(|x| x / p).collect();
        for (pairing, diff) in &diffs {
            let expected: Vec<i64> = coroot.iter().map(|c| c * pairing).collect();
            if &expected != diff {
                return Err(AtlasError::InvalidRootDatum(format!(
                    "reflection formula disagrees with the permutation action of s_{i}"
                )));
            }
        }
        coroots.push(coroot);
    }
    RootDatum::new(d, basis, roots, coroots)
}

/// Minimal-length representatives of `S_g \ W_g`, tagged with the least
/// `c ≤ g/2` such that the element lies in `ᶜW`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EOElement {
    pub c: Option<usize>,
    pub word: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    GortzYu,
    Hoeve,
}

pub struct SiegelContext {
    g: usize,
    group: AffineWeylGroup,
    mu: Vec<i64>,
    tau: OmegaElement,
    adm: OnceLock<AdmissibleSet>,
}

impl std::fmt::Debug for SiegelContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SiegelContext").field("g", &self.g).finish()
    }
}

impl SiegelContext {
    pub fn new(g: usize) -> Result<Self> {
        let datum = siegel_datum(g)?;
        let group = AffineWeylGroup::new(datum)?;
        let d = 2 * g;
        let mu_ambient: Vec<i64> = (1..=d).map(|k| i64::from(k <= g)).collect();
        let mu = group.datum().to_lattice(&mu_ambient)?;
        let tau = group.tau_of_mu(&mu)?;
        let ctx = SiegelContext { g, group, mu, tau, adm: OnceLock::new() };
        ctx.check_structure()?;
        Ok(ctx)
    }

    fn check_structure(&self) -> Result<()> {
        let g = self.g;
        let grp = &self.group;
        let fail = |what: &str| Err(AtlasError::Consistency(format!("GSp_{}: {what}", 2 * g)));
        if grp.num_nodes() != g + 1 {
            return fail("wrong number of simple affine reflections");
        }
        for i in 1..=g {
            let s = grp.simple_reflection(i);
            if !s.translation().iter().all(|&v| v == 0)
                || grp.finite_one_line(s.finite()).as_deref() != Some(&simple_permutation(g, i)[..])
            {
                return fail(&format!("s_{i} does not act by the expected permutation"));
            }
        }
        let s0 = grp.simple_reflection(0);
        let mut t0 = vec![0i64; 2 * g];
        t0[0] = -1;
        t0[2 * g - 1] = 1;
        if grp.datum().to_ambient(s0.translation()) != t0
            || grp.finite_one_line(s0.finite()) != Some(transpositions(2 * g, &[(1, 2 * g)]))
        {
            return fail("s_0 is not ((-1,0,…,0,1),(1,2g))");
        }
        if grp.coxeter_matrix() != &CoxeterMatrix::affine_c(g) {
            return fail("Coxeter matrix is not of type C̃_g");
        }
        let tau_t: Vec<i64> = (1..=2 * g).map(|k| i64::from(k > g)).collect();
        let tau_w: Vec<(usize, usize)> = (1..=g).map(|i| (i, g + i)).collect();
        if grp.datum().to_ambient(self.tau.element.translation()) != tau_t
            || grp.finite_one_line(self.tau.element.finite()) != Some(transpositions(2 * g, &tau_w))
        {
            return fail("τ is not ((0^(g),1^(g)), (1,g+1)⋯(g,2g))");
        }
        let exchange: Vec<usize> = (0..=g).rev().collect();
        if grp.twisted_frobenius(&self.tau.element).images() != exchange.as_slice() {
            return fail("Ad(τ)σ is not the node exchange i ↔ g−i");
        }
        Ok(())
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn group(&self) -> &AffineWeylGroup {
        &self.group
    }

    /// `μ` in lattice coordinates.
    pub fn mu(&self) -> &[i64] {
        &self.mu
    }

    pub fn tau(&self) -> &OmegaElement {
        &self.tau
    }

    pub fn adm(&self) -> &AdmissibleSet {
        self.adm.get_or_init(|| admissible_set(&self.group, &self.mu).expect("μ is dominant"))
    }

    /// `K = S̃ ∖ {s_0}`.
    pub fn hyperspecial(&self) -> ParahoricLabel {
        let k = self.group.all_nodes().difference(NodeSubset::singleton(0));
        ParahoricLabel::new(&self.group, k).expect("hyperspecial level is valid")
    }

    /// `τσ`, the node exchange `i ↔ g − i`.
    pub fn exchange(&self) -> DiagramMap {
        self.group.twisted_frobenius(&self.tau.element)
    }

    /// `S̃ ∖ {s_c, s_{g−c}}`.
    pub fn j_complement(&self, c: usize) -> NodeSubset {
        let mut j = self.group.all_nodes();
        j.remove(c);
        j.remove(self.g - c);
        j
    }

    /// The least `c ≤ g/2` with `supp(x τ⁻¹) ⊆ S̃ ∖ {s_c, s_{g−c}}`.
    pub fn basic_closed_form(&self, x: &ExtAffineElement) -> Option<usize> {
        let supp = self.group.support(x);
        (0..=self.g / 2).find(|&c| supp.is_subset(self.j_complement(c)))
    }

    /// `{s_1, …, s_{g−1}}`: the generators of `S_g`.
    fn levi_nodes(&self) -> NodeSubset {
        (1..self.g).collect()
    }

    /// Left-minimal representatives of `S_g \ W_g`, sorted by (length, word).
    pub fn gw(&self) -> Vec<WeylElement> {
        let levi = self.levi_nodes();
        let mut out: Vec<(Vec<usize>, WeylElement)> = self
            .group
            .finite_weyl_group()
            .into_iter()
            .filter(|w| is_left_minimal(&self.group, &self.group.finite_element(w), levi))
            .map(|w| (self.finite_reduced_word(&w), w))
            .collect();
        out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        out.into_iter().map(|(_, w)| w).collect()
    }

    pub fn finite_reduced_word(&self, w: &WeylElement) -> Vec<usize> {
        self.group.reduced_word(&self.group.finite_element(w)).word
    }

    /// `ᵍW` with EO labels `c`.
    pub fn eo_elements(&self) -> Vec<EOElement> {
        self.gw()
            .iter()
            .map(|w| {
                let word = self.finite_reduced_word(w);
                let supp: NodeSubset = word.iter().copied().collect();
                let c = (0..=self.g / 2).find(|&c| supp.is_subset(self.tail_nodes(c)));
                EOElement { c, word }
            })
            .collect()
    }

    /// `{s_{g−c+1}, …, s_g}`.
    fn tail_nodes(&self, c: usize) -> NodeSubset {
        (self.g + 1 - c..=self.g).collect()
    }

    /// `ᶜW` embedded in `W_g` via `s_{c+1−i} ↦ s_{g+1−i}`, as reduced words
    /// sorted by (length, word).
    pub fn cw_embed(&self, c: usize) -> Result<Vec<Vec<usize>>> {
        let g = self.g;
        if c > g {
            return Err(AtlasError::Precondition(format!("c = {c} exceeds g = {g}")));
        }
        let mut words: Vec<Vec<usize>> = if c == 0 {
            vec![Vec::new()]
        } else {
            let small = AffineWeylGroup::new(siegel_datum(c)?)?;
            let levi: NodeSubset = (1..c).collect();
            small
                .finite_weyl_group()
                .iter()
                .map(|w| small.finite_element(w))
                .filter(|x| is_left_minimal(&small, x, levi))
                .map(|x| small.reduced_word(&x).word.iter().map(|&j| g - c + j).collect())
                .collect()
        };
        words.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));

        let embedded: HashSet<WeylElement> = words.iter().map(|w| self.group.finite_word(w)).collect();
        let gw = self.gw();
        let by_support: HashSet<WeylElement> = gw
            .iter()
            .filter(|w| {
                let supp: NodeSubset = self.finite_reduced_word(w).into_iter().collect();
                supp.is_subset(self.tail_nodes(c))
            })
            .cloned()
            .collect();
        if embedded != by_support {
            return Err(AtlasError::Consistency(format!("ᶜW for c = {c} is not the tail-supported part of ᵍW")));
        }
        if 2 * c <= g {
            let avoid = NodeSubset::from_iter([c, g - c]);
            let anchored: HashSet<WeylElement> = gw
                .iter()
                .filter(|w| {
                    let supp: NodeSubset = self.finite_reduced_word(w).into_iter().collect();
                    supp.intersection(avoid).is_empty()
                })
                .cloned()
                .collect();
            if embedded != anchored {
                return Err(AtlasError::Consistency(format!("ᶜW ≠ W_{{c,g−c}} ∩ ᵍW for c = {c}")));
            }
        }
        Ok(words)
    }

    /// `ᶜW ∖ ᶜ⁻¹W` as reduced words; for `c = 0` this is `{e}`.
    pub fn cw_new(&self, c: usize) -> Result<Vec<Vec<usize>>> {
        let cur = self.cw_embed(c)?;
        if c == 0 {
            return Ok(cur);
        }
        let prev: HashSet<Vec<usize>> = self
            .cw_embed(c - 1)?
            .into_iter()
            .map(|w| self.finite_reduced_word(&self.group.finite_word(&w)))
            .collect();
        Ok(cur
            .into_iter()
            .filter(|w| !prev.contains(&self.finite_reduced_word(&self.group.finite_word(w))))
            .collect())
    }

    /// `w ↦ τ·w`, checked to land in `Adm(μ) ∩ ᴷW̃` for hyperspecial `K`.
    pub fn eo_correspondence(&self, w: &WeylElement) -> Result<ExtAffineElement> {
        let we = self.group.finite_element(w);
        if !is_left_minimal(&self.group, &we, self.levi_nodes()) {
            return Err(AtlasError::Precondition("element is not in ᵍW".into()));
        }
        let x = self.group.mul(&self.tau.element, &we);
        if !self.adm().contains(&x) || !is_left_minimal(&self.group, &x, self.hyperspecial().nodes()) {
            return Err(AtlasError::Consistency(format!(
                "τ·w for w = {:?} is not in Adm(μ) ∩ ᴷW̃",
                self.finite_reduced_word(w)
            )));
        }
        Ok(x)
    }

    /// The full correspondence `ᵍW → Adm(μ) ∩ ᴷW̃`, checked to be a bijection.
    pub fn eo_map(&self) -> Result<Vec<(WeylElement, ExtAffineElement)>> {
        let pairs: Vec<(WeylElement, ExtAffineElement)> = self
            .gw()
            .into_iter()
            .map(|w| self.eo_correspondence(&w).map(|x| (w, x)))
            .collect::<Result<_>>()?;
        let image: HashSet<&ExtAffineElement> = pairs.iter().map(|p| &p.1).collect();
        if image.len() != pairs.len() {
            return Err(AtlasError::Consistency("w ↦ τw is not injective on ᵍW".into()));
        }
        let target = kw_elements(&self.group, self.adm(), self.hyperspecial())?;
        if target.len() != image.len() || !target.iter().all(|x| image.contains(x)) {
            return Err(AtlasError::Consistency("w ↦ τw is not onto Adm(μ) ∩ ᴷW̃".into()));
        }
        Ok(pairs)
    }

    /// The closed forms `({s_0..s_{c−1}} ∪ {s_{g−c+1}..s_g}, {s_{c+1}..s_{g−c−1}})`
    /// for the σ-support and `I(K, w, σ)` of `w ∈ ᶜW ∖ ᶜ⁻¹W`.
    pub fn eo_closed_forms(&self, c: usize) -> (NodeSubset, NodeSubset) {
        let g = self.g;
        let supp: NodeSubset = (0..c).chain(g + 1 - c..=g).collect();
        let iset: NodeSubset = if g >= c + 1 { (c + 1..g.saturating_sub(c)).collect() } else { NodeSubset::empty() };
        (supp, iset)
    }

    /// Basic Iwahori strata against the superspecial description
    /// `x ∈ W_{c,g−c}τ`.
    pub fn compare_gortz_yu(&self) -> Result<Vec<GortzYuRow>> {
        let grp = &self.group;
        let exchange = self.exchange();
        let mut rows = Vec::new();
        for (i, x) in self.adm().elements().iter().enumerate() {
            let generic = is_basic_stratum(grp, x);
            let c = self.basic_closed_form(x);
            if generic != c.is_some() {
                return Err(AtlasError::Consistency(format!(
                    "basic criteria disagree on {:?}: supp_σ finite = {generic}, closed form c = {c:?}",
                    self.adm().word_of(i)
                )));
            }
            let Some(c) = c else { continue };
            let j = self.j_complement(c);
            if exchange.image(j) != j {
                return Err(AtlasError::Consistency(format!("J = {j} is not τσ-stable")));
            }
            let supp = supp_sigma(grp, x);
            if !supp.closure.is_subset(j) {
                return Err(AtlasError::Consistency(format!("supp_σ = {} ⊄ J = {j}", supp.closure)));
            }
            let dl = dl_datum(grp, ParahoricLabel::iwahori(), x)?;
            rows.push(GortzYuRow {
                word: self.adm().word_of(i).to_vec(),
                length: dl.dimension,
                c,
                j,
                supp_sigma: supp.closure,
                y_ambient: j,
                y_type: grp.diagram().finite_type_of(j)?,
                y_parabolic: NodeSubset::empty(),
                generic: dl,
                stratum_label: format!("A_{{{j},τ}}"),
            });
        }
        Ok(rows)
    }

    /// Basic EO strata: generic `supp_σ`, `I(K, w, σ)` next to the closed forms.
    /// Disagreements are recorded per row; the ambient set `S̃ ∖ {s_c, s_{g−c}}`
    /// is checked unconditionally.
    pub fn compare_hoeve(&self) -> Result<Vec<HoeveRow>> {
        let grp = &self.group;
        let k = self.hyperspecial();
        let mut rows = Vec::new();
        for c in 0..=self.g / 2 {
            let (closed_supp, closed_iset) = self.eo_closed_forms(c);
            for word in self.cw_new(c)? {
                let w = grp.finite_word(&word);
                let x = self.eo_correspondence(&w)?;
                let supp = supp_sigma(grp, &x);
                let dl = dl_datum(grp, k, &x)?;
                if dl.ambient != self.j_complement(c) {
                    return Err(AtlasError::Consistency(format!(
                        "c = {c}, w = {word:?}: ambient {} ≠ S̃ ∖ {{s_c, s_(g−c)}}",
                        dl.ambient
                    )));
                }
                rows.push(HoeveRow {
                    c,
                    w_word: word,
                    x_word: dl.word.clone(),
                    supp_sigma: supp.closure,
                    i_set: dl.parabolic,
                    closed_supp,
                    closed_i_set: closed_iset,
                    generic: dl,
                });
            }
        }
        Ok(rows)
    }
}

#[derive(Clone, Debug)]
pub struct GortzYuRow {
    pub word: Vec<usize>,
    pub length: usize,
    pub c: usize,
    pub j: NodeSubset,
    pub supp_sigma: NodeSubset,
    /// `Y(J, w)`: ambient `W_J`, trivial parabolic.
    pub y_ambient: NodeSubset,
    pub y_type: FiniteTypeLabel,
    pub y_parabolic: NodeSubset,
    pub generic: DLDatum,
    pub stratum_label: String,
}

#[derive(Clone, Debug)]
pub struct HoeveRow {
    pub c: usize,
    pub w_word: Vec<usize>,
    pub x_word: Vec<usize>,
    pub supp_sigma: NodeSubset,
    pub i_set: NodeSubset,
    pub closed_supp: NodeSubset,
    pub closed_i_set: NodeSubset,
    pub generic: DLDatum,
}

impl HoeveRow {
    pub fn supp_agrees(&self) -> bool {
        self.supp_sigma == self.closed_supp
    }

    pub fn i_set_agrees(&self) -> bool {
        self.i_set == self.closed_i_set
    }

    pub fn agrees(&self) -> bool {
        self.supp_agrees() && self.i_set_agrees()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::straight_classes;
    use crate::ekor::{i_set, stratum_report};

    fn el(ctx: &SiegelContext, word: &[usize]) -> ExtAffineElement {
        let grp = ctx.group();
        grp.mul(&grp.word_element(word), &ctx.tau().element)
    }

    #[test]
    fn tau_and_exchange_g2() {
        let ctx = SiegelContext::new(2).unwrap();
        let grp = ctx.group();
        assert_eq!(grp.datum().to_ambient(ctx.tau().element.translation()), vec![0, 0, 1, 1]);
        assert_eq!(grp.finite_one_line(ctx.tau().element.finite()), Some(vec![3, 4, 1, 2]));
        assert_eq!(ctx.exchange().images(), &[2, 1, 0]);
        assert_eq!(grp.finite_weyl_group().len(), 8);
    }

    #[test]
    fn weyl_and_gw_orders() {
        for g in 1..=4 {
            let ctx = SiegelContext::new(g).unwrap();
            let fact: usize = (1..=g).product();
            assert_eq!(ctx.group().finite_weyl_group().len(), (1 << g) * fact);
            assert_eq!(ctx.gw().len(), 1 << g);
        }
    }

    #[test]
    fn adm_sizes() {
        let c1 = SiegelContext::new(1).unwrap();
        assert_eq!(c1.adm().len(), 3);
        let c2 = SiegelContext::new(2).unwrap();
        assert_eq!(c2.adm().len(), 13);
        assert_eq!(c2.adm().length_profile(), vec![1, 3, 5, 4]);
    }

    #[test]
    fn tau_squared_and_lengths() {
        let ctx = SiegelContext::new(2).unwrap();
        let grp = ctx.group();
        let t = &ctx.tau().element;
        let tt = grp.mul(t, t);
        assert!(tt.finite().is_identity());
        assert_eq!(grp.datum().to_ambient(tt.translation()), vec![1, 1, 1, 1]);
        let x = grp.translation_ambient(&[1, 1, 0, 0]).unwrap();
        assert_eq!(grp.length(&x), 3);
        assert_eq!(grp.newton_ambient_strings(&grp.newton_vector(t)), vec!["1/2"; 4]);
        assert!(!grp.is_sigma_straight(&el(&ctx, &[1])));
        assert!(grp.is_sigma_straight(t));
    }

    #[test]
    fn kw_hyperspecial_g2() {
        let ctx = SiegelContext::new(2).unwrap();
        let kw = kw_elements(ctx.group(), ctx.adm(), ctx.hyperspecial()).unwrap();
        let expected: Vec<ExtAffineElement> =
            [&[][..], &[0], &[0, 1], &[0, 1, 0]].iter().map(|w| el(&ctx, w)).collect();
        assert_eq!(kw, expected);
    }

    #[test]
    fn straight_class_counts() {
        for (g, n) in [(1, 2), (2, 3)] {
            let ctx = SiegelContext::new(g).unwrap();
            let classes = straight_classes(ctx.group(), ctx.adm()).unwrap();
            assert_eq!(classes.len(), n);
            assert_eq!(classes.iter().filter(|c| c.is_basic).count(), 1);
            assert!(classes[0].is_basic);
        }
    }

    #[test]
    fn supp_sigma_examples() {
        let ctx = SiegelContext::new(2).unwrap();
        let grp = ctx.group();
        let s = supp_sigma(grp, &ctx.tau().element);
        assert!(s.closure.is_empty() && s.is_finite);
        let s = supp_sigma(grp, &el(&ctx, &[2]));
        assert_eq!(s.closure, NodeSubset::from_iter([0, 2]));
        assert!(s.is_finite);
        let s = supp_sigma(grp, &el(&ctx, &[0, 1]));
        assert_eq!(s.closure, grp.all_nodes());
        assert!(!s.is_finite);
        assert!(is_basic_stratum(grp, &el(&ctx, &[0, 2])));
        assert!(!is_basic_stratum(grp, &el(&ctx, &[0, 1, 0])));
    }

    #[test]
    fn i_set_and_dl_examples() {
        let ctx = SiegelContext::new(2).unwrap();
        let grp = ctx.group();
        let k = ctx.hyperspecial();
        let tau = &ctx.tau().element;
        assert_eq!(i_set(grp, k.nodes(), tau), NodeSubset::singleton(1));
        assert_eq!(i_set(grp, k.nodes(), &el(&ctx, &[0])), NodeSubset::empty());
        assert_eq!(i_set(grp, NodeSubset::empty(), tau), NodeSubset::empty());

        let d = dl_datum(grp, k, tau).unwrap();
        assert_eq!(d.ambient, NodeSubset::singleton(1));
        assert_eq!(d.parabolic, NodeSubset::singleton(1));
        assert_eq!(d.ambient_type.to_string(), "A1");
        assert_eq!(d.dimension, 0);

        let d = dl_datum(grp, k, &el(&ctx, &[0])).unwrap();
        assert_eq!(d.ambient, NodeSubset::from_iter([0, 2]));
        assert!(d.parabolic.is_empty());
        assert_eq!(d.ambient_type.to_string(), "A1xA1");
        assert_eq!(d.frobenius.apply(0), 2);
        assert_eq!(d.dimension, 1);
        assert!(d.is_sigma_coxeter);

        let d = dl_datum(grp, ParahoricLabel::iwahori(), &el(&ctx, &[0, 2])).unwrap();
        assert_eq!(d.ambient, NodeSubset::from_iter([0, 2]));
        assert_eq!(d.dimension, 2);
        assert!(!d.is_sigma_coxeter);

        assert!(dl_datum(grp, k, &el(&ctx, &[0, 1, 0])).is_err());
    }

    #[test]
    fn report_counts() {
        let c1 = SiegelContext::new(1).unwrap();
        let r = stratum_report(c1.group(), c1.adm(), ParahoricLabel::iwahori()).unwrap();
        assert_eq!((r.len(), r.iter().filter(|x| x.is_basic).count()), (3, 1));

        let c2 = SiegelContext::new(2).unwrap();
        let r = stratum_report(c2.group(), c2.adm(), ParahoricLabel::iwahori()).unwrap();
        let basic: Vec<_> = r.iter().filter(|x| x.is_basic).map(|x| x.w.clone()).collect();
        let expected: Vec<_> = [&[][..], &[0], &[1], &[2], &[0, 2]].iter().map(|w| el(&c2, w)).collect();
        assert_eq!(basic, expected);
        let r = stratum_report(c2.group(), c2.adm(), c2.hyperspecial()).unwrap();
        assert_eq!((r.len(), r.iter().filter(|x| x.is_basic).count()), (4, 2));
    }

    #[test]
    fn basic_closed_form_examples() {
        let ctx = SiegelContext::new(2).unwrap();
        assert_eq!(ctx.basic_closed_form(&ctx.tau().element), Some(0));
        assert_eq!(ctx.basic_closed_form(&el(&ctx, &[0, 2])), Some(1));
        assert_eq!(ctx.basic_closed_form(&el(&ctx, &[0, 1, 0])), None);
    }

    #[test]
    fn cw_examples() {
        let ctx = SiegelContext::new(2).unwrap();
        assert_eq!(ctx.cw_embed(0).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(ctx.cw_embed(1).unwrap(), vec![vec![], vec![2]]);
        assert_eq!(ctx.cw_embed(2).unwrap().len(), 4);
        assert!(ctx.cw_embed(3).is_err());
    }

    #[test]
    fn eo_correspondence_examples() {
        let c1 = SiegelContext::new(1).unwrap();
        let x = c1.eo_correspondence(&c1.group().finite_word(&[1])).unwrap();
        assert!(x.finite().is_identity());
        assert_eq!(c1.group().datum().to_ambient(x.translation()), vec![0, 1]);

        let c2 = SiegelContext::new(2).unwrap();
        assert_eq!(c2.eo_correspondence(&c2.group().finite_word(&[])).unwrap(), c2.tau().element);
        assert_eq!(c2.eo_correspondence(&c2.group().finite_word(&[2])).unwrap(), el(&c2, &[0]));
        for g in 1..=3 {
            assert_eq!(SiegelContext::new(g).unwrap().eo_map().unwrap().len(), 1 << g);
        }
    }

    #[test]
    fn closed_form_sets() {
        let c2 = SiegelContext::new(2).unwrap();
        assert_eq!(c2.eo_closed_forms(1), (NodeSubset::from_iter([0, 2]), NodeSubset::empty()));
        assert_eq!(c2.eo_closed_forms(0), (NodeSubset::empty(), NodeSubset::singleton(1)));
        let c4 = SiegelContext::new(4).unwrap();
        assert_eq!(c4.eo_closed_forms(1), (NodeSubset::from_iter([0, 4]), NodeSubset::singleton(2)));
    }

    #[test]
    fn comparisons() {
        for g in 1..=3 {
            let ctx = SiegelContext::new(g).unwrap();
            let gy = ctx.compare_gortz_yu().unwrap();
            let h = ctx.compare_hoeve().unwrap();
            assert_eq!(h.len(), 1 << (g / 2));
            assert!(h.iter().all(|r| r.agrees()));
            if g == 1 {
                assert_eq!((gy.len(), h.len()), (1, 1));
            }
            if g == 2 {
                assert_eq!(gy.len(), 5);
                let row = gy.iter().find(|r| r.word == [0, 2]).unwrap();
                assert_eq!((row.c, row.j), (1, NodeSubset::from_iter([0, 2])));
            }
        }
    }

    #[test]
    fn hoeve_g4() {
        let ctx = SiegelContext::new(4).unwrap();
        let rows = ctx.compare_hoeve().unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.supp_agrees()));
        let c1: Vec<_> = rows.iter().filter(|r| r.c == 1).collect();
        assert!(c1.iter().all(|r| r.i_set == NodeSubset::singleton(2)));
        // s4s3s4 is not σ-Coxeter; the generic I(K, w, σ) is {s1, s3}.
        let odd = rows.iter().find(|r| r.w_word == [4, 3, 4]).unwrap();
        assert!(!odd.generic.is_sigma_coxeter);
        assert_eq!(odd.i_set, NodeSubset::from_iter([1, 3]));
        assert!(rows.iter().filter(|r| r.w_word != [4, 3, 4]).all(|r| r.agrees()));
    }

    #[test]
    fn genus_zero_rejected() {
        assert!(matches!(SiegelContext::new(0), Err(AtlasError::InvalidGenus(0))));
    }
}
