//! σ-supports, the basic-stratum criterion, `I(K, w, σ)` and the
//! Deligne–Lusztig datum attached to each basic EKOR stratum.

use crate::admissible::{is_left_minimal, kw_elements, AdmissibleSet, ParahoricLabel};
use crate::affine::{AffineWeylGroup, ExtAffineElement, NewtonPoint, Pi1Class};
use crate::coxeter::{orbit_closure, DiagramMap, FiniteTypeLabel, NodeSubset};
use crate::error::{AtlasError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaSupport {
    /// Letters of a reduced word of the `W_a`-part.
    pub raw: NodeSubset,
    /// Closure of `raw` under `Ad(ω)∘σ`, `ω` the `Ω`-part.
    pub closure: NodeSubset,
    /// Whether `W_closure` is finite.
    pub is_finite: bool,
}

pub fn supp_sigma(group: &AffineWeylGroup, x: &ExtAffineElement) -> SigmaSupport {
    let raw = group.support(x);
    let frob = group.twisted_frobenius(x);
    let closure = orbit_closure(&frob, raw);
    SigmaSupport { raw, closure, is_finite: group.diagram().is_finite_parabolic(closure) }
}

/// For `x ∈ Adm(μ) ∩ ᴷW̃`: the stratum is basic iff `W_{supp_σ(x)}` is finite.
pub fn is_basic_stratum(group: &AffineWeylGroup, x: &ExtAffineElement) -> bool {
    supp_sigma(group, x).is_finite
}

/// `Ad(x)σ(s) = x σ(s) x⁻¹` as a node, if it is a simple reflection.
pub fn twisted_conjugate_node(group: &AffineWeylGroup, x: &ExtAffineElement, s: usize) -> Option<usize> {
    let sigma_s = group.simple_reflection(group.sigma_diagram().apply(s));
    let conj = group.conjugate(x, sigma_s);
    if group.length(&conj) != 1 {
        return None;
    }
    group.as_simple_reflection(&conj)
}

/// `I(K, x, σ)`: the largest `K' ⊆ K` with `Ad(x)σ(K') ⊆ K'`, computed as
/// the greatest fixed point of `K_{i+1} = {s ∈ K_i : Ad(x)σ(s) ∈ K_i}`.
pub fn i_set(group: &AffineWeylGroup, k: NodeSubset, x: &ExtAffineElement) -> NodeSubset {
    let images: Vec<(usize, Option<usize>)> = k.iter().map(|s| (s, twisted_conjugate_node(group, x, s))).collect();
    let mut cur = k;
    loop {
        let next: NodeSubset = images
            .iter()
            .filter(|(s, img)| cur.contains(*s) && img.is_some_and(|t| cur.contains(t)))
            .map(|(s, _)| *s)
            .collect();
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Combinatorial description of the classical Deligne–Lusztig varieties
/// making up a basic stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DLDatum {
    /// `supp_σ(x) ∪ I(K, x, σ)`; generates a finite Weyl group.
    pub ambient: NodeSubset,
    /// `I(K, x, σ)`.
    pub parabolic: NodeSubset,
    pub word: Vec<usize>,
    /// `Ad(τ)∘σ` on `S̃`.
    pub frobenius: DiagramMap,
    pub ambient_type: FiniteTypeLabel,
    pub dimension: usize,
    pub is_sigma_coxeter: bool,
    pub frobenius_stabilizes_parabolic: bool,
    /// The stratum's level `K` and the parahoric `K̆_ambient` whose
    /// intersection with `J_τ` indexes the disjoint union; never enumerated.
    pub index_set: (NodeSubset, NodeSubset),
}

pub fn dl_datum(group: &AffineWeylGroup, k: ParahoricLabel, x: &ExtAffineElement) -> Result<DLDatum> {
    let supp = supp_sigma(group, x);
    if !supp.is_finite {
        return Err(AtlasError::Precondition(format!("stratum is not basic: supp_σ = {}", supp.closure)));
    }
    if !is_left_minimal(group, x, k.nodes()) {
        return Err(AtlasError::Precondition("element is not minimal in its W_K-coset".into()));
    }
    let parabolic = i_set(group, k.nodes(), x);
    let ambient = supp.closure.union(parabolic);
    if !group.diagram().is_finite_parabolic(ambient) {
        return Err(AtlasError::Consistency(format!("W_{ambient} is infinite for a basic stratum")));
    }
    let red = group.reduced_word(x);
    let frobenius = group.twisted_frobenius(x);
    let ambient_type = group.diagram().finite_type_of(ambient)?;
    let dimension = red.word.len();
    let orbits = frobenius.orbits(supp.closure);
    let is_sigma_coxeter = dimension == orbits.len() && orbits.iter().all(|o| o.intersection(supp.raw).len() == 1);
    let frobenius_stabilizes_parabolic = frobenius.image(parabolic) == parabolic;
    Ok(DLDatum {
        ambient,
        parabolic,
        word: red.word,
        frobenius,
        ambient_type,
        dimension,
        is_sigma_coxeter,
        frobenius_stabilizes_parabolic,
        index_set: (k.nodes(), ambient),
    })
}

/// The combinatorial shadow of one EKOR stratum.
#[derive(Clone, Debug)]
pub struct StratumRecord {
    pub w: ExtAffineElement,
    pub word: Vec<usize>,
    pub length: usize,
    pub k: ParahoricLabel,
    pub in_kw: bool,
    pub supp: SigmaSupport,
    pub is_basic: bool,
    pub i_set: NodeSubset,
    pub dl: Option<DLDatum>,
    /// Invariants of the straight class, when `w` is σ-straight.
    pub newton: Option<(NewtonPoint, Pi1Class)>,
}

pub fn stratum_record(group: &AffineWeylGroup, k: ParahoricLabel, x: &ExtAffineElement) -> Result<StratumRecord> {
    let supp = supp_sigma(group, x);
    let in_kw = is_left_minimal(group, x, k.nodes());
    let dl = if supp.is_finite && in_kw { Some(dl_datum(group, k, x)?) } else { None };
    let newton = group.is_sigma_straight(x).then(|| (group.newton_vector(x), group.kottwitz(x)));
    let word = group.reduced_word(x).word;
    Ok(StratumRecord {
        w: x.clone(),
        length: word.len(),
        word,
        k,
        in_kw,
        supp,
        is_basic: supp.is_finite,
        i_set: i_set(group, k.nodes(), x),
        dl,
        newton,
    })
}

/// One record per element of `Adm(μ) ∩ ᴷW̃`, in canonical order.
pub fn stratum_report(group: &AffineWeylGroup, adm: &AdmissibleSet, k: ParahoricLabel) -> Result<Vec<StratumRecord>> {
    let tau_class = group.kottwitz(adm.tau());
    kw_elements(group, adm, k)?
        .iter()
        .map(|x| {
            debug_assert_eq!(group.kottwitz(x), tau_class);
            stratum_record(group, k, x)
        })
        .collect()
}
