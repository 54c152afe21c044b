//! Admissible sets `Adm(μ)`, their parahoric variants, and the straight
//! σ-conjugacy classes they contain.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::affine::{AffineWeylGroup, ExtAffineElement, NewtonPoint, Pi1Class};
use crate::coxeter::NodeSubset;
use crate::error::{AtlasError, Result};
use crate::lattice::rat;

/// A standard parahoric level: a σ-stable `K ⊂ S̃` with `W_K` finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParahoricLabel(NodeSubset);

impl ParahoricLabel {
    pub fn new(group: &AffineWeylGroup, k: NodeSubset) -> Result<Self> {
        if !k.is_subset(group.all_nodes()) {
            return Err(AtlasError::InvalidLevel(format!("{k} has nodes outside S̃")));
        }
        if group.sigma_diagram().image(k) != k {
            return Err(AtlasError::InvalidLevel(format!("{k} is not σ-stable")));
        }
        if !group.diagram().is_finite_parabolic(k) {
            return Err(AtlasError::InvalidLevel(format!("{k} contains a whole affine component")));
        }
        Ok(ParahoricLabel(k))
    }

    pub fn iwahori() -> Self {
        ParahoricLabel(NodeSubset::empty())
    }

    pub fn nodes(self) -> NodeSubset {
        self.0
    }

    /// Every valid level of a group: all σ-stable proper subsets.
    pub fn all(group: &AffineWeylGroup) -> Vec<ParahoricLabel> {
        group.all_nodes().subsets().filter_map(|k| ParahoricLabel::new(group, k).ok()).collect()
    }
}

/// `Adm(μ)` in canonical order: by length, then by greedy reduced word.
#[derive(Clone, Debug)]
pub struct AdmissibleSet {
    mu: Vec<i64>,
    tau: ExtAffineElement,
    elements: Vec<ExtAffineElement>,
    words: Vec<Vec<usize>>,
    maximal: Vec<ExtAffineElement>,
    index: HashMap<ExtAffineElement, usize>,
}

impl AdmissibleSet {
    /// Dominant `μ` in lattice coordinates.
    pub fn mu(&self) -> &[i64] {
        &self.mu
    }

    /// The common `Ω`-part `τ_μ`.
    pub fn tau(&self) -> &ExtAffineElement {
        &self.tau
    }

    pub fn elements(&self) -> &[ExtAffineElement] {
        &self.elements
    }

    /// Greedy reduced word of each element's `W_a`-part, aligned with
    /// [`elements`](Self::elements).
    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn word_of(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// The translations `t^{wμ}`, sorted.
    pub fn maximal(&self) -> &[ExtAffineElement] {
        &self.maximal
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &ExtAffineElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn position(&self, x: &ExtAffineElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Number of elements of each length `0..=max`.
    pub fn length_profile(&self) -> Vec<usize> {
        let mut profile = Vec::new();
        for w in &self.words {
            if profile.len() <= w.len() {
                profile.resize(w.len() + 1, 0);
            }
            profile[w.len()] += 1;
        }
        profile
    }
}

/// Sorts elements canonically and attaches their reduced words.
fn canonical_order(
    group: &AffineWeylGroup,
    elements: impl IntoIterator<Item = ExtAffineElement>,
) -> Vec<(Vec<usize>, ExtAffineElement)> {
    let mut keyed: Vec<(Vec<usize>, ExtAffineElement)> =
        elements.into_iter().map(|x| (group.reduced_word(&x).word, x)).collect();
    keyed.sort_by(|a, b| (a.0.len(), &a.0, &a.1).cmp(&(b.0.len(), &b.0, &b.1)));
    keyed
}

/// Sorts elements by (length, reduced word).
pub fn sort_canonical(group: &AffineWeylGroup, elements: impl IntoIterator<Item = ExtAffineElement>) -> Vec<ExtAffineElement> {
    canonical_order(group, elements).into_iter().map(|(_, x)| x).collect()
}

/// All elements `s_{i_1}^{e_1} ⋯ s_{i_k}^{e_k} · ω` for a word `i_1 … i_k`.
pub fn subword_products(group: &AffineWeylGroup, word: &[usize], omega: &ExtAffineElement) -> HashSet<ExtAffineElement> {
    let mut set = HashSet::new();
    set.insert(omega.clone());
    for &i in word.iter().rev() {
        let s = group.simple_reflection(i);
        let new: Vec<_> = set.iter().map(|y| group.mul(s, y)).collect();
        set.extend(new);
    }
    set
}

/// `Adm(μ) = {x : x ≤ t^{wμ} for some w ∈ W}`, as the union of subword
/// closures of the translations `t^{wμ}`. `mu` is in lattice coordinates.
pub fn admissible_set(group: &AffineWeylGroup, mu: &[i64]) -> Result<AdmissibleSet> {
    if mu.len() != group.rank_x() {
        return Err(AtlasError::DimensionMismatch { expected: group.rank_x(), got: mu.len() });
    }
    if !group.is_dominant(mu) {
        return Err(AtlasError::NotDominant(format!("{:?}", group.datum().to_ambient(mu))));
    }
    let tau = group.tau_of_mu(mu)?.element;
    let maximal: Vec<ExtAffineElement> = group.weyl_orbit(mu).iter().map(|v| group.translation(v)).collect();
    let mut all = HashSet::new();
    for t in &maximal {
        let red = group.reduced_word(t);
        debug_assert_eq!(red.omega, tau);
        all.extend(subword_products(group, &red.word, &red.omega));
    }
    let keyed = canonical_order(group, all);
    let mut elements = Vec::with_capacity(keyed.len());
    let mut words = Vec::with_capacity(keyed.len());
    let mut index = HashMap::with_capacity(keyed.len());
    for (i, (w, x)) in keyed.into_iter().enumerate() {
        index.insert(x.clone(), i);
        elements.push(x);
        words.push(w);
    }
    Ok(AdmissibleSet { mu: mu.to_vec(), tau, elements, words, maximal, index })
}

/// `Adm^K = W_K Adm W_K` and `Adm_K`, the minimal double-coset
/// representatives of `W_K \ Adm^K / W_K`.
#[derive(Clone, Debug)]
pub struct AdmVariants {
    pub adm_upper: Vec<ExtAffineElement>,
    pub adm_lower: Vec<ExtAffineElement>,
}

/// Closure of a set under left and right multiplication by `s ∈ K`.
pub fn parahoric_closure(
    group: &AffineWeylGroup,
    seed: &[ExtAffineElement],
    k: NodeSubset,
) -> HashSet<ExtAffineElement> {
    let mut seen: HashSet<ExtAffineElement> = seed.iter().cloned().collect();
    let mut queue: Vec<ExtAffineElement> = seed.to_vec();
    while let Some(x) = queue.pop() {
        for i in k.iter() {
            let s = group.simple_reflection(i);
            for y in [group.mul(s, &x), group.mul(&x, s)] {
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
    }
    seen
}

/// Minimal element of `W_K x W_K`, by stripping left and right descents in `K`.
pub fn double_coset_min(group: &AffineWeylGroup, x: &ExtAffineElement, k: NodeSubset) -> ExtAffineElement {
    let mut cur = x.clone();
    let mut len = group.length(&cur);
    'outer: loop {
        for i in k.iter() {
            let s = group.simple_reflection(i);
            for y in [group.mul(s, &cur), group.mul(&cur, s)] {
                let ly = group.length(&y);
                if ly < len {
                    cur = y;
                    len = ly;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

pub fn adm_variants(group: &AffineWeylGroup, adm: &AdmissibleSet, k: ParahoricLabel) -> AdmVariants {
    let upper = parahoric_closure(group, adm.elements(), k.nodes());
    let lower: HashSet<ExtAffineElement> = adm.elements().iter().map(|x| double_coset_min(group, x, k.nodes())).collect();
    AdmVariants { adm_upper: sort_canonical(group, upper), adm_lower: sort_canonical(group, lower) }
}

/// Whether `x` is the minimal element of its coset `W_K x`.
pub fn is_left_minimal(group: &AffineWeylGroup, x: &ExtAffineElement, k: NodeSubset) -> bool {
    let l = group.length(x);
    k.iter().all(|i| group.length(&group.mul(group.simple_reflection(i), x)) > l)
}

/// `Adm(μ) ∩ ᴷW̃` in canonical order. Also computes `Adm^K ∩ ᴷW̃` and
/// fails if the two differ.
pub fn kw_elements(group: &AffineWeylGroup, adm: &AdmissibleSet, k: ParahoricLabel) -> Result<Vec<ExtAffineElement>> {
    let nodes = k.nodes();
    let out: Vec<ExtAffineElement> = adm.elements().iter().filter(|x| is_left_minimal(group, x, nodes)).cloned().collect();
    if !nodes.is_empty() {
        let upper = parahoric_closure(group, adm.elements(), nodes);
        let other: HashSet<&ExtAffineElement> = upper.iter().filter(|x| is_left_minimal(group, x, nodes)).collect();
        let mine: HashSet<&ExtAffineElement> = out.iter().collect();
        if mine != other {
            return Err(AtlasError::Consistency(format!(
                "Adm ∩ ᴷW̃ has {} elements but Adm^K ∩ ᴷW̃ has {} for K = {nodes}",
                mine.len(),
                other.len()
            )));
        }
    }
    Ok(out)
}

/// A straight σ-conjugacy class, keyed by its Newton point and Kottwitz class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StraightClass {
    pub newton: NewtonPoint,
    pub kottwitz: Pi1Class,
    pub representative: ExtAffineElement,
    /// Number of σ-straight elements of `Adm(μ)` with these invariants.
    pub size: usize,
    pub is_basic: bool,
}

/// Groups the σ-straight elements of `Adm(μ)` by `(ν, κ)`. Checks the
/// neutral-acceptable conditions `κ = μ^♮`, `ν ≤ μ̄`, and that there is a
/// unique minimal class, containing `τ_μ`. Sorted by `⟨ν, 2ρ⟩`, then `ν`.
pub fn straight_classes(group: &AffineWeylGroup, adm: &AdmissibleSet) -> Result<Vec<StraightClass>> {
    let mu_class = group.lattice_class(adm.mu());
    let mu_bar = group.dominantize(&adm.mu().iter().map(|&v| rat(v)).collect::<Vec<_>>()).0;
    let mut classes: BTreeMap<(NewtonPoint, Pi1Class), (ExtAffineElement, usize)> = BTreeMap::new();
    for x in adm.elements() {
        if !group.is_sigma_straight(x) {
            continue;
        }
        let key = (group.newton_vector(x), group.kottwitz(x));
        classes.entry(key).and_modify(|e| e.1 += 1).or_insert_with(|| (x.clone(), 1));
    }
    let mut out: Vec<StraightClass> = classes
        .into_iter()
        .map(|((newton, kottwitz), (representative, size))| StraightClass {
            newton,
            kottwitz,
            representative,
            size,
            is_basic: false,
        })
        .collect();
    for c in &out {
        if c.kottwitz != mu_class {
            return Err(AtlasError::Consistency(format!("class with κ = {} ≠ μ^♮ = {mu_class}", c.kottwitz)));
        }
        if !group.newton_leq(&c.newton, &mu_bar)? {
            return Err(AtlasError::Consistency("straight class with ν ≰ μ̄".into()));
        }
    }
    let mut minimal = Vec::new();
    for (i, c) in out.iter().enumerate() {
        let dominated = out
            .iter()
            .enumerate()
            .any(|(j, d)| j != i && d.newton != c.newton && group.newton_leq(&d.newton, &c.newton).unwrap_or(false));
        if !dominated {
            minimal.push(i);
        }
    }
    if minimal.len() != 1 {
        return Err(AtlasError::NonUniqueBasic(minimal.len()));
    }
    let basic = minimal[0];
    let tau_nu = group.newton_vector(adm.tau());
    if out[basic].newton != tau_nu || out[basic].kottwitz != group.kottwitz(adm.tau()) {
        return Err(AtlasError::Consistency("τ_μ is not in the basic class".into()));
    }
    out[basic].is_basic = true;
    out.sort_by(|a, b| {
        (group.pair_two_rho(&a.newton), &a.newton).cmp(&(group.pair_two_rho(&b.newton), &b.newton))
    });
    Ok(out)
}
