//! Brute-force reference implementations, used to cross-check the fast
//! paths on small groups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissible::{kw_elements, AdmissibleSet, ParahoricLabel};
use crate::affine::{AffineWeylGroup, ExtAffineElement, WeylElement};
use crate::coxeter::NodeSubset;
use crate::ekor::i_set;

/// Outcome of one oracle suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    fn new(name: &str) -> Self {
        OracleReport { name: name.to_string(), checked: 0, mismatches: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.mismatches.len() < 20 {
            self.mismatches.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{:<24} {status}  ({} checks", self.name, self.checked)?;
        if !self.passed() {
            write!(f, ", {} mismatches", self.mismatches.len())?;
        }
        write!(f, ")")
    }
}

/// Word distance from the identity in the Cayley graph of `W_a` on `S̃`,
/// for every element within `radius`.
pub fn bfs_ball(group: &AffineWeylGroup, radius: usize) -> HashMap<ExtAffineElement, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(group.identity(), 0);
    queue.push_back(group.identity());
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for s in group.simple_reflections() {
            let y = group.mul(&x, s);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// `l(w ω) = l(ω w) = d(w)` for every `w` in the ball and every length-zero `ω`.
pub fn check_lengths(group: &AffineWeylGroup, radius: usize, omegas: &[ExtAffineElement]) -> OracleReport {
    let mut rep = OracleReport::new("length/bfs");
    let ball = bfs_ball(group, radius);
    let mut keys: Vec<_> = ball.iter().collect();
    keys.sort();
    for (w, &d) in keys {
        rep.record(group.length(w) == d, || format!("l({w:?}) ≠ {d}"));
        for om in omegas {
            for x in [group.mul(w, om), group.mul(om, w)] {
                rep.record(group.length(&x) == d, || format!("l({x:?}) ≠ {d}"));
            }
        }
    }
    rep
}

/// `x ≤ y` by the subword property against one reduced word of `y`.
pub fn bruhat_subword(group: &AffineWeylGroup, x: &ExtAffineElement, y: &ExtAffineElement) -> bool {
    let ry = group.reduced_word(y);
    if group.length(y) != ry.word.len() {
        return false;
    }
    let mut prods: HashSet<ExtAffineElement> = HashSet::new();
    prods.insert(ry.omega.clone());
    for &i in ry.word.iter().rev() {
        let s = group.simple_reflection(i);
        let new: Vec<_> = prods.iter().map(|z| group.mul(s, z)).collect();
        prods.extend(new);
    }
    prods.contains(x)
}

pub fn check_bruhat(group: &AffineWeylGroup, elements: &[ExtAffineElement]) -> OracleReport {
    let mut rep = OracleReport::new("bruhat/subword");
    for x in elements {
        for y in elements {
            let fast = group.bruhat_leq(x, y);
            let slow = bruhat_subword(group, x, y);
            rep.record(fast == slow, || format!("bruhat_leq({x:?}, {y:?}) = {fast}, subword = {slow}"));
        }
    }
    rep
}

/// `I(K, x, σ)` as the union of all `K' ⊆ K` with `x σ(K') x⁻¹ ⊆ K'`,
/// testing membership by element equality.
pub fn i_set_subsets(group: &AffineWeylGroup, k: NodeSubset, x: &ExtAffineElement) -> NodeSubset {
    let xi = group.inv(x);
    let image: HashMap<usize, ExtAffineElement> = k
        .iter()
        .map(|s| {
            let ss = group.simple_reflection(group.sigma_diagram().apply(s));
            (s, group.mul(&group.mul(x, ss), &xi))
        })
        .collect();
    let mut best = NodeSubset::empty();
    for sub in k.subsets() {
        let stable = sub.iter().all(|s| sub.iter().any(|t| &image[&s] == group.simple_reflection(t)));
        if stable {
            best = best.union(sub);
        }
    }
    best
}

pub fn check_i_sets(group: &AffineWeylGroup, elements: &[ExtAffineElement], levels: &[ParahoricLabel]) -> OracleReport {
    let mut rep = OracleReport::new("i_set/subsets");
    for k in levels {
        for x in elements {
            let fast = i_set(group, k.nodes(), x);
            let slow = i_set_subsets(group, k.nodes(), x);
            rep.record(fast == slow, || format!("I({}, {x:?}) = {fast}, oracle {slow}", k.nodes()));
        }
    }
    rep
}

/// Order of `W_J` by breadth-first search, or `None` once `cap` elements
/// have been seen.
pub fn parabolic_order(group: &AffineWeylGroup, j: NodeSubset, cap: usize) -> Option<usize> {
    let mut seen = HashSet::new();
    let mut queue = vec![group.identity()];
    seen.insert(group.identity());
    let mut k = 0;
    while k < queue.len() {
        for i in j.iter() {
            let y = group.mul(&queue[k], group.simple_reflection(i));
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push(y);
            }
        }
        k += 1;
    }
    Some(seen.len())
}

/// Every `J ⊆ S̃`: the finiteness rule against the bounded BFS, and the
/// recognised type's group order against the BFS count.
pub fn check_finiteness(group: &AffineWeylGroup, cap: usize) -> OracleReport {
    let mut rep = OracleReport::new("parabolic/bfs");
    for j in group.all_nodes().subsets() {
        let fast = group.diagram().is_finite_parabolic(j);
        let slow = parabolic_order(group, j, cap);
        rep.record(fast == slow.is_some(), || format!("W_{j}: rule says finite = {fast}, BFS order {slow:?}"));
        if let Some(n) = slow {
            let typed = group.diagram().finite_type_of(j).map(|t| t.group_order());
            rep.record(typed.as_ref().ok() == Some(&(n as u128)), || format!("W_{j}: type order {typed:?} ≠ {n}"));
        }
    }
    rep
}

/// Affine reflections `t^{kα^∨} s_α` of length at most `max_len`.
pub fn affine_reflections(group: &AffineWeylGroup, max_len: usize) -> Vec<ExtAffineElement> {
    let roots = group.root_system();
    let bound = max_len as i64 + 1;
    let mut out = Vec::new();
    for &p in &roots.positive {
        let r = &roots.roots[p];
        let s = WeylElement::reflection(&r.functional, &r.coroot);
        for k in -bound..=bound {
            let lambda: Vec<i64> = r.coroot.iter().map(|c| k * c).collect();
            let x = group.from_parts(&lambda, s.clone());
            if group.length(&x) <= max_len {
                out.push(x);
            }
        }
    }
    out
}

/// `{x : x ≤ t^{wμ}}` as the downward closure under `z ↦ z r` with
/// `l(z r) < l(z)`, `r` an affine reflection.
pub fn adm_by_reflections(group: &AffineWeylGroup, mu: &[i64]) -> HashSet<ExtAffineElement> {
    let tops: Vec<ExtAffineElement> = group.weyl_orbit(mu).iter().map(|v| group.translation(v)).collect();
    let top_len = tops.iter().map(|t| group.length(t)).max().unwrap_or(0);
    let refl = affine_reflections(group, 2 * top_len);
    let mut seen: HashSet<ExtAffineElement> = tops.iter().cloned().collect();
    let mut queue: Vec<ExtAffineElement> = tops;
    while let Some(z) = queue.pop() {
        let lz = group.length(&z);
        for r in &refl {
            let y = group.mul(&z, r);
            if group.length(&y) < lz && seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    seen
}

pub fn check_adm(group: &AffineWeylGroup, adm: &AdmissibleSet) -> OracleReport {
    let mut rep = OracleReport::new("adm/reflections");
    let slow = adm_by_reflections(group, adm.mu());
    rep.record(slow.len() == adm.len(), || format!("|Adm| = {}, oracle {}", adm.len(), slow.len()));
    for x in adm.elements() {
        rep.record(slow.contains(x), || format!("{x:?} missing from oracle"));
    }
    rep
}

/// Straight elements of `Adm(μ)` with equal `(ν, κ)` are σ-conjugate by some
/// `z` with `l(z) ≤ radius` (times a length-zero element), and elements with
/// different invariants are never found to be.
pub fn check_sigma_conjugacy(
    group: &AffineWeylGroup,
    adm: &AdmissibleSet,
    omegas: &[ExtAffineElement],
    radius: usize,
) -> OracleReport {
    let mut rep = OracleReport::new("straight/conjugation");
    let mut conj: Vec<ExtAffineElement> = bfs_ball(group, radius).into_keys().collect();
    let extra: Vec<ExtAffineElement> =
        conj.iter().flat_map(|z| omegas.iter().map(move |om| group.mul(z, om))).collect();
    conj.extend(extra);
    conj.sort();
    let straight: Vec<&ExtAffineElement> = adm.elements().iter().filter(|x| group.is_sigma_straight(x)).collect();
    let twisted: Vec<(ExtAffineElement, ExtAffineElement)> =
        conj.iter().map(|z| (z.clone(), group.inv(&group.apply_sigma(z)))).collect();
    for x in &straight {
        let orbit: HashSet<ExtAffineElement> = twisted.iter().map(|(z, zi)| group.mul(&group.mul(z, x), zi)).collect();
        let inv_x = (group.newton_vector(x), group.kottwitz(x));
        for y in &straight {
            let same = inv_x == (group.newton_vector(y), group.kottwitz(y));
            let found = orbit.contains(*y);
            rep.record(same == found, || format!("{x:?} ~ {y:?}: invariants equal = {same}, conjugator found = {found}"));
        }
    }
    rep
}

/// `l(u x) = l(u) + l(x)` for `u ∈ W_K`, `x ∈ Adm(μ) ∩ ᴷW̃`, every level `K`.
pub fn check_kw_additivity(group: &AffineWeylGroup, adm: &AdmissibleSet, levels: &[ParahoricLabel]) -> OracleReport {
    let mut rep = OracleReport::new("kw/additivity");
    for k in levels {
        let Ok(wk) = group.parabolic_subgroup(k.nodes()) else {
            rep.record(false, || format!("W_{} is infinite", k.nodes()));
            continue;
        };
        let Ok(kw) = kw_elements(group, adm, *k) else {
            rep.record(false, || format!("Adm ∩ ᴷW̃ ≠ Adm^K ∩ ᴷW̃ for K = {}", k.nodes()));
            continue;
        };
        for x in &kw {
            let lx = group.length(x);
            for u in &wk {
                let ok = group.length(&group.mul(u, x)) == group.length(u) + lx;
                rep.record(ok, || format!("K = {}: l(u x) ≠ l(u) + l(x) for x = {x:?}", k.nodes()));
            }
        }
    }
    rep
}

/// All suites: lengths on the radius-`radius` ball (also twisted by the
/// given length-zero elements), Bruhat order and `I(K, x, σ)` on `Adm(μ)`,
/// parabolic finiteness, `Adm(μ)` itself, length additivity on `ᴷW̃`, and
/// optionally the bounded σ-conjugation search.
pub fn run_suites(
    group: &AffineWeylGroup,
    adm: &AdmissibleSet,
    omegas: &[ExtAffineElement],
    radius: usize,
    conjugator_radius: Option<usize>,
) -> Vec<OracleReport> {
    let levels = ParahoricLabel::all(group);
    let mut out = vec![
        check_lengths(group, radius, omegas),
        check_bruhat(group, adm.elements()),
        check_i_sets(group, adm.elements(), &levels),
        check_finiteness(group, 10_000),
        check_adm(group, adm),
        check_kw_additivity(group, adm, &levels),
    ];
    if let Some(r) = conjugator_radius {
        out.push(check_sigma_conjugacy(group, adm, omegas, r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::admissible_set;
    use crate::root_datum::RootDatum;

    #[test]
    fn gl3_suites() {
        let grp = AffineWeylGroup::new(RootDatum::gl(3)).unwrap();
        let adm = admissible_set(&grp, &[1, 0, 0]).unwrap();
        assert_eq!(adm.len(), 7);
        let tau = adm.tau().clone();
        for rep in run_suites(&grp, &adm, &[tau], 4, Some(3)) {
            assert!(rep.passed(), "{rep}: {:?}", rep.mismatches);
        }
    }

    #[test]
    fn ball_sizes_a1() {
        let grp = AffineWeylGroup::new(RootDatum::gl(2)).unwrap();
        let ball = bfs_ball(&grp, 3);
        assert_eq!(ball.len(), 7);
    }

    #[test]
    fn infinite_parabolic_hits_cap() {
        let grp = AffineWeylGroup::new(RootDatum::gl(2)).unwrap();
        assert_eq!(parabolic_order(&grp, grp.all_nodes(), 100), None);
        assert_eq!(parabolic_order(&grp, NodeSubset::singleton(1), 100), Some(2));
    }
}
