//! The extended affine Weyl group `W̃ = X ⋊ W` of a split root datum.
//!
//! Elements are pairs `t^λ w` with `λ ∈ X` and `w ∈ W`, multiplied by
//! `(λ₁, w₁)(λ₂, w₂) = (λ₁ + w₁λ₂, w₁w₂)`. The base alcove sits in the
//! anti-dominant chamber, so the affine simple reflection of each irreducible
//! component is `s₀ = t^{−θ^∨} s_θ` and
//!
//! ```text
//! l(t^λ w) = Σ_{α>0, w⁻¹α>0} |⟨λ,α⟩| + Σ_{α>0, w⁻¹α<0} |⟨λ,α⟩ + 1|.
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::RwLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::{AffineDiagram, CoxeterMatrix, DiagramMap, NodeSubset};
use crate::error::{AtlasError, Result};
use crate::lattice::{
    all_nonnegative, dot, dot_rat, rat, rat_to_string, smith_normal_form, solve_rational, IntMatrix, Rational,
    SmithForm,
};
use crate::root_datum::{RootDatum, RootSystem};

static NEXT_CONTEXT: AtomicU32 = AtomicU32::new(1);

/// An element of the finite Weyl group, as a matrix on `X` in lattice
/// coordinates together with its inverse.
#[derive(Clone, Debug)]
pub struct WeylElement {
    mat: IntMatrix,
    inv: IntMatrix,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { mat: IntMatrix::identity(n), inv: IntMatrix::identity(n) }
    }

    /// Reflection `x ↦ x − ⟨x, α⟩ α^∨`.
    pub fn reflection(root: &[i64], coroot: &[i64]) -> Self {
        let n = root.len();
        let mut m = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= coroot[i] * root[j];
            }
        }
        WeylElement { inv: m.clone(), mat: m }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.mat
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    pub fn mul(&self, other: &WeylElement) -> WeylElement {
        WeylElement { mat: self.mat.mul(&other.mat), inv: other.inv.mul(&self.inv) }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement { mat: self.inv.clone(), inv: self.mat.clone() }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.mat.mul_vec(v)
    }

    pub fn apply_rat(&self, v: &[Rational]) -> Vec<Rational> {
        self.mat.mul_rat_vec(v)
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mat.cmp(&other.mat)
    }
}

/// An element `t^λ w` of `W̃`; `λ` is stored in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffineElement {
    ctx: u32,
    translation: Vec<i64>,
    finite: WeylElement,
}

impl ExtAffineElement {
    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    pub fn finite(&self) -> &WeylElement {
        &self.finite
    }

    pub fn context_id(&self) -> u32 {
        self.ctx
    }

    pub fn is_translation(&self) -> bool {
        self.finite.is_identity()
    }
}

/// A length-zero element together with its conjugation action on `S̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaElement {
    pub element: ExtAffineElement,
    pub action: DiagramMap,
}

/// `x = s_{word[0]} ⋯ s_{word[k-1]} · omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedDecomposition {
    pub word: Vec<usize>,
    pub omega: ExtAffineElement,
}

/// A class in `X / (Q^∨ + (σ−1)X)`: free coordinates and torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pi1Class {
    pub free: Vec<i64>,
    /// `(residue, modulus)` pairs.
    pub torsion: Vec<(i64, i64)>,
}

impl Pi1Class {
    pub fn add(&self, other: &Pi1Class) -> Pi1Class {
        Pi1Class {
            free: self.free.iter().zip(&other.free).map(|(a, b)| a + b).collect(),
            torsion: self.torsion.iter().zip(&other.torsion).map(|(&(a, d), &(b, _))| ((a + b).rem_euclid(d), d)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&(r, _)| r == 0)
    }
}

impl fmt::Display for Pi1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        parts.extend(self.torsion.iter().map(|(r, d)| format!("{r} mod {d}")));
        write!(f, "({})", parts.join(", "))
    }
}

/// A dominant rational cocharacter, in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPoint(pub Vec<Rational>);

impl NewtonPoint {
    pub fn coords(&self) -> &[Rational] {
        &self.0
    }
}

/// What a node of `S̃` is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// Affine reflection of the given Dynkin component.
    Affine(usize),
    /// Finite simple reflection `s_{i+1}` (0-based simple root index `i`).
    Finite(usize),
}

/// The group context: simple affine reflections, root data, caches.
pub struct AffineWeylGroup {
    id: u32,
    datum: RootDatum,
    roots: RootSystem,
    generators: Vec<ExtAffineElement>,
    kinds: Vec<NodeKind>,
    generator_index: HashMap<ExtAffineElement, usize>,
    diagram: AffineDiagram,
    sigma: WeylElement,
    sigma_order: usize,
    sigma_diagram: DiagramMap,
    smith: SmithForm,
    bruhat_memo: RwLock<HashMap<(ExtAffineElement, ExtAffineElement), bool>>,
}

impl fmt::Debug for AffineWeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineWeylGroup")
            .field("id", &self.id)
            .field("nodes", &self.generators.len())
            .field("rank_x", &self.rank_x())
            .finish()
    }
}

impl AffineWeylGroup {
    /// Builds the group of a root datum and validates it: the pairing is a
    /// finite Cartan matrix, coroots lie in `X`, `S̃` has an affine Coxeter
    /// matrix per component agreeing with the Cartan matrix, and `σ`
    /// permutes `S̃`.
    pub fn new(datum: RootDatum) -> Result<Self> {
        let roots = RootSystem::new(&datum)?;
        let n = datum.rank_x();
        let id = NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed);
        let r = roots.rank();

        // Nodes: one affine reflection per component, then s_1..s_r. With a
        // single component this is the usual s_0, s_1, …, s_r numbering.
        let mut generators = Vec::new();
        let mut kinds = Vec::new();
        for (c, &h) in roots.highest.iter().enumerate() {
            let theta = &roots.roots[h];
            let finite = WeylElement::reflection(&theta.functional, &theta.coroot);
            let translation = theta.coroot.iter().map(|x| -x).collect();
            generators.push(ExtAffineElement { ctx: id, translation, finite });
            kinds.push(NodeKind::Affine(c));
        }
        for i in 0..r {
            let finite = WeylElement::reflection(&roots.simple_roots[i], &roots.simple_coroots[i]);
            generators.push(ExtAffineElement { ctx: id, translation: vec![0; n], finite });
            kinds.push(NodeKind::Finite(i));
        }
        let mut generator_index = HashMap::new();
        for (k, s) in generators.iter().enumerate() {
            generator_index.insert(s.clone(), k);
        }

        let sigma_inv = datum
            .sigma()
            .inverse_unimodular()
            .ok_or_else(|| AtlasError::InvalidRootDatum("Frobenius is not invertible over Z".into()))?;
        let sigma = WeylElement { mat: datum.sigma().clone(), inv: sigma_inv };

        let mut group = AffineWeylGroup {
            id,
            datum,
            roots,
            generators,
            kinds,
            generator_index,
            // placeholders, filled below
            diagram: AffineDiagram::new(CoxeterMatrix::affine_c(1)).expect("Ã1"),
            sigma,
            sigma_order: 1,
            sigma_diagram: DiagramMap::identity(0),
            smith: smith_normal_form(&IntMatrix::zeros(0, 0)),
            bruhat_memo: RwLock::new(HashMap::new()),
        };

        let matrix = group.compute_coxeter_matrix()?;
        for (a, ka) in group.kinds.iter().enumerate() {
            for (b, kb) in group.kinds.iter().enumerate() {
                if let (NodeKind::Finite(i), NodeKind::Finite(j)) = (ka, kb) {
                    if matrix.get(a, b) != group.roots.coxeter_order(*i, *j) {
                        return Err(AtlasError::InvalidRootDatum(format!(
                            "order of s_{a} s_{b} disagrees with the Cartan matrix"
                        )));
                    }
                }
            }
        }
        group.diagram = AffineDiagram::new(matrix)?;
        if group.diagram.components().len() != group.roots.components.len() {
            return Err(AtlasError::InvalidRootDatum("affine diagram components do not match the root system".into()));
        }

        // σ on S̃
        let mut images = Vec::with_capacity(group.generators.len());
        for s in &group.generators {
            let t = group.apply_sigma(s);
            let j = group
                .generator_index
                .get(&t)
                .ok_or_else(|| AtlasError::InvalidRootDatum("Frobenius does not permute the simple reflections".into()))?;
            images.push(*j);
        }
        group.sigma_diagram = DiagramMap::new(group.diagram.matrix(), images)?;
        let mut order = 1;
        let mut power = group.sigma.clone();
        while !power.is_identity() {
            power = power.mul(&group.sigma);
            order += 1;
            if order > 1000 {
                return Err(AtlasError::InvalidRootDatum("Frobenius has infinite order".into()));
            }
        }
        group.sigma_order = order;

        // Kottwitz: X / (Q^∨ + (σ − 1)X)
        let mut cols: Vec<Vec<i64>> = group.roots.simple_coroots.clone();
        for j in 0..n {
            let mut c = group.sigma.mat.column(j);
            c[j] -= 1;
            if c.iter().any(|&x| x != 0) {
                cols.push(c);
            }
        }
        group.smith = smith_normal_form(&IntMatrix::from_columns(n, &cols));
        Ok(group)
    }

    fn compute_coxeter_matrix(&self) -> Result<CoxeterMatrix> {
        let k = self.generators.len();
        let mut rows = vec![vec![1u8; k]; k];
        for a in 0..k {
            for b in a + 1..k {
                let prod = self.mul(&self.generators[a], &self.generators[b]);
                let mut p = prod.clone();
                let mut order = 1;
                while !self.is_identity(&p) && order <= 6 {
                    p = self.mul(&p, &prod);
                    order += 1;
                }
                let m = if self.is_identity(&p) { order as u8 } else { CoxeterMatrix::INFINITY };
                if !matches!(m, 2 | 3 | 4 | 6 | CoxeterMatrix::INFINITY) {
                    return Err(AtlasError::InvalidRootDatum(format!("s_{a} s_{b} has order {m}")));
                }
                rows[a][b] = m;
                rows[b][a] = m;
            }
        }
        CoxeterMatrix::from_rows(&rows)
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn rank_x(&self) -> usize {
        self.datum.rank_x()
    }

    /// Number of simple affine reflections `|S̃|`.
    pub fn num_nodes(&self) -> usize {
        self.generators.len()
    }

    pub fn all_nodes(&self) -> NodeSubset {
        NodeSubset::full(self.num_nodes())
    }

    pub fn node_kind(&self, i: usize) -> NodeKind {
        self.kinds[i]
    }

    /// Nodes of `S̃` that generate the finite Weyl group.
    pub fn finite_nodes(&self) -> NodeSubset {
        (0..self.num_nodes()).filter(|&i| matches!(self.kinds[i], NodeKind::Finite(_))).collect()
    }

    pub fn diagram(&self) -> &AffineDiagram {
        &self.diagram
    }

    pub fn coxeter_matrix(&self) -> &CoxeterMatrix {
        self.diagram.matrix()
    }

    pub fn simple_reflection(&self, i: usize) -> &ExtAffineElement {
        &self.generators[i]
    }

    pub fn simple_reflections(&self) -> &[ExtAffineElement] {
        &self.generators
    }

    /// Node index of `x` if it is a simple affine reflection.
    pub fn as_simple_reflection(&self, x: &ExtAffineElement) -> Option<usize> {
        self.generator_index.get(x).copied()
    }

    /// `σ` as a diagram automorphism of `S̃`.
    pub fn sigma_diagram(&self) -> &DiagramMap {
        &self.sigma_diagram
    }

    pub fn identity(&self) -> ExtAffineElement {
        ExtAffineElement {
            ctx: self.id,
            translation: vec![0; self.rank_x()],
            finite: WeylElement::identity(self.rank_x()),
        }
    }

    pub fn is_identity(&self, x: &ExtAffineElement) -> bool {
        x.translation.iter().all(|&v| v == 0) && x.finite.is_identity()
    }

    /// `t^λ` for `λ` in lattice coordinates.
    pub fn translation(&self, lambda: &[i64]) -> ExtAffineElement {
        assert_eq!(lambda.len(), self.rank_x());
        ExtAffineElement { ctx: self.id, translation: lambda.to_vec(), finite: WeylElement::identity(self.rank_x()) }
    }

    /// `t^λ` for `λ` given in ambient coordinates.
    pub fn translation_ambient(&self, lambda: &[i64]) -> Result<ExtAffineElement> {
        Ok(self.translation(&self.datum.to_lattice(lambda)?))
    }

    pub fn from_parts(&self, lambda: &[i64], finite: WeylElement) -> ExtAffineElement {
        ExtAffineElement { ctx: self.id, translation: lambda.to_vec(), finite }
    }

    /// The finite Weyl element as an element of `W̃`.
    pub fn finite_element(&self, w: &WeylElement) -> ExtAffineElement {
        self.from_parts(&vec![0; self.rank_x()], w.clone())
    }

    /// Evaluates a word in `S̃`.
    pub fn word_element(&self, word: &[usize]) -> ExtAffineElement {
        word.iter().fold(self.identity(), |acc, &i| self.mul(&acc, &self.generators[i]))
    }

    pub fn try_mul(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> Result<ExtAffineElement> {
        if x.ctx != self.id || y.ctx != self.id {
            return Err(AtlasError::MixedContexts);
        }
        Ok(self.mul(x, y))
    }

    pub fn mul(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> ExtAffineElement {
        assert!(x.ctx == self.id && y.ctx == self.id, "element from a different group context");
        let moved = x.finite.apply(&y.translation);
        ExtAffineElement {
            ctx: self.id,
            translation: x.translation.iter().zip(&moved).map(|(a, b)| a + b).collect(),
            finite: x.finite.mul(&y.finite),
        }
    }

    pub fn inv(&self, x: &ExtAffineElement) -> ExtAffineElement {
        let winv = x.finite.inverse();
        let t = winv.apply(&x.translation);
        ExtAffineElement { ctx: self.id, translation: t.iter().map(|v| -v).collect(), finite: winv }
    }

    /// `x y x⁻¹`.
    pub fn conjugate(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> ExtAffineElement {
        self.mul(&self.mul(x, y), &self.inv(x))
    }

    /// `σ(x) = (σλ, σwσ⁻¹)`.
    pub fn apply_sigma(&self, x: &ExtAffineElement) -> ExtAffineElement {
        ExtAffineElement {
            ctx: self.id,
            translation: self.sigma.apply(&x.translation),
            finite: self.sigma.mul(&x.finite).mul(&self.sigma.inverse()),
        }
    }

    /// Iwahori–Matsumoto length.
    pub fn length(&self, x: &ExtAffineElement) -> usize {
        let mut total = 0i64;
        for &p in &self.roots.positive {
            let alpha = &self.roots.roots[p].functional;
            let pairing = dot(alpha, &x.translation);
            let pulled = x.finite.mat.vec_mul(alpha);
            let positive = self.roots.sign_of(&pulled).expect("Weyl group permutes roots");
            total += if positive { pairing.abs() } else { (pairing + 1).abs() };
        }
        total as usize
    }

    /// Greedy reduced decomposition: repeatedly strip the smallest-index
    /// left descent.
    pub fn reduced_word(&self, x: &ExtAffineElement) -> ReducedDecomposition {
        self.reduced_word_with(x, |descents| descents[0])
    }

    /// Reduced decomposition with a caller-chosen left descent at each step.
    pub fn reduced_word_with(
        &self,
        x: &ExtAffineElement,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> ReducedDecomposition {
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        let mut word = Vec::with_capacity(len);
        while len > 0 {
            let mut descents = Vec::new();
            let mut next = Vec::new();
            for (i, s) in self.generators.iter().enumerate() {
                let y = self.mul(s, &cur);
                if self.length(&y) < len {
                    descents.push(i);
                    next.push(y);
                }
            }
            let pick = choose(&descents);
            let k = descents.iter().position(|&d| d == pick).expect("chosen descent");
            word.push(pick);
            cur = next.swap_remove(k);
            len -= 1;
        }
        ReducedDecomposition { word, omega: cur }
    }

    /// Left descents `{s : l(sx) < l(x)}`.
    pub fn left_descents(&self, x: &ExtAffineElement) -> NodeSubset {
        let l = self.length(x);
        (0..self.num_nodes()).filter(|&i| self.length(&self.mul(&self.generators[i], x)) < l).collect()
    }

    /// Right descents `{s : l(xs) < l(x)}`.
    pub fn right_descents(&self, x: &ExtAffineElement) -> NodeSubset {
        let l = self.length(x);
        (0..self.num_nodes()).filter(|&i| self.length(&self.mul(x, &self.generators[i])) < l).collect()
    }

    /// The `Ω`-part of `x`.
    pub fn omega_part(&self, x: &ExtAffineElement) -> ExtAffineElement {
        self.reduced_word(x).omega
    }

    /// Support of the `W_a`-part: letters of a reduced word.
    pub fn support(&self, x: &ExtAffineElement) -> NodeSubset {
        self.reduced_word(x).word.into_iter().collect()
    }

    /// Conjugation action `s ↦ ω s ω⁻¹` of a length-zero element on `S̃`.
    pub fn omega_action(&self, omega: &ExtAffineElement) -> Result<DiagramMap> {
        let images = self
            .generators
            .iter()
            .map(|s| {
                self.as_simple_reflection(&self.conjugate(omega, s))
                    .ok_or_else(|| AtlasError::Precondition("element does not normalize S̃".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        DiagramMap::new(self.coxeter_matrix(), images)
    }

    pub fn omega_element(&self, x: &ExtAffineElement) -> Result<OmegaElement> {
        if self.length(x) != 0 {
            return Err(AtlasError::Precondition("Ω elements have length 0".into()));
        }
        Ok(OmegaElement { element: x.clone(), action: self.omega_action(x)? })
    }

    /// `Ad(ω)∘σ` on `S̃`, where `ω` is the `Ω`-part of `x`.
    pub fn twisted_frobenius(&self, x: &ExtAffineElement) -> DiagramMap {
        let omega = self.omega_part(x);
        self.omega_action(&omega).expect("Ω-part normalizes S̃").compose(&self.sigma_diagram)
    }

    /// Bruhat order: equal `Ω`-parts and comparable `W_a`-parts.
    pub fn bruhat_leq(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> bool {
        let key = (x.clone(), y.clone());
        if let Some(&v) = self.bruhat_memo.read().expect("memo lock").get(&key) {
            return v;
        }
        let v = self.bruhat_uncached(x, y);
        self.bruhat_memo.write().expect("memo lock").insert(key, v);
        v
    }

    fn bruhat_uncached(&self, x: &ExtAffineElement, y: &ExtAffineElement) -> bool {
        let ly = self.length(y);
        let lx = self.length(x);
        if lx > ly {
            return false;
        }
        if ly == 0 {
            return x == y;
        }
        let (s, sy) = self
            .generators
            .iter()
            .map(|s| (s, self.mul(s, y)))
            .find(|(_, sy)| self.length(sy) < ly)
            .expect("positive length has a left descent");
        let sx = self.mul(s, x);
        if self.length(&sx) < lx {
            self.bruhat_leq(&sx, &sy)
        } else {
            self.bruhat_leq(x, &sy)
        }
    }

    pub fn clear_caches(&self) {
        self.bruhat_memo.write().expect("memo lock").clear();
    }

    /// Image in `π₁(G)_Γ = X / (Q^∨ + (σ−1)X)`.
    pub fn kottwitz(&self, x: &ExtAffineElement) -> Pi1Class {
        self.lattice_class(&x.translation)
    }

    pub fn lattice_class(&self, lambda: &[i64]) -> Pi1Class {
        let (free, torsion) = self.smith.quotient_class(lambda);
        Pi1Class { free, torsion }
    }

    pub fn pairing(&self, v: &[Rational], root: usize) -> Rational {
        dot_rat(&self.roots.simple_roots[root], v)
    }

    /// Dominant representative of the `W`-orbit of `v`, and the `w` with
    /// `w·v` dominant.
    pub fn dominantize(&self, v: &[Rational]) -> (NewtonPoint, WeylElement) {
        let mut cur = v.to_vec();
        let mut w = WeylElement::identity(self.rank_x());
        loop {
            let neg = (0..self.roots.rank()).find(|&i| self.pairing(&cur, i).is_negative());
            let Some(i) = neg else { break };
            let p = self.pairing(&cur, i);
            for (c, &a) in cur.iter_mut().zip(&self.roots.simple_coroots[i]) {
                *c -= &p * rat(a);
            }
            let s = WeylElement::reflection(&self.roots.simple_roots[i], &self.roots.simple_coroots[i]);
            w = s.mul(&w);
        }
        (NewtonPoint(cur), w)
    }

    pub fn dominantize_int(&self, v: &[i64]) -> (Vec<i64>, WeylElement) {
        let (p, w) = self.dominantize(&v.iter().map(|&x| rat(x)).collect::<Vec<_>>());
        (p.0.iter().map(|q| crate::lattice::to_i64(&q.to_integer())).collect(), w)
    }

    pub fn is_dominant(&self, v: &[i64]) -> bool {
        (0..self.roots.rank()).all(|i| dot(&self.roots.simple_roots[i], v) >= 0)
    }

    /// The smallest `n ≥ 1` with `(xσ)^n` a translation, and that translation.
    pub fn twisted_power_translation(&self, x: &ExtAffineElement) -> (usize, Vec<i64>) {
        // (xσ)^{k+1} = x·σ((xσ)^k σ^{-k}) σ^{k+1}
        let mut y = x.clone();
        let mut n = 1;
        while !(y.finite.is_identity() && n % self.sigma_order == 0) {
            y = self.mul(x, &self.apply_sigma(&y));
            n += 1;
        }
        (n, y.translation)
    }

    /// `y_m` with `(xσ)^m = y_m σ^m`.
    pub fn twisted_power(&self, x: &ExtAffineElement, m: usize) -> ExtAffineElement {
        let mut y = self.identity();
        for _ in 0..m {
            y = self.mul(x, &self.apply_sigma(&y));
        }
        y
    }

    pub fn newton_vector(&self, x: &ExtAffineElement) -> NewtonPoint {
        let (n, lambda) = self.twisted_power_translation(x);
        let avg: Vec<Rational> = lambda.iter().map(|&v| crate::lattice::rat_frac(v, n as i64)).collect();
        self.dominantize(&avg).0
    }

    /// `ν₁ ≤ ν₂` iff `ν₂ − ν₁` is a non-negative rational combination of
    /// simple coroots.
    pub fn newton_leq(&self, a: &NewtonPoint, b: &NewtonPoint) -> Result<bool> {
        let n = self.rank_x();
        if a.0.len() != n || b.0.len() != n {
            return Err(AtlasError::DimensionMismatch { expected: n, got: a.0.len().min(b.0.len()) });
        }
        let diff: Vec<Rational> = b.0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
        if diff.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        let cols: Vec<Vec<Rational>> =
            self.roots.simple_coroots.iter().map(|c| c.iter().map(|&v| rat(v)).collect()).collect();
        Ok(solve_rational(&cols, &diff).is_some_and(|coeffs| all_nonnegative(&coeffs)))
    }

    /// `⟨ν, 2ρ⟩`.
    pub fn pair_two_rho(&self, nu: &NewtonPoint) -> Rational {
        dot_rat(&self.roots.two_rho, &nu.0)
    }

    /// `σ`-straightness via `l(x) = ⟨ν̄_x, 2ρ⟩`.
    pub fn is_sigma_straight(&self, x: &ExtAffineElement) -> bool {
        let nu = self.newton_vector(x);
        self.pair_two_rho(&nu) == rat(self.length(x) as i64)
    }

    /// The unique length-zero element in the Kottwitz class of a dominant `μ`
    /// (lattice coordinates): the `Ω`-part of `t^μ`.
    pub fn tau_of_mu(&self, mu: &[i64]) -> Result<OmegaElement> {
        if mu.len() != self.rank_x() {
            return Err(AtlasError::DimensionMismatch { expected: self.rank_x(), got: mu.len() });
        }
        if !self.is_dominant(mu) {
            return Err(AtlasError::NotDominant(format!("{:?}", self.datum.to_ambient(mu))));
        }
        let omega = self.omega_part(&self.translation(mu));
        if self.kottwitz(&omega) != self.lattice_class(mu) {
            return Err(AtlasError::NoOmegaElement);
        }
        self.omega_element(&omega)
    }

    /// Elements of the finite Weyl group, by breadth-first search over the
    /// finite simple reflections, in order of discovery.
    pub fn finite_weyl_group(&self) -> Vec<WeylElement> {
        let gens: Vec<&WeylElement> = self.finite_nodes().iter().map(|i| &self.generators[i].finite).collect();
        let mut seen = HashSet::new();
        let mut out = vec![WeylElement::identity(self.rank_x())];
        seen.insert(out[0].clone());
        let mut k = 0;
        while k < out.len() {
            for s in &gens {
                let y = out[k].mul(s);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            k += 1;
        }
        out
    }

    /// Orbit `W·λ` of a lattice vector, sorted.
    pub fn weyl_orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = vec![lambda.to_vec()];
        seen.insert(lambda.to_vec());
        let mut k = 0;
        while k < queue.len() {
            for i in 0..self.roots.rank() {
                let v = &queue[k];
                let p = dot(&self.roots.simple_roots[i], v);
                if p != 0 {
                    let u: Vec<i64> = v.iter().zip(&self.roots.simple_coroots[i]).map(|(a, c)| a - p * c).collect();
                    if seen.insert(u.clone()) {
                        queue.push(u);
                    }
                }
            }
            k += 1;
        }
        queue.sort();
        queue
    }

    /// The standard parabolic subgroup `W_J` (must be finite), by BFS.
    pub fn parabolic_subgroup(&self, j: NodeSubset) -> Result<Vec<ExtAffineElement>> {
        if !self.diagram.is_finite_parabolic(j) {
            return Err(AtlasError::Precondition(format!("W_{j} is infinite")));
        }
        let mut seen = HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut k = 0;
        while k < out.len() {
            for i in j.iter() {
                let y = self.mul(&out[k], &self.generators[i]);
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            k += 1;
        }
        Ok(out)
    }

    /// Newton point in ambient coordinates.
    pub fn newton_ambient(&self, nu: &NewtonPoint) -> Vec<Rational> {
        let d = self.datum.ambient_dim();
        let mut out = vec![Rational::zero(); d];
        for (c, b) in nu.0.iter().zip(self.datum.basis()) {
            for (o, &x) in out.iter_mut().zip(b) {
                *o += c * rat(x);
            }
        }
        out
    }

    pub fn newton_ambient_strings(&self, nu: &NewtonPoint) -> Vec<String> {
        self.newton_ambient(nu).iter().map(rat_to_string).collect()
    }

    /// Newton point from ambient rational coordinates.
    pub fn newton_from_ambient(&self, v: &[Rational]) -> Result<NewtonPoint> {
        let d = self.datum.ambient_dim();
        if v.len() != d {
            return Err(AtlasError::DimensionMismatch { expected: d, got: v.len() });
        }
        let cols: Vec<Vec<Rational>> = self.datum.basis().iter().map(|b| b.iter().map(|&x| rat(x)).collect()).collect();
        let coords = solve_rational(&cols, v).ok_or_else(|| AtlasError::Precondition("vector not in X ⊗ Q".into()))?;
        Ok(NewtonPoint(coords))
    }

    /// The finite part as a one-line permutation of ambient coordinates
    /// (1-based), when it acts on `X` by permuting coordinates.
    pub fn finite_one_line(&self, w: &WeylElement) -> Option<Vec<usize>> {
        // (w·x)_{π(i)} = x_i  ⇔  row_{π(i)}(B·M) = row_i(B)
        let basis = self.datum.basis();
        let d = self.datum.ambient_dim();
        let b_rows: Vec<Vec<i64>> = (0..d).map(|i| basis.iter().map(|col| col[i]).collect()).collect();
        let bm_rows: Vec<Vec<i64>> = b_rows.iter().map(|row| w.mat.vec_mul(row)).collect();
        let mut perm = Vec::with_capacity(d);
        let mut used = vec![false; d];
        for row in &b_rows {
            let matches: Vec<usize> = (0..d).filter(|&j| &bm_rows[j] == row).collect();
            let j = *matches.iter().find(|&&j| !used[j])?;
            if b_rows.iter().filter(|r| *r == row).count() > 1 {
                return None;
            }
            used[j] = true;
            perm.push(j + 1);
        }
        Some(perm)
    }

    /// Finite Weyl element acting on ambient coordinates by the given
    /// one-line permutation (1-based), if it preserves `X` and lies in `W`.
    pub fn finite_from_one_line(&self, perm: &[usize]) -> Result<WeylElement> {
        let d = self.datum.ambient_dim();
        if perm.len() != d {
            return Err(AtlasError::DimensionMismatch { expected: d, got: perm.len() });
        }
        let n = self.rank_x();
        let mut cols = Vec::with_capacity(n);
        for b in self.datum.basis() {
            let mut moved = vec![0; d];
            for (i, &x) in b.iter().enumerate() {
                moved[perm[i] - 1] = x;
            }
            cols.push(self.datum.to_lattice(&moved)?);
        }
        let mat = IntMatrix::from_columns(n, &cols);
        self.finite_group_lookup(&mat)
            .ok_or_else(|| AtlasError::Precondition(format!("permutation {perm:?} is not in the Weyl group")))
    }

    fn finite_group_lookup(&self, mat: &IntMatrix) -> Option<WeylElement> {
        self.finite_weyl_group().into_iter().find(|w| &w.mat == mat)
    }

    /// Finite Weyl element of a word in the finite nodes.
    pub fn finite_word(&self, word: &[usize]) -> WeylElement {
        word.iter().fold(WeylElement::identity(self.rank_x()), |acc, &i| acc.mul(&self.generators[i].finite))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat_frac;

    fn gl(n: usize) -> AffineWeylGroup {
        AffineWeylGroup::new(RootDatum::gl(n)).unwrap()
    }

    #[test]
    fn gl2_structure() {
        let g = gl(2);
        assert_eq!(g.num_nodes(), 2);
        assert_eq!(g.coxeter_matrix().get(0, 1), CoxeterMatrix::INFINITY);
        for s in g.simple_reflections() {
            assert_eq!(g.length(s), 1);
            assert!(g.is_identity(&g.mul(s, s)));
        }
        assert_eq!(g.length(&g.identity()), 0);
    }

    #[test]
    fn gl3_is_a_tilde_2() {
        let g = gl(3);
        let m = g.coxeter_matrix();
        assert_eq!((m.get(0, 1), m.get(0, 2), m.get(1, 2)), (3, 3, 3));
    }

    #[test]
    fn translation_lengths_gl3() {
        let g = gl(3);
        // l(t^λ) = Σ_{α>0} |⟨λ,α⟩|
        assert_eq!(g.length(&g.translation(&[1, 0, 0])), 2);
        assert_eq!(g.length(&g.translation(&[1, 0, -1])), 4);
        assert_eq!(g.length(&g.translation(&[1, 1, 1])), 0);
    }

    #[test]
    fn omega_of_gl3_is_cyclic() {
        let g = gl(3);
        let tau = g.tau_of_mu(&[1, 0, 0]).unwrap();
        assert_eq!(g.length(&tau.element), 0);
        // conjugation by τ rotates the Ã2 cycle
        let mut images = tau.action.images().to_vec();
        images.sort();
        assert_eq!(images, vec![0, 1, 2]);
        assert!(!tau.action.is_identity());
        let t3 = g.mul(&g.mul(&tau.element, &tau.element), &tau.element);
        assert_eq!(t3, g.translation(&[1, 1, 1]));
    }

    #[test]
    fn inverse_and_identity() {
        let g = gl(3);
        let x = g.word_element(&[0, 1, 2, 0]);
        let y = g.mul(&g.translation(&[2, -1, 0]), &x);
        assert!(g.is_identity(&g.mul(&g.inv(&y), &y)));
        assert_eq!(g.mul(&g.identity(), &y), y);
    }

    #[test]
    fn mixed_contexts_rejected() {
        let a = gl(2);
        let b = gl(2);
        assert_eq!(a.try_mul(&a.identity(), &b.identity()), Err(AtlasError::MixedContexts));
    }

    #[test]
    fn reduced_word_reproduces_element() {
        let g = gl(3);
        let x = g.mul(&g.translation(&[2, 0, -1]), &g.word_element(&[1, 2]));
        let red = g.reduced_word(&x);
        assert_eq!(red.word.len(), g.length(&x));
        assert_eq!(g.mul(&g.word_element(&red.word), &red.omega), x);
        assert_eq!(g.length(&red.omega), 0);
    }

    #[test]
    fn dominantize_is_idempotent() {
        let g = gl(3);
        let v = vec![rat(0), rat(2), rat_frac(1, 2)];
        let (d, w) = g.dominantize(&v);
        assert_eq!(d.0, vec![rat(2), rat_frac(1, 2), rat(0)]);
        assert_eq!(w.apply_rat(&v), d.0);
        assert_eq!(g.dominantize(&d.0).0, d);
    }

    #[test]
    fn newton_leq_basics() {
        let g = gl(2);
        let a = NewtonPoint(vec![rat_frac(1, 2), rat_frac(1, 2)]);
        let b = NewtonPoint(vec![rat(1), rat(0)]);
        assert!(g.newton_leq(&a, &a).unwrap());
        assert!(g.newton_leq(&a, &b).unwrap());
        assert!(!g.newton_leq(&b, &a).unwrap());
        let c = NewtonPoint(vec![rat(1), rat(1)]);
        assert!(!g.newton_leq(&a, &c).unwrap());
        assert!(g.newton_leq(&a, &NewtonPoint(vec![rat(1)])).is_err());
    }

    #[test]
    fn kottwitz_of_gl_is_determinant() {
        let g = gl(3);
        let k1 = g.kottwitz(&g.translation(&[1, 0, 0]));
        let k2 = g.kottwitz(&g.translation(&[0, 0, 1]));
        assert_eq!(k1, k2);
        assert!(!k1.is_zero());
        for s in g.simple_reflections() {
            assert!(g.kottwitz(s).is_zero());
        }
    }

    #[test]
    fn non_dominant_mu_rejected() {
        let g = gl(2);
        assert!(matches!(g.tau_of_mu(&[0, 1]), Err(AtlasError::NotDominant(_))));
    }

    #[test]
    fn exceptional_and_nonsimply_laced_data_build() {
        let g2 = vec![vec![2, -1], vec![-3, 2]];
        let grp = AffineWeylGroup::new(RootDatum::simply_connected(&g2).unwrap()).unwrap();
        assert_eq!(grp.finite_weyl_group().len(), 12);
        let b3 = vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]];
        let grp = AffineWeylGroup::new(RootDatum::simply_connected(&b3).unwrap()).unwrap();
        assert_eq!(grp.finite_weyl_group().len(), 48);
        for s in grp.simple_reflections() {
            assert_eq!(grp.length(s), 1);
        }
    }

    #[test]
    fn frobenius_on_gl3() {
        // σ(x) = −w₀x: the non-split unitary-type action, swapping s_1, s_2
        // and fixing s_0.
        let sigma = IntMatrix::from_rows(&[vec![0, 0, -1], vec![0, -1, 0], vec![-1, 0, 0]]);
        let datum = RootDatum::gl(3).with_frobenius(sigma).unwrap();
        let g = AffineWeylGroup::new(datum).unwrap();
        assert_eq!(g.sigma_diagram().images(), &[0, 2, 1]);
        let x = g.simple_reflection(1).clone();
        let (n, lambda) = g.twisted_power_translation(&x);
        assert_eq!(n % 2, 0);
        assert_eq!(lambda.len(), 3);
    }

    #[test]
    fn frobenius_not_preserving_simple_reflections_rejected() {
        let sigma = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        // swaps coordinates: sends α to −α, not a diagram automorphism
        let datum = RootDatum::gl(2).with_frobenius(sigma).unwrap();
        assert!(AffineWeylGroup::new(datum).is_err());
    }
}
