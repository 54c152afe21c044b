//! Root data over an integral cocharacter lattice.
//!
//! The lattice `X` is given by an integral basis inside `Z^d`. Internally all
//! vectors are stored in coordinates with respect to that basis; roots are
//! row vectors (functionals on `X`), coroots are column vectors in `X`.

use std::collections::HashMap;

use crate::error::{AtlasError, Result};
use crate::lattice::{dot, rat, solve_rational, to_i64, IntMatrix};

/// User-facing description of a root datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    ambient_dim: usize,
    basis: Vec<Vec<i64>>,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    /// Frobenius on `X`, in lattice coordinates.
    sigma: IntMatrix,
}

impl RootDatum {
    /// `basis`: integral basis of `X` inside `Z^d`. `simple_roots`: integral
    /// functionals on `Z^d`. `simple_coroots`: vectors of `Z^d` lying in `X`.
    pub fn new(
        ambient_dim: usize,
        basis: Vec<Vec<i64>>,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
    ) -> Result<Self> {
        for v in basis.iter().chain(&simple_roots).chain(&simple_coroots) {
            if v.len() != ambient_dim {
                return Err(AtlasError::DimensionMismatch { expected: ambient_dim, got: v.len() });
            }
        }
        if simple_roots.len() != simple_coroots.len() {
            return Err(AtlasError::InvalidRootDatum(format!(
                "{} simple roots but {} simple coroots",
                simple_roots.len(),
                simple_coroots.len()
            )));
        }
        let rank_x = basis.len();
        let datum = RootDatum {
            ambient_dim,
            basis,
            simple_roots,
            simple_coroots,
            sigma: IntMatrix::identity(rank_x),
        };
        datum.check_basis()?;
        Ok(datum)
    }

    /// Replaces the (default trivial) Frobenius action. `sigma` is given in
    /// lattice coordinates.
    pub fn with_frobenius(mut self, sigma: IntMatrix) -> Result<Self> {
        let n = self.basis.len();
        if sigma.rows() != n || sigma.cols() != n {
            return Err(AtlasError::DimensionMismatch { expected: n, got: sigma.rows() });
        }
        self.sigma = sigma;
        Ok(self)
    }

    /// `GL_n`: `X = Z^n`, `α_i = e_i − e_{i+1}`.
    pub fn gl(n: usize) -> Self {
        assert!(n >= 1);
        let e = |i: usize| -> Vec<i64> { (0..n).map(|k| i64::from(k == i)).collect() };
        let diff = |i: usize| -> Vec<i64> { (0..n).map(|k| i64::from(k == i) - i64::from(k == i + 1)).collect() };
        let basis = (0..n).map(e).collect();
        let roots: Vec<_> = (0..n - 1).map(diff).collect();
        RootDatum::new(n, basis, roots.clone(), roots).expect("GL_n datum")
    }

    /// Simply connected datum of a Cartan matrix `a[i][j] = ⟨α_i^∨, α_j⟩`:
    /// `X = Z^r` with the simple coroots as basis.
    pub fn simply_connected(cartan: &[Vec<i64>]) -> Result<Self> {
        let r = cartan.len();
        let basis: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|k| i64::from(k == i)).collect()).collect();
        let roots = (0..r).map(|j| (0..r).map(|i| cartan[i][j]).collect()).collect();
        RootDatum::new(r, basis.clone(), roots, basis)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    pub fn sigma(&self) -> &IntMatrix {
        &self.sigma
    }

    pub fn rank_x(&self) -> usize {
        self.basis.len()
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    fn basis_columns(&self) -> Vec<Vec<crate::lattice::Rational>> {
        self.basis.iter().map(|b| b.iter().map(|&x| rat(x)).collect()).collect()
    }

    fn check_basis(&self) -> Result<()> {
        if self.basis.is_empty() {
            return Ok(());
        }
        // independence: each basis vector must have unique coordinates
        let zero = vec![rat(0); self.ambient_dim];
        if solve_rational(&self.basis_columns(), &zero).is_none() {
            return Err(AtlasError::InvalidRootDatum("lattice basis is not linearly independent".into()));
        }
        Ok(())
    }

    /// Lattice coordinates of an ambient vector, if it lies in `X`.
    pub fn to_lattice(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.ambient_dim {
            return Err(AtlasError::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        let b: Vec<_> = v.iter().map(|&x| rat(x)).collect();
        let coords = solve_rational(&self.basis_columns(), &b).ok_or_else(|| AtlasError::NotInLattice(v.to_vec()))?;
        if coords.iter().any(|c| !c.is_integer()) {
            return Err(AtlasError::NotInLattice(v.to_vec()));
        }
        Ok(coords.iter().map(|c| to_i64(&c.to_integer())).collect())
    }

    /// Ambient vector of lattice coordinates.
    pub fn to_ambient(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, &x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Ambient functional restricted to `X`, as a row in lattice coordinates.
    pub fn restrict_functional(&self, f: &[i64]) -> Vec<i64> {
        self.basis.iter().map(|b| dot(f, b)).collect()
    }
}

/// One root together with its coroot and simple-root coefficients.
#[derive(Clone, Debug)]
pub struct Root {
    pub functional: Vec<i64>,
    pub coroot: Vec<i64>,
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

/// The root system of a datum, in lattice coordinates.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    /// `cartan[i][j] = ⟨α_i^∨, α_j⟩`.
    pub cartan: Vec<Vec<i64>>,
    pub roots: Vec<Root>,
    pub index: HashMap<Vec<i64>, usize>,
    pub positive: Vec<usize>,
    /// Sum of positive roots.
    pub two_rho: Vec<i64>,
    /// Simple-root indices of each irreducible component.
    pub components: Vec<Vec<usize>>,
    /// Highest root of each component.
    pub highest: Vec<usize>,
}

const MAX_ROOTS: usize = 20_000;

impl RootSystem {
    pub fn new(datum: &RootDatum) -> Result<Self> {
        let r = datum.semisimple_rank();
        let simple_roots: Vec<Vec<i64>> = datum.simple_roots.iter().map(|a| datum.restrict_functional(a)).collect();
        let simple_coroots = datum
            .simple_coroots
            .iter()
            .map(|c| datum.to_lattice(c))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| AtlasError::InvalidRootDatum(format!("simple coroot outside X: {e}")))?;
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| dot(&simple_roots[j], &simple_coroots[i])).collect())
            .collect();
        for i in 0..r {
            if cartan[i][i] != 2 {
                return Err(AtlasError::InvalidRootDatum(format!("⟨α_{i}^∨, α_{i}⟩ = {}", cartan[i][i])));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                let (a, b) = (cartan[i][j], cartan[j][i]);
                if a > 0 || (a == 0) != (b == 0) || a * b > 3 {
                    return Err(AtlasError::InvalidRootDatum(format!("invalid Cartan entries at ({i},{j}): {a}, {b}")));
                }
            }
        }

        // Weyl orbit of the simple (root, coroot) pairs.
        let mut roots: Vec<Root> = Vec::new();
        let mut index = HashMap::new();
        for i in 0..r {
            let mut coeffs = vec![0; r];
            coeffs[i] = 1;
            let root = Root { functional: simple_roots[i].clone(), coroot: simple_coroots[i].clone(), coeffs };
            if index.insert(root.functional.clone(), roots.len()).is_some() {
                return Err(AtlasError::InvalidRootDatum("repeated simple root".into()));
            }
            roots.push(root);
        }
        let mut k = 0;
        while k < roots.len() {
            for j in 0..r {
                let beta = &roots[k];
                let pair = dot(&beta.functional, &simple_coroots[j]);
                if pair == 0 {
                    continue;
                }
                let copair = dot(&simple_roots[j], &beta.coroot);
                let functional: Vec<i64> =
                    beta.functional.iter().zip(&simple_roots[j]).map(|(b, a)| b - pair * a).collect();
                if index.contains_key(&functional) {
                    continue;
                }
                let coroot: Vec<i64> = beta.coroot.iter().zip(&simple_coroots[j]).map(|(b, a)| b - copair * a).collect();
                let mut coeffs = beta.coeffs.clone();
                coeffs[j] -= pair;
                let positive = coeffs.iter().all(|&c| c >= 0);
                let negative = coeffs.iter().all(|&c| c <= 0);
                if !positive && !negative {
                    return Err(AtlasError::InvalidRootDatum("root with mixed-sign coefficients".into()));
                }
                index.insert(functional.clone(), roots.len());
                roots.push(Root { functional, coroot, coeffs });
                if roots.len() > MAX_ROOTS {
                    return Err(AtlasError::InvalidRootDatum("root system is not finite".into()));
                }
            }
            k += 1;
        }
        let positive: Vec<usize> = (0..roots.len()).filter(|&i| roots[i].is_positive()).collect();
        let mut two_rho = vec![0; datum.rank_x()];
        for &p in &positive {
            for (t, &x) in two_rho.iter_mut().zip(&roots[p].functional) {
                *t += x;
            }
        }

        // Dynkin components
        let mut comp_of = vec![usize::MAX; r];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for start in 0..r {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let c = components.len();
            let mut members = vec![start];
            comp_of[start] = c;
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                for j in 0..r {
                    if comp_of[j] == usize::MAX && cartan[i][j] != 0 {
                        comp_of[j] = c;
                        members.push(j);
                    }
                }
                k += 1;
            }
            members.sort_unstable();
            components.push(members);
        }
        let highest = components
            .iter()
            .map(|members| {
                positive
                    .iter()
                    .copied()
                    .filter(|&p| roots[p].coeffs.iter().enumerate().all(|(j, &c)| c == 0 || members.contains(&j)))
                    .max_by_key(|&p| roots[p].height())
                    .expect("component has a positive root")
            })
            .collect();

        Ok(RootSystem { simple_roots, simple_coroots, cartan, roots, index, positive, two_rho, components, highest })
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Coxeter order of `s_i s_j` read off the Cartan matrix.
    pub fn coxeter_order(&self, i: usize, j: usize) -> u8 {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => unreachable!("validated Cartan matrix"),
        }
    }

    /// Whether a functional (lattice row) is a positive root; `None` if it is
    /// not a root.
    pub fn sign_of(&self, functional: &[i64]) -> Option<bool> {
        self.index.get(functional).map(|&k| self.roots[k].is_positive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl3_roots() {
        let sys = RootSystem::new(&RootDatum::gl(3)).unwrap();
        assert_eq!(sys.roots.len(), 6);
        assert_eq!(sys.positive.len(), 3);
        assert_eq!(sys.two_rho, vec![2, 0, -2]);
        assert_eq!(sys.components, vec![vec![0, 1]]);
        assert_eq!(sys.roots[sys.highest[0]].functional, vec![1, 0, -1]);
    }

    #[test]
    fn simply_connected_catalogue_sizes() {
        let g2 = vec![vec![2, -1], vec![-3, 2]];
        let f4 = vec![vec![2, -1, 0, 0], vec![-1, 2, -2, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]];
        let b3 = vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]];
        for (cartan, n_pos) in [(g2, 6), (f4, 24), (b3, 9)] {
            let sys = RootSystem::new(&RootDatum::simply_connected(&cartan).unwrap()).unwrap();
            assert_eq!(sys.positive.len(), n_pos);
        }
    }

    #[test]
    fn rejects_bad_pairings() {
        let bad = RootDatum::new(1, vec![vec![1]], vec![vec![1]], vec![vec![1]]).unwrap();
        assert!(RootSystem::new(&bad).is_err());
        // coroot outside the lattice 2Z
        let off = RootDatum::new(1, vec![vec![2]], vec![vec![1]], vec![vec![1]]).unwrap();
        assert!(RootSystem::new(&off).is_err());
        // affine (non-finite) Cartan matrix
        let a1_affine = RootDatum::simply_connected(&[vec![2, -2], vec![-2, 2]]).unwrap();
        assert!(RootSystem::new(&a1_affine).is_err());
    }

    #[test]
    fn lattice_coordinates() {
        let d = RootDatum::new(2, vec![vec![1, 1], vec![0, 1]], vec![vec![1, -1]], vec![vec![1, -1]]).unwrap();
        assert_eq!(d.to_lattice(&[2, 5]).unwrap(), vec![2, 3]);
        assert_eq!(d.to_ambient(&[2, 3]), vec![2, 5]);
        let narrow = RootDatum::new(2, vec![vec![2, 0], vec![0, 1]], vec![], vec![]).unwrap();
        assert!(narrow.to_lattice(&[1, 0]).is_err());
    }
}
