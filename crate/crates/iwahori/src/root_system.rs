//! The reduced root system Σ acting on the coinvariant lattice Λ.
//!
//! Roots are stored as integer covectors on Λ and coroots as integer vectors,
//! index-aligned, so the natural pairing `⟨λ, α⟩` is a plain dot product.
//! The lattice is a free abelian group `ℤ^rank`; torsion never enters at this
//! level (it is confined to the π₁ quotients handled by Smith normal form in
//! the frobenius module).

use std::collections::HashMap;
use std::sync::Arc;


use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::matrix::{solve_rational, IntMat, Rat};
use crate::Result;

/// A vector in Λ ⊗ ℚ with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    pub coords: Vec<Rat>,
}

impl RationalVector {
    pub fn from_ints(v: &[i64]) -> Self {
        RationalVector { coords: v.iter().map(|&x| Rat::from_integer(x)).collect() }
    }

    pub fn zero(rank: usize) -> Self {
        RationalVector { coords: vec![Rat::zero(); rank] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Integer coordinates, when all denominators are 1.
    pub fn as_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.denom().is_one() { Some(*c.numer()) } else { None })
            .collect()
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Rat) -> RationalVector {
        RationalVector { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn coordinate_sum(&self) -> Rat {
        self.coords.iter().fold(Rat::zero(), |a, b| a + b)
    }
}

/// A finite Weyl group element, stored as the integer matrix of its action on Λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeylElement {
    mat: IntMat,
}

impl FiniteWeylElement {
    pub fn identity(rank: usize) -> Self {
        FiniteWeylElement { mat: IntMat::identity(rank) }
    }

    pub fn from_matrix(mat: IntMat) -> Self {
        assert_eq!(mat.rows(), mat.cols());
        FiniteWeylElement { mat }
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    pub fn mul(&self, other: &FiniteWeylElement) -> FiniteWeylElement {
        FiniteWeylElement { mat: self.mat.mul(&other.mat) }
    }

    pub fn inverse(&self) -> FiniteWeylElement {
        FiniteWeylElement {
            mat: self.mat.inverse_unimodular().expect("Weyl matrices are unimodular"),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.mat.apply(v)
    }

    pub fn apply_rat(&self, v: &RationalVector) -> RationalVector {
        RationalVector { coords: self.mat.apply_rat(&v.coords) }
    }
}

/// The tuple (Λ, Σ, W₀) plus the fixed enumeration of roots.
///
/// This is the ambient arena for every computation in the crate; elements of
/// the affine Weyl group hold an `Arc` to it.
#[derive(Debug)]
pub struct AffineWeylDatum {
    name: String,
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    simple_indices: Vec<usize>,
    // Derived at construction:
    positive: Vec<bool>,
    simple_coeffs: Vec<Vec<i64>>,
    height: Vec<i64>,
    coroot_index: HashMap<Vec<i64>, usize>,
    two_rho: Vec<i64>,
    components: Vec<Vec<usize>>,
    highest_roots: Vec<usize>,
}

impl PartialEq for AffineWeylDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
            && self.roots == other.roots
            && self.coroots == other.coroots
            && self.simple_indices == other.simple_indices
    }
}
impl Eq for AffineWeylDatum {}

impl AffineWeylDatum {
    /// Validate the root-system axioms and precompute the derived data.
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        simple_indices: Vec<usize>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        if rank == 0 {
            return Err(Error::InvalidDatum("rank must be positive".into()));
        }
        if roots.len() != coroots.len() {
            return Err(Error::InvalidDatum("roots and coroots must be aligned".into()));
        }
        for (r, c) in roots.iter().zip(&coroots) {
            if r.len() != rank || c.len() != rank {
                return Err(Error::InvalidDatum("root/coroot of wrong rank".into()));
            }
            if dot(r, c) != 2 {
                return Err(Error::InvalidDatum(format!(
                    "pairing of root {r:?} with its coroot {c:?} is not 2"
                )));
            }
        }
        let mut seen = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            if seen.insert(r.clone(), i).is_some() {
                return Err(Error::InvalidDatum(format!("duplicate root {r:?}")));
            }
        }
        // Reduced: no root is a positive rational multiple of another besides itself.
        for (i, r) in roots.iter().enumerate() {
            for (j, s) in roots.iter().enumerate() {
                if i != j && is_positive_multiple(r, s) {
                    return Err(Error::InvalidDatum(format!(
                        "root {r:?} is a positive multiple of {s:?}; Σ must be reduced"
                    )));
                }
            }
        }
        for &k in &simple_indices {
            if k >= roots.len() {
                return Err(Error::InvalidDatum("simple index out of range".into()));
            }
        }
        // Reflections permute Σ, consistently on the (root, coroot) pairs.
        let coroot_index: HashMap<Vec<i64>, usize> =
            coroots.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        if coroot_index.len() != coroots.len() {
            return Err(Error::InvalidDatum("duplicate coroot".into()));
        }
        for i in 0..roots.len() {
            for j in 0..roots.len() {
                let refl_coroot = reflect_vector(&coroots[j], &roots[i], &coroots[i]);
                let refl_root = reflect_covector(&roots[j], &roots[i], &coroots[i]);
                match coroot_index.get(&refl_coroot) {
                    Some(&m) if roots[m] == refl_root => {}
                    _ => {
                        return Err(Error::InvalidDatum(format!(
                            "reflection in root {:?} does not permute Σ",
                            roots[i]
                        )))
                    }
                }
            }
        }
        // Simple roots must be linearly independent and every root an integer
        // combination of them with coefficients of uniform sign.
        let nsimple = simple_indices.len();
        let simple_mat = IntMat::new(
            rank,
            nsimple,
            (0..rank)
                .flat_map(|r| simple_indices.iter().map(move |&k| (r, k)))
                .map(|(r, k)| roots[k][r])
                .collect(),
        );
        {
            // Independence: solving 0 must be forced (every column a pivot) —
            // equivalently the rank of the matrix equals nsimple.
            if rank_of(&simple_mat) != nsimple {
                return Err(Error::InvalidDatum("simple roots are not linearly independent".into()));
            }
        }
        let mut positive = Vec::with_capacity(roots.len());
        let mut simple_coeffs = Vec::with_capacity(roots.len());
        let mut height = Vec::with_capacity(roots.len());
        for r in &roots {
            let b: Vec<Rat> = r.iter().map(|&x| Rat::from_integer(x)).collect();
            let sol = solve_rational(&simple_mat, &b).ok_or_else(|| {
                Error::InvalidDatum(format!("root {r:?} is not in the span of the simple roots"))
            })?;
            let mut coeffs = Vec::with_capacity(nsimple);
            for c in &sol {
                if !c.denom().is_one() {
                    return Err(Error::InvalidDatum(format!(
                        "root {r:?} is not an integer combination of simple roots"
                    )));
                }
                coeffs.push(*c.numer());
            }
            let pos = coeffs.iter().all(|&c| c >= 0);
            let neg = coeffs.iter().all(|&c| c <= 0);
            if !(pos || neg) || (pos && neg && !r.iter().all(|&x| x == 0)) {
                return Err(Error::InvalidDatum(format!(
                    "root {r:?} has mixed-sign simple coefficients {coeffs:?}"
                )));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::InvalidDatum("zero root".into()));
            }
            positive.push(pos);
            height.push(coeffs.iter().sum());
            simple_coeffs.push(coeffs);
        }
        let two_rho = {
            let mut t = vec![0i64; rank];
            for (i, r) in roots.iter().enumerate() {
                if positive[i] {
                    for (a, b) in t.iter_mut().zip(r) {
                        *a += b;
                    }
                }
            }
            t
        };
        // Irreducible components: connected components of the graph on simple
        // roots with an edge when the pairing is non-zero.
        let mut comp_id = vec![usize::MAX; nsimple];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for s in 0..nsimple {
            if comp_id[s] != usize::MAX {
                continue;
            }
            let cid = components.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp_id[s] = cid;
            while let Some(a) = stack.pop() {
                members.push(simple_indices[a]);
                for b in 0..nsimple {
                    if comp_id[b] == usize::MAX
                        && dot(&roots[simple_indices[a]], &coroots[simple_indices[b]]) != 0
                    {
                        comp_id[b] = cid;
                        stack.push(b);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        // Highest root per component: the positive root of maximal height
        // supported on that component's simple roots.
        let mut highest_roots = Vec::new();
        for comp in &components {
            let mut best: Option<usize> = None;
            for i in 0..roots.len() {
                if !positive[i] {
                    continue;
                }
                let supported = simple_coeffs[i]
                    .iter()
                    .enumerate()
                    .all(|(s, &c)| c == 0 || comp.contains(&simple_indices[s]));
                if supported && best.is_none_or(|b| height[i] > height[b]) {
                    best = Some(i);
                }
            }
            let b = best.ok_or_else(|| Error::InvalidDatum("component with no roots".into()))?;
            highest_roots.push(b);
        }

        Ok(Arc::new(AffineWeylDatum {
            name,
            rank,
            roots,
            coroots,
            simple_indices,
            positive,
            simple_coeffs,
            height,
            coroot_index,
            two_rho,
            components,
            highest_roots,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple_indices
    }

    pub fn is_positive_root(&self, idx: usize) -> bool {
        self.positive[idx]
    }

    pub fn root_height(&self, idx: usize) -> i64 {
        self.height[idx]
    }

    /// The decomposition of a root over the simple roots.
    pub fn simple_coefficients(&self, idx: usize) -> &[i64] {
        &self.simple_coeffs[idx]
    }

    /// Indices of positive roots in the datum's fixed enumeration order.
    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(|&i| self.positive[i])
    }

    /// Irreducible components, each given by the indices of its simple roots.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Highest root of each irreducible component.
    pub fn highest_roots(&self) -> &[usize] {
        &self.highest_roots
    }

    /// ⟨λ, α_idx⟩ for integral λ.
    pub fn pair(&self, lambda: &[i64], root_idx: usize) -> i64 {
        dot(&self.roots[root_idx], lambda)
    }

    pub fn pair_rat(&self, lambda: &RationalVector, root_idx: usize) -> Rat {
        dot_rat(&self.roots[root_idx], &lambda.coords)
    }

    /// The sum of the positive roots, as an integer covector.
    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    /// ⟨λ, 2ρ⟩ for integral λ.
    pub fn pair_two_rho(&self, lambda: &[i64]) -> i64 {
        dot(&self.two_rho, lambda)
    }

    pub fn pair_two_rho_rat(&self, lambda: &RationalVector) -> Rat {
        dot_rat(&self.two_rho, &lambda.coords)
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        self.simple_indices.iter().all(|&k| dot(&self.roots[k], lambda) >= 0)
    }

    pub fn is_dominant_rat(&self, lambda: &RationalVector) -> bool {
        self.simple_indices
            .iter()
            .all(|&k| !dot_rat(&self.roots[k], &lambda.coords).is_negative())
    }

    /// The reflection in the root with index `idx`, as a matrix on Λ.
    pub fn reflection(&self, idx: usize) -> FiniteWeylElement {
        let n = self.rank;
        let mut m = IntMat::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= self.coroots[idx][i] * self.roots[idx][j];
            }
        }
        FiniteWeylElement::from_matrix(m)
    }

    /// How a Weyl element permutes the roots: returns the index map i ↦ w(α_i).
    ///
    /// Uses the coroot side (a plain matrix-vector product) so no matrix
    /// inverse is needed.
    pub fn root_action(&self, w: &FiniteWeylElement) -> Vec<usize> {
        self.coroots
            .iter()
            .map(|c| {
                let img = w.apply(c);
                *self
                    .coroot_index
                    .get(&img)
                    .expect("Weyl element must permute the coroots")
            })
            .collect()
    }

    /// Coxeter length of a finite Weyl element: the number of positive roots
    /// it sends to negative roots.
    pub fn finite_length(&self, w: &FiniteWeylElement) -> usize {
        let perm = self.root_action(w);
        self.positive_roots().filter(|&i| !self.positive[perm[i]]).count()
    }

    /// The dominant representative of the W₀-orbit of λ, together with the
    /// minimal-length witness w such that w·λ is dominant.
    pub fn dominant_rep_rat(&self, lambda: &RationalVector) -> (RationalVector, FiniteWeylElement) {
        let mut cur = lambda.clone();
        let mut w = FiniteWeylElement::identity(self.rank);
        loop {
            let mut moved = false;
            for &k in &self.simple_indices {
                if dot_rat(&self.roots[k], &cur.coords).is_negative() {
                    let s = self.reflection(k);
                    cur = s.apply_rat(&cur);
                    w = s.mul(&w);
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        // Reduce the witness to the minimal-length coset representative modulo
        // the stabilizer of the dominant vector (a standard parabolic).
        let stab: Vec<usize> = self
            .simple_indices
            .iter()
            .copied()
            .filter(|&k| dot_rat(&self.roots[k], &cur.coords).is_zero())
            .collect();
        let mut len = self.finite_length(&w);
        loop {
            let mut moved = false;
            for &k in &stab {
                let cand = self.reflection(k).mul(&w);
                let cl = self.finite_length(&cand);
                if cl < len {
                    w = cand;
                    len = cl;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        (cur, w)
    }

    /// Integer version of [`Self::dominant_rep_rat`].
    pub fn dominant_rep(&self, lambda: &[i64]) -> (Vec<i64>, FiniteWeylElement) {
        let (v, w) = self.dominant_rep_rat(&RationalVector::from_ints(lambda));
        (v.as_ints().expect("Weyl orbit of an integral vector is integral"), w)
    }

    /// ℓ(t_λ) = ⟨λ̄, 2ρ⟩ where λ̄ is the dominant representative.
    pub fn length_translation(&self, lambda: &[i64]) -> i64 {
        let (bar, _) = self.dominant_rep(lambda);
        self.pair_two_rho(&bar)
    }

    /// Membership of δ in the non-negative rational cone on the positive
    /// (equivalently: simple) coroots. No dominance requirement on inputs.
    pub fn cone_leq_rat(&self, delta: &[Rat]) -> bool {
        match self.simple_coroot_solution(delta) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }

    /// Membership of δ in the non-negative *integral* cone on the positive coroots.
    pub fn cone_leq_int(&self, delta: &[i64]) -> bool {
        let d: Vec<Rat> = delta.iter().map(|&x| Rat::from_integer(x)).collect();
        match self.simple_coroot_solution(&d) {
            Some(c) => c.iter().all(|x| !x.is_negative() && x.denom().is_one()),
            None => false,
        }
    }

    fn simple_coroot_solution(&self, delta: &[Rat]) -> Option<Vec<Rat>> {
        let nsimple = self.simple_indices.len();
        let mat = IntMat::new(
            self.rank,
            nsimple,
            (0..self.rank)
                .flat_map(|r| self.simple_indices.iter().map(move |&k| (r, k)))
                .map(|(r, k)| self.coroots[k][r])
                .collect(),
        );
        solve_rational(&mat, delta)
    }

    /// The dominance order: λ ≤ λ' iff λ' − λ is a non-negative rational
    /// combination of positive coroots. Both arguments must be dominant.
    pub fn dominance_leq(&self, lambda: &RationalVector, mu: &RationalVector) -> Result<bool> {
        if !self.is_dominant_rat(lambda) || !self.is_dominant_rat(mu) {
            return Err(Error::NonDominantInput);
        }
        let delta: Vec<Rat> =
            mu.coords.iter().zip(&lambda.coords).map(|(a, b)| a - b).collect();
        Ok(self.cone_leq_rat(&delta))
    }

    /// The relation ≼: λ' − λ a non-negative *integer* combination of positive
    /// coroots. Both arguments must be dominant and integral.
    pub fn integral_dominance_leq(&self, lambda: &[i64], mu: &[i64]) -> Result<bool> {
        if !self.is_dominant(lambda) || !self.is_dominant(mu) {
            return Err(Error::NonDominantInput);
        }
        let delta: Vec<i64> = mu.iter().zip(lambda).map(|(a, b)| a - b).collect();
        Ok(self.cone_leq_int(&delta))
    }

    /// |W₀|, by closing the simple reflections under multiplication.
    pub fn weyl_group_order(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        seen.insert(IntMat::identity(self.rank));
        let gens: Vec<IntMat> =
            self.simple_indices.iter().map(|&k| self.reflection(k).matrix().clone()).collect();
        let mut stack: Vec<IntMat> = seen.iter().cloned().collect();
        while let Some(m) = stack.pop() {
            for g in &gens {
                let next = m.mul(g);
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        seen.len()
    }

    /// The W₀-orbit of a vector, deterministic order (sorted).
    pub fn weyl_orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![lambda.to_vec()];
        seen.insert(lambda.to_vec());
        while let Some(v) = stack.pop() {
            for &k in &self.simple_indices {
                let img = self.reflection(k).apply(&v);
                if seen.insert(img.clone()) {
                    stack.push(img);
                }
            }
        }
        seen.into_iter().collect()
    }
}

fn dot(covector: &[i64], vector: &[i64]) -> i64 {
    covector.iter().zip(vector).map(|(a, b)| a * b).sum()
}

fn dot_rat(covector: &[i64], vector: &[Rat]) -> Rat {
    covector
        .iter()
        .zip(vector)
        .fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(*a) * b)
}

pub(crate) fn reflect_vector(v: &[i64], root: &[i64], coroot: &[i64]) -> Vec<i64> {
    let c = dot(root, v);
    v.iter().zip(coroot).map(|(a, b)| a - c * b).collect()
}

pub(crate) fn reflect_covector(r: &[i64], root: &[i64], coroot: &[i64]) -> Vec<i64> {
    let c = dot(r, coroot);
    r.iter().zip(root).map(|(a, b)| a - c * b).collect()
}

fn is_positive_multiple(r: &[i64], s: &[i64]) -> bool {
    // r = c·s for rational c > 0, r ≠ s handled by caller.
    let mut ratio: Option<Rat> = None;
    for (&a, &b) in r.iter().zip(s) {
        match (a, b) {
            (0, 0) => {}
            (_, 0) | (0, _) => return false,
            _ => {
                let q = Rat::new(a, b);
                if let Some(r0) = ratio {
                    if r0 != q {
                        return false;
                    }
                } else {
                    ratio = Some(q);
                }
            }
        }
    }
    matches!(ratio, Some(q) if q.is_positive())
}

fn rank_of(m: &IntMat) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|i| m.row(i).iter().map(|&x| Rat::from_integer(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        if let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) {
            a.swap(rank, p);
            let pv = a[rank][col];
            for x in a[rank].iter_mut() {
                *x /= pv;
            }
            for r in 0..rows {
                if r != rank && !a[r][col].is_zero() {
                    let f = a[r][col];
                    let pivot_row = a[rank].clone();
                    for (x, v) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= f * v;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// All integer vectors with coordinates in [lo, hi], lexicographic order.
pub fn vectors_in_box(lo: i64, hi: i64, rank: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        let mut next = Vec::new();
        for v in &out {
            for x in lo..=hi {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}
