//! The Frobenius action on W and its derived data.
//!
//! A twist is a pair (ς, τ_σ): an integer matrix ς permuting Σ together with
//! a length-zero conjugation part, acting on W by w ↦ τ_σ·ς(w)·τ_σ⁻¹. From it
//! we derive the chamber-preserving σ₀ = w₀∘ς, the Kottwitz maps to the
//! coinvariants π₁(G)_I = Λ/Q∨ and π₁(G)_Γ, and the averages μ◊ and images μ♮.
//! Torsion in the quotients is handled by Smith normal form.

use std::sync::Arc;

use num_rational::Ratio;

use crate::affine_weyl::{simple_reflections, ExtendedAffineElement};
use crate::error::Error;
use crate::matrix::{smith_normal_form, IntMat, Rat};
use crate::root_system::{AffineWeylDatum, FiniteWeylElement, RationalVector};
use crate::Result;

const ORDER_CAP: usize = 10_000;

/// A finitely generated abelian quotient Λ/R presented by Smith normal form.
#[derive(Debug, Clone)]
pub struct Pi1Quotient {
    u: IntMat,
    u_inv: IntMat,
    /// Per-coordinate modulus in U-coordinates: d > 0 is a cyclic relation,
    /// 0 is a free coordinate (d = 1 coordinates carry no information).
    moduli: Vec<i64>,
}

/// An element of a [`Pi1Quotient`], in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pi1Element {
    pub coords: Vec<i64>,
}

impl Pi1Quotient {
    /// Quotient of ℤ^rank by the column span of `relations` (rank × k).
    pub fn new(rank: usize, relations: &IntMat) -> Self {
        assert_eq!(relations.rows(), rank);
        let s = smith_normal_form(relations);
        // Smith form verified by re-multiplication.
        assert_eq!(s.u.mul(relations).mul(&s.v), s.d, "Smith normal form failed");
        let mut moduli = vec![0i64; rank];
        for (i, d) in s.diagonal().iter().enumerate() {
            moduli[i] = *d;
        }
        let u_inv = s.u.inverse_unimodular().expect("U is unimodular");
        Pi1Quotient { u: s.u, u_inv, moduli }
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Invariant factors > 1 (the torsion part).
    pub fn torsion(&self) -> Vec<i64> {
        self.moduli.iter().copied().filter(|&d| d > 1).collect()
    }

    /// Number of free ℤ summands.
    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|&&d| d == 0).count()
    }

    fn normalize(&self, mut y: Vec<i64>) -> Pi1Element {
        for (c, &d) in y.iter_mut().zip(&self.moduli) {
            if d > 0 {
                *c = c.rem_euclid(d);
            }
        }
        Pi1Element { coords: y }
    }

    /// The class of a lattice vector.
    pub fn project(&self, lambda: &[i64]) -> Pi1Element {
        self.normalize(self.u.apply(lambda))
    }

    pub fn zero(&self) -> Pi1Element {
        Pi1Element { coords: vec![0; self.rank()] }
    }

    pub fn add(&self, a: &Pi1Element, b: &Pi1Element) -> Pi1Element {
        self.normalize(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &Pi1Element) -> Pi1Element {
        self.normalize(a.coords.iter().map(|x| -x).collect())
    }

    /// The action induced by a lattice automorphism that preserves the
    /// relation subgroup.
    pub fn act(&self, m: &IntMat, a: &Pi1Element) -> Pi1Element {
        let lift = self.u_inv.apply(&a.coords);
        self.project(&m.apply(&lift))
    }
}

/// The σ-action on W: linear part ς, conjugation part τ_σ, and the derived
/// chamber-preserving σ₀ = w₀∘ς with its order N.
#[derive(Debug, Clone)]
pub struct FrobeniusTwist {
    datum: Arc<AffineWeylDatum>,
    linear: IntMat,
    linear_inv: IntMat,
    omega_part: ExtendedAffineElement,
    chamber_restorer: FiniteWeylElement,
    sigma0: IntMat,
    order_n: usize,
    order_w: usize,
    simple_perm: Vec<usize>,
    pi1: Pi1Quotient,
    pi1_gamma: Pi1Quotient,
}

impl FrobeniusTwist {
    /// Build a twist, checking that ς permutes Σ and that the full action
    /// preserves the base alcove (permutes 𝕊).
    pub fn new(
        datum: Arc<AffineWeylDatum>,
        linear: IntMat,
        omega_part: Option<ExtendedAffineElement>,
    ) -> Result<Self> {
        let rank = datum.rank();
        if linear.rows() != rank || linear.cols() != rank {
            return Err(Error::IncompatibleTwist("linear part has wrong shape".into()));
        }
        let linear_inv = linear
            .inverse_unimodular()
            .ok_or_else(|| Error::IncompatibleTwist("linear part is not unimodular".into()))?;
        // ς must permute Σ respecting the root/coroot alignment.
        for (i, c) in datum.coroots().iter().enumerate() {
            let img = linear.apply(c);
            let j = datum
                .coroots()
                .iter()
                .position(|cc| *cc == img)
                .ok_or_else(|| Error::IncompatibleTwist("linear part does not permute Σ".into()))?;
            // root_j ∘ ς = root_i as covectors.
            let pulled: Vec<i64> = (0..rank)
                .map(|col| {
                    (0..rank).map(|r| datum.roots()[j][r] * linear[(r, col)]).sum::<i64>()
                })
                .collect();
            if pulled != datum.roots()[i] {
                return Err(Error::IncompatibleTwist(
                    "linear part breaks the root/coroot alignment".into(),
                ));
            }
        }
        // Finite order of ς.
        order_of(&linear)
            .ok_or_else(|| Error::IncompatibleTwist("linear part has infinite order".into()))?;
        let omega_part = match omega_part {
            Some(w) => {
                if w.datum().as_ref() != datum.as_ref() {
                    return Err(Error::IncompatibleTwist("omega part from another datum".into()));
                }
                if w.length() != 0 {
                    return Err(Error::IncompatibleTwist("omega part has positive length".into()));
                }
                w
            }
            None => ExtendedAffineElement::identity(datum.clone()),
        };
        // w₀: the unique Weyl element restoring the dominant chamber after ς,
        // found by greedy descent on the image of a regular dominant vector.
        let regular: Vec<i64> = {
            let mut t = vec![0i64; rank];
            for i in datum.positive_roots() {
                for (a, b) in t.iter_mut().zip(&datum.coroots()[i]) {
                    *a += b;
                }
            }
            t
        };
        let mut img = linear.apply(&regular);
        let mut w0 = FiniteWeylElement::identity(rank);
        loop {
            let mut moved = false;
            for &k in datum.simple_indices() {
                if datum.pair(&img, k) < 0 {
                    let s = datum.reflection(k);
                    img = s.apply(&img);
                    w0 = s.mul(&w0);
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        let sigma0 = w0.matrix().mul(&linear);
        // σ₀ must permute the simple coroots (preserve the dominant chamber).
        {
            let mut imgs: Vec<Vec<i64>> = datum
                .simple_indices()
                .iter()
                .map(|&k| sigma0.apply(&datum.coroots()[k]))
                .collect();
            let mut simples: Vec<Vec<i64>> =
                datum.simple_indices().iter().map(|&k| datum.coroots()[k].clone()).collect();
            imgs.sort();
            simples.sort();
            if imgs != simples {
                return Err(Error::IncompatibleTwist(
                    "sigma_0 does not preserve the dominant chamber".into(),
                ));
            }
        }
        let order_n = order_of(&sigma0)
            .ok_or_else(|| Error::IncompatibleTwist("sigma_0 has infinite order".into()))?;

        let pi1 = pi1_inertia(&datum);
        let pi1_gamma = pi1_galois(&datum, &sigma0);

        let mut twist = FrobeniusTwist {
            datum: datum.clone(),
            linear,
            linear_inv,
            omega_part,
            chamber_restorer: w0,
            sigma0,
            order_n,
            order_w: 0,
            simple_perm: vec![],
            pi1,
            pi1_gamma,
        };
        // The full action must permute 𝕊 (σ(𝔞) = 𝔞); record the permutation.
        if !datum.simple_indices().is_empty() {
            let gens = simple_reflections(&datum)?;
            let mut perm = Vec::with_capacity(gens.len());
            for s in &gens {
                let img = twist.apply_sigma(s);
                let j = gens.iter().position(|g| *g == img).ok_or_else(|| {
                    Error::IncompatibleTwist("action does not permute the simple reflections".into())
                })?;
                perm.push(j);
            }
            twist.simple_perm = perm;
        }
        twist.order_w = twist
            .compute_order_on_w()
            .ok_or_else(|| Error::IncompatibleTwist("sigma has infinite order on W".into()))?;
        Ok(twist)
    }

    /// The split twist: ς = id, τ_σ = id.
    pub fn split(datum: Arc<AffineWeylDatum>) -> Self {
        let rank = datum.rank();
        Self::new(datum, IntMat::identity(rank), None).expect("split twist is always valid")
    }

    pub fn datum(&self) -> &Arc<AffineWeylDatum> {
        &self.datum
    }

    pub fn linear_part(&self) -> &IntMat {
        &self.linear
    }

    pub fn omega_part(&self) -> &ExtendedAffineElement {
        &self.omega_part
    }

    pub fn chamber_restorer(&self) -> &FiniteWeylElement {
        &self.chamber_restorer
    }

    pub fn sigma0_matrix(&self) -> &IntMat {
        &self.sigma0
    }

    /// Order of σ₀ on Λ ⊗ ℚ.
    pub fn order_sigma0(&self) -> usize {
        self.order_n
    }

    /// Minimal n ≥ 1 with σⁿ = id as an automorphism of W.
    pub fn order_on_w(&self) -> usize {
        self.order_w
    }

    /// How σ permutes 𝕊 (indices into the [`simple_reflections`] list).
    pub fn simple_permutation(&self) -> &[usize] {
        &self.simple_perm
    }

    /// The linear part of the full σ-action on translations: σ(t_λ) = t_{L(λ)}
    /// with L = v_τ∘ς, where v_τ is the finite part of the conjugation
    /// element. Coincides with ς for quasi-split twists (τ_σ = id up to a
    /// translation) and lies in the same W₀-coset in general, so σ₀ is
    /// unaffected by the distinction.
    pub fn effective_linear(&self) -> IntMat {
        self.omega_part.finite_part().matrix().mul(&self.linear)
    }

    pub fn pi1(&self) -> &Pi1Quotient {
        &self.pi1
    }

    pub fn pi1_gamma(&self) -> &Pi1Quotient {
        &self.pi1_gamma
    }

    /// w ↦ ς(w), i.e. t_λ·v ↦ t_{ς(λ)}·ςvς⁻¹ (no conjugation part).
    fn apply_linear(&self, w: &ExtendedAffineElement) -> ExtendedAffineElement {
        let translation = self.linear.apply(w.translation());
        let finite = FiniteWeylElement::from_matrix(
            self.linear.mul(w.finite_part().matrix()).mul(&self.linear_inv),
        );
        ExtendedAffineElement::new(self.datum.clone(), translation, finite)
    }

    /// The σ-action on W: w ↦ τ_σ·ς(w)·τ_σ⁻¹. Length-preserving.
    pub fn apply_sigma(&self, w: &ExtendedAffineElement) -> ExtendedAffineElement {
        &(&self.omega_part * &self.apply_linear(w)) * &self.omega_part.inverse()
    }

    pub fn apply_sigma0_int(&self, v: &[i64]) -> Vec<i64> {
        self.sigma0.apply(v)
    }

    pub fn apply_sigma0_rat(&self, v: &RationalVector) -> RationalVector {
        RationalVector { coords: self.sigma0.apply_rat(&v.coords) }
    }

    fn compute_order_on_w(&self) -> Option<usize> {
        // σⁿ(w) = τ_n·ςⁿ(w)·τ_n⁻¹ with τ_{n+1} = τ_σ·ς(τ_n); σⁿ = id iff
        // ςⁿ = id and τ_n is central (commutes with 𝕊; Ω is abelian).
        let gens = if self.datum.simple_indices().is_empty() {
            vec![]
        } else {
            simple_reflections(&self.datum).ok()?
        };
        let mut pow = self.linear.clone();
        let mut tau_n = self.omega_part.clone();
        for n in 1..=ORDER_CAP {
            if pow.is_identity() {
                let central = gens.iter().all(|s| &(&tau_n * s) * &tau_n.inverse() == *s);
                if central {
                    return Some(n);
                }
            }
            pow = pow.mul(&self.linear);
            tau_n = &self.omega_part * &self.apply_linear(&tau_n);
        }
        None
    }

    /// κ̃: the image of w in π₁(G)_I = Λ/Q∨ (the class of its translation part).
    pub fn kottwitz_inertia(&self, w: &ExtendedAffineElement) -> Pi1Element {
        self.pi1.project(w.translation())
    }

    /// κ: the image of w in π₁(G)_Γ, the σ₀-coinvariants of π₁(G)_I.
    pub fn kottwitz_galois(&self, w: &ExtendedAffineElement) -> Pi1Element {
        self.pi1_gamma.project(w.translation())
    }

    /// μ◊: the σ₀-average (1/N)·Σ_{i=1}^{N} σ₀^i(μ). Dominant and σ₀-fixed.
    pub fn mu_diamond(&self, mu: &[i64]) -> Result<RationalVector> {
        if !self.datum.is_dominant(mu) {
            return Err(Error::NonDominantInput);
        }
        let mut acc = vec![0i64; self.datum.rank()];
        let mut cur = mu.to_vec();
        for _ in 0..self.order_n {
            cur = self.sigma0.apply(&cur);
            for (a, b) in acc.iter_mut().zip(&cur) {
                *a += b;
            }
        }
        let n = Rat::from_integer(self.order_n as i64);
        Ok(RationalVector {
            coords: acc.iter().map(|&x| Ratio::from_integer(x) / n).collect(),
        })
    }

    /// μ♮: the common image of the orbit of μ in π₁(G)_Γ.
    pub fn mu_natural(&self, mu: &[i64]) -> Pi1Element {
        self.pi1_gamma.project(mu)
    }
}

fn order_of(m: &IntMat) -> Option<usize> {
    let mut pow = m.clone();
    for n in 1..=ORDER_CAP {
        if pow.is_identity() {
            return Some(n);
        }
        pow = pow.mul(m);
    }
    None
}

fn coroot_relation_matrix(datum: &AffineWeylDatum) -> IntMat {
    let rank = datum.rank();
    let cols: Vec<&Vec<i64>> =
        datum.simple_indices().iter().map(|&k| &datum.coroots()[k]).collect();
    let mut data = Vec::with_capacity(rank * cols.len());
    for r in 0..rank {
        for c in &cols {
            data.push(c[r]);
        }
    }
    IntMat::new(rank, cols.len(), data)
}

/// π₁(G)_I = Λ/Q∨(Σ).
pub fn pi1_inertia(datum: &AffineWeylDatum) -> Pi1Quotient {
    Pi1Quotient::new(datum.rank(), &coroot_relation_matrix(datum))
}

/// π₁(G)_Γ = Λ/(Q∨ + (σ₀−1)Λ).
pub fn pi1_galois(datum: &AffineWeylDatum, sigma0: &IntMat) -> Pi1Quotient {
    let rank = datum.rank();
    let base = coroot_relation_matrix(datum);
    let k = base.cols();
    let mut data = Vec::with_capacity(rank * (k + rank));
    for r in 0..rank {
        data.extend_from_slice(base.row(r));
        for c in 0..rank {
            let e = if r == c { 1 } else { 0 };
            data.push(sigma0[(r, c)] - e);
        }
    }
    Pi1Quotient::new(rank, &IntMat::new(rank, k + rank, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_weyl::omega_component;
    use crate::datum::{quadratic_restriction_gl2, standard_datum, unitary_twist};

    fn t(datum: &Arc<AffineWeylDatum>, v: &[i64]) -> ExtendedAffineElement {
        ExtendedAffineElement::translation_element(datum.clone(), v)
    }

    #[test]
    fn split_twist_fixes_everything() {
        let d = standard_datum("gl2").unwrap();
        let tw = FrobeniusTwist::split(d.clone());
        let w = &t(&d, &[2, -1]) * &simple_reflections(&d).unwrap()[0];
        assert_eq!(tw.apply_sigma(&w), w);
        assert_eq!(tw.order_sigma0(), 1);
        assert_eq!(tw.order_on_w(), 1);
    }

    #[test]
    fn swap_twist_swaps_factors() {
        let (d, tw) = quadratic_restriction_gl2();
        let w = t(&d, &[1, 0, 0, 0]);
        assert_eq!(tw.apply_sigma(&w), t(&d, &[0, 0, 1, 0]));
        assert_eq!(tw.order_sigma0(), 2);
    }

    #[test]
    fn inner_twist_conjugates_by_tau() {
        let d = standard_datum("gl2").unwrap();
        let tau = omega_component(&t(&d, &[1, 0]));
        let tw = FrobeniusTwist::new(d.clone(), IntMat::identity(2), Some(tau)).unwrap();
        assert_eq!(tw.apply_sigma(&t(&d, &[1, 0])), t(&d, &[0, 1]));
        // σ² = conjugation by τ² = t_{(1,1)}, which is central.
        assert_eq!(tw.order_on_w(), 2);
    }

    #[test]
    fn sigma_preserves_length_and_permutes_simples() {
        let d = standard_datum("gl3").unwrap();
        let tw = unitary_twist(&d).unwrap();
        let gens = simple_reflections(&d).unwrap();
        let perm = tw.simple_permutation();
        assert_eq!(perm.len(), 3);
        for (i, s) in gens.iter().enumerate() {
            assert_eq!(tw.apply_sigma(s), gens[perm[i]]);
        }
        for v in crate::root_system::vectors_in_box(-1, 1, 3) {
            let w = t(&d, &v);
            assert_eq!(tw.apply_sigma(&w).length(), w.length());
        }
    }

    #[test]
    fn kottwitz_inertia_examples() {
        let d = standard_datum("gl2").unwrap();
        let tw = FrobeniusTwist::split(d.clone());
        // π₁(GL₂)_I = ℤ by coordinate sum.
        assert_eq!(tw.pi1().free_rank(), 1);
        assert!(tw.pi1().torsion().is_empty());
        let one = tw.kottwitz_inertia(&t(&d, &[1, 0]));
        assert_ne!(one, tw.pi1().zero());
        // W_a maps to 0.
        let gens = simple_reflections(&d).unwrap();
        assert_eq!(tw.kottwitz_inertia(&(&gens[0] * &gens[1])), tw.pi1().zero());
        // Homomorphism property on a grid of pairs.
        for a in crate::root_system::vectors_in_box(-1, 1, 2) {
            for b in crate::root_system::vectors_in_box(-1, 1, 2) {
                let wa = t(&d, &a);
                let wb = t(&d, &b);
                assert_eq!(
                    tw.kottwitz_inertia(&(&wa * &wb)),
                    tw.pi1().add(&tw.kottwitz_inertia(&wa), &tw.kottwitz_inertia(&wb))
                );
            }
        }
    }

    #[test]
    fn kottwitz_galois_on_quadratic_restriction() {
        let (d, tw) = quadratic_restriction_gl2();
        // π₁(G)_I = ℤ², σ₀ swaps the summands, so the coinvariants are ℤ.
        assert_eq!(tw.pi1().free_rank(), 2);
        assert_eq!(tw.pi1_gamma().free_rank(), 1);
        assert!(tw.pi1_gamma().torsion().is_empty());
        let a = tw.kottwitz_galois(&t(&d, &[1, 0, 0, 0]));
        let b = tw.kottwitz_galois(&t(&d, &[0, 0, 1, 0]));
        assert_eq!(a, b);
        assert_ne!(a, tw.pi1_gamma().zero());
        let two = tw.kottwitz_galois(&t(&d, &[1, 0, 1, 0]));
        assert_eq!(two, tw.pi1_gamma().add(&a, &a));
    }

    #[test]
    fn kappa_is_sigma_conjugation_invariant() {
        let d = standard_datum("gl2").unwrap();
        let tau = omega_component(&t(&d, &[1, 0]));
        let tw = FrobeniusTwist::new(d.clone(), IntMat::identity(2), Some(tau)).unwrap();
        let gens = simple_reflections(&d).unwrap();
        let sample: Vec<_> =
            crate::affine_weyl::enumerate_up_to_length(&d, 3, &crate::affine_weyl::omega_reps_in_box(&d, 1))
                .collect();
        for w in &sample {
            for u in gens.iter().chain(std::iter::once(&tw.omega_part().clone())) {
                let conj = &(&u.inverse() * w) * &tw.apply_sigma(u);
                assert_eq!(tw.kottwitz_galois(&conj), tw.kottwitz_galois(w));
            }
        }
    }

    #[test]
    fn mu_diamond_examples() {
        let d = standard_datum("gl2").unwrap();
        let tw = FrobeniusTwist::split(d.clone());
        assert_eq!(tw.mu_diamond(&[1, 0]).unwrap(), RationalVector::from_ints(&[1, 0]));
        assert_eq!(tw.mu_diamond(&[0, 1]), Err(Error::NonDominantInput));

        let (_, tw) = quadratic_restriction_gl2();
        let md = tw.mu_diamond(&[1, 0, 0, 0]).unwrap();
        let half = Rat::new(1, 2);
        assert_eq!(md.coords, vec![half, Rat::from_integer(0), half, Rat::from_integer(0)]);

        let gl3 = standard_datum("gl3").unwrap();
        let tw = unitary_twist(&gl3).unwrap();
        assert_eq!(tw.order_sigma0(), 2);
        let md = tw.mu_diamond(&[1, 0, 0]).unwrap();
        assert_eq!(md.coords, vec![Rat::new(1, 2), Rat::from_integer(0), Rat::new(-1, 2)]);
        // σ₀ is the L-action from the example: (1,0,0) ↦ (0,0,−1).
        assert_eq!(tw.apply_sigma0_int(&[1, 0, 0]), vec![0, 0, -1]);
    }

    #[test]
    fn mu_natural_examples() {
        let d = standard_datum("gl2").unwrap();
        let tw = FrobeniusTwist::split(d.clone());
        assert_eq!(tw.mu_natural(&[0, 0]), tw.pi1_gamma().zero());
        let g = tw.mu_natural(&[1, 0]);
        assert_ne!(g, tw.pi1_gamma().zero());

        // Unitary GL₃: π₁(G)_I = ℤ with σ₀ acting by −1, so π₁(G)_Γ = ℤ/2.
        let gl3 = standard_datum("gl3").unwrap();
        let tw = unitary_twist(&gl3).unwrap();
        assert_eq!(tw.pi1_gamma().free_rank(), 0);
        assert_eq!(tw.pi1_gamma().torsion(), vec![2]);
        let one = tw.mu_natural(&[1, 0, 0]);
        assert_ne!(one, tw.pi1_gamma().zero());
        assert_eq!(tw.mu_natural(&[2, 0, 0]), tw.pi1_gamma().zero());
    }

    #[test]
    fn kottwitz_intertwines_sigma_action() {
        let (d, tw) = quadratic_restriction_gl2();
        for v in crate::root_system::vectors_in_box(-1, 1, 4) {
            let w = t(&d, &v);
            let lhs = tw.kottwitz_inertia(&tw.apply_sigma(&w));
            let rhs = tw.pi1().act(tw.sigma0_matrix(), &tw.kottwitz_inertia(&w));
            assert_eq!(lhs, rhs);
        }
    }
}
