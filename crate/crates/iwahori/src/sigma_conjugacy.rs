//! σ-straight elements, Newton points, the (ν̄, κ) invariants of σ-conjugacy
//! classes, B(G,{μ}), the μ-ordinary class, and Levi/centrality tests.
//!
//! The Newton point of w is (1/n)·λ where w·σ(w)···σ^{n−1}(w) = t_λ for the
//! minimal n at which σⁿ is trivial on W and the twisted power is a
//! translation. An element is σ-straight exactly when ℓ(w) = ⟨ν̄_w, 2ρ⟩.
//! B(G,{μ}) is realized as the set of (ν̄, κ) pairs of the σ-straight
//! elements of Adm({μ}), which is finite and separates classes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::Zero;

use crate::admissible::{admissible_set, AdmissibleSet};
use crate::affine_weyl::{simple_reflections, ExtendedAffineElement};
use crate::error::Error;
use crate::frobenius::{FrobeniusTwist, Pi1Element};
use crate::matrix::{nullspace_rational, solve_rational, IntMat, Rat};
use crate::root_system::{AffineWeylDatum, FiniteWeylElement, RationalVector};
use crate::Result;

const POWER_CAP: usize = 10_000;

/// The invariant pair of a σ-conjugacy class: a dominant Newton vector and a
/// Kottwitz point in π₁(G)_Γ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BPoint {
    pub newton: RationalVector,
    pub kappa: Pi1Element,
}

impl BPoint {
    /// Sort key: coordinate sum, then coordinates, then κ. Compatible with the
    /// dominance order on the Newton points.
    fn key(&self) -> (Rat, Vec<Rat>, Vec<i64>) {
        (self.newton.coordinate_sum(), self.newton.coords.clone(), self.kappa.coords.clone())
    }
}

impl PartialOrd for BPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Newton cocharacter of w: the non-dominant ν_w and its dominant
/// representative ν̄_w.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPoint {
    pub nu: RationalVector,
    pub nu_bar: RationalVector,
}

/// Compute ν_w = (1/n)·λ where w·σ(w)···σ^{n−1}(w) = t_λ at the minimal
/// admissible n, and independently re-verify at 2n.
pub fn newton_point(twist: &FrobeniusTwist, w: &ExtendedAffineElement) -> NewtonPoint {
    let n0 = twist.order_on_w();
    // Q = w·σ(w)···σ^{n0−1}(w); beyond n0 the factors repeat, so the twisted
    // powers are plain powers of Q.
    let mut q = w.clone();
    let mut factor = w.clone();
    for _ in 1..n0 {
        factor = twist.apply_sigma(&factor);
        q = &q * &factor;
    }
    let mut p = q.clone();
    let mut k = 1usize;
    while !p.is_translation() {
        p = &p * &q;
        k += 1;
        assert!(k <= POWER_CAP, "finite part of the twisted power never vanished");
    }
    let n = (n0 * k) as i64;
    // Independence of the admissible n: doubling must double the translation.
    let p2 = &p * &p;
    assert!(p2.is_translation());
    assert_eq!(
        p2.translation().iter().map(|x| x * n).collect::<Vec<_>>(),
        p.translation().iter().map(|x| x * 2 * n).collect::<Vec<_>>()
    );
    let nu = RationalVector {
        coords: p.translation().iter().map(|&x| Ratio::new(x, n)).collect(),
    };
    let (nu_bar, _) = twist.datum().dominant_rep_rat(&nu);
    NewtonPoint { nu, nu_bar }
}

/// σ-straightness via ℓ(w) = ⟨ν̄_w, 2ρ⟩. When the test passes, the defining
/// product-length form is re-checked for n up to 2·(order of σ on W).
pub fn is_sigma_straight(twist: &FrobeniusTwist, w: &ExtendedAffineElement) -> bool {
    let np = newton_point(twist, w);
    let straight =
        twist.datum().pair_two_rho_rat(&np.nu_bar) == Rat::from_integer(w.length());
    if straight {
        assert!(
            straight_by_products(twist, w, 2 * twist.order_on_w()),
            "length characterization disagrees with the product definition"
        );
    }
    straight
}

/// The defining form of σ-straightness, checked for 1 ≤ n ≤ n_max:
/// ℓ(w·σ(w)···σ^{n−1}(w)) = n·ℓ(w).
pub fn straight_by_products(
    twist: &FrobeniusTwist,
    w: &ExtendedAffineElement,
    n_max: usize,
) -> bool {
    let mut prod = w.clone();
    let mut factor = w.clone();
    for n in 1..=n_max {
        if prod.length() != n as i64 * w.length() {
            return false;
        }
        factor = twist.apply_sigma(&factor);
        prod = &prod * &factor;
    }
    true
}

/// The sub-root-system Σ_M = {α : ⟨v, α⟩ = 0} of the semi-standard Levi
/// attached to a vector v.
#[derive(Debug, Clone)]
pub struct LeviSubsystem {
    datum: Arc<AffineWeylDatum>,
    pub root_indices: Vec<usize>,
    pub base_vector: RationalVector,
}

impl LeviSubsystem {
    /// Positive roots of Σ_M (inherited positivity from Σ).
    pub fn positive_roots(&self) -> Vec<usize> {
        self.root_indices
            .iter()
            .copied()
            .filter(|&i| self.datum.is_positive_root(i))
            .collect()
    }

    /// λ is central in M iff it pairs to zero with every root of Σ_M.
    pub fn is_central(&self, lambda: &[i64]) -> bool {
        self.root_indices.iter().all(|&i| self.datum.pair(lambda, i) == 0)
    }

    /// M_v is defined over F exactly when the linear part of the σ-action
    /// fixes v.
    pub fn defined_over_f(&self, twist: &FrobeniusTwist) -> bool {
        let img = RationalVector {
            coords: twist.effective_linear().apply_rat(&self.base_vector.coords),
        };
        img == self.base_vector
    }
}

pub fn levi_of(datum: &Arc<AffineWeylDatum>, v: &RationalVector) -> LeviSubsystem {
    let root_indices = (0..datum.roots().len())
        .filter(|&i| datum.pair_rat(v, i).is_zero())
        .collect();
    LeviSubsystem { datum: datum.clone(), root_indices, base_vector: v.clone() }
}

/// A σ-straight translation in the W₀-orbit of μ, tagged with its invariants.
#[derive(Debug, Clone)]
pub struct StraightTranslation {
    pub mu_prime: Vec<i64>,
    pub newton: NewtonPoint,
    pub kappa: Pi1Element,
}

/// All μ' ∈ W₀·μ with t_{μ'} σ-straight. May be empty for non-quasi-split twists.
pub fn straight_translations_in_orbit(
    twist: &FrobeniusTwist,
    mu: &[i64],
) -> Result<Vec<StraightTranslation>> {
    let datum = twist.datum();
    if !datum.is_dominant(mu) {
        return Err(Error::NonDominantInput);
    }
    let mut out = Vec::new();
    for mu_prime in datum.weyl_orbit(mu) {
        let t = ExtendedAffineElement::translation_element(datum.clone(), &mu_prime);
        if is_sigma_straight(twist, &t) {
            let newton = newton_point(twist, &t);
            let kappa = twist.kottwitz_galois(&t);
            out.push(StraightTranslation { mu_prime, newton, kappa });
        }
    }
    Ok(out)
}

/// B(G,{μ}) as the set of (ν̄, κ) pairs of σ-straight elements of Adm({μ}),
/// sorted by (coordinate sum, lex). Each class in B(G,{μ}) meets a σ-straight
/// element of the admissible set, and (ν̄, κ) separates classes.
pub fn b_of_g_mu(twist: &FrobeniusTwist, mu: &[i64]) -> Result<Vec<BPoint>> {
    let adm = admissible_set(twist, mu)?;
    Ok(b_points_of_straight_elements(twist, &adm))
}

fn b_points_of_straight_elements(twist: &FrobeniusTwist, adm: &AdmissibleSet) -> Vec<BPoint> {
    let mut points: BTreeMap<(Vec<Rat>, Vec<i64>), BPoint> = BTreeMap::new();
    for w in &adm.elements {
        if is_sigma_straight(twist, w) {
            let np = newton_point(twist, w);
            let kappa = twist.kottwitz_galois(w);
            let key = (np.nu_bar.coords.clone(), kappa.coords.clone());
            points.entry(key).or_insert(BPoint { newton: np.nu_bar, kappa });
        }
    }
    let mut out: Vec<BPoint> = points.into_values().collect();
    out.sort();
    out
}

/// Independent oracle for [`b_of_g_mu`]: take the (ν̄, κ) pairs of *all*
/// elements of Adm({μ}) — every σ-conjugacy class meeting the admissible set
/// contributes, with no straightness filter on this path.
pub fn b_of_g_mu_oracle(twist: &FrobeniusTwist, mu: &[i64]) -> Result<Vec<BPoint>> {
    let adm = admissible_set(twist, mu)?;
    let mut points: BTreeMap<(Vec<Rat>, Vec<i64>), BPoint> = BTreeMap::new();
    for w in &adm.elements {
        let np = newton_point(twist, w);
        let kappa = twist.kottwitz_galois(w);
        let key = (np.nu_bar.coords.clone(), kappa.coords.clone());
        points.entry(key).or_insert(BPoint { newton: np.nu_bar, kappa });
    }
    let mut out: Vec<BPoint> = points.into_values().collect();
    out.sort();
    Ok(out)
}

/// Partition of the admissible set into σ-conjugacy classes, by orbit closure
/// under w ↦ g⁻¹·w·σ(g) for g ∈ 𝕊 ∪ {τ_min} within the length ball of t_μ.
/// Brute-force; used to cross-check that (ν̄, κ) is constant on classes.
pub fn sigma_classes_in_admissible(
    twist: &FrobeniusTwist,
    mu: &[i64],
) -> Result<Vec<Vec<ExtendedAffineElement>>> {
    let adm = admissible_set(twist, mu)?;
    let datum = twist.datum();
    let cap = datum.pair_two_rho(mu);
    let mut gens: Vec<ExtendedAffineElement> = if datum.simple_indices().is_empty() {
        vec![]
    } else {
        simple_reflections(datum)?
    };
    gens.push(adm.tau_min.clone());
    let mut class_of: BTreeMap<ExtendedAffineElement, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<ExtendedAffineElement>> = Vec::new();
    for seed in &adm.elements {
        if class_of.contains_key(seed) {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        let mut stack = vec![seed.clone()];
        class_of.insert(seed.clone(), id);
        while let Some(x) = stack.pop() {
            members.push(x.clone());
            for g in &gens {
                let y = &(&g.inverse() * &x) * &twist.apply_sigma(g);
                if y.length() <= cap && !class_of.contains_key(&y) {
                    class_of.insert(y.clone(), id);
                    stack.push(y);
                }
            }
        }
        members.sort();
        members.retain(|m| adm.contains(m));
        classes.push(members);
    }
    Ok(classes)
}

/// Exploratory enumeration of σ-straight elements with ℓ(w) ≤ max_len in the
/// given Ω-components. A complete slice of the straight classes is only
/// guaranteed when the cap comes from an admissible bound; offered for
/// experimentation beyond that case.
pub fn straight_elements_up_to_length(
    twist: &FrobeniusTwist,
    max_len: i64,
    components: &[ExtendedAffineElement],
) -> Vec<ExtendedAffineElement> {
    crate::affine_weyl::enumerate_up_to_length(twist.datum(), max_len, components)
        .filter(|w| is_sigma_straight(twist, w))
        .collect()
}

/// The μ-ordinary class: the unique B-point with ν̄ = μ◊, when present.
pub fn mu_ordinary(twist: &FrobeniusTwist, mu: &[i64]) -> Result<Option<BPoint>> {
    let diamond = twist.mu_diamond(mu)?;
    let points = b_of_g_mu(twist, mu)?;
    let hits: Vec<BPoint> =
        points.into_iter().filter(|p| p.newton == diamond).collect();
    assert!(hits.len() <= 1, "mu-ordinary class must be unique");
    Ok(hits.into_iter().next())
}

/// Transport a datum and twist along a surjective lattice map Λ → Λ' that
/// carries Σ bijectively (the combinatorial shadow of a central isogeny).
pub fn quotient_datum(
    datum: &Arc<AffineWeylDatum>,
    twist: &FrobeniusTwist,
    map: &IntMat,
) -> Result<(Arc<AffineWeylDatum>, FrobeniusTwist)> {
    let r = datum.rank();
    let r2 = map.rows();
    if map.cols() != r {
        return Err(Error::IncompatibleQuotient("map has wrong source rank".into()));
    }
    let kernel = nullspace_rational(map);
    if kernel.len() != r - r2 {
        return Err(Error::IncompatibleQuotient("map is not surjective onto Λ'".into()));
    }
    // Rational right inverse X with M·X = I.
    let mut x_cols: Vec<Vec<Rat>> = Vec::with_capacity(r2);
    for k in 0..r2 {
        let e: Vec<Rat> =
            (0..r2).map(|i| Rat::from_integer(if i == k { 1 } else { 0 })).collect();
        let col = solve_rational(map, &e)
            .ok_or_else(|| Error::IncompatibleQuotient("map is not surjective".into()))?;
        x_cols.push(col);
    }
    // Covectors descend when they kill the kernel.
    let push_covector = |row: &[i64]| -> Result<Vec<i64>> {
        for k in &kernel {
            let pairing = row
                .iter()
                .zip(k)
                .fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(*a) * b);
            if !pairing.is_zero() {
                return Err(Error::IncompatibleQuotient(
                    "a root does not factor through the quotient".into(),
                ));
            }
        }
        let mut out = Vec::with_capacity(r2);
        for col in &x_cols {
            let v = row
                .iter()
                .zip(col)
                .fold(Rat::zero(), |acc, (a, b)| acc + Rat::from_integer(*a) * b);
            if *v.denom() != 1 {
                return Err(Error::IncompatibleQuotient("root image is not integral".into()));
            }
            out.push(*v.numer());
        }
        Ok(out)
    };
    // Matrices descend via A' = M·A·X, checking M·A kills the kernel.
    let push_matrix = |a: &IntMat| -> Result<IntMat> {
        let ma = map.mul(a);
        for k in &kernel {
            for i in 0..r2 {
                let s = (0..r).fold(Rat::zero(), |acc, j| {
                    acc + Rat::from_integer(ma[(i, j)]) * k[j]
                });
                if !s.is_zero() {
                    return Err(Error::IncompatibleQuotient(
                        "the twist does not descend to the quotient".into(),
                    ));
                }
            }
        }
        let mut data = Vec::with_capacity(r2 * r2);
        for i in 0..r2 {
            for col in &x_cols {
                let v = (0..r).fold(Rat::zero(), |acc, j| {
                    acc + Rat::from_integer(ma[(i, j)]) * col[j]
                });
                if *v.denom() != 1 {
                    return Err(Error::IncompatibleQuotient(
                        "descended matrix is not integral".into(),
                    ));
                }
                data.push(*v.numer());
            }
        }
        Ok(IntMat::new(r2, r2, data))
    };
    let roots: Vec<Vec<i64>> =
        datum.roots().iter().map(|row| push_covector(row)).collect::<Result<_>>()?;
    let coroots: Vec<Vec<i64>> = datum.coroots().iter().map(|c| map.apply(c)).collect();
    let quotient = AffineWeylDatum::new(
        format!("{}-quotient", datum.name()),
        r2,
        roots,
        coroots,
        datum.simple_indices().to_vec(),
    )?;
    let linear = push_matrix(twist.linear_part())?;
    let tau = twist.omega_part();
    let omega = if tau.translation().iter().all(|&v| v == 0) && tau.finite_part().is_identity() {
        None
    } else {
        let translation = map.apply(tau.translation());
        let finite = push_matrix(tau.finite_part().matrix())?;
        Some(ExtendedAffineElement::new(
            quotient.clone(),
            translation,
            FiniteWeylElement::from_matrix(finite),
        ))
    };
    let twist2 = FrobeniusTwist::new(quotient.clone(), linear, omega)?;
    Ok((quotient, twist2))
}
