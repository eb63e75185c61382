//! μ-admissible sets, their parahoric images, the very-special stratification
//! poset, and the ascent chains through it.
//!
//! Adm({μ}) = {w : w ≤ t_{x(μ)} for some x ∈ W₀} is computed by subword
//! closure of reduced words of the extreme translations. The independent
//! brute-force oracle (enumerate the length ball, filter by Bruhat) lives
//! here too and the two must agree.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::affine_weyl::{
    bruhat_leq, double_coset_rep, enumerate_up_to_length, omega_component, reduced_word,
    simple_reflections, ExtendedAffineElement, ParahoricType,
};
use crate::error::Error;
use crate::frobenius::FrobeniusTwist;
use crate::root_system::{AffineWeylDatum, FiniteWeylElement};
use crate::Result;

/// The μ-admissible set with its unique minimal element.
#[derive(Debug, Clone)]
pub struct AdmissibleSet {
    pub mu: Vec<i64>,
    pub elements: Vec<ExtendedAffineElement>,
    pub tau_min: ExtendedAffineElement,
}

impl AdmissibleSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &ExtendedAffineElement) -> bool {
        self.elements.binary_search(w).is_ok()
    }
}

/// Adm({μ}): the Bruhat down-set of the extreme translations {t_{x(μ)}}.
pub fn admissible_set(twist: &FrobeniusTwist, mu: &[i64]) -> Result<AdmissibleSet> {
    admissible_set_of_datum(twist.datum(), mu)
}

/// Datum-level computation (the set does not depend on the twist).
pub fn admissible_set_of_datum(
    datum: &Arc<AffineWeylDatum>,
    mu: &[i64],
) -> Result<AdmissibleSet> {
    if !datum.is_dominant(mu) {
        return Err(Error::NonDominantInput);
    }
    let gens = if datum.simple_indices().is_empty() {
        vec![]
    } else {
        simple_reflections(datum)?
    };
    let mut set: BTreeSet<ExtendedAffineElement> = BTreeSet::new();
    let mut tau_min = None;
    for mu_prime in datum.weyl_orbit(mu) {
        let t = ExtendedAffineElement::translation_element(datum.clone(), &mu_prime);
        let (word, omega) = reduced_word(&t);
        tau_min.get_or_insert(omega.clone());
        let mut down: HashSet<ExtendedAffineElement> = HashSet::new();
        down.insert(ExtendedAffineElement::identity(datum.clone()));
        for &i in &word {
            let mut next = down.clone();
            for p in &down {
                next.insert(p * &gens[i]);
            }
            down = next;
        }
        for p in down {
            set.insert(&p * &omega);
        }
    }
    let tau_min = tau_min.expect("orbit is nonempty");
    let elements: Vec<_> = set.into_iter().collect();
    debug_assert!(elements.iter().filter(|w| w.length() == 0).count() == 1);
    Ok(AdmissibleSet { mu: mu.to_vec(), elements, tau_min })
}

/// Brute-force oracle: enumerate the length ball in the right Ω-component and
/// keep the elements below some extreme translation. Independent of the
/// subword-closure production path.
pub fn admissible_set_bruteforce(
    datum: &Arc<AffineWeylDatum>,
    mu: &[i64],
) -> Result<Vec<ExtendedAffineElement>> {
    if !datum.is_dominant(mu) {
        return Err(Error::NonDominantInput);
    }
    let extremes: Vec<ExtendedAffineElement> = datum
        .weyl_orbit(mu)
        .iter()
        .map(|v| ExtendedAffineElement::translation_element(datum.clone(), v))
        .collect();
    let bound = datum.pair_two_rho(mu);
    let component = omega_component(&extremes[0]);
    let mut out = Vec::new();
    for w in enumerate_up_to_length(datum, bound, &[component]) {
        if extremes.iter().any(|t| bruhat_leq(&w, t)) {
            out.push(w);
        }
    }
    out.sort();
    Ok(out)
}

/// Adm({μ})_J: the image of Adm({μ}) in W_J\W/W_J as minimal-length
/// double-coset representatives. J must generate a finite group and be stable
/// under the twist's permutation of 𝕊.
pub fn admissible_set_j(
    twist: &FrobeniusTwist,
    mu: &[i64],
    j: &ParahoricType,
) -> Result<Vec<ExtendedAffineElement>> {
    let datum = twist.datum();
    if !j.is_finite(datum) {
        return Err(Error::InfiniteWJ(j.indices().to_vec()));
    }
    let perm = twist.simple_permutation();
    let stable = j.indices().iter().all(|&i| j.indices().contains(&perm[i]));
    if !stable {
        return Err(Error::NonSigmaStableJ(j.indices().to_vec()));
    }
    let adm = admissible_set(twist, mu)?;
    let mut reps: BTreeSet<ExtendedAffineElement> = BTreeSet::new();
    for w in &adm.elements {
        reps.insert(double_coset_rep(w, j)?);
    }
    Ok(reps.into_iter().collect())
}

/// A stratum of the very special Kottwitz–Rapoport poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumNode {
    pub lambda: Vec<i64>,
    /// Size of the σ₀-orbit: the smallest n with σ₀ⁿ(λ) = λ (the stratum is
    /// defined over the degree-n extension of the base field).
    pub orbit_size: usize,
    /// Whether this is the open stratum λ = μ (the smooth locus).
    pub is_top: bool,
}

/// The poset {λ dominant : λ ≼ μ} with its Hasse diagram.
#[derive(Debug, Clone)]
pub struct StrataPoset {
    pub mu: Vec<i64>,
    pub nodes: Vec<StratumNode>,
    /// Cover relations as (lower, upper) node indices.
    pub edges: Vec<(usize, usize)>,
}

impl StrataPoset {
    pub fn node_index(&self, lambda: &[i64]) -> Option<usize> {
        self.nodes.iter().position(|n| n.lambda == lambda)
    }
}

/// Nodes of the very special stratification: dominant λ with λ ≼ μ, i.e.
/// μ − λ a non-negative integer combination of the simple coroots. The scan
/// is bounded by Σᵢ cᵢ ≤ ⟨μ, 2ρ⟩ / 2 since each simple coroot pairs to 2
/// with 2ρ and dominant λ have ⟨λ, 2ρ⟩ ≥ 0.
pub fn kr_poset_very_special(twist: &FrobeniusTwist, mu: &[i64]) -> Result<StrataPoset> {
    let datum = twist.datum();
    if !datum.is_dominant(mu) {
        return Err(Error::NonDominantInput);
    }
    let simples: Vec<&Vec<i64>> =
        datum.simple_indices().iter().map(|&k| &datum.coroots()[k]).collect();
    let budget = datum.pair_two_rho(mu) / 2;
    let mut lambdas: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut coeffs = vec![0i64; simples.len()];
    scan_coefficients(datum, mu, &simples, &mut coeffs, 0, budget, &mut lambdas);
    let mut nodes: Vec<StratumNode> = lambdas
        .into_iter()
        .map(|lambda| {
            let mut orbit_size = 1;
            let mut cur = twist.apply_sigma0_int(&lambda);
            while cur != lambda {
                cur = twist.apply_sigma0_int(&cur);
                orbit_size += 1;
            }
            let is_top = lambda == mu;
            StratumNode { lambda, orbit_size, is_top }
        })
        .collect();
    nodes.sort_by(|a, b| a.lambda.cmp(&b.lambda));
    let mut edges = Vec::new();
    let n = nodes.len();
    let prec = |a: &StratumNode, b: &StratumNode| {
        a.lambda != b.lambda
            && datum.cone_leq_int(
                &b.lambda.iter().zip(&a.lambda).map(|(x, y)| x - y).collect::<Vec<_>>(),
            )
    };
    for i in 0..n {
        for j in 0..n {
            if prec(&nodes[i], &nodes[j]) {
                let covered = (0..n)
                    .any(|k| k != i && k != j && prec(&nodes[i], &nodes[k]) && prec(&nodes[k], &nodes[j]));
                if !covered {
                    edges.push((i, j));
                }
            }
        }
    }
    Ok(StrataPoset { mu: mu.to_vec(), nodes, edges })
}

fn scan_coefficients(
    datum: &AffineWeylDatum,
    mu: &[i64],
    simples: &[&Vec<i64>],
    coeffs: &mut Vec<i64>,
    pos: usize,
    budget: i64,
    out: &mut BTreeSet<Vec<i64>>,
) {
    if pos == simples.len() {
        let mut lambda = mu.to_vec();
        for (c, s) in coeffs.iter().zip(simples) {
            for (l, v) in lambda.iter_mut().zip(s.iter()) {
                *l -= c * v;
            }
        }
        if datum.is_dominant(&lambda) {
            out.insert(lambda);
        }
        return;
    }
    for c in 0..=budget {
        coeffs[pos] = c;
        scan_coefficients(datum, mu, simples, coeffs, pos + 1, budget - c, out);
    }
    coeffs[pos] = 0;
}

/// The first positive root α (in the datum's fixed enumeration) with
/// λ + α∨ ≼ μ. Exists whenever λ ≺ μ are dominant in the same coroot coset.
pub fn stembridge_step(datum: &AffineWeylDatum, lambda: &[i64], mu: &[i64]) -> Result<usize> {
    if !datum.is_dominant(lambda) || !datum.is_dominant(mu) {
        return Err(Error::NonDominantInput);
    }
    if lambda == mu {
        return Err(Error::NoStep);
    }
    let strictly_below =
        datum.cone_leq_int(&mu.iter().zip(lambda).map(|(a, b)| a - b).collect::<Vec<_>>());
    if !strictly_below {
        return Err(Error::NoStep);
    }
    for alpha in datum.positive_roots() {
        let stepped: Vec<i64> =
            lambda.iter().zip(&datum.coroots()[alpha]).map(|(a, b)| a + b).collect();
        let delta: Vec<i64> = mu.iter().zip(&stepped).map(|(a, b)| a - b).collect();
        if datum.cone_leq_int(&delta) {
            return Ok(alpha);
        }
    }
    Err(Error::NoStep)
}

/// One Frobenius-orbit ascent: λ' = λ + Σᵢ σ_qᵢ(α∨) over the σ_q-orbit of the
/// Stembridge root α. Requires λ, μ to be σ_q-fixed; asserts λ ≺ λ' ≼ μ and
/// surfaces a non-dominant λ' as an error rather than repairing it.
pub fn frob_orbit_step(twist_q: &FrobeniusTwist, lambda: &[i64], mu: &[i64]) -> Result<Vec<i64>> {
    let datum = twist_q.datum();
    if twist_q.apply_sigma0_int(lambda) != lambda || twist_q.apply_sigma0_int(mu) != mu {
        return Err(Error::NonDominantInput);
    }
    let alpha = stembridge_step(datum, lambda, mu)?;
    let sigma0 = FiniteWeylElement::from_matrix(twist_q.sigma0_matrix().clone());
    let perm = datum.root_action(&sigma0);
    let mut orbit = vec![alpha];
    let mut cur = perm[alpha];
    while cur != alpha {
        orbit.push(cur);
        cur = perm[cur];
    }
    let mut next = lambda.to_vec();
    for &a in &orbit {
        // Each single translate stays below μ because σ_q fixes λ and μ.
        let single: Vec<i64> =
            lambda.iter().zip(&datum.coroots()[a]).map(|(x, y)| x + y).collect();
        let delta: Vec<i64> = mu.iter().zip(&single).map(|(x, y)| x - y).collect();
        assert!(datum.cone_leq_int(&delta), "orbit translate escaped the interval");
        for (n, c) in next.iter_mut().zip(&datum.coroots()[a]) {
            *n += c;
        }
    }
    if !datum.is_dominant(&next) {
        return Err(Error::NonDominantResult(next));
    }
    let up: Vec<i64> = next.iter().zip(lambda).map(|(a, b)| a - b).collect();
    let rest: Vec<i64> = mu.iter().zip(&next).map(|(a, b)| a - b).collect();
    assert!(datum.cone_leq_int(&up) && up.iter().any(|&x| x != 0), "step did not ascend");
    assert!(datum.cone_leq_int(&rest), "step overshot mu");
    assert_eq!(twist_q.apply_sigma0_int(&next), next, "step left the sigma_q-fixed locus");
    Ok(next)
}

/// Iterate [`frob_orbit_step`] from λ to μ. Strictly increasing, so it takes
/// at most ⟨μ − λ, 2ρ⟩ / 2 steps.
pub fn curve_chain(
    twist_q: &FrobeniusTwist,
    lambda: &[i64],
    mu: &[i64],
) -> Result<Vec<Vec<i64>>> {
    let datum = twist_q.datum();
    let mut chain = vec![lambda.to_vec()];
    let cap = (datum.pair_two_rho(mu) - datum.pair_two_rho(lambda)) / 2 + 1;
    let mut cur = lambda.to_vec();
    let mut steps = 0;
    while cur != mu {
        cur = frob_orbit_step(twist_q, &cur, mu)?;
        chain.push(cur.clone());
        steps += 1;
        if steps > cap {
            return Err(Error::CapExceeded("curve chain exceeded its length bound".into()));
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{quadratic_restriction_gl2, standard_datum};
    use crate::frobenius::FrobeniusTwist;

    fn split(name: &str) -> FrobeniusTwist {
        FrobeniusTwist::split(standard_datum(name).unwrap())
    }

    #[test]
    fn admissible_set_gl2_minuscule() {
        let tw = split("gl2");
        let adm = admissible_set(&tw, &[1, 0]).unwrap();
        assert_eq!(adm.len(), 3);
        assert_eq!(adm.tau_min.length(), 0);
        // The three elements: τ, t_{(1,0)}, t_{(0,1)}.
        let d = tw.datum();
        let t10 = ExtendedAffineElement::translation_element(d.clone(), &[1, 0]);
        let t01 = ExtendedAffineElement::translation_element(d.clone(), &[0, 1]);
        assert!(adm.contains(&t10));
        assert!(adm.contains(&t01));
        assert!(adm.contains(&adm.tau_min));
        // Against the independent brute-force oracle.
        let oracle = admissible_set_bruteforce(d, &[1, 0]).unwrap();
        assert_eq!(adm.elements, oracle);
    }

    #[test]
    fn admissible_set_of_zero_is_identity() {
        let tw = split("gl3");
        let adm = admissible_set(&tw, &[0, 0, 0]).unwrap();
        assert_eq!(adm.len(), 1);
        assert!(adm.elements[0].length() == 0);
    }

    #[test]
    fn admissible_set_gl3_minuscule() {
        let tw = split("gl3");
        let adm = admissible_set(&tw, &[1, 0, 0]).unwrap();
        let oracle = admissible_set_bruteforce(tw.datum(), &[1, 0, 0]).unwrap();
        assert_eq!(adm.elements, oracle);
        assert_eq!(adm.len(), 7);
    }

    #[test]
    fn admissible_set_rejects_non_dominant() {
        let tw = split("gl2");
        assert!(matches!(admissible_set(&tw, &[0, 1]), Err(Error::NonDominantInput)));
    }

    #[test]
    fn tau_min_is_bruhat_minimum_with_right_class() {
        let tw = split("gl2");
        let adm = admissible_set(&tw, &[2, 1]).unwrap();
        for w in &adm.elements {
            assert!(bruhat_leq(&adm.tau_min, w));
            assert_eq!(tw.kottwitz_inertia(w), tw.kottwitz_inertia(&adm.tau_min));
        }
    }

    #[test]
    fn admissible_is_downward_closed_in_component() {
        let tw = split("gl3");
        let adm = admissible_set(&tw, &[1, 1, 0]).unwrap();
        let d = tw.datum();
        let ball: Vec<_> = enumerate_up_to_length(
            d,
            adm.elements.iter().map(|w| w.length()).max().unwrap(),
            std::slice::from_ref(&adm.tau_min),
        )
        .collect();
        for v in &ball {
            let below = adm.elements.iter().any(|w| bruhat_leq(v, w));
            assert_eq!(below, adm.contains(v));
        }
    }

    #[test]
    fn admissible_j_examples() {
        let tw = split("gl2");
        // J = ∅ returns Adm itself.
        let plain = admissible_set(&tw, &[1, 0]).unwrap();
        let j0 = admissible_set_j(&tw, &[1, 0], &ParahoricType::empty()).unwrap();
        assert_eq!(plain.elements, j0);
        // Very special J = {s1}.
        let vs = ParahoricType::very_special(tw.datum());
        assert_eq!(admissible_set_j(&tw, &[1, 0], &vs).unwrap().len(), 1);
        assert_eq!(admissible_set_j(&tw, &[2, 0], &vs).unwrap().len(), 2);
    }

    #[test]
    fn admissible_j_rejects_unstable_j() {
        // Unitary GL₃: σ swaps the two finite simple reflections, so {s1}
        // alone is not σ-stable.
        let d = standard_datum("gl3").unwrap();
        let tw = crate::datum::unitary_twist(&d).unwrap();
        let j = ParahoricType::new(vec![0]);
        assert!(matches!(
            admissible_set_j(&tw, &[1, 0, 0], &j),
            Err(Error::NonSigmaStableJ(_))
        ));
        // The full finite set is stable.
        let vs = ParahoricType::very_special(&d);
        assert!(admissible_set_j(&tw, &[1, 0, 0], &vs).is_ok());
    }

    #[test]
    fn kr_poset_examples() {
        let tw = split("gl2");
        let p1 = kr_poset_very_special(&tw, &[1, 0]).unwrap();
        assert_eq!(p1.nodes.len(), 1);
        assert!(p1.edges.is_empty());

        let p2 = kr_poset_very_special(&tw, &[2, 0]).unwrap();
        assert_eq!(p2.nodes.len(), 2);
        assert_eq!(p2.edges.len(), 1);
        let (lo, hi) = p2.edges[0];
        assert_eq!(p2.nodes[lo].lambda, vec![1, 1]);
        assert_eq!(p2.nodes[hi].lambda, vec![2, 0]);
        assert!(p2.nodes[hi].is_top);

        let tw3 = split("gl3");
        let p3 = kr_poset_very_special(&tw3, &[2, 1, 0]).unwrap();
        let lams: Vec<_> = p3.nodes.iter().map(|n| n.lambda.clone()).collect();
        assert_eq!(lams, vec![vec![1, 1, 1], vec![2, 1, 0]]);
        assert_eq!(p3.edges.len(), 1);
    }

    #[test]
    fn kr_poset_orbit_sizes_under_swap() {
        let (_, tw) = quadratic_restriction_gl2();
        let p = kr_poset_very_special(&tw, &[1, 0, 1, 0]).unwrap();
        for node in &p.nodes {
            let expect = if tw.apply_sigma0_int(&node.lambda) == node.lambda { 1 } else { 2 };
            assert_eq!(node.orbit_size, expect);
        }
    }

    #[test]
    fn stembridge_examples() {
        let gl2 = standard_datum("gl2").unwrap();
        let alpha = stembridge_step(&gl2, &[1, 1], &[2, 0]).unwrap();
        assert_eq!(gl2.roots()[alpha], vec![1, -1]);
        assert_eq!(stembridge_step(&gl2, &[2, 0], &[2, 0]), Err(Error::NoStep));

        let gl3 = standard_datum("gl3").unwrap();
        let alpha = stembridge_step(&gl3, &[1, 1, 1], &[2, 1, 0]).unwrap();
        // The highest root comes first in the fixed enumeration and works here.
        assert_eq!(gl3.roots()[alpha], vec![1, 0, -1]);
        // Brute-force check that it is the first valid root.
        for i in gl3.positive_roots() {
            if i == alpha {
                break;
            }
            let stepped: Vec<i64> =
                [1, 1, 1].iter().zip(&gl3.coroots()[i]).map(|(a, b)| a + b).collect();
            let delta: Vec<i64> = [2, 1, 0].iter().zip(&stepped).map(|(a, b)| a - b).collect();
            assert!(!gl3.cone_leq_int(&delta));
        }
    }

    #[test]
    fn frob_orbit_step_examples() {
        let tw = split("gl2");
        assert_eq!(frob_orbit_step(&tw, &[1, 1], &[2, 0]).unwrap(), vec![2, 0]);

        // Quadratic restriction with swap: the orbit of a factor-1 root has
        // size two and the step adds both coroots at once.
        let (_, twq) = quadratic_restriction_gl2();
        let next = frob_orbit_step(&twq, &[1, 1, 1, 1], &[2, 0, 2, 0]).unwrap();
        assert_eq!(next, vec![2, 0, 2, 0]);
    }

    #[test]
    fn curve_chain_examples() {
        let tw = split("gl2");
        assert_eq!(curve_chain(&tw, &[2, 0], &[2, 0]).unwrap(), vec![vec![2, 0]]);
        assert_eq!(
            curve_chain(&tw, &[1, 1], &[2, 0]).unwrap(),
            vec![vec![1, 1], vec![2, 0]]
        );
        let tw3 = split("gl3");
        assert_eq!(
            curve_chain(&tw3, &[1, 1, 1], &[2, 1, 0]).unwrap(),
            vec![vec![1, 1, 1], vec![2, 1, 0]]
        );
    }
}
