//! Builders for the standard example data, the Weil-restriction construction,
//! and the JSON file format for data and elements.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::affine_weyl::ExtendedAffineElement;
use crate::error::Error;
use crate::frobenius::FrobeniusTwist;
use crate::matrix::IntMat;
use crate::root_system::{reflect_covector, reflect_vector, AffineWeylDatum, FiniteWeylElement};
use crate::Result;

/// Generate the full root system from simple (root, coroot) pairs by closing
/// under the simple reflections, and order it: positive roots by descending
/// height (ties lexicographic), then their negatives in the mirrored order.
fn close_and_order(
    rank: usize,
    simples: &[(Vec<i64>, Vec<i64>)],
) -> (Vec<Vec<i64>>, Vec<Vec<i64>>, Vec<usize>) {
    // Track the decomposition over the simple roots alongside each pair.
    let mut known: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = simples
        .iter()
        .enumerate()
        .map(|(i, (r, c))| {
            let mut coeffs = vec![0i64; simples.len()];
            coeffs[i] = 1;
            (r.clone(), c.clone(), coeffs)
        })
        .collect();
    let mut frontier: Vec<usize> = (0..known.len()).collect();
    while let Some(idx) = frontier.pop() {
        let (r, c, coeffs) = known[idx].clone();
        for (i, (sr, sc)) in simples.iter().enumerate() {
            let nr = reflect_covector(&r, sr, sc);
            if known.iter().any(|(kr, _, _)| *kr == nr) {
                continue;
            }
            let nc = reflect_vector(&c, sr, sc);
            let mut ncoeffs = coeffs.clone();
            let pairing: i64 = r.iter().zip(sc).map(|(a, b)| a * b).sum();
            ncoeffs[i] -= pairing;
            known.push((nr, nc, ncoeffs));
            frontier.push(known.len() - 1);
        }
    }
    let mut positives: Vec<(Vec<i64>, Vec<i64>, i64)> = known
        .iter()
        .filter(|(_, _, coeffs)| coeffs.iter().all(|&x| x >= 0))
        .map(|(r, c, coeffs)| (r.clone(), c.clone(), coeffs.iter().sum()))
        .collect();
    positives.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for (r, c, _) in &positives {
        roots.push(r.clone());
        coroots.push(c.clone());
    }
    for (r, c, _) in &positives {
        roots.push(r.iter().map(|x| -x).collect());
        coroots.push(c.iter().map(|x| -x).collect());
    }
    let simple_indices = simples
        .iter()
        .map(|(r, _)| roots.iter().position(|x| x == r).expect("simple root in closure"))
        .collect();
    let _ = rank;
    (roots, coroots, simple_indices)
}

fn build(name: &str, rank: usize, simples: Vec<(Vec<i64>, Vec<i64>)>) -> Result<Arc<AffineWeylDatum>> {
    let (roots, coroots, simple_indices) = close_and_order(rank, &simples);
    AffineWeylDatum::new(name, rank, roots, coroots, simple_indices)
}

fn unit(rank: usize, i: usize, sign: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[i] = sign;
    v
}

/// The standard split data: `gl(n)`, `sl(n)`, `pgl(n)` (n ≥ 2) and `gsp(4)`.
/// Kind strings accept both `gl3` and `gl(3)`.
pub fn standard_datum(kind: &str) -> Result<Arc<AffineWeylDatum>> {
    let norm: String = kind
        .to_ascii_lowercase()
        .chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .collect();
    let (family, num) = norm
        .find(|c: char| c.is_ascii_digit())
        .map(|i| norm.split_at(i))
        .ok_or_else(|| Error::UnsupportedKind(kind.into()))?;
    let n: usize = num.parse().map_err(|_| Error::UnsupportedKind(kind.into()))?;
    match family {
        "gl" if n >= 2 => {
            let simples = (0..n - 1)
                .map(|i| {
                    let mut r = vec![0i64; n];
                    r[i] = 1;
                    r[i + 1] = -1;
                    (r.clone(), r)
                })
                .collect();
            build(&norm, n, simples)
        }
        "sl" if n >= 2 => {
            // Λ = coroot lattice in the basis of simple coroots; the simple
            // roots are the columns of the A_{n-1} Cartan matrix.
            let rank = n - 1;
            let simples = (0..rank)
                .map(|j| {
                    let mut r = vec![0i64; rank];
                    r[j] = 2;
                    if j > 0 {
                        r[j - 1] = -1;
                    }
                    if j + 1 < rank {
                        r[j + 1] = -1;
                    }
                    (r, unit(rank, j, 1))
                })
                .collect();
            build(&norm, rank, simples)
        }
        "pgl" if n >= 2 => {
            // Λ = coweight lattice; the simple coroots are the rows of the
            // Cartan matrix, the simple roots the dual basis.
            let rank = n - 1;
            let simples = (0..rank)
                .map(|j| {
                    let mut c = vec![0i64; rank];
                    c[j] = 2;
                    if j > 0 {
                        c[j - 1] = -1;
                    }
                    if j + 1 < rank {
                        c[j + 1] = -1;
                    }
                    (unit(rank, j, 1), c)
                })
                .collect();
            build(&norm, rank, simples)
        }
        "gsp" if n == 4 => {
            // Λ = ℤ³ with coordinates (a₁, a₂, c): the cocharacter
            // t ↦ diag(t^{a₁}, t^{a₂}, t^{c−a₂}, t^{c−a₁}).
            let simples = vec![
                (vec![1, -1, 0], vec![1, -1, 0]),
                (vec![0, 2, -1], vec![0, 1, 0]),
            ];
            build("gsp4", 3, simples)
        }
        _ => Err(Error::UnsupportedKind(kind.into())),
    }
}

/// Quasi-split unitary twist of a gl(n) datum: ς(λ) = −reverse(λ), τ_σ = id.
pub fn unitary_twist(datum: &Arc<AffineWeylDatum>) -> Result<FrobeniusTwist> {
    let n = datum.rank();
    let mut m = IntMat::zero(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = -1;
    }
    FrobeniusTwist::new(datum.clone(), m, None)
}

/// The combinatorial shadow of Res_{K/F} H for K/F with unramified degree-f
/// part: the f-fold product datum with Frobenius rotating the factors and
/// applying the input twist on the wrapped-around factor.
pub fn restriction_of_scalars(
    datum: &Arc<AffineWeylDatum>,
    twist: &FrobeniusTwist,
    f: usize,
    rotation_twist: Option<&ExtendedAffineElement>,
) -> Result<(Arc<AffineWeylDatum>, FrobeniusTwist)> {
    if f == 0 {
        return Err(Error::InvalidDatum("restriction degree must be at least 1".into()));
    }
    let r = datum.rank();
    let rank = f * r;
    let nroots = datum.roots().len();
    let mut roots = Vec::with_capacity(f * nroots);
    let mut coroots = Vec::with_capacity(f * nroots);
    let mut simple_indices = Vec::new();
    for b in 0..f {
        for (root, coroot) in datum.roots().iter().zip(datum.coroots()) {
            let mut nr = vec![0i64; rank];
            let mut nc = vec![0i64; rank];
            nr[b * r..(b + 1) * r].copy_from_slice(root);
            nc[b * r..(b + 1) * r].copy_from_slice(coroot);
            roots.push(nr);
            coroots.push(nc);
        }
        for &k in datum.simple_indices() {
            simple_indices.push(b * nroots + k);
        }
    }
    let name = format!("res{}({})", f, datum.name());
    let product = AffineWeylDatum::new(name, rank, roots, coroots, simple_indices)?;

    // ς': (λ₀, …, λ_{f−1}) ↦ (ς(λ_{f−1}), λ₀, …, λ_{f−2}).
    let mut linear = IntMat::zero(rank, rank);
    for i in 0..r {
        for j in 0..r {
            linear[(i, (f - 1) * r + j)] = twist.linear_part()[(i, j)];
        }
    }
    for b in 1..f {
        for i in 0..r {
            linear[(b * r + i, (b - 1) * r + i)] = 1;
        }
    }
    // τ': the input conjugation part embedded in factor 0.
    let tau = twist.omega_part();
    let mut translation = vec![0i64; rank];
    translation[..r].copy_from_slice(tau.translation());
    let mut fin = IntMat::identity(rank);
    for i in 0..r {
        for j in 0..r {
            fin[(i, j)] = tau.finite_part().matrix()[(i, j)];
        }
    }
    let mut omega = ExtendedAffineElement::new(
        product.clone(),
        translation,
        FiniteWeylElement::from_matrix(fin),
    );
    if let Some(extra) = rotation_twist {
        omega = extra.multiply(&omega)?;
    }
    let omega = if omega.length() == 0 && omega.translation().iter().all(|&x| x == 0)
        && omega.finite_part().is_identity()
    {
        None
    } else {
        Some(omega)
    };
    let twist = FrobeniusTwist::new(product.clone(), linear, omega)?;
    Ok((product, twist))
}

/// The quadratic restriction of split GL₂ with factor swap, used as a fixture
/// throughout the test suite.
pub fn quadratic_restriction_gl2() -> (Arc<AffineWeylDatum>, FrobeniusTwist) {
    let gl2 = standard_datum("gl2").expect("gl2 datum");
    let split = FrobeniusTwist::split(gl2.clone());
    restriction_of_scalars(&gl2, &split, 2, None).expect("restriction of gl2")
}

/// GL₂ with the inner twist by τ (ς = id, τ_σ = the length-zero element with
/// κ̃ = 1). This is the non-quasi-split fixture with no μ-ordinary class.
pub fn inner_twisted_gl2() -> (Arc<AffineWeylDatum>, FrobeniusTwist) {
    let gl2 = standard_datum("gl2").expect("gl2 datum");
    let tau = crate::affine_weyl::omega_component(&ExtendedAffineElement::translation_element(
        gl2.clone(),
        &[1, 0],
    ));
    let tw = FrobeniusTwist::new(gl2.clone(), IntMat::identity(2), Some(tau))
        .expect("inner twist of gl2");
    (gl2, tw)
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

/// Finite part of an element on disk: a matrix, or a permutation p meaning
/// the basis map e_i ↦ e_(p\[i\]).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FinitePartRepr {
    Permutation(Vec<usize>),
    Matrix(Vec<Vec<i64>>),
}

/// Serialized element: {"translation": [...], "finite_part": matrix-or-permutation}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRepr {
    pub translation: Vec<i64>,
    pub finite_part: FinitePartRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaRepr {
    pub linear_part: Vec<Vec<i64>>,
    pub omega_part: Option<ElementRepr>,
}

/// The on-disk datum format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumFile {
    pub name: String,
    pub lattice_rank: usize,
    pub roots: Vec<Vec<i64>>,
    pub coroots: Vec<Vec<i64>>,
    pub simple_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaRepr>,
}

fn matrix_to_rows(m: &IntMat) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn rows_to_matrix(rows: &[Vec<i64>]) -> Result<IntMat> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidDatum("matrix rows of unequal length".into()));
    }
    Ok(IntMat::new(n, n, rows.iter().flatten().copied().collect()))
}

pub fn element_to_repr(w: &ExtendedAffineElement) -> ElementRepr {
    ElementRepr {
        translation: w.translation().to_vec(),
        finite_part: FinitePartRepr::Matrix(matrix_to_rows(w.finite_part().matrix())),
    }
}

pub fn element_from_repr(
    datum: &Arc<AffineWeylDatum>,
    repr: &ElementRepr,
) -> Result<ExtendedAffineElement> {
    let rank = datum.rank();
    if repr.translation.len() != rank {
        return Err(Error::InvalidDatum("element translation of wrong rank".into()));
    }
    let mat = match &repr.finite_part {
        FinitePartRepr::Matrix(rows) => rows_to_matrix(rows)?,
        FinitePartRepr::Permutation(p) => {
            if p.len() != rank || p.iter().any(|&i| i >= rank) {
                return Err(Error::InvalidDatum("bad permutation".into()));
            }
            let mut m = IntMat::zero(rank, rank);
            for (i, &pi) in p.iter().enumerate() {
                m[(pi, i)] = 1;
            }
            m
        }
    };
    Ok(ExtendedAffineElement::new(
        datum.clone(),
        repr.translation.clone(),
        FiniteWeylElement::from_matrix(mat),
    ))
}

/// Serialize a datum (and optionally its twist) to the file representation.
pub fn datum_to_file(datum: &AffineWeylDatum, twist: Option<&FrobeniusTwist>) -> DatumFile {
    DatumFile {
        name: datum.name().to_string(),
        lattice_rank: datum.rank(),
        roots: datum.roots().to_vec(),
        coroots: datum.coroots().to_vec(),
        simple_indices: datum.simple_indices().to_vec(),
        sigma: twist.map(|tw| SigmaRepr {
            linear_part: matrix_to_rows(tw.linear_part()),
            omega_part: if tw.omega_part().translation().iter().all(|&x| x == 0)
                && tw.omega_part().finite_part().is_identity()
            {
                None
            } else {
                Some(element_to_repr(tw.omega_part()))
            },
        }),
    }
}

/// Validate and build a datum (and twist, defaulting to split) from the file
/// representation.
pub fn datum_from_file(file: &DatumFile) -> Result<(Arc<AffineWeylDatum>, FrobeniusTwist)> {
    let datum = AffineWeylDatum::new(
        file.name.clone(),
        file.lattice_rank,
        file.roots.clone(),
        file.coroots.clone(),
        file.simple_indices.clone(),
    )?;
    let twist = match &file.sigma {
        None => FrobeniusTwist::split(datum.clone()),
        Some(s) => {
            let linear = {
                if s.linear_part.len() != file.lattice_rank {
                    return Err(Error::InvalidDatum("sigma linear part of wrong rank".into()));
                }
                rows_to_matrix(&s.linear_part)?
            };
            let omega = match &s.omega_part {
                None => None,
                Some(repr) => Some(element_from_repr(&datum, repr)?),
            };
            FrobeniusTwist::new(datum.clone(), linear, omega)?
        }
    };
    Ok((datum, twist))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl2_datum_shape() {
        let d = standard_datum("gl2").unwrap();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.roots(), &[vec![1, -1], vec![-1, 1]]);
        assert_eq!(d.coroots(), &[vec![1, -1], vec![-1, 1]]);
    }

    #[test]
    fn sl2_datum_shape() {
        let d = standard_datum("sl(2)").unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.roots(), &[vec![2], vec![-2]]);
        assert_eq!(d.coroots(), &[vec![1], vec![-1]]);
    }

    #[test]
    fn gl3_positive_roots_by_descending_height() {
        let d = standard_datum("gl3").unwrap();
        let pos: Vec<_> = d.positive_roots().collect();
        assert_eq!(pos.len(), 3);
        // Highest root first in the fixed enumeration.
        assert_eq!(d.roots()[pos[0]], vec![1, 0, -1]);
        assert_eq!(d.highest_roots(), &[pos[0]]);
    }

    #[test]
    fn gsp4_datum_validates() {
        let d = standard_datum("gsp4").unwrap();
        assert_eq!(d.rank(), 3);
        assert_eq!(d.positive_roots().count(), 4);
        assert_eq!(d.components().len(), 1);
        // The highest root is 2α₁+α₂ = 2e₁−c.
        assert_eq!(d.roots()[d.highest_roots()[0]], vec![2, 0, -1]);
    }

    #[test]
    fn pgl2_datum_shape() {
        let d = standard_datum("pgl2").unwrap();
        assert_eq!(d.roots(), &[vec![1], vec![-1]]);
        assert_eq!(d.coroots(), &[vec![2], vec![-2]]);
    }

    #[test]
    fn unsupported_kinds_error() {
        assert!(standard_datum("gl1").is_err());
        assert!(standard_datum("gsp6").is_err());
        assert!(standard_datum("e8").is_err());
    }

    #[test]
    fn unitary_twist_has_order_two() {
        let d = standard_datum("gl3").unwrap();
        let tw = unitary_twist(&d).unwrap();
        assert_eq!(tw.order_sigma0(), 2);
        // σ₀ preserves the dominant chamber by construction; just touch it.
        assert!(tw.chamber_restorer().is_identity());
    }

    #[test]
    fn restriction_examples() {
        let gl2 = standard_datum("gl2").unwrap();
        let split = FrobeniusTwist::split(gl2.clone());
        let (d1, t1) = restriction_of_scalars(&gl2, &split, 1, None).unwrap();
        assert_eq!(d1.rank(), 2);
        assert!(t1.linear_part().is_identity());

        let (d2, t2) = quadratic_restriction_gl2();
        assert_eq!(d2.rank(), 4);
        assert_eq!(t2.order_sigma0(), 2);

        let gl3 = standard_datum("gl3").unwrap();
        let unit = unitary_twist(&gl3).unwrap();
        let (_, t3) = restriction_of_scalars(&gl3, &unit, 2, None).unwrap();
        assert_eq!(t3.order_sigma0(), 4);
    }

    #[test]
    fn datum_json_roundtrip() {
        let (d, tw) = quadratic_restriction_gl2();
        let file = datum_to_file(&d, Some(&tw));
        let text = serde_json::to_string(&file).unwrap();
        let parsed: DatumFile = serde_json::from_str(&text).unwrap();
        let (d2, tw2) = datum_from_file(&parsed).unwrap();
        assert_eq!(*d, *d2);
        assert_eq!(tw.linear_part(), tw2.linear_part());
    }

    #[test]
    fn element_repr_accepts_permutations() {
        let d = standard_datum("gl2").unwrap();
        let repr = ElementRepr {
            translation: vec![1, 0],
            finite_part: FinitePartRepr::Permutation(vec![1, 0]),
        };
        let w = element_from_repr(&d, &repr).unwrap();
        assert_eq!(w.length(), 0); // this is τ
    }
}
