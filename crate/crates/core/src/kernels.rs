//! Kernels: the bimodules `E_i^(r) 1_k`, `F_i^(r) 1_k`, `O_Delta`, `O_T`, `O_S`.
//!
//! A kernel from `A_k` to `A_l` is a [`Bimodule`] with left ring `A_k`.
//! Kernels whose target weight has a negative entry are zero; constructors
//! return `None` for them.

use crate::algebra::{coarsening, Decomposer, InvariantRing};
use crate::bimodule::{convolve, Bimodule};
use crate::field::Field;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;

pub type Kernel<F> = Bimodule<F>;

/// `<k, alpha_i> = k_{i+1} - k_i` (1-based `i`).
pub fn pairing(k: &[u32], i: usize) -> i64 {
    assert!(
        i >= 1 && i < k.len(),
        "index {i} out of range for {} strands",
        k.len()
    );
    k[i] as i64 - k[i - 1] as i64
}

/// `k + r alpha_i`, or `None` if an entry would become negative.
pub fn shift_weight(k: &[u32], i: usize, r: i64) -> Option<Vec<u32>> {
    let mut out = k.to_vec();
    let a = k[i - 1] as i64 - r;
    let b = k[i] as i64 + r;
    if a < 0 || b < 0 {
        return None;
    }
    out[i - 1] = a as u32;
    out[i] = b as u32;
    Some(out)
}

/// Bimodule `O_{A_fine}{shift}` over the two coarsenings of `fine`.
pub fn structured<F: Field>(
    fine: &[u32],
    left_groups: &[usize],
    right_groups: &[usize],
    shift: i64,
) -> Kernel<F> {
    let dec = Decomposer::<F>::new(fine, left_groups);
    let rmap = coarsening::<F>(fine, right_groups);
    let r = dec.rank();
    let action = rmap
        .images
        .iter()
        .map(|img| {
            let mut y = PolyMatrix::zero(r, r);
            for (b, basis) in dec.basis.iter().enumerate() {
                for (c, coeff) in dec.decompose(&img.mul(basis)).into_iter().enumerate() {
                    y.set(b, c, coeff);
                }
            }
            y
        })
        .collect();
    Bimodule {
        left: dec.map.source.clone(),
        right: rmap.source.clone(),
        degrees: dec.basis_degrees.iter().map(|d| d - shift).collect(),
        action,
        label: format!("O{fine:?}"),
    }
}

/// The identity kernel `O_Delta` on `A_k`.
pub fn kernel_identity<F: Field>(k: &[u32]) -> Kernel<F> {
    let ring = InvariantRing::new(k);
    Bimodule {
        left: ring.clone(),
        right: ring.clone(),
        degrees: vec![0],
        action: (0..ring.nvars())
            .map(|v| PolyMatrix::from_fn(1, 1, |_, _| Poly::var(v)))
            .collect(),
        label: "1".into(),
    }
}

/// `E_i^(r) 1_k`, from `A_k` to `A_{k + r alpha_i}`.
pub fn kernel_e<F: Field>(k: &[u32], i: usize, r: u32) -> Option<Kernel<F>> {
    if r == 0 {
        return Some(kernel_identity(k));
    }
    let (ki, kj) = (k[i - 1], k[i]);
    if ki < r {
        return None;
    }
    let mut fine = k[..i - 1].to_vec();
    fine.extend([ki - r, r, kj]);
    fine.extend_from_slice(&k[i + 1..]);
    let (lg, rg) = merge_groups(k.len(), i, true);
    let m = structured(&fine, &lg, &rg, (r * (ki - r)) as i64);
    Some(m.with_label(format!("E{i}^({r})")))
}

/// `F_i^(r) 1_k`, from `A_k` to `A_{k - r alpha_i}`.
pub fn kernel_f<F: Field>(k: &[u32], i: usize, r: u32) -> Option<Kernel<F>> {
    if r == 0 {
        return Some(kernel_identity(k));
    }
    let (ki, kj) = (k[i - 1], k[i]);
    if kj < r {
        return None;
    }
    let mut fine = k[..i - 1].to_vec();
    fine.extend([ki, r, kj - r]);
    fine.extend_from_slice(&k[i + 1..]);
    let (lg, rg) = merge_groups(k.len(), i, false);
    let m = structured(&fine, &lg, &rg, (r * (kj - r)) as i64);
    Some(m.with_label(format!("F{i}^({r})")))
}

/// Groupings of the `n + 1` fine blocks: one side merges blocks `(i, i+1)`,
/// the other `(i+1, i+2)` (1-based).
fn merge_groups(n: usize, i: usize, e: bool) -> (Vec<usize>, Vec<usize>) {
    let first = groups_with_pair(n, i - 1);
    let second = groups_with_pair(n, i);
    if e {
        (first, second)
    } else {
        (second, first)
    }
}

/// Groups covering `n + 1` fine blocks, pairing fine blocks `p` and `p + 1`.
fn groups_with_pair(n: usize, p: usize) -> Vec<usize> {
    let mut g = vec![1; n];
    g[p] = 2;
    g
}

/// `O_T` on strands `i, i+1` of colour 1: the swap bimodule.
pub fn kernel_t<F: Field>(k: &[u32], i: usize) -> Kernel<F> {
    assert!(
        k[i - 1] == 1 && k[i] == 1,
        "O_T needs two strands of colour 1"
    );
    let mut m = kernel_identity::<F>(k);
    let ring = InvariantRing::new(k);
    let (a, b) = (ring.var_index(i - 1, 1), ring.var_index(i, 1));
    m.action.swap(a, b);
    m.label = format!("T{i}");
    m
}

/// `O_S = F_i E_i <-1>`-type kernel on strands `i, i+1` of colour 1:
/// `k[x,y] (x)_{k[x,y]^S2} k[x,y]`.
pub fn kernel_s<F: Field>(k: &[u32], i: usize) -> Kernel<F> {
    assert!(
        k[i - 1] == 1 && k[i] == 1,
        "O_S needs two strands of colour 1"
    );
    let f = kernel_f::<F>(k, i, 1).expect("nonzero");
    let mid = shift_weight(k, i, -1).expect("nonzero");
    let e = kernel_e::<F>(&mid, i, 1).expect("nonzero");
    convolve(&f, &e)
        .expect("rings match")
        .shifted(-1)
        .with_label(format!("S{i}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    type K = Kernel<Rational>;

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&[1, 1], 1), 0);
        assert_eq!(pairing(&[2, 1], 1), -1);
        assert_eq!(pairing(&[0, 3], 1), 3);
    }

    #[test]
    fn e_on_one_one() {
        let e: K = kernel_e(&[1, 1], 1, 1).unwrap();
        assert_eq!(e.left.colours(), &[1, 1]);
        assert_eq!(e.right.colours(), &[0, 2]);
        assert_eq!(e.degrees, vec![0]);
        assert!(e.check());
        let f: K = kernel_f(&[1, 1], 1, 1).unwrap();
        assert_eq!(f.right.colours(), &[2, 0]);
        assert!(kernel_e::<Rational>(&[0, 2], 1, 1).is_none());
    }

    #[test]
    fn s_kernel_series() {
        let s: K = kernel_s(&[1, 1], 1);
        assert!(s.check());
        let mut d = s.degrees.clone();
        d.sort();
        assert_eq!(d, vec![0, 2]);
    }

    #[test]
    fn triangle_maps_compose_to_zero() {
        let t: K = kernel_t(&[1, 1], 1);
        let s: K = kernel_s(&[1, 1], 1);
        let id: K = kernel_identity(&[1, 1]);
        let a = t.shifted(-2).hom_space(&s, 0);
        let b = s.hom_space(&id, 0);
        assert_eq!((a.len(), b.len()), (1, 1));
        assert!(a[0].mul(&b[0]).is_zero());
    }
}
