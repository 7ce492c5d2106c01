//! Block partitions, generalized Schur complements and the Haynsworth inertia identities.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, HermitianMatrix};
use crate::inertia::{inertia, pinv, pinv_from_eigen, Inertia};

/// `max ‖Bv‖/‖B‖` over kernel vectors `v` of `D` must not exceed this for `Ker D ⊂ Ker B`.
pub const KERNEL_CONDITION_TOL: f64 = 1e-8;

/// Splits `{0..n-1}` into the `A` block (`first`) and the `D` block (`second`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    first: Vec<usize>,
    second: Vec<usize>,
}

impl BlockPartition {
    pub fn new(n: usize, first: Vec<usize>, second: Vec<usize>) -> Result<Self> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidPartition("both blocks must be nonempty".into()));
        }
        let mut seen = vec![false; n];
        for &i in first.iter().chain(second.iter()) {
            if i >= n {
                return Err(Error::InvalidPartition(format!("index {i} out of range 0..{n}")));
            }
            if seen[i] {
                return Err(Error::InvalidPartition(format!("index {i} appears twice")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidPartition("blocks do not cover all indices".into()));
        }
        Ok(BlockPartition { first, second })
    }

    /// `first` as given, `second` its ascending complement.
    pub fn with_first(n: usize, first: Vec<usize>) -> Result<Self> {
        let second = (0..n).filter(|i| !first.contains(i)).collect();
        Self::new(n, first, second)
    }

    /// Leading `k` indices form the first block.
    pub fn leading(n: usize, k: usize) -> Result<Self> {
        Self::new(n, (0..k).collect(), (k..n).collect())
    }

    pub fn swapped(&self) -> Self {
        BlockPartition {
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }

    pub fn n(&self) -> usize {
        self.first.len() + self.second.len()
    }

    fn check(&self, m: &HermitianMatrix) -> Result<()> {
        if self.n() != m.dim() {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} indices, matrix has dimension {}",
                self.n(),
                m.dim()
            )));
        }
        Ok(())
    }
}

/// `M = (A B; B* D)` in the ordering given by a partition.
#[derive(Clone, Debug)]
pub struct Blocks {
    pub a: HermitianMatrix,
    pub b: CMatrix,
    pub d: HermitianMatrix,
}

pub fn blocks(m: &HermitianMatrix, p: &BlockPartition) -> Result<Blocks> {
    p.check(m)?;
    Ok(Blocks {
        a: m.principal(p.first()),
        b: m.submatrix(p.first(), p.second()),
        d: m.principal(p.second()),
    })
}

/// Largest `‖Bv‖/‖B‖` over orthonormal kernel vectors `v` of `D` (zero when `B = 0` or
/// `D` is invertible at `tol`).
pub fn kernel_condition_ratio(d: &HermitianMatrix, b: &CMatrix, tol: f64) -> f64 {
    let bn = b.norm();
    if bn == 0.0 {
        return 0.0;
    }
    let eig = d.eig();
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() <= tol)
        .map(|(k, _)| (b * eig.vectors.column(k)).norm() / bn)
        .fold(0.0, f64::max)
}

pub fn kernel_condition_holds(d: &HermitianMatrix, b: &CMatrix, tol: f64) -> bool {
    kernel_condition_ratio(d, b, tol) <= KERNEL_CONDITION_TOL
}

fn complement(a: &HermitianMatrix, b: &CMatrix, d: &HermitianMatrix, tol: f64) -> HermitianMatrix {
    let dp = pinv_from_eigen(&d.eig(), tol);
    HermitianMatrix::hermitize(a.matrix() - b * dp.matrix() * b.adjoint())
}

/// `M/D = A − B D⁺ B*` with the Moore–Penrose `D⁺`.
///
/// Fails with [`Error::KernelConditionViolated`] when `Ker D ⊄ Ker B`, because the
/// complement then depends on which generalized inverse is used.
pub fn schur_complement(m: &HermitianMatrix, p: &BlockPartition, tol: f64) -> Result<HermitianMatrix> {
    let bl = blocks(m, p)?;
    let ratio = kernel_condition_ratio(&bl.d, &bl.b, tol);
    if ratio > KERNEL_CONDITION_TOL {
        return Err(Error::KernelConditionViolated { ratio });
    }
    Ok(complement(&bl.a, &bl.b, &bl.d, tol))
}

/// Same as [`schur_complement`] without the kernel-condition check.
pub fn schur_complement_unchecked(
    m: &HermitianMatrix,
    p: &BlockPartition,
    tol: f64,
) -> Result<HermitianMatrix> {
    let bl = blocks(m, p)?;
    Ok(complement(&bl.a, &bl.b, &bl.d, tol))
}

#[derive(Clone, Debug, Serialize)]
pub struct HaynsworthReport {
    pub inertia_m: Inertia,
    pub inertia_d: Inertia,
    pub inertia_schur_d: Inertia,
    pub inertia_a: Inertia,
    pub inertia_schur_a: Inertia,
    pub kernel_condition_d_holds: bool,
    pub kernel_condition_a_holds: bool,
    pub identity_primal_holds: bool,
    pub identity_dual_holds: bool,
}

impl HaynsworthReport {
    pub fn any_ambiguous(&self) -> bool {
        [
            &self.inertia_m,
            &self.inertia_d,
            &self.inertia_schur_d,
            &self.inertia_a,
            &self.inertia_schur_a,
        ]
        .iter()
        .any(|i| i.is_ambiguous())
    }
}

/// Computes all five inertias and evaluates both identities; violated hypotheses are
/// reported through the kernel-condition flags rather than raised.
pub fn haynsworth_report(m: &HermitianMatrix, p: &BlockPartition, tol: f64) -> Result<HaynsworthReport> {
    let bl = blocks(m, p)?;
    let schur_d = complement(&bl.a, &bl.b, &bl.d, tol);
    let b_adj = bl.b.adjoint();
    let schur_a = complement(&bl.d, &b_adj, &bl.a, tol);

    let inertia_m = inertia(m, tol);
    let inertia_d = inertia(&bl.d, tol);
    let inertia_schur_d = inertia(&schur_d, tol);
    let inertia_a = inertia(&bl.a, tol);
    let inertia_schur_a = inertia(&schur_a, tol);

    let identity_primal_holds = inertia_m.minus == inertia_d.minus + inertia_schur_d.minus
        && inertia_m.zero == inertia_d.zero + inertia_schur_d.zero;
    let signed = |x: usize| x as i64;
    let identity_dual_holds = signed(inertia_a.minus) - signed(inertia_d.minus)
        == signed(inertia_schur_d.minus) - signed(inertia_schur_a.minus)
        && signed(inertia_a.zero) - signed(inertia_d.zero)
            == signed(inertia_schur_d.zero) - signed(inertia_schur_a.zero);

    Ok(HaynsworthReport {
        kernel_condition_d_holds: kernel_condition_holds(&bl.d, &bl.b, tol),
        kernel_condition_a_holds: kernel_condition_holds(&bl.a, &b_adj, tol),
        inertia_m,
        inertia_d,
        inertia_schur_d,
        inertia_a,
        inertia_schur_a,
        identity_primal_holds,
        identity_dual_holds,
    })
}

/// `‖M − Q̂ diag(M/D, D) Q̂*‖_F` with `Q̂ = (I, B D⁺; 0, I)`, in the block ordering of `p`.
pub fn factorization_residual(m: &HermitianMatrix, p: &BlockPartition, tol: f64) -> Result<f64> {
    let bl = blocks(m, p)?;
    let (k, l) = (p.first().len(), p.second().len());
    let dp = pinv(&bl.d, tol);
    let schur = complement(&bl.a, &bl.b, &bl.d, tol);

    let mut q = CMatrix::identity(k + l, k + l);
    q.view_mut((0, k), (k, l)).copy_from(&(&bl.b * dp.matrix()));
    let mut mid = CMatrix::zeros(k + l, k + l);
    mid.view_mut((0, 0), (k, k)).copy_from(schur.matrix());
    mid.view_mut((k, k), (l, l)).copy_from(bl.d.matrix());

    let order: Vec<usize> = p.first().iter().chain(p.second()).copied().collect();
    let permuted = m.submatrix(&order, &order);
    Ok((permuted - &q * mid * q.adjoint()).norm())
}
