use num_complex::Complex64;

use crate::error::{Error, FamilyInvariant, Result};
use crate::hermitian::{fix_phase, CMatrix, CVector, HermitianMatrix};
use crate::inertia::{relative_tol_from, Inertia};

/// Base point of the family `H(K) = S + K* Ω K`: the operator `S`, the weight `Ω`,
/// the unperturbed coupling `K₀` with `K₀ f = 0`, and the eigenpair `(λ°, f)` shared
/// by `S` and `H₀ = H(K₀)`.
#[derive(Clone, Debug)]
pub struct PerturbationFamily {
    s: HermitianMatrix,
    omega: HermitianMatrix,
    k0: CMatrix,
    f: CVector,
    lambda0: f64,
}

fn invalid(invariant: FamilyInvariant, detail: impl Into<String>) -> Error {
    Error::InvalidFamily {
        invariant,
        detail: detail.into(),
    }
}

impl PerturbationFamily {
    /// Validates every base-point invariant; `rel_tol` governs the inertia checks.
    pub fn new(
        s: HermitianMatrix,
        omega: HermitianMatrix,
        k0: CMatrix,
        f: CVector,
        lambda0: f64,
        rel_tol: f64,
    ) -> Result<Self> {
        let n = s.dim();
        let k = omega.dim();
        if k0.nrows() != k || k0.ncols() != n || f.len() != n {
            return Err(invalid(
                FamilyInvariant::Dimensions,
                format!(
                    "S is {n}x{n}, Omega is {k}x{k}, K0 is {}x{}, f has length {}",
                    k0.nrows(),
                    k0.ncols(),
                    f.len()
                ),
            ));
        }
        let norm_err = (f.norm() - 1.0).abs();
        if norm_err > 1e-12 {
            return Err(invalid(
                FamilyInvariant::UnitEigenvector,
                format!("| |f| - 1 | = {norm_err:e}"),
            ));
        }
        let sf = (s.matrix() * &f - f.scale(lambda0)).norm();
        if sf > 1e-10 * s.norm().max(1.0) {
            return Err(invalid(
                FamilyInvariant::EigenvectorOfS,
                format!("|S f - lambda0 f| = {sf:e}"),
            ));
        }
        let kf = (&k0 * &f).norm();
        if kf > 1e-10 * k0.norm().max(1.0) {
            return Err(invalid(
                FamilyInvariant::AnnihilatedByK0,
                format!("|K0 f| = {kf:e}"),
            ));
        }
        let om = Inertia::relative(&omega, rel_tol);
        if om.zero != 0 {
            return Err(invalid(
                FamilyInvariant::OmegaInvertible,
                format!("Omega has {} zero eigenvalue(s)", om.zero),
            ));
        }
        let family = PerturbationFamily {
            s,
            omega,
            k0,
            f,
            lambda0,
        };
        let shifted = family.h0().shifted(lambda0).eig();
        let tol = relative_tol_from(&shifted, rel_tol);
        let nullity = shifted.values.iter().filter(|v| v.abs() <= tol).count();
        if nullity != 1 {
            return Err(invalid(
                FamilyInvariant::SimpleInH0,
                format!("lambda0 has multiplicity {nullity} in H0"),
            ));
        }
        Ok(family)
    }

    /// Builds the family with `f` chosen inside the `λ°`-eigenspace of `S` as the unit
    /// vector annihilated by `K₀` (the eigenvector itself when `λ°` is simple in `S`).
    pub fn with_derived_eigenvector(
        s: HermitianMatrix,
        omega: HermitianMatrix,
        k0: CMatrix,
        lambda0: f64,
        rel_tol: f64,
    ) -> Result<Self> {
        let eig = s.shifted(lambda0).eig();
        let tol = relative_tol_from(&eig, rel_tol);
        let cols: Vec<usize> = (0..eig.values.len())
            .filter(|&j| eig.values[j].abs() <= tol)
            .collect();
        let f = match cols.len() {
            0 => {
                let j = eig.nearest(0.0);
                return Err(invalid(
                    FamilyInvariant::EigenvectorOfS,
                    format!(
                        "lambda0 is not an eigenvalue of S (nearest is {})",
                        eig.values[j] + lambda0
                    ),
                ));
            }
            1 => eig.vector(cols[0]),
            _ => {
                // pick the direction in the eigenspace killed by K0
                let basis = CMatrix::from_fn(s.dim(), cols.len(), |i, j| eig.vectors[(i, cols[j])]);
                if k0.ncols() != s.dim() {
                    return Err(invalid(FamilyInvariant::Dimensions, "K0 has wrong column count"));
                }
                let restricted = &k0 * &basis;
                let gram = HermitianMatrix::hermitize(restricted.adjoint() * &restricted);
                let ge = gram.eig();
                &basis * ge.vector(0)
            }
        };
        let f = fix_phase(&f);
        let f = f.unscale(f.norm());
        Self::new(s, omega, k0, f, lambda0, rel_tol)
    }

    pub fn s(&self) -> &HermitianMatrix {
        &self.s
    }

    pub fn omega(&self) -> &HermitianMatrix {
        &self.omega
    }

    pub fn k0(&self) -> &CMatrix {
        &self.k0
    }

    pub fn f(&self) -> &CVector {
        &self.f
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    /// Dimension of the space `S` acts on.
    pub fn n(&self) -> usize {
        self.s.dim()
    }

    /// Dimension of the auxiliary space `Ω` acts on.
    pub fn k(&self) -> usize {
        self.omega.dim()
    }

    /// `H(K) = S + K* Ω K`.
    pub fn assemble(&self, k: &CMatrix) -> Result<HermitianMatrix> {
        if k.nrows() != self.k() || k.ncols() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "K is {}x{}, expected {}x{}",
                k.nrows(),
                k.ncols(),
                self.k(),
                self.n()
            )));
        }
        let pert = k.adjoint() * self.omega.matrix() * k;
        Ok(HermitianMatrix::hermitize(self.s.matrix() + pert))
    }

    /// `H₀ = S + K₀* Ω K₀`.
    pub fn h0(&self) -> HermitianMatrix {
        self.assemble(&self.k0).expect("K0 dimensions validated at construction")
    }

    /// `K₀ + Σ tⱼ Vⱼ`.
    pub fn displaced(&self, directions: &[CMatrix], coefficients: &[f64]) -> CMatrix {
        let mut k = self.k0.clone();
        for (v, &t) in directions.iter().zip(coefficients) {
            k += v.map(|z| z * Complex64::new(t, 0.0));
        }
        k
    }
}

/// `H(K) = S + K* Ω K` for the family's `S` and `Ω`.
pub fn assemble_h(fam: &PerturbationFamily, k: &CMatrix) -> Result<HermitianMatrix> {
    fam.assemble(k)
}
