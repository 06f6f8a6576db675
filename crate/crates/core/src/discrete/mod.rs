//! Discrete exterior calculus on icospheres: the Hodge Laplacian on
//! 1-cochains and a check of its lowest eigenvalue against `q(n−q)α`.

pub mod dec;
pub mod mesh;
pub mod spectrum;

use serde::{Deserialize, Serialize};

pub use dec::{CsrMatrix, DecOperators};
pub use mesh::{icosphere, TriMesh};
pub use spectrum::{cluster_multiplicity, lowest_eigenvalues, spectrum_csv};

use crate::error::Result;
use crate::weitzenboeck::{eigen_bound_check, BoundCheck, BoundTag};

/// Eigenvalues at or below this count as harmonic.
pub const HARMONIC_TOL: f64 = 1e-8;
/// Relative gap separating eigenvalue clusters.
pub const CLUSTER_GAP: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereSpectrum {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    /// The requested lowest eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues at or below [`HARMONIC_TOL`] among those computed.
    pub harmonic_count: usize,
    /// Lowest eigenvalue above the harmonic threshold.
    pub lambda_first: f64,
    pub first_cluster_multiplicity: usize,
    pub total_dual_area: f64,
    pub check: BoundCheck,
}

/// Hodge Laplacian on 1-cochains of `mesh`, as the symmetric matrix
/// `⋆1^{-1/2} A ⋆1^{-1/2}`.
pub fn hodge1_matrix(mesh: &TriMesh) -> Result<CsrMatrix> {
    Ok(DecOperators::new(mesh)?.hodge1_symmetric())
}

/// Computes the `k` lowest eigenvalues of the 1-form Hodge Laplacian on a
/// unit-sphere mesh and checks the first non-harmonic one against `q(n−q)α`
/// with `n = 2, q = 1, α = 1`.
pub fn verify_form_bound(mesh: &TriMesh, k: usize) -> Result<SphereSpectrum> {
    let ops = DecOperators::new(mesh)?;
    let s = ops.hodge1_symmetric();
    // enough values to see past any harmonic ones and the first cluster
    let wanted = k.max(8).min(s.rows());
    let values = lowest_eigenvalues(&s, wanted)?;
    let harmonic_count = values.iter().filter(|v| **v <= HARMONIC_TOL).count();
    let lambda_first = values.iter().copied().find(|v| *v > HARMONIC_TOL).unwrap_or(f64::NAN);
    let provenance = format!(
        "icosphere V={} E={} F={};n=2;q=1;alpha=1",
        mesh.vertices().len(),
        mesh.edges().len(),
        mesh.triangles().len()
    );
    let check = eigen_bound_check(2, 1, 1.0, BoundTag::Sec4Eigen, lambda_first, provenance)?;
    Ok(SphereSpectrum {
        vertices: mesh.vertices().len(),
        edges: mesh.edges().len(),
        triangles: mesh.triangles().len(),
        eigenvalues: values[..k.min(values.len())].to_vec(),
        harmonic_count,
        lambda_first,
        first_cluster_multiplicity: cluster_multiplicity(&values, HARMONIC_TOL, CLUSTER_GAP),
        total_dual_area: ops.total_dual_area(),
        check,
    })
}
