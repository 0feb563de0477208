#pragma once

#include <cstdint>
#include <vector>

#include "mubest/tensor_algebra.hpp"

// Brute-force reference implementations. They share no code with the library
// beyond the matrix type and favour obviousness over speed.
namespace oracle {

using mubest::ComplexMatrix;
using mubest::ComplexVector;

// Kronecker product by explicit index arithmetic.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

// e_i in C^d.
ComplexVector basis_vector(int d, int i);

// Permutation operator assembled column by column from product basis vectors:
// W (e_{i_1} ⊗ ... ⊗ e_{i_t}) = e_{i_{σ⁻¹(1)}} ⊗ ... ⊗ e_{i_{σ⁻¹(t)}}.
ComplexMatrix permutation_operator(const std::vector<int>& sigma, int d, int t);

// (1/t!) Σ_σ W_σ with σ enumerated by std::next_permutation.
ComplexMatrix symmetric_projector(int d, int t);

// tr over the leading factors of dimension `lead`, by four nested loops.
ComplexMatrix partial_trace_leading(const ComplexMatrix& m, int lead, int kept);

// (N+1)! tr_{1..N}[P_{N+1} (A ⊗ 1)] with the product formed explicitly.
ComplexMatrix q_operator(const ComplexMatrix& effect, int copies, int d);

// Largest eigenvalue by power iteration on a shifted Hermitian matrix.
double largest_eigenvalue(const ComplexMatrix& h);

// (1/K²) Σ_{j,k} |<ψ_j|ψ_k>|^{2t} by two plain loops over columns.
double frame_potential(const ComplexMatrix& columns, int t);

// Gradient of Φ_t with respect to conj(amplitudes), by central differences of
// the real and imaginary parts: ½(∂/∂Re + i ∂/∂Im).
ComplexMatrix finite_difference_gradient(const ComplexMatrix& columns, int t, double h);

// Random complex matrix with entries uniform in the unit square, seeded.
ComplexMatrix random_matrix(int rows, int cols, std::uint64_t seed);
ComplexMatrix random_hermitian(int n, std::uint64_t seed);
ComplexVector random_unit_vector(int d, std::uint64_t seed);

std::uint64_t binomial(int n, int k);

}  // namespace oracle
