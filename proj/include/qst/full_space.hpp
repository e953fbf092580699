#pragma once

#include "qst/chain_model.hpp"
#include "qst/fidelity_metrics.hpp"

#include <Eigen/Dense>

#include <vector>

namespace qst::full_space
{

/// Upper bound on prod_i (2 s_i + 1) accepted by this module.
inline constexpr std::size_t kDimensionCap = 4096;

/// Tensor-product basis layout: site 1 is the slowest-varying index, and local
/// index a on a spin-s site carries m = s - a (a = 0 is the ground state |0>).
class BasisLayout
{
public:
	/// Throws DimensionCap.
	explicit BasisLayout(const ChainSpec& spec);

	[[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
	[[nodiscard]] const std::vector<int>& local_dims() const noexcept { return dims_; }
	[[nodiscard]] std::size_t stride(std::size_t site) const { return strides_[site]; }
	/// Index of the state with only `site` (zero-based) lowered to m = s - 1.
	[[nodiscard]] std::size_t single_excitation(std::size_t site) const { return strides_[site]; }

private:
	std::vector<int> dims_;
	std::vector<std::size_t> strides_;
	std::size_t dimension_ = 1;
};

struct FullStateVector
{
	Eigen::VectorXcd amplitudes;
	std::vector<int> local_dims;

	[[nodiscard]] double norm() const { return amplitudes.norm(); }
};

/// sum_i J_i (S^x_i S^x_{i+1} + S^y_i S^y_{i+1}) + sum_i B_i S^z_i with standard spin-s
/// matrices. Real symmetric. Throws DimensionCap.
Eigen::MatrixXd full_hamiltonian(const ChainSpec& spec);

/// Diagonal of S^z_tot in the product basis.
Eigen::VectorXd total_sz_diagonal(const ChainSpec& spec);

/// max |[H, S^z_tot]|_{ij}.
double sz_commutator_norm(const ChainSpec& spec);

/// Restriction of `h` to {|0>, |1>, ..., |N>} (vacuum first, then site excitations).
Eigen::MatrixXd excitation_block(const ChainSpec& spec, const Eigen::MatrixXd& h);

/// cos(theta/2)|0...0> + e^{i phi} sin(theta/2)|1_1 0...0>.
FullStateVector initial_state(const ChainSpec& spec, const BlochState& state);

/// Dense eigendecomposition of the full Hamiltonian, reusable across times and inputs.
class Evolver
{
public:
	explicit Evolver(const ChainSpec& spec);

	[[nodiscard]] FullStateVector evolve(const FullStateVector& psi0, double t) const;
	/// Reduced density matrix of the last site (dimension 2 s_N + 1).
	[[nodiscard]] Eigen::MatrixXcd receiver_density(const BlochState& state, double t) const;
	/// receiver_density projected onto its {m = s, s - 1} block.
	[[nodiscard]] Eigen::Matrix2cd receiver_qubit(const BlochState& state, double t) const;

	[[nodiscard]] const ChainSpec& spec() const noexcept { return spec_; }

private:
	ChainSpec spec_;
	BasisLayout layout_;
	Eigen::VectorXd energies_;
	Eigen::MatrixXd modes_;
};

/// Evolves the input exactly in the full space and traces out all but the last site.
/// Throws DimensionCap, or InvariantViolation if the projected block has lost trace (> 1e-10).
Eigen::Matrix2cd evolve_and_trace(const ChainSpec& spec, const BlochState& state, double t);

/// |F_full - F_subspace| for one input state and time.
double cross_check(const ChainSpec& spec, const BlochState& state, double t);

} // namespace qst::full_space
