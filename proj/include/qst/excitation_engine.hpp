#pragma once

#include "qst/chain_model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qst
{

using cplx = std::complex<double>;

/// The Hamiltonian restricted to the vacuum plus single-excitation sector.
/// Site n's excitation lowers its m from s to s-1, so:
///   vacuum_energy = sum_i B_i s_i
///   onsite[n]     = vacuum_energy - B_n
///   hopping[i]    = J_i sqrt(s_i s_{i+1})
struct SingleExcitationHamiltonian
{
	double vacuum_energy = 0.0;
	std::vector<double> onsite;
	std::vector<double> hopping;

	[[nodiscard]] std::size_t size() const noexcept { return onsite.size(); }
	/// Largest absolute entry of the excitation block.
	[[nodiscard]] double max_abs_entry() const;
};

/// Eigenpairs of the excitation block: values ascending, vectors stored as columns.
struct EigenSystem
{
	Eigen::VectorXd values;
	Eigen::MatrixXd vectors;

	[[nodiscard]] double spread() const { return values.size() ? values(values.size() - 1) - values(0) : 0.0; }
};

struct AmplitudeRecord
{
	double t = 0.0;
	cplx f0;
	/// fn[n] = <n+1| exp(-iHt) |1>, zero-based.
	std::vector<cplx> fn;
	/// conj(f0) * fn.back()
	cplx f;
	/// arg f in (-pi, pi]; 0 when |f| <= 1e-12.
	double gamma = 0.0;
	bool degenerate_phase = false;
};

SingleExcitationHamiltonian reduce(const ChainSpec& spec);

/// Implicit-shift QL on the symmetric tridiagonal block. Throws ConvergenceFailure
/// after 50 sweeps on a single eigenvalue.
EigenSystem eigensolve(const SingleExcitationHamiltonian& h);

/// Eigenvalues only (no vector accumulation); O(N^2), suitable for very long chains.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal, std::span<const double> offdiagonal);

AmplitudeRecord amplitudes(const SingleExcitationHamiltonian& h, const EigenSystem& eig, double t);

/// One shared eigensolve, one record per grid point.
std::vector<AmplitudeRecord> time_series(const ChainSpec& spec, std::span<const double> t_grid);

/// Full (N+1)-dimensional propagator in the basis {|0>, |1>, ..., |N>}.
Eigen::MatrixXcd propagator(const SingleExcitationHamiltonian& h, const EigenSystem& eig, double t);

/// Fast evaluator of f(t) = conj(f0) f_N and its time derivative, for search loops.
/// f(t) = sum_k w_k exp(-i (e_k - E0) t) with w_k = v_k[N] v_k[1].
class TransferAmplitude
{
public:
	TransferAmplitude(const SingleExcitationHamiltonian& h, const EigenSystem& eig);
	explicit TransferAmplitude(const ChainSpec& spec);

	[[nodiscard]] cplx value(double t) const;
	[[nodiscard]] cplx derivative(double t) const;

	/// Spread of the excitation spectrum (highest minus lowest eigenvalue).
	[[nodiscard]] double spread() const noexcept { return spread_; }
	/// Largest |e_k - E0|; bounds the frequencies present in f itself.
	[[nodiscard]] double max_frequency() const noexcept { return max_frequency_; }

private:
	std::vector<double> weights_;
	std::vector<double> frequencies_;
	double spread_ = 0.0;
	double max_frequency_ = 0.0;
};

} // namespace qst
