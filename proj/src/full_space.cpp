#include "qst/full_space.hpp"

#include "qst/error.hpp"
#include "qst/excitation_engine.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qst::full_space
{

namespace
{

// <a-1| S^+ |a> on a spin with 2s = twice, where m = s - a.
double raising(int twice, int a)
{
	const double s = 0.5 * twice;
	const double m = s - a;
	return std::sqrt(s * (s + 1.0) - m * (m + 1.0));
}

// <a+1| S^- |a>.
double lowering(int twice, int a)
{
	const double s = 0.5 * twice;
	const double m = s - a;
	return std::sqrt(s * (s + 1.0) - m * (m - 1.0));
}

std::vector<int> decode(std::size_t index, const BasisLayout& layout)
{
	const auto& dims = layout.local_dims();
	std::vector<int> digits(dims.size());
	for(std::size_t site = 0; site < dims.size(); ++site)
	{
		digits[site] = static_cast<int>((index / layout.stride(site)) % static_cast<std::size_t>(dims[site]));
	}
	return digits;
}

} // namespace

BasisLayout::BasisLayout(const ChainSpec& spec)
{
	const auto sites = spec.sites();
	dims_.reserve(sites.size());
	for(const auto& site : sites)
	{
		dims_.push_back(site.spin.local_dim());
		dimension_ *= static_cast<std::size_t>(site.spin.local_dim());
		if(dimension_ > kDimensionCap)
		{
			throw Error(ErrorKind::DimensionCap,
			            "full Hilbert space exceeds " + std::to_string(kDimensionCap) + " states");
		}
	}
	strides_.assign(dims_.size(), 1);
	for(std::size_t site = dims_.size() - 1; site-- > 0;)
	{
		strides_[site] = strides_[site + 1] * static_cast<std::size_t>(dims_[site + 1]);
	}
}

Eigen::MatrixXd full_hamiltonian(const ChainSpec& spec)
{
	const BasisLayout layout(spec);
	const auto sites = spec.sites();
	const auto couplings = spec.couplings();
	const auto dim = static_cast<Eigen::Index>(layout.dimension());

	Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
	for(Eigen::Index col = 0; col < dim; ++col)
	{
		const auto digits = decode(static_cast<std::size_t>(col), layout);
		double diagonal = 0.0;
		for(std::size_t i = 0; i < sites.size(); ++i)
		{
			diagonal += sites[i].field * (sites[i].spin.value() - digits[i]);
		}
		h(col, col) = diagonal;

		// J/2 S^+_i S^-_{i+1}; its transpose is the S^-_i S^+_{i+1} half.
		for(std::size_t i = 0; i + 1 < sites.size(); ++i)
		{
			const int twice_i = sites[i].spin.twice();
			const int twice_j = sites[i + 1].spin.twice();
			if(digits[i] == 0 || digits[i + 1] == twice_j)
			{
				continue;
			}
			const double element
				= 0.5 * couplings[i] * raising(twice_i, digits[i]) * lowering(twice_j, digits[i + 1]);
			const auto row = static_cast<Eigen::Index>(static_cast<std::size_t>(col) - layout.stride(i)
			                                           + layout.stride(i + 1));
			h(row, col) += element;
			h(col, row) += element;
		}
	}
	return h;
}

Eigen::VectorXd total_sz_diagonal(const ChainSpec& spec)
{
	const BasisLayout layout(spec);
	const auto sites = spec.sites();
	Eigen::VectorXd sz(static_cast<Eigen::Index>(layout.dimension()));
	for(Eigen::Index k = 0; k < sz.size(); ++k)
	{
		const auto digits = decode(static_cast<std::size_t>(k), layout);
		double m = 0.0;
		for(std::size_t i = 0; i < sites.size(); ++i)
		{
			m += sites[i].spin.value() - digits[i];
		}
		sz(k) = m;
	}
	return sz;
}

double sz_commutator_norm(const ChainSpec& spec)
{
	const Eigen::MatrixXd h = full_hamiltonian(spec);
	const Eigen::VectorXd sz = total_sz_diagonal(spec);
	const Eigen::MatrixXd commutator = h * sz.asDiagonal() - sz.asDiagonal() * h;
	return commutator.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd excitation_block(const ChainSpec& spec, const Eigen::MatrixXd& h)
{
	const BasisLayout layout(spec);
	const std::size_t n = spec.size();
	std::vector<Eigen::Index> index(n + 1);
	index[0] = 0;
	for(std::size_t site = 0; site < n; ++site)
	{
		index[site + 1] = static_cast<Eigen::Index>(layout.single_excitation(site));
	}
	Eigen::MatrixXd block(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
	for(std::size_t r = 0; r <= n; ++r)
	{
		for(std::size_t c = 0; c <= n; ++c)
		{
			block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = h(index[r], index[c]);
		}
	}
	return block;
}

FullStateVector initial_state(const ChainSpec& spec, const BlochState& state)
{
	const BasisLayout layout(spec);
	FullStateVector psi;
	psi.local_dims = layout.local_dims();
	psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dimension()));
	const Eigen::Vector2cd ket = state.ket();
	psi.amplitudes(0) = ket(0);
	psi.amplitudes(static_cast<Eigen::Index>(layout.single_excitation(0))) = ket(1);
	return psi;
}

Evolver::Evolver(const ChainSpec& spec) : spec_(spec), layout_(spec)
{
	const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(full_hamiltonian(spec_));
	if(solver.info() != Eigen::Success)
	{
		throw Error(ErrorKind::ConvergenceFailure, "dense eigensolver failed on the full Hamiltonian");
	}
	energies_ = solver.eigenvalues();
	modes_ = solver.eigenvectors();
}

FullStateVector Evolver::evolve(const FullStateVector& psi0, double t) const
{
	Eigen::VectorXcd coeffs = modes_.transpose().cast<cplx>() * psi0.amplitudes;
	for(Eigen::Index k = 0; k < coeffs.size(); ++k)
	{
		coeffs(k) *= std::polar(1.0, -energies_(k) * t);
	}
	FullStateVector psi;
	psi.local_dims = psi0.local_dims;
	psi.amplitudes = modes_.cast<cplx>() * coeffs;
	return psi;
}

Eigen::MatrixXcd Evolver::receiver_density(const BlochState& state, double t) const
{
	const auto psi = evolve(initial_state(spec_, state), t);
	const auto d = static_cast<Eigen::Index>(layout_.local_dims().back());
	const Eigen::Index rest = psi.amplitudes.size() / d;
	// Last site is the fastest index, so reshaping puts it on the rows.
	const Eigen::Map<const Eigen::MatrixXcd> grid(psi.amplitudes.data(), d, rest);
	return grid * grid.adjoint();
}

Eigen::Matrix2cd Evolver::receiver_qubit(const BlochState& state, double t) const
{
	const Eigen::MatrixXcd rho = receiver_density(state, t);
	const Eigen::Matrix2cd block = rho.topLeftCorner(2, 2);
	const double lost = std::abs(block.trace().real() - 1.0);
	if(lost > 1e-10)
	{
		throw Error(ErrorKind::InvariantViolation, "receiver population left the {m = s, s - 1} block");
	}
	return block;
}

Eigen::Matrix2cd evolve_and_trace(const ChainSpec& spec, const BlochState& state, double t)
{
	return Evolver(spec).receiver_qubit(state, t);
}

double cross_check(const ChainSpec& spec, const BlochState& state, double t)
{
	const Eigen::Matrix2cd rho = evolve_and_trace(spec, state, t);
	const Eigen::Vector2cd ket = state.ket();
	const double full = (ket.adjoint() * rho * ket)(0, 0).real();

	const auto h = reduce(spec);
	const auto rec = amplitudes(h, eigensolve(h), t);
	return std::abs(full - fidelity(rec.f, state));
}

} // namespace qst::full_space
