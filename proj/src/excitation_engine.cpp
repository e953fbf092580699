#include "qst/excitation_engine.hpp"

#include "qst/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace qst
{

namespace
{

constexpr double kOffdiagonalTolerance = 1e-15;
constexpr int kMaxSweepsPerEigenvalue = 50;
constexpr double kDegeneratePhase = 1e-12;

// Implicit-shift QL on a symmetric tridiagonal matrix. `diag` is overwritten with the
// eigenvalues (unsorted); `off[i]` couples i and i+1 and is destroyed. If `vectors` is
// non-null it must start as the identity and receives the eigenvectors as columns.
void implicit_ql(std::vector<double>& diag, std::vector<double>& off, Eigen::MatrixXd* vectors)
{
	const int n = static_cast<int>(diag.size());
	off.resize(static_cast<std::size_t>(n), 0.0);
	if(n > 0)
	{
		off[static_cast<std::size_t>(n - 1)] = 0.0;
	}
	auto d = [&](int i) -> double& { return diag[static_cast<std::size_t>(i)]; };
	auto e = [&](int i) -> double& { return off[static_cast<std::size_t>(i)]; };

	for(int l = 0; l < n; ++l)
	{
		int sweeps = 0;
		int m = l;
		do
		{
			for(m = l; m < n - 1; ++m)
			{
				const double scale = std::abs(d(m)) + std::abs(d(m + 1));
				if(std::abs(e(m)) <= kOffdiagonalTolerance * scale
				   || std::abs(e(m)) < std::numeric_limits<double>::min())
				{
					break;
				}
			}
			if(m == l)
			{
				break;
			}
			if(sweeps++ == kMaxSweepsPerEigenvalue)
			{
				throw Error(ErrorKind::ConvergenceFailure,
				            "tridiagonal QL exceeded " + std::to_string(kMaxSweepsPerEigenvalue)
				                + " sweeps at eigenvalue " + std::to_string(l));
			}

			double g = (d(l + 1) - d(l)) / (2.0 * e(l));
			double r = std::hypot(g, 1.0);
			g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
			double s = 1.0;
			double c = 1.0;
			double p = 0.0;
			bool deflated = false;
			for(int i = m - 1; i >= l; --i)
			{
				const double f = s * e(i);
				const double b = c * e(i);
				r = std::hypot(f, g);
				e(i + 1) = r;
				if(r == 0.0)
				{
					// Underflow: the matrix has split, restart this eigenvalue.
					d(i + 1) -= p;
					e(m) = 0.0;
					deflated = true;
					break;
				}
				s = f / r;
				c = g / r;
				g = d(i + 1) - p;
				r = (d(i) - g) * s + 2.0 * c * b;
				p = s * r;
				d(i + 1) = g + p;
				g = c * r - b;
				if(vectors != nullptr)
				{
					auto& z = *vectors;
					for(Eigen::Index k = 0; k < z.rows(); ++k)
					{
						const double zf = z(k, i + 1);
						z(k, i + 1) = s * z(k, i) + c * zf;
						z(k, i) = c * z(k, i) - s * zf;
					}
				}
			}
			if(deflated)
			{
				continue;
			}
			d(l) -= p;
			e(l) = g;
			e(m) = 0.0;
		} while(m != l);
	}
}

} // namespace

double SingleExcitationHamiltonian::max_abs_entry() const
{
	double best = 0.0;
	for(const double x : onsite)
	{
		best = std::max(best, std::abs(x));
	}
	for(const double x : hopping)
	{
		best = std::max(best, std::abs(x));
	}
	return best;
}

SingleExcitationHamiltonian reduce(const ChainSpec& spec)
{
	const auto sites = spec.sites();
	const auto couplings = spec.couplings();

	SingleExcitationHamiltonian h;
	for(const auto& site : sites)
	{
		h.vacuum_energy += site.field * site.spin.value();
	}
	h.onsite.reserve(sites.size());
	for(const auto& site : sites)
	{
		h.onsite.push_back(h.vacuum_energy - site.field);
	}
	h.hopping.reserve(couplings.size());
	for(std::size_t i = 0; i < couplings.size(); ++i)
	{
		// <m_i = s_i - 1, m_j = s_j| S_i^- S_j^+ |m_i = s_i, m_j = s_j - 1> = 2 sqrt(s_i s_j),
		// and J (SxSx + SySy) = J/2 (S+S- + S-S+).
		h.hopping.push_back(couplings[i] * std::sqrt(sites[i].spin.value() * sites[i + 1].spin.value()));
	}
	return h;
}

EigenSystem eigensolve(const SingleExcitationHamiltonian& h)
{
	const auto n = static_cast<Eigen::Index>(h.size());
	std::vector<double> diag = h.onsite;
	std::vector<double> off = h.hopping;
	Eigen::MatrixXd vectors = Eigen::MatrixXd::Identity(n, n);
	implicit_ql(diag, off, &vectors);

	std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
	std::iota(order.begin(), order.end(), Eigen::Index{0});
	std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
		return diag[static_cast<std::size_t>(a)] < diag[static_cast<std::size_t>(b)];
	});

	EigenSystem eig;
	eig.values.resize(n);
	eig.vectors.resize(n, n);
	for(Eigen::Index k = 0; k < n; ++k)
	{
		const auto src = order[static_cast<std::size_t>(k)];
		eig.values(k) = diag[static_cast<std::size_t>(src)];
		eig.vectors.col(k) = vectors.col(src);
	}
	return eig;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diagonal, std::span<const double> offdiagonal)
{
	if(!diagonal.empty() && offdiagonal.size() + 1 != diagonal.size())
	{
		throw Error(ErrorKind::LengthMismatch, "off-diagonal must have one entry fewer than the diagonal");
	}
	std::vector<double> diag(diagonal.begin(), diagonal.end());
	std::vector<double> off(offdiagonal.begin(), offdiagonal.end());
	implicit_ql(diag, off, nullptr);
	std::sort(diag.begin(), diag.end());
	return diag;
}

AmplitudeRecord amplitudes(const SingleExcitationHamiltonian& h, const EigenSystem& eig, double t)
{
	const auto n = eig.values.size();
	AmplitudeRecord rec;
	rec.t = t;
	rec.f0 = std::polar(1.0, -h.vacuum_energy * t);
	rec.fn.assign(static_cast<std::size_t>(n), cplx{0.0, 0.0});

	std::vector<cplx> phases(static_cast<std::size_t>(n));
	for(Eigen::Index k = 0; k < n; ++k)
	{
		phases[static_cast<std::size_t>(k)] = std::polar(1.0, -eig.values(k) * t);
	}
	for(Eigen::Index site = 0; site < n; ++site)
	{
		cplx sum{0.0, 0.0};
		for(Eigen::Index k = 0; k < n; ++k)
		{
			sum += eig.vectors(site, k) * eig.vectors(0, k) * phases[static_cast<std::size_t>(k)];
		}
		rec.fn[static_cast<std::size_t>(site)] = sum;
	}

	// Phase-referenced directly against the vacuum energy, avoiding a product of two
	// rapidly rotating phases at large E0 t.
	cplx f{0.0, 0.0};
	for(Eigen::Index k = 0; k < n; ++k)
	{
		f += eig.vectors(n - 1, k) * eig.vectors(0, k) * std::polar(1.0, -(eig.values(k) - h.vacuum_energy) * t);
	}
	rec.f = f;
	if(std::abs(f) <= kDegeneratePhase)
	{
		rec.gamma = 0.0;
		rec.degenerate_phase = true;
	}
	else
	{
		rec.gamma = std::arg(f);
		if(rec.gamma <= -std::numbers::pi)
		{
			rec.gamma = std::numbers::pi;
		}
	}
	return rec;
}

std::vector<AmplitudeRecord> time_series(const ChainSpec& spec, std::span<const double> t_grid)
{
	const auto h = reduce(spec);
	const auto eig = eigensolve(h);
	std::vector<AmplitudeRecord> out;
	out.reserve(t_grid.size());
	for(const double t : t_grid)
	{
		out.push_back(amplitudes(h, eig, t));
	}
	return out;
}

Eigen::MatrixXcd propagator(const SingleExcitationHamiltonian& h, const EigenSystem& eig, double t)
{
	const auto n = eig.values.size();
	Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n + 1, n + 1);
	u(0, 0) = std::polar(1.0, -h.vacuum_energy * t);
	Eigen::VectorXcd phases(n);
	for(Eigen::Index k = 0; k < n; ++k)
	{
		phases(k) = std::polar(1.0, -eig.values(k) * t);
	}
	const Eigen::MatrixXcd v = eig.vectors.cast<cplx>();
	u.bottomRightCorner(n, n) = v * phases.asDiagonal() * v.transpose();
	return u;
}

TransferAmplitude::TransferAmplitude(const SingleExcitationHamiltonian& h, const EigenSystem& eig)
{
	const auto n = eig.values.size();
	weights_.reserve(static_cast<std::size_t>(n));
	frequencies_.reserve(static_cast<std::size_t>(n));
	for(Eigen::Index k = 0; k < n; ++k)
	{
		const double w = eig.vectors(n - 1, k) * eig.vectors(0, k);
		const double omega = eig.values(k) - h.vacuum_energy;
		weights_.push_back(w);
		frequencies_.push_back(omega);
		max_frequency_ = std::max(max_frequency_, std::abs(omega));
	}
	spread_ = eig.spread();
}

TransferAmplitude::TransferAmplitude(const ChainSpec& spec)
	: TransferAmplitude(reduce(spec), eigensolve(reduce(spec)))
{ }

cplx TransferAmplitude::value(double t) const
{
	cplx sum{0.0, 0.0};
	for(std::size_t k = 0; k < weights_.size(); ++k)
	{
		sum += weights_[k] * std::polar(1.0, -frequencies_[k] * t);
	}
	return sum;
}

cplx TransferAmplitude::derivative(double t) const
{
	cplx sum{0.0, 0.0};
	for(std::size_t k = 0; k < weights_.size(); ++k)
	{
		sum += cplx{0.0, -frequencies_[k]} * weights_[k] * std::polar(1.0, -frequencies_[k] * t);
	}
	return sum;
}

} // namespace qst
