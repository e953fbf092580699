#include "qst/fidelity_metrics.hpp"

#include "qst/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace qst
{

namespace
{

constexpr double kAmplitudeSlack = 1e-9;
constexpr double kBoundarySlack = 1e-12;

cplx checked_amplitude(cplx f)
{
	const double a = std::abs(f);
	if(!std::isfinite(a) || a > 1.0 + kAmplitudeSlack)
	{
		std::ostringstream os;
		os.precision(17);
		os << "|f| = " << a << " exceeds 1";
		throw Error(ErrorKind::AmplitudeOutOfRange, os.str());
	}
	return a > 1.0 ? f / a : f;
}

double clamp_unit(double v)
{
	if(v > 1.0 && v <= 1.0 + kBoundarySlack)
	{
		return 1.0;
	}
	if(v < 0.0 && v >= -kBoundarySlack)
	{
		return 0.0;
	}
	return v;
}

} // namespace

BlochState BlochState::make(double theta, double phi)
{
	if(!(theta >= 0.0 && theta <= std::numbers::pi) || !(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
	{
		throw Error(ErrorKind::BadArgs, "Bloch angles out of range");
	}
	return BlochState{theta, phi};
}

Eigen::Vector2cd BlochState::ket() const
{
	return {cplx{std::cos(theta / 2.0), 0.0}, std::polar(std::sin(theta / 2.0), phi)};
}

Eigen::Matrix2cd reduced_density(cplx f, const BlochState& state)
{
	f = checked_amplitude(f);
	const double s2 = std::pow(std::sin(state.theta / 2.0), 2);
	const double p1 = s2 * std::norm(f);
	const cplx coherence = 0.5 * std::sin(state.theta) * std::polar(1.0, state.phi) * f;

	Eigen::Matrix2cd rho;
	rho(0, 0) = 1.0 - p1;
	rho(1, 1) = p1;
	rho(1, 0) = coherence;
	rho(0, 1) = std::conj(coherence);
	return rho;
}

double fidelity(cplx f, const BlochState& state)
{
	f = checked_amplitude(f);
	const double c2 = std::pow(std::cos(state.theta / 2.0), 2);
	const double s2 = std::pow(std::sin(state.theta / 2.0), 2);
	const double a = std::abs(f);
	// |f| cos(gamma) is Re f, which is well defined at f = 0.
	return clamp_unit(c2 * (1.0 - a * a * s2 + 2.0 * s2 * f.real()) + a * a * s2 * s2);
}

double average_fidelity(cplx f)
{
	f = checked_amplitude(f);
	return clamp_unit((3.0 + 2.0 * f.real() + std::norm(f)) / 6.0);
}

CorrectedFidelity corrected_average_fidelity(cplx f)
{
	f = checked_amplitude(f);
	const double a = std::abs(f);
	if(a == 0.0)
	{
		return {0.5, 0.0};
	}
	double phase = std::atan2(f.imag(), f.real());
	if(phase <= -std::numbers::pi)
	{
		phase = std::numbers::pi;
	}
	return {clamp_unit((3.0 + 2.0 * a + a * a) / 6.0), phase};
}

GaussLegendreRule gauss_legendre(int n)
{
	if(n < 1)
	{
		throw Error(ErrorKind::BadArgs, "Gauss-Legendre rule needs at least one node");
	}
	// P_n(x) and P_n'(x) by the three-term recurrence.
	auto legendre = [n](double x) {
		double p0 = 1.0;
		double p1 = x;
		for(int k = 2; k <= n; ++k)
		{
			const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
			p0 = p1;
			p1 = p2;
		}
		return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
	};

	GaussLegendreRule rule;
	rule.nodes.resize(static_cast<std::size_t>(n));
	rule.weights.resize(static_cast<std::size_t>(n));
	for(int i = 0; i < (n + 1) / 2; ++i)
	{
		double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
		for(int iter = 0; iter < 100; ++iter)
		{
			const auto [p, dp] = legendre(x);
			const double dx = p / dp;
			x -= dx;
			if(std::abs(dx) < 1e-16)
			{
				break;
			}
		}
		const double dp = legendre(x).second;
		const double w = 2.0 / ((1.0 - x * x) * dp * dp);
		rule.nodes[static_cast<std::size_t>(i)] = -x;
		rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
		rule.weights[static_cast<std::size_t>(i)] = w;
		rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
	}
	if(n % 2 == 1)
	{
		rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
	}
	return rule;
}

double bloch_average_quadrature(cplx f, int n_theta, int n_phi)
{
	if(n_theta < 2 || n_phi < 2)
	{
		throw Error(ErrorKind::BadArgs, "quadrature needs at least 2x2 nodes");
	}
	const auto rule = gauss_legendre(n_theta);
	const double dphi = 2.0 * std::numbers::pi / n_phi;
	double total = 0.0;
	for(std::size_t i = 0; i < rule.nodes.size(); ++i)
	{
		const double theta = std::acos(rule.nodes[i]);
		double ring = 0.0;
		for(int j = 0; j < n_phi; ++j)
		{
			ring += fidelity(f, BlochState{theta, j * dphi});
		}
		total += rule.weights[i] * ring * dphi;
	}
	return total / (4.0 * std::numbers::pi);
}

FidelityReport make_report(const AmplitudeRecord& rec)
{
	FidelityReport report;
	report.t = rec.t;
	report.f = rec.f;
	report.abs_f = std::abs(rec.f);
	report.gamma = rec.gamma;
	report.fbar = average_fidelity(rec.f);
	const auto corrected = corrected_average_fidelity(rec.f);
	report.fbar_corrected = corrected.value;
	report.correction_phase = rec.degenerate_phase ? 0.0 : corrected.phase;
	return report;
}

} // namespace qst
