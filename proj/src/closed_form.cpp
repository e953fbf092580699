#include "qst/closed_form.hpp"

#include "qst/error.hpp"

#include <cmath>
#include <numbers>

namespace qst::closed_form
{

namespace
{

constexpr cplx I{0.0, 1.0};

bool is_spin_impurity_preset(PresetId id)
{
	return id == PresetId::Sec2TwoSpin || id == PresetId::Sec2ThreeSpinCenter;
}

// r = sqrt(B^2 + c2) with p = r + B and m = r - B, each formed without cancellation
// (p * m = c2).
struct Split
{
	double r = 0.0;
	double p = 0.0;
	double m = 0.0;
};

Split split(PresetId id, double B, double c2)
{
	Split out;
	out.r = std::sqrt(B * B + c2);
	if(out.r == 0.0)
	{
		throw Error(ErrorKind::DegenerateSystem, std::string(to_string(id)) + ": closed form is singular at J = B = 0");
	}
	if(B >= 0.0)
	{
		out.p = out.r + B;
		out.m = c2 / out.p;
	}
	else
	{
		out.m = out.r - B;
		out.p = c2 / out.m;
	}
	return out;
}

double sign_of(double x)
{
	return x < 0.0 ? -1.0 : 1.0;
}

} // namespace

cplx center_field_kernel(double j, double B, double t)
{
	const auto [nu, p, m] = split(PresetId::Sec3ThreeSpinCenter, B, 2.0 * j * j);
	// j^2 / (2 nu (nu -+ B)) rewritten as (nu +- B) / (4 nu).
	return p / (4.0 * nu) * std::exp(I * ((B - nu) * t / 2.0)) + m / (4.0 * nu) * std::exp(I * ((B + nu) * t / 2.0))
	     - 0.5;
}

cplx analytic_f(const PresetSystem& sys, double t)
{
	const double J = sys.J;
	const double B = sys.B;
	switch(sys.id)
	{
	case PresetId::Sec2TwoSpin:
		return -I * std::exp(I * (B * t)) * std::sin(std::numbers::sqrt2 * J * t / 2.0);
	case PresetId::Sec2ThreeSpinCenter:
	{
		const double s = std::sin(J * t / 2.0);
		return -std::exp(I * (B * t)) * (s * s);
	}
	case PresetId::Sec3TwoSpin:
	{
		const double mu = std::sqrt(B * B + J * J);
		if(mu == 0.0)
		{
			throw Error(ErrorKind::DegenerateSystem, "sec3-two-spin: J = B = 0");
		}
		return -I * std::exp(I * (B * t / 2.0)) * (J / mu) * std::sin(mu * t / 2.0);
	}
	case PresetId::Sec3ThreeSpinCenter:
		return center_field_kernel(J, B, t);
	case PresetId::Sec4ThreeSpinCenter:
		return center_field_kernel(std::numbers::sqrt2 * J, B, t);
	}
	throw Error(ErrorKind::UnknownPreset, "unhandled preset");
}

AnalyticSpectrum analytic_spectrum(const PresetSystem& sys)
{
	const double J = sys.J;
	const double B = sys.B;
	const double r2 = std::numbers::sqrt2;
	const double ir2 = 1.0 / r2;

	AnalyticSpectrum out;
	switch(sys.id)
	{
	case PresetId::Sec2TwoSpin:
		out.values.resize(3);
		out.values << 1.5 * B, 0.5 * (B + r2 * J), 0.5 * (B - r2 * J);
		out.vectors = Eigen::MatrixXd::Zero(3, 3);
		out.vectors.col(0) << 1.0, 0.0, 0.0;
		out.vectors.col(1) << 0.0, ir2, ir2;
		out.vectors.col(2) << 0.0, -ir2, ir2;
		break;
	case PresetId::Sec2ThreeSpinCenter:
		out.values.resize(4);
		out.values << 2.0 * B, B, B + J, B - J;
		out.vectors = Eigen::MatrixXd::Zero(4, 4);
		out.vectors.col(0) << 1.0, 0.0, 0.0, 0.0;
		out.vectors.col(1) << 0.0, -ir2, 0.0, ir2;
		out.vectors.col(2) << 0.0, 0.5, ir2, 0.5;
		out.vectors.col(3) << 0.0, 0.5, -ir2, 0.5;
		break;
	case PresetId::Sec3TwoSpin:
	{
		const auto [mu, p, m] = split(sys.id, B, J * J);
		const double sj = sign_of(J);
		out.values.resize(3);
		out.values << 0.5 * B, 0.5 * mu, -0.5 * mu;
		out.vectors = Eigen::MatrixXd::Zero(3, 3);
		out.vectors.col(0) << 1.0, 0.0, 0.0;
		out.vectors.col(1) << 0.0, sj * std::sqrt(m / (2.0 * mu)), std::sqrt(p / (2.0 * mu));
		out.vectors.col(2) << 0.0, sj * std::sqrt(p / (2.0 * mu)), -std::sqrt(m / (2.0 * mu));
		break;
	}
	case PresetId::Sec3ThreeSpinCenter:
	case PresetId::Sec4ThreeSpinCenter:
	{
		// Both share the structure (J, x, J) on the excitation states; the spin-1 center of
		// the second only rescales the coupling, c2 = 2 J^2 versus 4 J^2.
		const bool spin_one = sys.id == PresetId::Sec4ThreeSpinCenter;
		const auto [r, p, m] = split(sys.id, B, (spin_one ? 4.0 : 2.0) * J * J);
		const double sj = sign_of(J);
		const double e = sj * std::sqrt(p / (4.0 * r));
		const double f = sj * std::sqrt(m / (4.0 * r));
		const double vacuum = spin_one ? B : 0.5 * B;
		const double shift = spin_one ? 0.5 * B : 0.0;
		out.values.resize(4);
		out.values << vacuum, vacuum, shift + 0.5 * r, shift - 0.5 * r;
		out.vectors = Eigen::MatrixXd::Zero(4, 4);
		out.vectors.col(0) << 1.0, 0.0, 0.0, 0.0;
		out.vectors.col(1) << 0.0, -ir2, 0.0, ir2;
		out.vectors.col(2) << 0.0, e, std::sqrt(m / (2.0 * r)), e;
		out.vectors.col(3) << 0.0, f, -std::sqrt(p / (2.0 * r)), f;
		break;
	}
	}
	return out;
}

double critical_time(const PresetSystem& sys, int k)
{
	if(!is_spin_impurity_preset(sys.id))
	{
		throw Error(ErrorKind::NotTunable, std::string(to_string(sys.id)) + " has no exact critical time");
	}
	if(k < 0 || !(sys.J > 0.0))
	{
		throw Error(ErrorKind::BadArgs, "critical time needs k >= 0 and J > 0");
	}
	const double odd = 2.0 * k + 1.0;
	if(sys.id == PresetId::Sec2TwoSpin)
	{
		return odd * std::numbers::pi / (std::numbers::sqrt2 * sys.J);
	}
	return odd * std::numbers::pi / sys.J;
}

double critical_field(const PresetSystem& sys, double t_c, Parity k_parity, int l)
{
	if(!is_spin_impurity_preset(sys.id))
	{
		throw Error(ErrorKind::NotTunable,
		            std::string(to_string(sys.id)) + ": a magnetic impurity keeps |f| < 1, no field reaches unit fidelity");
	}
	if(!(t_c > 0.0) || l < 0)
	{
		throw Error(ErrorKind::BadArgs, "critical field needs t_c > 0 and l >= 0");
	}
	const double pi = std::numbers::pi;
	if(sys.id == PresetId::Sec2TwoSpin)
	{
		const double offset = k_parity == Parity::Even ? 1.0 : 3.0;
		return (4.0 * l + offset) * pi / (2.0 * t_c);
	}
	return (2.0 * l + 1.0) * pi / t_c;
}

} // namespace qst::closed_form
