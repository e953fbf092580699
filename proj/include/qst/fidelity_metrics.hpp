#pragma once

#include "qst/excitation_engine.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qst
{

/// Pure input state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
struct BlochState
{
	double theta = 0.0;
	double phi = 0.0;

	/// Throws BadArgs outside theta in [0, pi], phi in [0, 2pi).
	static BlochState make(double theta, double phi);
	[[nodiscard]] Eigen::Vector2cd ket() const;
};

struct FidelityReport
{
	double t = 0.0;
	cplx f;
	double abs_f = 0.0;
	double gamma = 0.0;
	double fbar = 0.0;
	double fbar_corrected = 0.0;
	/// vartheta in U = diag{1, e^{-i vartheta}} applied by the receiver.
	double correction_phase = 0.0;
};

struct CorrectedFidelity
{
	double value = 0.0;
	double phase = 0.0;
};

/// Receiver qubit density matrix for channel amplitude f and input `state`.
/// |f| up to 1 + 1e-9 is clamped onto the unit circle; beyond that AmplitudeOutOfRange.
Eigen::Matrix2cd reduced_density(cplx f, const BlochState& state);

/// <phi_in| rho |phi_in> in closed form.
double fidelity(cplx f, const BlochState& state);

/// 1/2 + |f| cos(gamma)/3 + |f|^2/6.
double average_fidelity(cplx f);

/// Average fidelity after the receiver removes the phase of f: 1/2 + |f|/3 + |f|^2/6.
CorrectedFidelity corrected_average_fidelity(cplx f);

/// Sphere average of fidelity(f, .) by Gauss-Legendre in cos(theta) and a periodic
/// trapezoid in phi.
double bloch_average_quadrature(cplx f, int n_theta = 64, int n_phi = 64);

struct GaussLegendreRule
{
	std::vector<double> nodes;
	std::vector<double> weights;
};

/// n-point rule on [-1, 1].
GaussLegendreRule gauss_legendre(int n);

FidelityReport make_report(const AmplitudeRecord& rec);

} // namespace qst
