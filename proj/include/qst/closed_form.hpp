#pragma once

#include "qst/chain_model.hpp"
#include "qst/excitation_engine.hpp"

#include <Eigen/Dense>

namespace qst::closed_form
{

struct PresetSystem
{
	PresetId id = PresetId::Sec2TwoSpin;
	double J = 1.0;
	double B = 0.0;
};

/// Closed-form transfer amplitude f(t) of a preset system, written out independently
/// of the spectral engine. Throws DegenerateSystem when a closed-form denominator
/// vanishes, which happens only at J = B = 0 for the magnetic-impurity systems.
cplx analytic_f(const PresetSystem& sys, double t);

/// Shared form of the two centre-field three-site systems, with nu = sqrt(B^2 + 2 j^2):
/// f = j^2 e^{i(B-nu)t/2} / (2 nu (nu-B)) + j^2 e^{i(B+nu)t/2} / (2 nu (nu+B)) - 1/2.
/// The spin-1 centre maps onto it with j = sqrt(2) J.
cplx center_field_kernel(double j, double B, double t);

/// Eigenpairs of the Hamiltonian on {|0>, |1>, ..., |N>} (vacuum first).
/// Columns of `vectors` are the eigenstates; values are in the order the closed forms
/// list them (vacuum, then the excitation levels).
struct AnalyticSpectrum
{
	Eigen::VectorXd values;
	Eigen::MatrixXd vectors;
};

AnalyticSpectrum analytic_spectrum(const PresetSystem& sys);

enum class Parity
{
	Even,
	Odd,
};

/// Uniform field B_c that makes f(t_c) = 1 at a critical time t_c of a spin-impurity
/// preset. Two-spin: (4l+1)pi/(2t_c) for even k, (4l+3)pi/(2t_c) for odd k.
/// Three-spin centre: (2l+1)pi/t_c (parity ignored).
/// Throws NotTunable for the magnetic-impurity presets.
double critical_field(const PresetSystem& sys, double t_c, Parity k_parity, int l);

/// Critical time (2k+1)pi/(sqrt2 J) or (2k+1)pi/J of the spin-impurity presets.
double critical_time(const PresetSystem& sys, int k);

} // namespace qst::closed_form
