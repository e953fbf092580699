#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qst
{

enum class ErrorKind
{
	EmptyChain,
	NonFinite,
	BadSpin,
	LengthMismatch,
	BadArgs,
	UnknownPreset,
	ConvergenceFailure,
	AmplitudeOutOfRange,
	DegenerateSystem,
	NotTunable,
	DimensionCap,
	Parse,
	Io,
	InvariantViolation,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers switch on kind().
class Error : public std::runtime_error
{
public:
	Error(ErrorKind kind, const std::string& what)
		: std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
	{ }

	[[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
	ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind)
{
	switch(kind)
	{
	case ErrorKind::EmptyChain: return "EmptyChain";
	case ErrorKind::NonFinite: return "NonFinite";
	case ErrorKind::BadSpin: return "BadSpin";
	case ErrorKind::LengthMismatch: return "LengthMismatch";
	case ErrorKind::BadArgs: return "BadArgs";
	case ErrorKind::UnknownPreset: return "UnknownPreset";
	case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
	case ErrorKind::AmplitudeOutOfRange: return "AmplitudeOutOfRange";
	case ErrorKind::DegenerateSystem: return "DegenerateSystem";
	case ErrorKind::NotTunable: return "NotTunable";
	case ErrorKind::DimensionCap: return "DimensionCap";
	case ErrorKind::Parse: return "Parse";
	case ErrorKind::Io: return "Io";
	case ErrorKind::InvariantViolation: return "InvariantViolation";
	}
	return "Unknown";
}

} // namespace qst
