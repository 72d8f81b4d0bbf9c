#pragma once

#include <iosfwd>
#include <string>

#include "esqpt/spectra.hpp"

namespace esqpt {

inline constexpr int kSignalFormatVersion = 1;

/// CSV: a "# esqpt-signal v1 ..." header carrying the source point and method,
/// then columns t,re,im,abs with round-trip precision.
void write_signal_csv(std::ostream& out, const DecoherenceSignal& signal);
DecoherenceSignal read_signal_csv(std::istream& in);

/// JSON record {format, version, method, source{alpha,omega,lambda,N}, t, re, im}.
std::string signal_to_json(const DecoherenceSignal& signal);
DecoherenceSignal signal_from_json(const std::string& text);

/// Library version string.
std::string version();

}  // namespace esqpt
