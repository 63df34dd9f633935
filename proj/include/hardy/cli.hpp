#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hardy/core.hpp"
#include "hardy/radial_function.hpp"

namespace hardy {

/// Source registry:
///   zero | const[:c] | power:e (r^{tau_- - 2 + e}) | abspower:e (r^e) |
///   sin:w (sin(w r)) | table:path (two columns r, f; linear interpolation).
RadialFunction parse_source(const std::string& spec, const HardyParams& p);

/// Comma-separated list of numbers, "mu0", "mu0+x" and "grid" (the default
/// sweep for the dimension). Duplicates are dropped, order is kept.
std::vector<double> parse_mu_list(const std::string& spec, int dim);

/// Comma-separated positive reals.
std::vector<double> parse_real_list(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);

/// Entry point shared by the executable and the tests. Returns the exit code:
/// 0 pass, 1 assertion violation, 2 numeric or configuration failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* tool_version();

}  // namespace hardy
